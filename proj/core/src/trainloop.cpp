// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#include "sscl/trainloop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

namespace sscl {
namespace {

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string fmt_lr(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.8g", v);
  return buf;
}

void append_csv_row(const std::string& path, const std::string& row) {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw DataError("cannot open metrics csv " + path);
  if (fresh)
    out << "epoch,stage,loss_total,loss_ce,loss_s,loss_u,lr,top1|acc,macc,facc,miou\n";
  out << row << '\n';
}

double mean_defined(const std::vector<std::optional<double>>& xs) {
  double sum = 0.0;
  int n = 0;
  for (const auto& x : xs)
    if (x) {
      sum += *x;
      ++n;
    }
  return n > 0 ? sum / n : 0.0;
}

}  // namespace

void TrainPlan::validate() const {
  check(cls_epochs > 0 && cls_batch > 0, "TrainPlan: invalid classification schedule");
  check(cls_lr_heads > 0.0 && cls_lr_backbone > 0.0, "TrainPlan: learning rates must be positive");
  check(seg_lr > 0.0 && seg_batch > 0, "TrainPlan: invalid segmentation schedule");
  for (int e : seg_step_epochs) check(e > 0, "TrainPlan: step epochs must be positive");
  check(pseudo_threshold > 0.0, "TrainPlan: pseudo threshold must be positive");
  check(bank_capacity > 0, "TrainPlan: bank capacity must be positive");
}

std::uint64_t TrainPlan::hash() const {
  std::ostringstream ss;
  ss << cls_epochs << '|' << cls_batch << '|' << cls_lr_heads << '|' << cls_lr_backbone;
  for (int m : cls_milestones) ss << '|' << m;
  ss << '|' << seg_lr << '|' << seg_poly_power << '|' << seg_batch;
  for (int e : seg_step_epochs) ss << '|' << e;
  ss << '|' << seg_ce_only << '|' << bank_capacity << '|' << pseudo_threshold << '|' << seed;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : ss.str()) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ---- classification ----

ClsTrainer::ClsTrainer(ClsNet* net, const ClsDataset& labeled,
                       const std::vector<Image>& unlabeled, const ClsDataset& test,
                       const LossConfig& loss_cfg, const TrainPlan& plan,
                       const AugmentationPolicy& policy)
    : net_(net),
      labeled_(labeled),
      unlabeled_(unlabeled),
      test_(test),
      loss_cfg_(loss_cfg),
      plan_(plan),
      policy_(policy),
      opt_(net->params(), {{"backbone", plan.cls_lr_backbone},
                           {"proj", plan.cls_lr_backbone},
                           {"cls_head", plan.cls_lr_heads}}),
      rng_(plan.seed ^ 0x9e3779b97f4a7c15ULL) {
  plan_.validate();
  loss_cfg_.validate();
  check(!labeled_.samples.empty(), "ClsTrainer: empty labeled set");
}

ClsStepLosses ClsTrainer::train_step(const std::vector<int>& labeled_batch) {
  ClsStepLosses losses;
  zero_grads(net_->params());

  // CE stream
  {
    std::vector<Image> views;
    std::vector<int> targets;
    for (int idx : labeled_batch) {
      views.push_back(augment(labeled_.samples[idx].image, policy_, rng_));
      targets.push_back(labeled_.samples[idx].label);
    }
    const Mat pooled = net_->backbone_forward(views);
    const Mat logits = net_->head_logits(pooled);
    Mat dlogits;
    losses.ce = cls_cross_entropy(logits, targets, &dlogits);
    net_->backbone_backward(net_->head_logits_backward(dlogits));
  }

  // class-aware contrastive stream, one anchor/positive pair per class
  if (loss_cfg_.lambda_s_cls > 0.0) {
    std::vector<int> pool_labels(labeled_.samples.size());
    for (size_t i = 0; i < labeled_.samples.size(); ++i)
      pool_labels[i] = labeled_.samples[i].label;
    const auto pairs = class_balanced_batch(pool_labels, rng_);
    if (pairs.size() >= 2) {
      const int n = static_cast<int>(pairs.size());
      // single backbone pass over anchors then positives so the combined
      // backward sees valid caches
      std::vector<Image> views;
      views.reserve(2 * n);
      EmbeddingBatch anchors, positives;
      for (const auto& [a, p] : pairs) {
        views.push_back(augment(labeled_.samples[a].image, policy_, rng_));
        anchors.labels.push_back(labeled_.samples[a].label);
      }
      for (const auto& [a, p] : pairs) {
        views.push_back(augment(labeled_.samples[p].image, policy_, rng_));
        positives.labels.push_back(labeled_.samples[p].label);
      }
      const Mat pooled = net_->backbone_forward(views);
      const Mat proj = net_->proj_s(pooled);
      anchors.rows = proj.topRows(n);
      positives.rows = proj.bottomRows(n);
      Mat da, dp;
      losses.ls = supervised_interclass_loss(anchors, positives, loss_cfg_.tau_cls,
                                             &da, &dp);
      Mat dproj(2 * n, proj.cols());
      dproj.topRows(n) = loss_cfg_.lambda_s_cls * da;
      dproj.bottomRows(n) = loss_cfg_.lambda_s_cls * dp;
      net_->backbone_backward(net_->proj_s_backward(dproj));
    }
  }

  // similarity stream on unlabeled two-views
  if (loss_cfg_.lambda_u_cls > 0.0) {
    if (unlabeled_.empty()) {
      static bool warned = false;
      if (!warned) {
        std::cerr << "warning: unlabeled pool empty, similarity stream skipped\n";
        warned = true;
      }
    } else {
      const int n = plan_.cls_batch;
      std::vector<Image> views;
      views.reserve(2 * n);
      std::vector<int> picks(n);
      for (int i = 0; i < n; ++i)
        picks[i] = std::uniform_int_distribution<int>(
            0, static_cast<int>(unlabeled_.size()) - 1)(rng_);
      for (int i = 0; i < n; ++i) {
        auto [v1, v2] = two_view(unlabeled_[picks[i]], policy_, rng_);
        views.push_back(std::move(v1));
        views.push_back(std::move(v2));
      }
      const Mat pooled = net_->backbone_forward(views);
      const Mat proj = net_->proj_u(pooled);
      Mat v1(n, proj.cols()), v2(n, proj.cols());
      for (int i = 0; i < n; ++i) {
        v1.row(i) = proj.row(2 * i);
        v2.row(i) = proj.row(2 * i + 1);
      }
      Mat d1, d2;
      losses.lu = similarity_loss(v1, v2, &d1, &d2);
      Mat dproj(2 * n, proj.cols());
      for (int i = 0; i < n; ++i) {
        dproj.row(2 * i) = loss_cfg_.lambda_u_cls * d1.row(i);
        dproj.row(2 * i + 1) = loss_cfg_.lambda_u_cls * d2.row(i);
      }
      net_->backbone_backward(net_->proj_u_backward(dproj));
    }
  }

  losses.total = combined_cls_loss(losses.ce, losses.ls, losses.lu, loss_cfg_);
  opt_.step(lr_at_epoch_cls(epoch_, 1.0, plan_.cls_milestones));
  return losses;
}

ClassificationMetrics ClsTrainer::evaluate() const {
  std::vector<int> pred, truth;
  std::vector<Image> batch;
  std::vector<int> batch_truth;
  auto flush = [&]() {
    if (batch.empty()) return;
    const auto p = cls_predict(net_, batch);
    pred.insert(pred.end(), p.begin(), p.end());
    truth.insert(truth.end(), batch_truth.begin(), batch_truth.end());
    batch.clear();
    batch_truth.clear();
  };
  for (const auto& s : test_.samples) {
    batch.push_back(s.image);
    batch_truth.push_back(s.label);
    if (batch.size() == 16) flush();
  }
  flush();
  return classification_metrics(confusion(pred, truth, test_.num_classes()));
}

void ClsTrainer::epoch_end(int epoch, const ClsStepLosses& mean_losses, double lr,
                           const std::string& csv_path) {
  const auto metrics = evaluate();
  std::ostringstream row;
  row << (epoch + 1) << ",1," << fmt6(mean_losses.total) << ',' << fmt6(mean_losses.ce)
      << ',' << fmt6(mean_losses.ls) << ',' << fmt6(mean_losses.lu) << ','
      << fmt_lr(lr) << ',' << fmt6(metrics.top1) << ','
      << fmt6(mean_defined(metrics.per_class_acc)) << ",,";
  append_csv_row(csv_path, row.str());
}

void ClsTrainer::resume_from(const std::string& checkpoint_path) {
  const auto meta = load_checkpoint(checkpoint_path, net_->params(), &opt_, nullptr);
  if (meta.task != "classify")
    throw DataError("resume: checkpoint task is '" + meta.task + "', not classify");
  if (meta.plan_hash != plan_.hash())
    throw DataError("resume: training plan differs from the checkpointed run");
  epoch_ = meta.epoch;
}

ClassificationMetrics ClsTrainer::run(const std::string& csv_path,
                                      const std::string& checkpoint_path) {
  std::vector<int> order(labeled_.samples.size());
  std::iota(order.begin(), order.end(), 0);
  for (; epoch_ < plan_.cls_epochs; ++epoch_) {
    std::shuffle(order.begin(), order.end(), rng_);
    ClsStepLosses sums;
    int steps = 0;
    for (size_t start = 0; start < order.size(); start += plan_.cls_batch) {
      const size_t end = std::min(order.size(), start + plan_.cls_batch);
      const std::vector<int> batch(order.begin() + start, order.begin() + end);
      const auto l = train_step(batch);
      sums.ce += l.ce;
      sums.ls += l.ls;
      sums.lu += l.lu;
      sums.total += l.total;
      ++steps;
    }
    ClsStepLosses means{sums.ce / steps, sums.ls / steps, sums.lu / steps,
                        sums.total / steps};
    epoch_end(epoch_, means,
              lr_at_epoch_cls(epoch_, plan_.cls_lr_heads, plan_.cls_milestones),
              csv_path);
    if (!checkpoint_path.empty())
      save_checkpoint(checkpoint_path,
                      {"classify", plan_.hash(), epoch_ + 1, 1}, net_->params(),
                      &opt_, nullptr);
  }
  return evaluate();
}

// ---- segmentation ----

SegTrainer::SegTrainer(SegNet* net, const SegDataset& train, const SegDataset& test,
                       const LossConfig& loss_cfg, const TrainPlan& plan,
                       const AugmentationPolicy& policy)
    : net_(net),
      train_(train),
      test_(test),
      loss_cfg_(loss_cfg),
      plan_(plan),
      policy_(policy),
      opt_(net->params(), {{"backbone", plan.seg_lr},
                           {"proj", plan.seg_lr},
                           {"seg_head", plan.seg_lr}}),
      bank_(loss_cfg.num_classes, net->spec().proj_dim, plan.bank_capacity),
      rng_(plan.seed ^ 0xd1b54a32d192ed03ULL) {
  plan_.validate();
  loss_cfg_.validate();
  check(!train_.samples.empty(), "SegTrainer: empty training set");
}

int SegTrainer::stage_of_epoch(int epoch) const {
  if (plan_.seg_ce_only) return 0;
  if (epoch < plan_.seg_step_epochs[0]) return 1;
  if (epoch < plan_.seg_step_epochs[0] + plan_.seg_step_epochs[1]) return 2;
  return 3;
}

Mat SegTrainer::predict_logits(int train_index) {
  const FeatBatch feat = net_->backbone_forward({train_.samples[train_index].image});
  const FeatBatch logits = net_->seg_logits(feat);
  return logits.maps[0].transpose();  // (fh*fw) x C
}

void SegTrainer::resume_from(const std::string& checkpoint_path) {
  std::optional<ClassMemoryBank> bank;
  const auto meta = load_checkpoint(checkpoint_path, net_->params(), &opt_, &bank);
  if (meta.task != "segment")
    throw DataError("resume: checkpoint task is '" + meta.task + "', not segment");
  if (meta.plan_hash != plan_.hash())
    throw DataError("resume: training plan differs from the checkpointed run");
  if (bank) bank_ = std::move(*bank);
  epoch_ = meta.epoch;
}

SegmentationMetrics SegTrainer::evaluate(FaccMode mode) const {
  return segmentation_metrics(seg_confusion(net_, test_), mode);
}

SegmentationMetrics SegTrainer::run(const std::string& csv_path,
                                    const std::string& checkpoint_path,
                                    const std::string& pseudo_dump_dir) {
  const int total_epochs =
      plan_.seg_step_epochs[0] + plan_.seg_step_epochs[1] + plan_.seg_step_epochs[2];
  const int n = static_cast<int>(train_.samples.size());
  const int batches_per_epoch = (n + plan_.seg_batch - 1) / plan_.seg_batch;
  const int input_size = train_.samples[0].image.height;
  const int fh = net_->feat_size(input_size);
  const int fw = fh;
  const int num_classes = loss_cfg_.num_classes;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (; epoch_ < total_epochs; ++epoch_) {
    const int stage = stage_of_epoch(epoch_);
    // iteration budget for polynomial annealing resets per step
    int epoch_in_stage = epoch_;
    int stage_epochs = total_epochs;
    if (stage == 2) epoch_in_stage -= plan_.seg_step_epochs[0];
    if (stage == 3) epoch_in_stage -= plan_.seg_step_epochs[0] + plan_.seg_step_epochs[1];
    if (stage == 1) stage_epochs = plan_.seg_step_epochs[0];
    if (stage == 2) stage_epochs = plan_.seg_step_epochs[1];
    if (stage == 3) stage_epochs = plan_.seg_step_epochs[2];
    const std::int64_t total_iters =
        static_cast<std::int64_t>(stage_epochs) * batches_per_epoch;

    if (stage == 3) {
      // online pseudo labels: previous epoch's masks are discarded
      std::vector<const LabelMap*> gts;
      for (const auto& s : train_.samples) gts.push_back(&s.mask);
      merged_ = refresh_pseudo_labels(
          [&](int i) {
            // nearest-upsampled feature-resolution confidence, merged at
            // image resolution
            const Mat logits = predict_logits(i);
            Mat full(static_cast<Eigen::Index>(input_size) * input_size,
                     logits.cols());
            for (int r = 0; r < input_size; ++r)
              for (int c = 0; c < input_size; ++c)
                full.row(r * input_size + c) =
                    logits.row((r * fh / input_size) * fw + (c * fw / input_size));
            return full;
          },
          gts, plan_.pseudo_threshold);
      if (!pseudo_dump_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(pseudo_dump_dir);
        for (int i = 0; i < n; ++i) {
          const std::string base = pseudo_dump_dir + "/epoch" +
                                   std::to_string(epoch_ + 1) + "_" +
                                   train_.samples[i].id;
          write_mask_pgm(base + "_merged.pgm", merged_[i].grid);
          LabelMap src;
          src.height = merged_[i].grid.height;
          src.width = merged_[i].grid.width;
          src.ids.resize(src.size());
          for (int j = 0; j < src.size(); ++j)
            src.ids[j] = static_cast<int>(merged_[i].source[j]);
          write_mask_pgm(base + "_source.pgm", src);
        }
      }
    }

    std::shuffle(order.begin(), order.end(), rng_);
    double sum_ce = 0.0, sum_ls = 0.0, sum_total = 0.0;
    double last_lr = plan_.seg_lr;
    for (int b = 0; b < batches_per_epoch; ++b) {
      const int lo = b * plan_.seg_batch;
      const int hi = std::min(n, lo + plan_.seg_batch);
      std::vector<Image> views;
      std::vector<LabelMap> gt_ds, bar_ds;
      for (int k = lo; k < hi; ++k) {
        const auto& s = train_.samples[order[k]];
        // Stage 3 augments one combined mask so ground truth and pseudo ids
        // share the sampled spatial transform: id + C marks pseudo pixels.
        LabelMap encoded = s.mask;
        if (stage == 3) {
          const auto& m = merged_[order[k]];
          for (int j = 0; j < encoded.size(); ++j)
            encoded.ids[j] = m.source[j] == LabelSource::Pseudo
                                 ? m.grid.ids[j] + num_classes
                                 : (m.source[j] == LabelSource::GroundTruth
                                        ? m.grid.ids[j]
                                        : kUnlabeled);
        }
        auto [view, mask_aug] = augment_with_mask(s.image, encoded, policy_, rng_);
        views.push_back(std::move(view));
        LabelMap gt = mask_aug, bar = mask_aug;
        for (int j = 0; j < mask_aug.size(); ++j) {
          const int v = mask_aug.ids[j];
          gt.ids[j] = (v != kUnlabeled && v < num_classes) ? v : kUnlabeled;
          bar.ids[j] = v == kUnlabeled ? kUnlabeled : v % num_classes;
        }
        gt_ds.push_back(label_downsample(gt, fh, fw));
        bar_ds.push_back(label_downsample(bar, fh, fw));
      }
      const int bsize = static_cast<int>(views.size());

      zero_grads(net_->params());
      const FeatBatch feat = net_->backbone_forward(views);
      FeatBatch d_backbone;
      d_backbone.height = fh;
      d_backbone.width = fw;
      for (int k = 0; k < bsize; ++k)
        d_backbone.maps.push_back(Mat::Zero(feat.channels(), fh * fw));

      double batch_ce = 0.0, batch_ls = 0.0;

      const bool use_contrastive = !plan_.seg_ce_only &&
                                   (stage == 1 || loss_cfg_.lambda_s_seg > 0.0);
      if (use_contrastive) {
        const FeatBatch proj = net_->proj(feat);
        // zero-norm projections carry no direction for the cosine kernel;
        // drop those elements from the contrastive path for this batch
        for (int k = 0; k < bsize; ++k) {
          LabelMap& lbl = bar_ds[k];
          for (int j = 0; j < lbl.size(); ++j)
            if (lbl.ids[j] != kUnlabeled && proj.maps[k].col(j).norm() < 1e-12)
              lbl.ids[j] = kUnlabeled;
        }
        // push current per-class means first so the very first batch already
        // has centroids, then contrast against the snapshot
        for (int k = 0; k < bsize; ++k)
          bank_.push_batch_means(to_feature_map(proj.maps[k], fh, fw), bar_ds[k]);
        const auto centroids = bank_.snapshot_centroids();
        FeatBatch d_proj;
        d_proj.height = fh;
        d_proj.width = fw;
        int eligible_imgs = 0;
        std::vector<Mat> grads(bsize);
        std::vector<double> vals(bsize, 0.0);
        std::vector<bool> ok(bsize, false);
        for (int k = 0; k < bsize; ++k) {
          Mat dfeat;
          const auto res = bank_contrastive_loss(to_feature_map(proj.maps[k], fh, fw),
                                                 bar_ds[k], centroids,
                                                 loss_cfg_.tau_seg, &dfeat);
          grads[k] = from_feature_map_grad(dfeat, net_->spec().proj_dim);
          if (!res.warmup) {
            vals[k] = res.value;
            ok[k] = true;
            ++eligible_imgs;
          }
        }
        const double weight = stage == 1 ? 1.0 : loss_cfg_.lambda_s_seg;
        for (int k = 0; k < bsize; ++k) {
          Mat g = Mat::Zero(net_->spec().proj_dim, fh * fw);
          if (ok[k] && eligible_imgs > 0) {
            g = weight / double(eligible_imgs) * grads[k];
            batch_ls += vals[k] / double(eligible_imgs);
          }
          d_proj.maps.push_back(std::move(g));
        }
        const FeatBatch d_from_proj = net_->proj_backward(d_proj);
        for (int k = 0; k < bsize; ++k) d_backbone.maps[k] += d_from_proj.maps[k];
      }

      if (stage != 1) {
        const FeatBatch logits = net_->seg_logits(feat);
        FeatBatch d_logits;
        d_logits.height = fh;
        d_logits.width = fw;
        int with_labels = 0;
        std::vector<Mat> grads(bsize);
        std::vector<double> vals(bsize, 0.0);
        std::vector<bool> ok(bsize, false);
        for (int k = 0; k < bsize; ++k) {
          Mat dlog;
          // pseudo labels feed only the contrastive path, CE sees ground truth
          const auto res =
              seg_cross_entropy(logits.maps[k].transpose(), gt_ds[k], &dlog);
          grads[k] = dlog.transpose();
          if (!res.warmup) {
            vals[k] = res.value;
            ok[k] = true;
            ++with_labels;
          }
        }
        for (int k = 0; k < bsize; ++k) {
          Mat g = Mat::Zero(num_classes, fh * fw);
          if (ok[k] && with_labels > 0) {
            g = grads[k] / double(with_labels);
            batch_ce += vals[k] / double(with_labels);
          }
          d_logits.maps.push_back(std::move(g));
        }
        const FeatBatch d_from_head = net_->seg_logits_backward(d_logits);
        for (int k = 0; k < bsize; ++k) d_backbone.maps[k] += d_from_head.maps[k];
      }

      net_->backbone_backward(d_backbone);
      const std::int64_t iter =
          static_cast<std::int64_t>(epoch_in_stage) * batches_per_epoch + b;
      const double factor =
          lr_at_iter_seg(iter, total_iters, 1.0, plan_.seg_poly_power);
      last_lr = plan_.seg_lr * factor;
      opt_.step(factor);

      sum_ce += batch_ce;
      sum_ls += batch_ls;
      sum_total += stage == 1 ? batch_ls
                              : combined_seg_loss(batch_ce, batch_ls, loss_cfg_);
    }

    const auto metrics = evaluate();
    std::ostringstream row;
    row << (epoch_ + 1) << ',' << stage << ',' << fmt6(sum_total / batches_per_epoch)
        << ',' << fmt6(sum_ce / batches_per_epoch) << ','
        << fmt6(sum_ls / batches_per_epoch) << ",," << fmt_lr(last_lr) << ','
        << fmt6(metrics.acc) << ',' << fmt6(metrics.macc) << ','
        << fmt6(metrics.facc) << ',' << fmt6(metrics.miou);
    append_csv_row(csv_path, row.str());

    if (!checkpoint_path.empty())
      save_checkpoint(checkpoint_path, {"segment", plan_.hash(), epoch_ + 1, stage},
                      net_->params(), &opt_, &bank_);
  }
  return evaluate();
}

// ---- inference helpers ----

std::vector<int> cls_predict(ClsNet* net, const std::vector<Image>& images) {
  const Mat pooled = net->backbone_forward(images);
  const Mat logits = net->head_logits(pooled);
  std::vector<int> out(images.size());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    int best = 0;
    for (int j = 1; j < logits.cols(); ++j)
      if (logits(i, j) > logits(i, best)) best = j;
    out[i] = best;
  }
  return out;
}

ConfusionMatrix seg_confusion(SegNet* net, const SegDataset& data) {
  check(!data.samples.empty(), "seg_confusion: empty dataset");
  ConfusionMatrix cm(data.num_classes);
  for (const auto& s : data.samples) {
    const FeatBatch feat = net->backbone_forward({s.image});
    const FeatBatch logits = net->seg_logits(feat);
    const int fh = logits.height, fw = logits.width;
    const LabelMap truth = label_downsample(s.mask, fh, fw);
    std::vector<int> pred(fh * fw);
    const Mat& m = logits.maps[0];
    for (int i = 0; i < fh * fw; ++i) {
      int best = 0;
      for (int c = 1; c < data.num_classes; ++c)
        if (m(c, i) > m(best, i)) best = c;
      pred[i] = best;
    }
    cm += confusion(pred, truth.ids, data.num_classes);
  }
  return cm;
}

std::vector<FeatureRow> export_cls_features(ClsNet* net, const ClsDataset& data) {
  std::vector<FeatureRow> rows;
  for (const auto& s : data.samples) {
    const Mat pooled = net->backbone_forward({s.image});
    rows.push_back({s.id, s.label, pooled.row(0).transpose()});
  }
  return rows;
}

std::vector<FeatureRow> export_seg_features(SegNet* net, const SegDataset& data,
                                            int stride) {
  check(stride >= 1, "export_seg_features: stride must be >= 1");
  std::vector<FeatureRow> rows;
  for (const auto& s : data.samples) {
    const FeatBatch feat = net->backbone_forward({s.image});
    const int fh = feat.height, fw = feat.width;
    const LabelMap labels = label_downsample(s.mask, fh, fw);
    for (int r = 0; r < fh; r += stride)
      for (int c = 0; c < fw; c += stride)
        rows.push_back({s.id + ":" + std::to_string(r) + "," + std::to_string(c),
                        labels.at(r, c), feat.maps[0].col(r * fw + c)});
  }
  return rows;
}

}  // namespace sscl
