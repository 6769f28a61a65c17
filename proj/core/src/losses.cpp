// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#include "sscl/losses.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sscl {
namespace {

// Row-normalized copy plus original norms.
Mat normalize_rows(const Mat& m, Vec* norms) {
  Mat out(m.rows(), m.cols());
  norms->resize(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double n = m.row(i).norm();
    check(n > 0.0, "zero-norm embedding at row " + std::to_string(i));
    (*norms)(i) = n;
    out.row(i) = m.row(i) / n;
  }
  return out;
}

// Pull a gradient w.r.t. the unit vector back to the raw vector:
// d/dz (z/|z|) applied to g is (g - (a·g) a) / |z| with a = z/|z|.
void denormalize_grad(const Mat& unit, const Vec& norms, Mat* grad) {
  for (Eigen::Index i = 0; i < grad->rows(); ++i) {
    const double proj = unit.row(i).dot(grad->row(i));
    grad->row(i) = (grad->row(i) - proj * unit.row(i)) / norms(i);
  }
}

double log_sum_exp(const Eigen::Ref<const Eigen::RowVectorXd>& v) {
  const double m = v.maxCoeff();
  return m + std::log((v.array() - m).exp().sum());
}

}  // namespace

double cosine_kernel(const Vec& u, const Vec& v, Vec* du, Vec* dv) {
  check(u.size() == v.size(), "cosine_kernel: dimension mismatch");
  const double nu = u.norm();
  const double nv = v.norm();
  check(nu > 0.0, "cosine_kernel: first argument has zero norm");
  check(nv > 0.0, "cosine_kernel: second argument has zero norm");
  const Vec a = u / nu;
  const Vec b = v / nv;
  const double k = a.dot(b);
  if (du) *du = (b - k * a) / nu;
  if (dv) *dv = (a - k * b) / nv;
  return k;
}

double info_nce(const Mat& anchor_views, const Mat& partner_views, double tau,
                Mat* d_anchor, Mat* d_partner) {
  const Eigen::Index n = anchor_views.rows();
  check(n == partner_views.rows(), "info_nce: batch size mismatch");
  check(anchor_views.cols() == partner_views.cols(), "info_nce: dimension mismatch");
  check(n >= 2, "info_nce: need at least 2 samples, no negatives exist");
  check(tau > 0.0, "info_nce: temperature must be positive");

  Vec na, nb;
  const Mat a = normalize_rows(anchor_views, &na);
  const Mat b = normalize_rows(partner_views, &nb);
  const Mat scores = (a * b.transpose()) / tau;  // n x n

  double loss = 0.0;
  Mat g;  // dL/dscores
  if (d_anchor || d_partner) g = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lse = log_sum_exp(scores.row(i));
    loss += lse - scores(i, i);
    if (d_anchor || d_partner) {
      g.row(i) = (scores.row(i).array() - lse).exp() / double(n);
      g(i, i) -= 1.0 / double(n);
    }
  }
  loss /= double(n);

  if (d_anchor) {
    *d_anchor = (g * b) / tau;
    denormalize_grad(a, na, d_anchor);
  }
  if (d_partner) {
    *d_partner = (g.transpose() * a) / tau;
    denormalize_grad(b, nb, d_partner);
  }
  return loss;
}

double supervised_interclass_loss(const EmbeddingBatch& anchors,
                                  const EmbeddingBatch& positives, double tau,
                                  Mat* d_anchor, Mat* d_positive) {
  check(anchors.has_labels() && positives.has_labels(),
        "supervised_interclass_loss: both batches must be labeled");
  const int n = anchors.size();
  check(n == positives.size(), "supervised_interclass_loss: batch size mismatch");
  check(n >= 2, "supervised_interclass_loss: need at least 2 classes in the batch");

  std::map<int, int> pos_row;
  for (int i = 0; i < n; ++i) {
    check(pos_row.emplace(positives.labels[i], i).second,
          "supervised_interclass_loss: duplicate category " +
              std::to_string(positives.labels[i]) + " in positives");
  }
  std::vector<int> align(n);  // anchor row -> positive row of the same class
  std::map<int, int> seen;
  for (int i = 0; i < n; ++i) {
    check(seen.emplace(anchors.labels[i], i).second,
          "supervised_interclass_loss: duplicate category " +
              std::to_string(anchors.labels[i]) + " in anchors");
    auto it = pos_row.find(anchors.labels[i]);
    check(it != pos_row.end(),
          "supervised_interclass_loss: category sets differ (missing " +
              std::to_string(anchors.labels[i]) + ")");
    align[i] = it->second;
  }

  Mat aligned(n, positives.dim());
  for (int i = 0; i < n; ++i) aligned.row(i) = positives.rows.row(align[i]);

  Mat da, dp_aligned;
  const double loss =
      info_nce(anchors.rows, aligned, tau, d_anchor ? &da : nullptr,
               d_positive ? &dp_aligned : nullptr);
  if (d_anchor) *d_anchor = std::move(da);
  if (d_positive) {
    d_positive->setZero(n, positives.dim());
    for (int i = 0; i < n; ++i) d_positive->row(align[i]) = dp_aligned.row(i);
  }
  return loss;
}

double similarity_loss(const Mat& view1, const Mat& view2, Mat* d1, Mat* d2) {
  const Eigen::Index n = view1.rows();
  check(n == view2.rows(), "similarity_loss: batch size mismatch");
  check(view1.cols() == view2.cols(), "similarity_loss: dimension mismatch");
  check(n >= 1, "similarity_loss: empty batch");

  if (d1) d1->resize(n, view1.cols());
  if (d2) d2->resize(n, view2.cols());
  double acc = 0.0;
  Vec gu, gv;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec u = view1.row(i);
    const Vec v = view2.row(i);
    acc += cosine_kernel(u, v, d1 ? &gu : nullptr, d2 ? &gv : nullptr);
    if (d1) d1->row(i) = -gu.transpose() / double(n);
    if (d2) d2->row(i) = -gv.transpose() / double(n);
  }
  return -acc / double(n);
}

double cls_cross_entropy(const Mat& logits, const std::vector<int>& targets,
                         Mat* d_logits) {
  const Eigen::Index n = logits.rows();
  const int c = static_cast<int>(logits.cols());
  check(n == static_cast<Eigen::Index>(targets.size()),
        "cls_cross_entropy: logits/targets size mismatch");
  check(n >= 1, "cls_cross_entropy: empty batch");

  if (d_logits) d_logits->setZero(n, c);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int t = targets[i];
    check(t >= 0 && t < c, "cls_cross_entropy: target " + std::to_string(t) +
                               " out of range [0," + std::to_string(c) + ")");
    const double lse = log_sum_exp(logits.row(i));
    loss += lse - logits(i, t);
    if (d_logits) {
      d_logits->row(i) = (logits.row(i).array() - lse).exp() / double(n);
      (*d_logits)(i, t) -= 1.0 / double(n);
    }
  }
  return loss / double(n);
}

double combined_cls_loss(double ce, double ls, double lu, const LossConfig& cfg) {
  cfg.validate();
  return ce + cfg.lambda_s_cls * ls + cfg.lambda_u_cls * lu;
}

double elementwise_naive_loss(const FeatureMap& fmap, const LabelMap& labels,
                              double tau, Mat* d_features) {
  check(fmap.height == labels.height && fmap.width == labels.width,
        "elementwise_naive_loss: shape mismatch");
  check(tau > 0.0, "elementwise_naive_loss: temperature must be positive");

  std::vector<int> idx;  // labeled element indices
  for (int i = 0; i < labels.size(); ++i)
    if (labels.ids[i] != kUnlabeled) idx.push_back(i);
  const int m = static_cast<int>(idx.size());
  check(m >= 2, "elementwise_naive_loss: fewer than 2 labeled elements");

  Mat sub(m, fmap.dim());
  for (int k = 0; k < m; ++k) sub.row(k) = fmap.features.row(idx[k]);
  Vec norms;
  const Mat a = normalize_rows(sub, &norms);
  const Mat scores = (a * a.transpose()) / tau;  // m x m

  double loss = 0.0;
  Mat g;
  if (d_features) g = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    const int ci = labels.ids[idx[i]];
    const double lse_all = log_sum_exp(scores.row(i));
    double mx = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j)
      if (labels.ids[idx[j]] == ci) mx = std::max(mx, scores(i, j));
    double pos_sum = 0.0;
    for (int j = 0; j < m; ++j)
      if (labels.ids[idx[j]] == ci) pos_sum += std::exp(scores(i, j) - mx);
    const double lse_pos = mx + std::log(pos_sum);
    loss += lse_all - lse_pos;
    if (d_features) {
      for (int j = 0; j < m; ++j) {
        double gij = std::exp(scores(i, j) - lse_all);
        if (labels.ids[idx[j]] == ci) gij -= std::exp(scores(i, j) - lse_pos);
        g(i, j) += gij / double(m);
      }
    }
  }
  loss /= double(m);

  if (d_features) {
    // scores depend on a through both sides of the product
    Mat dsub = ((g + g.transpose()) * a) / tau;
    denormalize_grad(a, norms, &dsub);
    d_features->setZero(fmap.size(), fmap.dim());
    for (int k = 0; k < m; ++k) d_features->row(idx[k]) = dsub.row(k);
  }
  return loss;
}

SegLossResult bank_contrastive_loss(const FeatureMap& fmap, const LabelMap& labels,
                                    const std::vector<std::optional<Vec>>& centroids,
                                    double tau, Mat* d_features) {
  check(fmap.height == labels.height && fmap.width == labels.width,
        "bank_contrastive_loss: shape mismatch");
  check(tau > 0.0, "bank_contrastive_loss: temperature must be positive");
  const int num_classes = static_cast<int>(centroids.size());

  // unit centroids for the classes that have one
  std::vector<int> cls_of;                  // slot -> class id
  std::vector<int> slot_of(num_classes, -1);  // class id -> slot
  std::vector<Vec> unit;
  for (int c = 0; c < num_classes; ++c) {
    if (!centroids[c].has_value()) continue;
    const double n = centroids[c]->norm();
    check(n > 0.0, "bank_contrastive_loss: zero-norm centroid for class " +
                       std::to_string(c));
    slot_of[c] = static_cast<int>(cls_of.size());
    cls_of.push_back(c);
    unit.push_back(*centroids[c] / n);
  }
  const int k = static_cast<int>(cls_of.size());

  if (d_features) d_features->setZero(fmap.size(), fmap.dim());
  if (k == 0) return {0.0, true};

  double loss = 0.0;
  int eligible = 0;
  Vec s(k);
  std::vector<int> elems;
  std::vector<Vec> elem_scores;
  for (int i = 0; i < fmap.size(); ++i) {
    const int ci = labels.ids[i];
    if (ci == kUnlabeled) continue;
    check(ci >= 0 && ci < num_classes,
          "bank_contrastive_loss: label " + std::to_string(ci) + " out of range");
    if (slot_of[ci] < 0) continue;  // empty queue, excluded
    const Vec f = fmap.features.row(i);
    const double nf = f.norm();
    check(nf > 0.0, "bank_contrastive_loss: zero-norm feature at element " +
                        std::to_string(i));
    const Vec fa = f / nf;
    for (int t = 0; t < k; ++t) s(t) = fa.dot(unit[t]) / tau;
    const double lse = log_sum_exp(s.transpose());
    loss += lse - s(slot_of[ci]);
    ++eligible;
    if (d_features) {
      elems.push_back(i);
      elem_scores.push_back(s);
    }
  }
  if (eligible == 0) return {0.0, true};
  loss /= double(eligible);

  if (d_features) {
    for (size_t e = 0; e < elems.size(); ++e) {
      const int i = elems[e];
      const Vec& sc = elem_scores[e];
      const int pos = slot_of[labels.ids[i]];
      const double lse = log_sum_exp(sc.transpose());
      const Vec f = fmap.features.row(i);
      const double nf = f.norm();
      const Vec fa = f / nf;
      Vec gi = Vec::Zero(fmap.dim());
      for (int t = 0; t < k; ++t) {
        double gt = std::exp(sc(t) - lse) - (t == pos ? 1.0 : 0.0);
        gt /= double(eligible) * tau;
        // d cos(f, m_t)/df = (m̂_t - cos·f̂)/|f|
        gi += gt * (unit[t] - (sc(t) * tau) * fa) / nf;
      }
      d_features->row(i) = gi.transpose();
    }
  }
  return {loss, false};
}

SegLossResult seg_cross_entropy(const Mat& logit_map, const LabelMap& labels,
                                Mat* d_logits) {
  check(logit_map.rows() == labels.size(), "seg_cross_entropy: shape mismatch");
  const int c = static_cast<int>(logit_map.cols());

  if (d_logits) d_logits->setZero(logit_map.rows(), c);
  int labeled = labels.labeled_count();
  if (labeled == 0) return {0.0, true};

  double loss = 0.0;
  for (Eigen::Index i = 0; i < logit_map.rows(); ++i) {
    const int t = labels.ids[i];
    if (t == kUnlabeled) continue;
    check(t >= 0 && t < c, "seg_cross_entropy: label out of range");
    const double lse = log_sum_exp(logit_map.row(i));
    loss += lse - logit_map(i, t);
    if (d_logits) {
      d_logits->row(i) = (logit_map.row(i).array() - lse).exp() / double(labeled);
      (*d_logits)(i, t) -= 1.0 / double(labeled);
    }
  }
  return {loss / double(labeled), false};
}

double combined_seg_loss(double ce, double ls, const LossConfig& cfg) {
  cfg.validate();
  return ce + cfg.lambda_s_seg * ls;
}

}  // namespace sscl
