// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#include "sscl/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace sscl {
namespace {

template <typename Dataset>
void split_by_sol(const RunConfig& cfg, Dataset* all, Dataset* train, Dataset* test) {
  std::vector<int> sols;
  for (const auto& s : all->samples) sols.push_back(s.sol);
  Rng rng(cfg.seed ^ 0x51ed270b0a1afdb5ULL);
  const SplitResult sr = chrono_split(sols, cfg.dataset.split, rng);
  for (int i : sr.train_val) train->samples.push_back(std::move(all->samples[i]));
  for (int i : sr.test) test->samples.push_back(std::move(all->samples[i]));
}

std::string fmt_pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v * 100.0);
  return buf;
}

}  // namespace

PreparedData prepare_data(const RunConfig& cfg) {
  PreparedData out;
  if (cfg.dataset.kind == "synthetic") {
    SynthSpec spec = cfg.dataset.synth;
    if (spec.seed == 0) spec.seed = cfg.seed + 1;  // dataset follows the run seed
    if (cfg.task == "classify") {
      auto synth = synth_cls_dataset(spec);
      out.cls_train = std::move(synth.labeled);
      out.unlabeled = std::move(synth.unlabeled);
      out.cls_test = std::move(synth.test);
    } else {
      auto synth = synth_seg_dataset(spec);
      out.seg_train = std::move(synth.train);
      out.seg_test = std::move(synth.test);
    }
    return out;
  }
  if (cfg.task == "classify") {
    if (cfg.dataset.use_split) {
      ClsDataset all = load_cls_dataset(cfg.dataset.cls_root);
      out.cls_train.class_names = all.class_names;
      out.cls_test.class_names = all.class_names;
      split_by_sol(cfg, &all, &out.cls_train, &out.cls_test);
    } else {
      out.cls_train = load_cls_dataset(cfg.dataset.cls_root);
      out.cls_test = load_cls_dataset(cfg.dataset.test_root);
    }
    if (!cfg.dataset.unlabeled_dir.empty())
      out.unlabeled = load_unlabeled_pool(cfg.dataset.unlabeled_dir);
  } else {
    if (cfg.dataset.use_split) {
      SegDataset all = load_seg_dataset(cfg.dataset.seg_root, cfg.dataset.num_classes);
      out.seg_train.num_classes = all.num_classes;
      out.seg_test.num_classes = all.num_classes;
      split_by_sol(cfg, &all, &out.seg_train, &out.seg_test);
    } else {
      out.seg_train = load_seg_dataset(cfg.dataset.seg_root, cfg.dataset.num_classes);
      out.seg_test =
          load_seg_dataset(cfg.dataset.seg_test_root, cfg.dataset.num_classes);
    }
  }
  return out;
}

TrainOutcome run_train(const RunConfig& cfg, const std::string& output_dir,
                       const std::string& resume_checkpoint) {
  cfg.validate();
  fs::create_directories(output_dir);
  TrainOutcome outcome;
  outcome.metrics_csv = (fs::path(output_dir) / "metrics.csv").string();
  outcome.checkpoint = (fs::path(output_dir) / "checkpoint.ckpt").string();
  outcome.manifest = (fs::path(output_dir) / "manifest.json").string();
  write_manifest(outcome.manifest, cfg);
  if (resume_checkpoint.empty() && fs::exists(outcome.metrics_csv))
    fs::remove(outcome.metrics_csv);
  // seed the output checkpoint from the resume source so it exists even when
  // no epochs remain to run
  if (!resume_checkpoint.empty() &&
      !(fs::exists(outcome.checkpoint) &&
        fs::equivalent(fs::path(resume_checkpoint), fs::path(outcome.checkpoint))))
    fs::copy_file(resume_checkpoint, outcome.checkpoint,
                  fs::copy_options::overwrite_existing);

  PreparedData data = prepare_data(cfg);
  if (cfg.task == "classify") {
    ClsNet net(cfg.model, cfg.seed);
    ClsTrainer trainer(&net, data.cls_train, data.unlabeled, data.cls_test, cfg.loss,
                       cfg.plan, cfg.augmentation);
    if (!resume_checkpoint.empty()) trainer.resume_from(resume_checkpoint);
    const auto metrics = trainer.run(outcome.metrics_csv, outcome.checkpoint);
    outcome.final_top1_or_miou = metrics.top1;
  } else {
    SegNet net(cfg.model, cfg.seed);
    SegTrainer trainer(&net, data.seg_train, data.seg_test, cfg.loss, cfg.plan,
                       cfg.augmentation);
    if (!resume_checkpoint.empty()) trainer.resume_from(resume_checkpoint);
    const auto metrics = trainer.run(outcome.metrics_csv, outcome.checkpoint);
    outcome.final_top1_or_miou = metrics.miou;
  }
  return outcome;
}

EvalReport run_eval(const RunConfig& cfg, const std::string& checkpoint,
                    const std::string& split, bool per_class, FaccMode facc_mode) {
  cfg.validate();
  check(split == "test" || split == "train", "eval split must be 'train' or 'test'");
  PreparedData data = prepare_data(cfg);
  std::ostringstream report;
  EvalReport out;
  if (cfg.task == "classify") {
    ClsNet net(cfg.model, cfg.seed);
    const auto meta = load_checkpoint(checkpoint, net.params(), nullptr, nullptr);
    if (meta.task != "classify")
      throw DataError("eval: checkpoint task is '" + meta.task + "'");
    const ClsDataset& ds = split == "test" ? data.cls_test : data.cls_train;
    check(!ds.samples.empty(), "eval: split '" + split + "' is empty");
    std::vector<int> pred, truth;
    for (const auto& s : ds.samples) {
      pred.push_back(cls_predict(&net, {s.image})[0]);
      truth.push_back(s.label);
    }
    const auto m = classification_metrics(confusion(pred, truth, ds.num_classes()));
    report << "top1 " << fmt_pct(m.top1) << "\n";
    if (per_class)
      for (int c = 0; c < ds.num_classes(); ++c)
        report << "  " << ds.class_names[c] << " "
               << (m.per_class_acc[c] ? fmt_pct(*m.per_class_acc[c]) : "absent") << "\n";
    out.headline = m.top1;
  } else {
    SegNet net(cfg.model, cfg.seed);
    const auto meta = load_checkpoint(checkpoint, net.params(), nullptr, nullptr);
    if (meta.task != "segment")
      throw DataError("eval: checkpoint task is '" + meta.task + "'");
    const SegDataset& ds = split == "test" ? data.seg_test : data.seg_train;
    check(!ds.samples.empty(), "eval: split '" + split + "' is empty");
    const auto m = segmentation_metrics(seg_confusion(&net, ds), facc_mode);
    report << "acc " << fmt_pct(m.acc) << "\nmacc " << fmt_pct(m.macc) << "\nfacc "
           << fmt_pct(m.facc) << "\nmiou " << fmt_pct(m.miou) << "\n";
    if (per_class)
      for (int c = 0; c < ds.num_classes; ++c)
        report << "  iou[" << c << "] "
               << (m.per_class_iou[c] ? fmt_pct(*m.per_class_iou[c]) : "absent") << "\n";
    out.headline = m.miou;
  }
  out.text = report.str();
  return out;
}

void run_export_features(const RunConfig& cfg, const std::string& checkpoint,
                         const std::string& out_path, int stride) {
  cfg.validate();
  PreparedData data = prepare_data(cfg);
  if (cfg.task == "classify") {
    ClsNet net(cfg.model, cfg.seed);
    load_checkpoint(checkpoint, net.params(), nullptr, nullptr);
    write_feature_table(out_path, export_cls_features(&net, data.cls_test));
  } else {
    SegNet net(cfg.model, cfg.seed);
    load_checkpoint(checkpoint, net.params(), nullptr, nullptr);
    write_feature_table(out_path, export_seg_features(&net, data.seg_test, stride));
  }
}

}  // namespace sscl
