// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#include "sscl/evalkit.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>

namespace sscl {

std::int64_t ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

std::int64_t ConfusionMatrix::row_sum(int t) const {
  std::int64_t s = 0;
  for (int p = 0; p < num_classes; ++p) s += at(t, p);
  return s;
}

std::int64_t ConfusionMatrix::col_sum(int p) const {
  std::int64_t s = 0;
  for (int t = 0; t < num_classes; ++t) s += at(t, p);
  return s;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  check(num_classes == other.num_classes, "ConfusionMatrix: class count mismatch");
  for (size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  return *this;
}

ConfusionMatrix confusion(const std::vector<int>& pred, const std::vector<int>& truth,
                          int num_classes) {
  check(pred.size() == truth.size(), "confusion: length mismatch");
  check(num_classes > 0, "confusion: num_classes must be positive");
  ConfusionMatrix cm(num_classes);
  for (size_t i = 0; i < pred.size(); ++i) {
    if (truth[i] == kUnlabeled) continue;
    check(truth[i] >= 0 && truth[i] < num_classes, "confusion: truth id out of range");
    check(pred[i] >= 0 && pred[i] < num_classes, "confusion: prediction id out of range");
    ++cm.at(truth[i], pred[i]);
  }
  return cm;
}

ClassificationMetrics classification_metrics(const ConfusionMatrix& cm) {
  const std::int64_t total = cm.total();
  check(total > 0, "classification_metrics: empty confusion matrix");
  ClassificationMetrics out;
  std::int64_t correct = 0;
  out.per_class_acc.resize(cm.num_classes);
  for (int c = 0; c < cm.num_classes; ++c) {
    correct += cm.at(c, c);
    const std::int64_t support = cm.row_sum(c);
    if (support > 0) out.per_class_acc[c] = double(cm.at(c, c)) / double(support);
  }
  out.top1 = double(correct) / double(total);
  return out;
}

SegmentationMetrics segmentation_metrics(const ConfusionMatrix& cm, FaccMode mode) {
  const std::int64_t total = cm.total();
  check(total > 0, "segmentation_metrics: zero labeled pixels");
  SegmentationMetrics out;
  out.per_class_iou.resize(cm.num_classes);

  std::int64_t correct = 0;
  double recall_sum = 0.0, iou_sum = 0.0, facc = 0.0;
  int recall_classes = 0, iou_classes = 0;
  for (int c = 0; c < cm.num_classes; ++c) {
    const std::int64_t tp = cm.at(c, c);
    const std::int64_t support = cm.row_sum(c);
    const std::int64_t uni = support + cm.col_sum(c) - tp;
    correct += tp;
    if (support > 0) {
      const double recall = double(tp) / double(support);
      recall_sum += recall;
      ++recall_classes;
      if (mode == FaccMode::FrequencyWeightedRecall)
        facc += double(support) / double(total) * recall;
    }
    if (uni > 0) {
      const double iou = double(tp) / double(uni);
      out.per_class_iou[c] = iou;
      iou_sum += iou;
      ++iou_classes;
      if (mode == FaccMode::FrequencyWeightedIoU && support > 0)
        facc += double(support) / double(total) * iou;
    }
  }
  out.acc = double(correct) / double(total);
  out.macc = recall_classes > 0 ? recall_sum / recall_classes : 0.0;
  out.miou = iou_classes > 0 ? iou_sum / iou_classes : 0.0;
  out.facc = facc;
  return out;
}

FaccMode facc_mode_from_string(const std::string& s) {
  if (s == "fwiou") return FaccMode::FrequencyWeightedIoU;
  if (s == "recall") return FaccMode::FrequencyWeightedRecall;
  throw ConfigError("facc_mode must be 'fwiou' or 'recall', got '" + s + "'");
}

void write_feature_table(const std::string& path, const std::vector<FeatureRow>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("write_feature_table: cannot open " + path);
  for (const auto& row : rows) {
    out << row.id << '\t' << row.label;
    char buf[32];
    for (Eigen::Index i = 0; i < row.feature.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.9g", row.feature(i));
      out << '\t' << buf;
    }
    out << '\n';
  }
}

}  // namespace sscl
