// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sscl/common.hpp"

namespace sscl {

struct ConfusionMatrix {
  // rows = ground truth, cols = prediction
  std::vector<std::int64_t> counts;
  int num_classes = 0;

  explicit ConfusionMatrix(int c = 0)
      : counts(static_cast<size_t>(c) * c, 0), num_classes(c) {}
  std::int64_t& at(int t, int p) { return counts[t * num_classes + p]; }
  std::int64_t at(int t, int p) const { return counts[t * num_classes + p]; }
  std::int64_t total() const;
  std::int64_t row_sum(int t) const;
  std::int64_t col_sum(int p) const;
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
};

// Tally predictions against truths; UNLABELED truths are skipped.
ConfusionMatrix confusion(const std::vector<int>& pred, const std::vector<int>& truth,
                          int num_classes);

struct ClassificationMetrics {
  double top1 = 0.0;
  // absent for classes with zero test samples
  std::vector<std::optional<double>> per_class_acc;
};

ClassificationMetrics classification_metrics(const ConfusionMatrix& cm);

// Two readings of FACC: frequency-weighted IoU (the value consistent with the
// reported tables) and the literal frequency-weighted recall (which is
// algebraically equal to ACC).
enum class FaccMode { FrequencyWeightedIoU, FrequencyWeightedRecall };

struct SegmentationMetrics {
  double acc = 0.0;
  double macc = 0.0;
  double facc = 0.0;
  double miou = 0.0;
  std::vector<std::optional<double>> per_class_iou;  // absent when union empty
};

SegmentationMetrics segmentation_metrics(const ConfusionMatrix& cm,
                                         FaccMode mode = FaccMode::FrequencyWeightedIoU);

FaccMode facc_mode_from_string(const std::string& s);

// One exported feature row: an id, its label (kUnlabeled allowed), and the
// feature vector. Written as a columnar text file for downstream projection.
struct FeatureRow {
  std::string id;
  int label = kUnlabeled;
  Vec feature;
};

void write_feature_table(const std::string& path, const std::vector<FeatureRow>& rows);

}  // namespace sscl
