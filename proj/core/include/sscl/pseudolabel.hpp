// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sscl/common.hpp"

namespace sscl {

// Softmax confidence over a logit grid.
struct ConfidenceMap {
  int height = 0;
  int width = 0;
  Mat probs;                    // (H*W) x C, rows sum to 1
  std::vector<int> argmax;      // ties broken toward the smaller id
  std::vector<double> maxprob;  // in [0,1]
};

enum class LabelSource : std::uint8_t { GroundTruth, Pseudo, None };

// Merged annotation: ground truth supplemented, on unlabeled elements only,
// with high-confidence predictions.
struct PseudoLabelMask {
  LabelMap grid;
  std::vector<LabelSource> source;
};

ConfidenceMap confidence_from_logits(const Mat& logit_map, int height, int width);

PseudoLabelMask merge_labels(const LabelMap& y, const ConfidenceMap& conf,
                             double threshold);

// Recompute confidence for every sample with `predict` (inference on the
// unaugmented image, identified by index) and re-merge against its ground
// truth. A sample whose inference throws is skipped: its mask keeps ground
// truth only, and its index is appended to *failed when given.
std::vector<PseudoLabelMask> refresh_pseudo_labels(
    const std::function<Mat(int)>& predict_logits,
    const std::vector<const LabelMap*>& ground_truth, double threshold,
    std::vector<int>* failed = nullptr);

}  // namespace sscl
