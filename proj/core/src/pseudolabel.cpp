// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#include "sscl/pseudolabel.hpp"

#include <cmath>
#include <iostream>

namespace sscl {

ConfidenceMap confidence_from_logits(const Mat& logit_map, int height, int width) {
  check(logit_map.rows() == static_cast<Eigen::Index>(height) * width,
        "confidence_from_logits: grid size mismatch");
  const int c = static_cast<int>(logit_map.cols());
  check(c >= 1, "confidence_from_logits: no classes");

  ConfidenceMap out;
  out.height = height;
  out.width = width;
  out.probs.resize(logit_map.rows(), c);
  out.argmax.resize(logit_map.rows());
  out.maxprob.resize(logit_map.rows());
  for (Eigen::Index i = 0; i < logit_map.rows(); ++i) {
    const double m = logit_map.row(i).maxCoeff();
    Eigen::RowVectorXd e = (logit_map.row(i).array() - m).exp();
    out.probs.row(i) = e / e.sum();
    int best = 0;
    for (int j = 1; j < c; ++j)
      if (out.probs(i, j) > out.probs(i, best)) best = j;
    out.argmax[i] = best;
    out.maxprob[i] = out.probs(i, best);
  }
  return out;
}

PseudoLabelMask merge_labels(const LabelMap& y, const ConfidenceMap& conf,
                             double threshold) {
  check(y.height == conf.height && y.width == conf.width,
        "merge_labels: shape mismatch");
  check(threshold > 0.0, "merge_labels: threshold must be positive");

  PseudoLabelMask mask;
  mask.grid.height = y.height;
  mask.grid.width = y.width;
  mask.grid.ids.resize(y.size());
  mask.source.resize(y.size());
  for (int i = 0; i < y.size(); ++i) {
    if (y.ids[i] != kUnlabeled) {
      // prediction never overrides ground truth
      mask.grid.ids[i] = y.ids[i];
      mask.source[i] = LabelSource::GroundTruth;
    } else if (conf.maxprob[i] >= threshold) {
      mask.grid.ids[i] = conf.argmax[i];
      mask.source[i] = LabelSource::Pseudo;
    } else {
      mask.grid.ids[i] = kUnlabeled;
      mask.source[i] = LabelSource::None;
    }
  }
  return mask;
}

std::vector<PseudoLabelMask> refresh_pseudo_labels(
    const std::function<Mat(int)>& predict_logits,
    const std::vector<const LabelMap*>& ground_truth, double threshold,
    std::vector<int>* failed) {
  std::vector<PseudoLabelMask> masks;
  masks.reserve(ground_truth.size());
  for (size_t i = 0; i < ground_truth.size(); ++i) {
    const LabelMap& y = *ground_truth[i];
    try {
      const Mat logits = predict_logits(static_cast<int>(i));
      masks.push_back(merge_labels(
          y, confidence_from_logits(logits, y.height, y.width), threshold));
    } catch (const std::exception& e) {
      std::cerr << "warning: pseudo-label refresh failed for sample " << i
                << ": " << e.what() << "\n";
      if (failed) failed->push_back(static_cast<int>(i));
      PseudoLabelMask mask;
      mask.grid = y;
      mask.source.resize(y.size());
      for (int j = 0; j < y.size(); ++j)
        mask.source[j] = y.ids[j] == kUnlabeled ? LabelSource::None
                                                : LabelSource::GroundTruth;
      masks.push_back(std::move(mask));
    }
  }
  return masks;
}

}  // namespace sscl
