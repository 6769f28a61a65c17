// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "sscl/datapipe.hpp"

namespace sscl {

// Procedural desk-scale benchmark. Classes are defined by shape geometry;
// color correlates with class in training data but drifts in the test set
// (controlled by `shift`), and test class frequencies drift from the
// long-tailed training frequencies the same way.
struct SynthSpec {
  int num_classes = 4;
  int image_size = 64;
  std::vector<int> labeled_counts = {16, 8, 4, 2};  // long-tailed by default
  int unlabeled_count = 160;
  int test_count = 100;
  double shift = 1.0;  // 0 = identical distributions, 1 = full drift
  // segmentation variant
  int seg_train_count = 40;
  int seg_test_count = 20;
  double unlabeled_fraction = 0.45;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthClsOutput {
  ClsDataset labeled;
  std::vector<Image> unlabeled;
  ClsDataset test;
};

struct SynthSegOutput {
  SegDataset train;
  SegDataset test;
};

SynthClsOutput synth_cls_dataset(const SynthSpec& spec);
SynthSegOutput synth_seg_dataset(const SynthSpec& spec);

// hue/saturation/value in [0,1] to RGB
void hsv_to_rgb(double h, double s, double v, double* r, double* g, double* b);

}  // namespace sscl
