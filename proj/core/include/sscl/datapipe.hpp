// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sscl/image.hpp"

namespace sscl {

using Rng = std::mt19937_64;

// Two-view augmentation policy: shape ops plus pixel ops. Magnitudes are
// config-exposed; defaults follow common contrastive-learning practice.
struct AugmentationPolicy {
  // shape ops
  double hflip_prob = 0.5;
  double vflip_prob = 0.0;
  double crop_scale_min = 0.2;  // area fraction
  double crop_scale_max = 1.0;
  int resize_target = 0;  // 0 keeps the input size
  double rotation_deg = 30.0;
  // pixel ops
  double blur_prob = 0.5;
  double blur_sigma_min = 0.1;
  double blur_sigma_max = 2.0;
  double jitter_prob = 0.8;
  double jitter_brightness = 0.4;
  double jitter_contrast = 0.4;
  double jitter_saturation = 0.4;
  double jitter_hue = 0.1;
  double desaturate_prob = 0.2;

  static AugmentationPolicy identity();
  void validate() const;
};

// One independently sampled transformation chain (shape + pixel ops).
Image augment(const Image& img, const AugmentationPolicy& policy, Rng& rng);

// Two independently sampled chains applied to the same image.
std::pair<Image, Image> two_view(const Image& img, const AugmentationPolicy& policy,
                                 Rng& rng);

// Shape ops applied identically to image and mask (mask sampled nearest),
// pixel ops to the image only.
std::pair<Image, LabelMap> augment_with_mask(const Image& img, const LabelMap& mask,
                                             const AugmentationPolicy& policy,
                                             Rng& rng);

// Chronological split by Mars solar day.
struct ChronoSplit {
  int train_sol_lo = 0, train_sol_hi = 0;  // inclusive
  int test_sol_lo = 0, test_sol_hi = 0;
  bool shuffle_train_val = true;

  void validate() const;
};

struct SplitResult {
  std::vector<int> train_val;  // indices into the input sequence
  std::vector<int> test;
  int out_of_range = 0;
};

SplitResult chrono_split(const std::vector<int>& sols, const ChronoSplit& split,
                         Rng& rng);

// One (anchor image, positive image) index pair per class present in the
// pool, ordered by class id. Distinct images when the class has >= 2,
// the same image duplicated otherwise.
std::vector<std::pair<int, int>> class_balanced_batch(const std::vector<int>& pool_labels,
                                                      Rng& rng);

// Nearest-label down-sampling: output cell (i,j) takes the label at source
// (i*H/h, j*W/w), the anchor of its half-open cell. Composes exactly for
// integer ratios.
LabelMap label_downsample(const LabelMap& labels, int target_h, int target_w);

// Majority-vote alternative, behind a config switch.
LabelMap label_downsample_majority(const LabelMap& labels, int target_h, int target_w);

// ---- dataset containers and on-disk layouts ----

struct ClsSample {
  Image image;
  int label = kUnlabeled;
  int sol = 0;
  std::string id;
};

struct SegSample {
  Image image;
  LabelMap mask;
  int sol = 0;
  std::string id;
};

struct ClsDataset {
  std::vector<ClsSample> samples;
  std::vector<std::string> class_names;
  int num_classes() const { return static_cast<int>(class_names.size()); }
};

struct SegDataset {
  std::vector<SegSample> samples;
  int num_classes = 0;
};

// Layout: root/<class_name>/<id>.ppm plus sidecar `index.csv` (id,sol,class).
ClsDataset load_cls_dataset(const std::string& root);
void save_cls_dataset(const std::string& root, const ClsDataset& ds);

// Layout: root/images/<id>.ppm + root/labels/<id>.pgm, sidecar `sols.csv`.
SegDataset load_seg_dataset(const std::string& root, int num_classes);
void save_seg_dataset(const std::string& root, const SegDataset& ds);

// Flat directory of images, no labels.
std::vector<Image> load_unlabeled_pool(const std::string& dir);

}  // namespace sscl
