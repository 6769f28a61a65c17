// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sscl/checkpoint.hpp"
#include "sscl/datapipe.hpp"
#include "sscl/evalkit.hpp"
#include "sscl/losses.hpp"
#include "sscl/membank.hpp"
#include "sscl/nn.hpp"
#include "sscl/optim.hpp"
#include "sscl/pseudolabel.hpp"
#include "sscl/synth.hpp"

namespace sscl {

struct TrainPlan {
  // classification
  int cls_epochs = 30;
  int cls_batch = 16;  // CE and similarity streams; the class-aware stream
                       // draws one pair per present class
  double cls_lr_heads = 1e-3;
  double cls_lr_backbone = 1e-6;  // backbone and projection heads
  std::vector<int> cls_milestones = {20, 25};
  // segmentation
  double seg_lr = 0.01;
  double seg_poly_power = 0.9;
  int seg_batch = 16;
  std::array<int, 3> seg_step_epochs = {60, 60, 60};
  bool seg_ce_only = false;  // baseline: one CE-only phase over the full budget
  int bank_capacity = 32;
  double pseudo_threshold = 0.9;
  std::uint64_t seed = 0;

  void validate() const;
  std::uint64_t hash() const;  // FNV-1a over the serialized fields
};

struct ClsStepLosses {
  double ce = 0.0, ls = 0.0, lu = 0.0, total = 0.0;
};

// Three-stream classification trainer: CE on labeled batches, class-aware
// contrastive on balanced pairs, similarity on unlabeled two-views, one
// combined update per batch.
class ClsTrainer {
 public:
  ClsTrainer(ClsNet* net, const ClsDataset& labeled, const std::vector<Image>& unlabeled,
             const ClsDataset& test, const LossConfig& loss_cfg, const TrainPlan& plan,
             const AugmentationPolicy& policy);

  // One combined update over the three streams; returns the loss breakdown.
  ClsStepLosses train_step(const std::vector<int>& labeled_batch);

  // Full schedule; appends one metrics row per epoch to csv_path (created
  // with header if absent). Returns final test metrics.
  ClassificationMetrics run(const std::string& csv_path,
                            const std::string& checkpoint_path = "");

  ClassificationMetrics evaluate() const;
  int epoch() const { return epoch_; }
  void resume_from(const std::string& checkpoint_path);

 private:
  void epoch_end(int epoch, const ClsStepLosses& mean_losses, double lr,
                 const std::string& csv_path);

  ClsNet* net_;
  const ClsDataset& labeled_;
  const std::vector<Image>& unlabeled_;
  const ClsDataset& test_;
  LossConfig loss_cfg_;
  TrainPlan plan_;
  AugmentationPolicy policy_;
  Adam opt_;
  Rng rng_;
  int epoch_ = 0;
};

// Three-step segmentation trainer: contrastive pretraining, joint
// fine-tuning, then joint training with online pseudo labels.
class SegTrainer {
 public:
  SegTrainer(SegNet* net, const SegDataset& train, const SegDataset& test,
             const LossConfig& loss_cfg, const TrainPlan& plan,
             const AugmentationPolicy& policy);

  SegmentationMetrics run(const std::string& csv_path,
                          const std::string& checkpoint_path = "",
                          const std::string& pseudo_dump_dir = "");

  SegmentationMetrics evaluate(FaccMode mode = FaccMode::FrequencyWeightedIoU) const;
  const ClassMemoryBank& bank() const { return bank_; }
  void resume_from(const std::string& checkpoint_path);

  // logits for one unaugmented training image at feature resolution
  Mat predict_logits(int train_index);

 private:
  int stage_of_epoch(int epoch) const;  // 1-based stage

  SegNet* net_;
  const SegDataset& train_;
  const SegDataset& test_;
  LossConfig loss_cfg_;
  TrainPlan plan_;
  AugmentationPolicy policy_;
  SgdMomentum opt_;
  ClassMemoryBank bank_;
  Rng rng_;
  int epoch_ = 0;
  std::vector<PseudoLabelMask> merged_;  // per train image, refreshed per epoch in step 3
};

// ---- inference helpers ----

std::vector<int> cls_predict(ClsNet* net, const std::vector<Image>& images);
ConfusionMatrix seg_confusion(SegNet* net, const SegDataset& data);

// Per-sample (classification) or per-element (segmentation) backbone feature
// export for embedding-space inspection.
std::vector<FeatureRow> export_cls_features(ClsNet* net, const ClsDataset& data);
std::vector<FeatureRow> export_seg_features(SegNet* net, const SegDataset& data,
                                            int stride);

}  // namespace sscl
