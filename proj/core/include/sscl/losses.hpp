// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "sscl/common.hpp"

namespace sscl {

// All objectives are pure functions from features/logits/labels to a scalar.
// Each takes optional output pointers for analytic gradients w.r.t. its
// feature (or logit) inputs; pass nullptr when only the value is needed.

// Cosine similarity uᵀv / (||u||·||v||). Throws on zero-norm input.
double cosine_kernel(const Vec& u, const Vec& v, Vec* du = nullptr, Vec* dv = nullptr);

// Temperature-scaled contrastive loss over two aligned view batches.
// Row i of each batch is a view of sample i; the denominator runs over all
// partner rows (positive included). Requires N >= 2.
double info_nce(const Mat& anchor_views, const Mat& partner_views, double tau,
                Mat* d_anchor = nullptr, Mat* d_partner = nullptr);

// Class-aware contrastive loss: one anchor and one positive row per category
// present in the batch, negatives exist only across categories.
double supervised_interclass_loss(const EmbeddingBatch& anchors,
                                  const EmbeddingBatch& positives, double tau,
                                  Mat* d_anchor = nullptr, Mat* d_positive = nullptr);

// Positive-only objective: −mean cosine similarity between paired views.
double similarity_loss(const Mat& view1, const Mat& view2,
                       Mat* d1 = nullptr, Mat* d2 = nullptr);

// Mean softmax cross entropy over rows of `logits` (N x C).
double cls_cross_entropy(const Mat& logits, const std::vector<int>& targets,
                         Mat* d_logits = nullptr);

double combined_cls_loss(double ce, double ls, double lu, const LossConfig& cfg);

// Quadratic-cost reference form of the element-wise contrastive loss: pairwise
// similarities among all labeled grid elements. Intended for tiny grids.
double elementwise_naive_loss(const FeatureMap& fmap, const LabelMap& labels,
                              double tau, Mat* d_features = nullptr);

struct SegLossResult {
  double value = 0.0;
  bool warmup = false;  // set when no eligible element existed
};

// Element-wise contrastive loss against per-class memory-bank centroids.
// Centroids are constants for differentiation; gradient flows into fmap only.
// Elements whose class has no centroid are skipped; if nothing is eligible the
// result is 0 with the warmup flag set.
SegLossResult bank_contrastive_loss(const FeatureMap& fmap, const LabelMap& labels,
                                    const std::vector<std::optional<Vec>>& centroids,
                                    double tau, Mat* d_features = nullptr);

// Mean cross entropy over labeled elements of the grid. logit_map is
// (H*W) x C, row-major over the grid. All-unlabeled grids yield 0 + warmup.
SegLossResult seg_cross_entropy(const Mat& logit_map, const LabelMap& labels,
                                Mat* d_logits = nullptr);

double combined_seg_loss(double ce, double ls, const LossConfig& cfg);

}  // namespace sscl
