// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sscl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Reserved label id for elements without annotation. Serialized as 255 in
// mask files (AI4Mars convention), represented as -1 in memory.
inline constexpr int kUnlabeled = -1;

struct ContractError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void check(bool cond, const std::string& msg) {
  if (!cond) throw ContractError(msg);
}

// A batch of projected feature vectors, one per row, with optional labels.
struct EmbeddingBatch {
  Mat rows;                 // N x D
  std::vector<int> labels;  // empty when unlabeled; else size N

  int size() const { return static_cast<int>(rows.rows()); }
  int dim() const { return static_cast<int>(rows.cols()); }
  bool has_labels() const { return !labels.empty(); }
};

// Per-element 2D feature grid, stored row-major as (H*W) x D.
struct FeatureMap {
  int height = 0;
  int width = 0;
  Mat features;  // (height*width) x D

  int size() const { return height * width; }
  int dim() const { return static_cast<int>(features.cols()); }
};

// Category grid aligned with a FeatureMap or image. kUnlabeled marks holes.
struct LabelMap {
  int height = 0;
  int width = 0;
  std::vector<int> ids;  // size height*width, row-major

  int size() const { return height * width; }
  int at(int r, int c) const { return ids[r * width + c]; }
  int& at(int r, int c) { return ids[r * width + c]; }
  int labeled_count() const {
    int n = 0;
    for (int v : ids) n += (v != kUnlabeled);
    return n;
  }
};

// Every loss hyperparameter in one record.
struct LossConfig {
  double tau_cls = 0.2;
  double tau_seg = 0.07;
  double lambda_s_cls = 1.0;
  double lambda_u_cls = 0.2;
  double lambda_s_seg = 0.001;
  int num_classes = 0;

  void validate() const {
    check(tau_cls > 0.0 && tau_seg > 0.0, "LossConfig: temperatures must be positive");
    check(lambda_s_cls >= 0.0 && lambda_u_cls >= 0.0 && lambda_s_seg >= 0.0,
          "LossConfig: loss weights must be non-negative");
    check(num_classes > 0, "LossConfig: num_classes must be positive");
  }
};

}  // namespace sscl
