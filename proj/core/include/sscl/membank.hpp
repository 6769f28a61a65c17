// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <deque>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sscl/common.hpp"

namespace sscl {

// Per-class bounded FIFO queues of historical mean features. A single
// training loop owns the bank; snapshot_centroids returns independent copies.
class ClassMemoryBank {
 public:
  ClassMemoryBank() = default;
  ClassMemoryBank(int num_classes, int dim, int capacity = 32);

  // For each class with >= 1 labeled element in fmap, append the mean feature
  // over those elements to that class's queue, evicting the oldest entry
  // when full. Classes absent from the grid are untouched.
  void push_batch_means(const FeatureMap& fmap, const LabelMap& labels);

  // Mean of each non-empty queue; empty queues yield nullopt.
  std::vector<std::optional<Vec>> snapshot_centroids() const;

  int num_classes() const { return static_cast<int>(queues_.size()); }
  int dim() const { return dim_; }
  int capacity() const { return capacity_; }
  int queue_size(int cls) const { return static_cast<int>(queues_[cls].size()); }
  const std::deque<Vec>& queue(int cls) const { return queues_[cls]; }

  void save(std::ostream& out) const;
  static ClassMemoryBank load(std::istream& in);

  bool operator==(const ClassMemoryBank& other) const;

 private:
  int dim_ = 0;
  int capacity_ = 32;
  std::vector<std::deque<Vec>> queues_;
};

}  // namespace sscl
