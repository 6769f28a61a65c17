// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#include "sscl/membank.hpp"

#include "sscl/serialize.hpp"

namespace sscl {

ClassMemoryBank::ClassMemoryBank(int num_classes, int dim, int capacity)
    : dim_(dim), capacity_(capacity), queues_(num_classes) {
  check(num_classes > 0, "ClassMemoryBank: num_classes must be positive");
  check(dim > 0, "ClassMemoryBank: dim must be positive");
  check(capacity > 0, "ClassMemoryBank: capacity must be positive");
}

void ClassMemoryBank::push_batch_means(const FeatureMap& fmap, const LabelMap& labels) {
  check(fmap.height == labels.height && fmap.width == labels.width,
        "push_batch_means: shape mismatch");
  check(fmap.dim() == dim_, "push_batch_means: feature dimension mismatch");

  std::vector<Vec> sums(queues_.size(), Vec::Zero(dim_));
  std::vector<int> counts(queues_.size(), 0);
  for (int i = 0; i < fmap.size(); ++i) {
    const int c = labels.ids[i];
    if (c == kUnlabeled) continue;
    check(c >= 0 && c < num_classes(),
          "push_batch_means: label " + std::to_string(c) + " out of range");
    sums[c] += fmap.features.row(i).transpose();
    ++counts[c];
  }
  for (int c = 0; c < num_classes(); ++c) {
    if (counts[c] == 0) continue;
    if (static_cast<int>(queues_[c].size()) == capacity_) queues_[c].pop_front();
    queues_[c].push_back(sums[c] / double(counts[c]));
  }
}

std::vector<std::optional<Vec>> ClassMemoryBank::snapshot_centroids() const {
  std::vector<std::optional<Vec>> out(queues_.size());
  for (size_t c = 0; c < queues_.size(); ++c) {
    if (queues_[c].empty()) continue;
    Vec mean = Vec::Zero(dim_);
    for (const Vec& e : queues_[c]) mean += e;
    out[c] = mean / double(queues_[c].size());
  }
  return out;
}

void ClassMemoryBank::save(std::ostream& out) const {
  io::write_pod<std::int32_t>(out, num_classes());
  io::write_pod<std::int32_t>(out, dim_);
  io::write_pod<std::int32_t>(out, capacity_);
  for (const auto& q : queues_) {
    io::write_pod<std::int32_t>(out, static_cast<std::int32_t>(q.size()));
    for (const Vec& e : q) io::write_vec(out, e);
  }
}

ClassMemoryBank ClassMemoryBank::load(std::istream& in) {
  const auto c = io::read_pod<std::int32_t>(in);
  const auto d = io::read_pod<std::int32_t>(in);
  const auto cap = io::read_pod<std::int32_t>(in);
  ClassMemoryBank bank(c, d, cap);
  for (int i = 0; i < c; ++i) {
    const auto n = io::read_pod<std::int32_t>(in);
    for (int j = 0; j < n; ++j) bank.queues_[i].push_back(io::read_vec(in));
  }
  return bank;
}

bool ClassMemoryBank::operator==(const ClassMemoryBank& other) const {
  if (dim_ != other.dim_ || capacity_ != other.capacity_ ||
      queues_.size() != other.queues_.size())
    return false;
  for (size_t c = 0; c < queues_.size(); ++c) {
    if (queues_[c].size() != other.queues_[c].size()) return false;
    for (size_t j = 0; j < queues_[c].size(); ++j)
      if (queues_[c][j] != other.queues_[c][j]) return false;
  }
  return true;
}

}  // namespace sscl
