// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sscl/nn.hpp"

namespace sscl {

// Pure closed-form schedules.

// Step decay: base_lr x 0.1 per passed milestone (epochs 20 and 25).
double lr_at_epoch_cls(int epoch, double base_lr,
                       const std::vector<int>& milestones = {20, 25});

// Polynomial annealing: base_lr x (1 - iter/total)^power.
double lr_at_iter_seg(std::int64_t iter, std::int64_t total_iters, double base_lr,
                      double power = 0.9);

// Optimizers own per-group base learning rates; step() applies a schedule
// factor on top. Parameter state is keyed by registration order.
class Optimizer {
 public:
  Optimizer(std::vector<Param*> params, std::map<std::string, double> group_lrs);
  virtual ~Optimizer() = default;

  virtual void step(double lr_factor) = 0;
  virtual void save_state(std::ostream& out) const = 0;
  virtual void load_state(std::istream& in) = 0;

 protected:
  double lr_of(const Param& p) const;
  std::vector<Param*> params_;
  std::map<std::string, double> group_lrs_;
};

class Adam : public Optimizer {
 public:
  Adam(std::vector<Param*> params, std::map<std::string, double> group_lrs,
       double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  void step(double lr_factor) override;
  void save_state(std::ostream& out) const override;
  void load_state(std::istream& in) override;

 private:
  double beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
  std::vector<Mat> m_, v_;
};

class SgdMomentum : public Optimizer {
 public:
  SgdMomentum(std::vector<Param*> params, std::map<std::string, double> group_lrs,
              double momentum = 0.9);

  void step(double lr_factor) override;
  void save_state(std::ostream& out) const override;
  void load_state(std::istream& in) override;

 private:
  double momentum_;
  std::vector<Mat> velocity_;
};

}  // namespace sscl
