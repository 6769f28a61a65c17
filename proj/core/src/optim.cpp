// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#include "sscl/optim.hpp"

#include <cmath>

#include "sscl/serialize.hpp"

namespace sscl {

double lr_at_epoch_cls(int epoch, double base_lr, const std::vector<int>& milestones) {
  check(epoch >= 0, "lr_at_epoch_cls: negative epoch");
  double lr = base_lr;
  for (int m : milestones)
    if (epoch >= m) lr *= 0.1;
  return lr;
}

double lr_at_iter_seg(std::int64_t iter, std::int64_t total_iters, double base_lr,
                      double power) {
  check(total_iters > 0, "lr_at_iter_seg: total_iters must be positive");
  check(iter >= 0 && iter <= total_iters, "lr_at_iter_seg: iter out of range");
  return base_lr * std::pow(1.0 - double(iter) / double(total_iters), power);
}

Optimizer::Optimizer(std::vector<Param*> params, std::map<std::string, double> group_lrs)
    : params_(std::move(params)), group_lrs_(std::move(group_lrs)) {}

double Optimizer::lr_of(const Param& p) const {
  auto it = group_lrs_.find(p.group);
  check(it != group_lrs_.end(), "Optimizer: no learning rate for group '" + p.group + "'");
  return it->second;
}

Adam::Adam(std::vector<Param*> params, std::map<std::string, double> group_lrs,
           double beta1, double beta2, double eps)
    : Optimizer(std::move(params), std::move(group_lrs)),
      beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (Param* p : params_) {
    m_.push_back(Mat::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Mat::Zero(p->value.rows(), p->value.cols()));
  }
}

void Adam::step(double lr_factor) {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, double(t_));
  const double bc2 = 1.0 - std::pow(beta2_, double(t_));
  for (size_t i = 0; i < params_.size(); ++i) {
    Param& p = *params_[i];
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * p.grad;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * p.grad.cwiseProduct(p.grad);
    const double lr = lr_of(p) * lr_factor;
    p.value.array() -= lr * (m_[i].array() / bc1) /
                       ((v_[i].array() / bc2).sqrt() + eps_);
  }
}

void Adam::save_state(std::ostream& out) const {
  io::write_pod<std::int64_t>(out, t_);
  for (size_t i = 0; i < params_.size(); ++i) {
    io::write_mat(out, m_[i]);
    io::write_mat(out, v_[i]);
  }
}

void Adam::load_state(std::istream& in) {
  t_ = io::read_pod<std::int64_t>(in);
  for (size_t i = 0; i < params_.size(); ++i) {
    m_[i] = io::read_mat(in);
    v_[i] = io::read_mat(in);
  }
}

SgdMomentum::SgdMomentum(std::vector<Param*> params,
                         std::map<std::string, double> group_lrs, double momentum)
    : Optimizer(std::move(params), std::move(group_lrs)), momentum_(momentum) {
  for (Param* p : params_)
    velocity_.push_back(Mat::Zero(p->value.rows(), p->value.cols()));
}

void SgdMomentum::step(double lr_factor) {
  for (size_t i = 0; i < params_.size(); ++i) {
    Param& p = *params_[i];
    velocity_[i] = momentum_ * velocity_[i] + p.grad;
    p.value -= lr_of(p) * lr_factor * velocity_[i];
  }
}

void SgdMomentum::save_state(std::ostream& out) const {
  for (const Mat& v : velocity_) io::write_mat(out, v);
}

void SgdMomentum::load_state(std::istream& in) {
  for (Mat& v : velocity_) v = io::read_mat(in);
}

}  // namespace sscl
