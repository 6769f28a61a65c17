// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#include "sscl/nn.hpp"

#include <cmath>

namespace sscl {
namespace {

Mat he_init(int rows, int cols, int fan_in, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / fan_in));
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

}  // namespace

FeatBatch to_feat_batch(const std::vector<Image>& images) {
  check(!images.empty(), "to_feat_batch: empty batch");
  FeatBatch out;
  out.height = images[0].height;
  out.width = images[0].width;
  for (const Image& img : images) {
    check(img.height == out.height && img.width == out.width,
          "to_feat_batch: inconsistent image sizes");
    Mat m(3, img.size());
    for (int ch = 0; ch < 3; ++ch)
      for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c)
          m(ch, r * img.width + c) = img.at(r, c, ch);
    out.maps.push_back(std::move(m));
  }
  return out;
}

// ---- Conv2d ----

Conv2d::Conv2d(std::string name, std::string group, int in_ch, int out_ch, int ksize,
               int stride, int pad, std::mt19937_64& rng)
    : in_ch_(in_ch), out_ch_(out_ch), ksize_(ksize), stride_(stride), pad_(pad) {
  const int fan_in = in_ch * ksize * ksize;
  weight = {name + ".weight", group, he_init(out_ch, fan_in, fan_in, rng), Mat()};
  bias = {name + ".bias", group, Mat::Zero(out_ch, 1), Mat()};
  weight.zero_grad();
  bias.zero_grad();
}

FeatBatch Conv2d::forward(const FeatBatch& in) {
  in_h_ = in.height;
  in_w_ = in.width;
  out_h_ = (in.height + 2 * pad_ - ksize_) / stride_ + 1;
  out_w_ = (in.width + 2 * pad_ - ksize_) / stride_ + 1;
  check(in.channels() == in_ch_, "Conv2d: channel mismatch");

  FeatBatch out;
  out.height = out_h_;
  out.width = out_w_;
  cols_.clear();
  cols_.reserve(in.maps.size());
  const int patch = in_ch_ * ksize_ * ksize_;
  for (const Mat& x : in.maps) {
    Mat cols = Mat::Zero(patch, out_h_ * out_w_);
    for (int oy = 0; oy < out_h_; ++oy) {
      for (int ox = 0; ox < out_w_; ++ox) {
        const int col = oy * out_w_ + ox;
        int row = 0;
        for (int ch = 0; ch < in_ch_; ++ch)
          for (int ky = 0; ky < ksize_; ++ky)
            for (int kx = 0; kx < ksize_; ++kx, ++row) {
              const int iy = oy * stride_ - pad_ + ky;
              const int ix = ox * stride_ - pad_ + kx;
              if (iy >= 0 && iy < in_h_ && ix >= 0 && ix < in_w_)
                cols(row, col) = x(ch, iy * in_w_ + ix);
            }
      }
    }
    Mat y = weight.value * cols;
    y.colwise() += bias.value.col(0);
    out.maps.push_back(std::move(y));
    cols_.push_back(std::move(cols));
  }
  return out;
}

FeatBatch Conv2d::backward(const FeatBatch& dout) {
  FeatBatch din;
  din.height = in_h_;
  din.width = in_w_;
  for (size_t n = 0; n < dout.maps.size(); ++n) {
    const Mat& dy = dout.maps[n];
    weight.grad += dy * cols_[n].transpose();
    bias.grad.col(0) += dy.rowwise().sum();
    const Mat dcols = weight.value.transpose() * dy;
    Mat dx = Mat::Zero(in_ch_, in_h_ * in_w_);
    for (int oy = 0; oy < out_h_; ++oy) {
      for (int ox = 0; ox < out_w_; ++ox) {
        const int col = oy * out_w_ + ox;
        int row = 0;
        for (int ch = 0; ch < in_ch_; ++ch)
          for (int ky = 0; ky < ksize_; ++ky)
            for (int kx = 0; kx < ksize_; ++kx, ++row) {
              const int iy = oy * stride_ - pad_ + ky;
              const int ix = ox * stride_ - pad_ + kx;
              if (iy >= 0 && iy < in_h_ && ix >= 0 && ix < in_w_)
                dx(ch, iy * in_w_ + ix) += dcols(row, col);
            }
      }
    }
    din.maps.push_back(std::move(dx));
  }
  return din;
}

// ---- ReLU ----

FeatBatch ReLU::forward(const FeatBatch& in) {
  height_ = in.height;
  width_ = in.width;
  mask_.clear();
  FeatBatch out;
  out.height = in.height;
  out.width = in.width;
  for (const Mat& x : in.maps) {
    mask_.push_back((x.array() > 0.0).cast<double>().matrix());
    out.maps.push_back(x.cwiseMax(0.0));
  }
  return out;
}

FeatBatch ReLU::backward(const FeatBatch& dout) {
  FeatBatch din;
  din.height = height_;
  din.width = width_;
  for (size_t n = 0; n < dout.maps.size(); ++n)
    din.maps.push_back(dout.maps[n].cwiseProduct(mask_[n]));
  return din;
}

// ---- MaxPool2d ----

FeatBatch MaxPool2d::forward(const FeatBatch& in) {
  in_h_ = in.height;
  in_w_ = in.width;
  const int oh = in.height / 2, ow = in.width / 2;
  FeatBatch out;
  out.height = oh;
  out.width = ow;
  argmax_.clear();
  for (const Mat& x : in.maps) {
    const int ch = static_cast<int>(x.rows());
    Mat y(ch, oh * ow);
    Eigen::MatrixXi arg(ch, oh * ow);
    for (int c = 0; c < ch; ++c)
      for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox) {
          double best = -std::numeric_limits<double>::infinity();
          int best_idx = 0;
          for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
              const int idx = (2 * oy + dy) * in_w_ + (2 * ox + dx);
              if (x(c, idx) > best) {
                best = x(c, idx);
                best_idx = idx;
              }
            }
          y(c, oy * ow + ox) = best;
          arg(c, oy * ow + ox) = best_idx;
        }
    out.maps.push_back(std::move(y));
    argmax_.push_back(std::move(arg));
  }
  return out;
}

FeatBatch MaxPool2d::backward(const FeatBatch& dout) {
  FeatBatch din;
  din.height = in_h_;
  din.width = in_w_;
  for (size_t n = 0; n < dout.maps.size(); ++n) {
    const Mat& dy = dout.maps[n];
    Mat dx = Mat::Zero(dy.rows(), in_h_ * in_w_);
    for (Eigen::Index c = 0; c < dy.rows(); ++c)
      for (Eigen::Index i = 0; i < dy.cols(); ++i)
        dx(c, argmax_[n](c, i)) += dy(c, i);
    din.maps.push_back(std::move(dx));
  }
  return din;
}

// ---- GlobalAvgPool ----

Mat GlobalAvgPool::forward(const FeatBatch& in) {
  height_ = in.height;
  width_ = in.width;
  n_ = in.size();
  Mat out(in.size(), in.channels());
  for (int i = 0; i < in.size(); ++i)
    out.row(i) = in.maps[i].rowwise().mean().transpose();
  return out;
}

FeatBatch GlobalAvgPool::backward(const Mat& dout) {
  FeatBatch din;
  din.height = height_;
  din.width = width_;
  const double scale = 1.0 / (height_ * width_);
  for (int i = 0; i < n_; ++i) {
    Mat dx(dout.cols(), height_ * width_);
    for (Eigen::Index c = 0; c < dout.cols(); ++c)
      dx.row(c).setConstant(dout(i, c) * scale);
    din.maps.push_back(std::move(dx));
  }
  return din;
}

// ---- Linear ----

Linear::Linear(std::string name, std::string group, int in_dim, int out_dim,
               std::mt19937_64& rng) {
  weight = {name + ".weight", group, he_init(out_dim, in_dim, in_dim, rng), Mat()};
  bias = {name + ".bias", group, Mat::Zero(out_dim, 1), Mat()};
  weight.zero_grad();
  bias.zero_grad();
}

Mat Linear::forward(const Mat& in) {
  in_ = in;
  Mat out = in * weight.value.transpose();
  out.rowwise() += bias.value.col(0).transpose();
  return out;
}

Mat Linear::backward(const Mat& dout) {
  weight.grad += dout.transpose() * in_;
  bias.grad.col(0) += dout.colwise().sum().transpose();
  return dout * weight.value;
}

Mat ReLUVec::forward(const Mat& in) {
  mask_ = (in.array() > 0.0).cast<double>().matrix();
  return in.cwiseMax(0.0);
}

Mat ReLUVec::backward(const Mat& dout) { return dout.cwiseProduct(mask_); }

// ---- models ----

void ModelSpec::validate() const {
  if (backbone != "tinyconv")
    throw ConfigError("ModelSpec: unknown backbone '" + backbone + "'");
  if (num_classes < 2) throw ConfigError("ModelSpec: num_classes must be >= 2");
  if (input_size < 8 || input_size % 4 != 0)
    throw ConfigError("ModelSpec: input_size must be >= 8 and divisible by 4");
  if (width1 < 1 || width2 < 1 || width3 < 1 || proj_hidden < 1 || proj_dim < 2)
    throw ConfigError("ModelSpec: invalid layer widths");
}

ClsNet::ClsNet(const ModelSpec& spec, std::uint64_t init_seed) : spec_(spec) {
  spec.validate();
  std::mt19937_64 rng(init_seed);
  conv1_ = std::make_unique<Conv2d>("backbone.conv1", "backbone", 3, spec.width1, 3, 1, 1, rng);
  conv2_ = std::make_unique<Conv2d>("backbone.conv2", "backbone", spec.width1, spec.width2, 3, 1, 1, rng);
  conv3_ = std::make_unique<Conv2d>("backbone.conv3", "backbone", spec.width2, spec.width3, 3, 1, 1, rng);
  head_cls_ = std::make_unique<Linear>("head_cls", "cls_head", spec.width3, spec.num_classes, rng);
  proj_s1_ = std::make_unique<Linear>("proj_s.fc1", "proj", spec.width3, spec.proj_hidden, rng);
  proj_s2_ = std::make_unique<Linear>("proj_s.fc2", "proj", spec.proj_hidden, spec.proj_dim, rng);
  proj_u1_ = std::make_unique<Linear>("proj_u.fc1", "proj", spec.width3, spec.proj_hidden, rng);
  proj_u2_ = std::make_unique<Linear>("proj_u.fc2", "proj", spec.proj_hidden, spec.proj_dim, rng);
}

Mat ClsNet::backbone_forward(const std::vector<Image>& images) {
  FeatBatch x = to_feat_batch(images);
  x = relu1_.forward(conv1_.get()->forward(x));
  x = pool1_.forward(x);
  x = relu2_.forward(conv2_.get()->forward(x));
  x = pool2_.forward(x);
  x = relu3_.forward(conv3_.get()->forward(x));
  return gap_.forward(x);
}

void ClsNet::backbone_backward(const Mat& dpooled) {
  FeatBatch d = gap_.backward(dpooled);
  d = conv3_->backward(relu3_.backward(d));
  d = pool2_.backward(d);
  d = conv2_->backward(relu2_.backward(d));
  d = pool1_.backward(d);
  conv1_->backward(relu1_.backward(d));
}

Mat ClsNet::proj_s(const Mat& pooled) {
  return proj_s2_->forward(proj_s_relu_.forward(proj_s1_->forward(pooled)));
}

Mat ClsNet::proj_s_backward(const Mat& dproj) {
  return proj_s1_->backward(proj_s_relu_.backward(proj_s2_->backward(dproj)));
}

Mat ClsNet::proj_u(const Mat& pooled) {
  return proj_u2_->forward(proj_u_relu_.forward(proj_u1_->forward(pooled)));
}

Mat ClsNet::proj_u_backward(const Mat& dproj) {
  return proj_u1_->backward(proj_u_relu_.backward(proj_u2_->backward(dproj)));
}

std::vector<Param*> ClsNet::params() {
  return {&conv1_->weight,   &conv1_->bias,   &conv2_->weight,   &conv2_->bias,
          &conv3_->weight,   &conv3_->bias,   &head_cls_->weight, &head_cls_->bias,
          &proj_s1_->weight, &proj_s1_->bias, &proj_s2_->weight, &proj_s2_->bias,
          &proj_u1_->weight, &proj_u1_->bias, &proj_u2_->weight, &proj_u2_->bias};
}

SegNet::SegNet(const ModelSpec& spec, std::uint64_t init_seed) : spec_(spec) {
  spec.validate();
  std::mt19937_64 rng(init_seed);
  conv1_ = std::make_unique<Conv2d>("backbone.conv1", "backbone", 3, spec.width1, 3, 1, 1, rng);
  conv2_ = std::make_unique<Conv2d>("backbone.conv2", "backbone", spec.width1, spec.width2, 3, 2, 1, rng);
  conv3_ = std::make_unique<Conv2d>("backbone.conv3", "backbone", spec.width2, spec.width3, 3, 1, 1, rng);
  head_seg_ = std::make_unique<Conv2d>("head_seg", "seg_head", spec.width3, spec.num_classes, 1, 1, 0, rng);
  proj1_ = std::make_unique<Conv2d>("proj.fc1", "proj", spec.width3, spec.proj_hidden, 1, 1, 0, rng);
  proj2_ = std::make_unique<Conv2d>("proj.fc2", "proj", spec.proj_hidden, spec.proj_dim, 1, 1, 0, rng);
}

FeatBatch SegNet::backbone_forward(const std::vector<Image>& images) {
  FeatBatch x = to_feat_batch(images);
  x = relu1_.forward(conv1_->forward(x));
  x = relu2_.forward(conv2_->forward(x));
  x = relu3_.forward(conv3_->forward(x));
  return x;
}

void SegNet::backbone_backward(const FeatBatch& dfeat) {
  FeatBatch d = conv3_->backward(relu3_.backward(dfeat));
  d = conv2_->backward(relu2_.backward(d));
  conv1_->backward(relu1_.backward(d));
}

FeatBatch SegNet::seg_logits(const FeatBatch& feat) { return head_seg_->forward(feat); }

FeatBatch SegNet::seg_logits_backward(const FeatBatch& dlogits) {
  return head_seg_->backward(dlogits);
}

FeatBatch SegNet::proj(const FeatBatch& feat) {
  return proj2_->forward(proj_relu_.forward(proj1_->forward(feat)));
}

FeatBatch SegNet::proj_backward(const FeatBatch& dproj) {
  return proj1_->backward(proj_relu_.backward(proj2_->backward(dproj)));
}

std::vector<Param*> SegNet::params() {
  return {&conv1_->weight, &conv1_->bias, &conv2_->weight,    &conv2_->bias,
          &conv3_->weight, &conv3_->bias, &head_seg_->weight, &head_seg_->bias,
          &proj1_->weight, &proj1_->bias, &proj2_->weight,    &proj2_->bias};
}

FeatureMap to_feature_map(const Mat& chan_major, int height, int width) {
  FeatureMap fm;
  fm.height = height;
  fm.width = width;
  fm.features = chan_major.transpose();
  return fm;
}

Mat from_feature_map_grad(const Mat& grad_rows, int channels) {
  check(grad_rows.cols() == channels, "from_feature_map_grad: channel mismatch");
  return grad_rows.transpose();
}

void zero_grads(const std::vector<Param*>& params) {
  for (Param* p : params) p->zero_grad();
}

}  // namespace sscl
