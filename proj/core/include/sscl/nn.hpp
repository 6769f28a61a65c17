// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "sscl/image.hpp"

namespace sscl {

struct Param {
  std::string name;
  std::string group;  // lr group: "backbone", "cls_head", "proj", "seg_head"
  Mat value;
  Mat grad;

  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

// A batch of channel-major feature maps: each entry is channels x (h*w).
struct FeatBatch {
  int height = 0;
  int width = 0;
  std::vector<Mat> maps;

  int size() const { return static_cast<int>(maps.size()); }
  int channels() const { return maps.empty() ? 0 : static_cast<int>(maps[0].rows()); }
};

FeatBatch to_feat_batch(const std::vector<Image>& images);

// ---- layers: forward caches what backward needs; grads accumulate ----

class Conv2d {
 public:
  Conv2d(std::string name, std::string group, int in_ch, int out_ch, int ksize,
         int stride, int pad, std::mt19937_64& rng);

  FeatBatch forward(const FeatBatch& in);
  FeatBatch backward(const FeatBatch& dout);

  Param weight, bias;

 private:
  int in_ch_, out_ch_, ksize_, stride_, pad_;
  int in_h_ = 0, in_w_ = 0, out_h_ = 0, out_w_ = 0;
  std::vector<Mat> cols_;  // cached im2col per image
};

class ReLU {
 public:
  FeatBatch forward(const FeatBatch& in);
  FeatBatch backward(const FeatBatch& dout);

 private:
  std::vector<Mat> mask_;
  int height_ = 0, width_ = 0;
};

class MaxPool2d {
 public:
  FeatBatch forward(const FeatBatch& in);  // 2x2, stride 2
  FeatBatch backward(const FeatBatch& dout);

 private:
  int in_h_ = 0, in_w_ = 0;
  std::vector<Eigen::MatrixXi> argmax_;
};

class GlobalAvgPool {
 public:
  Mat forward(const FeatBatch& in);  // N x channels
  FeatBatch backward(const Mat& dout);

 private:
  int height_ = 0, width_ = 0, n_ = 0;
};

class Linear {
 public:
  Linear(std::string name, std::string group, int in_dim, int out_dim,
         std::mt19937_64& rng);

  Mat forward(const Mat& in);  // N x in -> N x out
  Mat backward(const Mat& dout);

  Param weight, bias;  // weight: out x in

 private:
  Mat in_;
};

class ReLUVec {
 public:
  Mat forward(const Mat& in);
  Mat backward(const Mat& dout);

 private:
  Mat mask_;
};

// ---- model topology: shared backbone + independent heads ----

struct ModelSpec {
  std::string backbone = "tinyconv";
  int input_size = 64;
  int num_classes = 0;
  int width1 = 16;
  int width2 = 32;
  int width3 = 32;
  int proj_hidden = 32;
  int proj_dim = 128;  // projection-head output dimension

  void validate() const;
};

// Image -> pooled vector backbone plus classification and two projection
// heads. Streams share one backbone parameter set.
class ClsNet {
 public:
  ClsNet(const ModelSpec& spec, std::uint64_t init_seed);

  // backbone forward to pooled features (N x width3)
  Mat backbone_forward(const std::vector<Image>& images);
  void backbone_backward(const Mat& dpooled);

  Mat head_logits(const Mat& pooled) { return head_cls_->forward(pooled); }
  Mat head_logits_backward(const Mat& dlogits) { return head_cls_->backward(dlogits); }
  Mat proj_s(const Mat& pooled);
  Mat proj_s_backward(const Mat& dproj);
  Mat proj_u(const Mat& pooled);
  Mat proj_u_backward(const Mat& dproj);

  std::vector<Param*> params();
  const ModelSpec& spec() const { return spec_; }

 private:
  ModelSpec spec_;
  std::unique_ptr<Conv2d> conv1_, conv2_, conv3_;
  ReLU relu1_, relu2_, relu3_;
  MaxPool2d pool1_, pool2_;
  GlobalAvgPool gap_;
  std::unique_ptr<Linear> head_cls_;
  std::unique_ptr<Linear> proj_s1_, proj_s2_, proj_u1_, proj_u2_;
  ReLUVec proj_s_relu_, proj_u_relu_;
};

// Image -> feature-map backbone (stride 2) plus per-element segmentation and
// projection heads.
class SegNet {
 public:
  SegNet(const ModelSpec& spec, std::uint64_t init_seed);

  FeatBatch backbone_forward(const std::vector<Image>& images);
  void backbone_backward(const FeatBatch& dfeat);

  FeatBatch seg_logits(const FeatBatch& feat);
  FeatBatch seg_logits_backward(const FeatBatch& dlogits);
  FeatBatch proj(const FeatBatch& feat);
  FeatBatch proj_backward(const FeatBatch& dproj);

  // feature-map resolution for a given input size
  int feat_size(int input_size) const { return input_size / 2; }

  std::vector<Param*> params();
  const ModelSpec& spec() const { return spec_; }

 private:
  ModelSpec spec_;
  std::unique_ptr<Conv2d> conv1_, conv2_, conv3_;
  ReLU relu1_, relu2_, relu3_;
  std::unique_ptr<Conv2d> head_seg_;
  std::unique_ptr<Conv2d> proj1_, proj2_;
  ReLU proj_relu_;
};

// FeatBatch entry (channels x pixels) viewed as a FeatureMap ((h*w) x D).
FeatureMap to_feature_map(const Mat& chan_major, int height, int width);
Mat from_feature_map_grad(const Mat& grad_rows, int channels);

void zero_grads(const std::vector<Param*>& params);

}  // namespace sscl
