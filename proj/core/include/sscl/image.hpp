// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "sscl/common.hpp"

namespace sscl {

// Interleaved RGB image with values in [0,1].
struct Image {
  int height = 0;
  int width = 0;
  std::vector<double> data;  // height*width*3, row-major

  Image() = default;
  Image(int h, int w) : height(h), width(w), data(static_cast<size_t>(h) * w * 3, 0.0) {}

  double& at(int r, int c, int ch) { return data[(static_cast<size_t>(r) * width + c) * 3 + ch]; }
  double at(int r, int c, int ch) const { return data[(static_cast<size_t>(r) * width + c) * 3 + ch]; }
  int size() const { return height * width; }
};

// Binary PPM (P6) image files.
void write_ppm(const std::string& path, const Image& img);
Image read_ppm(const std::string& path);

// Binary PGM (P5) single-channel masks; class ids with 255 = unlabeled.
void write_mask_pgm(const std::string& path, const LabelMap& mask);
LabelMap read_mask_pgm(const std::string& path);

// Bilinear resize with edge clamping.
Image resize_bilinear(const Image& img, int out_h, int out_w);

}  // namespace sscl
