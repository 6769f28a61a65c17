// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#include "sscl/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace sscl {
namespace {

unsigned char to_byte(double v) {
  const double clamped = std::clamp(v, 0.0, 1.0);
  return static_cast<unsigned char>(std::lround(clamped * 255.0));
}

void read_pnm_header(std::istream& in, const std::string& magic, int* w, int* h,
                     const std::string& path) {
  std::string tag;
  in >> tag;
  if (tag != magic) throw DataError(path + ": expected " + magic + " header");
  int maxval = 0;
  // headers may carry '#' comments between tokens
  auto next_int = [&in, &path]() {
    for (;;) {
      in >> std::ws;
      if (in.peek() == '#') {
        std::string line;
        std::getline(in, line);
        continue;
      }
      int v;
      if (!(in >> v)) throw DataError(path + ": malformed PNM header");
      return v;
    }
  };
  *w = next_int();
  *h = next_int();
  maxval = next_int();
  if (*w <= 0 || *h <= 0 || maxval != 255)
    throw DataError(path + ": unsupported PNM dimensions or maxval");
  in.get();  // single whitespace before raster
}

}  // namespace

void write_ppm(const std::string& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("write_ppm: cannot open " + path);
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  std::vector<unsigned char> raster(img.data.size());
  for (size_t i = 0; i < img.data.size(); ++i) raster[i] = to_byte(img.data[i]);
  out.write(reinterpret_cast<const char*>(raster.data()),
            static_cast<std::streamsize>(raster.size()));
}

Image read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("read_ppm: cannot open " + path);
  int w, h;
  read_pnm_header(in, "P6", &w, &h, path);
  Image img(h, w);
  std::vector<unsigned char> raster(static_cast<size_t>(h) * w * 3);
  in.read(reinterpret_cast<char*>(raster.data()),
          static_cast<std::streamsize>(raster.size()));
  if (!in) throw DataError(path + ": truncated PPM raster");
  for (size_t i = 0; i < raster.size(); ++i) img.data[i] = raster[i] / 255.0;
  return img;
}

void write_mask_pgm(const std::string& path, const LabelMap& mask) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("write_mask_pgm: cannot open " + path);
  out << "P5\n" << mask.width << " " << mask.height << "\n255\n";
  std::vector<unsigned char> raster(mask.ids.size());
  for (size_t i = 0; i < mask.ids.size(); ++i) {
    const int v = mask.ids[i];
    check(v == kUnlabeled || (v >= 0 && v < 255), "write_mask_pgm: id out of range");
    raster[i] = v == kUnlabeled ? 255 : static_cast<unsigned char>(v);
  }
  out.write(reinterpret_cast<const char*>(raster.data()),
            static_cast<std::streamsize>(raster.size()));
}

LabelMap read_mask_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("read_mask_pgm: cannot open " + path);
  int w, h;
  read_pnm_header(in, "P5", &w, &h, path);
  LabelMap mask;
  mask.height = h;
  mask.width = w;
  mask.ids.resize(static_cast<size_t>(h) * w);
  std::vector<unsigned char> raster(mask.ids.size());
  in.read(reinterpret_cast<char*>(raster.data()),
          static_cast<std::streamsize>(raster.size()));
  if (!in) throw DataError(path + ": truncated PGM raster");
  for (size_t i = 0; i < raster.size(); ++i)
    mask.ids[i] = raster[i] == 255 ? kUnlabeled : raster[i];
  return mask;
}

Image resize_bilinear(const Image& img, int out_h, int out_w) {
  check(out_h > 0 && out_w > 0, "resize_bilinear: invalid target size");
  Image out(out_h, out_w);
  const double sy = double(img.height) / out_h;
  const double sx = double(img.width) / out_w;
  for (int r = 0; r < out_h; ++r) {
    const double fy = std::clamp((r + 0.5) * sy - 0.5, 0.0, double(img.height - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double wy = fy - y0;
    for (int c = 0; c < out_w; ++c) {
      const double fx = std::clamp((c + 0.5) * sx - 0.5, 0.0, double(img.width - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, img.width - 1);
      const double wx = fx - x0;
      for (int ch = 0; ch < 3; ++ch) {
        const double top = (1 - wx) * img.at(y0, x0, ch) + wx * img.at(y0, x1, ch);
        const double bot = (1 - wx) * img.at(y1, x0, ch) + wx * img.at(y1, x1, ch);
        out.at(r, c, ch) = (1 - wy) * top + wy * bot;
      }
    }
  }
  return out;
}

}  // namespace sscl
