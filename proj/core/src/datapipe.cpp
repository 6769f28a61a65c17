// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#include "sscl/datapipe.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace fs = std::filesystem;

namespace sscl {
namespace {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform(rng, 0.0, 1.0) < p;
}

Image hflip(const Image& img) {
  Image out(img.height, img.width);
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c)
      for (int ch = 0; ch < 3; ++ch) out.at(r, c, ch) = img.at(r, img.width - 1 - c, ch);
  return out;
}

Image vflip(const Image& img) {
  Image out(img.height, img.width);
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c)
      for (int ch = 0; ch < 3; ++ch) out.at(r, c, ch) = img.at(img.height - 1 - r, c, ch);
  return out;
}

LabelMap flip_mask(const LabelMap& m, bool horizontal) {
  LabelMap out = m;
  for (int r = 0; r < m.height; ++r)
    for (int c = 0; c < m.width; ++c)
      out.at(r, c) = horizontal ? m.at(r, m.width - 1 - c) : m.at(m.height - 1 - r, c);
  return out;
}

// Rotation about the image center; bilinear for images, nearest for masks,
// coordinates clamped to the border.
Image rotate_image(const Image& img, double deg) {
  const double rad = deg * std::numbers::pi / 180.0;
  const double cs = std::cos(rad), sn = std::sin(rad);
  const double cy = (img.height - 1) / 2.0, cx = (img.width - 1) / 2.0;
  Image out(img.height, img.width);
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      const double dy = r - cy, dx = c - cx;
      const double sy = std::clamp(cy + cs * dy - sn * dx, 0.0, double(img.height - 1));
      const double sx = std::clamp(cx + sn * dy + cs * dx, 0.0, double(img.width - 1));
      const int y0 = static_cast<int>(sy), x0 = static_cast<int>(sx);
      const int y1 = std::min(y0 + 1, img.height - 1);
      const int x1 = std::min(x0 + 1, img.width - 1);
      const double wy = sy - y0, wx = sx - x0;
      for (int ch = 0; ch < 3; ++ch) {
        const double top = (1 - wx) * img.at(y0, x0, ch) + wx * img.at(y0, x1, ch);
        const double bot = (1 - wx) * img.at(y1, x0, ch) + wx * img.at(y1, x1, ch);
        out.at(r, c, ch) = (1 - wy) * top + wy * bot;
      }
    }
  }
  return out;
}

LabelMap rotate_mask(const LabelMap& m, double deg) {
  const double rad = deg * std::numbers::pi / 180.0;
  const double cs = std::cos(rad), sn = std::sin(rad);
  const double cy = (m.height - 1) / 2.0, cx = (m.width - 1) / 2.0;
  LabelMap out = m;
  for (int r = 0; r < m.height; ++r) {
    for (int c = 0; c < m.width; ++c) {
      const double dy = r - cy, dx = c - cx;
      const int sy = std::clamp<int>(std::lround(cy + cs * dy - sn * dx), 0, m.height - 1);
      const int sx = std::clamp<int>(std::lround(cx + sn * dy + cs * dx), 0, m.width - 1);
      out.at(r, c) = m.at(sy, sx);
    }
  }
  return out;
}

Image crop(const Image& img, int top, int left, int h, int w) {
  Image out(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      for (int ch = 0; ch < 3; ++ch) out.at(r, c, ch) = img.at(top + r, left + c, ch);
  return out;
}

LabelMap resize_mask_nearest(const LabelMap& m, int out_h, int out_w) {
  LabelMap out;
  out.height = out_h;
  out.width = out_w;
  out.ids.resize(static_cast<size_t>(out_h) * out_w);
  for (int r = 0; r < out_h; ++r) {
    const int sr = std::min<int>(static_cast<int>(double(r) * m.height / out_h), m.height - 1);
    for (int c = 0; c < out_w; ++c) {
      const int sc = std::min<int>(static_cast<int>(double(c) * m.width / out_w), m.width - 1);
      out.at(r, c) = m.at(sr, sc);
    }
  }
  return out;
}

Image gaussian_blur(const Image& img, double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;

  Image tmp(img.height, img.width), out(img.height, img.width);
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c)
      for (int ch = 0; ch < 3; ++ch) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i)
          acc += k[i + radius] * img.at(r, std::clamp(c + i, 0, img.width - 1), ch);
        tmp.at(r, c, ch) = acc;
      }
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c)
      for (int ch = 0; ch < 3; ++ch) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i)
          acc += k[i + radius] * tmp.at(std::clamp(r + i, 0, img.height - 1), c, ch);
        out.at(r, c, ch) = acc;
      }
  return out;
}

double gray_of(const Image& img, int r, int c) {
  return 0.299 * img.at(r, c, 0) + 0.587 * img.at(r, c, 1) + 0.114 * img.at(r, c, 2);
}

void apply_desaturate(Image* img, double amount) {
  for (int r = 0; r < img->height; ++r)
    for (int c = 0; c < img->width; ++c) {
      const double g = gray_of(*img, r, c);
      for (int ch = 0; ch < 3; ++ch)
        img->at(r, c, ch) = (1 - amount) * img->at(r, c, ch) + amount * g;
    }
}

// Hue rotation as an RGB-space rotation about the gray axis.
void apply_hue(Image* img, double turns) {
  const double angle = turns * 2.0 * std::numbers::pi;
  const double cs = std::cos(angle), sn = std::sin(angle);
  const double m00 = cs + (1 - cs) / 3.0;
  const double m01 = (1 - cs) / 3.0 - sn / std::sqrt(3.0);
  const double m02 = (1 - cs) / 3.0 + sn / std::sqrt(3.0);
  for (int r = 0; r < img->height; ++r)
    for (int c = 0; c < img->width; ++c) {
      const double R = img->at(r, c, 0), G = img->at(r, c, 1), B = img->at(r, c, 2);
      img->at(r, c, 0) = m00 * R + m01 * G + m02 * B;
      img->at(r, c, 1) = m02 * R + m00 * G + m01 * B;
      img->at(r, c, 2) = m01 * R + m02 * G + m00 * B;
    }
}

void clamp_image(Image* img) {
  for (double& v : img->data) v = std::clamp(v, 0.0, 1.0);
}

// Parameters of one sampled shape chain, so image and mask transform alike.
struct ShapeParams {
  bool hflip = false, vflip = false;
  double rot_deg = 0.0;
  int crop_top = 0, crop_left = 0, crop_h = 0, crop_w = 0;
  int out_h = 0, out_w = 0;
};

ShapeParams sample_shape_params(const Image& img, const AugmentationPolicy& p, Rng& rng) {
  ShapeParams sp;
  sp.hflip = coin(rng, p.hflip_prob);
  sp.vflip = coin(rng, p.vflip_prob);
  if (p.rotation_deg > 0.0) sp.rot_deg = uniform(rng, -p.rotation_deg, p.rotation_deg);
  sp.out_h = p.resize_target > 0 ? p.resize_target : img.height;
  sp.out_w = p.resize_target > 0 ? p.resize_target : img.width;
  // aspect-preserving random area crop; degenerate draws re-sample, then
  // fall back to the full image
  sp.crop_h = img.height;
  sp.crop_w = img.width;
  for (int attempt = 0; attempt < 10; ++attempt) {
    const double scale = uniform(rng, p.crop_scale_min, p.crop_scale_max);
    const double lin = std::sqrt(scale);
    const int h = static_cast<int>(std::lround(lin * img.height));
    const int w = static_cast<int>(std::lround(lin * img.width));
    if (h < 1 || w < 1 || h > img.height || w > img.width) continue;
    sp.crop_h = h;
    sp.crop_w = w;
    break;
  }
  sp.crop_top = sp.crop_h < img.height
                    ? std::uniform_int_distribution<int>(0, img.height - sp.crop_h)(rng)
                    : 0;
  sp.crop_left = sp.crop_w < img.width
                     ? std::uniform_int_distribution<int>(0, img.width - sp.crop_w)(rng)
                     : 0;
  return sp;
}

Image apply_shape(const Image& img, const ShapeParams& sp) {
  Image out = img;
  if (sp.hflip) out = hflip(out);
  if (sp.vflip) out = vflip(out);
  if (sp.rot_deg != 0.0) out = rotate_image(out, sp.rot_deg);
  if (sp.crop_h != out.height || sp.crop_w != out.width)
    out = crop(out, sp.crop_top, sp.crop_left, sp.crop_h, sp.crop_w);
  if (out.height != sp.out_h || out.width != sp.out_w)
    out = resize_bilinear(out, sp.out_h, sp.out_w);
  return out;
}

LabelMap apply_shape_mask(const LabelMap& mask, const ShapeParams& sp) {
  LabelMap out = mask;
  if (sp.hflip) out = flip_mask(out, true);
  if (sp.vflip) out = flip_mask(out, false);
  if (sp.rot_deg != 0.0) out = rotate_mask(out, sp.rot_deg);
  LabelMap cropped;
  cropped.height = sp.crop_h;
  cropped.width = sp.crop_w;
  cropped.ids.resize(static_cast<size_t>(sp.crop_h) * sp.crop_w);
  for (int r = 0; r < sp.crop_h; ++r)
    for (int c = 0; c < sp.crop_w; ++c)
      cropped.at(r, c) = out.at(sp.crop_top + r, sp.crop_left + c);
  if (cropped.height != sp.out_h || cropped.width != sp.out_w)
    cropped = resize_mask_nearest(cropped, sp.out_h, sp.out_w);
  return cropped;
}

void apply_pixel_ops(Image* out, const AugmentationPolicy& p, Rng& rng) {
  if (coin(rng, p.jitter_prob)) {
    if (p.jitter_brightness > 0.0) {
      const double f = 1.0 + uniform(rng, -p.jitter_brightness, p.jitter_brightness);
      for (double& v : out->data) v *= f;
    }
    if (p.jitter_contrast > 0.0) {
      const double f = 1.0 + uniform(rng, -p.jitter_contrast, p.jitter_contrast);
      double mean = 0.0;
      for (int r = 0; r < out->height; ++r)
        for (int c = 0; c < out->width; ++c) mean += gray_of(*out, r, c);
      mean /= out->size();
      for (double& v : out->data) v = (v - mean) * f + mean;
    }
    if (p.jitter_saturation > 0.0) {
      // f > 0 pulls toward gray, f < 0 pushes away
      const double f = uniform(rng, -p.jitter_saturation, p.jitter_saturation);
      for (int r = 0; r < out->height; ++r)
        for (int c = 0; c < out->width; ++c) {
          const double g = gray_of(*out, r, c);
          for (int ch = 0; ch < 3; ++ch)
            out->at(r, c, ch) = g + (out->at(r, c, ch) - g) * (1.0 - f);
        }
    }
    if (p.jitter_hue > 0.0) apply_hue(out, uniform(rng, -p.jitter_hue, p.jitter_hue));
  }
  if (coin(rng, p.desaturate_prob)) apply_desaturate(out, 1.0);
  if (coin(rng, p.blur_prob))
    *out = gaussian_blur(*out, uniform(rng, p.blur_sigma_min, p.blur_sigma_max));
  clamp_image(out);
}

}  // namespace

AugmentationPolicy AugmentationPolicy::identity() {
  AugmentationPolicy p;
  p.hflip_prob = p.vflip_prob = 0.0;
  p.crop_scale_min = p.crop_scale_max = 1.0;
  p.rotation_deg = 0.0;
  p.blur_prob = 0.0;
  p.jitter_prob = 0.0;
  p.desaturate_prob = 0.0;
  return p;
}

void AugmentationPolicy::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  check(prob(hflip_prob) && prob(vflip_prob) && prob(blur_prob) && prob(jitter_prob) &&
            prob(desaturate_prob),
        "AugmentationPolicy: probabilities must be in [0,1]");
  check(crop_scale_min > 0.0 && crop_scale_min <= crop_scale_max && crop_scale_max <= 1.0,
        "AugmentationPolicy: crop scale must be in (0,1]");
  check(blur_sigma_min > 0.0 && blur_sigma_min <= blur_sigma_max,
        "AugmentationPolicy: invalid blur sigma range");
}

Image augment(const Image& img, const AugmentationPolicy& policy, Rng& rng) {
  policy.validate();
  Image out = apply_shape(img, sample_shape_params(img, policy, rng));
  apply_pixel_ops(&out, policy, rng);
  return out;
}

std::pair<Image, Image> two_view(const Image& img, const AugmentationPolicy& policy,
                                 Rng& rng) {
  Image v1 = augment(img, policy, rng);
  Image v2 = augment(img, policy, rng);
  return {std::move(v1), std::move(v2)};
}

std::pair<Image, LabelMap> augment_with_mask(const Image& img, const LabelMap& mask,
                                             const AugmentationPolicy& policy,
                                             Rng& rng) {
  policy.validate();
  check(img.height == mask.height && img.width == mask.width,
        "augment_with_mask: image/mask shape mismatch");
  const ShapeParams sp = sample_shape_params(img, policy, rng);
  Image out = apply_shape(img, sp);
  LabelMap out_mask = apply_shape_mask(mask, sp);
  apply_pixel_ops(&out, policy, rng);
  return {std::move(out), std::move(out_mask)};
}

void ChronoSplit::validate() const {
  check(train_sol_lo <= train_sol_hi && test_sol_lo <= test_sol_hi,
        "ChronoSplit: empty sol interval");
  check(train_sol_hi < test_sol_lo || test_sol_hi < train_sol_lo,
        "ChronoSplit: train and test sol ranges overlap");
}

SplitResult chrono_split(const std::vector<int>& sols, const ChronoSplit& split,
                         Rng& rng) {
  split.validate();
  SplitResult out;
  for (int i = 0; i < static_cast<int>(sols.size()); ++i) {
    const int s = sols[i];
    if (s >= split.train_sol_lo && s <= split.train_sol_hi)
      out.train_val.push_back(i);
    else if (s >= split.test_sol_lo && s <= split.test_sol_hi)
      out.test.push_back(i);
    else
      ++out.out_of_range;
  }
  if (split.shuffle_train_val)
    std::shuffle(out.train_val.begin(), out.train_val.end(), rng);
  return out;
}

std::vector<std::pair<int, int>> class_balanced_batch(const std::vector<int>& pool_labels,
                                                      Rng& rng) {
  check(!pool_labels.empty(), "class_balanced_batch: empty pool");
  std::map<int, std::vector<int>> by_class;
  for (int i = 0; i < static_cast<int>(pool_labels.size()); ++i) {
    check(pool_labels[i] >= 0, "class_balanced_batch: unlabeled sample in pool");
    by_class[pool_labels[i]].push_back(i);
  }
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(by_class.size());
  for (const auto& [cls, members] : by_class) {
    const int n = static_cast<int>(members.size());
    const int a = std::uniform_int_distribution<int>(0, n - 1)(rng);
    int b = a;
    if (n >= 2) {
      b = std::uniform_int_distribution<int>(0, n - 2)(rng);
      if (b >= a) ++b;
    }
    pairs.emplace_back(members[a], members[b]);
  }
  return pairs;
}

LabelMap label_downsample(const LabelMap& labels, int target_h, int target_w) {
  check(target_h >= 1 && target_w >= 1, "label_downsample: invalid target size");
  check(target_h <= labels.height && target_w <= labels.width,
        "label_downsample: target larger than source");
  LabelMap out;
  out.height = target_h;
  out.width = target_w;
  out.ids.resize(static_cast<size_t>(target_h) * target_w);
  for (int r = 0; r < target_h; ++r) {
    const int sr = static_cast<int>(static_cast<std::int64_t>(r) * labels.height / target_h);
    for (int c = 0; c < target_w; ++c) {
      const int sc = static_cast<int>(static_cast<std::int64_t>(c) * labels.width / target_w);
      out.at(r, c) = labels.at(sr, sc);
    }
  }
  return out;
}

LabelMap label_downsample_majority(const LabelMap& labels, int target_h, int target_w) {
  check(target_h >= 1 && target_w >= 1, "label_downsample_majority: invalid target size");
  check(target_h <= labels.height && target_w <= labels.width,
        "label_downsample_majority: target larger than source");
  LabelMap out;
  out.height = target_h;
  out.width = target_w;
  out.ids.resize(static_cast<size_t>(target_h) * target_w);
  for (int r = 0; r < target_h; ++r) {
    const int r0 = r * labels.height / target_h;
    const int r1 = (r + 1) * labels.height / target_h;
    for (int c = 0; c < target_w; ++c) {
      const int c0 = c * labels.width / target_w;
      const int c1 = (c + 1) * labels.width / target_w;
      std::map<int, int> votes;
      for (int rr = r0; rr < std::max(r1, r0 + 1); ++rr)
        for (int cc = c0; cc < std::max(c1, c0 + 1); ++cc) ++votes[labels.at(rr, cc)];
      int best = kUnlabeled, best_n = -1;
      for (const auto& [id, n] : votes)
        if (n > best_n) best = id, best_n = n;
      out.at(r, c) = best;
    }
  }
  return out;
}

// ---- layouts ----

void save_cls_dataset(const std::string& root, const ClsDataset& ds) {
  fs::create_directories(root);
  std::ofstream index(fs::path(root) / "index.csv");
  if (!index) throw DataError("save_cls_dataset: cannot write index in " + root);
  index << "id,sol,class\n";
  for (const auto& s : ds.samples) {
    check(s.label >= 0 && s.label < ds.num_classes(), "save_cls_dataset: bad label");
    const std::string& cname = ds.class_names[s.label];
    fs::create_directories(fs::path(root) / cname);
    write_ppm((fs::path(root) / cname / (s.id + ".ppm")).string(), s.image);
    index << s.id << ',' << s.sol << ',' << cname << '\n';
  }
}

ClsDataset load_cls_dataset(const std::string& root) {
  std::ifstream index(fs::path(root) / "index.csv");
  if (!index) throw DataError("load_cls_dataset: missing index.csv in " + root);
  std::string line;
  std::getline(index, line);  // header
  ClsDataset ds;
  std::map<std::string, int> class_ids;
  // class ids follow sorted directory names so loading is order-independent
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) class_ids.emplace(entry.path().filename().string(), 0);
  for (auto& [name, id] : class_ids) {
    id = static_cast<int>(ds.class_names.size());
    ds.class_names.push_back(name);
  }
  while (std::getline(index, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string id, sol_str, cname;
    std::getline(ss, id, ',');
    std::getline(ss, sol_str, ',');
    std::getline(ss, cname, ',');
    auto it = class_ids.find(cname);
    if (it == class_ids.end())
      throw DataError("load_cls_dataset: unknown class '" + cname + "'");
    ClsSample s;
    s.id = id;
    s.sol = std::stoi(sol_str);
    s.label = it->second;
    s.image = read_ppm((fs::path(root) / cname / (id + ".ppm")).string());
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

void save_seg_dataset(const std::string& root, const SegDataset& ds) {
  fs::create_directories(fs::path(root) / "images");
  fs::create_directories(fs::path(root) / "labels");
  std::ofstream sols(fs::path(root) / "sols.csv");
  if (!sols) throw DataError("save_seg_dataset: cannot write sols in " + root);
  sols << "id,sol\n";
  for (const auto& s : ds.samples) {
    write_ppm((fs::path(root) / "images" / (s.id + ".ppm")).string(), s.image);
    write_mask_pgm((fs::path(root) / "labels" / (s.id + ".pgm")).string(), s.mask);
    sols << s.id << ',' << s.sol << '\n';
  }
}

SegDataset load_seg_dataset(const std::string& root, int num_classes) {
  std::ifstream sols(fs::path(root) / "sols.csv");
  if (!sols) throw DataError("load_seg_dataset: missing sols.csv in " + root);
  std::string line;
  std::getline(sols, line);
  SegDataset ds;
  ds.num_classes = num_classes;
  while (std::getline(sols, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string id, sol_str;
    std::getline(ss, id, ',');
    std::getline(ss, sol_str, ',');
    SegSample s;
    s.id = id;
    s.sol = std::stoi(sol_str);
    s.image = read_ppm((fs::path(root) / "images" / (id + ".ppm")).string());
    s.mask = read_mask_pgm((fs::path(root) / "labels" / (id + ".pgm")).string());
    for (int v : s.mask.ids)
      if (v != kUnlabeled && v >= num_classes)
        throw DataError("load_seg_dataset: mask id exceeds num_classes in " + id);
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

std::vector<Image> load_unlabeled_pool(const std::string& dir) {
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".ppm")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  std::vector<Image> pool;
  pool.reserve(paths.size());
  for (const auto& p : paths) pool.push_back(read_ppm(p.string()));
  return pool;
}

}  // namespace sscl
