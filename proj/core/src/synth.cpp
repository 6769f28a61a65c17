// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#include "sscl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sscl {
namespace {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

struct Rgb {
  double r, g, b;
};

// Shape color is a per-image nuisance variable: geometry carries the class
// signal, so appearance drift (hue_shift) moves the palette without remapping
// classes.
Rgb shape_color(double hue_shift, Rng& rng) {
  const double hue = std::fmod(uniform(rng, 0.0, 1.0) + hue_shift + 1.0, 1.0);
  Rgb c;
  hsv_to_rgb(hue, uniform(rng, 0.55, 0.9), uniform(rng, 0.55, 0.9), &c.r, &c.g, &c.b);
  return c;
}

Image textured_background(int size, Rng& rng, double hue_shift) {
  Image img(size, size);
  const double base = uniform(rng, 0.25, 0.45);
  const double fx = uniform(rng, 1.0, 3.0), fy = uniform(rng, 1.0, 3.0);
  const double phase = uniform(rng, 0.0, 2 * std::numbers::pi);
  Rgb tint;
  hsv_to_rgb(std::fmod(uniform(rng, 0.05, 0.12) + hue_shift * 0.2 + 1.0, 1.0), 0.3,
             1.0, &tint.r, &tint.g, &tint.b);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) {
      const double wave =
          0.06 * std::sin(2 * std::numbers::pi * (fx * c + fy * r) / size + phase);
      const double noise = uniform(rng, -0.04, 0.04);
      const double v = base + wave + noise;
      img.at(r, c, 0) = v * tint.r;
      img.at(r, c, 1) = v * tint.g;
      img.at(r, c, 2) = v * tint.b;
    }
  return img;
}

// Paint the class-defining shape into img; when mask != nullptr also record
// the covered pixels there. Geometry carries the class signal, color does not.
void draw_shape(Image* img, LabelMap* mask, int shape_kind, int mask_id,
                const Rgb& color, int cy, int cx, int radius, Rng& rng) {
  const int size = img->height;
  auto paint = [&](int r, int c, double alpha) {
    if (r < 0 || r >= size || c < 0 || c >= size) return;
    img->at(r, c, 0) = (1 - alpha) * img->at(r, c, 0) + alpha * color.r;
    img->at(r, c, 1) = (1 - alpha) * img->at(r, c, 1) + alpha * color.g;
    img->at(r, c, 2) = (1 - alpha) * img->at(r, c, 2) + alpha * color.b;
    if (mask && alpha > 0.5) mask->at(r, c) = mask_id;
  };
  const int stripe = std::max(2, radius / 3);
  const int frame = std::max(2, radius / 4);
  for (int r = cy - radius; r <= cy + radius; ++r) {
    for (int c = cx - radius; c <= cx + radius; ++c) {
      const double dr = r - cy, dc = c - cx;
      const double dist = std::sqrt(dr * dr + dc * dc);
      switch (shape_kind % 4) {
        case 0:  // filled disk
          if (dist <= radius) paint(r, c, 1.0);
          break;
        case 1:  // square frame
          if (std::max(std::abs(dr), std::abs(dc)) <= radius &&
              std::max(std::abs(dr), std::abs(dc)) >= radius - frame)
            paint(r, c, 1.0);
          break;
        case 2:  // diagonal stripes inside a disk
          if (dist <= radius &&
              ((static_cast<int>(dr + dc) % (2 * stripe) + 2 * stripe) % (2 * stripe)) <
                  stripe)
            paint(r, c, 1.0);
          break;
        case 3:  // checkerboard patch
          if (std::max(std::abs(dr), std::abs(dc)) <= radius &&
              ((static_cast<int>(dr) / stripe + static_cast<int>(dc) / stripe) % 2 +
               2) % 2 ==
                  0)
            paint(r, c, 1.0);
          break;
      }
    }
  }
  (void)rng;
}

Image make_cls_image(int cls, int num_classes, int size, double hue_shift, Rng& rng) {
  Image img = textured_background(size, rng, hue_shift);
  const Rgb color = shape_color(hue_shift, rng);
  const int radius = static_cast<int>(uniform(rng, 0.18, 0.32) * size);
  const int cy = uniform_int(rng, radius, size - 1 - radius);
  const int cx = uniform_int(rng, radius, size - 1 - radius);
  draw_shape(&img, nullptr, cls, cls, color, cy, cx, radius, rng);
  return img;
}

std::vector<double> normalized(const std::vector<double>& w) {
  double s = 0.0;
  for (double v : w) s += v;
  std::vector<double> out(w.size());
  for (size_t i = 0; i < w.size(); ++i) out[i] = w[i] / s;
  return out;
}

int draw_class(const std::vector<double>& probs, Rng& rng) {
  double u = uniform(rng, 0.0, 1.0);
  for (size_t i = 0; i < probs.size(); ++i) {
    u -= probs[i];
    if (u <= 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

// Smooth random field thresholded at roughly the requested quantile.
void mask_unlabeled_region(LabelMap* mask, double fraction, Rng& rng) {
  const int size = mask->height;
  std::vector<double> field(mask->ids.size(), 0.0);
  for (int wave = 0; wave < 3; ++wave) {
    const double fx = uniform(rng, 0.5, 2.5), fy = uniform(rng, 0.5, 2.5);
    const double phase = uniform(rng, 0.0, 2 * std::numbers::pi);
    for (int r = 0; r < size; ++r)
      for (int c = 0; c < size; ++c)
        field[r * size + c] +=
            std::sin(2 * std::numbers::pi * (fx * c + fy * r) / size + phase);
  }
  std::vector<double> sorted = field;
  const auto k = static_cast<size_t>(fraction * sorted.size());
  if (k == 0) return;
  std::nth_element(sorted.begin(), sorted.begin() + k, sorted.end());
  const double cut = sorted[k];
  for (size_t i = 0; i < field.size(); ++i)
    if (field[i] < cut) mask->ids[i] = kUnlabeled;
}

}  // namespace

void hsv_to_rgb(double h, double s, double v, double* r, double* g, double* b) {
  const double hh = std::fmod(h, 1.0) * 6.0;
  const int i = static_cast<int>(hh) % 6;
  const double f = hh - std::floor(hh);
  const double p = v * (1 - s);
  const double q = v * (1 - s * f);
  const double t = v * (1 - s * (1 - f));
  switch (i) {
    case 0: *r = v; *g = t; *b = p; break;
    case 1: *r = q; *g = v; *b = p; break;
    case 2: *r = p; *g = v; *b = t; break;
    case 3: *r = p; *g = q; *b = v; break;
    case 4: *r = t; *g = p; *b = v; break;
    default: *r = v; *g = p; *b = q; break;
  }
}

void SynthSpec::validate() const {
  if (num_classes < 2) throw ConfigError("SynthSpec: num_classes must be >= 2");
  if (image_size < 8) throw ConfigError("SynthSpec: image_size must be >= 8");
  if (static_cast<int>(labeled_counts.size()) != num_classes)
    throw ConfigError("SynthSpec: labeled_counts must have one entry per class");
  for (int n : labeled_counts)
    if (n < 1) throw ConfigError("SynthSpec: labeled_counts entries must be >= 1");
  if (shift < 0.0 || shift > 1.0) throw ConfigError("SynthSpec: shift must be in [0,1]");
  if (unlabeled_fraction < 0.0 || unlabeled_fraction >= 1.0)
    throw ConfigError("SynthSpec: unlabeled_fraction must be in [0,1)");
  if (test_count < 1 || seg_train_count < 1 || seg_test_count < 1)
    throw ConfigError("SynthSpec: counts must be positive");
}

SynthClsOutput synth_cls_dataset(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  SynthClsOutput out;
  for (int c = 0; c < spec.num_classes; ++c)
    out.labeled.class_names.push_back("class_" + std::to_string(c));
  out.test.class_names = out.labeled.class_names;

  int sol = 0;
  for (int c = 0; c < spec.num_classes; ++c) {
    for (int i = 0; i < spec.labeled_counts[c]; ++i) {
      ClsSample s;
      s.label = c;
      s.sol = sol;
      s.id = "train_" + std::to_string(sol);
      s.image = make_cls_image(c, spec.num_classes, spec.image_size, 0.0, rng);
      out.labeled.samples.push_back(std::move(s));
      ++sol;
    }
  }

  // the environment drifts from the labeled-acquisition era toward the test
  // era: class frequencies interpolate from the training histogram to its
  // reversal, and the palette hue moves with the same parameter
  std::vector<double> train_w(spec.labeled_counts.begin(), spec.labeled_counts.end());
  std::vector<double> reversed(train_w.rbegin(), train_w.rend());
  const auto p_train = normalized(train_w);
  const auto p_rev = normalized(reversed);
  auto drifted = [&](double t) {
    std::vector<double> p(p_train.size());
    for (size_t i = 0; i < p.size(); ++i)
      p[i] = (1.0 - t) * p_train[i] + t * p_rev[i];
    return p;
  };

  // unlabeled acquisition continues while the environment drifts, so each
  // image sits at a random point along the train-to-test trajectory in both
  // class frequency and appearance
  for (int i = 0; i < spec.unlabeled_count; ++i) {
    const double t = uniform(rng, 0.0, 1.0) * spec.shift;
    out.unlabeled.push_back(make_cls_image(draw_class(drifted(t), rng),
                                           spec.num_classes, spec.image_size,
                                           0.5 * t, rng));
  }

  // test distribution: frequencies and appearance drift with `shift`
  const auto p_test = drifted(spec.shift);
  const double hue_shift = 0.5 * spec.shift;
  for (int i = 0; i < spec.test_count; ++i) {
    ClsSample s;
    s.label = draw_class(p_test, rng);
    s.sol = sol;
    s.id = "test_" + std::to_string(sol);
    s.image = make_cls_image(s.label, spec.num_classes, spec.image_size, hue_shift, rng);
    out.test.samples.push_back(std::move(s));
    ++sol;
  }
  return out;
}

SynthSegOutput synth_seg_dataset(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed ^ 0x5e67da7aULL);
  SynthSegOutput out;
  out.train.num_classes = spec.num_classes;
  out.test.num_classes = spec.num_classes;

  auto make_sample = [&](int sol, bool test, const std::string& id) {
    const double hue_shift = test ? 0.5 * spec.shift : 0.0;
    SegSample s;
    s.sol = sol;
    s.id = id;
    s.image = textured_background(spec.image_size, rng, hue_shift);
    s.mask.height = spec.image_size;
    s.mask.width = spec.image_size;
    s.mask.ids.assign(static_cast<size_t>(spec.image_size) * spec.image_size, 0);
    const int blobs = uniform_int(rng, 2, 4);
    // foreground classes are long-tailed: class c is twice as common as c+1
    std::vector<double> blob_w(spec.num_classes - 1);
    for (size_t i = 0; i < blob_w.size(); ++i)
      blob_w[i] = std::pow(2.0, double(blob_w.size() - 1 - i));
    const auto blob_p = normalized(blob_w);
    for (int b = 0; b < blobs; ++b) {
      const int cls = 1 + draw_class(blob_p, rng);
      const Rgb color = shape_color(hue_shift, rng);
      const int radius = static_cast<int>(uniform(rng, 0.12, 0.24) * spec.image_size);
      const int cy = uniform_int(rng, radius, spec.image_size - 1 - radius);
      const int cx = uniform_int(rng, radius, spec.image_size - 1 - radius);
      draw_shape(&s.image, &s.mask, cls, cls, color, cy, cx, radius, rng);
    }
    // training annotations have holes, test masks stay complete
    if (!test && spec.unlabeled_fraction > 0.0) {
      const double frac = std::clamp(
          spec.unlabeled_fraction + uniform(rng, -0.01, 0.01), 0.0, 0.95);
      mask_unlabeled_region(&s.mask, frac, rng);
    }
    return s;
  };

  int sol = 0;
  for (int i = 0; i < spec.seg_train_count; ++i, ++sol)
    out.train.samples.push_back(make_sample(sol, false, "train_" + std::to_string(sol)));
  for (int i = 0; i < spec.seg_test_count; ++i, ++sol)
    out.test.samples.push_back(make_sample(sol, true, "test_" + std::to_string(sol)));
  return out;
}

}  // namespace sscl
