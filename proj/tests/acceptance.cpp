// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: ten numbered criteria, one pass/fail line each.
// Exit code 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gradcheck.hpp"
#include "sscl/config.hpp"
#include "sscl/losses.hpp"
#include "sscl/membank.hpp"
#include "sscl/pseudolabel.hpp"
#include "sscl/runner.hpp"

namespace fs = std::filesystem;
using gradcheck::check_grad;
using gradcheck::random_mat;
using sscl::EmbeddingBatch;
using sscl::FeatureMap;
using sscl::LabelMap;
using sscl::Mat;
using sscl::RunConfig;
using sscl::Vec;

namespace {

bool g_all_ok = true;

class Criterion {
 public:
  Criterion(int number, std::string title)
      : number_(number), title_(std::move(title)), start_(clock::now()) {}

  void fail(const std::string& why) {
    ok_ = false;
    if (!why.empty()) notes_.push_back(why);
  }
  void require(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
  void note(const std::string& text) { notes_.push_back(text); }
  void budget(double max_seconds) { budget_ = max_seconds; }

  ~Criterion() {
    const double secs =
        std::chrono::duration<double>(clock::now() - start_).count();
    if (budget_ > 0.0 && secs >= budget_) {
      ok_ = false;
      notes_.push_back("over runtime budget of " + std::to_string(budget_) + "s");
    }
    std::printf("[%s] %2d. %s (%.1fs)", ok_ ? "PASS" : "FAIL", number_,
                title_.c_str(), secs);
    for (const auto& n : notes_) std::printf(" | %s", n.c_str());
    std::printf("\n");
    std::fflush(stdout);
    g_all_ok = g_all_ok && ok_;
  }

 private:
  using clock = std::chrono::steady_clock;
  int number_;
  std::string title_;
  clock::time_point start_;
  bool ok_ = true;
  double budget_ = 0.0;
  std::vector<std::string> notes_;
};

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "sscl_acceptance";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

LabelMap random_labels(int h, int w, int num_classes, double unlabeled_frac,
                       std::mt19937_64& rng) {
  LabelMap lm;
  lm.height = h;
  lm.width = w;
  std::uniform_int_distribution<int> cls(0, num_classes - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < h * w; ++i)
    lm.ids.push_back(u(rng) < unlabeled_frac ? sscl::kUnlabeled : cls(rng));
  return lm;
}

// ---- criterion 1: analytic gradients vs central differences ----

void criterion_gradients() {
  Criterion c(1, "gradient suite: all differentiable losses vs central differences");
  c.budget(60.0);
  std::mt19937_64 rng(101);
  int checked = 0, failed = 0;
  auto tally = [&](bool ok) {
    ++checked;
    failed += !ok;
  };

  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 5, d = 3 + t % 4;
    const double tau = 0.1 + 0.05 * (t % 4);
    // info_nce, both inputs
    {
      const Mat a = random_mat(n, d, rng), b = random_mat(n, d, rng);
      Mat da, db;
      sscl::info_nce(a, b, tau, &da, &db);
      tally(check_grad([&](const Mat& x) { return sscl::info_nce(x, b, tau); }, a, da).ok);
      tally(check_grad([&](const Mat& x) { return sscl::info_nce(a, x, tau); }, b, db).ok);
    }
    // supervised inter-class
    {
      EmbeddingBatch anc, pos;
      anc.rows = random_mat(n, d, rng);
      pos.rows = random_mat(n, d, rng);
      for (int i = 0; i < n; ++i) anc.labels.push_back(i);
      pos.labels = anc.labels;
      std::shuffle(pos.labels.begin(), pos.labels.end(), rng);
      // keep rows aligned with the shuffled labels
      Mat shuffled = pos.rows;
      pos.rows = shuffled;
      Mat da, dp;
      sscl::supervised_interclass_loss(anc, pos, tau, &da, &dp);
      tally(check_grad(
                [&](const Mat& x) {
                  EmbeddingBatch probe = anc;
                  probe.rows = x;
                  return sscl::supervised_interclass_loss(probe, pos, tau);
                },
                anc.rows, da)
                .ok);
      tally(check_grad(
                [&](const Mat& x) {
                  EmbeddingBatch probe = pos;
                  probe.rows = x;
                  return sscl::supervised_interclass_loss(anc, probe, tau);
                },
                pos.rows, dp)
                .ok);
    }
    // similarity
    {
      const Mat a = random_mat(n, d, rng), b = random_mat(n, d, rng);
      Mat da, db;
      sscl::similarity_loss(a, b, &da, &db);
      tally(check_grad([&](const Mat& x) { return sscl::similarity_loss(x, b); }, a, da).ok);
      tally(check_grad([&](const Mat& x) { return sscl::similarity_loss(a, x); }, b, db).ok);
    }
    // classification cross entropy
    {
      const int cls = 2 + t % 6;
      const Mat logits = random_mat(n, cls, rng);
      std::vector<int> targets;
      std::uniform_int_distribution<int> pick(0, cls - 1);
      for (int i = 0; i < n; ++i) targets.push_back(pick(rng));
      Mat dl;
      sscl::cls_cross_entropy(logits, targets, &dl);
      tally(check_grad([&](const Mat& x) { return sscl::cls_cross_entropy(x, targets); },
                       logits, dl)
                .ok);
    }
    // naive element-wise
    {
      const int h = 2 + t % 2, w = 2 + (t / 2) % 2;
      FeatureMap fm;
      fm.height = h;
      fm.width = w;
      fm.features = random_mat(h * w, d, rng);
      const LabelMap lm = random_labels(h, w, 3, 0.2, rng);
      if (lm.labeled_count() >= 2) {
        Mat df;
        sscl::elementwise_naive_loss(fm, lm, tau, &df);
        tally(check_grad(
                  [&](const Mat& x) {
                    FeatureMap probe = fm;
                    probe.features = x;
                    return sscl::elementwise_naive_loss(probe, lm, tau);
                  },
                  fm.features, df)
                  .ok);
      }
    }
    // memory-bank contrastive
    {
      const int h = 2, w = 2, cls = 3;
      FeatureMap fm;
      fm.height = h;
      fm.width = w;
      fm.features = random_mat(h * w, d, rng);
      const LabelMap lm = random_labels(h, w, cls, 0.25, rng);
      sscl::ClassMemoryBank bank(cls, d, 4);
      for (int push = 0; push < 3; ++push) {
        FeatureMap past;
        past.height = h;
        past.width = w;
        past.features = random_mat(h * w, d, rng);
        bank.push_batch_means(past, random_labels(h, w, cls, 0.2, rng));
      }
      const auto centroids = bank.snapshot_centroids();
      Mat df;
      const auto res = sscl::bank_contrastive_loss(fm, lm, centroids, tau, &df);
      if (!res.warmup)
        tally(check_grad(
                  [&](const Mat& x) {
                    FeatureMap probe = fm;
                    probe.features = x;
                    return sscl::bank_contrastive_loss(probe, lm, centroids, tau).value;
                  },
                  fm.features, df)
                  .ok);
    }
    // segmentation cross entropy
    {
      const int h = 2 + t % 2, w = 2, cls = 3;
      const Mat logits = random_mat(h * w, cls, rng);
      const LabelMap lm = random_labels(h, w, cls, 0.3, rng);
      if (lm.labeled_count() >= 1) {
        Mat dl;
        sscl::seg_cross_entropy(logits, lm, &dl);
        tally(check_grad(
                  [&](const Mat& x) { return sscl::seg_cross_entropy(x, lm).value; },
                  logits, dl)
                  .ok);
      }
    }
  }
  c.note(std::to_string(checked) + " gradient checks");
  c.require(failed == 0, std::to_string(failed) + " gradient mismatches");
  c.require(checked >= 7 * 20 - 40, "too few instances generated");
}

// ---- criterion 2: closed-form identities and invariances ----

void criterion_identities() {
  Criterion c(2, "loss identities: ln N / ln C / -1 / 0, scale and masking invariance");
  c.budget(30.0);
  std::mt19937_64 rng(202);

  // info_nce with all views of all samples identical -> uniform softmax, ln N
  for (int n = 2; n <= 8; ++n) {
    const Mat shared = random_mat(1, 4, rng);
    const Mat views = shared.replicate(n, 1);
    c.require(std::abs(sscl::info_nce(views, views, 0.2) - std::log(double(n))) < 1e-6,
              "info_nce uniform case != ln N at N=" + std::to_string(n));
  }
  // supervised loss with all-identical class representations -> ln C
  for (int cls = 2; cls <= 24; ++cls) {
    const Mat shared = random_mat(1, 6, rng);
    EmbeddingBatch anc, pos;
    anc.rows = shared.replicate(cls, 1);
    pos.rows = anc.rows;
    for (int i = 0; i < cls; ++i) anc.labels.push_back(i);
    pos.labels = anc.labels;
    c.require(std::abs(sscl::supervised_interclass_loss(anc, pos, 0.2) -
                       std::log(double(cls))) < 1e-6,
              "supervised identical reps != ln C at C=" + std::to_string(cls));
  }
  // similarity: equal views -> -1; orthogonal views -> 0
  {
    const Mat v = random_mat(5, 4, rng);
    c.require(std::abs(sscl::similarity_loss(v, v) + 1.0) < 1e-6,
              "similarity(v, v) != -1");
    Mat a = Mat::Zero(3, 4), b = Mat::Zero(3, 4);
    for (int i = 0; i < 3; ++i) {
      a(i, 0) = 1.0;
      b(i, 1) = 1.0;
    }
    c.require(std::abs(sscl::similarity_loss(a, b)) < 1e-6,
              "similarity of orthogonal views != 0");
  }
  // scale invariance of the cosine-kernel losses, 100 random instances
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 4, d = 3 + t % 3;
    const Mat a = random_mat(n, d, rng), b = random_mat(n, d, rng);
    const double s = std::pow(10.0, (t % 7) - 3);
    c.require(std::abs(sscl::info_nce(a, b, 0.2) - sscl::info_nce(Mat(s * a), b, 0.2)) <
                  1e-9,
              "info_nce not scale-invariant");
    c.require(std::abs(sscl::similarity_loss(a, b) -
                       sscl::similarity_loss(Mat(s * a), Mat(s * b))) < 1e-9,
              "similarity not scale-invariant");
  }
  // masking: permuting UNLABELED elements' features changes nothing, 100 cases
  for (int t = 0; t < 100; ++t) {
    const int h = 3, w = 3, cls = 3, d = 4;
    const LabelMap lm = random_labels(h, w, cls, 0.4, rng);
    const Mat logits = random_mat(h * w, cls, rng);
    Mat scrambled = logits;
    for (int i = 0; i < h * w; ++i)
      if (lm.ids[i] == sscl::kUnlabeled) scrambled.row(i) = random_mat(1, cls, rng);
    c.require(sscl::seg_cross_entropy(logits, lm).value ==
                  sscl::seg_cross_entropy(scrambled, lm).value,
              "seg CE depends on unlabeled elements");

    FeatureMap fm;
    fm.height = h;
    fm.width = w;
    fm.features = random_mat(h * w, d, rng);
    sscl::ClassMemoryBank bank(cls, d, 4);
    FeatureMap past;
    past.height = h;
    past.width = w;
    past.features = random_mat(h * w, d, rng);
    bank.push_batch_means(past, random_labels(h, w, cls, 0.0, rng));
    const auto centroids = bank.snapshot_centroids();
    FeatureMap moved = fm;
    for (int i = 0; i < h * w; ++i)
      if (lm.ids[i] == sscl::kUnlabeled) moved.features.row(i) = random_mat(1, d, rng);
    c.require(sscl::bank_contrastive_loss(fm, lm, centroids, 0.07).value ==
                  sscl::bank_contrastive_loss(moved, lm, centroids, 0.07).value,
              "bank loss depends on unlabeled elements");
  }
}

// ---- criterion 3: oracle equivalences ----

void criterion_oracles() {
  Criterion c(3, "oracle equivalence: degenerate bank vs naive; metrics vs brute force");
  c.budget(60.0);
  std::mt19937_64 rng(303);

  // Degenerate configuration: per-class features all identical, classes
  // equally populated, every queue holding exactly the current per-class
  // mean. Both losses reduce to the same softmax over class means (unequal
  // counts would weight the naive numerator/denominator by multiplicity).
  for (int t = 0; t < 50; ++t) {
    const int h = 2 + t % 3, w = 2 + (t / 3) % 3, cls = 2 + t % 3, d = 3 + t % 4;
    const int per_class = (h * w) / cls;
    if (per_class < 1) continue;
    LabelMap lm;
    lm.height = h;
    lm.width = w;
    lm.ids.assign(h * w, sscl::kUnlabeled);
    std::vector<int> order(h * w);
    for (int i = 0; i < h * w; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (int k = 0; k < cls; ++k)
      for (int m = 0; m < per_class; ++m) lm.ids[order[k * per_class + m]] = k;
    FeatureMap fm;
    fm.height = h;
    fm.width = w;
    fm.features.resize(h * w, d);
    std::vector<Vec> rep(cls);
    for (int k = 0; k < cls; ++k) rep[k] = random_mat(1, d, rng).row(0);
    for (int i = 0; i < h * w; ++i) {
      const int id = lm.ids[i];
      fm.features.row(i) =
          id == sscl::kUnlabeled ? Vec(random_mat(1, d, rng).row(0)) : rep[id];
    }
    sscl::ClassMemoryBank bank(cls, d, 4);
    bank.push_batch_means(fm, lm);
    const double via_bank =
        sscl::bank_contrastive_loss(fm, lm, bank.snapshot_centroids(), 0.2).value;
    const double via_naive = sscl::elementwise_naive_loss(fm, lm, 0.2);
    c.require(std::abs(via_bank - via_naive) < 1e-5,
              "bank vs naive degenerate mismatch");
  }

  // Metrics vs a from-scratch tally over random prediction/truth streams.
  for (int t = 0; t < 100; ++t) {
    const int cls = 2 + t % 5, n = 20 + t;
    std::vector<int> pred, truth;
    std::uniform_int_distribution<int> pick(0, cls - 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
      pred.push_back(pick(rng));
      truth.push_back(u(rng) < 0.15 ? sscl::kUnlabeled : pick(rng));
    }
    const auto cm = sscl::confusion(pred, truth, cls);
    std::vector<std::vector<std::int64_t>> tally(cls, std::vector<std::int64_t>(cls, 0));
    for (int i = 0; i < n; ++i)
      if (truth[i] != sscl::kUnlabeled) ++tally[truth[i]][pred[i]];
    std::int64_t total = 0, diag = 0;
    for (int a = 0; a < cls; ++a)
      for (int b = 0; b < cls; ++b) {
        c.require(cm.at(a, b) == tally[a][b], "confusion cell mismatch");
        total += tally[a][b];
        if (a == b) diag += tally[a][b];
      }
    const auto m = sscl::segmentation_metrics(cm);
    c.require(std::abs(m.acc - double(diag) / double(total)) < 1e-12, "acc mismatch");
    double macc = 0.0, miou = 0.0, fwiou = 0.0;
    int present = 0, with_union = 0;
    for (int a = 0; a < cls; ++a) {
      std::int64_t row = 0, col = 0;
      for (int b = 0; b < cls; ++b) {
        row += tally[a][b];
        col += tally[b][a];
      }
      if (row > 0) {
        macc += double(tally[a][a]) / double(row);
        ++present;
      }
      const std::int64_t uni = row + col - tally[a][a];
      if (uni > 0) {
        miou += double(tally[a][a]) / double(uni);
        ++with_union;
        fwiou += double(row) / double(total) * double(tally[a][a]) / double(uni);
      }
    }
    c.require(std::abs(m.macc - macc / present) < 1e-12, "macc mismatch");
    c.require(std::abs(m.miou - miou / with_union) < 1e-12, "miou mismatch");
    c.require(std::abs(m.facc - fwiou) < 1e-12, "facc mismatch");
  }
}

// ---- criterion 4: FIFO and centroid properties ----

void criterion_fifo() {
  Criterion c(4, "memory bank FIFO exhaustive to 3x capacity, exact centroids");
  c.budget(10.0);
  const int d = 3;
  for (int cap : {1, 2, 3, 5, 32}) {
    sscl::ClassMemoryBank bank(1, d, cap);
    std::vector<Vec> pushed;
    for (int k = 0; k < 3 * cap; ++k) {
      Vec v = Vec::Zero(d);
      v[0] = k + 1.0;
      v[1] = -double(k);
      FeatureMap fm;
      fm.height = fm.width = 1;
      fm.features = v.transpose();
      LabelMap lm;
      lm.height = lm.width = 1;
      lm.ids = {0};
      bank.push_batch_means(fm, lm);
      pushed.push_back(v);
      // queue must hold exactly the last min(k+1, cap) means, oldest first
      const int expect = std::min(k + 1, cap);
      c.require(bank.queue_size(0) == expect, "queue size wrong");
      Vec mean = Vec::Zero(d);
      for (int i = 0; i < expect; ++i) {
        const Vec& want = pushed[pushed.size() - expect + i];
        c.require(bank.queue(0)[i] == want, "FIFO order violated");
        mean += want;
      }
      mean /= double(expect);
      const auto centroids = bank.snapshot_centroids();
      c.require(centroids[0].has_value() &&
                    (*centroids[0] - mean).lpNorm<Eigen::Infinity>() < 1e-12,
                "centroid != queue mean");
    }
  }
  // empty queues stay empty
  sscl::ClassMemoryBank bank(2, d, 4);
  c.require(!bank.snapshot_centroids()[1].has_value(), "empty queue has a centroid");
}

// ---- criterion 5: pseudo-label properties + ablation thresholds ----

RunConfig tiny_seg_config(double threshold) {
  RunConfig cfg = sscl::parse_run_config(R"({
    "task": "segment", "seed": 5,
    "dataset": {"kind": "synthetic", "synthetic": {
      "num_classes": 4, "image_size": 16, "seg_train_count": 6, "seg_test_count": 3,
      "unlabeled_fraction": 0.45}},
    "model": {"width1": 4, "width2": 6, "width3": 6, "proj_hidden": 6, "proj_dim": 6},
    "plan": {"seg_batch": 3, "seg_step_epochs": [1, 1, 1]}
  })");
  cfg.plan.pseudo_threshold = threshold;
  return cfg;
}

void criterion_pseudolabel() {
  Criterion c(5, "pseudo-label properties and thresholds {0.99,0.9,0.7,0.5} end to end");
  std::mt19937_64 rng(505);
  for (int t = 0; t < 100; ++t) {
    const int h = 3, w = 4, cls = 4;
    const LabelMap y = random_labels(h, w, cls, 0.5, rng);
    const Mat logits = random_mat(h * w, cls, rng, 2.0);
    const auto conf = sscl::confidence_from_logits(logits, h, w);
    const auto strict = sscl::merge_labels(y, conf, 0.9);
    const auto loose = sscl::merge_labels(y, conf, 0.5);
    for (int i = 0; i < h * w; ++i) {
      // ground truth conservation
      if (y.ids[i] != sscl::kUnlabeled) {
        c.require(strict.grid.ids[i] == y.ids[i], "ground truth overwritten");
        c.require(strict.source[i] == sscl::LabelSource::GroundTruth,
                  "ground-truth source lost");
      }
      // threshold monotonicity: labels only grow as the threshold loosens
      if (strict.grid.ids[i] != sscl::kUnlabeled)
        c.require(loose.grid.ids[i] == strict.grid.ids[i],
                  "loose threshold lost a strict label");
    }
    // idempotence: merging a merged mask again changes nothing
    const auto again = sscl::merge_labels(strict.grid, conf, 0.9);
    c.require(again.grid.ids == strict.grid.ids, "merge not idempotent");
  }
  // ablation thresholds all runnable end to end on the toy seg task
  for (double threshold : {0.99, 0.9, 0.7, 0.5}) {
    const fs::path out = work_dir() / ("thr_" + std::to_string(threshold));
    fs::remove_all(out);
    try {
      sscl::run_train(tiny_seg_config(threshold), out.string());
    } catch (const std::exception& e) {
      c.fail("threshold " + std::to_string(threshold) + " run failed: " + e.what());
    }
  }
}

// ---- criterion 6: schedule exactness ----

void criterion_schedules() {
  Criterion c(6, "lr schedules: step milestones and polynomial annealing closed forms");
  c.require(sscl::lr_at_epoch_cls(0, 1e-3) == 1e-3, "epoch 0 lr");
  c.require(sscl::lr_at_epoch_cls(19, 1e-3) == 1e-3, "epoch 19 lr");
  c.require(std::abs(sscl::lr_at_epoch_cls(20, 1e-3) - 1e-4) < 1e-15, "epoch 20 lr");
  c.require(std::abs(sscl::lr_at_epoch_cls(24, 1e-3) - 1e-4) < 1e-15, "epoch 24 lr");
  c.require(std::abs(sscl::lr_at_epoch_cls(25, 1e-3) - 1e-5) < 1e-15, "epoch 25 lr");
  c.require(std::abs(sscl::lr_at_epoch_cls(29, 1e-3) - 1e-5) < 1e-15, "epoch 29 lr");
  const std::int64_t T = 720;
  c.require(sscl::lr_at_iter_seg(0, T, 0.01, 0.9) == 0.01, "poly start");
  c.require(sscl::lr_at_iter_seg(T, T, 0.01, 0.9) == 0.0, "poly end");
  c.require(std::abs(sscl::lr_at_iter_seg(T / 2, T, 0.01, 1.0) - 0.005) < 1e-15,
            "linear midpoint");
  for (std::int64_t it : {std::int64_t(1), T / 3, T - 1})
    c.require(std::abs(sscl::lr_at_iter_seg(it, T, 0.01, 0.9) -
                       0.01 * std::pow(1.0 - double(it) / double(T), 0.9)) < 1e-15,
              "poly closed form");
}

// ---- criteria 7/8: toy experiments ----

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.size() && line.back() == ',') cells.push_back("");
    rows.push_back(std::move(cells));
  }
  return rows;
}

double final_metric(const fs::path& csv, int column) {
  const auto rows = read_csv(csv);
  return std::stod(rows.back().at(column));
}

void criterion_toy_cls() {
  Criterion c(7, "toy classification: full objective vs CE-only, mean gap >= 2.0 pts");
  const RunConfig full = sscl::load_run_config(
      (fs::path(SSCL_CONFIG_DIR) / "toy_cls.json").string());
  RunConfig ce = full;
  ce.loss.lambda_s_cls = 0.0;
  ce.loss.lambda_u_cls = 0.0;
  double mean_full = 0.0, mean_ce = 0.0;
  for (std::uint64_t seed : {1, 2, 3}) {
    for (bool use_full : {true, false}) {
      RunConfig cfg = use_full ? full : ce;
      cfg.seed = seed;
      cfg.plan.seed = seed;
      const fs::path out = work_dir() / ("cls_" + std::to_string(seed) +
                                         (use_full ? "_full" : "_ce"));
      fs::remove_all(out);
      const auto outcome = sscl::run_train(cfg, out.string());
      (use_full ? mean_full : mean_ce) += outcome.final_top1_or_miou / 3.0;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "mean top-1 full %.1f%% vs CE-only %.1f%%",
                100.0 * mean_full, 100.0 * mean_ce);
  c.note(buf);
  c.require(mean_full >= mean_ce + 0.02, "gap below 2.0 points");
}

void criterion_toy_seg() {
  Criterion c(8, "toy segmentation: three-step vs CE-only mIoU, stage-3 transient");
  const RunConfig three = sscl::load_run_config(
      (fs::path(SSCL_CONFIG_DIR) / "toy_seg.json").string());
  RunConfig ce = three;
  ce.plan.seg_ce_only = true;
  double mean_three = 0.0, mean_ce = 0.0;
  int transients = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    for (bool use_three : {true, false}) {
      RunConfig cfg = use_three ? three : ce;
      cfg.seed = seed;
      cfg.plan.seed = seed;
      const fs::path out = work_dir() / ("seg_" + std::to_string(seed) +
                                         (use_three ? "_three" : "_ce"));
      fs::remove_all(out);
      const auto outcome = sscl::run_train(cfg, out.string());
      (use_three ? mean_three : mean_ce) += outcome.final_top1_or_miou / 3.0;
      if (!use_three) continue;
      // stage-3 boundary transient: mIoU dips right after the stage-2/3
      // boundary, then recovers to at least the pre-boundary value
      const auto rows = read_csv(out / "metrics.csv");
      double pre = -1.0, dip = 2.0, final = -1.0;
      for (size_t i = 1; i < rows.size(); ++i) {
        const int stage = std::stoi(rows[i][1]);
        const double miou = std::stod(rows[i][10]);
        if (stage == 2) pre = miou;
        if (stage == 3) {
          dip = std::min(dip, miou);
          final = miou;
        }
      }
      if (pre >= 0.0 && dip < pre && final >= pre) ++transients;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "mean mIoU three-step %.3f vs CE-only %.3f; transient on %d/3 seeds",
                mean_three, mean_ce, transients);
  c.note(buf);
  c.require(mean_three >= mean_ce, "three-step mIoU below CE-only");
  c.require(transients >= 2, "stage-3 drop-and-recovery not observed");
}

// ---- criterion 9: byte determinism ----

void criterion_determinism() {
  Criterion c(9, "determinism: repeated runs produce byte-identical metrics CSVs");
  const RunConfig cls = sscl::parse_run_config(R"({
    "task": "classify", "seed": 11,
    "dataset": {"kind": "synthetic", "synthetic": {
      "num_classes": 3, "image_size": 8, "labeled_counts": [4, 4, 4],
      "unlabeled_count": 6, "test_count": 9}},
    "model": {"width1": 3, "width2": 4, "width3": 4, "proj_hidden": 4, "proj_dim": 4},
    "plan": {"cls_epochs": 2, "cls_batch": 4, "cls_milestones": [1, 2]}
  })");
  const fs::path a = work_dir() / "det_cls_a", b = work_dir() / "det_cls_b";
  fs::remove_all(a);
  fs::remove_all(b);
  sscl::run_train(cls, a.string());
  sscl::run_train(cls, b.string());
  c.require(slurp(a / "metrics.csv") == slurp(b / "metrics.csv"),
            "classification CSVs differ");
  const RunConfig seg = tiny_seg_config(0.9);
  const fs::path sa = work_dir() / "det_seg_a", sb = work_dir() / "det_seg_b";
  fs::remove_all(sa);
  fs::remove_all(sb);
  sscl::run_train(seg, sa.string());
  sscl::run_train(seg, sb.string());
  c.require(slurp(sa / "metrics.csv") == slurp(sb / "metrics.csv"),
            "segmentation CSVs differ");
}

// ---- criterion 10: real-data configs (data-gated) ----

void criterion_real_data() {
  Criterion c(10, "real-data configs ship the published hyperparameters (data-gated)");
  const RunConfig cls = sscl::load_run_config(
      (fs::path(SSCL_CONFIG_DIR) / "msl_cls.json").string());
  c.require(cls.plan.cls_epochs == 30 && cls.plan.cls_batch == 16 &&
                cls.plan.cls_lr_heads == 1e-3 && cls.plan.cls_lr_backbone == 1e-6 &&
                cls.plan.cls_milestones == std::vector<int>{20, 25} &&
                cls.loss.tau_cls == 0.2 && cls.loss.lambda_u_cls == 0.2 &&
                cls.model.num_classes == 24,
            "msl_cls.json hyperparameters drifted");
  const RunConfig seg = sscl::load_run_config(
      (fs::path(SSCL_CONFIG_DIR) / "ai4mars_seg.json").string());
  c.require(seg.plan.seg_lr == 0.01 && seg.plan.seg_poly_power == 0.9 &&
                seg.plan.seg_batch == 16 &&
                seg.plan.seg_step_epochs == std::array<int, 3>{60, 60, 60} &&
                seg.plan.bank_capacity == 32 && seg.plan.pseudo_threshold == 0.9 &&
                seg.loss.tau_seg == 0.07 && seg.loss.lambda_s_seg == 0.001 &&
                seg.dataset.num_classes == 4,
            "ai4mars_seg.json hyperparameters drifted");
  const bool msl_present = fs::exists(cls.dataset.cls_root);
  const bool ai4mars_present = fs::exists(seg.dataset.seg_root);
  if (!msl_present && !ai4mars_present) {
    c.note("datasets not present; config checks only");
    return;
  }
  if (msl_present) {
    cls.validate();
    sscl::prepare_data(cls);
    c.note("MSL data loaded");
  }
  if (ai4mars_present) {
    seg.validate();
    sscl::prepare_data(seg);
    c.note("AI4Mars data loaded");
  }
}

}  // namespace

int main() {
  criterion_gradients();
  criterion_identities();
  criterion_oracles();
  criterion_fifo();
  criterion_pseudolabel();
  criterion_schedules();
  criterion_toy_cls();
  criterion_toy_seg();
  criterion_determinism();
  criterion_real_data();
  std::printf(g_all_ok ? "acceptance: all criteria passed\n"
                       : "acceptance: FAILURES present\n");
  return g_all_ok ? 0 : 1;
}
