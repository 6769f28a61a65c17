// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "sscl/evalkit.hpp"

using sscl::ClassificationMetrics;
using sscl::ConfusionMatrix;
using sscl::FaccMode;
using sscl::SegmentationMetrics;

namespace {

// Independent double-loop tally, written before looking at the production code.
ConfusionMatrix oracle_confusion(const std::vector<int>& pred,
                                 const std::vector<int>& truth, int c) {
  ConfusionMatrix cm(c);
  for (size_t i = 0; i < pred.size(); ++i) {
    if (truth[i] == sscl::kUnlabeled) continue;
    cm.at(truth[i], pred[i]) += 1;
  }
  return cm;
}

ConfusionMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  ConfusionMatrix cm(static_cast<int>(rows.size()));
  for (int t = 0; t < cm.num_classes; ++t)
    for (int p = 0; p < cm.num_classes; ++p) cm.at(t, p) = rows[t][p];
  return cm;
}

}  // namespace

TEST_CASE("confusion: diagonal, all-unlabeled, contract errors") {
  const auto perfect = sscl::confusion({0, 1, 2, 1}, {0, 1, 2, 1}, 3);
  for (int t = 0; t < 3; ++t)
    for (int p = 0; p < 3; ++p)
      CHECK(perfect.at(t, p) == (t == p ? (t == 1 ? 2 : 1) : 0));

  const auto zero = sscl::confusion({0, 1}, {sscl::kUnlabeled, sscl::kUnlabeled}, 3);
  CHECK(zero.total() == 0);

  CHECK_THROWS_AS(sscl::confusion({3}, {0}, 3), sscl::ContractError);
  CHECK_THROWS_AS(sscl::confusion({0}, {3}, 3), sscl::ContractError);
  CHECK_THROWS_AS(sscl::confusion({0, 1}, {0}, 3), sscl::ContractError);
}

TEST_CASE("confusion matches brute-force oracle on random cases") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const int c = 2 + int(rng() % 6);
    const int n = 1 + int(rng() % 64);
    std::vector<int> pred(n), truth(n);
    for (int i = 0; i < n; ++i) {
      pred[i] = int(rng() % c);
      truth[i] = int(rng() % (c + 1)) - 1;  // includes unlabeled
    }
    const auto got = sscl::confusion(pred, truth, c);
    const auto want = oracle_confusion(pred, truth, c);
    CHECK(got.counts == want.counts);
  }
}

TEST_CASE("classification metrics closed forms") {
  const auto diag = sscl::confusion({0, 1, 2}, {0, 1, 2}, 3);
  CHECK(sscl::classification_metrics(diag).top1 == doctest::Approx(1.0));

  const auto cm = from_rows({{1, 1}, {0, 2}});
  const auto m = sscl::classification_metrics(cm);
  CHECK(m.top1 == doctest::Approx(0.75));
  REQUIRE(m.per_class_acc[0].has_value());
  CHECK(*m.per_class_acc[0] == doctest::Approx(0.5));
  CHECK(*m.per_class_acc[1] == doctest::Approx(1.0));

  // zero-support class is absent, not zero
  const auto sparse = from_rows({{3, 0, 0}, {0, 0, 0}, {1, 0, 1}});
  const auto ms = sscl::classification_metrics(sparse);
  CHECK_FALSE(ms.per_class_acc[1].has_value());

  CHECK_THROWS_AS(sscl::classification_metrics(ConfusionMatrix(3)), sscl::ContractError);
}

TEST_CASE("segmentation metrics hand oracle") {
  const auto perfect = sscl::confusion({0, 1, 1}, {0, 1, 1}, 2);
  const auto mp = sscl::segmentation_metrics(perfect);
  CHECK(mp.acc == doctest::Approx(1.0));
  CHECK(mp.macc == doctest::Approx(1.0));
  CHECK(mp.facc == doctest::Approx(1.0));
  CHECK(mp.miou == doctest::Approx(1.0));

  const auto cm = from_rows({{2, 2}, {0, 4}});
  const auto m = sscl::segmentation_metrics(cm);
  CHECK(m.acc == doctest::Approx(0.75));
  CHECK(m.macc == doctest::Approx(0.75));
  CHECK(m.miou == doctest::Approx((2.0 / 4.0 + 4.0 / 6.0) / 2.0));
  CHECK(m.facc == doctest::Approx(0.5 * (2.0 / 4.0) + 0.5 * (4.0 / 6.0)));
  REQUIRE(m.per_class_iou[0].has_value());
  CHECK(*m.per_class_iou[0] == doctest::Approx(0.5));

  // class absent from truth and prediction: excluded from mIoU
  const auto sparse = from_rows({{2, 0, 0}, {0, 0, 0}, {0, 0, 2}});
  const auto msp = sscl::segmentation_metrics(sparse);
  CHECK_FALSE(msp.per_class_iou[1].has_value());
  CHECK(msp.miou == doctest::Approx(1.0));

  CHECK_THROWS_AS(sscl::segmentation_metrics(ConfusionMatrix(2)), sscl::ContractError);
}

TEST_CASE("facc modes: recall-weighting equals ACC, fwiou differs") {
  const auto cm = from_rows({{5, 3}, {2, 10}});
  const auto fw = sscl::segmentation_metrics(cm, FaccMode::FrequencyWeightedIoU);
  const auto rc = sscl::segmentation_metrics(cm, FaccMode::FrequencyWeightedRecall);
  CHECK(rc.facc == doctest::Approx(rc.acc).epsilon(1e-12));  // algebraic identity
  CHECK(fw.facc < fw.acc);
  CHECK(sscl::facc_mode_from_string("fwiou") == FaccMode::FrequencyWeightedIoU);
  CHECK(sscl::facc_mode_from_string("recall") == FaccMode::FrequencyWeightedRecall);
  CHECK_THROWS_AS(sscl::facc_mode_from_string("nope"), sscl::ConfigError);
}

TEST_CASE("metrics match independent brute force on random matrices") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const int c = 2 + int(rng() % 5);
    ConfusionMatrix cm(c);
    std::int64_t total = 0;
    for (int t = 0; t < c; ++t)
      for (int p = 0; p < c; ++p) {
        cm.at(t, p) = int(rng() % 7);
        total += cm.at(t, p);
      }
    if (total == 0) continue;
    const auto m = sscl::segmentation_metrics(cm);

    // independent recomputation
    std::int64_t trace = 0;
    for (int t = 0; t < c; ++t) trace += cm.at(t, t);
    CHECK(m.acc == doctest::Approx(double(trace) / double(total)).epsilon(1e-12));

    double macc = 0.0, miou = 0.0, facc = 0.0;
    int supported = 0, unions = 0;
    for (int t = 0; t < c; ++t) {
      std::int64_t row = 0, col = 0;
      for (int k = 0; k < c; ++k) {
        row += cm.at(t, k);
        col += cm.at(k, t);
      }
      if (row > 0) {
        const double recall = double(cm.at(t, t)) / double(row);
        macc += recall;
        ++supported;
      }
      const std::int64_t uni = row + col - cm.at(t, t);
      if (uni > 0) {
        const double iou = double(cm.at(t, t)) / double(uni);
        miou += iou;
        ++unions;
        facc += double(row) / double(total) * iou;
        // per-class ordering invariant: IoU <= recall when support > 0
        if (row > 0) CHECK(iou <= double(cm.at(t, t)) / double(row) + 1e-12);
      }
    }
    CHECK(m.macc == doctest::Approx(macc / supported).epsilon(1e-12));
    CHECK(m.miou == doctest::Approx(miou / unions).epsilon(1e-12));
    CHECK(m.facc == doctest::Approx(facc).epsilon(1e-12));
  }
}

TEST_CASE("metrics invariant under class permutation") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const int c = 3 + int(rng() % 4);
    ConfusionMatrix cm(c);
    for (auto& v : cm.counts) v = int(rng() % 6);
    if (cm.total() == 0) continue;
    std::vector<int> perm(c);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    ConfusionMatrix pcm(c);
    for (int t = 0; t < c; ++t)
      for (int p = 0; p < c; ++p) pcm.at(perm[t], perm[p]) = cm.at(t, p);
    const auto a = sscl::segmentation_metrics(cm);
    const auto b = sscl::segmentation_metrics(pcm);
    CHECK(a.acc == doctest::Approx(b.acc).epsilon(1e-12));
    CHECK(a.macc == doctest::Approx(b.macc).epsilon(1e-12));
    CHECK(a.facc == doctest::Approx(b.facc).epsilon(1e-12));
    CHECK(a.miou == doctest::Approx(b.miou).epsilon(1e-12));
    for (int t = 0; t < c; ++t) {
      REQUIRE(a.per_class_iou[t].has_value() == b.per_class_iou[perm[t]].has_value());
      if (a.per_class_iou[t])
        CHECK(*a.per_class_iou[t] == doctest::Approx(*b.per_class_iou[perm[t]]));
    }
  }
}
