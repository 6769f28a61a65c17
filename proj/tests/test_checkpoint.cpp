// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "gradcheck.hpp"
#include "sscl/checkpoint.hpp"

using gradcheck::random_mat;
using sscl::CheckpointMeta;
using sscl::ClassMemoryBank;
using sscl::Mat;
using sscl::Param;

namespace fs = std::filesystem;

namespace {

struct Fixture {
  Param w1, w2;
  std::vector<Param*> params;

  explicit Fixture(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    w1.name = "layer1.weight";
    w1.group = "backbone";
    w1.value = random_mat(3, 4, rng);
    w1.zero_grad();
    w2.name = "head.weight";
    w2.group = "cls_head";
    w2.value = random_mat(2, 3, rng);
    w2.zero_grad();
    params = {&w1, &w2};
  }
};

fs::path tmp_file(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "sscl_test_ckpt";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("checkpoint round-trips parameters, optimizer, bank, and meta") {
  Fixture saved(1);
  sscl::Adam opt(saved.params, {{"backbone", 1e-6}, {"cls_head", 1e-3}});
  std::mt19937_64 rng(2);
  for (int s = 0; s < 3; ++s) {
    for (Param* p : saved.params) p->grad = random_mat(int(p->value.rows()), int(p->value.cols()), rng);
    opt.step(1.0);
  }
  ClassMemoryBank bank(3, 4, 5);
  {
    sscl::FeatureMap fm;
    fm.height = 1;
    fm.width = 2;
    fm.features = random_mat(2, 4, rng);
    sscl::LabelMap lm;
    lm.height = 1;
    lm.width = 2;
    lm.ids = {0, 2};
    bank.push_batch_means(fm, lm);
  }
  CheckpointMeta meta;
  meta.task = "segment";
  meta.plan_hash = 0xabcdef12345678ULL;
  meta.epoch = 17;
  meta.stage = 2;
  const fs::path path = tmp_file("roundtrip.ckpt");
  sscl::save_checkpoint(path.string(), meta, saved.params, &opt, &bank);

  Fixture loaded(99);  // different initial values, same names/shapes
  sscl::Adam opt2(loaded.params, {{"backbone", 1e-6}, {"cls_head", 1e-3}});
  std::optional<ClassMemoryBank> bank2;
  const CheckpointMeta got =
      sscl::load_checkpoint(path.string(), loaded.params, &opt2, &bank2);
  CHECK(got.task == "segment");
  CHECK(got.plan_hash == meta.plan_hash);
  CHECK(got.epoch == 17);
  CHECK(got.stage == 2);
  CHECK(loaded.w1.value == saved.w1.value);
  CHECK(loaded.w2.value == saved.w2.value);
  REQUIRE(bank2.has_value());
  CHECK(*bank2 == bank);

  // resumed optimizer behaves identically to the original
  std::mt19937_64 ga(7), gb(7);
  for (int s = 0; s < 3; ++s) {
    for (Param* p : saved.params) p->grad = random_mat(int(p->value.rows()), int(p->value.cols()), ga);
    opt.step(0.5);
    for (Param* p : loaded.params) p->grad = random_mat(int(p->value.rows()), int(p->value.cols()), gb);
    opt2.step(0.5);
  }
  CHECK(saved.w1.value == loaded.w1.value);
  CHECK(saved.w2.value == loaded.w2.value);
}

TEST_CASE("save-load-save yields byte-identical containers") {
  Fixture f(3);
  CheckpointMeta meta;
  meta.task = "classify";
  meta.plan_hash = 42;
  meta.epoch = 5;
  const fs::path a = tmp_file("first.ckpt");
  const fs::path b = tmp_file("second.ckpt");
  sscl::save_checkpoint(a.string(), meta, f.params, nullptr, nullptr);
  Fixture g(4);
  const CheckpointMeta got = sscl::load_checkpoint(a.string(), g.params, nullptr, nullptr);
  sscl::save_checkpoint(b.string(), got, g.params, nullptr, nullptr);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("corruption and tampering are detected") {
  Fixture f(5);
  CheckpointMeta meta;
  meta.task = "classify";
  const fs::path path = tmp_file("tamper.ckpt");
  sscl::save_checkpoint(path.string(), meta, f.params, nullptr, nullptr);
  std::string bytes = slurp(path);

  // flip one payload byte
  std::string flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x40;
  std::ofstream(path, std::ios::binary) << flipped;
  Fixture g(6);
  CHECK_THROWS_AS(sscl::load_checkpoint(path.string(), g.params, nullptr, nullptr),
                  sscl::DataError);

  // truncate
  std::ofstream(path, std::ios::binary) << bytes.substr(0, bytes.size() - 8);
  CHECK_THROWS_AS(sscl::load_checkpoint(path.string(), g.params, nullptr, nullptr),
                  sscl::DataError);

  // bad magic
  std::string wrong = bytes;
  wrong[0] = 'X';
  std::ofstream(path, std::ios::binary) << wrong;
  CHECK_THROWS_AS(sscl::load_checkpoint(path.string(), g.params, nullptr, nullptr),
                  sscl::DataError);
}

TEST_CASE("mismatched parameter shape or name is rejected") {
  Fixture f(7);
  CheckpointMeta meta;
  meta.task = "classify";
  const fs::path path = tmp_file("mismatch.ckpt");
  sscl::save_checkpoint(path.string(), meta, f.params, nullptr, nullptr);

  Fixture wrong_shape(8);
  wrong_shape.w1.value = Mat::Zero(5, 5);
  CHECK_THROWS_AS(sscl::load_checkpoint(path.string(), wrong_shape.params, nullptr, nullptr),
                  sscl::DataError);

  Fixture wrong_name(9);
  wrong_name.w2.name = "other.weight";
  CHECK_THROWS_AS(sscl::load_checkpoint(path.string(), wrong_name.params, nullptr, nullptr),
                  sscl::DataError);
}

TEST_CASE("optimizer and bank sections are optional on load") {
  Fixture f(10);
  sscl::SgdMomentum opt(f.params, {{"backbone", 0.01}, {"cls_head", 0.01}});
  ClassMemoryBank bank(2, 4, 3);
  CheckpointMeta meta;
  meta.task = "segment";
  const fs::path path = tmp_file("optional.ckpt");
  sscl::save_checkpoint(path.string(), meta, f.params, &opt, &bank);

  // weights-only load (the eval path)
  Fixture g(11);
  CHECK_NOTHROW(sscl::load_checkpoint(path.string(), g.params, nullptr, nullptr));
  CHECK(g.w1.value == f.w1.value);

  // requesting optimizer state from a weights-only checkpoint fails loudly
  const fs::path bare = tmp_file("bare.ckpt");
  sscl::save_checkpoint(bare.string(), meta, f.params, nullptr, nullptr);
  Fixture h(12);
  sscl::SgdMomentum opt2(h.params, {{"backbone", 0.01}, {"cls_head", 0.01}});
  CHECK_THROWS_AS(sscl::load_checkpoint(bare.string(), h.params, &opt2, nullptr),
                  sscl::DataError);
}
