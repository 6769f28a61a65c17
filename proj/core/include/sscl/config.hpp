// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "sscl/datapipe.hpp"
#include "sscl/evalkit.hpp"
#include "sscl/nn.hpp"
#include "sscl/synth.hpp"
#include "sscl/trainloop.hpp"

namespace sscl {

// Where the data comes from: a synthetic generator spec or on-disk layouts.
struct DatasetConfig {
  std::string kind = "synthetic";  // "synthetic" or "paths"
  SynthSpec synth;
  // paths variant
  std::string cls_root;       // classification: root/<class>/<id>.ppm + index.csv
  std::string unlabeled_dir;  // flat directory of images
  std::string test_root;
  std::string seg_root;  // segmentation: images/ + labels/ + sols.csv
  std::string seg_test_root;
  int num_classes = 0;  // segmentation class count for the paths variant
  ChronoSplit split;    // applied when test_root / seg_test_root is empty
  bool use_split = false;
};

struct RunConfig {
  std::string task = "classify";  // or "segment"
  DatasetConfig dataset;
  ModelSpec model;
  LossConfig loss;
  TrainPlan plan;
  AugmentationPolicy augmentation;
  std::string output_dir;
  std::uint64_t seed = 0;
  std::string facc_mode = "fwiou";

  void validate() const;
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);

// Fully materialized config (every default explicit), as written to the
// run manifest; parsing it back reproduces the run.
std::string dump_run_config(const RunConfig& cfg);

void write_manifest(const std::string& path, const RunConfig& cfg);

}  // namespace sscl
