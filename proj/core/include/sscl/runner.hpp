// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "sscl/config.hpp"
#include "sscl/trainloop.hpp"

namespace sscl {

struct PreparedData {
  ClsDataset cls_train;
  std::vector<Image> unlabeled;
  ClsDataset cls_test;
  SegDataset seg_train;
  SegDataset seg_test;
};

PreparedData prepare_data(const RunConfig& cfg);

struct TrainOutcome {
  std::string metrics_csv;
  std::string checkpoint;
  std::string manifest;
  double final_top1_or_miou = 0.0;
};

// Runs the task's full schedule in output_dir (created if needed); writes
// manifest, per-epoch metrics CSV, and checkpoint.
TrainOutcome run_train(const RunConfig& cfg, const std::string& output_dir,
                       const std::string& resume_checkpoint = "");

struct EvalReport {
  std::string text;
  double headline = 0.0;  // top1 or mIoU
};

EvalReport run_eval(const RunConfig& cfg, const std::string& checkpoint,
                    const std::string& split, bool per_class, FaccMode facc_mode);

void run_export_features(const RunConfig& cfg, const std::string& checkpoint,
                         const std::string& out_path, int stride);

}  // namespace sscl
