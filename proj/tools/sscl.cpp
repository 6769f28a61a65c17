// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "sscl/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

std::string default_out_root() {
  if (const char* env = std::getenv("SSCL_OUT_ROOT")) return env;
  return "runs";
}

sscl::RunConfig load_config(const std::string& path, std::uint64_t seed_override,
                            bool seed_set) {
  sscl::RunConfig cfg = sscl::load_run_config(path);
  if (seed_set) {
    cfg.seed = seed_override;
    cfg.plan.seed = seed_override;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semi-supervised contrastive representation learning toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir, resume_path, checkpoint, split = "test";
  std::string facc_mode = "fwiou", features_out;
  std::uint64_t seed = 0;
  bool seed_set = false, per_class = false, seg = false;
  int workers = 1, stride = 1;

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "override the config seed")
        ->each([&](const std::string&) { seed_set = true; });
  };

  CLI::App* train = app.add_subcommand("train", "run a full training schedule");
  train->add_option("--config", config_path, "run config file")->required();
  train->add_option("--out", out_dir, "output directory");
  train->add_option("--resume", resume_path, "checkpoint to resume from");
  train->add_option("--workers", workers, "data-loading workers")
      ->check(CLI::PositiveNumber);
  add_seed(train);

  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  eval->add_option("--config", config_path, "run config file")->required();
  eval->add_option("--checkpoint", checkpoint, "checkpoint file")->required();
  eval->add_option("--split", split, "train or test")->check(CLI::IsMember({"train", "test"}));
  eval->add_option("--out", out_dir, "output directory for the report");
  eval->add_option("--facc-mode", facc_mode, "fwiou or recall")
      ->check(CLI::IsMember({"fwiou", "recall"}));
  eval->add_flag("--per-class", per_class, "add the per-class table");
  add_seed(eval);

  CLI::App* synth = app.add_subcommand("synth", "emit a synthetic dataset tree");
  synth->add_option("--config", config_path, "run config file with a synthetic spec")
      ->required();
  synth->add_option("--out", out_dir, "output directory")->required();
  synth->add_flag("--seg", seg, "segmentation layout instead of classification");
  add_seed(synth);

  CLI::App* expf = app.add_subcommand("export-features", "export backbone features");
  expf->add_option("--config", config_path, "run config file")->required();
  expf->add_option("--checkpoint", checkpoint, "checkpoint file")->required();
  expf->add_option("--out", features_out, "output table file")->required();
  expf->add_option("--stride", stride, "element subsampling stride")
      ->check(CLI::PositiveNumber);
  add_seed(expf);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      sscl::RunConfig cfg = load_config(config_path, seed, seed_set);
      std::string dir = !out_dir.empty() ? out_dir
                        : !cfg.output_dir.empty()
                            ? cfg.output_dir
                            : (std::filesystem::path(default_out_root()) / "run").string();
      const auto outcome = sscl::run_train(cfg, dir, resume_path);
      std::cout << "done: " << outcome.metrics_csv << "\n";
    } else if (eval->parsed()) {
      sscl::RunConfig cfg = load_config(config_path, seed, seed_set);
      const auto report = sscl::run_eval(cfg, checkpoint, split, per_class,
                                         sscl::facc_mode_from_string(facc_mode));
      std::cout << report.text;
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream f(std::filesystem::path(out_dir) / "eval_report.txt");
        f << report.text;
      }
    } else if (synth->parsed()) {
      sscl::RunConfig cfg = load_config(config_path, seed, seed_set);
      sscl::SynthSpec spec = cfg.dataset.synth;
      if (seed_set) spec.seed = seed;
      if (seg) {
        const auto out = sscl::synth_seg_dataset(spec);
        sscl::save_seg_dataset(
            (std::filesystem::path(out_dir) / "train").string(), out.train);
        sscl::save_seg_dataset((std::filesystem::path(out_dir) / "test").string(),
                               out.test);
      } else {
        const auto out = sscl::synth_cls_dataset(spec);
        sscl::save_cls_dataset(
            (std::filesystem::path(out_dir) / "labeled").string(), out.labeled);
        sscl::save_cls_dataset((std::filesystem::path(out_dir) / "test").string(),
                               out.test);
        const auto pool_dir = std::filesystem::path(out_dir) / "unlabeled";
        std::filesystem::create_directories(pool_dir);
        for (size_t i = 0; i < out.unlabeled.size(); ++i)
          sscl::write_ppm((pool_dir / ("u" + std::to_string(i) + ".ppm")).string(),
                          out.unlabeled[i]);
      }
      std::cout << "dataset written to " << out_dir << "\n";
    } else if (expf->parsed()) {
      sscl::RunConfig cfg = load_config(config_path, seed, seed_set);
      sscl::run_export_features(cfg, checkpoint, features_out, stride);
      std::cout << "features written to " << features_out << "\n";
    }
  } catch (const sscl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const sscl::ContractError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const sscl::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
