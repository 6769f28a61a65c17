// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#include "sscl/config.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace sscl {
namespace {

using nlohmann::json;

template <typename T>
void get_to(const json& j, const char* key, T* out) {
  if (j.contains(key)) j.at(key).get_to(*out);
}

void parse_synth(const json& j, SynthSpec* s) {
  get_to(j, "num_classes", &s->num_classes);
  get_to(j, "image_size", &s->image_size);
  get_to(j, "labeled_counts", &s->labeled_counts);
  get_to(j, "unlabeled_count", &s->unlabeled_count);
  get_to(j, "test_count", &s->test_count);
  get_to(j, "shift", &s->shift);
  get_to(j, "seg_train_count", &s->seg_train_count);
  get_to(j, "seg_test_count", &s->seg_test_count);
  get_to(j, "unlabeled_fraction", &s->unlabeled_fraction);
  get_to(j, "seed", &s->seed);
  if (static_cast<int>(s->labeled_counts.size()) != s->num_classes)
    s->labeled_counts.resize(s->num_classes, 8);
}

json dump_synth(const SynthSpec& s) {
  return {{"num_classes", s.num_classes},
          {"image_size", s.image_size},
          {"labeled_counts", s.labeled_counts},
          {"unlabeled_count", s.unlabeled_count},
          {"test_count", s.test_count},
          {"shift", s.shift},
          {"seg_train_count", s.seg_train_count},
          {"seg_test_count", s.seg_test_count},
          {"unlabeled_fraction", s.unlabeled_fraction},
          {"seed", s.seed}};
}

void parse_split(const json& j, ChronoSplit* s) {
  if (j.contains("train_sol")) {
    s->train_sol_lo = j.at("train_sol").at(0).get<int>();
    s->train_sol_hi = j.at("train_sol").at(1).get<int>();
  }
  if (j.contains("test_sol")) {
    s->test_sol_lo = j.at("test_sol").at(0).get<int>();
    s->test_sol_hi = j.at("test_sol").at(1).get<int>();
  }
  get_to(j, "shuffle_train_val", &s->shuffle_train_val);
}

}  // namespace

void RunConfig::validate() const {
  if (task != "classify" && task != "segment")
    throw ConfigError("task must be 'classify' or 'segment', got '" + task + "'");
  if (dataset.kind == "synthetic") {
    dataset.synth.validate();
  } else if (dataset.kind == "paths") {
    namespace fs = std::filesystem;
    auto must_exist = [](const std::string& p, const char* field) {
      if (p.empty()) throw ConfigError(std::string("dataset.") + field + " is required");
      if (!fs::exists(p))
        throw ConfigError(std::string("dataset.") + field + ": path does not exist: " + p);
    };
    if (task == "classify") {
      must_exist(dataset.cls_root, "cls_root");
      if (!dataset.unlabeled_dir.empty() && !fs::exists(dataset.unlabeled_dir))
        throw ConfigError("dataset.unlabeled_dir: path does not exist: " +
                          dataset.unlabeled_dir);
      if (!dataset.use_split) must_exist(dataset.test_root, "test_root");
    } else {
      must_exist(dataset.seg_root, "seg_root");
      if (!dataset.use_split) must_exist(dataset.seg_test_root, "seg_test_root");
      if (dataset.num_classes < 2)
        throw ConfigError("dataset.num_classes is required for segmentation paths");
    }
    if (dataset.use_split) dataset.split.validate();
  } else {
    throw ConfigError("dataset.kind must be 'synthetic' or 'paths'");
  }
  model.validate();
  loss.validate();
  plan.validate();
  augmentation.validate();
  facc_mode_from_string(facc_mode);
}

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  try {
    get_to(j, "task", &cfg.task);
    get_to(j, "seed", &cfg.seed);
    get_to(j, "output_dir", &cfg.output_dir);
    get_to(j, "facc_mode", &cfg.facc_mode);
    if (j.contains("dataset")) {
      const json& d = j.at("dataset");
      get_to(d, "kind", &cfg.dataset.kind);
      if (d.contains("synthetic")) parse_synth(d.at("synthetic"), &cfg.dataset.synth);
      get_to(d, "cls_root", &cfg.dataset.cls_root);
      get_to(d, "unlabeled_dir", &cfg.dataset.unlabeled_dir);
      get_to(d, "test_root", &cfg.dataset.test_root);
      get_to(d, "seg_root", &cfg.dataset.seg_root);
      get_to(d, "seg_test_root", &cfg.dataset.seg_test_root);
      get_to(d, "num_classes", &cfg.dataset.num_classes);
      if (d.contains("split")) {
        cfg.dataset.use_split = true;
        parse_split(d.at("split"), &cfg.dataset.split);
      }
    }
    if (j.contains("model")) {
      const json& m = j.at("model");
      get_to(m, "backbone", &cfg.model.backbone);
      get_to(m, "input_size", &cfg.model.input_size);
      get_to(m, "num_classes", &cfg.model.num_classes);
      get_to(m, "width1", &cfg.model.width1);
      get_to(m, "width2", &cfg.model.width2);
      get_to(m, "width3", &cfg.model.width3);
      get_to(m, "proj_hidden", &cfg.model.proj_hidden);
      get_to(m, "proj_dim", &cfg.model.proj_dim);
    }
    if (j.contains("loss")) {
      const json& l = j.at("loss");
      get_to(l, "tau_cls", &cfg.loss.tau_cls);
      get_to(l, "tau_seg", &cfg.loss.tau_seg);
      get_to(l, "lambda_s_cls", &cfg.loss.lambda_s_cls);
      get_to(l, "lambda_u_cls", &cfg.loss.lambda_u_cls);
      get_to(l, "lambda_s_seg", &cfg.loss.lambda_s_seg);
      get_to(l, "num_classes", &cfg.loss.num_classes);
    }
    if (j.contains("plan")) {
      const json& p = j.at("plan");
      get_to(p, "cls_epochs", &cfg.plan.cls_epochs);
      get_to(p, "cls_batch", &cfg.plan.cls_batch);
      get_to(p, "cls_lr_heads", &cfg.plan.cls_lr_heads);
      get_to(p, "cls_lr_backbone", &cfg.plan.cls_lr_backbone);
      get_to(p, "cls_milestones", &cfg.plan.cls_milestones);
      get_to(p, "seg_lr", &cfg.plan.seg_lr);
      get_to(p, "seg_poly_power", &cfg.plan.seg_poly_power);
      get_to(p, "seg_batch", &cfg.plan.seg_batch);
      if (p.contains("seg_step_epochs")) {
        auto v = p.at("seg_step_epochs").get<std::vector<int>>();
        if (v.size() != 3)
          throw ConfigError("plan.seg_step_epochs must have exactly 3 entries");
        cfg.plan.seg_step_epochs = {v[0], v[1], v[2]};
      }
      get_to(p, "seg_ce_only", &cfg.plan.seg_ce_only);
      get_to(p, "bank_capacity", &cfg.plan.bank_capacity);
      get_to(p, "pseudo_threshold", &cfg.plan.pseudo_threshold);
    }
    if (j.contains("augmentation")) {
      const json& a = j.at("augmentation");
      auto& p = cfg.augmentation;
      get_to(a, "hflip_prob", &p.hflip_prob);
      get_to(a, "vflip_prob", &p.vflip_prob);
      get_to(a, "crop_scale_min", &p.crop_scale_min);
      get_to(a, "crop_scale_max", &p.crop_scale_max);
      get_to(a, "resize_target", &p.resize_target);
      get_to(a, "rotation_deg", &p.rotation_deg);
      get_to(a, "blur_prob", &p.blur_prob);
      get_to(a, "blur_sigma_min", &p.blur_sigma_min);
      get_to(a, "blur_sigma_max", &p.blur_sigma_max);
      get_to(a, "jitter_prob", &p.jitter_prob);
      get_to(a, "jitter_brightness", &p.jitter_brightness);
      get_to(a, "jitter_contrast", &p.jitter_contrast);
      get_to(a, "jitter_saturation", &p.jitter_saturation);
      get_to(a, "jitter_hue", &p.jitter_hue);
      get_to(a, "desaturate_prob", &p.desaturate_prob);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config field: ") + e.what());
  }
  // the model/loss class counts default to each other and to the dataset
  if (cfg.dataset.kind == "synthetic") {
    if (cfg.loss.num_classes == 0) cfg.loss.num_classes = cfg.dataset.synth.num_classes;
    if (cfg.model.num_classes == 0) cfg.model.num_classes = cfg.dataset.synth.num_classes;
    if (cfg.model.input_size != cfg.dataset.synth.image_size)
      cfg.model.input_size = cfg.dataset.synth.image_size;
  } else if (cfg.dataset.num_classes > 0) {
    if (cfg.loss.num_classes == 0) cfg.loss.num_classes = cfg.dataset.num_classes;
    if (cfg.model.num_classes == 0) cfg.model.num_classes = cfg.dataset.num_classes;
  }
  if (cfg.plan.seed == 0) cfg.plan.seed = cfg.seed;
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_run_config(text);
}

std::string dump_run_config(const RunConfig& cfg) {
  json d = {{"kind", cfg.dataset.kind}, {"synthetic", dump_synth(cfg.dataset.synth)}};
  if (cfg.dataset.kind == "paths") {
    d["cls_root"] = cfg.dataset.cls_root;
    d["unlabeled_dir"] = cfg.dataset.unlabeled_dir;
    d["test_root"] = cfg.dataset.test_root;
    d["seg_root"] = cfg.dataset.seg_root;
    d["seg_test_root"] = cfg.dataset.seg_test_root;
    d["num_classes"] = cfg.dataset.num_classes;
    if (cfg.dataset.use_split)
      d["split"] = {
          {"train_sol", {cfg.dataset.split.train_sol_lo, cfg.dataset.split.train_sol_hi}},
          {"test_sol", {cfg.dataset.split.test_sol_lo, cfg.dataset.split.test_sol_hi}},
          {"shuffle_train_val", cfg.dataset.split.shuffle_train_val}};
  }
  const auto& p = cfg.augmentation;
  json j = {
      {"task", cfg.task},
      {"seed", cfg.seed},
      {"output_dir", cfg.output_dir},
      {"facc_mode", cfg.facc_mode},
      {"dataset", d},
      {"model",
       {{"backbone", cfg.model.backbone},
        {"input_size", cfg.model.input_size},
        {"num_classes", cfg.model.num_classes},
        {"width1", cfg.model.width1},
        {"width2", cfg.model.width2},
        {"width3", cfg.model.width3},
        {"proj_hidden", cfg.model.proj_hidden},
        {"proj_dim", cfg.model.proj_dim}}},
      {"loss",
       {{"tau_cls", cfg.loss.tau_cls},
        {"tau_seg", cfg.loss.tau_seg},
        {"lambda_s_cls", cfg.loss.lambda_s_cls},
        {"lambda_u_cls", cfg.loss.lambda_u_cls},
        {"lambda_s_seg", cfg.loss.lambda_s_seg},
        {"num_classes", cfg.loss.num_classes}}},
      {"plan",
       {{"cls_epochs", cfg.plan.cls_epochs},
        {"cls_batch", cfg.plan.cls_batch},
        {"cls_lr_heads", cfg.plan.cls_lr_heads},
        {"cls_lr_backbone", cfg.plan.cls_lr_backbone},
        {"cls_milestones", cfg.plan.cls_milestones},
        {"seg_lr", cfg.plan.seg_lr},
        {"seg_poly_power", cfg.plan.seg_poly_power},
        {"seg_batch", cfg.plan.seg_batch},
        {"seg_step_epochs",
         {cfg.plan.seg_step_epochs[0], cfg.plan.seg_step_epochs[1],
          cfg.plan.seg_step_epochs[2]}},
        {"seg_ce_only", cfg.plan.seg_ce_only},
        {"bank_capacity", cfg.plan.bank_capacity},
        {"pseudo_threshold", cfg.plan.pseudo_threshold}}},
      {"augmentation",
       {{"hflip_prob", p.hflip_prob},
        {"vflip_prob", p.vflip_prob},
        {"crop_scale_min", p.crop_scale_min},
        {"crop_scale_max", p.crop_scale_max},
        {"resize_target", p.resize_target},
        {"rotation_deg", p.rotation_deg},
        {"blur_prob", p.blur_prob},
        {"blur_sigma_min", p.blur_sigma_min},
        {"blur_sigma_max", p.blur_sigma_max},
        {"jitter_prob", p.jitter_prob},
        {"jitter_contrast", p.jitter_contrast},
        {"jitter_brightness", p.jitter_brightness},
        {"jitter_saturation", p.jitter_saturation},
        {"jitter_hue", p.jitter_hue},
        {"desaturate_prob", p.desaturate_prob}}}};
  return j.dump(2);
}

#ifndef SSCL_SOURCE_REV
#define SSCL_SOURCE_REV "unknown"
#endif

void write_manifest(const std::string& path, const RunConfig& cfg) {
  json j = {{"config", json::parse(dump_run_config(cfg))},
            {"source_revision", SSCL_SOURCE_REV},
            {"plan_hash", cfg.plan.hash()}};
  std::ofstream out(path);
  if (!out) throw DataError("cannot write manifest " + path);
  out << j.dump(2) << '\n';
}

}  // namespace sscl
