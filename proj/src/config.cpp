#include "ebci/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ebci/numeric.hpp"

namespace ebci {

RunConfig::RunConfig() {
  for (int s = 30; s <= 420; s += 30) offline_sizes.push_back(s);
  for (int t = 300; t <= 800; t += 50) online_thresholds.push_back(static_cast<double>(t));
  for (int n = 20; n <= 100; n += 10) online_train_sizes.push_back(n);
}

namespace {

using nlohmann::json;

int levenshtein(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] != b[j - 1]);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string suggest(const std::string& key, const std::set<std::string>& known) {
  std::string best;
  int best_dist = 3;  // suggest only close misses
  for (const auto& k : known) {
    const int d = levenshtein(key, k);
    if (d < best_dist) {
      best_dist = d;
      best = k;
    }
  }
  return best;
}

struct KeyChecker {
  std::vector<std::string> errors;

  void check(const json& obj, const std::string& prefix, const std::set<std::string>& known) {
    if (!obj.is_object()) {
      errors.push_back(prefix.empty() ? "config root must be an object"
                                      : "'" + prefix + "' must be an object");
      return;
    }
    for (const auto& [key, value] : obj.items()) {
      (void)value;
      if (!known.count(key)) {
        std::string msg = "unknown key '" + (prefix.empty() ? key : prefix + "." + key) + "'";
        const std::string near = suggest(key, known);
        if (!near.empty()) msg += " (did you mean '" + near + "'?)";
        errors.push_back(std::move(msg));
      }
    }
  }
};

template <typename T>
void read_to(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

void apply_config_json_text(const std::string& text, RunConfig& config, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(origin + ": malformed JSON: " + e.what());
  }

  KeyChecker checker;
  checker.check(j, "", {"seed", "workers", "scaling", "filter", "epoch", "cv", "offline", "online",
                        "classifiers", "generator"});
  if (j.contains("filter")) {
    checker.check(j["filter"], "filter", {"low_hz", "high_hz", "taps"});
  }
  if (j.contains("epoch")) {
    checker.check(j["epoch"], "epoch", {"window_ms", "baseline_ms", "target_rate_hz"});
  }
  if (j.contains("cv")) checker.check(j["cv"], "cv", {"folds", "grouping"});
  if (j.contains("offline")) checker.check(j["offline"], "offline", {"sizes", "repeats"});
  if (j.contains("online")) {
    checker.check(j["online"], "online",
                  {"threshold_ms", "n_train_trials", "thresholds", "train_sizes", "classifiers"});
  }
  if (j.contains("classifiers")) {
    checker.check(j["classifiers"], "classifiers", {"rlda", "swlda", "blda", "sklda", "stda"});
    const json& c = j["classifiers"];
    if (c.contains("rlda")) checker.check(c["rlda"], "classifiers.rlda", {"lambda"});
    if (c.contains("swlda")) {
      checker.check(c["swlda"], "classifiers.swlda", {"p_ins", "p_rem", "max_features"});
    }
    if (c.contains("blda")) checker.check(c["blda"], "classifiers.blda", {"tol", "max_iter"});
    if (c.contains("sklda")) checker.check(c["sklda"], "classifiers.sklda", {"gamma"});
    if (c.contains("stda")) checker.check(c["stda"], "classifiers.stda", {"ds", "dt", "tol", "max_iter"});
  }
  if (j.contains("generator")) {
    checker.check(j["generator"], "generator",
                  {"n_trials", "trial_duration_ms", "erp_amplitude_uv", "erp_latency_ms",
                   "erp_width_ms", "early_amplitude_uv", "early_latency_ms", "early_width_ms",
                   "contrast", "noise_sigma_uv", "noise_model", "sensor_noise_uv",
                   "target_duration_median_ms", "target_duration_sigma",
                   "nontarget_duration_median_ms", "nontarget_duration_sigma",
                   "nontarget_fixations_per_trial", "outside_fixation_prob", "eog_sigma_uv",
                   "blink_amplitude_uv", "blink_rate_per_trial", "target_index"});
  }
  if (!checker.errors.empty()) {
    std::ostringstream msg;
    msg << origin << ": invalid config:";
    for (const auto& e : checker.errors) msg << "\n  " << e;
    throw std::runtime_error(msg.str());
  }

  try {
    read_to(j, "seed", config.seed);
    read_to(j, "workers", config.workers);
    read_to(j, "scaling", config.scaling);
    if (j.contains("filter")) {
      const json& f = j["filter"];
      read_to(f, "low_hz", config.pipeline.filter_low_hz);
      read_to(f, "high_hz", config.pipeline.filter_high_hz);
      read_to(f, "taps", config.pipeline.filter_taps);
    }
    if (j.contains("epoch")) {
      const json& e = j["epoch"];
      read_to(e, "window_ms", config.pipeline.window_ms);
      read_to(e, "baseline_ms", config.pipeline.baseline_ms);
      read_to(e, "target_rate_hz", config.pipeline.target_rate_hz);
    }
    if (j.contains("cv")) {
      const json& c = j["cv"];
      read_to(c, "folds", config.cv_folds);
      if (c.contains("grouping")) {
        const std::string mode = c.at("grouping").get<std::string>();
        if (mode == "trial") config.cv_group_by_trial = true;
        else if (mode == "sample") config.cv_group_by_trial = false;
        else throw std::runtime_error("cv.grouping must be 'trial' or 'sample', got '" + mode + "'");
      }
    }
    if (j.contains("offline")) {
      const json& o = j["offline"];
      read_to(o, "sizes", config.offline_sizes);
      read_to(o, "repeats", config.offline_repeats);
    }
    if (j.contains("online")) {
      const json& o = j["online"];
      read_to(o, "threshold_ms", config.online_threshold_ms);
      read_to(o, "n_train_trials", config.online_n_train_trials);
      read_to(o, "thresholds", config.online_thresholds);
      read_to(o, "train_sizes", config.online_train_sizes);
      read_to(o, "classifiers", config.online_classifiers);
    }
    if (j.contains("classifiers")) {
      const json& c = j["classifiers"];
      if (c.contains("rlda")) read_to(c["rlda"], "lambda", config.classifier.lambda);
      if (c.contains("swlda")) {
        read_to(c["swlda"], "p_ins", config.classifier.p_ins);
        read_to(c["swlda"], "p_rem", config.classifier.p_rem);
        read_to(c["swlda"], "max_features", config.classifier.max_features);
      }
      if (c.contains("blda")) {
        read_to(c["blda"], "tol", config.classifier.blda_tol);
        read_to(c["blda"], "max_iter", config.classifier.blda_max_iter);
      }
      if (c.contains("sklda") && c["sklda"].contains("gamma")) {
        const json& g = c["sklda"]["gamma"];
        if (g.is_string()) {
          if (g.get<std::string>() != "analytic") {
            throw std::runtime_error("classifiers.sklda.gamma must be a number or 'analytic'");
          }
          config.classifier.gamma_analytic = true;
        } else {
          config.classifier.gamma = g.get<double>();
          config.classifier.gamma_analytic = false;
        }
      }
      if (c.contains("stda")) {
        read_to(c["stda"], "ds", config.classifier.stda_ds);
        read_to(c["stda"], "dt", config.classifier.stda_dt);
        read_to(c["stda"], "tol", config.classifier.stda_tol);
        read_to(c["stda"], "max_iter", config.classifier.stda_max_iter);
      }
    }
    if (j.contains("generator")) {
      const json& g = j["generator"];
      GenParams& p = config.generator;
      read_to(g, "n_trials", p.n_trials);
      read_to(g, "trial_duration_ms", p.trial_duration_ms);
      read_to(g, "erp_amplitude_uv", p.erp_amplitude_uv);
      read_to(g, "erp_latency_ms", p.erp_latency_ms);
      read_to(g, "erp_width_ms", p.erp_width_ms);
      read_to(g, "early_amplitude_uv", p.early_amplitude_uv);
      read_to(g, "early_latency_ms", p.early_latency_ms);
      read_to(g, "early_width_ms", p.early_width_ms);
      read_to(g, "contrast", p.contrast);
      read_to(g, "noise_sigma_uv", p.noise_sigma_uv);
      read_to(g, "sensor_noise_uv", p.sensor_noise_uv);
      read_to(g, "target_duration_median_ms", p.target_duration_median_ms);
      read_to(g, "target_duration_sigma", p.target_duration_sigma);
      read_to(g, "nontarget_duration_median_ms", p.nontarget_duration_median_ms);
      read_to(g, "nontarget_duration_sigma", p.nontarget_duration_sigma);
      read_to(g, "nontarget_fixations_per_trial", p.nontarget_fixations_per_trial);
      read_to(g, "outside_fixation_prob", p.outside_fixation_prob);
      read_to(g, "eog_sigma_uv", p.eog_sigma_uv);
      read_to(g, "blink_amplitude_uv", p.blink_amplitude_uv);
      read_to(g, "blink_rate_per_trial", p.blink_rate_per_trial);
      read_to(g, "target_index", p.layout.target_index);
      if (g.contains("noise_model")) {
        const std::string model = g.at("noise_model").get<std::string>();
        if (model == "white") p.noise_model = NoiseModel::White;
        else if (model == "pink") p.noise_model = NoiseModel::Pink;
        else throw std::runtime_error("generator.noise_model must be 'white' or 'pink'");
      }
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(origin + ": invalid config value: " + e.what());
  }
  config.generator.seed = config.seed;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  RunConfig config;
  apply_config_json_text(ss.str(), config, path);
  return config;
}

ClassifierSpec spec_for(const RunConfig& config, ClassifierKind kind) {
  ClassifierSpec spec = config.classifier;
  spec.kind = kind;
  return spec;
}

std::string config_canonical_json(const RunConfig& config) {
  json j;
  j["seed"] = config.seed;
  j["workers"] = config.workers;
  j["scaling"] = config.scaling;
  j["filter"] = {{"low_hz", config.pipeline.filter_low_hz},
                 {"high_hz", config.pipeline.filter_high_hz},
                 {"taps", config.pipeline.filter_taps}};
  j["epoch"] = {{"window_ms", config.pipeline.window_ms},
                {"baseline_ms", config.pipeline.baseline_ms},
                {"target_rate_hz", config.pipeline.target_rate_hz}};
  j["cv"] = {{"folds", config.cv_folds}, {"grouping", config.cv_group_by_trial ? "trial" : "sample"}};
  j["offline"] = {{"sizes", config.offline_sizes}, {"repeats", config.offline_repeats}};
  j["online"] = {{"threshold_ms", config.online_threshold_ms},
                 {"n_train_trials", config.online_n_train_trials},
                 {"thresholds", config.online_thresholds},
                 {"train_sizes", config.online_train_sizes},
                 {"classifiers", config.online_classifiers}};
  j["classifiers"] = {
      {"rlda", {{"lambda", config.classifier.lambda}}},
      {"swlda",
       {{"p_ins", config.classifier.p_ins},
        {"p_rem", config.classifier.p_rem},
        {"max_features", config.classifier.max_features}}},
      {"blda", {{"tol", config.classifier.blda_tol}, {"max_iter", config.classifier.blda_max_iter}}},
      {"sklda",
       {{"gamma", config.classifier.gamma_analytic ? json("analytic") : json(config.classifier.gamma)}}},
      {"stda",
       {{"ds", config.classifier.stda_ds},
        {"dt", config.classifier.stda_dt},
        {"tol", config.classifier.stda_tol},
        {"max_iter", config.classifier.stda_max_iter}}}};
  const GenParams& p = config.generator;
  j["generator"] = {{"n_trials", p.n_trials},
                    {"trial_duration_ms", p.trial_duration_ms},
                    {"erp_amplitude_uv", p.erp_amplitude_uv},
                    {"erp_latency_ms", p.erp_latency_ms},
                    {"erp_width_ms", p.erp_width_ms},
                    {"early_amplitude_uv", p.early_amplitude_uv},
                    {"early_latency_ms", p.early_latency_ms},
                    {"early_width_ms", p.early_width_ms},
                    {"contrast", p.contrast},
                    {"noise_sigma_uv", p.noise_sigma_uv},
                    {"noise_model", p.noise_model == NoiseModel::Pink ? "pink" : "white"},
                    {"sensor_noise_uv", p.sensor_noise_uv},
                    {"target_duration_median_ms", p.target_duration_median_ms},
                    {"target_duration_sigma", p.target_duration_sigma},
                    {"nontarget_duration_median_ms", p.nontarget_duration_median_ms},
                    {"nontarget_duration_sigma", p.nontarget_duration_sigma},
                    {"nontarget_fixations_per_trial", p.nontarget_fixations_per_trial},
                    {"outside_fixation_prob", p.outside_fixation_prob},
                    {"eog_sigma_uv", p.eog_sigma_uv},
                    {"blink_amplitude_uv", p.blink_amplitude_uv},
                    {"blink_rate_per_trial", p.blink_rate_per_trial},
                    {"target_index", p.layout.target_index}};
  return j.dump();
}

std::uint64_t config_hash(const RunConfig& config) { return fnv1a64(config_canonical_json(config)); }

void write_manifest(const std::string& dir, const RunConfig& config, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& inputs) {
  json j;
  j["artifact_version"] = kArtifactVersion;
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(config_hash(config)));
  j["config_hash"] = std::string(hash);
  j["seed"] = config.seed;
  j["command"] = command;
  json in = json::object();
  for (const auto& [key, value] : inputs) in[key] = value;
  j["inputs"] = std::move(in);
  const std::filesystem::path path = std::filesystem::path(dir) / "manifest.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace ebci
