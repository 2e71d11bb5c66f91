#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ebci/classifiers.hpp"
#include "ebci/pipeline.hpp"
#include "ebci/synthetic.hpp"

namespace ebci {

inline constexpr const char* kArtifactVersion = "1.0.0";

// One structured file carries every tunable; command-line flags override only
// the seed and paths. Defaults: lambda 0.01, p_ins 0.1 / p_rem 0.15,
// gamma 0.1, 500 ms window, 80 calibration trials.
struct RunConfig {
  std::uint64_t seed{1};
  int workers{0};  // 0 = all cores
  bool scaling{true};

  PipelineParams pipeline;

  int cv_folds{10};
  bool cv_group_by_trial{true};

  std::vector<int> offline_sizes;  // 30..420 step 30
  int offline_repeats{10};

  double online_threshold_ms{500.0};
  int online_n_train_trials{80};
  std::vector<double> online_thresholds;  // 300..800 step 50
  std::vector<int> online_train_sizes;    // 20..100 step 10
  std::vector<std::string> online_classifiers{"rlda", "swlda", "sklda", "stda"};

  ClassifierSpec classifier;  // shared hyperparameter record
  GenParams generator;

  RunConfig();
};

RunConfig load_config(const std::string& path);

// Rejects unknown keys (with a nearest-key suggestion) and bad value types;
// lists every offending key in one error.
void apply_config_json_text(const std::string& text, RunConfig& config, const std::string& origin);

ClassifierSpec spec_for(const RunConfig& config, ClassifierKind kind);

std::string config_canonical_json(const RunConfig& config);
std::uint64_t config_hash(const RunConfig& config);

void write_manifest(const std::string& dir, const RunConfig& config, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& inputs);

}  // namespace ebci
