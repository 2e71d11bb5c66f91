#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ebci/classifiers.hpp"
#include "ebci/evaluation.hpp"
#include "ebci/pipeline.hpp"
#include "ebci/session.hpp"

namespace ebci {

struct ReplayConfig {
  ClassifierSpec spec;
  Modality modality{Modality::Fusion};
  double threshold_ms{500.0};  // epoch window and duration clamp
  int n_train_trials{80};
  std::uint64_t seed{1};
  bool scaling{true};
  // score the test stream back-to-front; decisions are reported in forward
  // order either way, so equal reports demonstrate per-decision statelessness
  bool reverse_replay{false};
};

struct OnlineReport {
  std::string classifier;
  std::string modality;
  double threshold_ms{0.0};
  int n_train_trials{0};
  double accuracy{0.0};
  double auc{0.0};
  MeanSd latency_ms;  // around the score call only, median-of-3 per decision
  int n_decisions{0};
  int n_train_samples{0};
  int n_features{0};  // model dimension; shrinks with the epoch threshold
  int n_skipped{0};
  std::vector<int> decisions;  // +1/-1 in replay order
  std::string error;
};

// Calibrate on the first n_train_trials trials, then classify the remaining
// samples strictly one at a time in acquisition order. Both sides are
// rebalanced to 1:1 before use.
OnlineReport run_replay(const Session& session, const ReplayConfig& config,
                        const PipelineParams& base_params);

// Same replay given an already preprocessed continuous recording (sweeps
// reuse one preprocessing pass across thresholds).
OnlineReport run_replay_preprocessed(const Session& session, const EegRecording& preprocessed,
                                     const ReplayConfig& config, const PipelineParams& base_params);

struct GridResult {
  // cells in (threshold, n_train, spec) order; benchmarks in (threshold, n_train) order
  std::vector<OnlineReport> cells;
  std::vector<OnlineReport> benchmarks;  // eye-only, plain LDA
  int n_failed{0};
};

GridResult sweep_grid(const Session& session, const std::vector<double>& thresholds,
                      const std::vector<int>& train_sizes, const std::vector<ClassifierSpec>& specs,
                      std::uint64_t seed, const PipelineParams& base_params, bool scaling,
                      int workers);

void write_online_reports_csv(const std::vector<OnlineReport>& reports, const std::string& path);
void write_online_reports_json(const std::vector<OnlineReport>& reports, const std::string& path);

}  // namespace ebci
