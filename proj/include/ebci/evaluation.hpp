#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ebci/classifiers.hpp"
#include "ebci/fusion.hpp"
#include "ebci/numeric.hpp"

namespace ebci {

struct RocPoint {
  double fpr{0.0};
  double tpr{0.0};
};

// AUC is the rank statistic: the probability that a random Target outscores a
// random NonTarget, ties counted 1/2. The ROC is a threshold sweep over the
// distinct score values, from (0,0) to (1,1).
std::pair<std::vector<RocPoint>, double> compute_roc_auc(const std::vector<double>& scores,
                                                         const std::vector<int>& labels);

struct EvalReport {
  std::string classifier;
  std::string modality;
  MeanSd accuracy;
  MeanSd auc;
  std::vector<RocPoint> roc;  // pooled over held-out scores
  int n_train{0};
  int n_test{0};
  int n_splits{0};  // folds or repeats
  double fit_ms{0.0};
  double score_ms{0.0};  // per-sample
  std::string error;
};

struct EvalOptions {
  int folds{10};
  bool group_by_trial{true};
  bool scaling{true};
  int workers{0};
  std::optional<std::pair<int, int>> d_layout;  // for the matrix-shaped method
};

// Fold index per sample. With group_by_trial, all samples of a trial land in
// the same fold.
std::vector<int> assign_folds(const std::vector<LabeledSample>& samples, int folds,
                              bool group_by_trial, std::uint64_t seed);

EvalReport kfold_cv(const std::vector<LabeledSample>& samples, const ClassifierSpec& spec,
                    const EvalOptions& options, std::uint64_t seed);

// Balanced 1:1 draws per (size, repeat); every classifier sees the identical
// draws. Returns reports indexed [spec][size].
std::vector<std::vector<EvalReport>> training_size_sweep(const std::vector<LabeledSample>& samples,
                                                         const std::vector<int>& sizes, int repeats,
                                                         const std::vector<ClassifierSpec>& specs,
                                                         const EvalOptions& options,
                                                         std::uint64_t seed);

// CSV with a fixed header (see README); fit_ms/score_ms are the only columns
// that vary between identically-seeded runs.
void write_reports_csv(const std::vector<EvalReport>& reports, const std::string& path);
void write_reports_json(const std::vector<EvalReport>& reports, const std::string& path);

std::string format_double(double v);  // shortest round-trip representation

}  // namespace ebci
