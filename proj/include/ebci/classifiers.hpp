#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ebci/types.hpp"

namespace ebci {

struct TrainingSet {
  Matrix X;                 // n x d, one sample per row
  std::vector<int> y;       // +1 Target, -1 NonTarget
  std::vector<int> trial_ids;
  // (n_channels, n_timepoints) of the leading C*T features, for the
  // matrix-shaped method. Features beyond C*T (the fused duration) join the
  // projected features directly.
  std::optional<std::pair<int, int>> d_layout;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index dim() const { return X.cols(); }
};

struct ModelMeta {
  std::string method;
  double lambda{0.0};
  double gamma{0.0};
  double alpha{0.0};
  double beta{0.0};
  int iterations{0};
  bool converged{true};
  std::vector<int> selected;         // SWLDA active feature indices
  std::vector<double> beta_trace;    // BLDA noise precision per iteration
  std::vector<double> fisher_trace;  // STDA Fisher ratio per iteration
  Matrix w_spatial;                  // STDA projections
  Matrix w_temporal;
};

// Uniform result of every fit: score(x) = w . x + b, Target iff score > 0.
struct LinearModel {
  Vector w;
  double b{0.0};
  ModelMeta meta;
};

// Plain LDA on the pooled within-class covariance; the reference baseline.
LinearModel fit_lda(const TrainingSet& train);

// Covariance replaced by (1-lambda) * Cov + lambda * (tr Cov / d) * I.
LinearModel fit_rlda(const TrainingSet& train, double lambda = 0.01);

// Stepwise regression of the labels on feature columns with partial-F
// entry/removal tests; weights are zero outside the selected set.
LinearModel fit_swlda(const TrainingSet& train, double p_ins = 0.1, double p_rem = 0.15,
                      int max_features = 60);

// Bayesian linear regression with an isotropic weight prior; the prior and
// noise precisions are tuned by evidence-maximization fixed-point updates.
LinearModel fit_blda(const TrainingSet& train, double tol = 1e-4, int max_iter = 100);

// Shrinkage toward the average-eigenvalue identity with fixed intensity.
LinearModel fit_sklda(const TrainingSet& train, double gamma = 0.1);
// Shrinkage intensity estimated from the data (Ledoit-Wolf style).
LinearModel fit_sklda_analytic(const TrainingSet& train);

// Alternating spatial/temporal Fisher projections on matrix-shaped epochs,
// then LDA on the projected features, composed back into one linear model.
LinearModel fit_stda(const TrainingSet& train, int ds = 2, int dt = 2, double tol = 1e-4,
                     int max_iter = 20);

double score(const LinearModel& model, const Vector& x);
Vector score_batch(const LinearModel& model, const Matrix& X);

enum class ClassifierKind { Lda, Rlda, Swlda, Blda, Sklda, Stda };

struct ClassifierSpec {
  ClassifierKind kind{ClassifierKind::Sklda};
  double lambda{0.01};
  double p_ins{0.1};
  double p_rem{0.15};
  int max_features{60};
  double blda_tol{1e-4};
  int blda_max_iter{100};
  double gamma{0.1};
  bool gamma_analytic{false};
  int stda_ds{2};
  int stda_dt{2};
  double stda_tol{1e-4};
  int stda_max_iter{20};
};

std::string classifier_name(ClassifierKind kind);
ClassifierKind classifier_kind_from_name(const std::string& name);
LinearModel fit_classifier(const ClassifierSpec& spec, const TrainingSet& train);

// JSON model record; numeric fields round-trip exactly.
void save_model(const LinearModel& model, const std::string& path);
LinearModel load_model(const std::string& path);

}  // namespace ebci
