#include "ebci/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "ebci/numeric.hpp"

namespace ebci {

namespace {

struct ClassStats {
  Vector mu_pos;
  Vector mu_neg;
  Matrix cov;  // pooled within-class, 1/(n-2)
  Eigen::Index n_pos{0};
  Eigen::Index n_neg{0};
};

void validate_training_set(const TrainingSet& train) {
  const Eigen::Index n = train.n();
  if (n < 4) throw std::invalid_argument("training set: need n >= 4, got " + std::to_string(n));
  if (static_cast<Eigen::Index>(train.y.size()) != n) {
    throw std::invalid_argument("training set: label count does not match sample count");
  }
  if (!train.X.allFinite()) throw std::invalid_argument("training set: non-finite feature value");
  Eigen::Index pos = 0;
  for (int label : train.y) {
    if (label != 1 && label != -1) throw std::invalid_argument("training set: labels must be +1/-1");
    if (label == 1) ++pos;
  }
  if (pos == 0 || pos == n) throw std::invalid_argument("training set: both classes must be present");
}

ClassStats class_stats(const TrainingSet& train) {
  const Eigen::Index n = train.n();
  const Eigen::Index d = train.dim();
  ClassStats st;
  st.mu_pos = Vector::Zero(d);
  st.mu_neg = Vector::Zero(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (train.y[static_cast<std::size_t>(i)] == 1) {
      st.mu_pos += train.X.row(i).transpose();
      ++st.n_pos;
    } else {
      st.mu_neg += train.X.row(i).transpose();
      ++st.n_neg;
    }
  }
  st.mu_pos /= static_cast<double>(st.n_pos);
  st.mu_neg /= static_cast<double>(st.n_neg);
  st.cov = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector centered = train.X.row(i).transpose() -
                            (train.y[static_cast<std::size_t>(i)] == 1 ? st.mu_pos : st.mu_neg);
    st.cov.selfadjointView<Eigen::Lower>().rankUpdate(centered);
  }
  st.cov.triangularView<Eigen::StrictlyUpper>() = st.cov.transpose();
  st.cov /= static_cast<double>(n - 2);
  return st;
}

// LDA weights from explicit class statistics. require_invertible controls
// whether a rank-deficient covariance is an error (plain LDA) or has already
// been repaired by shrinkage.
LinearModel lda_from_stats(const ClassStats& st, const Matrix& cov, bool require_invertible,
                           const std::string& method) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  if (eig.info() != Eigen::Success) throw std::runtime_error(method + ": eigendecomposition failed");
  const Vector evals = eig.eigenvalues();
  const double max_eig = evals.maxCoeff();
  const double min_eig = evals.minCoeff();
  if (!(max_eig > 0.0) || min_eig <= 1e-10 * max_eig) {
    if (require_invertible) throw std::runtime_error(method + ": singular covariance");
    throw std::runtime_error(method + ": covariance still singular after shrinkage");
  }
  const Vector delta = st.mu_pos - st.mu_neg;
  const Vector rotated = eig.eigenvectors().transpose() * delta;
  LinearModel model;
  model.w = eig.eigenvectors() * (rotated.array() / evals.array()).matrix();
  model.b = -0.5 * model.w.dot(st.mu_pos + st.mu_neg);
  model.meta.method = method;
  if (model.w.isZero(0.0)) {
    throw std::runtime_error(method + ": degenerate fit (identical class means)");
  }
  return model;
}

Matrix shrink_covariance(const Matrix& cov, double gamma) {
  const Eigen::Index d = cov.rows();
  const double nu = cov.trace() / static_cast<double>(d);
  return (1.0 - gamma) * cov + gamma * nu * Matrix::Identity(d, d);
}

}  // namespace

LinearModel fit_lda(const TrainingSet& train) {
  validate_training_set(train);
  const ClassStats st = class_stats(train);
  return lda_from_stats(st, st.cov, true, "lda");
}

LinearModel fit_rlda(const TrainingSet& train, double lambda) {
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("rlda: lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
  validate_training_set(train);
  const ClassStats st = class_stats(train);
  LinearModel model = lda_from_stats(st, shrink_covariance(st.cov, lambda), false, "rlda");
  model.meta.lambda = lambda;
  return model;
}

LinearModel fit_sklda(const TrainingSet& train, double gamma) {
  if (gamma < 0.0 || gamma > 1.0) {
    throw std::invalid_argument("sklda: gamma must lie in [0, 1], got " + std::to_string(gamma));
  }
  validate_training_set(train);
  const ClassStats st = class_stats(train);
  LinearModel model = lda_from_stats(st, shrink_covariance(st.cov, gamma), false, "sklda");
  model.meta.gamma = gamma;
  return model;
}

LinearModel fit_sklda_analytic(const TrainingSet& train) {
  validate_training_set(train);
  const Eigen::Index n = train.n();
  const Eigen::Index d = train.dim();
  const ClassStats st = class_stats(train);

  // Ledoit-Wolf intensity on class-centered samples (Schafer-Strimmer form,
  // 1/(n-1) covariance normalization as published).
  Matrix w_sum = Matrix::Zero(d, d);
  Matrix w_sq_sum = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector z = train.X.row(i).transpose() -
                     (train.y[static_cast<std::size_t>(i)] == 1 ? st.mu_pos : st.mu_neg);
    const Matrix outer = z * z.transpose();
    w_sum += outer;
    w_sq_sum += outer.cwiseProduct(outer);
  }
  const double nd = static_cast<double>(n);
  const Matrix w_bar = w_sum / nd;
  const Matrix s = w_sum / (nd - 1.0);
  const double nu = s.trace() / static_cast<double>(d);

  const Matrix var_s = (nd / ((nd - 1.0) * (nd - 1.0) * (nd - 1.0))) *
                       (w_sq_sum - nd * w_bar.cwiseProduct(w_bar));
  Matrix target_dist = s;
  target_dist.diagonal().array() -= nu;
  const double denom = target_dist.squaredNorm();
  double gamma = denom > 0.0 ? var_s.sum() / denom : 1.0;
  gamma = std::clamp(gamma, 0.0, 1.0);

  LinearModel model = lda_from_stats(st, shrink_covariance(st.cov, gamma), false, "sklda");
  model.meta.gamma = gamma;
  return model;
}

// ---------------------------------------------------------------------------
// SWLDA

namespace {

struct OlsFit {
  Vector coef;      // intercept first, then selected columns in order
  Vector pvalues;   // per selected column, removal test
  double rss{0.0};
};

OlsFit ols_with_stats(const Matrix& X, const Vector& y, const std::vector<int>& selected) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = static_cast<Eigen::Index>(selected.size());
  Matrix design(n, p + 1);
  design.col(0).setOnes();
  for (Eigen::Index j = 0; j < p; ++j) design.col(j + 1) = X.col(selected[static_cast<std::size_t>(j)]);

  const Eigen::ColPivHouseholderQR<Matrix> qr(design);
  OlsFit fit;
  fit.coef = qr.solve(y);
  const Vector resid = y - design * fit.coef;
  fit.rss = resid.squaredNorm();
  const double dof = static_cast<double>(n - (p + 1));
  const double sigma2 = fit.rss / std::max(dof, 1.0);

  const Matrix xtx_inv = (design.transpose() * design)
                             .ldlt()
                             .solve(Matrix::Identity(p + 1, p + 1));
  fit.pvalues.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double se2 = sigma2 * xtx_inv(j + 1, j + 1);
    if (!(se2 > 0.0)) {
      fit.pvalues[j] = 1.0;
      continue;
    }
    const double f = fit.coef[j + 1] * fit.coef[j + 1] / se2;
    fit.pvalues[j] = f_test_pvalue(f, 1.0, dof);
  }
  return fit;
}

}  // namespace

LinearModel fit_swlda(const TrainingSet& train, double p_ins, double p_rem, int max_features) {
  if (!(p_ins > 0.0) || !(p_ins < p_rem) || !(p_rem < 1.0)) {
    throw std::invalid_argument("swlda: need 0 < p_ins < p_rem < 1");
  }
  if (max_features < 1) throw std::invalid_argument("swlda: max_features must be >= 1");
  validate_training_set(train);

  const Eigen::Index n = train.n();
  const Eigen::Index d = train.dim();
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = train.y[static_cast<std::size_t>(i)];

  // Selection works on centered columns; the intercept is implicit there and
  // restored by the final OLS fit on raw columns.
  const Vector yc = y.array() - y.mean();
  Matrix xc = train.X;
  for (Eigen::Index j = 0; j < d; ++j) xc.col(j).array() -= xc.col(j).mean();
  Vector col_norms(d);
  for (Eigen::Index j = 0; j < d; ++j) col_norms[j] = xc.col(j).squaredNorm();

  std::vector<int> selected;
  std::vector<char> in_model(static_cast<std::size_t>(d), 0);
  Matrix q(n, 0);  // orthonormal basis of the selected centered columns

  auto orthogonalize = [&](Vector v) {
    // two Gram-Schmidt passes
    for (int pass = 0; pass < 2; ++pass) {
      if (q.cols() > 0) v -= q * (q.transpose() * v);
    }
    return v;
  };
  auto rebuild_basis = [&] {
    q.resize(n, 0);
    for (int idx : selected) {
      Vector v = orthogonalize(xc.col(idx));
      const double norm = v.norm();
      if (norm > 1e-12) {
        q.conservativeResize(Eigen::NoChange, q.cols() + 1);
        q.col(q.cols() - 1) = v / norm;
      }
    }
  };

  Vector resid = yc;
  double rss = resid.squaredNorm();
  bool converged = true;
  int moves = 0;
  const int max_moves = 8 * max_features + 32;

  for (;;) {
    if (++moves > max_moves) {
      converged = false;
      break;
    }

    // removal sweep
    bool removed = true;
    while (removed && !selected.empty()) {
      removed = false;
      const OlsFit fit = ols_with_stats(train.X, y, selected);
      Eigen::Index worst = -1;
      double worst_p = p_rem;
      for (Eigen::Index j = 0; j < fit.pvalues.size(); ++j) {
        if (fit.pvalues[j] > worst_p) {
          worst_p = fit.pvalues[j];
          worst = j;
        }
      }
      if (worst >= 0) {
        in_model[static_cast<std::size_t>(selected[static_cast<std::size_t>(worst)])] = 0;
        selected.erase(selected.begin() + worst);
        rebuild_basis();
        resid = yc - q * (q.transpose() * yc);
        rss = resid.squaredNorm();
        removed = true;
        ++moves;
      }
    }

    // insertion: excluded feature with the smallest partial-F p-value
    if (static_cast<int>(selected.size()) >= max_features) break;
    const double dof = static_cast<double>(n) - static_cast<double>(selected.size()) - 2.0;
    if (dof < 1.0) break;
    int best = -1;
    double best_p = p_ins;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (in_model[static_cast<std::size_t>(j)]) continue;
      Vector z = orthogonalize(xc.col(j));
      const double denom = z.squaredNorm();
      if (denom <= 1e-12 * std::max(col_norms[j], 1.0)) continue;  // collinear with model
      const double delta = z.dot(resid) * z.dot(resid) / denom;
      const double rss_new = std::max(rss - delta, 0.0);
      if (rss_new <= 0.0) continue;
      const double f = delta / (rss_new / dof);
      const double p = f_test_pvalue(f, 1.0, dof);
      if (p < best_p) {  // strict < breaks ties toward the lowest index
        best_p = p;
        best = static_cast<int>(j);
      }
    }
    if (best < 0) break;

    selected.push_back(best);
    in_model[static_cast<std::size_t>(best)] = 1;
    Vector v = orthogonalize(xc.col(best));
    const double norm = v.norm();
    if (norm > 1e-12) {
      q.conservativeResize(Eigen::NoChange, q.cols() + 1);
      q.col(q.cols() - 1) = v / norm;
    }
    resid = yc - q * (q.transpose() * yc);
    rss = resid.squaredNorm();
  }

  if (selected.empty()) throw std::runtime_error("swlda: no discriminative features");

  const OlsFit fit = ols_with_stats(train.X, y, selected);
  LinearModel model;
  model.w = Vector::Zero(d);
  for (std::size_t j = 0; j < selected.size(); ++j) {
    model.w[selected[j]] = fit.coef[static_cast<Eigen::Index>(j) + 1];
  }
  model.b = fit.coef[0];
  model.meta.method = "swlda";
  model.meta.converged = converged;
  model.meta.selected = selected;
  std::sort(model.meta.selected.begin(), model.meta.selected.end());
  if (model.w.isZero(0.0)) throw std::runtime_error("swlda: degenerate fit (zero weights)");
  return model;
}

// ---------------------------------------------------------------------------
// BLDA

LinearModel fit_blda(const TrainingSet& train, double tol, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("blda: tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("blda: max_iter must be >= 1");
  validate_training_set(train);

  const Eigen::Index n = train.n();
  const Eigen::Index d = train.dim();
  Eigen::Index n_pos = 0;
  for (int label : train.y) n_pos += label == 1;
  const Eigen::Index n_neg = n - n_pos;

  // class-size-compensated target coding
  Vector t(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t[i] = train.y[static_cast<std::size_t>(i)] == 1
               ? static_cast<double>(n) / static_cast<double>(n_pos)
               : -static_cast<double>(n) / static_cast<double>(n_neg);
  }

  Matrix phi(n, d + 1);
  phi.leftCols(d) = train.X;
  phi.col(d).setOnes();

  const Eigen::SelfAdjointEigenSolver<Matrix> eig(phi.transpose() * phi);
  if (eig.info() != Eigen::Success) throw std::runtime_error("blda: eigendecomposition failed");
  const Vector evals = eig.eigenvalues().cwiseMax(0.0);
  const Vector u = eig.eigenvectors().transpose() * (phi.transpose() * t);

  constexpr double kPrecisionCap = 1e15;
  double alpha = 1.0;
  double beta = 1.0;
  Vector m_rot;
  int iterations = 0;
  bool converged = false;
  std::vector<double> beta_trace;

  for (int it = 0; it < max_iter; ++it) {
    iterations = it + 1;
    m_rot = (beta * u.array() / (beta * evals.array() + alpha)).matrix();
    const Vector m = eig.eigenvectors() * m_rot;
    const double gamma_eff = (beta * evals.array() / (beta * evals.array() + alpha)).sum();
    const double rss = (t - phi * m).squaredNorm();
    const double m_sq = m.squaredNorm();

    const double alpha_new = std::min(gamma_eff / std::max(m_sq, 1e-300), kPrecisionCap);
    const double beta_new =
        std::min((static_cast<double>(n) - gamma_eff) / std::max(rss, 1e-300), kPrecisionCap);
    beta_trace.push_back(beta_new);

    const double rel = std::max(std::fabs(alpha_new - alpha) / alpha, std::fabs(beta_new - beta) / beta);
    alpha = alpha_new;
    beta = beta_new;
    if (rel < tol) {
      converged = true;
      break;
    }
  }

  const Vector m = eig.eigenvectors() *
                   (beta * u.array() / (beta * evals.array() + alpha)).matrix();
  LinearModel model;
  model.w = m.head(d);
  model.b = m[d];
  model.meta.method = "blda";
  model.meta.alpha = alpha;
  model.meta.beta = beta;
  model.meta.iterations = iterations;
  model.meta.converged = converged;
  model.meta.beta_trace = std::move(beta_trace);
  if (model.w.isZero(0.0)) throw std::runtime_error("blda: degenerate fit (zero weights)");
  return model;
}

// ---------------------------------------------------------------------------
// STDA

namespace {

// Leading C*T features of one sample row, viewed channel-major as C x T.
Matrix sample_as_matrix(const Matrix& X, Eigen::Index row, int n_ch, int n_tp) {
  Matrix m(n_ch, n_tp);
  for (int c = 0; c < n_ch; ++c) {
    for (int t = 0; t < n_tp; ++t) m(c, t) = X(row, static_cast<Eigen::Index>(c) * n_tp + t);
  }
  return m;
}

// Scalar Fisher ratio of the bilinearly projected samples.
double projected_fisher_ratio(const std::vector<Matrix>& samples, const std::vector<int>& y,
                              const Matrix& m_pos, const Matrix& m_neg, Eigen::Index n_pos,
                              Eigen::Index n_neg, const Matrix& w_s, const Matrix& w_t) {
  const Matrix mean_all = (static_cast<double>(n_pos) * m_pos + static_cast<double>(n_neg) * m_neg) /
                          static_cast<double>(n_pos + n_neg);
  const double between =
      static_cast<double>(n_pos) * (w_s.transpose() * (m_pos - mean_all) * w_t).squaredNorm() +
      static_cast<double>(n_neg) * (w_s.transpose() * (m_neg - mean_all) * w_t).squaredNorm();
  double within = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Matrix& mu = y[i] == 1 ? m_pos : m_neg;
    within += (w_s.transpose() * (samples[i] - mu) * w_t).squaredNorm();
  }
  if (!(within > 0.0)) return std::numeric_limits<double>::infinity();
  return between / within;
}

Matrix top_generalized_eigenvectors(const Matrix& s_b, Matrix s_w, int count, const char* what) {
  const double trace = s_w.trace();
  if (!(trace > 0.0)) throw std::runtime_error(std::string("stda: degenerate ") + what + " scatter");
  const Eigen::Index dim = s_w.rows();
  // jitter keeps the generalized solver's Cholesky step alive at small n
  s_w += (1e-9 * trace / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> eig(s_b, s_w);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error(std::string("stda: generalized eigensolve failed for ") + what);
  }
  Matrix out(dim, count);
  for (int j = 0; j < count; ++j) out.col(j) = eig.eigenvectors().col(dim - 1 - j);
  return out;
}

Matrix orthonormal_basis(const Matrix& w) {
  const Eigen::HouseholderQR<Matrix> qr(w);
  Matrix q = qr.householderQ() * Matrix::Identity(w.rows(), w.cols());
  return q;
}

double subspace_distance(const Matrix& a, const Matrix& b) {
  const Matrix qa = orthonormal_basis(a);
  const Matrix qb = orthonormal_basis(b);
  return (qa * qa.transpose() - qb * qb.transpose()).norm();
}

}  // namespace

LinearModel fit_stda(const TrainingSet& train, int ds, int dt, double tol, int max_iter) {
  validate_training_set(train);
  if (!train.d_layout) throw std::invalid_argument("stda: d_layout (channels, timepoints) required");
  const int n_ch = train.d_layout->first;
  const int n_tp = train.d_layout->second;
  const Eigen::Index d = train.dim();
  const Eigen::Index ct = static_cast<Eigen::Index>(n_ch) * n_tp;
  if (n_ch < 1 || n_tp < 1 || ct > d) {
    throw std::invalid_argument("stda: d_layout " + std::to_string(n_ch) + "x" + std::to_string(n_tp) +
                                " inconsistent with feature length " + std::to_string(d));
  }
  if (ds < 1 || ds > n_ch || dt < 1 || dt > n_tp) {
    throw std::invalid_argument("stda: projection dims must satisfy 1 <= ds <= C, 1 <= dt <= T");
  }
  const Eigen::Index extras = d - ct;
  const Eigen::Index n = train.n();

  std::vector<Matrix> samples;
  samples.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    samples.push_back(sample_as_matrix(train.X, i, n_ch, n_tp));
  }
  Matrix m_pos = Matrix::Zero(n_ch, n_tp);
  Matrix m_neg = Matrix::Zero(n_ch, n_tp);
  Eigen::Index n_pos = 0, n_neg = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (train.y[static_cast<std::size_t>(i)] == 1) {
      m_pos += samples[static_cast<std::size_t>(i)];
      ++n_pos;
    } else {
      m_neg += samples[static_cast<std::size_t>(i)];
      ++n_neg;
    }
  }
  m_pos /= static_cast<double>(n_pos);
  m_neg /= static_cast<double>(n_neg);
  const Matrix mean_all = (static_cast<double>(n_pos) * m_pos + static_cast<double>(n_neg) * m_neg) /
                          static_cast<double>(n);

  // temporal init: leading right singular vectors of the class-mean
  // difference. Full V, since dt may exceed min(C, T); columns beyond the
  // rank are an arbitrary orthonormal complement, which is fine for an init.
  const Eigen::JacobiSVD<Matrix> svd(m_pos - m_neg, Eigen::ComputeFullV);
  Matrix w_t = svd.matrixV().leftCols(dt);
  Matrix w_s = Matrix::Zero(n_ch, ds);

  std::vector<double> fisher_trace;
  double current_ratio = -1.0;
  int iterations = 0;
  bool converged = false;

  for (int it = 0; it < max_iter; ++it) {
    iterations = it + 1;
    const Matrix w_s_prev = w_s;
    const Matrix w_t_prev = w_t;

    // spatial step with temporal projection fixed
    {
      const Matrix pt = w_t * w_t.transpose();
      Matrix s_b = Matrix::Zero(n_ch, n_ch);
      s_b += static_cast<double>(n_pos) * (m_pos - mean_all) * pt * (m_pos - mean_all).transpose();
      s_b += static_cast<double>(n_neg) * (m_neg - mean_all) * pt * (m_neg - mean_all).transpose();
      Matrix s_w = Matrix::Zero(n_ch, n_ch);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Matrix centered = samples[static_cast<std::size_t>(i)] -
                                (train.y[static_cast<std::size_t>(i)] == 1 ? m_pos : m_neg);
        const Matrix proj = centered * w_t;
        s_w += proj * proj.transpose();
      }
      const Matrix candidate = top_generalized_eigenvectors(s_b, s_w, ds, "spatial");
      const double ratio =
          projected_fisher_ratio(samples, train.y, m_pos, m_neg, n_pos, n_neg, candidate, w_t);
      if (it == 0 || ratio >= current_ratio - 1e-12) {
        w_s = candidate;
        current_ratio = ratio;
      }
    }

    // temporal step with spatial projection fixed
    {
      const Matrix ps = w_s * w_s.transpose();
      Matrix s_b = Matrix::Zero(n_tp, n_tp);
      s_b += static_cast<double>(n_pos) * (m_pos - mean_all).transpose() * ps * (m_pos - mean_all);
      s_b += static_cast<double>(n_neg) * (m_neg - mean_all).transpose() * ps * (m_neg - mean_all);
      Matrix s_w = Matrix::Zero(n_tp, n_tp);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Matrix centered = samples[static_cast<std::size_t>(i)] -
                                (train.y[static_cast<std::size_t>(i)] == 1 ? m_pos : m_neg);
        const Matrix proj = w_s.transpose() * centered;
        s_w += proj.transpose() * proj;
      }
      const Matrix candidate = top_generalized_eigenvectors(s_b, s_w, dt, "temporal");
      const double ratio =
          projected_fisher_ratio(samples, train.y, m_pos, m_neg, n_pos, n_neg, w_s, candidate);
      if (ratio >= current_ratio - 1e-12) {
        w_t = candidate;
        current_ratio = ratio;
      }
    }

    fisher_trace.push_back(current_ratio);
    if (it > 0 && subspace_distance(w_s, w_s_prev) < tol && subspace_distance(w_t, w_t_prev) < tol) {
      converged = true;
      break;
    }
  }

  // projected features, plus any passthrough extras, into a plain LDA
  TrainingSet inner;
  inner.X.resize(n, static_cast<Eigen::Index>(ds) * dt + extras);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Matrix proj = w_s.transpose() * samples[static_cast<std::size_t>(i)] * w_t;
    for (int a = 0; a < ds; ++a) {
      for (int bcol = 0; bcol < dt; ++bcol) {
        inner.X(i, static_cast<Eigen::Index>(a) * dt + bcol) = proj(a, bcol);
      }
    }
    if (extras > 0) inner.X.row(i).tail(extras) = train.X.row(i).tail(extras);
  }
  inner.y = train.y;
  inner.trial_ids = train.trial_ids;

  LinearModel inner_model;
  try {
    inner_model = fit_lda(inner);
  } catch (const std::runtime_error&) {
    inner_model = fit_sklda(inner, 0.1);
  }

  // compose back to a weight vector over the original features
  Matrix w_inner(ds, dt);
  for (int a = 0; a < ds; ++a) {
    for (int bcol = 0; bcol < dt; ++bcol) w_inner(a, bcol) = inner_model.w[static_cast<Eigen::Index>(a) * dt + bcol];
  }
  const Matrix w_full = w_s * w_inner * w_t.transpose();  // C x T
  LinearModel model;
  model.w.resize(d);
  for (int c = 0; c < n_ch; ++c) {
    for (int tcol = 0; tcol < n_tp; ++tcol) {
      model.w[static_cast<Eigen::Index>(c) * n_tp + tcol] = w_full(c, tcol);
    }
  }
  if (extras > 0) model.w.tail(extras) = inner_model.w.tail(extras);
  model.b = inner_model.b;
  model.meta.method = "stda";
  model.meta.iterations = iterations;
  model.meta.converged = converged;
  model.meta.fisher_trace = std::move(fisher_trace);
  model.meta.w_spatial = w_s;
  model.meta.w_temporal = w_t;
  model.meta.gamma = inner_model.meta.gamma;
  if (model.w.isZero(0.0)) throw std::runtime_error("stda: degenerate fit (zero weights)");
  return model;
}

// ---------------------------------------------------------------------------

double score(const LinearModel& model, const Vector& x) {
  if (x.size() != model.w.size()) {
    throw std::invalid_argument("score: feature length " + std::to_string(x.size()) +
                                " does not match model dimension " + std::to_string(model.w.size()));
  }
  if (!x.allFinite()) throw std::invalid_argument("score: non-finite feature value");
  return model.w.dot(x) + model.b;
}

Vector score_batch(const LinearModel& model, const Matrix& X) {
  if (X.cols() != model.w.size()) {
    throw std::invalid_argument("score_batch: feature length " + std::to_string(X.cols()) +
                                " does not match model dimension " + std::to_string(model.w.size()));
  }
  if (!X.allFinite()) throw std::invalid_argument("score_batch: non-finite feature value");
  return (X * model.w).array() + model.b;
}

std::string classifier_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::Lda: return "lda";
    case ClassifierKind::Rlda: return "rlda";
    case ClassifierKind::Swlda: return "swlda";
    case ClassifierKind::Blda: return "blda";
    case ClassifierKind::Sklda: return "sklda";
    case ClassifierKind::Stda: return "stda";
  }
  throw std::logic_error("classifier_name: unknown kind");
}

ClassifierKind classifier_kind_from_name(const std::string& name) {
  if (name == "lda") return ClassifierKind::Lda;
  if (name == "rlda") return ClassifierKind::Rlda;
  if (name == "swlda") return ClassifierKind::Swlda;
  if (name == "blda") return ClassifierKind::Blda;
  if (name == "sklda") return ClassifierKind::Sklda;
  if (name == "stda") return ClassifierKind::Stda;
  throw std::invalid_argument("unknown classifier: " + name);
}

LinearModel fit_classifier(const ClassifierSpec& spec, const TrainingSet& train) {
  switch (spec.kind) {
    case ClassifierKind::Lda:
      return fit_lda(train);
    case ClassifierKind::Rlda:
      return fit_rlda(train, spec.lambda);
    case ClassifierKind::Swlda:
      return fit_swlda(train, spec.p_ins, spec.p_rem, spec.max_features);
    case ClassifierKind::Blda:
      return fit_blda(train, spec.blda_tol, spec.blda_max_iter);
    case ClassifierKind::Sklda:
      return spec.gamma_analytic ? fit_sklda_analytic(train) : fit_sklda(train, spec.gamma);
    case ClassifierKind::Stda:
      return fit_stda(train, spec.stda_ds, spec.stda_dt, spec.stda_tol, spec.stda_max_iter);
  }
  throw std::logic_error("fit_classifier: unknown kind");
}

// ---------------------------------------------------------------------------
// model serialization

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  if (j.empty()) return Matrix(0, 0);
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j.at(0).size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

}  // namespace

void save_model(const LinearModel& model, const std::string& path) {
  nlohmann::json j;
  j["w"] = std::vector<double>(model.w.data(), model.w.data() + model.w.size());
  j["b"] = model.b;
  nlohmann::json meta;
  meta["method"] = model.meta.method;
  meta["lambda"] = model.meta.lambda;
  meta["gamma"] = model.meta.gamma;
  meta["alpha"] = model.meta.alpha;
  meta["beta"] = model.meta.beta;
  meta["iterations"] = model.meta.iterations;
  meta["converged"] = model.meta.converged;
  meta["selected"] = model.meta.selected;
  meta["beta_trace"] = model.meta.beta_trace;
  meta["fisher_trace"] = model.meta.fisher_trace;
  meta["w_spatial"] = matrix_to_json(model.meta.w_spatial);
  meta["w_temporal"] = matrix_to_json(model.meta.w_temporal);
  j["meta"] = std::move(meta);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

LinearModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  nlohmann::json j;
  try {
    in >> j;
    LinearModel model;
    const auto w = j.at("w").get<std::vector<double>>();
    model.w = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
    model.b = j.at("b").get<double>();
    const auto& meta = j.at("meta");
    model.meta.method = meta.at("method").get<std::string>();
    model.meta.lambda = meta.at("lambda").get<double>();
    model.meta.gamma = meta.at("gamma").get<double>();
    model.meta.alpha = meta.at("alpha").get<double>();
    model.meta.beta = meta.at("beta").get<double>();
    model.meta.iterations = meta.at("iterations").get<int>();
    model.meta.converged = meta.at("converged").get<bool>();
    model.meta.selected = meta.at("selected").get<std::vector<int>>();
    model.meta.beta_trace = meta.at("beta_trace").get<std::vector<double>>();
    model.meta.fisher_trace = meta.at("fisher_trace").get<std::vector<double>>();
    model.meta.w_spatial = matrix_from_json(meta.at("w_spatial"));
    model.meta.w_temporal = matrix_from_json(meta.at("w_temporal"));
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": malformed model file: " + e.what());
  }
}

}  // namespace ebci
