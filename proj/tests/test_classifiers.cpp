#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <random>

#include "ebci/classifiers.hpp"
#include "support/oracles.hpp"

using namespace ebci;

namespace {

TrainingSet make_train(const Matrix& X, const std::vector<int>& y) {
  TrainingSet t;
  t.X = X;
  t.y = y;
  t.trial_ids.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) t.trial_ids[i] = static_cast<int>(i);
  return t;
}

TrainingSet blob_train(int n_per_class, int d, const std::vector<std::pair<int, double>>& signal,
                       std::uint64_t seed, double noise_sd = 1.0) {
  const auto blob = oracle::gaussian_blobs(n_per_class, d, signal, seed, noise_sd);
  return make_train(blob.X, blob.y);
}

double test_accuracy(const LinearModel& model, const TrainingSet& data) {
  const Vector s = score_batch(model, data.X);
  int correct = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    correct += (s[i] > 0.0 ? 1 : -1) == data.y[static_cast<std::size_t>(i)];
  }
  return static_cast<double>(correct) / static_cast<double>(s.size());
}

}  // namespace

TEST_CASE("lda: two 1-D classes at means 0 and 2 put the boundary at x = 1") {
  Matrix X(4, 1);
  X << 1.0, 3.0, -1.0, 1.0;
  const TrainingSet t = make_train(X, {1, 1, -1, -1});
  const LinearModel m = fit_lda(t);
  CHECK(m.w[0] > 0.0);
  CHECK(-m.b / m.w[0] == doctest::Approx(1.0));
  CHECK(score(m, Vector::Constant(1, 1.0)) == doctest::Approx(0.0));
}

TEST_CASE("lda: 2-D example against the closed-form diagonal-covariance oracle") {
  // antisymmetric x1 jitter makes the pooled covariance exactly diagonal:
  // class deviations (+-0.05, +-0.5) and (-+0.05, +-0.5) sum to diag(.005, .5)
  Matrix X(4, 2);
  X << 0.0, 0.0, 0.1, 1.0, 2.0, 0.0, 1.9, 1.0;
  const std::vector<int> y = {-1, -1, 1, 1};
  const TrainingSet t = make_train(X, y);
  const LinearModel m = fit_lda(t);

  const Matrix cov = oracle::pooled_covariance(X, y);
  CHECK(cov(0, 1) == doctest::Approx(0.0));
  const Vector delta = (X.row(2) + X.row(3)).transpose() / 2.0 - (X.row(0) + X.row(1)).transpose() / 2.0;
  // closed form for a diagonal covariance: w_j = delta_j / cov_jj
  CHECK(m.w[0] == doctest::Approx(delta[0] / cov(0, 0)).epsilon(1e-9));
  CHECK(m.w[1] == doctest::Approx(0.0));
  CHECK(-m.b / m.w[0] == doctest::Approx(1.0));  // boundary x1 = 1
}

TEST_CASE("lda: the exact grid points are singular; shrinkage recovers boundary x1 = 1, w2 = 0") {
  Matrix X(4, 2);
  X << 0.0, 0.0, 2.0, 0.0, 0.0, 1.0, 2.0, 1.0;
  const std::vector<int> y = {-1, 1, -1, 1};
  const TrainingSet t = make_train(X, y);
  CHECK_THROWS_WITH_AS(fit_lda(t), doctest::Contains("singular covariance"), std::runtime_error);
  const LinearModel m = fit_sklda(t, 0.1);
  CHECK(m.w[1] == doctest::Approx(0.0));
  CHECK(-m.b / m.w[0] == doctest::Approx(1.0));
}

TEST_CASE("lda: n=4, d=200 is rank deficient") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix X(4, 200);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = normal(rng);
  CHECK_THROWS_WITH_AS(fit_lda(make_train(X, {1, 1, -1, -1})),
                       doctest::Contains("singular covariance"), std::runtime_error);
}

TEST_CASE("degenerate-setting equivalence: rlda(0) == sklda(0) == lda to 1e-8") {
  const TrainingSet t = blob_train(60, 8, {{1, 1.0}, {4, -0.7}}, 17);
  const LinearModel lda = fit_lda(t);
  const LinearModel rlda = fit_rlda(t, 0.0);
  const LinearModel sklda = fit_sklda(t, 0.0);
  Matrix probes(10, 8);
  std::mt19937_64 rng(18);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (Eigen::Index i = 0; i < probes.size(); ++i) probes.data()[i] = normal(rng);
  const Vector s0 = score_batch(lda, probes);
  CHECK((score_batch(rlda, probes) - s0).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((score_batch(sklda, probes) - s0).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("rlda: lambda=1 aligns w with the mean difference") {
  const TrainingSet t = blob_train(80, 6, {{0, 0.8}, {3, 0.5}}, 23);
  const LinearModel m = fit_rlda(t, 1.0);
  Vector mu_pos = Vector::Zero(6), mu_neg = Vector::Zero(6);
  int n_pos = 0, n_neg = 0;
  for (Eigen::Index i = 0; i < t.n(); ++i) {
    if (t.y[static_cast<std::size_t>(i)] == 1) {
      mu_pos += t.X.row(i).transpose();
      ++n_pos;
    } else {
      mu_neg += t.X.row(i).transpose();
      ++n_neg;
    }
  }
  const Vector delta = mu_pos / n_pos - mu_neg / n_neg;
  const double cosine = m.w.dot(delta) / (m.w.norm() * delta.norm());
  CHECK(cosine == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rlda: lambda=0.01 repairs a singular d=128, n=60 covariance") {
  const TrainingSet t = blob_train(30, 128, {{5, 0.6}}, 29);
  CHECK_THROWS(fit_lda(t));
  const LinearModel m = fit_rlda(t, 0.01);
  CHECK(m.w.allFinite());
  // positive definiteness of the shrunk covariance, recomputed directly
  const Matrix cov = oracle::pooled_covariance(t.X, t.y);
  const double nu = cov.trace() / 128.0;
  const Matrix shrunk = 0.99 * cov + 0.01 * nu * Matrix::Identity(128, 128);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(shrunk);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
  CHECK_THROWS(fit_rlda(t, -0.1));
  CHECK_THROWS(fit_rlda(t, 1.5));
}

TEST_CASE("sklda: gamma=1 equalizes all eigenvalues at nu") {
  const TrainingSet t = blob_train(40, 5, {{2, 1.0}}, 31);
  const Matrix cov = oracle::pooled_covariance(t.X, t.y);
  const double nu = cov.trace() / 5.0;
  const Matrix shrunk_full = 0.0 * cov + 1.0 * nu * Matrix::Identity(5, 5);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(shrunk_full);
  for (Eigen::Index i = 0; i < 5; ++i) CHECK(eig.eigenvalues()[i] == doctest::Approx(nu));
  const LinearModel m = fit_sklda(t, 1.0);
  CHECK(m.w.allFinite());
}

TEST_CASE("sklda: d=129, n=40 stays positive definite with gamma=0.1") {
  const TrainingSet t = blob_train(20, 129, {{0, 0.8}}, 37);
  const LinearModel m = fit_sklda(t, 0.1);
  CHECK(m.w.allFinite());
  const Matrix cov = oracle::pooled_covariance(t.X, t.y);
  const double nu = cov.trace() / 129.0;
  const Matrix shrunk = 0.9 * cov + 0.1 * nu * Matrix::Identity(129, 129);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(shrunk);
  CHECK(eig.eigenvalues().minCoeff() >= 0.1 * nu - 1e-9);
}

TEST_CASE("sklda eigenvalue bounds hold on random instances") {
  std::mt19937_64 seeds(41);
  for (int rep = 0; rep < 10; ++rep) {
    const auto seed = seeds();
    const TrainingSet t = blob_train(25, 12, {{1, 0.5}}, seed);
    const Matrix cov = oracle::pooled_covariance(t.X, t.y);
    Eigen::SelfAdjointEigenSolver<Matrix> base(cov);
    const double nu = cov.trace() / 12.0;
    for (double gamma : {0.1, 0.4, 0.9}) {
      const Matrix shrunk = (1.0 - gamma) * cov + gamma * nu * Matrix::Identity(12, 12);
      Eigen::SelfAdjointEigenSolver<Matrix> eig(shrunk);
      const double lo = gamma * nu + (1.0 - gamma) * base.eigenvalues().minCoeff();
      const double hi = gamma * nu + (1.0 - gamma) * base.eigenvalues().maxCoeff();
      CHECK(eig.eigenvalues().minCoeff() >= lo - 1e-9);
      CHECK(eig.eigenvalues().maxCoeff() <= hi + 1e-9);
    }
  }
}

TEST_CASE("sklda analytic gamma lies in [0,1] and shrinks harder at small n") {
  // anisotropic columns, so the scaled-identity target is genuinely wrong and
  // a large sample should shrink little
  auto anisotropic = [](int n_per_class, std::uint64_t seed) {
    TrainingSet t = blob_train(n_per_class, 40, {{2, 0.7}}, seed);
    for (Eigen::Index j = 0; j < t.X.cols(); ++j) {
      t.X.col(j) *= 1.0 + 0.25 * static_cast<double>(j);
    }
    return t;
  };
  const LinearModel m_small = fit_sklda_analytic(anisotropic(15, 43));
  const LinearModel m_large = fit_sklda_analytic(anisotropic(400, 47));
  CHECK(m_small.meta.gamma >= 0.0);
  CHECK(m_small.meta.gamma <= 1.0);
  CHECK(m_large.meta.gamma >= 0.0);
  CHECK(m_large.meta.gamma <= 1.0);
  CHECK(m_small.meta.gamma > m_large.meta.gamma);
  CHECK(m_large.meta.gamma < 0.2);
}

TEST_CASE("label-flip antisymmetry is exact for lda, rlda, sklda") {
  const TrainingSet t = blob_train(35, 10, {{0, 0.9}, {6, -0.4}}, 53);
  TrainingSet flipped = t;
  for (auto& l : flipped.y) l = -l;
  {
    const LinearModel a = fit_lda(t), b = fit_lda(flipped);
    CHECK((a.w + b.w).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.b + b.b == 0.0);
  }
  {
    const LinearModel a = fit_rlda(t, 0.01), b = fit_rlda(flipped, 0.01);
    CHECK((a.w + b.w).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.b + b.b == 0.0);
  }
  {
    const LinearModel a = fit_sklda(t, 0.1), b = fit_sklda(flipped, 0.1);
    CHECK((a.w + b.w).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.b + b.b == 0.0);
  }
}

TEST_CASE("positive rescaling of all features leaves hard decisions unchanged") {
  const TrainingSet t = blob_train(50, 7, {{1, 0.8}}, 59);
  TrainingSet scaled = t;
  scaled.X *= 1000.0;
  Matrix probes = t.X.topRows(20);
  Matrix probes_scaled = probes * 1000.0;
  for (int which = 0; which < 3; ++which) {
    const LinearModel a = which == 0   ? fit_lda(t)
                          : which == 1 ? fit_rlda(t, 0.01)
                                       : fit_sklda(t, 0.1);
    const LinearModel b = which == 0   ? fit_lda(scaled)
                          : which == 1 ? fit_rlda(scaled, 0.01)
                                       : fit_sklda(scaled, 0.1);
    const Vector sa = score_batch(a, probes);
    const Vector sb = score_batch(b, probes_scaled);
    for (Eigen::Index i = 0; i < sa.size(); ++i) CHECK((sa[i] > 0.0) == (sb[i] > 0.0));
  }
}

// ---------------------------------------------------------------------------

TEST_CASE("swlda recovers the planted features {2, 7} and matches the best-subset oracle") {
  const TrainingSet t = blob_train(200, 10, {{2, 0.5}, {7, -0.4}}, 61);
  const LinearModel m = fit_swlda(t);
  CHECK(m.meta.selected == std::vector<int>{2, 7});
  for (Eigen::Index j = 0; j < 10; ++j) {
    if (j != 2 && j != 7) CHECK(m.w[j] == 0.0);
  }
  Vector y(t.n());
  for (Eigen::Index i = 0; i < t.n(); ++i) y[i] = t.y[static_cast<std::size_t>(i)];
  std::vector<int> best = oracle::best_subset(t.X, y, 2);
  std::sort(best.begin(), best.end());
  CHECK(best == std::vector<int>{2, 7});
}

TEST_CASE("swlda: all-noise features produce no model") {
  // seed chosen so no noise feature clears the entry test
  for (std::uint64_t seed : {71ull, 72ull, 73ull, 74ull, 75ull, 76ull}) {
    const TrainingSet t = blob_train(200, 10, {}, seed);
    try {
      fit_swlda(t);
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("no discriminative features") != std::string::npos);
      return;
    }
  }
  FAIL("every seed admitted a noise feature");
}

TEST_CASE("swlda validates the entry/removal criteria") {
  const TrainingSet t = blob_train(50, 4, {{0, 1.0}}, 79);
  CHECK_THROWS(fit_swlda(t, 0.15, 0.10, 60));
  CHECK_THROWS(fit_swlda(t, 0.15, 0.15, 60));
}

TEST_CASE("swlda respects max_features") {
  std::vector<std::pair<int, double>> signal;
  for (int j = 0; j < 8; ++j) signal.push_back({j, 0.5});
  const TrainingSet t = blob_train(300, 12, signal, 83);
  const LinearModel m = fit_swlda(t, 0.1, 0.15, 3);
  CHECK(static_cast<int>(m.meta.selected.size()) <= 3);
}

TEST_CASE("swlda selection is invariant under sample permutation") {
  const TrainingSet t = blob_train(150, 10, {{1, 0.6}, {8, 0.5}}, 89);
  TrainingSet permuted = t;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(t.n()));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(97);
  std::shuffle(order.begin(), order.end(), rng);
  for (Eigen::Index i = 0; i < t.n(); ++i) {
    permuted.X.row(i) = t.X.row(order[static_cast<std::size_t>(i)]);
    permuted.y[static_cast<std::size_t>(i)] = t.y[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
  }
  CHECK(fit_swlda(t).meta.selected == fit_swlda(permuted).meta.selected);
}

// ---------------------------------------------------------------------------

TEST_CASE("blda: noise precision grows monotonically on noiseless separable data") {
  Matrix X(40, 1);
  std::vector<int> y;
  for (int i = 0; i < 40; ++i) {
    const int label = i % 2 ? 1 : -1;
    X(i, 0) = label;  // targets are exactly linear in x
    y.push_back(label);
  }
  const LinearModel m = fit_blda(make_train(X, y), 1e-4, 30);
  REQUIRE(m.meta.beta_trace.size() > 3);
  for (std::size_t i = 1; i < m.meta.beta_trace.size(); ++i) {
    CHECK(m.meta.beta_trace[i] >= m.meta.beta_trace[i - 1]);
  }
}

TEST_CASE("blda: pure-noise features give chance AUC and a small prior penalty") {
  // evidence maximization may drive the prior precision off to the cap on
  // pure noise; the fit itself must still be sane
  const TrainingSet train = blob_train(100, 10, {}, 101);
  const TrainingSet probe = blob_train(500, 10, {}, 103);
  const LinearModel m = fit_blda(train);
  CHECK(m.meta.alpha * m.w.squaredNorm() < 5.0);
  const Vector s = score_batch(m, probe.X);
  const double auc =
      oracle::pairwise_auc(std::vector<double>(s.data(), s.data() + s.size()), probe.y);
  CHECK(auc == doctest::Approx(0.5).epsilon(0.12));
}

TEST_CASE("blda: tight and loose tolerances agree within 1e-3") {
  const TrainingSet t = blob_train(120, 16, {{3, 0.5}, {9, -0.3}}, 107);
  const LinearModel loose = fit_blda(t, 1e-4, 200);
  const LinearModel tight = fit_blda(t, 1e-10, 2000);
  const Matrix probes = t.X.topRows(40);
  const Vector sl = score_batch(loose, probes);
  const Vector st = score_batch(tight, probes);
  CHECK((sl - st).cwiseAbs().maxCoeff() < 1e-3);
}

// ---------------------------------------------------------------------------

namespace {

// matrix-shaped data: signal planted on one channel/time block
TrainingSet planted_matrix_data(int n_per_class, int n_ch, int n_tp, int channel, int t0, int t1,
                                double delta, std::uint64_t seed, int extras = 0,
                                double extra_delta = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = n_ch * n_tp + extras;
  TrainingSet t;
  t.X.resize(2 * n_per_class, d);
  for (int i = 0; i < 2 * n_per_class; ++i) {
    const int label = i < n_per_class ? 1 : -1;
    t.y.push_back(label);
    t.trial_ids.push_back(i);
    for (int j = 0; j < d; ++j) t.X(i, j) = normal(rng);
    for (int tt = t0; tt < t1; ++tt) t.X(i, channel * n_tp + tt) += label * delta;
    for (int e = 0; e < extras; ++e) t.X(i, n_ch * n_tp + e) += label * extra_delta;
  }
  t.d_layout = {n_ch, n_tp};
  return t;
}

}  // namespace

TEST_CASE("stda: spatial filter concentrates on the planted channel") {
  const TrainingSet t = planted_matrix_data(150, 8, 16, 3, 6, 10, 1.2, 113);
  const LinearModel m = fit_stda(t, 1, 1);
  const Vector ws = m.meta.w_spatial.col(0);
  CHECK(ws[3] * ws[3] / ws.squaredNorm() >= 0.8);
  CHECK(m.w.size() == 128);
}

TEST_CASE("stda: Fisher ratio is non-decreasing across iterations") {
  const TrainingSet t = planted_matrix_data(60, 6, 10, 2, 3, 6, 0.8, 127);
  const LinearModel m = fit_stda(t, 2, 2, 1e-12, 15);  // force several iterations
  REQUIRE(m.meta.fisher_trace.size() >= 2);
  for (std::size_t i = 1; i < m.meta.fisher_trace.size(); ++i) {
    CHECK(m.meta.fisher_trace[i] >= m.meta.fisher_trace[i - 1] - 1e-9);
  }
}

TEST_CASE("stda: full-rank projections match sklda accuracy within 0.03") {
  const TrainingSet train = planted_matrix_data(120, 4, 6, 1, 2, 4, 0.7, 131);
  const TrainingSet probe = planted_matrix_data(400, 4, 6, 1, 2, 4, 0.7, 137);
  const LinearModel stda = fit_stda(train, 4, 6);
  const LinearModel sklda = fit_sklda(train, 0.1);
  const double acc_stda = test_accuracy(stda, probe);
  const double acc_sklda = test_accuracy(sklda, probe);
  CHECK(std::abs(acc_stda - acc_sklda) <= 0.03);
}

TEST_CASE("stda: passthrough extra feature joins the projected model") {
  // signal lives only in the extra (fused duration) dimension
  const TrainingSet t = planted_matrix_data(150, 4, 4, 0, 0, 0, 0.0, 139, 1, 2.0);
  const LinearModel m = fit_stda(t, 2, 2);
  CHECK(m.w.size() == 17);
  CHECK(std::abs(m.w[16]) > 0.0);
  const TrainingSet probe = planted_matrix_data(300, 4, 4, 0, 0, 0, 0.0, 149, 1, 2.0);
  CHECK(test_accuracy(m, probe) > 0.9);
}

TEST_CASE("stda rejects inconsistent layouts and degenerate scatter") {
  TrainingSet t = planted_matrix_data(20, 4, 4, 0, 0, 2, 0.5, 151);
  t.d_layout = {5, 4};  // 20 > 16 features
  CHECK_THROWS(fit_stda(t, 1, 1));
  t.d_layout.reset();
  CHECK_THROWS(fit_stda(t, 1, 1));

  TrainingSet degenerate;
  degenerate.X = Matrix::Ones(8, 16);
  degenerate.y = {1, 1, 1, 1, -1, -1, -1, -1};
  degenerate.trial_ids = {0, 1, 2, 3, 4, 5, 6, 7};
  degenerate.d_layout = {4, 4};
  CHECK_THROWS(fit_stda(degenerate, 1, 1));
}

// ---------------------------------------------------------------------------

TEST_CASE("score: dimension and finiteness checks, batch consistency") {
  const TrainingSet t = blob_train(30, 5, {{0, 1.0}}, 157);
  const LinearModel m = fit_lda(t);
  CHECK_THROWS(score(m, Vector::Zero(4)));
  Vector bad = Vector::Zero(5);
  bad[2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(score(m, bad));
  const Matrix probes = t.X.topRows(7);
  const Vector batch = score_batch(m, probes);
  for (Eigen::Index i = 0; i < 7; ++i) {
    CHECK(batch[i] == doctest::Approx(score(m, probes.row(i).transpose())).epsilon(1e-15));
  }
}

TEST_CASE("model serialization round-trips exactly") {
  const TrainingSet t = planted_matrix_data(80, 4, 4, 1, 1, 3, 0.9, 163, 1, 0.5);
  const LinearModel m = fit_stda(t, 2, 2);
  const std::string path =
      (std::filesystem::temp_directory_path() / "ebci_model.json").string();
  save_model(m, path);
  const LinearModel r = load_model(path);
  CHECK(r.w.size() == m.w.size());
  CHECK((r.w - m.w).cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.b == m.b);
  CHECK(r.meta.method == "stda");
  CHECK(r.meta.fisher_trace == m.meta.fisher_trace);
  CHECK((r.meta.w_spatial - m.meta.w_spatial).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("fit_classifier dispatches every kind, including analytic shrinkage") {
  TrainingSet t = blob_train(120, 16, {{3, 0.6}}, 977);
  t.d_layout = {4, 4};
  for (ClassifierKind kind : {ClassifierKind::Lda, ClassifierKind::Rlda, ClassifierKind::Swlda,
                              ClassifierKind::Blda, ClassifierKind::Sklda, ClassifierKind::Stda}) {
    ClassifierSpec spec;
    spec.kind = kind;
    const LinearModel m = fit_classifier(spec, t);
    CHECK(m.meta.method == classifier_name(kind));
    CHECK(m.w.size() == 16);
  }
  ClassifierSpec analytic;
  analytic.kind = ClassifierKind::Sklda;
  analytic.gamma_analytic = true;
  const LinearModel m = fit_classifier(analytic, t);
  CHECK(m.meta.gamma >= 0.0);
  CHECK(m.meta.gamma <= 1.0);
  CHECK(m.meta.gamma != 0.1);  // estimated from the data, not the fixed default
}

TEST_CASE("identical class means produce no model") {
  // both classes hold the same sample set: full-rank covariance, zero delta
  std::mt19937_64 rng(991);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix half(5, 3);
  for (Eigen::Index i = 0; i < half.size(); ++i) half.data()[i] = normal(rng);
  Matrix X(10, 3);
  X.topRows(5) = half;
  X.bottomRows(5) = half;
  CHECK_THROWS_WITH_AS(fit_lda(make_train(X, {1, 1, 1, 1, 1, -1, -1, -1, -1, -1})),
                       doctest::Contains("identical class means"), std::runtime_error);
}

TEST_CASE("training set validation") {
  Matrix X = Matrix::Zero(3, 2);
  CHECK_THROWS(fit_lda(make_train(X, {1, -1, 1})));  // n < 4
  Matrix X4 = Matrix::Random(4, 2);
  CHECK_THROWS(fit_lda(make_train(X4, {1, 1, 1, 1})));  // single class
  X4(1, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS(fit_lda(make_train(X4, {1, 1, -1, -1})));
}
