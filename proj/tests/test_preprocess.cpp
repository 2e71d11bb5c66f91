#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ebci/preprocess.hpp"

using namespace ebci;

namespace {

EegRecording recording_with(const Matrix& data, double fs = 500.0) {
  EegRecording rec;
  rec.sample_rate_hz = fs;
  rec.data = data;
  rec.channel_names.resize(static_cast<std::size_t>(data.rows()));
  const std::vector<std::string> base = {"Fz", "Cz", "Pz", "Oz", "P3", "P4", "PO7", "PO8"};
  for (std::size_t i = 0; i < rec.channel_names.size(); ++i) {
    rec.channel_names[i] = i < base.size() ? base[i] : "X" + std::to_string(i);
  }
  return rec;
}

Vector sine(double freq_hz, double fs, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v[i] = std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) / fs);
  }
  return v;
}

double rms(const Vector& v) { return std::sqrt(v.squaredNorm() / static_cast<double>(v.size())); }

// gain oracle: filter a pure sine and compare steady-state RMS, edges trimmed
double measured_gain(const FilterKernel& kernel, double freq_hz) {
  const double fs = kernel.sample_rate_hz;
  const Eigen::Index n = static_cast<Eigen::Index>(fs) * 20;
  Matrix data(1, n);
  data.row(0) = sine(freq_hz, fs, n).transpose();
  EegRecording rec = recording_with(data, fs);
  rec.channel_names[0] = "Fz";
  const EegRecording out = apply_filter(rec, kernel);
  const Eigen::Index guard = kernel.group_delay() + 1;
  const Vector mid_in = rec.data.row(0).segment(guard, n - 2 * guard).transpose();
  const Vector mid_out = out.data.row(0).segment(guard, n - 2 * guard).transpose();
  return rms(mid_out) / rms(mid_in);
}

}  // namespace

TEST_CASE("band-pass kernel design: 1-40 Hz at 501 taps") {
  const FilterKernel kernel = design_bandpass_fir(1.0, 40.0, 500.0, 501);
  CHECK(kernel.taps.size() == 501);
  CHECK(kernel.group_delay() == 250);
  // DC gain is exactly zero by construction
  CHECK(std::abs(kernel.taps.sum()) < 1e-12);

  CHECK(measured_gain(kernel, 10.0) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(measured_gain(kernel, 0.2) < 0.1);   // >= 20 dB down
  CHECK(measured_gain(kernel, 60.0) < 0.1);  // >= 20 dB down
}

TEST_CASE("band-pass design rejects bad parameters") {
  CHECK_THROWS(design_bandpass_fir(40.0, 1.0, 500.0, 501));
  CHECK_THROWS(design_bandpass_fir(1.0, 1.0, 500.0, 501));
  CHECK_THROWS(design_bandpass_fir(1.0, 300.0, 500.0, 501));
  CHECK_THROWS(design_bandpass_fir(1.0, 40.0, 500.0, 500));  // even
  CHECK_THROWS(design_bandpass_fir(1.0, 40.0, 500.0, 21));   // too short
}

TEST_CASE("apply_filter: zeros map to zeros, impulse reproduces the taps") {
  const FilterKernel kernel = design_bandpass_fir(1.0, 40.0, 500.0, 101);
  EegRecording zeros = recording_with(Matrix::Zero(2, 400));
  CHECK(apply_filter(zeros, kernel).data.cwiseAbs().maxCoeff() == 0.0);

  Matrix impulse = Matrix::Zero(1, 401);
  impulse(0, 200) = 1.0;
  EegRecording rec = recording_with(impulse);
  const EegRecording out = apply_filter(rec, kernel);
  for (Eigen::Index k = 0; k < 101; ++k) {
    CHECK(out.data(0, 150 + k) == doctest::Approx(kernel.taps[k]).epsilon(1e-12));
  }
  CHECK(out.edge_guard_samples == 50);
}

TEST_CASE("apply_filter keeps the 10 Hz component of a 10 Hz + 0.1 Hz mix") {
  const FilterKernel kernel = design_bandpass_fir(1.0, 40.0, 500.0, 2001);
  const Eigen::Index n = 500 * 40;
  const Vector fast = sine(10.0, 500.0, n);
  const Vector slow = sine(0.1, 500.0, n);
  Matrix data(1, n);
  data.row(0) = (fast + slow).transpose();
  const EegRecording out = apply_filter(recording_with(data), kernel);
  const Eigen::Index guard = kernel.group_delay() + 1;
  const Vector got = out.data.row(0).segment(guard, n - 2 * guard).transpose();
  const Vector want = fast.segment(guard, n - 2 * guard);
  CHECK(rms(got - want) / rms(want) < 0.10);
}

TEST_CASE("filtering is linear") {
  const FilterKernel kernel = design_bandpass_fir(1.0, 40.0, 500.0, 101);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(1, 300), y(1, 300);
  for (Eigen::Index i = 0; i < 300; ++i) {
    x(0, i) = normal(rng);
    y(0, i) = normal(rng);
  }
  const double a = 2.5, b = -1.25;
  const EegRecording fx = apply_filter(recording_with(x), kernel);
  const EegRecording fy = apply_filter(recording_with(y), kernel);
  const EegRecording fab = apply_filter(recording_with(a * x + b * y), kernel);
  const Matrix combo = a * fx.data + b * fy.data;
  CHECK((fab.data - combo).cwiseAbs().maxCoeff() <
        1e-6 * std::max(1.0, combo.cwiseAbs().maxCoeff()));
}

TEST_CASE("apply_filter rejects a rate mismatch") {
  const FilterKernel kernel = design_bandpass_fir(1.0, 40.0, 250.0, 101);
  CHECK_THROWS(apply_filter(recording_with(Matrix::Zero(1, 100), 500.0), kernel));
}

TEST_CASE("average re-reference: two channels [1, 3] become [-1, 1]") {
  Matrix data(2, 1);
  data << 1.0, 3.0;
  const EegRecording out = rereference_average(recording_with(data));
  CHECK(out.data(0, 0) == doctest::Approx(-1.0));
  CHECK(out.data(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("average re-reference: random 60-channel matrix has zero column means; idempotent") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 20.0);
  Matrix data(60, 200);
  for (Eigen::Index c = 0; c < 60; ++c) {
    for (Eigen::Index t = 0; t < 200; ++t) data(c, t) = normal(rng);
  }
  const EegRecording once = rereference_average(recording_with(data));
  for (Eigen::Index t = 0; t < 200; ++t) {
    CHECK(std::abs(once.data.col(t).mean()) < 1e-9);
  }
  const EegRecording twice = rereference_average(once);
  CHECK((twice.data - once.data).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("average re-reference excludes EOG channels and needs 2 scalp channels") {
  Matrix data(3, 1);
  data << 1.0, 3.0, 100.0;
  EegRecording rec = recording_with(data);
  rec.channel_names = {"Fz", "Cz", "VEOG"};
  const EegRecording out = rereference_average(rec);
  CHECK(out.data(0, 0) == doctest::Approx(-1.0));
  CHECK(out.data(2, 0) == doctest::Approx(100.0));  // untouched

  EegRecording no_scalp = rec;
  no_scalp.channel_names = {"HEOG", "VEOG", "HEOG"};
  CHECK_THROWS(rereference_average(no_scalp));
}

TEST_CASE("remove_eog recovers a planted leakage coefficient of 2 at SNR 10") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index n = 50000;
  Vector veog(n), heog(n), noise(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    veog[i] = normal(rng);
    heog[i] = normal(rng);
    noise[i] = normal(rng);
  }
  // scalp = 2 * VEOG + noise, noise scaled for SNR = var(2v)/var(noise) = 10
  const double noise_scale = 2.0 / std::sqrt(10.0);
  Matrix data(4, n);
  data.row(0) = (2.0 * veog + noise_scale * noise).transpose();
  data.row(1) = veog.cwiseProduct(heog).transpose();  // second scalp channel, arbitrary
  data.row(2) = heog.transpose();
  data.row(3) = veog.transpose();
  EegRecording rec = recording_with(data);
  rec.channel_names = {"Fz", "Cz", "HEOG", "VEOG"};

  const EogRemoval removal = remove_eog(rec);
  CHECK(removal.scalp_names[0] == "Fz");
  CHECK(removal.coefficients(0, 1) == doctest::Approx(2.0).epsilon(0.025));  // VEOG column
  // residual has zero projection on both EOG channels
  const Vector resid = removal.recording.data.row(0).transpose();
  CHECK(std::abs(resid.dot(veog)) / static_cast<double>(n) < 1e-6 * 2.0);
  CHECK(std::abs(resid.dot(heog)) / static_cast<double>(n) < 1e-6 * 2.0);
}

TEST_CASE("remove_eog: zero EOG is a singular regressor; orthogonal scalp unchanged") {
  Matrix data(3, 100);
  data.setZero();
  for (Eigen::Index i = 0; i < 100; ++i) data(0, i) = std::sin(0.3 * static_cast<double>(i));
  EegRecording rec = recording_with(data);
  rec.channel_names = {"Fz", "HEOG", "VEOG"};
  CHECK_THROWS_WITH_AS(remove_eog(rec), doctest::Contains("singular regressor"), std::runtime_error);

  // orthogonal construction: scalp uncorrelated with EOG stays put
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index n = 20000;
  Matrix d2(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d2(1, i) = normal(rng);
    d2(2, i) = normal(rng);
  }
  Vector scalp(n);
  for (Eigen::Index i = 0; i < n; ++i) scalp[i] = normal(rng);
  // project out span{HEOG, VEOG} via an orthogonalized basis
  const Vector h = d2.row(1).transpose();
  Vector v_perp = d2.row(2).transpose();
  v_perp -= h * (v_perp.dot(h) / h.squaredNorm());
  scalp -= h * (scalp.dot(h) / h.squaredNorm());
  scalp -= v_perp * (scalp.dot(v_perp) / v_perp.squaredNorm());
  d2.row(0) = scalp.transpose();
  EegRecording rec2 = recording_with(d2);
  rec2.channel_names = {"Fz", "HEOG", "VEOG"};
  const EogRemoval removal = remove_eog(rec2);
  CHECK((removal.recording.data.row(0) - d2.row(0)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("extract_epochs: 500 ms at 500 Hz gives 8 x 250 raw samples") {
  Matrix data = Matrix::Zero(10, 1000);
  EegRecording rec = recording_with(data);
  rec.channel_names = {"Fz", "Cz", "Pz", "Oz", "P3", "P4", "PO7", "PO8", "HEOG", "VEOG"};
  rec.stimulus_onsets.push_back({0, 200, 12});
  rec.stimulus_onsets.push_back({0, 400, 3});
  const EpochSet set = extract_epochs(rec, 500.0, 100.0, 12);
  REQUIRE(set.epochs.size() == 2);
  CHECK(set.n_skipped == 0);
  CHECK(set.epochs[0].data.rows() == 8);
  CHECK(set.epochs[0].data.cols() == 250);
  CHECK(set.epochs[0].label == Label::Target);
  CHECK(set.epochs[1].label == Label::NonTarget);
  CHECK(set.epochs[0].channels[2] == "Pz");
}

TEST_CASE("extract_epochs: constant channels become all-zero epochs") {
  Matrix data(10, 1000);
  for (Eigen::Index c = 0; c < 10; ++c) data.row(c).setConstant(static_cast<double>(c) + 1.0);
  EegRecording rec = recording_with(data);
  rec.channel_names = {"Fz", "Cz", "Pz", "Oz", "P3", "P4", "PO7", "PO8", "HEOG", "VEOG"};
  rec.stimulus_onsets.push_back({0, 300, 5});
  const EpochSet set = extract_epochs(rec, 500.0, 100.0, 12);
  REQUIRE(set.epochs.size() == 1);
  CHECK(set.epochs[0].data.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("extract_epochs: onset near the end is skipped and counted") {
  Matrix data = Matrix::Zero(10, 1000);
  EegRecording rec = recording_with(data);
  rec.channel_names = {"Fz", "Cz", "Pz", "Oz", "P3", "P4", "PO7", "PO8", "HEOG", "VEOG"};
  rec.stimulus_onsets.push_back({0, 995, 2});  // 10 ms before the end
  rec.stimulus_onsets.push_back({0, 300, 2});
  rec.stimulus_onsets.push_back({0, 20, 2});  // not enough baseline
  const EpochSet set = extract_epochs(rec, 500.0, 100.0, 12);
  CHECK(set.epochs.size() == 1);
  CHECK(set.n_skipped == 2);
}

TEST_CASE("extract_epochs validates the window range") {
  EegRecording rec = recording_with(Matrix::Zero(10, 1000));
  rec.channel_names = {"Fz", "Cz", "Pz", "Oz", "P3", "P4", "PO7", "PO8", "HEOG", "VEOG"};
  CHECK_THROWS(extract_epochs(rec, 200.0, 100.0, 0));
  CHECK_THROWS(extract_epochs(rec, 900.0, 100.0, 0));
}

TEST_CASE("decimate: window-to-sample-count formula over the threshold grid") {
  for (int window_ms = 300; window_ms <= 800; window_ms += 50) {
    Epoch ep;
    ep.rate_hz = 500.0;
    ep.channels.assign(classification_channels().begin(), classification_channels().end());
    const Eigen::Index n_src = static_cast<Eigen::Index>(window_ms) / 2;  // 500 Hz
    ep.data = Matrix::Random(8, n_src);
    const Epoch out = decimate(ep, 32.0);
    CHECK(out.data.cols() == static_cast<Eigen::Index>(window_ms * 32 / 1000));
    CHECK(out.rate_hz == 32.0);
  }
  // the pinned cases
  Epoch ep;
  ep.rate_hz = 500.0;
  ep.data = Matrix::Random(8, 250);
  CHECK(decimate(ep, 32.0).data.cols() == 16);        // 128 features total
  ep.data = Matrix::Random(8, 150);
  CHECK(decimate(ep, 32.0).data.cols() == 9);
  ep.data = Matrix::Random(8, 400);
  CHECK(decimate(ep, 32.0).data.cols() == 25);
  CHECK_THROWS(decimate(ep, 500.0));
  CHECK_THROWS(decimate(ep, 600.0));
}

TEST_CASE("decimate preserves a slow component") {
  Epoch ep;
  ep.rate_hz = 500.0;
  ep.data.resize(1, 250);
  ep.data.row(0) = sine(4.0, 500.0, 250).transpose();
  const Epoch out = decimate(ep, 32.0);
  for (Eigen::Index i = 2; i < out.data.cols() - 2; ++i) {
    const double t = static_cast<double>(i) * 500.0 / 32.0;  // source-sample position
    const double want = std::sin(2.0 * std::numbers::pi * 4.0 * std::round(t) / 500.0);
    CHECK(out.data(0, i) == doctest::Approx(want).epsilon(0.15));
  }
}
