#include "ebci/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ebci/numeric.hpp"

namespace ebci {

namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Unity-DC lowpass: Hamming-windowed sinc with taps normalized to sum 1.
Vector lowpass_taps(double cutoff_hz, double sample_rate_hz, int n_taps) {
  const int m = n_taps - 1;
  const double fc = cutoff_hz / sample_rate_hz;
  Vector h(n_taps);
  for (int k = 0; k < n_taps; ++k) {
    const double window = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * k / m);
    h[k] = 2.0 * fc * sinc(2.0 * fc * (k - m / 2)) * window;
  }
  h /= h.sum();
  return h;
}

Vector convolve_same(const Vector& x, const Vector& taps) {
  const Eigen::Index n = x.size();
  const Eigen::Index k = taps.size();
  const Eigen::Index delay = (k - 1) / 2;
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // y[i] = sum_j taps[j] * x[i + delay - j], zero outside [0, n)
    const Eigen::Index j_lo = std::max<Eigen::Index>(0, i + delay - (n - 1));
    const Eigen::Index j_hi = std::min<Eigen::Index>(k - 1, i + delay);
    if (j_lo == 0 && j_hi == k - 1) {
      y[i] = taps.dot(x.segment(i + delay - (k - 1), k).reverse());
    } else {
      double acc = 0.0;
      for (Eigen::Index j = j_lo; j <= j_hi; ++j) acc += taps[j] * x[i + delay - j];
      y[i] = acc;
    }
  }
  return y;
}

// Reflect-padded convolution for short epochs, where zero padding would put
// large baseline steps at the edges.
Vector convolve_reflect(const Vector& x, const Vector& taps) {
  const Eigen::Index n = x.size();
  const Eigen::Index k = taps.size();
  const Eigen::Index delay = (k - 1) / 2;
  auto sample = [&](Eigen::Index idx) {
    while (idx < 0 || idx >= n) {
      if (idx < 0) idx = -idx;
      if (idx >= n) idx = 2 * (n - 1) - idx;
    }
    return x[idx];
  };
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) acc += taps[j] * sample(i + delay - j);
    y[i] = acc;
  }
  return y;
}

std::vector<int> scalp_channel_indices(const EegRecording& rec) {
  std::vector<int> idx;
  for (std::size_t c = 0; c < rec.channel_names.size(); ++c) {
    if (!is_eog_channel(rec.channel_names[c])) idx.push_back(static_cast<int>(c));
  }
  return idx;
}

}  // namespace

double FilterKernel::gain_at(double freq_hz) const {
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz;
  double re = 0.0, im = 0.0;
  for (Eigen::Index k = 0; k < taps.size(); ++k) {
    re += taps[k] * std::cos(w * static_cast<double>(k));
    im -= taps[k] * std::sin(w * static_cast<double>(k));
  }
  return std::hypot(re, im);
}

FilterKernel design_bandpass_fir(double low_hz, double high_hz, double sample_rate_hz, int n_taps) {
  if (!(low_hz > 0.0) || !(low_hz < high_hz) || !(high_hz < 0.5 * sample_rate_hz)) {
    throw std::invalid_argument("design_bandpass_fir: need 0 < low < high < rate/2, got [" +
                                std::to_string(low_hz) + ", " + std::to_string(high_hz) + "] at " +
                                std::to_string(sample_rate_hz) + " Hz");
  }
  if (n_taps < 31 || n_taps % 2 == 0) {
    throw std::invalid_argument("design_bandpass_fir: tap count must be odd and >= 31, got " +
                                std::to_string(n_taps));
  }
  FilterKernel kernel;
  kernel.taps = lowpass_taps(high_hz, sample_rate_hz, n_taps) -
                lowpass_taps(low_hz, sample_rate_hz, n_taps);
  kernel.sample_rate_hz = sample_rate_hz;
  kernel.low_hz = low_hz;
  kernel.high_hz = high_hz;

  const double mid = kernel.gain_at(0.5 * (low_hz + high_hz));
  const double dc = kernel.gain_at(0.0);
  if (!(dc < 0.1 * mid)) {  // < -20 dB relative to passband
    throw std::runtime_error("design_bandpass_fir: DC leakage above -20 dB; increase tap count");
  }
  if (std::fabs(mid - 1.0) > 0.05) {
    throw std::runtime_error("design_bandpass_fir: mid-band gain off by more than 5%; increase tap count");
  }
  return kernel;
}

EegRecording apply_filter(const EegRecording& recording, const FilterKernel& kernel) {
  if (kernel.sample_rate_hz != recording.sample_rate_hz) {
    throw std::invalid_argument("apply_filter: kernel designed for " +
                                std::to_string(kernel.sample_rate_hz) + " Hz, recording is " +
                                std::to_string(recording.sample_rate_hz) + " Hz");
  }
  EegRecording out = recording;
  const Eigen::Index n_ch = recording.n_channels();
  parallel_for(static_cast<std::size_t>(n_ch), 0, [&](std::size_t c) {
    const Vector x = recording.data.row(static_cast<Eigen::Index>(c)).transpose();
    out.data.row(static_cast<Eigen::Index>(c)) = convolve_same(x, kernel.taps).transpose();
  });
  out.edge_guard_samples = std::max(out.edge_guard_samples, kernel.group_delay());
  return out;
}

EegRecording rereference_average(const EegRecording& recording) {
  const std::vector<int> scalp = scalp_channel_indices(recording);
  if (scalp.size() < 2) {
    throw std::runtime_error("rereference_average: need at least 2 scalp channels, have " +
                             std::to_string(scalp.size()));
  }
  EegRecording out = recording;
  Vector mean = Vector::Zero(recording.n_samples());
  for (int c : scalp) mean += recording.data.row(c).transpose();
  mean /= static_cast<double>(scalp.size());
  for (int c : scalp) out.data.row(c) -= mean.transpose();
  return out;
}

EogRemoval remove_eog(const EegRecording& recording) {
  const int heog = recording.channel_index("HEOG");
  const int veog = recording.channel_index("VEOG");
  if (heog < 0 || veog < 0) throw std::runtime_error("remove_eog: HEOG/VEOG channels absent");

  const Eigen::Index n = recording.n_samples();
  Matrix regressors(n, 2);
  regressors.col(0) = recording.data.row(heog).transpose();
  regressors.col(1) = recording.data.row(veog).transpose();

  const Eigen::Matrix2d gram = regressors.transpose() * regressors;
  const double scale = gram.trace();
  if (!(scale > 0.0) || gram.determinant() <= 1e-12 * scale * scale) {
    throw std::runtime_error("remove_eog: singular regressor (EOG channels constant or collinear)");
  }

  EogRemoval out;
  out.recording = recording;
  const std::vector<int> scalp = scalp_channel_indices(recording);
  out.scalp_names.reserve(scalp.size());
  out.coefficients.resize(static_cast<Eigen::Index>(scalp.size()), 2);
  const Eigen::Matrix2d gram_inv = gram.inverse();
  for (std::size_t i = 0; i < scalp.size(); ++i) {
    const int c = scalp[i];
    const Vector y = recording.data.row(c).transpose();
    const Eigen::Vector2d coef = gram_inv * (regressors.transpose() * y);
    out.recording.data.row(c) = (y - regressors * coef).transpose();
    out.coefficients.row(static_cast<Eigen::Index>(i)) = coef.transpose();
    out.scalp_names.push_back(recording.channel_names[c]);
  }
  return out;
}

EpochSet extract_epochs(const EegRecording& recording, double window_ms, double baseline_ms,
                        int target_index) {
  if (window_ms < 300.0 || window_ms > 800.0) {
    throw std::invalid_argument("extract_epochs: window must lie in [300, 800] ms, got " +
                                std::to_string(window_ms));
  }
  if (baseline_ms <= 0.0) throw std::invalid_argument("extract_epochs: baseline must be > 0 ms");

  const double fs = recording.sample_rate_hz;
  const Eigen::Index win = static_cast<Eigen::Index>(std::llround(window_ms * fs / 1000.0));
  const Eigen::Index base = static_cast<Eigen::Index>(std::llround(baseline_ms * fs / 1000.0));

  std::vector<int> rows;
  for (const std::string& name : classification_channels()) {
    const int idx = recording.channel_index(name);
    if (idx < 0) throw std::runtime_error("extract_epochs: channel " + name + " missing");
    rows.push_back(idx);
  }

  EpochSet out;
  for (const StimulusOnset& so : recording.stimulus_onsets) {
    if (so.sample_index < base || so.sample_index + win > recording.n_samples()) {
      ++out.n_skipped;
      continue;
    }
    Epoch ep;
    ep.channels.assign(classification_channels().begin(), classification_channels().end());
    ep.rate_hz = fs;
    ep.trial_index = so.trial_index;
    ep.icon_index = so.icon_index;
    ep.label = so.icon_index == target_index ? Label::Target : Label::NonTarget;
    ep.data.resize(static_cast<Eigen::Index>(rows.size()), win);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto seg = recording.data.row(rows[r]).segment(so.sample_index, win);
      const double baseline_mean =
          recording.data.row(rows[r]).segment(so.sample_index - base, base).mean();
      ep.data.row(static_cast<Eigen::Index>(r)) = seg.array() - baseline_mean;
    }
    out.epochs.push_back(std::move(ep));
  }
  return out;
}

Epoch decimate(const Epoch& epoch, double target_rate_hz) {
  const double fs = epoch.rate_hz;
  if (!(target_rate_hz > 0.0) || target_rate_hz >= fs) {
    throw std::invalid_argument("decimate: target rate must be positive and below the source rate");
  }
  const Eigen::Index n_src = epoch.data.cols();
  const Eigen::Index n_out =
      static_cast<Eigen::Index>(std::floor(static_cast<double>(n_src) * target_rate_hz / fs));
  if (n_out < 1) throw std::invalid_argument("decimate: epoch too short for target rate");

  // Anti-alias lowpass at 0.4 * target rate; shrink the kernel if the epoch
  // is shorter than the default 63 taps.
  int aa_taps = 63;
  if (aa_taps > n_src) aa_taps = static_cast<int>(n_src % 2 == 0 ? n_src - 1 : n_src);
  const Vector aa = lowpass_taps(0.4 * target_rate_hz, fs, aa_taps);

  Epoch out = epoch;
  out.rate_hz = target_rate_hz;
  out.data.resize(epoch.data.rows(), n_out);
  const double step = fs / target_rate_hz;
  for (Eigen::Index c = 0; c < epoch.data.rows(); ++c) {
    const Vector filtered = convolve_reflect(epoch.data.row(c).transpose(), aa);
    for (Eigen::Index i = 0; i < n_out; ++i) {
      Eigen::Index src = static_cast<Eigen::Index>(std::llround(static_cast<double>(i) * step));
      src = std::min(src, n_src - 1);
      out.data(c, i) = filtered[src];
    }
  }
  return out;
}

}  // namespace ebci
