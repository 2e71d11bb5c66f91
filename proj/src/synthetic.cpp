#include "ebci/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace ebci {

GenParams::GenParams() {
  //                   Fz   Cz   Pz   Oz   P3   P4   PO7  PO8  F3   F4   C3   C4   O1   O2   HEOG VEOG
  erp_channel_gains = {0.4, 0.7, 1.0, 0.8, 0.8, 0.8, 0.6, 0.6, 0.2, 0.2, 0.4, 0.4, 0.6, 0.6, 0.0, 0.0};
  early_channel_gains = {0.0, 0.0, 0.0, 0.3, 0.1, 0.1, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.5, 0.0, 0.0};
  veog_leak = {0.30, 0.15, 0.08, 0.05, 0.08, 0.08, 0.05, 0.05, 0.25, 0.25, 0.12, 0.12, 0.04, 0.04, 0.0, 0.0};
  heog_leak = {0.15, 0.08, 0.04, 0.03, 0.05, 0.05, 0.08, 0.08, 0.12, 0.12, 0.06, 0.06, 0.03, 0.03, 0.0, 0.0};
}

const std::vector<std::string>& GenParams::montage() {
  static const std::vector<std::string> names = {"Fz", "Cz", "Pz",  "Oz",  "P3", "P4", "PO7", "PO8",
                                                 "F3", "F4", "C3",  "C4",  "O1", "O2", "HEOG", "VEOG"};
  return names;
}

void validate_gen_params(const GenParams& params) {
  if (params.n_trials < 20) throw std::invalid_argument("generator: n_trials must be >= 20");
  if (!(params.sample_rate_hz > 0.0)) throw std::invalid_argument("generator: sample rate must be > 0");
  if (!(params.trial_duration_ms >= 1500.0)) {
    throw std::invalid_argument("generator: trial duration must be >= 1500 ms");
  }
  if (!(params.erp_width_ms > 0.0) || !(params.early_width_ms > 0.0)) {
    throw std::invalid_argument("generator: component widths must be > 0");
  }
  if (params.erp_latency_ms + params.erp_width_ms > 800.0) {
    throw std::invalid_argument("generator: late component does not fit the maximum epoch window");
  }
  if (params.noise_sigma_uv < 0.0 || params.sensor_noise_uv < 0.0 || params.eog_sigma_uv < 0.0) {
    throw std::invalid_argument("generator: noise scales must be >= 0");
  }
  if (!(params.target_duration_median_ms > 0.0) || !(params.nontarget_duration_median_ms > 0.0) ||
      !(params.target_duration_sigma > 0.0) || !(params.nontarget_duration_sigma > 0.0)) {
    throw std::invalid_argument("generator: duration distribution parameters must be > 0");
  }
  if (params.nontarget_fixations_per_trial < 1.0 ||
      params.nontarget_fixations_per_trial > static_cast<double>(params.layout.icon_count() - 1)) {
    throw std::invalid_argument("generator: nontarget fixations per trial out of range");
  }
  const std::size_t n_ch = GenParams::montage().size();
  if (params.erp_channel_gains.size() != n_ch || params.early_channel_gains.size() != n_ch ||
      params.veog_leak.size() != n_ch || params.heog_leak.size() != n_ch) {
    throw std::invalid_argument("generator: gain profiles must match the montage size");
  }
  validate_layout(params.layout);
}

namespace {

double gaussian_bump(double t_ms, double center_ms, double sigma_ms) {
  const double z = (t_ms - center_ms) / sigma_ms;
  return std::exp(-0.5 * z * z);
}

// Target waveform for one montage channel at time t after fixation onset.
double template_value(const GenParams& p, std::size_t channel, double t_ms) {
  const double late = p.erp_amplitude_uv * p.erp_channel_gains[channel] *
                      gaussian_bump(t_ms, p.erp_latency_ms, 0.5 * p.erp_width_ms);
  const double early = p.early_amplitude_uv * p.early_channel_gains[channel] *
                       gaussian_bump(t_ms, p.early_latency_ms, 0.5 * p.early_width_ms);
  return late + early;
}

constexpr double kTemplateSpanMs = 500.0;

Vector white_noise(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

// Spectrally shaped white noise: amplitude ~ 1/sqrt(f) (pink power profile),
// flattened below 1 Hz, unit variance on output.
Vector pink_noise(std::mt19937_64& rng, Eigen::Index n, double fs) {
  Eigen::Index n_fft = 1;
  while (n_fft < n) n_fft <<= 1;
  std::vector<double> white(static_cast<std::size_t>(n_fft));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& x : white) x = normal(rng);

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, white);
  const double f_floor = 1.0;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double f = static_cast<double>(k) * fs / static_cast<double>(n_fft);
    spectrum[k] *= k == 0 ? 0.0 : 1.0 / std::sqrt(std::max(f, f_floor));
  }
  std::vector<double> shaped;
  fft.inv(shaped, spectrum);

  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = shaped[static_cast<std::size_t>(i)];
  const double sd = std::sqrt(v.squaredNorm() / static_cast<double>(n));
  if (sd > 0.0) v /= sd;
  return v;
}

// ~200 ms moving average; turns broadband noise into a slow drift.
Vector slow_drift(std::mt19937_64& rng, Eigen::Index n, double fs) {
  Vector raw = white_noise(rng, n);
  const Eigen::Index win = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(0.2 * fs));
  Vector out(n);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += raw[i];
    if (i >= win) acc -= raw[i - win];
    out[i] = acc / static_cast<double>(std::min(i + 1, win));
  }
  const double sd = std::sqrt((out.array() - out.mean()).square().sum() / static_cast<double>(n));
  if (sd > 0.0) out /= sd;
  return out;
}

}  // namespace

Matrix erp_template(const GenParams& params, Label label) {
  validate_gen_params(params);
  const double fs = params.sample_rate_hz;
  const Eigen::Index n_t = static_cast<Eigen::Index>(std::llround(kTemplateSpanMs * fs / 1000.0));
  const double scale = label == Label::Target ? 1.0 : params.contrast;
  Matrix out(8, n_t);
  for (std::size_t c = 0; c < 8; ++c) {
    for (Eigen::Index i = 0; i < n_t; ++i) {
      const double t_ms = static_cast<double>(i) * 1000.0 / fs;
      out(static_cast<Eigen::Index>(c), i) = scale * template_value(params, c, t_ms);
    }
  }
  return out;
}

Session generate_session(const GenParams& params) {
  validate_gen_params(params);
  std::mt19937_64 rng(params.seed);
  const double fs = params.sample_rate_hz;
  const auto& montage = GenParams::montage();
  const std::size_t n_ch = montage.size();
  const std::size_t heog_idx = n_ch - 2;
  const std::size_t veog_idx = n_ch - 1;

  const double lead_ms = 1000.0;
  const double tail_ms = 1000.0;
  const double total_ms = lead_ms + params.n_trials * params.trial_duration_ms + tail_ms;
  const Eigen::Index n_samples = static_cast<Eigen::Index>(std::llround(total_ms * fs / 1000.0));

  Session session;
  session.layout = params.layout;
  session.n_trials = params.n_trials;
  session.eeg.sample_rate_hz = fs;
  session.eeg.channel_names.assign(montage.begin(), montage.end());
  session.eeg.data.resize(static_cast<Eigen::Index>(n_ch), n_samples);

  // background activity, channel by channel in montage order
  for (std::size_t c = 0; c < n_ch; ++c) {
    if (c == heog_idx || c == veog_idx) {
      session.eeg.data.row(static_cast<Eigen::Index>(c)) =
          (params.eog_sigma_uv * slow_drift(rng, n_samples, fs)).transpose();
      continue;
    }
    Vector base = params.noise_model == NoiseModel::Pink ? pink_noise(rng, n_samples, fs)
                                                         : white_noise(rng, n_samples);
    Vector noise = params.noise_sigma_uv * base;
    if (params.sensor_noise_uv > 0.0) noise += params.sensor_noise_uv * white_noise(rng, n_samples);
    session.eeg.data.row(static_cast<Eigen::Index>(c)) = noise.transpose();
  }

  // trials: fixation stream, stimulus onsets, stamped templates, blinks
  std::uniform_int_distribution<int> jitter_px(-20, 20);
  std::uniform_real_distribution<double> saccade_gap_ms(30.0, 80.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::Index template_len = static_cast<Eigen::Index>(std::llround(kTemplateSpanMs * fs / 1000.0));

  auto draw_duration = [&](Label label) {
    const double median = label == Label::Target ? params.target_duration_median_ms
                                                 : params.nontarget_duration_median_ms;
    const double sigma = label == Label::Target ? params.target_duration_sigma
                                                : params.nontarget_duration_sigma;
    std::normal_distribution<double> log_draw(std::log(median), sigma);
    return std::clamp(std::exp(log_draw(rng)), 60.0, 1200.0);
  };

  const int n_icons = params.layout.icon_count();
  std::vector<int> nontarget_icons;
  for (int i = 0; i < n_icons; ++i) {
    if (i != params.layout.target_index) nontarget_icons.push_back(i);
  }

  for (int trial = 0; trial < params.n_trials; ++trial) {
    const double t0_ms = lead_ms + trial * params.trial_duration_ms;

    const int base_nt = static_cast<int>(std::floor(params.nontarget_fixations_per_trial));
    const double frac = params.nontarget_fixations_per_trial - base_nt;
    const int n_nt = base_nt + (unit(rng) < frac ? 1 : 0);

    std::vector<int> pool = nontarget_icons;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<int> icons(pool.begin(), pool.begin() + n_nt);
    icons.push_back(params.layout.target_index);
    std::shuffle(icons.begin(), icons.end(), rng);

    double cursor_ms = t0_ms + 300.0;
    for (int icon : icons) {
      const Label label = icon == params.layout.target_index ? Label::Target : Label::NonTarget;
      const double duration = draw_duration(label);
      const Eigen::Index onset_sample = static_cast<Eigen::Index>(std::llround(cursor_ms * fs / 1000.0));

      FixationEvent fx;
      fx.onset_ms = cursor_ms;
      fx.duration_ms = duration;
      fx.x_px = static_cast<int>(std::lround(params.layout.icon_center_x(icon))) + jitter_px(rng);
      fx.y_px = static_cast<int>(std::lround(params.layout.icon_center_y(icon))) + jitter_px(rng);
      fx.trial_index = trial;
      session.fixations.push_back(fx);

      StimulusOnset so;
      so.trial_index = trial;
      so.sample_index = onset_sample;
      so.icon_index = icon;
      session.eeg.stimulus_onsets.push_back(so);

      const double scale = label == Label::Target ? 1.0 : params.contrast;
      const Eigen::Index stop = std::min(template_len, n_samples - onset_sample);
      for (std::size_t c = 0; c + 2 < n_ch; ++c) {
        for (Eigen::Index i = 0; i < stop; ++i) {
          const double t_ms = static_cast<double>(i) * 1000.0 / fs;
          session.eeg.data(static_cast<Eigen::Index>(c), onset_sample + i) +=
              scale * template_value(params, c, t_ms);
        }
      }
      cursor_ms += duration + saccade_gap_ms(rng);
    }

    if (unit(rng) < params.outside_fixation_prob) {
      FixationEvent fx;
      fx.onset_ms = cursor_ms;
      fx.duration_ms = draw_duration(Label::NonTarget);
      fx.x_px = 30;  // outside the centered grid
      fx.y_px = 30;
      fx.trial_index = trial;
      session.fixations.push_back(fx);
      cursor_ms += fx.duration_ms;
    }

    if (unit(rng) < params.blink_rate_per_trial) {
      const double blink_center = t0_ms + unit(rng) * params.trial_duration_ms;
      const Eigen::Index center_sample = static_cast<Eigen::Index>(std::llround(blink_center * fs / 1000.0));
      const Eigen::Index half = static_cast<Eigen::Index>(std::llround(0.2 * fs));
      for (Eigen::Index i = std::max<Eigen::Index>(0, center_sample - half);
           i < std::min(n_samples, center_sample + half); ++i) {
        const double t_ms = (static_cast<double>(i - center_sample)) * 1000.0 / fs;
        session.eeg.data(static_cast<Eigen::Index>(veog_idx), i) +=
            params.blink_amplitude_uv * gaussian_bump(t_ms, 0.0, 60.0);
      }
    }
  }

  // EOG leakage into the scalp channels
  for (std::size_t c = 0; c + 2 < n_ch; ++c) {
    session.eeg.data.row(static_cast<Eigen::Index>(c)) +=
        params.heog_leak[c] * session.eeg.data.row(static_cast<Eigen::Index>(heog_idx)) +
        params.veog_leak[c] * session.eeg.data.row(static_cast<Eigen::Index>(veog_idx));
  }

  // storage quantization, so save/load round-trips bit-exactly
  session.eeg.data = session.eeg.data.cast<float>().cast<double>();

  session.metadata["generator"] = "ebci synthetic v1";
  session.metadata["seed"] = std::to_string(params.seed);

  validate_session(session);
  return session;
}

}  // namespace ebci
