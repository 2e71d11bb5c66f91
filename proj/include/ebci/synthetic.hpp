#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ebci/session.hpp"
#include "ebci/types.hpp"

namespace ebci {

enum class NoiseModel { White, Pink };

// Session generator with known ground truth. The numeric defaults are
// calibration targets frozen so that the default session lands near the
// intended operating point (eye-only accuracy ~0.85, EEG-only ~0.78 with
// rlda under 10-fold evaluation).
struct GenParams {
  int n_trials{240};
  double sample_rate_hz{500.0};
  double trial_duration_ms{3000.0};

  // late positive component (amplitude before average re-referencing, which
  // costs roughly half of it on this montage)
  double erp_amplitude_uv{24.0};
  double erp_latency_ms{300.0};
  double erp_width_ms{80.0};  // Gaussian sigma = width / 2
  // early negative component, occipital
  double early_amplitude_uv{-5.0};
  double early_latency_ms{170.0};
  double early_width_ms{50.0};
  // NonTarget template = Target template * contrast
  double contrast{0.2};

  double noise_sigma_uv{10.0};
  NoiseModel noise_model{NoiseModel::Pink};
  // always-on broadband amplifier floor; keeps covariances full rank even
  // when noise_sigma_uv is dialed to zero
  double sensor_noise_uv{0.5};

  double target_duration_median_ms{455.0};
  double target_duration_sigma{0.32};
  double nontarget_duration_median_ms{235.0};
  double nontarget_duration_sigma{0.32};
  double nontarget_fixations_per_trial{2.3};
  double outside_fixation_prob{0.1};  // per trial, fixation landing outside every AOI

  double eog_sigma_uv{30.0};
  double blink_amplitude_uv{150.0};
  double blink_rate_per_trial{0.5};

  std::uint64_t seed{1};
  IconLayout layout;

  // montage and per-channel gains; indices align with montage()
  std::vector<double> erp_channel_gains;
  std::vector<double> early_channel_gains;
  std::vector<double> veog_leak;
  std::vector<double> heog_leak;

  GenParams();
  static const std::vector<std::string>& montage();
};

void validate_gen_params(const GenParams& params);

// Noise-free stimulus-locked waveform on the 8 classification channels,
// sampled at params.sample_rate_hz over a 500 ms window.
Matrix erp_template(const GenParams& params, Label label);

Session generate_session(const GenParams& params);

}  // namespace ebci
