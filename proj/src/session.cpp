#include "ebci/session.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ebci {

double IconLayout::icon_center_x(int icon_index) const {
  const int col = icon_index % cols;
  const double grid_w = (cols - 1) * static_cast<double>(spacing_px);
  const double x0 = 0.5 * (screen_w_px - grid_w);
  return x0 + col * static_cast<double>(spacing_px);
}

double IconLayout::icon_center_y(int icon_index) const {
  const int row = icon_index / cols;
  const double grid_h = (rows - 1) * static_cast<double>(spacing_px);
  const double y0 = 0.5 * (screen_h_px - grid_h);
  return y0 + row * static_cast<double>(spacing_px);
}

int EegRecording::channel_index(const std::string& name) const {
  for (std::size_t i = 0; i < channel_names.size(); ++i) {
    if (channel_names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

void validate_layout(const IconLayout& layout) {
  if (layout.rows < 1 || layout.cols < 1) {
    throw std::runtime_error("layout: rows and cols must be >= 1");
  }
  if (layout.icon_size_px < 1 || layout.spacing_px < 1) {
    throw std::runtime_error("layout: icon size and spacing must be >= 1");
  }
  const double grid_w = (layout.cols - 1) * static_cast<double>(layout.spacing_px) + layout.icon_size_px;
  const double grid_h = (layout.rows - 1) * static_cast<double>(layout.spacing_px) + layout.icon_size_px;
  if (grid_w > layout.screen_w_px || grid_h > layout.screen_h_px) {
    throw std::runtime_error("layout: icon grid does not fit on screen");
  }
  if (layout.target_index < 0 || layout.target_index >= layout.icon_count()) {
    throw std::runtime_error("layout: target_index " + std::to_string(layout.target_index) +
                             " out of range [0, " + std::to_string(layout.icon_count()) + ")");
  }
}

void validate_session(const Session& session) {
  validate_layout(session.layout);
  const EegRecording& eeg = session.eeg;

  if (eeg.sample_rate_hz <= 0.0) throw std::runtime_error("eeg: sample rate must be > 0");
  if (static_cast<std::size_t>(eeg.data.rows()) != eeg.channel_names.size()) {
    throw std::runtime_error("eeg: channel count mismatch between names (" +
                             std::to_string(eeg.channel_names.size()) + ") and data rows (" +
                             std::to_string(eeg.data.rows()) + ")");
  }
  for (const std::string& name : classification_channels()) {
    const auto n = std::count(eeg.channel_names.begin(), eeg.channel_names.end(), name);
    if (n != 1) {
      throw std::runtime_error("eeg: classification channel " + name +
                               (n == 0 ? " missing" : " duplicated"));
    }
  }
  for (const std::string& name : eog_channels()) {
    const auto n = std::count(eeg.channel_names.begin(), eeg.channel_names.end(), name);
    if (n != 1) {
      throw std::runtime_error("eeg: EOG channel " + name + (n == 0 ? " missing" : " duplicated"));
    }
  }
  if (!eeg.data.allFinite()) throw std::runtime_error("eeg: non-finite sample value");

  if (session.n_trials < 20) {
    throw std::runtime_error("session: n_trials must be >= 20, got " +
                             std::to_string(session.n_trials));
  }

  for (std::size_t i = 0; i < eeg.stimulus_onsets.size(); ++i) {
    const StimulusOnset& so = eeg.stimulus_onsets[i];
    if (so.sample_index < 0 || so.sample_index >= eeg.n_samples()) {
      throw std::runtime_error("stimulus onset " + std::to_string(i) + ": sample index " +
                               std::to_string(so.sample_index) + " out of range");
    }
    if (so.trial_index < 0 || so.trial_index >= session.n_trials) {
      throw std::runtime_error("stimulus onset " + std::to_string(i) + ": trial index out of range (" +
                               std::to_string(so.trial_index) + " of " +
                               std::to_string(session.n_trials) + ")");
    }
    if (so.icon_index < 0 || so.icon_index >= session.layout.icon_count()) {
      throw std::runtime_error("stimulus onset " + std::to_string(i) + ": icon index out of range");
    }
  }

  double prev_onset = -1.0;
  int prev_trial = -1;
  for (std::size_t i = 0; i < session.fixations.size(); ++i) {
    const FixationEvent& fx = session.fixations[i];
    if (!(fx.duration_ms > 0.0)) {
      throw std::runtime_error("fixation " + std::to_string(i) + ": duration must be > 0");
    }
    if (fx.trial_index < 0 || fx.trial_index >= session.n_trials) {
      throw std::runtime_error("fixation " + std::to_string(i) + ": trial index out of range (" +
                               std::to_string(fx.trial_index) + " of " +
                               std::to_string(session.n_trials) + ")");
    }
    if (fx.trial_index == prev_trial && fx.onset_ms < prev_onset) {
      throw std::runtime_error("fixation " + std::to_string(i) +
                               ": onset not monotone within trial " + std::to_string(fx.trial_index));
    }
    prev_trial = fx.trial_index;
    prev_onset = fx.onset_ms;
  }
}

}  // namespace ebci
