#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ebci/types.hpp"

namespace ebci {

// 5x5 icon grid centered on the screen, 100 px pitch. AOI assignment and
// Target labelling derive from this geometry.
struct IconLayout {
  int rows{5};
  int cols{5};
  int icon_size_px{24};
  int spacing_px{100};
  int screen_w_px{1920};
  int screen_h_px{1080};
  int target_index{12};

  int icon_count() const { return rows * cols; }
  // Center of icon i (row-major over the grid), grid centered on screen.
  double icon_center_x(int icon_index) const;
  double icon_center_y(int icon_index) const;
};

struct FixationEvent {
  double onset_ms{0.0};     // from session start
  double duration_ms{0.0};  // > 0
  int x_px{0};
  int y_px{0};
  int trial_index{0};
};

struct StimulusOnset {
  int trial_index{0};
  std::int64_t sample_index{0};  // fixation onset in EEG samples
  int icon_index{0};
};

struct EegRecording {
  double sample_rate_hz{500.0};
  std::vector<std::string> channel_names;
  // channels x samples, microvolts. Stored on disk as float32; values loaded
  // from a file (and generator output) always lie on the float32 grid, so a
  // save/load round-trip is bit-exact. Held as double for processing headroom.
  Matrix data;
  std::vector<StimulusOnset> stimulus_onsets;
  // Samples within this distance of either end carry filter edge transients.
  int edge_guard_samples{0};

  Eigen::Index n_channels() const { return data.rows(); }
  Eigen::Index n_samples() const { return data.cols(); }
  int channel_index(const std::string& name) const;  // -1 if absent
};

struct Session {
  IconLayout layout;
  EegRecording eeg;
  std::vector<FixationEvent> fixations;
  int n_trials{0};
  std::map<std::string, std::string> metadata;
};

// Throws std::runtime_error naming the first violated invariant and the
// offending record. load_session and the generator both pass through this.
void validate_session(const Session& session);

void validate_layout(const IconLayout& layout);

}  // namespace ebci
