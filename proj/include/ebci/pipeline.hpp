#pragma once

#include <utility>
#include <vector>

#include "ebci/fusion.hpp"
#include "ebci/preprocess.hpp"
#include "ebci/session.hpp"

namespace ebci {

struct PipelineParams {
  // epoch window; fixation durations are clamped at the same threshold
  double window_ms{500.0};
  double baseline_ms{100.0};
  double target_rate_hz{32.0};
  double filter_low_hz{1.0};
  double filter_high_hz{40.0};
  int filter_taps{501};
};

// Per-modality sample views of one session. The three lists are paired: entry
// i of each refers to the same (trial, icon) event, in acquisition order.
struct Dataset {
  std::vector<LabeledSample> eeg;
  std::vector<LabeledSample> eye;
  std::vector<LabeledSample> fusion;
  int n_skipped_epochs{0};
  int n_unmatched{0};
  std::pair<int, int> d_layout{8, 0};  // (channels, timepoints) of the EEG block

  const std::vector<LabeledSample>& by_modality(Modality m) const {
    switch (m) {
      case Modality::Eeg: return eeg;
      case Modality::Eye: return eye;
      default: return fusion;
    }
  }
};

// Band-pass, average re-reference, EOG regression. Threshold-independent, so
// sweeps run it once per session and epoch per threshold.
EegRecording preprocess_continuous(const EegRecording& recording, const PipelineParams& params);

Dataset build_dataset(const Session& session, const PipelineParams& params);
Dataset build_dataset_from_preprocessed(const Session& session, const EegRecording& preprocessed,
                                        const PipelineParams& params);

}  // namespace ebci
