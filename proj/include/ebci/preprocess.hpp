#pragma once

#include <utility>
#include <vector>

#include "ebci/session.hpp"
#include "ebci/types.hpp"

namespace ebci {

struct FilterKernel {
  Vector taps;  // odd length, linear phase
  double sample_rate_hz{0.0};
  double low_hz{0.0};
  double high_hz{0.0};

  int group_delay() const { return static_cast<int>((taps.size() - 1) / 2); }
  // Magnitude response at f, evaluated directly from the taps.
  double gain_at(double freq_hz) const;
};

// Windowed-sinc (Hamming) band-pass, built as the difference of two
// unity-DC lowpass kernels so the DC gain is exactly zero.
FilterKernel design_bandpass_fir(double low_hz, double high_hz, double sample_rate_hz, int n_taps);

// Zero-phase application: convolution with the group delay compensated so the
// output stays aligned to the input timeline. Edge samples within one half
// kernel of either end are flagged via edge_guard_samples.
EegRecording apply_filter(const EegRecording& recording, const FilterKernel& kernel);

// Subtracts the instantaneous average of the scalp (non-EOG) channels from
// each scalp channel. EOG channels pass through untouched.
EegRecording rereference_average(const EegRecording& recording);

struct EogRemoval {
  EegRecording recording;
  Matrix coefficients;                    // n_scalp x 2, columns [HEOG, VEOG]
  std::vector<std::string> scalp_names;   // row order of coefficients
};

// Least-squares regression of each scalp channel on [HEOG, VEOG]; the fitted
// component is subtracted. Throws on a singular regressor matrix.
EogRemoval remove_eog(const EegRecording& recording);

struct Epoch {
  std::vector<std::string> channels;  // the 8 classification channels in fixed order
  Matrix data;                        // channels x n_t, microvolts
  double rate_hz{0.0};
  int trial_index{0};
  int icon_index{0};
  Label label{Label::NonTarget};
};

struct EpochSet {
  std::vector<Epoch> epochs;
  int n_skipped{0};  // onsets too close to a recording boundary
};

// One epoch per stimulus onset, [onset, onset + window_ms) on the 8
// classification channels, baseline-corrected by the mean over the
// baseline_ms interval before the onset. Label is Target iff the onset's
// icon equals target_index.
EpochSet extract_epochs(const EegRecording& recording, double window_ms, double baseline_ms,
                        int target_index);

// Anti-alias lowpass at 0.4 * target rate, then sample pick-off at the target
// instants. Output length floor(window_ms * target_rate_hz / 1000).
Epoch decimate(const Epoch& epoch, double target_rate_hz);

}  // namespace ebci
