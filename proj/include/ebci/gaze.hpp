#pragma once

#include <optional>
#include <vector>

#include "ebci/session.hpp"

namespace ebci {

struct AoiAssignment {
  FixationEvent fixation;
  std::optional<int> icon_index;
  std::optional<bool> is_target;
};

struct GazeFeature {
  int trial_index{0};
  int icon_index{0};
  double duration_ms{0.0};
  Label label{Label::NonTarget};
};

// AOI i is the 100x100 px square centered on icon i. Adjacent AOIs share
// edges at 100 px pitch, so squares are half-open: left/top edge inclusive,
// right/bottom exclusive. Membership is decided by the fixation centroid.
AoiAssignment assign_fixation(const FixationEvent& fix, const IconLayout& layout);

// One GazeFeature per icon with at least one contained fixation in the trial;
// duration is the plain sum (clamping is a separate step).
std::vector<GazeFeature> aggregate_durations(const std::vector<AoiAssignment>& assignments,
                                             int trial_index, const IconLayout& layout);

double clamp_duration(double duration_ms, double threshold_ms);

}  // namespace ebci
