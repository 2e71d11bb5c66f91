#include "ebci/gaze.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ebci {

namespace {
constexpr double kAoiSizePx = 100.0;
}

AoiAssignment assign_fixation(const FixationEvent& fix, const IconLayout& layout) {
  AoiAssignment out;
  out.fixation = fix;
  const double half = 0.5 * kAoiSizePx;
  for (int i = 0; i < layout.icon_count(); ++i) {
    const double cx = layout.icon_center_x(i);
    const double cy = layout.icon_center_y(i);
    const bool in_x = fix.x_px >= cx - half && fix.x_px < cx + half;
    const bool in_y = fix.y_px >= cy - half && fix.y_px < cy + half;
    if (in_x && in_y) {
      out.icon_index = i;
      out.is_target = (i == layout.target_index);
      return out;
    }
  }
  return out;
}

std::vector<GazeFeature> aggregate_durations(const std::vector<AoiAssignment>& assignments,
                                             int trial_index, const IconLayout& layout) {
  std::map<int, double> per_icon;
  for (const auto& a : assignments) {
    if (a.fixation.trial_index != trial_index) {
      throw std::invalid_argument("aggregate_durations: assignment from trial " +
                                  std::to_string(a.fixation.trial_index) +
                                  " passed for trial " + std::to_string(trial_index));
    }
    if (a.icon_index) per_icon[*a.icon_index] += a.fixation.duration_ms;
  }
  std::vector<GazeFeature> out;
  out.reserve(per_icon.size());
  for (const auto& [icon, dur] : per_icon) {
    GazeFeature g;
    g.trial_index = trial_index;
    g.icon_index = icon;
    g.duration_ms = dur;
    g.label = icon == layout.target_index ? Label::Target : Label::NonTarget;
    out.push_back(g);
  }
  return out;
}

double clamp_duration(double duration_ms, double threshold_ms) {
  return std::min(duration_ms, threshold_ms);
}

}  // namespace ebci
