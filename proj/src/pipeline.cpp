#include "ebci/pipeline.hpp"

#include <map>
#include <stdexcept>

#include "ebci/gaze.hpp"

namespace ebci {

EegRecording preprocess_continuous(const EegRecording& recording, const PipelineParams& params) {
  const FilterKernel kernel = design_bandpass_fir(params.filter_low_hz, params.filter_high_hz,
                                                  recording.sample_rate_hz, params.filter_taps);
  EegRecording filtered = apply_filter(recording, kernel);
  EegRecording rereferenced = rereference_average(filtered);
  return remove_eog(rereferenced).recording;
}

Dataset build_dataset(const Session& session, const PipelineParams& params) {
  const EegRecording preprocessed = preprocess_continuous(session.eeg, params);
  return build_dataset_from_preprocessed(session, preprocessed, params);
}

Dataset build_dataset_from_preprocessed(const Session& session, const EegRecording& preprocessed,
                                        const PipelineParams& params) {
  Dataset out;
  EpochSet epoch_set =
      extract_epochs(preprocessed, params.window_ms, params.baseline_ms, session.layout.target_index);
  out.n_skipped_epochs = epoch_set.n_skipped;

  // first epoch per (trial, icon) wins; later duplicates are not re-paired
  std::map<std::pair<int, int>, const Epoch*> epoch_by_key;
  std::vector<Epoch> decimated;
  decimated.reserve(epoch_set.epochs.size());
  for (const Epoch& ep : epoch_set.epochs) decimated.push_back(decimate(ep, params.target_rate_hz));
  for (const Epoch& ep : decimated) {
    epoch_by_key.emplace(std::make_pair(ep.trial_index, ep.icon_index), &ep);
  }
  out.d_layout = {8, decimated.empty() ? 0 : static_cast<int>(decimated.front().data.cols())};

  // per-trial AOI aggregation, clamped at the epoch threshold
  std::map<std::pair<int, int>, GazeFeature> gaze_by_key;
  std::map<int, std::vector<AoiAssignment>> assignments_by_trial;
  for (const FixationEvent& fx : session.fixations) {
    assignments_by_trial[fx.trial_index].push_back(assign_fixation(fx, session.layout));
  }
  for (const auto& [trial, asg] : assignments_by_trial) {
    for (GazeFeature g : aggregate_durations(asg, trial, session.layout)) {
      g.duration_ms = clamp_duration(g.duration_ms, params.window_ms);
      gaze_by_key.emplace(std::make_pair(g.trial_index, g.icon_index), g);
    }
  }

  // paired samples in acquisition order (decimated epochs keep stream order)
  int seq = 0;
  for (const Epoch& ep : decimated) {
    const auto key = std::make_pair(ep.trial_index, ep.icon_index);
    if (epoch_by_key.at(key) != &ep) continue;  // duplicate onset for this key
    const auto git = gaze_by_key.find(key);
    if (git == gaze_by_key.end()) {
      ++out.n_unmatched;
      continue;
    }
    LabeledSample eeg = eeg_sample(ep);
    LabeledSample eye = eye_sample(git->second);
    LabeledSample fused = fuse(ep, git->second);
    eeg.seq = eye.seq = fused.seq = seq++;
    out.eeg.push_back(std::move(eeg));
    out.eye.push_back(std::move(eye));
    out.fusion.push_back(std::move(fused));
  }
  return out;
}

}  // namespace ebci
