#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ebci/classifiers.hpp"
#include "ebci/gaze.hpp"
#include "ebci/preprocess.hpp"
#include "ebci/types.hpp"

namespace ebci {

enum class Modality { Eeg, Eye, Fusion };

std::string modality_name(Modality m);
Modality modality_from_name(const std::string& name);

struct LabeledSample {
  Vector features;
  Label label{Label::NonTarget};
  int trial_index{0};
  int icon_index{0};
  Modality modality{Modality::Fusion};
  int seq{0};  // acquisition order within the session stream
};

// EEG epoch flattened row-major by channel (channel 0 all timepoints, then
// channel 1, ...), with the clamped fixation duration appended last.
LabeledSample fuse(const Epoch& epoch, const GazeFeature& gaze);

LabeledSample eeg_sample(const Epoch& epoch);
LabeledSample eye_sample(const GazeFeature& gaze);

struct Normalizer {
  Vector mean;
  Vector sd;  // floored at 1e-12
};

Normalizer fit_normalizer(const std::vector<LabeledSample>& train);
std::vector<LabeledSample> apply_normalizer(const Normalizer& norm,
                                            std::vector<LabeledSample> samples);

// Subsamples the majority class (uniform, without replacement) to the
// minority count and shuffles the result; both draws come from seed.
std::vector<LabeledSample> balance_classes(const std::vector<LabeledSample>& samples,
                                           std::uint64_t seed);

// train: trial_index < n_train_trials; test: the rest.
std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> split_by_trials(
    const std::vector<LabeledSample>& samples, int n_train_trials);

TrainingSet to_training_set(const std::vector<LabeledSample>& samples);

}  // namespace ebci
