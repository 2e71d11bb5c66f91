#include "ebci/fusion.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace ebci {

std::string modality_name(Modality m) {
  switch (m) {
    case Modality::Eeg: return "eeg";
    case Modality::Eye: return "eye";
    case Modality::Fusion: return "fusion";
  }
  throw std::logic_error("modality_name: unknown modality");
}

Modality modality_from_name(const std::string& name) {
  if (name == "eeg") return Modality::Eeg;
  if (name == "eye") return Modality::Eye;
  if (name == "fusion") return Modality::Fusion;
  throw std::invalid_argument("unknown modality: " + name);
}

namespace {

Vector flatten_epoch(const Epoch& epoch) {
  const Eigen::Index n_ch = epoch.data.rows();
  const Eigen::Index n_t = epoch.data.cols();
  Vector out(n_ch * n_t);
  for (Eigen::Index c = 0; c < n_ch; ++c) {
    out.segment(c * n_t, n_t) = epoch.data.row(c).transpose();
  }
  return out;
}

}  // namespace

LabeledSample fuse(const Epoch& epoch, const GazeFeature& gaze) {
  if (epoch.trial_index != gaze.trial_index || epoch.icon_index != gaze.icon_index) {
    throw std::invalid_argument("fuse: epoch (trial " + std::to_string(epoch.trial_index) + ", icon " +
                                std::to_string(epoch.icon_index) + ") paired with gaze (trial " +
                                std::to_string(gaze.trial_index) + ", icon " +
                                std::to_string(gaze.icon_index) + ")");
  }
  if (epoch.label != gaze.label) {
    throw std::invalid_argument("fuse: label mismatch between epoch and gaze feature");
  }
  LabeledSample s;
  const Vector eeg = flatten_epoch(epoch);
  s.features.resize(eeg.size() + 1);
  s.features.head(eeg.size()) = eeg;
  s.features[eeg.size()] = gaze.duration_ms;
  s.label = epoch.label;
  s.trial_index = epoch.trial_index;
  s.icon_index = epoch.icon_index;
  s.modality = Modality::Fusion;
  return s;
}

LabeledSample eeg_sample(const Epoch& epoch) {
  LabeledSample s;
  s.features = flatten_epoch(epoch);
  s.label = epoch.label;
  s.trial_index = epoch.trial_index;
  s.icon_index = epoch.icon_index;
  s.modality = Modality::Eeg;
  return s;
}

LabeledSample eye_sample(const GazeFeature& gaze) {
  LabeledSample s;
  s.features = Vector::Constant(1, gaze.duration_ms);
  s.label = gaze.label;
  s.trial_index = gaze.trial_index;
  s.icon_index = gaze.icon_index;
  s.modality = Modality::Eye;
  return s;
}

Normalizer fit_normalizer(const std::vector<LabeledSample>& train) {
  if (train.empty()) throw std::invalid_argument("fit_normalizer: empty training set");
  const Eigen::Index d = train.front().features.size();
  Normalizer norm;
  norm.mean = Vector::Zero(d);
  for (const auto& s : train) {
    if (s.features.size() != d) throw std::invalid_argument("fit_normalizer: inconsistent dimensions");
    norm.mean += s.features;
  }
  norm.mean /= static_cast<double>(train.size());
  Vector var = Vector::Zero(d);
  for (const auto& s : train) var += (s.features - norm.mean).cwiseAbs2();
  const double denom = train.size() > 1 ? static_cast<double>(train.size() - 1) : 1.0;
  norm.sd = (var / denom).cwiseSqrt().cwiseMax(1e-12);
  return norm;
}

std::vector<LabeledSample> apply_normalizer(const Normalizer& norm,
                                            std::vector<LabeledSample> samples) {
  for (auto& s : samples) {
    if (s.features.size() != norm.mean.size()) {
      throw std::invalid_argument("apply_normalizer: dimension mismatch");
    }
    s.features = (s.features - norm.mean).cwiseQuotient(norm.sd);
  }
  return samples;
}

std::vector<LabeledSample> balance_classes(const std::vector<LabeledSample>& samples,
                                           std::uint64_t seed) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    (samples[i].label == Label::Target ? pos : neg).push_back(i);
  }
  if (pos.empty() || neg.empty()) {
    throw std::invalid_argument("balance_classes: both classes must be present");
  }
  std::mt19937_64 rng(seed);
  auto& majority = pos.size() > neg.size() ? pos : neg;
  std::shuffle(majority.begin(), majority.end(), rng);
  majority.resize(std::min(pos.size(), neg.size()));

  std::vector<std::size_t> keep;
  keep.reserve(pos.size() + neg.size());
  keep.insert(keep.end(), pos.begin(), pos.end());
  keep.insert(keep.end(), neg.begin(), neg.end());
  std::shuffle(keep.begin(), keep.end(), rng);

  std::vector<LabeledSample> out;
  out.reserve(keep.size());
  for (std::size_t i : keep) out.push_back(samples[i]);
  return out;
}

std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> split_by_trials(
    const std::vector<LabeledSample>& samples, int n_train_trials) {
  if (n_train_trials < 1) throw std::invalid_argument("split_by_trials: n_train_trials must be >= 1");
  std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> out;
  for (const auto& s : samples) {
    (s.trial_index < n_train_trials ? out.first : out.second).push_back(s);
  }
  if (out.second.empty()) {
    throw std::invalid_argument("split_by_trials: split at " + std::to_string(n_train_trials) +
                                " trials leaves an empty test side");
  }
  if (out.first.empty()) {
    throw std::invalid_argument("split_by_trials: split leaves an empty training side");
  }
  return out;
}

TrainingSet to_training_set(const std::vector<LabeledSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("to_training_set: empty sample list");
  const Eigen::Index d = samples.front().features.size();
  TrainingSet train;
  train.X.resize(static_cast<Eigen::Index>(samples.size()), d);
  train.y.reserve(samples.size());
  train.trial_ids.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].features.size() != d) {
      throw std::invalid_argument("to_training_set: inconsistent feature dimensions");
    }
    train.X.row(static_cast<Eigen::Index>(i)) = samples[i].features.transpose();
    train.y.push_back(label_sign(samples[i].label));
    train.trial_ids.push_back(samples[i].trial_index);
  }
  return train;
}

}  // namespace ebci
