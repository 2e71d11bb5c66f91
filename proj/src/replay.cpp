#include "ebci/replay.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "ebci/numeric.hpp"

namespace ebci {

namespace {

double timed_score_ms(const LinearModel& model, const Vector& x, double& score_out) {
  // median of 3 repetitions; absolute values are hardware-bound, only order
  // relations are meaningful
  double best[3];
  for (int rep = 0; rep < 3; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    score_out = score(model, x);
    best[rep] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  std::sort(best, best + 3);
  return best[1];
}

OnlineReport replay_on_dataset(const Dataset& dataset, const ReplayConfig& config) {
  OnlineReport report;
  report.classifier = config.modality == Modality::Eye && config.spec.kind == ClassifierKind::Lda
                          ? "lda"
                          : classifier_name(config.spec.kind);
  report.modality = modality_name(config.modality);
  report.threshold_ms = config.threshold_ms;
  report.n_train_trials = config.n_train_trials;
  report.n_skipped = dataset.n_skipped_epochs;

  const std::vector<LabeledSample>& samples = dataset.by_modality(config.modality);
  auto [train_raw, test_raw] = split_by_trials(samples, config.n_train_trials);

  std::vector<LabeledSample> train = balance_classes(train_raw, derive_seed(config.seed, "train"));
  std::vector<LabeledSample> test = balance_classes(test_raw, derive_seed(config.seed, "test"));
  // replay order is acquisition order
  std::sort(test.begin(), test.end(),
            [](const LabeledSample& a, const LabeledSample& b) { return a.seq < b.seq; });

  Normalizer norm;
  if (config.scaling) {
    norm = fit_normalizer(train);
    train = apply_normalizer(norm, std::move(train));
  }

  TrainingSet ts = to_training_set(train);
  if (config.modality != Modality::Eye) {
    ts.d_layout = dataset.d_layout;
  }
  const LinearModel model = fit_classifier(config.spec, ts);
  report.n_train_samples = static_cast<int>(train.size());
  report.n_features = static_cast<int>(model.w.size());

  std::vector<double> scores(test.size()), latencies(test.size());
  std::vector<int> labels(test.size());
  report.decisions.resize(test.size());
  for (std::size_t step = 0; step < test.size(); ++step) {
    const std::size_t i = config.reverse_replay ? test.size() - 1 - step : step;
    const LabeledSample& raw = test[i];
    Vector x = raw.features;
    if (config.scaling) x = (x - norm.mean).cwiseQuotient(norm.sd);
    double s = 0.0;
    latencies[i] = timed_score_ms(model, x, s);
    scores[i] = s;
    labels[i] = label_sign(raw.label);
    report.decisions[i] = s > 0.0 ? 1 : -1;
  }

  int correct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (report.decisions[i] == labels[i]) ++correct;
  }
  report.n_decisions = static_cast<int>(scores.size());
  report.accuracy = scores.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(scores.size());
  report.auc = compute_roc_auc(scores, labels).second;
  report.latency_ms = mean_sd(latencies);
  return report;
}

}  // namespace

OnlineReport run_replay_preprocessed(const Session& session, const EegRecording& preprocessed,
                                     const ReplayConfig& config, const PipelineParams& base_params) {
  if (config.n_train_trials < 1 || config.n_train_trials >= session.n_trials) {
    throw std::invalid_argument("run_replay: n_train_trials must lie in [1, n_trials)");
  }
  PipelineParams params = base_params;
  params.window_ms = config.threshold_ms;
  const Dataset dataset = build_dataset_from_preprocessed(session, preprocessed, params);
  return replay_on_dataset(dataset, config);
}

OnlineReport run_replay(const Session& session, const ReplayConfig& config,
                        const PipelineParams& base_params) {
  const EegRecording preprocessed = preprocess_continuous(session.eeg, base_params);
  return run_replay_preprocessed(session, preprocessed, config, base_params);
}

GridResult sweep_grid(const Session& session, const std::vector<double>& thresholds,
                      const std::vector<int>& train_sizes, const std::vector<ClassifierSpec>& specs,
                      std::uint64_t seed, const PipelineParams& base_params, bool scaling,
                      int workers) {
  if (thresholds.empty() || train_sizes.empty() || specs.empty()) {
    throw std::invalid_argument("sweep_grid: empty grid axis");
  }
  for (double t : thresholds) {
    if (t < 300.0 || t > 800.0) {
      throw std::invalid_argument("sweep_grid: thresholds must lie in [300, 800] ms");
    }
  }
  for (int n : train_sizes) {
    if (n < 1 || n >= session.n_trials) {
      throw std::invalid_argument("sweep_grid: train sizes must lie in [1, n_trials)");
    }
  }

  const EegRecording preprocessed = preprocess_continuous(session.eeg, base_params);

  // datasets per threshold, shared across cells
  std::vector<Dataset> datasets(thresholds.size());
  parallel_for(thresholds.size(), workers, [&](std::size_t ti) {
    PipelineParams params = base_params;
    params.window_ms = thresholds[ti];
    datasets[ti] = build_dataset_from_preprocessed(session, preprocessed, params);
  });

  GridResult result;
  const std::size_t n_cells = thresholds.size() * train_sizes.size() * specs.size();
  const std::size_t n_bench = thresholds.size() * train_sizes.size();
  result.cells.resize(n_cells);
  result.benchmarks.resize(n_bench);

  auto cell_tag = [&](std::size_t ti, std::size_t ni, const std::string& clf) {
    return "cell/" + format_double(thresholds[ti]) + "/" + std::to_string(train_sizes[ni]) + "/" + clf;
  };

  parallel_for(n_cells + n_bench, workers, [&](std::size_t task) {
    if (task < n_cells) {
      const std::size_t ti = task / (train_sizes.size() * specs.size());
      const std::size_t rem = task % (train_sizes.size() * specs.size());
      const std::size_t ni = rem / specs.size();
      const std::size_t si = rem % specs.size();
      ReplayConfig config;
      config.spec = specs[si];
      config.modality = Modality::Fusion;
      config.threshold_ms = thresholds[ti];
      config.n_train_trials = train_sizes[ni];
      config.scaling = scaling;
      config.seed = derive_seed(seed, cell_tag(ti, ni, classifier_name(specs[si].kind)));
      try {
        result.cells[task] = replay_on_dataset(datasets[ti], config);
      } catch (const std::exception& e) {
        OnlineReport failed;
        failed.classifier = classifier_name(specs[si].kind);
        failed.modality = "fusion";
        failed.threshold_ms = thresholds[ti];
        failed.n_train_trials = train_sizes[ni];
        failed.error = e.what();
        result.cells[task] = std::move(failed);
      }
    } else {
      const std::size_t bi = task - n_cells;
      const std::size_t ti = bi / train_sizes.size();
      const std::size_t ni = bi % train_sizes.size();
      ReplayConfig config;
      config.spec.kind = ClassifierKind::Lda;
      config.modality = Modality::Eye;
      config.threshold_ms = thresholds[ti];
      config.n_train_trials = train_sizes[ni];
      config.scaling = scaling;
      config.seed = derive_seed(seed, cell_tag(ti, ni, "eye-benchmark"));
      try {
        result.benchmarks[bi] = replay_on_dataset(datasets[ti], config);
      } catch (const std::exception& e) {
        OnlineReport failed;
        failed.classifier = "lda";
        failed.modality = "eye";
        failed.threshold_ms = thresholds[ti];
        failed.n_train_trials = train_sizes[ni];
        failed.error = e.what();
        result.benchmarks[bi] = std::move(failed);
      }
    }
  });

  for (const auto& c : result.cells) result.n_failed += !c.error.empty();
  for (const auto& b : result.benchmarks) result.n_failed += !b.error.empty();
  return result;
}

void write_online_reports_csv(const std::vector<OnlineReport>& reports, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "threshold_ms,n_train_trials,classifier,modality,accuracy,auc,n_decisions,n_train_samples,"
         "n_features,n_skipped,latency_mean_ms,latency_sd_ms,error\n";
  for (const auto& r : reports) {
    out << format_double(r.threshold_ms) << ',' << r.n_train_trials << ',' << r.classifier << ','
        << r.modality << ',' << format_double(r.accuracy) << ',' << format_double(r.auc) << ','
        << r.n_decisions << ',' << r.n_train_samples << ',' << r.n_features << ','
        << r.n_skipped << ','
        << format_double(r.latency_ms.mean) << ',' << format_double(r.latency_ms.sd) << ','
        << r.error << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_online_reports_json(const std::vector<OnlineReport>& reports, const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j;
    j["threshold_ms"] = r.threshold_ms;
    j["n_train_trials"] = r.n_train_trials;
    j["classifier"] = r.classifier;
    j["modality"] = r.modality;
    j["accuracy"] = r.accuracy;
    j["auc"] = r.auc;
    j["n_decisions"] = r.n_decisions;
    j["n_train_samples"] = r.n_train_samples;
    j["n_features"] = r.n_features;
    j["n_skipped"] = r.n_skipped;
    j["latency_ms"] = {{"mean", r.latency_ms.mean}, {"sd", r.latency_ms.sd}};
    j["error"] = r.error;
    arr.push_back(std::move(j));
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << arr.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ebci
