#include "ebci/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace ebci {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::pair<std::vector<RocPoint>, double> compute_roc_auc(const std::vector<double>& scores,
                                                         const std::vector<int>& labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw std::invalid_argument("compute_roc_auc: scores and labels must be non-empty and aligned");
  }
  std::size_t n_pos = 0, n_neg = 0;
  for (int l : labels) {
    if (l == 1) ++n_pos;
    else if (l == -1) ++n_neg;
    else throw std::invalid_argument("compute_roc_auc: labels must be +1/-1");
  }
  if (n_pos == 0 || n_neg == 0) {
    throw std::invalid_argument("compute_roc_auc: both classes must be present");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // midranks for the rank statistic
  double rank_sum_pos = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) rank_sum_pos += midrank;
    }
    i = j;
  }
  const double auc = (rank_sum_pos - 0.5 * static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0)) /
                     (static_cast<double>(n_pos) * static_cast<double>(n_neg));

  // threshold sweep, descending scores
  std::vector<RocPoint> roc;
  roc.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = order.size(); i > 0;) {
    std::size_t j = i;
    const double v = scores[order[i - 1]];
    while (j > 0 && scores[order[j - 1]] == v) {
      if (labels[order[j - 1]] == 1) ++tp;
      else ++fp;
      --j;
    }
    roc.push_back({static_cast<double>(fp) / static_cast<double>(n_neg),
                   static_cast<double>(tp) / static_cast<double>(n_pos)});
    i = j;
  }
  return {roc, auc};
}

namespace {

struct FoldEval {
  double accuracy{0.0};
  double auc{0.0};
  double fit_ms{0.0};
  double score_ms_per_sample{0.0};
  int n_train{0};
  int n_test{0};
  std::vector<double> scores;
  std::vector<int> labels;
};

FoldEval evaluate_split(const std::vector<LabeledSample>& train_samples,
                        const std::vector<LabeledSample>& test_samples, const ClassifierSpec& spec,
                        const EvalOptions& options) {
  FoldEval out;
  out.n_train = static_cast<int>(train_samples.size());
  out.n_test = static_cast<int>(test_samples.size());

  std::vector<LabeledSample> train = train_samples;
  std::vector<LabeledSample> test = test_samples;
  if (options.scaling) {
    const Normalizer norm = fit_normalizer(train);
    train = apply_normalizer(norm, std::move(train));
    test = apply_normalizer(norm, std::move(test));
  }
  TrainingSet ts = to_training_set(train);
  ts.d_layout = options.d_layout;

  const auto fit_start = std::chrono::steady_clock::now();
  const LinearModel model = fit_classifier(spec, ts);
  out.fit_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - fit_start).count();

  const TrainingSet test_ts = to_training_set(test);
  const auto score_start = std::chrono::steady_clock::now();
  const Vector scores = score_batch(model, test_ts.X);
  out.score_ms_per_sample =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - score_start).count() /
      static_cast<double>(test.size());

  int correct = 0;
  out.scores.reserve(test.size());
  out.labels.reserve(test.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    const int decided = scores[i] > 0.0 ? 1 : -1;
    if (decided == test_ts.y[static_cast<std::size_t>(i)]) ++correct;
    out.scores.push_back(scores[i]);
    out.labels.push_back(test_ts.y[static_cast<std::size_t>(i)]);
  }
  out.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
  out.auc = compute_roc_auc(out.scores, out.labels).second;
  return out;
}

bool both_classes(const std::vector<LabeledSample>& samples) {
  bool pos = false, neg = false;
  for (const auto& s : samples) (s.label == Label::Target ? pos : neg) = true;
  return pos && neg;
}

EvalReport aggregate(const std::string& classifier, const std::string& modality,
                     const std::vector<FoldEval>& folds) {
  EvalReport report;
  report.classifier = classifier;
  report.modality = modality;
  std::vector<double> accs, aucs;
  std::vector<double> pooled_scores;
  std::vector<int> pooled_labels;
  double fit_ms = 0.0, score_ms = 0.0;
  long train_total = 0, test_total = 0;
  for (const auto& f : folds) {
    accs.push_back(f.accuracy);
    aucs.push_back(f.auc);
    fit_ms += f.fit_ms;
    score_ms += f.score_ms_per_sample;
    train_total += f.n_train;
    test_total += f.n_test;
    pooled_scores.insert(pooled_scores.end(), f.scores.begin(), f.scores.end());
    pooled_labels.insert(pooled_labels.end(), f.labels.begin(), f.labels.end());
  }
  const double k = static_cast<double>(folds.size());
  report.accuracy = mean_sd(accs);
  report.auc = mean_sd(aucs);
  report.fit_ms = fit_ms / k;
  report.score_ms = score_ms / k;
  report.n_train = static_cast<int>(std::llround(static_cast<double>(train_total) / k));
  report.n_test = static_cast<int>(std::llround(static_cast<double>(test_total) / k));
  report.n_splits = static_cast<int>(folds.size());
  report.roc = compute_roc_auc(pooled_scores, pooled_labels).first;
  return report;
}

}  // namespace

std::vector<int> assign_folds(const std::vector<LabeledSample>& samples, int folds,
                              bool group_by_trial, std::uint64_t seed) {
  std::vector<int> units;
  if (group_by_trial) {
    for (const auto& s : samples) units.push_back(s.trial_index);
    std::sort(units.begin(), units.end());
    units.erase(std::unique(units.begin(), units.end()), units.end());
  } else {
    units.resize(samples.size());
    std::iota(units.begin(), units.end(), 0);
  }
  if (units.size() < static_cast<std::size_t>(folds)) {
    throw std::invalid_argument("assign_folds: fewer fold units than folds");
  }
  std::mt19937_64 rng(seed);
  std::shuffle(units.begin(), units.end(), rng);
  std::unordered_map<int, int> fold_of_unit;
  for (std::size_t i = 0; i < units.size(); ++i) {
    fold_of_unit[units[i]] = static_cast<int>(i) % folds;
  }
  std::vector<int> out(samples.size());
  for (std::size_t si = 0; si < samples.size(); ++si) {
    out[si] = fold_of_unit.at(group_by_trial ? samples[si].trial_index : static_cast<int>(si));
  }
  return out;
}

EvalReport kfold_cv(const std::vector<LabeledSample>& samples, const ClassifierSpec& spec,
                    const EvalOptions& options, std::uint64_t seed) {
  if (options.folds < 2) throw std::invalid_argument("kfold_cv: need k >= 2");
  if (samples.size() < static_cast<std::size_t>(2 * options.folds)) {
    throw std::invalid_argument("kfold_cv: not enough samples for " + std::to_string(options.folds) +
                                " folds");
  }

  std::vector<std::vector<LabeledSample>> fold_test, fold_train;
  bool assigned = false;
  for (int attempt = 0; attempt < 10 && !assigned; ++attempt) {
    const std::vector<int> fold_of =
        assign_folds(samples, options.folds, options.group_by_trial,
                     seed + static_cast<std::uint64_t>(attempt));
    std::vector<std::vector<LabeledSample>> test(options.folds), train(options.folds);
    for (std::size_t si = 0; si < samples.size(); ++si) {
      for (int f = 0; f < options.folds; ++f) {
        (f == fold_of[si] ? test[f] : train[f]).push_back(samples[si]);
      }
    }
    bool ok = true;
    for (int f = 0; f < options.folds && ok; ++f) {
      ok = !test[f].empty() && both_classes(test[f]) && both_classes(train[f]);
    }
    if (ok) {
      fold_test = std::move(test);
      fold_train = std::move(train);
      assigned = true;
    }
  }
  if (!assigned) {
    throw std::runtime_error("kfold_cv: could not build folds with both classes in 10 attempts");
  }

  std::vector<FoldEval> folds(static_cast<std::size_t>(options.folds));
  parallel_for(static_cast<std::size_t>(options.folds), options.workers, [&](std::size_t f) {
    folds[f] = evaluate_split(fold_train[f], fold_test[f], spec, options);
  });
  return aggregate(classifier_name(spec.kind), "", folds);
}

std::vector<std::vector<EvalReport>> training_size_sweep(const std::vector<LabeledSample>& samples,
                                                         const std::vector<int>& sizes, int repeats,
                                                         const std::vector<ClassifierSpec>& specs,
                                                         const EvalOptions& options,
                                                         std::uint64_t seed) {
  if (sizes.empty() || specs.empty() || repeats < 1) {
    throw std::invalid_argument("training_size_sweep: empty sweep");
  }
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    (samples[i].label == Label::Target ? pos : neg).push_back(i);
  }
  if (pos.empty() || neg.empty()) {
    throw std::invalid_argument("training_size_sweep: both classes must be present");
  }

  // shared draws: [size][repeat] -> (train indices, test indices)
  struct Draw {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
  };
  std::vector<std::vector<Draw>> draws(sizes.size(), std::vector<Draw>(static_cast<std::size_t>(repeats)));
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const int size = sizes[si];
    if (size < 4 || size % 2 != 0) {
      throw std::invalid_argument("training_size_sweep: sizes must be even and >= 4, got " +
                                  std::to_string(size));
    }
    const std::size_t half = static_cast<std::size_t>(size) / 2;
    if (half >= pos.size() || half >= neg.size()) {
      throw std::invalid_argument("training_size_sweep: size " + std::to_string(size) +
                                  " exceeds available balanced samples");
    }
    for (int r = 0; r < repeats; ++r) {
      std::mt19937_64 rng(derive_seed(seed, "sweep/" + std::to_string(size) + "/" + std::to_string(r)));
      std::vector<std::size_t> p = pos, n = neg;
      std::shuffle(p.begin(), p.end(), rng);
      std::shuffle(n.begin(), n.end(), rng);
      Draw d;
      d.train.insert(d.train.end(), p.begin(), p.begin() + static_cast<std::ptrdiff_t>(half));
      d.train.insert(d.train.end(), n.begin(), n.begin() + static_cast<std::ptrdiff_t>(half));
      const std::size_t m = std::min(p.size() - half, n.size() - half);
      d.test.insert(d.test.end(), p.begin() + static_cast<std::ptrdiff_t>(half),
                    p.begin() + static_cast<std::ptrdiff_t>(half + m));
      d.test.insert(d.test.end(), n.begin() + static_cast<std::ptrdiff_t>(half),
                    n.begin() + static_cast<std::ptrdiff_t>(half + m));
      draws[si][static_cast<std::size_t>(r)] = std::move(d);
    }
  }

  auto pick = [&](const std::vector<std::size_t>& idx) {
    std::vector<LabeledSample> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(samples[i]);
    return out;
  };

  const std::size_t n_tasks = specs.size() * sizes.size() * static_cast<std::size_t>(repeats);
  std::vector<FoldEval> evals(n_tasks);
  parallel_for(n_tasks, options.workers, [&](std::size_t task) {
    const std::size_t spec_i = task / (sizes.size() * static_cast<std::size_t>(repeats));
    const std::size_t rem = task % (sizes.size() * static_cast<std::size_t>(repeats));
    const std::size_t size_i = rem / static_cast<std::size_t>(repeats);
    const std::size_t rep = rem % static_cast<std::size_t>(repeats);
    const Draw& d = draws[size_i][rep];
    evals[task] = evaluate_split(pick(d.train), pick(d.test), specs[spec_i], options);
  });

  std::vector<std::vector<EvalReport>> reports(specs.size());
  for (std::size_t spec_i = 0; spec_i < specs.size(); ++spec_i) {
    for (std::size_t size_i = 0; size_i < sizes.size(); ++size_i) {
      std::vector<FoldEval> folds;
      for (int r = 0; r < repeats; ++r) {
        folds.push_back(evals[spec_i * sizes.size() * static_cast<std::size_t>(repeats) +
                              size_i * static_cast<std::size_t>(repeats) + static_cast<std::size_t>(r)]);
      }
      EvalReport rep = aggregate(classifier_name(specs[spec_i].kind), "", folds);
      rep.n_train = sizes[size_i];
      reports[spec_i].push_back(std::move(rep));
    }
  }
  return reports;
}

void write_reports_csv(const std::vector<EvalReport>& reports, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "classifier,modality,n_train,n_test,n_splits,accuracy_mean,accuracy_sd,auc_mean,auc_sd,"
         "fit_ms,score_ms,error\n";
  for (const auto& r : reports) {
    out << r.classifier << ',' << r.modality << ',' << r.n_train << ',' << r.n_test << ','
        << r.n_splits << ',' << format_double(r.accuracy.mean) << ',' << format_double(r.accuracy.sd)
        << ',' << format_double(r.auc.mean) << ',' << format_double(r.auc.sd) << ','
        << format_double(r.fit_ms) << ',' << format_double(r.score_ms) << ',' << r.error << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_reports_json(const std::vector<EvalReport>& reports, const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j;
    j["classifier"] = r.classifier;
    j["modality"] = r.modality;
    j["accuracy"] = {{"mean", r.accuracy.mean}, {"sd", r.accuracy.sd}};
    j["auc"] = {{"mean", r.auc.mean}, {"sd", r.auc.sd}};
    j["n_train"] = r.n_train;
    j["n_test"] = r.n_test;
    j["n_splits"] = r.n_splits;
    j["fit_ms"] = r.fit_ms;
    j["score_ms"] = r.score_ms;
    j["error"] = r.error;
    nlohmann::json roc = nlohmann::json::array();
    for (const auto& p : r.roc) roc.push_back({p.fpr, p.tpr});
    j["roc"] = std::move(roc);
    arr.push_back(std::move(j));
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << arr.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ebci
