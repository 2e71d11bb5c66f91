#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ebci/config.hpp"
#include "ebci/evaluation.hpp"
#include "ebci/replay.hpp"
#include "ebci/session_io.hpp"
#include "ebci/synthetic.hpp"

namespace {

using namespace ebci;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
};

RunConfig resolve_config(const CommonArgs& args) {
  RunConfig config = args.config_path.empty() ? RunConfig{} : load_config(args.config_path);
  if (args.seed_override) {
    config.seed = *args.seed_override;
    config.generator.seed = *args.seed_override;
  }
  return config;
}

EvalOptions eval_options(const RunConfig& config, const Dataset& dataset, Modality modality) {
  EvalOptions options;
  options.folds = config.cv_folds;
  options.group_by_trial = config.cv_group_by_trial;
  options.scaling = config.scaling;
  options.workers = config.workers;
  if (modality != Modality::Eye) options.d_layout = dataset.d_layout;
  return options;
}

int cmd_generate(const CommonArgs& common, const std::string& out_path) {
  const RunConfig config = resolve_config(common);
  const Session session = generate_session(config.generator);
  save_session(session, out_path);
  const auto dir = std::filesystem::absolute(out_path).parent_path();
  write_manifest(dir.string(), config, "generate", {{"out", out_path}});
  std::cout << "wrote " << out_path << " (" << session.n_trials << " trials, "
            << session.eeg.n_samples() << " samples, " << session.fixations.size()
            << " fixations)\n";
  return 0;
}

std::vector<ClassifierKind> offline_kinds() {
  return {ClassifierKind::Rlda, ClassifierKind::Swlda, ClassifierKind::Blda, ClassifierKind::Sklda,
          ClassifierKind::Stda};
}

int cmd_eval_offline(const CommonArgs& common, const std::string& session_path,
                     const std::string& outdir) {
  const RunConfig config = resolve_config(common);
  const Session session = load_session(session_path);
  std::filesystem::create_directories(outdir);
  const Dataset dataset = build_dataset(session, config.pipeline);

  std::vector<EvalReport> reports;
  {
    ClassifierSpec eye_spec = spec_for(config, ClassifierKind::Lda);
    EvalReport eye = kfold_cv(dataset.eye, eye_spec, eval_options(config, dataset, Modality::Eye),
                              derive_seed(config.seed, "offline/eye"));
    eye.modality = "eye";
    reports.push_back(std::move(eye));
  }
  for (ClassifierKind kind : offline_kinds()) {
    for (Modality modality : {Modality::Eeg, Modality::Fusion}) {
      const ClassifierSpec spec = spec_for(config, kind);
      EvalReport rep = kfold_cv(dataset.by_modality(modality), spec,
                                eval_options(config, dataset, modality),
                                derive_seed(config.seed, "offline/" + classifier_name(kind)));
      rep.modality = modality_name(modality);
      reports.push_back(std::move(rep));
    }
  }
  const auto dir = std::filesystem::path(outdir);
  write_reports_csv(reports, (dir / "offline_results.csv").string());
  write_reports_json(reports, (dir / "offline_results.json").string());
  write_manifest(outdir, config, "eval-offline", {{"session", session_path}});
  std::cout << "wrote " << (dir / "offline_results.csv").string() << " (" << reports.size()
            << " rows)\n";
  return 0;
}

int cmd_eval_online(const CommonArgs& common, const std::string& session_path,
                    const std::string& outdir) {
  const RunConfig config = resolve_config(common);
  const Session session = load_session(session_path);
  std::filesystem::create_directories(outdir);
  const EegRecording preprocessed = preprocess_continuous(session.eeg, config.pipeline);

  std::vector<OnlineReport> reports;
  {
    ReplayConfig rc;
    rc.spec = spec_for(config, ClassifierKind::Lda);
    rc.modality = Modality::Eye;
    rc.threshold_ms = config.online_threshold_ms;
    rc.n_train_trials = config.online_n_train_trials;
    rc.scaling = config.scaling;
    rc.seed = derive_seed(config.seed, "online/eye");
    reports.push_back(run_replay_preprocessed(session, preprocessed, rc, config.pipeline));
  }
  for (const std::string& name : config.online_classifiers) {
    for (Modality modality : {Modality::Eeg, Modality::Fusion}) {
      ReplayConfig rc;
      rc.spec = spec_for(config, classifier_kind_from_name(name));
      rc.modality = modality;
      rc.threshold_ms = config.online_threshold_ms;
      rc.n_train_trials = config.online_n_train_trials;
      rc.scaling = config.scaling;
      rc.seed = derive_seed(config.seed, "online/" + name + "/" + modality_name(modality));
      reports.push_back(run_replay_preprocessed(session, preprocessed, rc, config.pipeline));
    }
  }
  const auto dir = std::filesystem::path(outdir);
  write_online_reports_csv(reports, (dir / "online_results.csv").string());
  write_online_reports_json(reports, (dir / "online_results.json").string());
  write_manifest(outdir, config, "eval-online", {{"session", session_path}});
  std::cout << "wrote " << (dir / "online_results.csv").string() << " (" << reports.size()
            << " rows)\n";
  return 0;
}

int cmd_sweep(const CommonArgs& common, const std::string& session_path, const std::string& outdir,
              bool skip_offline, bool skip_online) {
  const RunConfig config = resolve_config(common);
  const Session session = load_session(session_path);
  std::filesystem::create_directories(outdir);
  const auto dir = std::filesystem::path(outdir);
  int failures = 0;

  if (!skip_offline) {
    const Dataset dataset = build_dataset(session, config.pipeline);
    std::vector<ClassifierSpec> specs;
    for (ClassifierKind kind : offline_kinds()) specs.push_back(spec_for(config, kind));
    std::vector<EvalReport> rows;
    for (Modality modality : {Modality::Eeg, Modality::Fusion}) {
      EvalOptions options = eval_options(config, dataset, modality);
      const auto reports =
          training_size_sweep(dataset.by_modality(modality), config.offline_sizes,
                              config.offline_repeats, specs, options,
                              derive_seed(config.seed, "sweep/offline/" + modality_name(modality)));
      for (std::size_t si = 0; si < specs.size(); ++si) {
        for (EvalReport rep : reports[si]) {
          rep.modality = modality_name(modality);
          rows.push_back(std::move(rep));
        }
      }
    }
    write_reports_csv(rows, (dir / "offline_sweep.csv").string());
    write_reports_json(rows, (dir / "offline_sweep.json").string());
    std::cout << "wrote " << (dir / "offline_sweep.csv").string() << " (" << rows.size() << " rows)\n";
  }

  if (!skip_online) {
    std::vector<ClassifierSpec> specs;
    for (const std::string& name : config.online_classifiers) {
      specs.push_back(spec_for(config, classifier_kind_from_name(name)));
    }
    const GridResult grid =
        sweep_grid(session, config.online_thresholds, config.online_train_sizes, specs,
                   derive_seed(config.seed, "sweep/online"), config.pipeline, config.scaling,
                   config.workers);
    std::vector<OnlineReport> rows = grid.cells;
    rows.insert(rows.end(), grid.benchmarks.begin(), grid.benchmarks.end());
    write_online_reports_csv(rows, (dir / "online_grid.csv").string());
    write_online_reports_json(rows, (dir / "online_grid.json").string());
    std::cout << "wrote " << (dir / "online_grid.csv").string() << " (" << grid.cells.size()
              << " cells + " << grid.benchmarks.size() << " benchmark cells, " << grid.n_failed
              << " failed)\n";
    failures += grid.n_failed;
  }

  write_manifest(outdir, config, "sweep", {{"session", session_path}});
  if (failures > 0) {
    nlohmann::json err;
    err["error"] = "sweep finished with failed cells";
    err["failed_cells"] = failures;
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}

int cmd_report(const std::string& indir) {
  const auto dir = std::filesystem::path(indir);
  bool printed = false;

  const auto offline_path = dir / "offline_results.json";
  if (std::filesystem::exists(offline_path)) {
    std::ifstream in(offline_path);
    nlohmann::json rows;
    in >> rows;
    double eye_acc = 0.0, eye_auc = 0.0;
    for (const auto& r : rows) {
      if (r["modality"] == "eye") {
        eye_acc = r["accuracy"]["mean"].get<double>();
        eye_auc = r["auc"]["mean"].get<double>();
      }
    }
    std::printf("offline (10-fold), eye benchmark: accuracy %.4f, auc %.4f\n", eye_acc, eye_auc);
    std::printf("%-8s %-8s %10s %10s %12s %12s\n", "clf", "modality", "accuracy", "auc",
                "acc-vs-eye", "auc-vs-eye");
    for (const auto& r : rows) {
      if (r["modality"] == "eye") continue;
      const double acc = r["accuracy"]["mean"].get<double>();
      const double auc = r["auc"]["mean"].get<double>();
      std::printf("%-8s %-8s %10.4f %10.4f %+12.4f %+12.4f\n",
                  r["classifier"].get<std::string>().c_str(),
                  r["modality"].get<std::string>().c_str(), acc, auc, acc - eye_acc, auc - eye_auc);
    }
    printed = true;
  }

  const auto online_path = dir / "online_results.json";
  if (std::filesystem::exists(online_path)) {
    std::ifstream in(online_path);
    nlohmann::json rows;
    in >> rows;
    std::printf("\nonline replay:\n");
    std::printf("%-8s %-8s %10s %10s %14s\n", "clf", "modality", "accuracy", "auc", "latency(ms)");
    for (const auto& r : rows) {
      std::printf("%-8s %-8s %10.4f %10.4f %14.4f\n", r["classifier"].get<std::string>().c_str(),
                  r["modality"].get<std::string>().c_str(), r["accuracy"].get<double>(),
                  r["auc"].get<double>(), r["latency_ms"]["mean"].get<double>());
    }
    printed = true;
  }

  if (!printed) {
    throw std::runtime_error("report: no offline_results.json or online_results.json in " + indir);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eye-brain hybrid intention decoding pipeline"};
  app.require_subcommand(1);

  CommonArgs common;
  std::string out_path, session_path, outdir, indir;
  bool skip_offline = false, skip_online = false;
  std::uint64_t seed_value = 0;

  std::vector<CLI::App*> seeded;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "JSON config file (defaults when omitted)");
    sub->add_option("--seed", seed_value, "override the config seed");
    seeded.push_back(sub);
  };

  CLI::App* generate = app.add_subcommand("generate", "write a synthetic session file");
  add_common(generate);
  generate->add_option("--out", out_path, "output session path")->required();

  CLI::App* offline = app.add_subcommand("eval-offline", "10-fold offline evaluation");
  add_common(offline);
  offline->add_option("--session", session_path, "session file")->required();
  offline->add_option("--outdir", outdir, "output directory")->required();

  CLI::App* online = app.add_subcommand("eval-online", "pseudo-online replay evaluation");
  add_common(online);
  online->add_option("--session", session_path, "session file")->required();
  online->add_option("--outdir", outdir, "output directory")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "training-size sweep and online grid");
  add_common(sweep);
  sweep->add_option("--session", session_path, "session file")->required();
  sweep->add_option("--outdir", outdir, "output directory")->required();
  sweep->add_flag("--skip-offline", skip_offline, "skip the training-size sweep");
  sweep->add_flag("--skip-online", skip_online, "skip the online grid");

  CLI::App* report = app.add_subcommand("report", "summarize results from an output directory");
  report->add_option("--in", indir, "directory with result JSON files")->required();

  CLI11_PARSE(app, argc, argv);

  for (CLI::App* sub : seeded) {
    if (sub->parsed() && sub->count("--seed") > 0) common.seed_override = seed_value;
  }

  try {
    if (generate->parsed()) return cmd_generate(common, out_path);
    if (offline->parsed()) return cmd_eval_offline(common, session_path, outdir);
    if (online->parsed()) return cmd_eval_online(common, session_path, outdir);
    if (sweep->parsed()) return cmd_sweep(common, session_path, outdir, skip_offline, skip_online);
    if (report->parsed()) return cmd_report(indir);
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
