#include <doctest.h>

#include "ebci/config.hpp"

using namespace ebci;

TEST_CASE("defaults match the documented values") {
  const RunConfig c;
  CHECK(c.classifier.lambda == 0.01);
  CHECK(c.classifier.p_ins == 0.1);
  CHECK(c.classifier.p_rem == 0.15);
  CHECK(c.classifier.gamma == 0.1);
  CHECK(c.classifier.max_features == 60);
  CHECK(c.pipeline.window_ms == 500.0);
  CHECK(c.pipeline.baseline_ms == 100.0);
  CHECK(c.pipeline.filter_low_hz == 1.0);
  CHECK(c.pipeline.filter_high_hz == 40.0);
  CHECK(c.online_n_train_trials == 80);
  CHECK(c.online_threshold_ms == 500.0);
  CHECK(c.cv_folds == 10);
  CHECK(c.offline_sizes.front() == 30);
  CHECK(c.offline_sizes.back() == 420);
  CHECK(c.offline_sizes.size() == 14);
  CHECK(c.online_thresholds.size() == 11);
  CHECK(c.online_train_sizes.size() == 9);
}

TEST_CASE("unknown key is rejected with a suggestion") {
  RunConfig c;
  const std::string text = R"({"classifiers": {"rlda": {"lamda": 0.05}}})";
  CHECK_THROWS_WITH_AS(apply_config_json_text(text, c, "test"),
                       doctest::Contains("did you mean 'lambda'"), std::runtime_error);
}

TEST_CASE("every offending key is listed") {
  RunConfig c;
  const std::string text = R"({"sed": 1, "filter": {"lo_hz": 2}})";
  try {
    apply_config_json_text(text, c, "test");
    FAIL("expected a validation error");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("sed") != std::string::npos);
    CHECK(msg.find("filter.lo_hz") != std::string::npos);
  }
}

TEST_CASE("values land in the right fields") {
  RunConfig c;
  apply_config_json_text(R"({
    "seed": 42,
    "scaling": false,
    "filter": {"low_hz": 2.0, "taps": 301},
    "cv": {"grouping": "sample"},
    "classifiers": {"sklda": {"gamma": "analytic"}, "stda": {"ds": 3}},
    "generator": {"noise_model": "white", "erp_amplitude_uv": 7.5}
  })",
                         c, "test");
  CHECK(c.seed == 42);
  CHECK(c.generator.seed == 42);
  CHECK_FALSE(c.scaling);
  CHECK(c.pipeline.filter_low_hz == 2.0);
  CHECK(c.pipeline.filter_taps == 301);
  CHECK_FALSE(c.cv_group_by_trial);
  CHECK(c.classifier.gamma_analytic);
  CHECK(c.classifier.stda_ds == 3);
  CHECK(c.generator.noise_model == NoiseModel::White);
  CHECK(c.generator.erp_amplitude_uv == 7.5);
}

TEST_CASE("config hash is stable and value-sensitive") {
  RunConfig a, b;
  CHECK(config_hash(a) == config_hash(b));
  b.seed = 2;
  CHECK(config_hash(a) != config_hash(b));
}
