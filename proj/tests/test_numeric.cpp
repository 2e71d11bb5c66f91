#include <doctest.h>

#include <atomic>
#include <cmath>

#include "ebci/numeric.hpp"

using namespace ebci;

TEST_CASE("mean_sd basics") {
  const MeanSd ms = mean_sd({1.0, 2.0, 3.0, 4.0});
  CHECK(ms.mean == doctest::Approx(2.5));
  CHECK(ms.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(mean_sd({7.0}).sd == 0.0);
}

TEST_CASE("median odd and even") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
}

// reference values computed with an independent statistics package
TEST_CASE("incomplete beta against frozen references") {
  CHECK(incomplete_beta(0.5, 5.0, 0.2) == doctest::Approx(0.85507239459592).epsilon(1e-12));
  CHECK(incomplete_beta(2.0, 3.0, 0.5) == doctest::Approx(0.6875).epsilon(1e-12));
  CHECK(incomplete_beta(50.0, 0.5, 0.9) == doctest::Approx(0.00120414983255981).epsilon(1e-10));
  CHECK(incomplete_beta(1.0, 1.0, 0.0) == 0.0);
  CHECK(incomplete_beta(1.0, 1.0, 1.0) == 1.0);
}

TEST_CASE("f-test p-values against frozen references") {
  CHECK(f_test_pvalue(5.0, 1, 10) == doctest::Approx(0.0493321956399218).epsilon(1e-10));
  CHECK(f_test_pvalue(2.5, 1, 100) == doctest::Approx(0.117004189609199).epsilon(1e-10));
  CHECK(f_test_pvalue(0.5, 1, 397) == doctest::Approx(0.479914964431701).epsilon(1e-10));
  CHECK(f_test_pvalue(10.0, 1, 38) == doctest::Approx(0.00307300733367718).epsilon(1e-10));
  CHECK(f_test_pvalue(1.0, 1, 1) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(f_test_pvalue(0.0, 1, 10) == 1.0);
}

TEST_CASE("derive_seed separates tags") {
  CHECK(derive_seed(1, "a") != derive_seed(1, "b"));
  CHECK(derive_seed(1, "a") != derive_seed(2, "a"));
  CHECK(derive_seed(1, "a") == derive_seed(1, "a"));
}

TEST_CASE("parallel_for covers every index once") {
  std::vector<std::atomic<int>> hits(257);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) CHECK(h.load() == 1);
}

TEST_CASE("parallel_for propagates exceptions") {
  CHECK_THROWS(parallel_for(8, 2, [](std::size_t i) {
    if (i == 3) throw std::runtime_error("boom");
  }));
}
