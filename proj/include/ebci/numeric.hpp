#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ebci {

struct MeanSd {
  double mean{0.0};
  double sd{0.0};
};

// Sample mean and standard deviation (n-1 denominator; sd = 0 for n < 2).
MeanSd mean_sd(const std::vector<double>& v);

double median(std::vector<double> v);

// Regularized incomplete beta function I_x(a, b), x in [0, 1].
// Continued-fraction evaluation (Lentz), accurate to ~1e-12 for the
// parameter ranges used by the partial-F tests.
double incomplete_beta(double a, double b, double x);

// Upper-tail p-value of an F statistic with (d1, d2) degrees of freedom.
double f_test_pvalue(double f, double d1, double d2);

// FNV-1a, used for config hashing and derived per-cell seeds.
std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(const std::string& s);

// Mix a master seed with a cell tag into an independent stream seed.
std::uint64_t derive_seed(std::uint64_t master, const std::string& tag);

// Runs fn(i) for i in [0, n) on up to n_workers threads. fn must not throw
// across tasks it does not own; the first exception is rethrown after join.
void parallel_for(std::size_t n, int n_workers, const std::function<void(std::size_t)>& fn);

}  // namespace ebci
