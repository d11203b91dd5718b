#include "nsf/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nsf {
namespace {

ExecutionPolicy g_policy;

// Fixed reduction block; independent of the worker count.
constexpr std::size_t kBlock = 1024;

template <typename Term>
double reduce(std::size_t n, Term term) {
  if (g_policy.deterministic) {
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static) if (nblocks > 4)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
      const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
      const std::size_t hi = std::min(n, lo + kBlock);
      double s = 0.0;
      for (std::size_t k = lo; k < hi; ++k) s += term(k);
      partial[static_cast<std::size_t>(b)] = s;
    }
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
  }
  double s = 0.0;
#pragma omp parallel for reduction(+ : s) schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k)
    s += term(static_cast<std::size_t>(k));
  return s;
}

}  // namespace

void set_execution_policy(const ExecutionPolicy& policy) {
  if (policy.workers < 1) throw std::invalid_argument("worker count must be >= 1");
  g_policy = policy;
#ifdef _OPENMP
  omp_set_num_threads(policy.workers);
#endif
}

const ExecutionPolicy& execution_policy() { return g_policy; }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  return reduce(a.size(), [&](std::size_t k) { return a[k] * b[k]; });
}

double sum(std::span<const double> a) {
  return reduce(a.size(), [&](std::size_t k) { return a[k]; });
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: length mismatch");
#pragma omp parallel for schedule(static) if (x.size() > 8192)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(x.size()); ++k)
    y[static_cast<std::size_t>(k)] += alpha * x[static_cast<std::size_t>(k)];
}

}  // namespace nsf
