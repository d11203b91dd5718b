#pragma once

#include <cstddef>
#include <span>

namespace nsf {

/// Process-wide execution settings for the stencil and reduction kernels.
///
/// In deterministic mode every reduction is evaluated over a fixed block
/// partition whose partial sums are combined in index order, so results are
/// bit-identical for any worker count. Otherwise OpenMP's own reduction is
/// used.
struct ExecutionPolicy {
  int workers = 1;
  bool deterministic = true;
};

void set_execution_policy(const ExecutionPolicy& policy);
const ExecutionPolicy& execution_policy();

double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
double norm2(std::span<const double> a);
double max_abs(std::span<const double> a);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace nsf
