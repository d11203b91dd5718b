#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>

#include "nsf/grid.hpp"

namespace nsf {

struct LinearSolverSpec {
  enum class Method { conjugate_gradient, bicgstab };
  Method method = Method::bicgstab;
  double tol = 1e-10;  ///< relative residual target ||b - Ax|| <= tol ||b||
  int max_iter = 2000;

  void validate() const;
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, SolveStats stats)
      : std::runtime_error(what), stats_(stats) {}
  const SolveStats& stats() const { return stats_; }

 private:
  SolveStats stats_;
};

using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

/// Solves A x = b starting from the incoming x. `precond` applies an
/// approximate inverse (z = M^-1 r); pass an empty function for none.
/// CG assumes A and M symmetric positive (semi)definite.
SolveStats solve(const LinearOperator& A, const LinearOperator& precond, std::span<const double> b,
                 std::span<double> x, const LinearSolverSpec& spec);

/// Same as solve() but throws SolverError on non-convergence.
SolveStats solve_or_throw(const LinearOperator& A, const LinearOperator& precond,
                          std::span<const double> b, std::span<double> x,
                          const LinearSolverSpec& spec, const char* what);

/// Exact inverse of the constant-coefficient operator  shift - coeff * Lap_N
/// (five-point, homogeneous Neumann) on cell-centred data, by DCT-II
/// diagonalisation. With shift == 0 the constant mode is mapped to zero,
/// which makes it a pseudo-inverse on mean-free data.
class NeumannHelmholtz {
 public:
  NeumannHelmholtz(const Grid& g, double shift, double coeff);
  ~NeumannHelmholtz();
  NeumannHelmholtz(const NeumannHelmholtz&) = delete;
  NeumannHelmholtz& operator=(const NeumannHelmholtz&) = delete;

  void apply(std::span<const double> rhs, std::span<double> out) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Exact inverse of  shift - c_n d_nn - c_t d_tt  for one no-slip velocity
/// component on its faces: zero on the two walls normal to it (DST-I along
/// the component) and odd reflection across the tangential walls (DST-II).
/// Operates on the full face array of that component; wall entries pass
/// through unchanged.
class NoSlipHelmholtz {
 public:
  enum class Component { u, v };
  NoSlipHelmholtz(const Grid& g, Component c, double shift, double c_normal, double c_tangential);
  ~NoSlipHelmholtz();
  NoSlipHelmholtz(const NoSlipHelmholtz&) = delete;
  NoSlipHelmholtz& operator=(const NoSlipHelmholtz&) = delete;

  void apply(std::span<const double> rhs, std::span<double> out) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace nsf
