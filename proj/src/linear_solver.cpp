#include "nsf/linear_solver.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

#include "nsf/parallel.hpp"

namespace nsf {

void LinearSolverSpec::validate() const {
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("solver tolerance must lie in (0,1)");
  if (max_iter < 1) throw std::invalid_argument("solver max_iter must be >= 1");
}

namespace {

void apply_or_copy(const LinearOperator& M, std::span<const double> in, std::span<double> out) {
  if (M)
    M(in, out);
  else
    std::copy(in.begin(), in.end(), out.begin());
}

SolveStats conjugate_gradient(const LinearOperator& A, const LinearOperator& M,
                              std::span<const double> b, std::span<double> x,
                              const LinearSolverSpec& spec, double bnorm) {
  const std::size_t n = b.size();
  std::vector<double> r(n), z(n), p(n), q(n);
  A(x, r);
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - r[k];
  SolveStats st;
  double rnorm = norm2(r);
  if (rnorm <= spec.tol * bnorm) return {0, rnorm / bnorm, true};
  apply_or_copy(M, r, z);
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= spec.max_iter; ++it) {
    A(p, q);
    const double pq = dot(p, q);
    if (pq <= 0.0) break;
    const double alpha = rz / pq;
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    rnorm = norm2(r);
    st = {it, rnorm / bnorm, rnorm <= spec.tol * bnorm};
    if (st.converged) return st;
    apply_or_copy(M, r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
  }
  return st;
}

SolveStats bicgstab(const LinearOperator& A, const LinearOperator& M, std::span<const double> b,
                    std::span<double> x, const LinearSolverSpec& spec, double bnorm) {
  const std::size_t n = b.size();
  std::vector<double> r(n), rhat(n), p(n, 0.0), v(n, 0.0), y(n), s(n), z(n), t(n);
  A(x, r);
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - r[k];
  double rnorm = norm2(r);
  SolveStats st{0, rnorm / bnorm, rnorm <= spec.tol * bnorm};
  if (st.converged) return st;
  rhat = r;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  for (int it = 1; it <= spec.max_iter; ++it) {
    double rho_new = dot(rhat, r);
    if (rho_new == 0.0) {
      // Shadow residual became orthogonal; restart from the current residual.
      rhat = r;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      rho = alpha = omega = 1.0;
      rho_new = dot(rhat, r);
    }
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * (p[k] - omega * v[k]);
    apply_or_copy(M, p, y);
    A(y, v);
    const double rv = dot(rhat, v);
    if (rv == 0.0) break;
    alpha = rho / rv;
    for (std::size_t k = 0; k < n; ++k) s[k] = r[k] - alpha * v[k];
    const double snorm = norm2(s);
    if (snorm <= spec.tol * bnorm) {
      axpy(alpha, y, x);
      return {it, snorm / bnorm, true};
    }
    apply_or_copy(M, s, z);
    A(z, t);
    const double tt = dot(t, t);
    omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * y[k] + omega * z[k];
      r[k] = s[k] - omega * t[k];
    }
    rnorm = norm2(r);
    st = {it, rnorm / bnorm, rnorm <= spec.tol * bnorm};
    if (st.converged || omega == 0.0) return st;
  }
  return st;
}

}  // namespace

SolveStats solve(const LinearOperator& A, const LinearOperator& precond, std::span<const double> b,
                 std::span<double> x, const LinearSolverSpec& spec) {
  spec.validate();
  if (b.size() != x.size()) throw std::invalid_argument("solve: size mismatch");
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return {0, 0.0, true};
  }
  if (spec.method == LinearSolverSpec::Method::conjugate_gradient)
    return conjugate_gradient(A, precond, b, x, spec, bnorm);
  return bicgstab(A, precond, b, x, spec, bnorm);
}

SolveStats solve_or_throw(const LinearOperator& A, const LinearOperator& precond,
                          std::span<const double> b, std::span<double> x,
                          const LinearSolverSpec& spec, const char* what) {
  const SolveStats st = solve(A, precond, b, x, spec);
  if (!st.converged)
    throw SolverError(std::string(what) + ": no convergence after " +
                          std::to_string(st.iterations) + " iterations (relative residual " +
                          std::to_string(st.relative_residual) + ")",
                      st);
  return st;
}

// ---------------------------------------------------------------------------

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct NeumannHelmholtz::Impl {
  int nx, ny;
  double* buf = nullptr;
  fftw_plan forward = nullptr, backward = nullptr;
  std::vector<double> inv_eig;
};

NeumannHelmholtz::NeumannHelmholtz(const Grid& g, double shift, double coeff)
    : impl_(std::make_unique<Impl>()) {
  Impl& m = *impl_;
  m.nx = g.nx();
  m.ny = g.ny();
  const std::size_t n = g.cells();
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    m.buf = fftw_alloc_real(n);
    m.forward = fftw_plan_r2r_2d(m.ny, m.nx, m.buf, m.buf, FFTW_REDFT10, FFTW_REDFT10, FFTW_ESTIMATE);
    m.backward = fftw_plan_r2r_2d(m.ny, m.nx, m.buf, m.buf, FFTW_REDFT01, FFTW_REDFT01, FFTW_ESTIMATE);
  }
  const double pi = std::numbers::pi;
  const double norm = 4.0 * m.nx * m.ny;
  m.inv_eig.resize(n);
  for (int ky = 0; ky < m.ny; ++ky)
    for (int kx = 0; kx < m.nx; ++kx) {
      const double lam = (2.0 - 2.0 * std::cos(pi * kx / m.nx)) / (g.hx() * g.hx()) +
                         (2.0 - 2.0 * std::cos(pi * ky / m.ny)) / (g.hy() * g.hy());
      const double d = shift + coeff * lam;
      m.inv_eig[static_cast<std::size_t>(ky) * m.nx + kx] = d > 0.0 ? 1.0 / (d * norm) : 0.0;
    }
}

NeumannHelmholtz::~NeumannHelmholtz() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(impl_->forward);
  fftw_destroy_plan(impl_->backward);
  fftw_free(impl_->buf);
}

void NeumannHelmholtz::apply(std::span<const double> rhs, std::span<double> out) const {
  Impl& m = *impl_;
  const std::size_t n = m.inv_eig.size();
  std::copy(rhs.begin(), rhs.end(), m.buf);
  fftw_execute(m.forward);
  for (std::size_t k = 0; k < n; ++k) m.buf[k] *= m.inv_eig[k];
  fftw_execute(m.backward);
  std::copy(m.buf, m.buf + n, out.begin());
}

struct NoSlipHelmholtz::Impl {
  Component comp;
  int nx, ny;    // face array dimensions (row length, rows)
  int mx, my;    // interior block transformed
  double* buf = nullptr;
  fftw_plan forward = nullptr, backward = nullptr;
  std::vector<double> inv_eig;
};

NoSlipHelmholtz::NoSlipHelmholtz(const Grid& g, Component c, double shift, double c_normal,
                                 double c_tangential)
    : impl_(std::make_unique<Impl>()) {
  Impl& m = *impl_;
  m.comp = c;
  const bool is_u = c == Component::u;
  m.nx = is_u ? g.nx() + 1 : g.nx();
  m.ny = is_u ? g.ny() : g.ny() + 1;
  m.mx = is_u ? g.nx() - 1 : g.nx();
  m.my = is_u ? g.ny() : g.ny() - 1;
  const fftw_r2r_kind fx = is_u ? FFTW_RODFT00 : FFTW_RODFT10;
  const fftw_r2r_kind bx = is_u ? FFTW_RODFT00 : FFTW_RODFT01;
  const fftw_r2r_kind fy = is_u ? FFTW_RODFT10 : FFTW_RODFT00;
  const fftw_r2r_kind by = is_u ? FFTW_RODFT01 : FFTW_RODFT00;
  const std::size_t n = static_cast<std::size_t>(m.mx) * m.my;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    m.buf = fftw_alloc_real(n);
    m.forward = fftw_plan_r2r_2d(m.my, m.mx, m.buf, m.buf, fy, fx, FFTW_ESTIMATE);
    m.backward = fftw_plan_r2r_2d(m.my, m.mx, m.buf, m.buf, by, bx, FFTW_ESTIMATE);
  }
  const double pi = std::numbers::pi;
  // Logical sizes: DST-I of length M has period 2(M+1), DST-II of length M has 2M.
  const double lx = is_u ? m.mx + 1 : m.mx, ly = is_u ? m.my : m.my + 1;
  const double norm = 4.0 * lx * ly;
  const double cx = is_u ? c_normal : c_tangential, cy = is_u ? c_tangential : c_normal;
  m.inv_eig.resize(n);
  for (int ky = 0; ky < m.my; ++ky)
    for (int kx = 0; kx < m.mx; ++kx) {
      const double lam = cx * (2.0 - 2.0 * std::cos(pi * (kx + 1) / lx)) / (g.hx() * g.hx()) +
                         cy * (2.0 - 2.0 * std::cos(pi * (ky + 1) / ly)) / (g.hy() * g.hy());
      m.inv_eig[static_cast<std::size_t>(ky) * m.mx + kx] = 1.0 / ((shift + lam) * norm);
    }
}

NoSlipHelmholtz::~NoSlipHelmholtz() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(impl_->forward);
  fftw_destroy_plan(impl_->backward);
  fftw_free(impl_->buf);
}

void NoSlipHelmholtz::apply(std::span<const double> rhs, std::span<double> out) const {
  Impl& m = *impl_;
  const int ox = m.comp == Component::u ? 1 : 0, oy = m.comp == Component::u ? 0 : 1;
  std::copy(rhs.begin(), rhs.end(), out.begin());
  for (int j = 0; j < m.my; ++j)
    for (int i = 0; i < m.mx; ++i)
      m.buf[static_cast<std::size_t>(j) * m.mx + i] =
          rhs[static_cast<std::size_t>(j + oy) * m.nx + i + ox];
  fftw_execute(m.forward);
  for (std::size_t k = 0; k < m.inv_eig.size(); ++k) m.buf[k] *= m.inv_eig[k];
  fftw_execute(m.backward);
  for (int j = 0; j < m.my; ++j)
    for (int i = 0; i < m.mx; ++i)
      out[static_cast<std::size_t>(j + oy) * m.nx + i + ox] =
          m.buf[static_cast<std::size_t>(j) * m.mx + i];
}

}  // namespace nsf
