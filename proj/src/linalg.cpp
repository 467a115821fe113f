#include "tgp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "tgp/errors.hpp"

namespace tgp {

namespace {

// std::complex multiplication carries NaN/Inf recovery branches; the kernels
// below work on the interleaved (re, im) doubles directly.
inline const double* raw(const Complex* p) { return reinterpret_cast<const double*>(p); }
inline double* raw(Complex* p) { return reinterpret_cast<double*>(p); }

Complex conj_dot(const Complex* u, const Complex* v, std::size_t n) {
  const double* a = raw(u);
  const double* b = raw(v);
  double re0 = 0.0, im0 = 0.0, re1 = 0.0, im1 = 0.0;
  std::size_t i = 0;
  for (; i + 1 < n; i += 2) {
    const double* x = a + 2 * i;
    const double* y = b + 2 * i;
    re0 += x[0] * y[0] + x[1] * y[1];
    im0 += x[0] * y[1] - x[1] * y[0];
    re1 += x[2] * y[2] + x[3] * y[3];
    im1 += x[2] * y[3] - x[3] * y[2];
  }
  if (i < n) {
    const double* x = a + 2 * i;
    const double* y = b + 2 * i;
    re0 += x[0] * y[0] + x[1] * y[1];
    im0 += x[0] * y[1] - x[1] * y[0];
  }
  return {re0 + re1, im0 + im1};
}

// y += s * x
void axpy(Complex s, const Complex* x, Complex* y, std::size_t n) {
  const double sr = s.real();
  const double si = s.imag();
  const double* a = raw(x);
  double* b = raw(y);
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = a[2 * i];
    const double xi = a[2 * i + 1];
    b[2 * i] += sr * xr - si * xi;
    b[2 * i + 1] += sr * xi + si * xr;
  }
}

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": length mismatch (" << a << " vs " << b << ")";
    throw DimensionError(msg.str());
  }
}

void check_columns(const CMatrix& a, const IndexSet& omega) {
  if (!omega.empty() && omega.indices().back() >= a.cols()) {
    throw DimensionError("column index " + std::to_string(omega.indices().back()) +
                         " out of range for K = " + std::to_string(a.cols()));
  }
}

// Dense Hermitian k x k Gram of the selected columns, column-major.
std::vector<Complex> explicit_gram(const CMatrix& a, const IndexSet& omega) {
  const std::size_t k = omega.size();
  std::vector<Complex> g(k * k);
  for (std::size_t q = 0; q < k; ++q) {
    const auto cq = a.column(omega[q]);
    for (std::size_t p = 0; p <= q; ++p) {
      const auto cp = a.column(omega[p]);
      const Complex v = conj_dot(cp.data(), cq.data(), a.rows());
      g[q * k + p] = v;
      g[p * k + q] = std::conj(v);
    }
  }
  return g;
}

std::vector<Complex> dense_apply(const std::vector<Complex>& g, std::size_t k,
                                 const std::vector<Complex>& v) {
  std::vector<Complex> out(k, Complex{});
  for (std::size_t q = 0; q < k; ++q) axpy(v[q], g.data() + q * k, out.data(), k);
  return out;
}

double vec_norm(const std::vector<Complex>& v) { return norm2(std::span<const Complex>(v)); }

// Rayleigh quotient and residual norm of a unit vector.
std::pair<double, double> rayleigh(const std::vector<Complex>& g, std::size_t k,
                                   const std::vector<Complex>& v) {
  const auto w = dense_apply(g, k, v);
  const double rho = conj_dot(v.data(), w.data(), k).real();
  double res = 0.0;
  for (std::size_t i = 0; i < k; ++i) res += std::norm(w[i] - rho * v[i]);
  return {rho, std::sqrt(res)};
}

std::vector<Complex> start_vector(std::size_t k) {
  std::vector<Complex> v(k);
  for (std::size_t i = 0; i < k; ++i) {
    v[i] = Complex{1.0 + 0.37 * static_cast<double>(i) / static_cast<double>(k),
                   0.11 * static_cast<double>(i % 3)};
  }
  const double n = vec_norm(v);
  for (auto& x : v) x /= n;
  return v;
}

constexpr std::size_t kEigIterations = 100000;
constexpr double kDependenceTol = 1e-10;

// Largest eigenvalue of (shift * I + sign * G) by power iteration.
double power_iteration(const std::vector<Complex>& g, std::size_t k, double shift, double sign) {
  auto v = start_vector(k);
  double rho = 0.0;
  for (std::size_t it = 0; it < kEigIterations; ++it) {
    auto w = dense_apply(g, k, v);
    for (std::size_t i = 0; i < k; ++i) w[i] = shift * v[i] + sign * w[i];
    rho = conj_dot(v.data(), w.data(), k).real();
    double res = 0.0;
    for (std::size_t i = 0; i < k; ++i) res += std::norm(w[i] - rho * v[i]);
    const double n = vec_norm(w);
    if (std::sqrt(res) <= 1e-10 * std::max(std::abs(rho), 1e-300) || n == 0.0) break;
    for (std::size_t i = 0; i < k; ++i) v[i] = w[i] / n;
  }
  return rho;
}

// Lower Cholesky factor in place; false if the matrix is not numerically PD.
bool cholesky(std::vector<Complex>& g, std::size_t k) {
  for (std::size_t j = 0; j < k; ++j) {
    double d = g[j * k + j].real();
    for (std::size_t p = 0; p < j; ++p) d -= std::norm(g[p * k + j]);
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    g[j * k + j] = ljj;
    for (std::size_t i = j + 1; i < k; ++i) {
      Complex s = g[j * k + i];
      for (std::size_t p = 0; p < j; ++p) s -= g[p * k + i] * std::conj(g[p * k + j]);
      g[j * k + i] = s / ljj;
    }
  }
  return true;
}

// Smallest relative Schur pivot d_j / G_jj of the Gram, i.e. the squared sine
// of the angle between column j and the span of the columns before it.
double min_relative_pivot(std::vector<Complex> g, std::size_t k) {
  double worst = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double diag = g[j * k + j].real();
    if (!(diag > 0.0)) return 0.0;
    double d = diag;
    for (std::size_t p = 0; p < j; ++p) d -= std::norm(g[p * k + j]);
    worst = std::min(worst, d / diag);
    if (!(d > 0.0)) return worst;
    const double ljj = std::sqrt(d);
    for (std::size_t i = j + 1; i < k; ++i) {
      Complex s = g[j * k + i];
      for (std::size_t p = 0; p < j; ++p) s -= g[p * k + i] * std::conj(g[p * k + j]);
      g[j * k + i] = s / ljj;
    }
    g[j * k + j] = ljj;
  }
  return worst;
}

void cholesky_solve(const std::vector<Complex>& l, std::size_t k, std::vector<Complex>& x) {
  for (std::size_t i = 0; i < k; ++i) {
    Complex s = x[i];
    for (std::size_t p = 0; p < i; ++p) s -= l[p * k + i] * x[p];
    x[i] = s / l[i * k + i].real();
  }
  for (std::size_t ii = k; ii-- > 0;) {
    Complex s = x[ii];
    for (std::size_t p = ii + 1; p < k; ++p) s -= std::conj(l[ii * k + p]) * x[p];
    x[ii] = s / l[ii * k + ii].real();
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// CVector

CVector::CVector(std::size_t n) : data_(n) {
  if (n == 0) throw DimensionError("CVector: length must be positive");
}

CVector::CVector(std::initializer_list<Complex> values) : data_(values) {
  if (data_.empty()) throw DimensionError("CVector: length must be positive");
}

CVector::CVector(std::vector<Complex> values) : data_(std::move(values)) {
  if (data_.empty()) throw DimensionError("CVector: length must be positive");
}

CVector& CVector::operator+=(const CVector& other) {
  require_same_length(size(), other.size(), "CVector +=");
  axpy(1.0, other.data(), data(), size());
  return *this;
}

CVector& CVector::operator-=(const CVector& other) {
  require_same_length(size(), other.size(), "CVector -=");
  axpy(-1.0, other.data(), data(), size());
  return *this;
}

CVector& CVector::operator*=(Complex scale) {
  for (auto& x : data_) x *= scale;
  return *this;
}

CVector operator+(CVector lhs, const CVector& rhs) { return lhs += rhs; }
CVector operator-(CVector lhs, const CVector& rhs) { return lhs -= rhs; }
CVector operator*(Complex scale, CVector v) { return v *= scale; }

// ---------------------------------------------------------------------------
// IndexSet

IndexSet::IndexSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
}

IndexSet::IndexSet(std::initializer_list<std::size_t> indices)
    : IndexSet(std::vector<std::size_t>(indices)) {}

bool IndexSet::contains(std::size_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

IndexSet IndexSet::union_with(const IndexSet& other) const {
  IndexSet out;
  out.indices_.reserve(size() + other.size());
  std::set_union(begin(), end(), other.begin(), other.end(), std::back_inserter(out.indices_));
  return out;
}

IndexSet IndexSet::intersection_with(const IndexSet& other) const {
  IndexSet out;
  std::set_intersection(begin(), end(), other.begin(), other.end(),
                        std::back_inserter(out.indices_));
  return out;
}

IndexSet IndexSet::minus(const IndexSet& other) const {
  IndexSet out;
  std::set_difference(begin(), end(), other.begin(), other.end(),
                      std::back_inserter(out.indices_));
  return out;
}

bool IndexSet::is_subset_of(const IndexSet& other) const {
  return std::includes(other.begin(), other.end(), begin(), end());
}

std::string IndexSet::to_string() const {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < indices_.size(); ++i) out << (i ? ", " : "") << indices_[i];
  out << '}';
  return out.str();
}

// ---------------------------------------------------------------------------
// CMatrix

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) throw DimensionError("CMatrix: N and K must be positive");
  data_.assign(rows * cols, Complex{});
}

CVector CMatrix::apply(const CVector& x) const {
  require_same_length(x.size(), cols_, "CMatrix::apply");
  CVector y(rows_);
  for (std::size_t j = 0; j < cols_; ++j) {
    if (x[j] != Complex{}) axpy(x[j], column(j).data(), y.data(), rows_);
  }
  return y;
}

CVector CMatrix::adjoint_apply(const CVector& u) const {
  require_same_length(u.size(), rows_, "CMatrix::adjoint_apply");
  CVector y(cols_);
  for (std::size_t j = 0; j < cols_; ++j) y[j] = conj_dot(column(j).data(), u.data(), rows_);
  return y;
}

CVector CMatrix::apply_columns(const IndexSet& omega, const CVector& coefficients) const {
  require_same_length(coefficients.size(), omega.size(), "CMatrix::apply_columns");
  check_columns(*this, omega);
  CVector y(rows_);
  for (std::size_t p = 0; p < omega.size(); ++p) {
    axpy(coefficients[p], column(omega[p]).data(), y.data(), rows_);
  }
  return y;
}

CVector CMatrix::adjoint_apply_columns(const IndexSet& omega, const CVector& u) const {
  require_same_length(u.size(), rows_, "CMatrix::adjoint_apply_columns");
  check_columns(*this, omega);
  if (omega.empty()) return {};
  CVector y(omega.size());
  for (std::size_t p = 0; p < omega.size(); ++p) {
    y[p] = conj_dot(column(omega[p]).data(), u.data(), rows_);
  }
  return y;
}

// ---------------------------------------------------------------------------
// Free functions

Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
  require_same_length(u.size(), v.size(), "inner");
  return conj_dot(u.data(), v.data(), u.size());
}

Complex inner(const CVector& u, const CVector& v) { return inner(u.span(), v.span()); }

double norm2(std::span<const Complex> v) {
  // Scaled accumulation so that tiny or huge entries neither underflow nor overflow.
  double scale = 0.0;
  for (const auto& x : v) scale = std::max({scale, std::abs(x.real()), std::abs(x.imag())});
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& x : v) {
    const double re = x.real() / scale;
    const double im = x.imag() / scale;
    sum += re * re + im * im;
  }
  return scale * std::sqrt(sum);
}

double norm2(const CVector& v) { return norm2(v.span()); }

CgSolution cg_solve(const GramOperator& gram_apply, const CVector& rhs, double tol,
                    std::size_t max_iter) {
  if (!(tol > 0.0)) throw ParameterError("cg_solve: tol must be positive");
  const std::size_t n = rhs.size();
  CgSolution out{CVector(n), CgReport{}};
  const double rhs_norm = norm2(rhs);
  if (rhs_norm == 0.0) return out;

  CVector& x = out.solution;
  CgReport& rep = out.report;
  rep.converged = false;
  rep.final_relative_residual = 1.0;

  // Outer loop restarts from the true residual whenever the recursively updated
  // one claims convergence that the true residual does not confirm.
  while (rep.iterations < max_iter) {
    CVector r = rhs - gram_apply(x);
    double rr = conj_dot(r.data(), r.data(), n).real();
    rep.final_relative_residual = std::sqrt(rr) / rhs_norm;
    if (rep.final_relative_residual <= tol) {
      rep.converged = true;
      return out;
    }
    CVector p = r;
    bool claimed = false;
    while (rep.iterations < max_iter) {
      const CVector gp = gram_apply(p);
      const double curvature = conj_dot(p.data(), gp.data(), n).real();
      if (!(curvature > 0.0)) return out;  // not positive definite along p
      const double alpha = rr / curvature;
      axpy(alpha, p.data(), x.data(), n);
      axpy(-alpha, gp.data(), r.data(), n);
      ++rep.iterations;
      const double rr_next = conj_dot(r.data(), r.data(), n).real();
      if (std::sqrt(rr_next) <= tol * rhs_norm) {
        claimed = true;
        break;
      }
      const double beta = rr_next / rr;
      rr = rr_next;
      for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    if (!claimed) break;
  }
  const CVector r = rhs - gram_apply(x);
  rep.final_relative_residual = norm2(r) / rhs_norm;
  rep.converged = rep.final_relative_residual <= tol;
  return out;
}

std::size_t default_cg_budget(std::size_t omega_size) {
  return std::max<std::size_t>(50, 4 * omega_size);
}

Projection project_out(const CMatrix& a, const IndexSet& omega, const CVector& b, double tol) {
  require_same_length(b.size(), a.rows(), "project_out");
  check_columns(a, omega);
  if (omega.empty()) return {b, CVector{}, CgReport{}};
  if (omega.size() > a.rows()) {
    throw RankDeficiencyError("projection undefined: |omega| = " + std::to_string(omega.size()) +
                                  " exceeds N = " + std::to_string(a.rows()),
                              omega.indices());
  }

  const CVector rhs = a.adjoint_apply_columns(omega, b);
  const GramOperator gram = [&](const CVector& c) {
    return a.adjoint_apply_columns(omega, a.apply_columns(omega, c));
  };
  const std::size_t budget = default_cg_budget(omega.size());
  CgSolution sol = cg_solve(gram, rhs, tol, budget);

  if (!sol.report.converged) {
    const EigenRange eig = gram_extreme_eigs(a, omega);
    if (eig.lambda_min < 1e-10) {
      throw RankDeficiencyError("Gram matrix on omega = " + omega.to_string() +
                                    " is singular (lambda_min = " +
                                    std::to_string(eig.lambda_min) + ")",
                                omega.indices());
    }
    // Invertible but ill-conditioned: allow a longer run before giving up.
    sol = cg_solve(gram, rhs, tol, 20 * budget);
    if (!sol.report.converged) {
      throw RankDeficiencyError("CG did not converge on omega = " + omega.to_string() +
                                    " (relative residual " +
                                    std::to_string(sol.report.final_relative_residual) + ")",
                                omega.indices());
    }
  }

  // CG also converges on a consistent singular system, so dependence among
  // the selected columns has to be checked directly.
  if (omega.size() > 1) {
    const double pivot = min_relative_pivot(explicit_gram(a, omega), omega.size());
    if (pivot < kDependenceTol) {
      throw RankDeficiencyError("columns on omega = " + omega.to_string() +
                                    " are linearly dependent (relative pivot " +
                                    std::to_string(pivot) + ")",
                                omega.indices());
    }
  }

  CVector residual = b - a.apply_columns(omega, sol.solution);
  return {std::move(residual), std::move(sol.solution), sol.report};
}

ProjectionResidual complement_project(const CMatrix& a, const IndexSet& omega, const CVector& b,
                                      double tol) {
  Projection p = project_out(a, omega, b, tol);
  return {std::move(p.residual), p.report};
}

CVector least_squares_fit(const CMatrix& a, const IndexSet& omega, const CVector& b, double tol) {
  return project_out(a, omega, b, tol).coefficients;
}

EigenRange gram_extreme_eigs(const CMatrix& a, const IndexSet& omega) {
  if (omega.empty()) throw DimensionError("gram_extreme_eigs: omega must be nonempty");
  check_columns(a, omega);
  const std::size_t k = omega.size();
  const auto g = explicit_gram(a, omega);

  EigenRange out;
  out.lambda_max = power_iteration(g, k, 0.0, 1.0);

  auto l = g;
  if (!cholesky(l, k)) {
    out.lambda_min = out.lambda_max - power_iteration(g, k, out.lambda_max, -1.0);
    return out;
  }
  auto v = start_vector(k);
  double rho = out.lambda_max;
  for (std::size_t it = 0; it < kEigIterations; ++it) {
    cholesky_solve(l, k, v);
    const double n = vec_norm(v);
    for (auto& x : v) x /= n;
    const auto [q, res] = rayleigh(g, k, v);
    rho = q;
    if (res <= 1e-10 * out.lambda_max) break;
  }
  out.lambda_min = rho;
  return out;
}

}  // namespace tgp
