#pragma once

// Dense complex linear algebra used by the recovery algorithms: column-major
// matrices, index sets over columns, conjugate gradients on the normal
// equations, and projection onto the orthogonal complement of a column span.

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace tgp {

using Complex = std::complex<double>;

class CVector {
 public:
  /// Empty vector; used only for "no coefficients" (an empty support).
  CVector() = default;
  /// Zero vector of length n; n must be positive.
  explicit CVector(std::size_t n);
  CVector(std::initializer_list<Complex> values);
  explicit CVector(std::vector<Complex> values);

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }

  Complex* data() noexcept { return data_.data(); }
  const Complex* data() const noexcept { return data_.data(); }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  std::span<Complex> span() noexcept { return data_; }
  std::span<const Complex> span() const noexcept { return data_; }

  const std::vector<Complex>& values() const noexcept { return data_; }

  CVector& operator+=(const CVector& other);
  CVector& operator-=(const CVector& other);
  CVector& operator*=(Complex scale);

  friend bool operator==(const CVector&, const CVector&) = default;

 private:
  std::vector<Complex> data_;
};

CVector operator+(CVector lhs, const CVector& rhs);
CVector operator-(CVector lhs, const CVector& rhs);
CVector operator*(Complex scale, CVector v);

/// Sorted, duplicate-free set of column indices.
class IndexSet {
 public:
  IndexSet() = default;
  /// Accepts indices in any order; duplicates are dropped.
  explicit IndexSet(std::vector<std::size_t> indices);
  IndexSet(std::initializer_list<std::size_t> indices);

  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  bool contains(std::size_t index) const;

  std::size_t operator[](std::size_t i) const { return indices_[i]; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

  IndexSet union_with(const IndexSet& other) const;
  IndexSet intersection_with(const IndexSet& other) const;
  IndexSet minus(const IndexSet& other) const;
  bool is_subset_of(const IndexSet& other) const;

  std::string to_string() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<std::size_t> indices_;
};

/// Dense N x K complex matrix, column-major.
class CMatrix {
 public:
  CMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  std::span<Complex> column(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const Complex> column(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }

  std::span<const Complex> storage() const noexcept { return data_; }

  /// A x for x of length K.
  CVector apply(const CVector& x) const;
  /// A* u for u of length N.
  CVector adjoint_apply(const CVector& u) const;
  /// A_omega c for c of length |omega|.
  CVector apply_columns(const IndexSet& omega, const CVector& coefficients) const;
  /// A_omega* u, length |omega|.
  CVector adjoint_apply_columns(const IndexSet& omega, const CVector& u) const;

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> data_;
};

/// <u, v> = conj(u)^T v.
Complex inner(std::span<const Complex> u, std::span<const Complex> v);
Complex inner(const CVector& u, const CVector& v);
double norm2(std::span<const Complex> v);
double norm2(const CVector& v);

struct CgReport {
  std::size_t iterations = 0;
  double final_relative_residual = 0.0;
  bool converged = true;
};

using GramOperator = std::function<CVector(const CVector&)>;

struct CgSolution {
  CVector solution;
  CgReport report;
};

/// Conjugate gradients for a Hermitian positive definite operator. Stops once
/// the true relative residual ||G y - rhs|| / ||rhs|| is at most tol; otherwise
/// returns the last iterate with converged = false.
CgSolution cg_solve(const GramOperator& gram_apply, const CVector& rhs, double tol,
                    std::size_t max_iter);

/// Result of projecting b off span(A_omega).
struct Projection {
  CVector residual;      // b - A_omega A_omega^+ b
  CVector coefficients;  // A_omega^+ b, one entry per index of omega
  CgReport report;
};

/// CG budget used by the projection routines: max(50, 4 |omega|).
std::size_t default_cg_budget(std::size_t omega_size);

/// Solves the normal equations on omega by CG and forms the residual with one
/// matrix apply. Throws RankDeficiencyError naming omega when |omega| > N or
/// the Gram matrix is numerically singular.
Projection project_out(const CMatrix& a, const IndexSet& omega, const CVector& b, double tol);

struct ProjectionResidual {
  CVector residual;
  CgReport report;
};

ProjectionResidual complement_project(const CMatrix& a, const IndexSet& omega, const CVector& b,
                                      double tol);

CVector least_squares_fit(const CMatrix& a, const IndexSet& omega, const CVector& b, double tol);

struct EigenRange {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Extreme eigenvalues of the Gram matrix A_omega* A_omega: power iteration for
/// the largest, inverse iteration (Cholesky) for the smallest.
EigenRange gram_extreme_eigs(const CMatrix& a, const IndexSet& omega);

}  // namespace tgp
