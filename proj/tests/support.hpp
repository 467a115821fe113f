#pragma once

#include <Eigen/Dense>

#include <boost/random/normal_distribution.hpp>

#include "tgp/ensembles.hpp"
#include "tgp/linalg.hpp"
#include "tgp/random.hpp"

namespace tgp::testing {

using EMatrix = Eigen::MatrixXcd;
using EVector = Eigen::VectorXcd;

inline EMatrix to_eigen(const CMatrix& a) {
  EMatrix m(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) m(i, j) = a(i, j);
  }
  return m;
}

inline EVector to_eigen(const CVector& v) {
  EVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i];
  return out;
}

inline CVector from_eigen(const EVector& v) {
  CVector out(static_cast<std::size_t>(v.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v(i);
  return out;
}

inline EMatrix columns(const EMatrix& a, const IndexSet& omega) {
  EMatrix out(a.rows(), static_cast<Eigen::Index>(omega.size()));
  for (std::size_t p = 0; p < omega.size(); ++p) out.col(p) = a.col(omega[p]);
  return out;
}

inline CVector random_vector(std::size_t n, std::uint64_t seed) {
  Philox4x64 eng(seed);
  boost::random::normal_distribution<double> g;
  CVector v(n);
  for (auto& x : v) x = Complex(g(eng), g(eng));
  return v;
}

/// Unitary n x n matrix: Q factor of a seeded complex Gaussian matrix.
inline CMatrix random_unitary(std::size_t n, std::uint64_t seed) {
  Philox4x64 eng(seed);
  boost::random::normal_distribution<double> g;
  EMatrix z(n, n);
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, j) = Complex(g(eng), g(eng));
  }
  const EMatrix q = Eigen::HouseholderQR<EMatrix>(z).householderQ();
  CMatrix out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) out(i, j) = q(i, j);
  }
  return out;
}

inline double brute_coherence(const CMatrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.cols(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      Complex s{};
      for (std::size_t r = 0; r < a.rows(); ++r) s += std::conj(a(r, i)) * a(r, j);
      best = std::max(best, std::abs(s));
    }
  }
  return best;
}

/// TGP on a square unitary dictionary, run on the coefficients c = Q* b.
/// Projection removes detected coordinates, so each pass thresholds the
/// remaining |c_i| against tau times the norm of what is left.
inline IndexSet orthonormal_tgp_oracle(const CVector& c, double tau, double cg_tol = 1e-12) {
  double total = 0.0;
  for (const auto& v : c) total += std::norm(v);
  const double stop = cg_tol * std::sqrt(total);
  std::vector<bool> taken(c.size(), false);
  std::vector<std::size_t> found;
  while (true) {
    double rest = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!taken[i]) rest += std::norm(c[i]);
    }
    rest = std::sqrt(rest);
    if (!found.empty() && rest <= stop) break;
    std::vector<std::size_t> fresh;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!taken[i] && std::abs(c[i]) > tau * rest) fresh.push_back(i);
    }
    if (fresh.empty()) break;
    for (auto i : fresh) {
      taken[i] = true;
      found.push_back(i);
    }
  }
  return IndexSet(found);
}

}  // namespace tgp::testing
