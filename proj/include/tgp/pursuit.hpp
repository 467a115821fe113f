#pragma once

// Thresholding greedy pursuit: detect every column whose normalized
// correlation with the current residual exceeds tau, project those columns
// out of b, and repeat until nothing new crosses the threshold.

#include <optional>
#include <string_view>
#include <vector>

#include "tgp/ensembles.hpp"
#include "tgp/linalg.hpp"

namespace tgp {

enum class StopReason { empty_threshold, zero_residual, iter_cap };

std::string_view to_string(StopReason reason) noexcept;

struct TgpParams {
  double tau = 0.0;
  double cg_tol = 1e-12;
  /// 0 selects the default cap min(N, K).
  std::size_t max_outer_iters = 0;
  bool record_trace = false;

  void validate() const;
};

struct IterationRecord {
  double proxy_max = 0.0;          // max_i |A* b^n|_i / ||b^n||
  IndexSet new_indices;            // detected in this pass and not seen before
  double residual_norm = 0.0;      // ||b^{n+1}|| after projection (||b^n|| on a break)
  std::size_t cg_iterations = 0;   // achieved nu
};

using IterationTrace = std::vector<IterationRecord>;

struct RecoveryResult {
  IndexSet omega;
  CVector coefficients;  // A_omega^+ b, aligned with omega; empty when omega is
  StopReason stop_reason = StopReason::empty_threshold;
  std::size_t iterations = 0;
  double elapsed_seconds = 0.0;
  std::optional<IterationTrace> trace;

  /// Coefficients scattered into a length-K vector.
  CVector dense(std::size_t k) const;
};

/// max(|v_i| - tau, 0) elementwise.
std::vector<double> threshold(const CVector& v, double tau);

/// {i : |v_i| > tau}.
IndexSet threshold_support(const CVector& v, double tau);

/// max_i |<a_i, b>| / ||b||: the first proxy's peak. The pursuit returns the
/// empty set exactly when this is <= tau. Zero for b = 0.
double max_proxy(const CMatrix& a, const CVector& b);

RecoveryResult tgp_recover(const MeasurementMatrix& a, const CVector& b, const TgpParams& params);

}  // namespace tgp
