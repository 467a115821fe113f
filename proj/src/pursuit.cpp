#include "tgp/pursuit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "tgp/errors.hpp"

namespace tgp {

std::string_view to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::empty_threshold: return "empty_threshold";
    case StopReason::zero_residual: return "zero_residual";
    case StopReason::iter_cap: return "iter_cap";
  }
  return "iter_cap";
}

void TgpParams::validate() const {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw ParameterError("tau must lie in (0, 1), got " + std::to_string(tau));
  }
  if (!(cg_tol > 0.0)) throw ParameterError("cg_tol must be positive");
}

CVector RecoveryResult::dense(std::size_t k) const {
  CVector x(k);
  for (std::size_t p = 0; p < omega.size(); ++p) x[omega[p]] = coefficients[p];
  return x;
}

std::vector<double> threshold(const CVector& v, double tau) {
  if (!(tau >= 0.0)) throw ParameterError("tau must be nonnegative");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(std::abs(v[i]) - tau, 0.0);
  return out;
}

IndexSet threshold_support(const CVector& v, double tau) {
  const auto t = threshold(v, tau);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] > 0.0) idx.push_back(i);
  }
  return IndexSet(std::move(idx));
}

double max_proxy(const CMatrix& a, const CVector& b) {
  const double len = norm2(b);
  if (len == 0.0) return 0.0;
  // Same arithmetic as the pursuit's proxy step so the two agree at the boundary.
  CVector corr = a.adjoint_apply(b);
  corr *= 1.0 / len;
  double best = 0.0;
  for (const auto& c : corr) best = std::max(best, std::abs(c));
  return best;
}

RecoveryResult tgp_recover(const MeasurementMatrix& a, const CVector& b, const TgpParams& params) {
  params.validate();
  const CMatrix& mat = a.matrix;
  if (b.size() != mat.rows()) {
    throw DimensionError("b has length " + std::to_string(b.size()) + ", expected N = " +
                         std::to_string(mat.rows()));
  }
  const auto start = std::chrono::steady_clock::now();
  const std::size_t cap =
      params.max_outer_iters ? params.max_outer_iters : std::min(mat.rows(), mat.cols());

  RecoveryResult result;
  if (params.record_trace) result.trace.emplace();
  const double b_norm = norm2(b);

  auto finish = [&](StopReason reason) {
    result.stop_reason = reason;
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  };

  if (b_norm == 0.0) return finish(StopReason::zero_residual);

  CVector residual = b;
  double residual_norm = b_norm;
  while (result.iterations < cap) {
    ++result.iterations;

    CVector proxy = mat.adjoint_apply(residual);
    proxy *= 1.0 / residual_norm;
    const IndexSet detected = threshold_support(proxy, params.tau);

    IterationRecord rec;
    if (result.trace) {
      for (const auto& p : proxy) rec.proxy_max = std::max(rec.proxy_max, std::abs(p));
    }

    if (detected.empty()) {
      if (result.trace) {
        rec.residual_norm = residual_norm;
        result.trace->push_back(std::move(rec));
      }
      return finish(StopReason::empty_threshold);
    }

    const IndexSet merged = result.omega.union_with(detected);
    if (merged.size() > mat.rows()) {
      throw RankDeficiencyError("support of size " + std::to_string(merged.size()) +
                                    " exceeds N = " + std::to_string(mat.rows()),
                                merged.indices());
    }
    if (result.trace) rec.new_indices = detected.minus(result.omega);
    result.omega = merged;

    Projection proj = project_out(mat, result.omega, b, params.cg_tol);
    residual = std::move(proj.residual);
    residual_norm = norm2(residual);
    result.coefficients = std::move(proj.coefficients);

    if (result.trace) {
      rec.residual_norm = residual_norm;
      rec.cg_iterations = proj.report.iterations;
      result.trace->push_back(std::move(rec));
    }

    if (residual_norm <= params.cg_tol * b_norm) return finish(StopReason::zero_residual);
  }
  return finish(StopReason::iter_cap);
}

}  // namespace tgp
