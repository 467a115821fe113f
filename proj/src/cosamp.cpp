#include "tgp/cosamp.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <string>

#include "tgp/errors.hpp"

namespace tgp {

void CosampParams::validate(std::size_t n) const {
  if (sparsity_m < 1) throw ParameterError("CoSaMP sparsity M must be >= 1");
  if (3 * sparsity_m > n) {
    throw ParameterError("CoSaMP needs 3M <= N (M = " + std::to_string(sparsity_m) +
                         ", N = " + std::to_string(n) + ")");
  }
  if (!(cg_tol > 0.0)) throw ParameterError("cg_tol must be positive");
}

IndexSet largest_magnitudes(const CVector& v, std::size_t count) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  count = std::min(count, order.size());
  std::vector<double> mag(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) mag[i] = std::abs(v[i]);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return mag[a] > mag[b] || (mag[a] == mag[b] && a < b);
                    });
  order.resize(count);
  return IndexSet(std::move(order));
}

RecoveryResult cosamp_recover(const MeasurementMatrix& a, const CVector& b,
                              const CosampParams& params) {
  const CMatrix& mat = a.matrix;
  params.validate(mat.rows());
  if (b.size() != mat.rows()) throw DimensionError("b length differs from N");
  const auto start = std::chrono::steady_clock::now();

  RecoveryResult result;
  result.stop_reason = StopReason::iter_cap;
  const double b_norm = norm2(b);
  CVector residual = b;
  const std::size_t m = params.sparsity_m;

  auto finish = [&](StopReason reason) {
    result.stop_reason = reason;
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  };

  if (b_norm == 0.0) return finish(StopReason::zero_residual);

  while (result.iterations < params.iterations) {
    ++result.iterations;
    const CVector proxy = mat.adjoint_apply(residual);
    const IndexSet merged = largest_magnitudes(proxy, 2 * m).union_with(result.omega);

    const CVector fit = project_out(mat, merged, b, params.cg_tol).coefficients;
    const IndexSet keep_pos = largest_magnitudes(fit, m);  // positions within `merged`

    std::vector<std::size_t> support;
    support.reserve(keep_pos.size());
    for (const std::size_t p : keep_pos) support.push_back(merged[p]);
    result.omega = IndexSet(support);

    // keep_pos and the mapped support are both ascending, so the coefficient
    // order lines up with omega.
    CVector coeffs(keep_pos.size());
    for (std::size_t q = 0; q < keep_pos.size(); ++q) coeffs[q] = fit[keep_pos[q]];
    result.coefficients = std::move(coeffs);

    residual = b - mat.apply_columns(result.omega, result.coefficients);
    if (norm2(residual) <= params.cg_tol * b_norm) return finish(StopReason::zero_residual);
  }
  return finish(StopReason::iter_cap);
}

}  // namespace tgp
