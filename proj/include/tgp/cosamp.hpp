#pragma once

// Compressive sampling matching pursuit, the baseline TGP is compared with.
// Each iteration: proxy A* r, take the 2M largest magnitudes, merge with the
// current support, least-squares fit on the merged set, keep the M largest
// fitted coefficients, and recompute the residual from that pruned estimate.

#include "tgp/ensembles.hpp"
#include "tgp/pursuit.hpp"

namespace tgp {

struct CosampParams {
  std::size_t sparsity_m = 1;
  std::size_t iterations = 1;
  double cg_tol = 1e-12;

  void validate(std::size_t n) const;
};

/// Indices of the `count` largest |v_i|; ties go to the lower index.
IndexSet largest_magnitudes(const CVector& v, std::size_t count);

/// iterations = 0 returns the empty support. Requires 3M <= N.
RecoveryResult cosamp_recover(const MeasurementMatrix& a, const CVector& b,
                              const CosampParams& params);

}  // namespace tgp
