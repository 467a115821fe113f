#pragma once

// Closed-form parameter rules for thresholding greedy pursuit. All logarithms
// are natural.

#include <cstddef>

namespace tgp {

/// c0 = sqrt(2 (gamma + kappa)); gamma >= 1, kappa > 0.
double c0_constant(double gamma, double kappa);

/// gamma such that K = N^gamma.
double gamma_for(std::size_t n, std::size_t k);

/// Smallest threshold that rules out detections on pure noise:
/// c0 sqrt(log N) / sqrt(N).
double tau_floor(std::size_t n, double gamma, double kappa);

/// sqrt((4/3) (mu/4 + c0^2 log N / N)).
double tau_theorem3(double mu, std::size_t n, double gamma, double kappa);

/// floor(min{1/(4 mu), sqrt(N) / (4 c0 sqrt(log N))}); with mu = 0 only the
/// second bound applies.
std::size_t sparsity_cap(double mu, std::size_t n, double gamma, double kappa);

/// Upper end 1/sqrt(6M) of the threshold range on which noise_tolerance is defined.
double max_admissible_tau(std::size_t m);

/// f(M, tau) = F / G with
///   F = (2/3) sqrt((1 - tau^2) / tau^2) - (sqrt(5M/4 - 7/4 + 1/(2M)) + sqrt(M/12))
///   G = (4/3) sqrt(1 - tau^2) + 1.
/// Exact support recovery holds while ||e|| <= f min |x_i|.
/// Throws ParameterError unless 0 < tau <= 1/sqrt(6M).
double noise_tolerance(std::size_t m, double tau);

/// The same closed form without the admissibility check (requires 0 < tau < 1);
/// used to tabulate f outside the range where F > 0 is guaranteed.
double noise_tolerance_formula(std::size_t m, double tau);

}  // namespace tgp
