#include "tgp/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tgp/errors.hpp"

namespace tgp {

double c0_constant(double gamma, double kappa) {
  if (!(gamma >= 1.0)) throw ParameterError("gamma must be >= 1, got " + std::to_string(gamma));
  if (!(kappa > 0.0)) throw ParameterError("kappa must be > 0, got " + std::to_string(kappa));
  return std::sqrt(2.0 * (gamma + kappa));
}

double gamma_for(std::size_t n, std::size_t k) {
  if (n < 2 || k < n) throw ParameterError("gamma = log K / log N needs 2 <= N <= K");
  return std::log(static_cast<double>(k)) / std::log(static_cast<double>(n));
}

double tau_floor(std::size_t n, double gamma, double kappa) {
  if (n < 2) throw ParameterError("tau_floor needs N >= 2");
  const double nn = static_cast<double>(n);
  return c0_constant(gamma, kappa) * std::sqrt(std::log(nn)) / std::sqrt(nn);
}

double tau_theorem3(double mu, std::size_t n, double gamma, double kappa) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw ParameterError("mu must lie in [0, 1]");
  if (n < 2) throw ParameterError("tau_theorem3 needs N >= 2");
  const double nn = static_cast<double>(n);
  const double c0 = c0_constant(gamma, kappa);
  return std::sqrt(4.0 / 3.0 * (mu / 4.0 + c0 * c0 * std::log(nn) / nn));
}

std::size_t sparsity_cap(double mu, std::size_t n, double gamma, double kappa) {
  if (!(mu >= 0.0)) throw ParameterError("mu must be nonnegative");
  if (n < 2) throw ParameterError("sparsity_cap needs N >= 2");
  const double nn = static_cast<double>(n);
  double cap = std::sqrt(nn) / (4.0 * c0_constant(gamma, kappa) * std::sqrt(std::log(nn)));
  if (mu > 0.0) cap = std::min(cap, 1.0 / (4.0 * mu));
  return static_cast<std::size_t>(std::floor(cap));
}

double max_admissible_tau(std::size_t m) {
  if (m < 1) throw ParameterError("M must be >= 1");
  return 1.0 / std::sqrt(6.0 * static_cast<double>(m));
}

double noise_tolerance_formula(std::size_t m, double tau) {
  if (m < 1) throw ParameterError("M must be >= 1");
  if (!(tau > 0.0 && tau < 1.0)) throw ParameterError("tau must lie in (0, 1)");
  const double mm = static_cast<double>(m);
  const double t2 = tau * tau;
  const double f = 2.0 / 3.0 * std::sqrt((1.0 - t2) / t2) -
                   (std::sqrt(1.25 * mm - 1.75 + 0.5 / mm) + std::sqrt(mm / 12.0));
  const double g = 4.0 / 3.0 * std::sqrt(1.0 - t2) + 1.0;
  return f / g;
}

double noise_tolerance(std::size_t m, double tau) {
  const double upper = max_admissible_tau(m);
  if (!(tau > 0.0 && tau <= upper)) {
    throw ParameterError("tau = " + std::to_string(tau) + " outside the admissible interval (0, " +
                         std::to_string(upper) + "] for M = " + std::to_string(m));
  }
  return noise_tolerance_formula(m, tau);
}

}  // namespace tgp
