#pragma once

// Empirical threshold calibration: scan tau upward over a grid, feed pure
// noise to the pursuit at each grid point, and report the smallest tau from
// which it keeps returning the empty set.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tgp/ensembles.hpp"

namespace tgp {

struct CalibrationConfig {
  Ensemble ensemble = Ensemble::gaussian;
  std::size_t n = 1600;
  std::size_t k = 3200;
  double grid_step = 0.003;
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  /// Consecutive all-success grid points needed before tau_star is declared.
  std::size_t sustain = 10;
  /// Scan ceiling; unset means min(1, 2 tau_floor(N, log K / log N, 1)).
  std::optional<double> ceiling;
  unsigned threads = 0;
};

struct CalibrationReport {
  std::vector<double> tau_grid;
  std::vector<double> success_rate;
  std::optional<double> tau_star;
  std::size_t trials_per_point = 0;
  Ensemble ensemble = Ensemble::gaussian;
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  double grid_step = 0.0;
  std::string diagnostic;
};

/// Default scan ceiling for (N, K).
double default_calibration_ceiling(std::size_t n, std::size_t k);

/// Whether one pure-noise trial (fresh matrix and sphere noise) at grid index
/// `grid_index` and trial `trial` yields the empty support at `tau`.
bool calibration_trial(const CalibrationConfig& config, std::size_t grid_index, std::size_t trial,
                       double tau);

CalibrationReport calibrate_tau(const CalibrationConfig& config);

/// `# key=value` metadata, then `tau,success_rate` rows with 6 significant digits.
void emit_transition_csv(const CalibrationReport& report, const std::filesystem::path& path);
std::string transition_csv(const CalibrationReport& report);

}  // namespace tgp
