#pragma once

// Monte-Carlo harness: TGP versus CoSaMP sweeps over (M, delta), exact-recovery
// phase grids, and the CSV files they are reported through.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tgp/ensembles.hpp"
#include "tgp/pursuit.hpp"

namespace tgp {

enum class Algorithm { tgp, cosamp };
std::string_view to_string(Algorithm algorithm) noexcept;

struct TrialRecord {
  Algorithm algorithm = Algorithm::tgp;
  Ensemble ensemble = Ensemble::gaussian;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  double delta = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;  // signal/noise seed of this trial
  double elapsed_seconds = 0.0;
  std::size_t omega_size = 0;
  std::size_t true_positives = 0;
  std::size_t false_discoveries = 0;
  bool exact = false;
  double noiseless_norm = 0.0;
  double noise_norm = 0.0;
  StopReason stop_reason = StopReason::empty_threshold;
  std::optional<double> coherence;  // mu of the trial's matrix, when measured
  bool failed = false;
  std::string failure;
};

/// Fills the support metrics of `rec` from a recovery and the true support.
void score_trial(TrialRecord& rec, const IndexSet& omega, const IndexSet& truth);

struct SweepRow {
  Algorithm algorithm = Algorithm::tgp;
  std::size_t m = 0;
  double delta = 0.0;
  std::size_t trials = 0;  // configured trials in the cell
  std::size_t failures = 0;
  double mean_elapsed_seconds = 0.0;
  double mean_true_positives = 0.0;
  double mean_false_discoveries = 0.0;
  double mean_omega_size = 0.0;
};

struct SweepTable {
  Ensemble ensemble = Ensemble::gaussian;
  std::size_t n = 0;
  std::size_t k = 0;
  double tau = 0.0;
  std::uint64_t seed = 0;
  bool timing = true;
  std::vector<SweepRow> rows;        // M-major, then delta, then tgp before cosamp
  std::vector<TrialRecord> records;  // raw trials in the same order
};

struct ComparisonConfig {
  Ensemble ensemble = Ensemble::gaussian;
  std::size_t n = 1600;
  std::size_t k = 3200;
  std::vector<std::size_t> m_values{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> deltas{0.0, 0.5, 1.0};
  double tau = 0.0;
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  double cg_tol = 1e-12;
  /// Draw a new matrix for every trial instead of one per (M, delta) cell.
  bool fresh_matrix_per_trial = false;
  /// Record mu of each trial's matrix in TrialRecord::coherence.
  bool measure_coherence = false;
  /// Keep wall-clock times; off writes zeros so output is reproducible.
  bool timing = true;
  unsigned threads = 0;
};

/// Means over the non-failed records of each cell; `rows` order as in SweepTable.
std::vector<SweepRow> aggregate(const std::vector<TrialRecord>& records,
                                const std::vector<std::size_t>& m_values,
                                const std::vector<double>& deltas, std::size_t trials);

SweepTable run_comparison(const ComparisonConfig& config);

struct PhaseConfig {
  Ensemble ensemble = Ensemble::gaussian;
  std::size_t n = 400;
  std::size_t k = 800;
  std::vector<std::size_t> m_values{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> deltas;
  double tau = 0.0;
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  double cg_tol = 1e-12;
  unsigned threads = 0;
};

struct PhaseGrid {
  Ensemble ensemble = Ensemble::gaussian;
  std::size_t n = 0;
  std::size_t k = 0;
  double tau = 0.0;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::vector<std::size_t> m_values;
  std::vector<double> deltas;
  std::vector<double> success;  // success[i * deltas.size() + j] for (m_values[i], deltas[j])
  std::vector<double> overlay;  // per M
  std::size_t failures = 0;

  double at(std::size_t mi, std::size_t di) const { return success[mi * deltas.size() + di]; }
};

/// sqrt(N) / sqrt(M log N).
double phase_overlay(std::size_t n, std::size_t m);

PhaseGrid run_phase_diagram(const PhaseConfig& config);

/// Dominant per-iteration cost (2 nu + 2) N K of the pursuit.
std::uint64_t per_iteration_flops(std::uint64_t n, std::uint64_t k, std::uint64_t nu);

std::string sweep_csv(const SweepTable& table);
std::string phase_csv(const PhaseGrid& grid);
std::string trials_csv(const SweepTable& table);

void emit_sweep_csv(const SweepTable& table, const std::filesystem::path& path);
void emit_phase_csv(const PhaseGrid& grid, const std::filesystem::path& path);
void emit_trials_csv(const SweepTable& table, const std::filesystem::path& path);

}  // namespace tgp
