#include "tgp/calibration.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "tgp/errors.hpp"
#include "tgp/parallel.hpp"
#include "tgp/pursuit.hpp"
#include "tgp/random.hpp"
#include "tgp/theory.hpp"

namespace tgp {

namespace {

std::string sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void validate(const CalibrationConfig& c) {
  if (!(c.grid_step > 0.0)) throw ParameterError("grid_step must be positive");
  if (c.trials < 1) throw ParameterError("trials must be >= 1");
  if (c.sustain < 1) throw ParameterError("sustain must be >= 1");
  if (c.ensemble == Ensemble::user) {
    throw ParameterError("calibration regenerates the matrix per trial; pick a generated ensemble");
  }
  if (c.n < 2 || c.k < c.n) throw ParameterError("calibration needs 2 <= N <= K");
}

}  // namespace

double default_calibration_ceiling(std::size_t n, std::size_t k) {
  return std::min(1.0, 2.0 * tau_floor(n, gamma_for(n, k), 1.0));
}

bool calibration_trial(const CalibrationConfig& config, std::size_t grid_index, std::size_t trial,
                       double tau) {
  const auto a = generate(config.ensemble, config.n, config.k,
                          derive_seed(config.seed, "calibration-matrix", {grid_index, trial}));
  const CVector b =
      sample_sphere(config.n, derive_seed(config.seed, "calibration-noise", {grid_index, trial}));
  // The first pass detects nothing iff the peak normalized correlation is <= tau,
  // and the pursuit returns the empty set iff its first pass detects nothing.
  return max_proxy(a.matrix, b) <= tau;
}

CalibrationReport calibrate_tau(const CalibrationConfig& config) {
  validate(config);
  const double ceiling = config.ceiling.value_or(default_calibration_ceiling(config.n, config.k));

  CalibrationReport report;
  report.trials_per_point = config.trials;
  report.ensemble = config.ensemble;
  report.n = config.n;
  report.k = config.k;
  report.seed = config.seed;
  report.grid_step = config.grid_step;

  std::size_t run = 0;
  std::size_t run_start = 0;
  std::vector<char> success(config.trials);
  for (std::size_t i = 0;; ++i) {
    const double tau = static_cast<double>(i) * config.grid_step;
    if (tau > ceiling + 1e-12) break;

    parallel_for(config.trials, config.threads,
                 [&](std::size_t t) { success[t] = calibration_trial(config, i, t, tau); });
    const auto hits = static_cast<std::size_t>(std::count(success.begin(), success.end(), 1));
    report.tau_grid.push_back(tau);
    report.success_rate.push_back(static_cast<double>(hits) / static_cast<double>(config.trials));

    if (hits == config.trials) {
      if (run++ == 0) run_start = report.tau_grid.size() - 1;
      if (run == config.sustain) {
        report.tau_star = report.tau_grid[run_start];
        return report;
      }
    } else {
      run = 0;
    }
  }

  // A run still open at tau = 1 is sustained: nothing can survive a unit threshold.
  if (run > 0 && ceiling >= 1.0) {
    report.tau_star = report.tau_grid[run_start];
    return report;
  }
  std::ostringstream msg;
  msg << "no run of " << config.sustain << " grid points with success rate 1 up to tau = "
      << sig6(ceiling);
  report.diagnostic = msg.str();
  return report;
}

std::string transition_csv(const CalibrationReport& report) {
  std::ostringstream out;
  out << "# ensemble=" << to_string(report.ensemble) << '\n'
      << "# N=" << report.n << '\n'
      << "# K=" << report.k << '\n'
      << "# trials=" << report.trials_per_point << '\n'
      << "# seed=" << report.seed << '\n'
      << "# grid_step=" << sig6(report.grid_step) << '\n'
      << "# tau_star=" << (report.tau_star ? sig6(*report.tau_star) : std::string("none")) << '\n'
      << "tau,success_rate\n";
  for (std::size_t i = 0; i < report.tau_grid.size(); ++i) {
    out << sig6(report.tau_grid[i]) << ',' << sig6(report.success_rate[i]) << '\n';
  }
  return out.str();
}

void emit_transition_csv(const CalibrationReport& report, const std::filesystem::path& path) {
  if (report.tau_grid.size() != report.success_rate.size()) {
    throw ParameterError("malformed calibration report");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << transition_csv(report);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace tgp
