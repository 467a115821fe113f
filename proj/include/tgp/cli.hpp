#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tgp/ensembles.hpp"

namespace tgp::cli {

enum class Subcommand { recover, calibrate, compare, phase, coherence };

struct CliConfig {
  Subcommand subcommand = Subcommand::recover;
  Ensemble ensemble = Ensemble::gaussian;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  double delta = 0.0;
  double tau = 0.0;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::string out;
  std::optional<std::string> input;
  bool serial = false;
  unsigned threads = 0;

  // recover
  std::string trace;
  std::string save;
  double cg_tol = 1e-12;
  std::size_t max_iters = 0;
  // calibrate
  double grid_step = 0.003;
  std::size_t sustain = 10;
  std::optional<double> ceiling;
  // compare / phase
  std::string m_range;
  std::string deltas;
  std::string raw;
  bool timing = false;
  bool fresh_matrix = false;
  // coherence
  double kappa = 1.0;
  std::optional<double> gamma;
};

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Help text of one subcommand ("" for the top level).
std::string help_text(const std::string& subcommand);

/// Long flag names ("--tau", ...) registered for a subcommand.
std::vector<std::string> flag_names(const std::string& subcommand);

/// "1..10", "1,2,5" or "a:step:b" (inclusive) into values.
std::vector<std::size_t> parse_count_list(const std::string& text);
std::vector<double> parse_scalar_list(const std::string& text);

/// The instance `recover` synthesizes when no container is given.
ProblemInstance synthesize(const CliConfig& config);

}  // namespace tgp::cli
