#include "tgp/cli.hpp"

#include <CLI11.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "tgp/calibration.hpp"
#include "tgp/cosamp.hpp"
#include "tgp/errors.hpp"
#include "tgp/experiments.hpp"
#include "tgp/pursuit.hpp"
#include "tgp/random.hpp"
#include "tgp/theory.hpp"

namespace tgp::cli {

namespace {

constexpr std::array<const char*, 5> kSubcommands{"recover", "calibrate", "compare", "phase",
                                                  "coherence"};

std::string sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct App {
  CLI::App root{"Thresholding greedy pursuit: sparse support recovery toolkit", "tgp"};
  std::array<CliConfig, kSubcommands.size()> configs{};
  std::string ensemble_names[kSubcommands.size()];
};

void add_common(CLI::App& sub, CliConfig& c, std::string& ensemble, std::size_t n, std::size_t k) {
  ensemble = "gaussian";
  c.n = n;
  c.k = k;
  sub.add_option("--ensemble", ensemble, "Measurement ensemble: gaussian or fourier")
      ->check(CLI::IsMember({"gaussian", "fourier", "partial_fourier"}));
  sub.add_option("--n", c.n, "Number of measurements N")->check(CLI::PositiveNumber);
  sub.add_option("--k", c.k, "Signal length K (number of columns)")->check(CLI::PositiveNumber);
  sub.add_option("--seed", c.seed, "Master seed; all randomness derives from it")
      ->required()
      ->default_str("");
  sub.add_option("--threads", c.threads, "Worker threads, 0 = hardware concurrency");
  sub.add_flag("--serial", c.serial, "Run trials on one thread (uncontended timing)");
}

std::unique_ptr<App> build_app() {
  auto app = std::make_unique<App>();
  CLI::App& root = app->root;
  root.option_defaults()->always_capture_default();
  root.require_subcommand(1);
  root.set_help_all_flag("--help-all", "Help for every subcommand");

  {
    CliConfig& c = app->configs[0];
    c.subcommand = Subcommand::recover;
    auto* sub = root.add_subcommand("recover", "Recover the support of one synthesized or loaded case");
    add_common(*sub, c, app->ensemble_names[0], 400, 800);
    c.m = 3;
    sub->add_option("--m", c.m, "Sparsity M of the synthesized signal; 0 = pure unit-norm noise");
    sub->add_option("--delta", c.delta, "Relative noise level ||e|| / ||A x||")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--tau", c.tau, "Threshold tau in (0, 1)")
        ->required()
        ->default_str("")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--input", c.input, "PLAB container holding the matrix (and optionally b)");
    sub->add_option("--trace", c.trace, "Write the per-iteration trace CSV here");
    sub->add_option("--save", c.save, "Write the matrix and b as a PLAB container here");
    sub->add_option("--cg-tol", c.cg_tol, "Relative CG tolerance / zero-residual test")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", c.max_iters, "Outer iteration cap, 0 = min(N, K)");
  }
  {
    CliConfig& c = app->configs[1];
    c.subcommand = Subcommand::calibrate;
    auto* sub = root.add_subcommand("calibrate", "Calibrate tau on pure-noise inputs");
    add_common(*sub, c, app->ensemble_names[1], 1600, 3200);
    c.trials = 50;
    sub->add_option("--trials", c.trials, "Pure-noise trials per grid point")->check(CLI::PositiveNumber);
    sub->add_option("--step", c.grid_step, "Grid increment for tau")->check(CLI::PositiveNumber);
    sub->add_option("--sustain", c.sustain, "Consecutive all-empty grid points required")
        ->check(CLI::PositiveNumber);
    sub->add_option("--ceiling", c.ceiling, "Scan ceiling (default min(1, 2 tau_floor))");
    sub->add_option("--out", c.out, "Transition CSV output path");
  }
  for (std::size_t i : {std::size_t{2}, std::size_t{3}}) {
    CliConfig& c = app->configs[i];
    const bool compare = i == 2;
    c.subcommand = compare ? Subcommand::compare : Subcommand::phase;
    auto* sub = root.add_subcommand(
        kSubcommands[i], compare ? "TGP versus CoSaMP sweep over sparsity and noise level"
                                 : "Exact-recovery phase grid over sparsity and noise level");
    add_common(*sub, c, app->ensemble_names[i], compare ? 1600 : 400, compare ? 3200 : 800);
    c.trials = 20;
    c.m_range = "1..10";
    c.deltas = compare ? "0,0.5,1" : "0:0.5:8";
    sub->add_option("--m-range", c.m_range, "Sparsity levels: a..b or a,b,c");
    sub->add_option("--deltas", c.deltas, "Noise levels: a,b,c or start:step:stop");
    sub->add_option("--tau", c.tau, "Threshold tau in (0, 1)")
        ->required()
        ->default_str("")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--trials", c.trials, "Trials per (M, delta) cell")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "CSV output path");
    sub->add_option("--cg-tol", c.cg_tol, "Relative CG tolerance")->check(CLI::PositiveNumber);
    if (compare) {
      sub->add_option("--raw", c.raw, "Per-trial CSV output path");
      sub->add_flag("--timing", c.timing, "Record wall-clock times (output no longer reproducible)");
      sub->add_flag("--fresh-matrix", c.fresh_matrix, "New matrix per trial instead of per cell");
    }
  }
  {
    CliConfig& c = app->configs[4];
    c.subcommand = Subcommand::coherence;
    auto* sub = root.add_subcommand("coherence", "Mutual coherence and the parameter formulas");
    add_common(*sub, c, app->ensemble_names[4], 400, 800);
    sub->add_option("--input", c.input, "PLAB container holding the matrix");
    sub->add_option("--kappa", c.kappa, "Confidence exponent kappa > 0")->check(CLI::PositiveNumber);
    sub->add_option("--gamma", c.gamma, "Exponent gamma (default log K / log N)");
  }
  return app;
}

template <typename T>
T parse_number(const std::string& s) {
  T v{};
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) throw UsageError("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

std::string format_complex(Complex z) {
  std::string s = sig6(z.real());
  s += z.imag() < 0 ? "-" : "+";
  s += sig6(std::abs(z.imag()));
  s += "i";
  return s;
}

std::string format_support(const IndexSet& s) {
  if (s.empty()) return "empty";
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + std::to_string(s[i]);
  return out;
}

unsigned worker_count(const CliConfig& c) { return c.serial ? 1u : c.threads; }

int cmd_recover(const CliConfig& c, std::ostream& out) {
  std::shared_ptr<const MeasurementMatrix> a;
  CVector b;
  std::optional<SparseSignal> truth;
  if (c.input) {
    Container box = load_container(*c.input);
    a = std::make_shared<const MeasurementMatrix>(std::move(box.matrix));
    if (!box.observation) throw IoError("container has no observation vector: " + *c.input);
    b = std::move(*box.observation);
  } else {
    ProblemInstance inst = synthesize(c);
    a = inst.a;
    b = std::move(inst.b);
    if (inst.x.sparsity() > 0) truth = std::move(inst.x);
  }

  TgpParams params;
  params.tau = c.tau;
  params.cg_tol = c.cg_tol;
  params.max_outer_iters = c.max_iters;
  params.record_trace = !c.trace.empty();
  const RecoveryResult res = tgp_recover(*a, b, params);

  out << "support: " << format_support(res.omega) << '\n';
  out << "coefficients:";
  for (const auto& v : res.coefficients) out << ' ' << format_complex(v);
  out << '\n';
  out << "stop_reason: " << to_string(res.stop_reason) << '\n';
  out << "iterations: " << res.iterations << '\n';
  out << "elapsed_s: " << sig6(res.elapsed_seconds) << '\n';
  if (truth) {
    const IndexSet fd = res.omega.minus(truth->support());
    out << "true_support: " << format_support(truth->support()) << '\n';
    out << "false_discoveries: " << fd.size() << '\n';
    out << "exact: " << (res.omega == truth->support() ? "yes" : "no") << '\n';
  }

  if (!c.trace.empty()) {
    std::ostringstream csv;
    csv << "iteration,proxy_max,new_indices,residual_norm,cg_iterations\n";
    for (std::size_t i = 0; i < res.trace->size(); ++i) {
      const auto& r = (*res.trace)[i];
      csv << i + 1 << ',' << sig6(r.proxy_max) << ',';
      for (std::size_t j = 0; j < r.new_indices.size(); ++j) {
        csv << (j ? ";" : "") << r.new_indices[j];
      }
      csv << ',' << sig6(r.residual_norm) << ',' << r.cg_iterations << '\n';
    }
    write_text(c.trace, csv.str());
  }
  if (!c.save.empty()) save_container(c.save, *a, b);
  return kExitOk;
}

int cmd_calibrate(const CliConfig& c, std::ostream& out) {
  CalibrationConfig cfg;
  cfg.ensemble = c.ensemble;
  cfg.n = c.n;
  cfg.k = c.k;
  cfg.grid_step = c.grid_step;
  cfg.trials = c.trials;
  cfg.seed = c.seed;
  cfg.sustain = c.sustain;
  cfg.ceiling = c.ceiling;
  cfg.threads = worker_count(c);
  const CalibrationReport rep = calibrate_tau(cfg);
  if (!c.out.empty()) emit_transition_csv(rep, c.out);
  if (rep.tau_star) {
    out << "tau_star: " << sig6(*rep.tau_star) << '\n';
  } else {
    out << "tau_star: none (" << rep.diagnostic << ")\n";
  }
  out << "tau_floor: " << sig6(tau_floor(c.n, gamma_for(c.n, c.k), 1.0)) << '\n';
  out << "grid_points: " << rep.tau_grid.size() << '\n';
  return kExitOk;
}

int cmd_compare(const CliConfig& c, std::ostream& out) {
  ComparisonConfig cfg;
  cfg.ensemble = c.ensemble;
  cfg.n = c.n;
  cfg.k = c.k;
  cfg.m_values = parse_count_list(c.m_range);
  cfg.deltas = parse_scalar_list(c.deltas);
  cfg.tau = c.tau;
  cfg.trials = c.trials;
  cfg.seed = c.seed;
  cfg.cg_tol = c.cg_tol;
  cfg.fresh_matrix_per_trial = c.fresh_matrix;
  cfg.timing = c.timing;
  cfg.threads = worker_count(c);
  const SweepTable table = run_comparison(cfg);
  if (!c.out.empty()) emit_sweep_csv(table, c.out);
  if (!c.raw.empty()) emit_trials_csv(table, c.raw);
  out << "algorithm M delta mean_true_positives mean_false_discoveries mean_elapsed_s failures\n";
  for (const auto& r : table.rows) {
    out << to_string(r.algorithm) << ' ' << r.m << ' ' << sig6(r.delta) << ' '
        << sig6(r.mean_true_positives) << ' ' << sig6(r.mean_false_discoveries) << ' '
        << sig6(r.mean_elapsed_seconds) << ' ' << r.failures << '\n';
  }
  return kExitOk;
}

int cmd_phase(const CliConfig& c, std::ostream& out) {
  PhaseConfig cfg;
  cfg.ensemble = c.ensemble;
  cfg.n = c.n;
  cfg.k = c.k;
  cfg.m_values = parse_count_list(c.m_range);
  cfg.deltas = parse_scalar_list(c.deltas);
  cfg.tau = c.tau;
  cfg.trials = c.trials;
  cfg.seed = c.seed;
  cfg.cg_tol = c.cg_tol;
  cfg.threads = worker_count(c);
  const PhaseGrid grid = run_phase_diagram(cfg);
  if (!c.out.empty()) emit_phase_csv(grid, c.out);
  out << "M overlay success_rate(delta = " << c.deltas << ")\n";
  for (std::size_t mi = 0; mi < grid.m_values.size(); ++mi) {
    out << grid.m_values[mi] << ' ' << sig6(grid.overlay[mi]);
    for (std::size_t di = 0; di < grid.deltas.size(); ++di) out << ' ' << sig6(grid.at(mi, di));
    out << '\n';
  }
  return kExitOk;
}

int cmd_coherence(const CliConfig& c, std::ostream& out) {
  const MeasurementMatrix a = c.input ? load_container(*c.input).matrix
                                      : generate(c.ensemble, c.n, c.k,
                                                 derive_seed(c.seed, "matrix"));
  const std::size_t n = a.rows();
  const std::size_t k = a.cols();
  const double mu = mutual_coherence(a);
  const double gamma = c.gamma.value_or(gamma_for(n, k));
  out << "N: " << n << '\n' << "K: " << k << '\n';
  out << "mu: " << sig6(mu) << '\n';
  out << "inv_4mu: " << (mu > 0.0 ? sig6(1.0 / (4.0 * mu)) : std::string("inf")) << '\n';
  out << "gamma: " << sig6(gamma) << '\n' << "kappa: " << sig6(c.kappa) << '\n';
  out << "c0: " << sig6(c0_constant(gamma, c.kappa)) << '\n';
  out << "tau_floor: " << sig6(tau_floor(n, gamma, c.kappa)) << '\n';
  out << "sparsity_cap: " << sparsity_cap(mu, n, gamma, c.kappa) << '\n';
  out << "tau_theorem3: " << sig6(tau_theorem3(mu, n, gamma, c.kappa)) << '\n';
  return kExitOk;
}

}  // namespace

std::vector<std::size_t> parse_count_list(const std::string& text) {
  std::vector<std::size_t> values;
  if (text.empty()) return values;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const auto lo = parse_number<std::size_t>(text.substr(0, dots));
    const auto hi = parse_number<std::size_t>(text.substr(dots + 2));
    if (hi < lo) throw UsageError("empty range '" + text + "'");
    for (std::size_t v = lo; v <= hi; ++v) values.push_back(v);
    return values;
  }
  for (const auto& part : split(text, ',')) values.push_back(parse_number<std::size_t>(part));
  return values;
}

std::vector<double> parse_scalar_list(const std::string& text) {
  std::vector<double> values;
  if (text.empty()) return values;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("expected start:step:stop, got '" + text + "'");
    const double start = parse_number<double>(parts[0]);
    const double step = parse_number<double>(parts[1]);
    const double stop = parse_number<double>(parts[2]);
    if (!(step > 0.0) || stop < start) throw UsageError("bad range '" + text + "'");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    for (std::size_t i = 0; i <= count; ++i) values.push_back(start + static_cast<double>(i) * step);
    return values;
  }
  for (const auto& part : split(text, ',')) values.push_back(parse_number<double>(part));
  return values;
}

ProblemInstance synthesize(const CliConfig& c) {
  auto a = std::make_shared<const MeasurementMatrix>(
      generate(c.ensemble, c.n, c.k, derive_seed(c.seed, "matrix")));
  if (c.m == 0) return make_noise_instance(std::move(a), 1.0, derive_seed(c.seed, "noise"));
  return make_instance(std::move(a), gen_signal(c.k, c.m, derive_seed(c.seed, "signal")), c.delta,
                       derive_seed(c.seed, "noise"));
}

std::string help_text(const std::string& subcommand) {
  auto app = build_app();
  if (subcommand.empty()) return app->root.help();
  return app->root.get_subcommand(subcommand)->help(app->root.get_name());
}

std::vector<std::string> flag_names(const std::string& subcommand) {
  auto app = build_app();
  std::vector<std::string> names;
  for (const CLI::Option* opt : app->root.get_subcommand(subcommand)->get_options()) {
    for (const auto& l : opt->get_lnames()) names.push_back("--" + l);
  }
  return names;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto app = build_app();
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app->root.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app->root.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app->root.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app->root.exit(e, out, err);
    return kExitUsage;
  }

  std::size_t chosen = 0;
  for (; chosen < kSubcommands.size(); ++chosen) {
    if (app->root.got_subcommand(kSubcommands[chosen])) break;
  }
  CliConfig config = app->configs[chosen];

  try {
    config.ensemble = parse_ensemble(app->ensemble_names[chosen]);
    switch (config.subcommand) {
      case Subcommand::recover: return cmd_recover(config, out);
      case Subcommand::calibrate: return cmd_calibrate(config, out);
      case Subcommand::compare: return cmd_compare(config, out);
      case Subcommand::phase: return cmd_phase(config, out);
      case Subcommand::coherence: return cmd_coherence(config, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RankDeficiencyError& e) {
    err << "error: " << e.what() << "; omega = " << IndexSet(e.omega()).to_string() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}

}  // namespace tgp::cli
