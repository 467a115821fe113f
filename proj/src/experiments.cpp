#include "tgp/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "tgp/cosamp.hpp"
#include "tgp/errors.hpp"
#include "tgp/parallel.hpp"
#include "tgp/random.hpp"

namespace tgp {

namespace {

std::string sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

void check_common(double tau, std::size_t trials, const std::vector<std::size_t>& m_values,
                  const std::vector<double>& deltas) {
  if (!(tau > 0.0 && tau < 1.0)) throw ParameterError("tau must lie in (0, 1)");
  if (trials < 1) throw ParameterError("trials must be >= 1");
  for (const auto m : m_values) {
    if (m < 1) throw ParameterError("sparsity levels must be >= 1");
  }
  for (const auto d : deltas) {
    if (!(d >= 0.0)) throw ParameterError("noise levels must be nonnegative");
  }
}

TrialRecord base_record(Algorithm alg, Ensemble ens, std::size_t n, std::size_t k, std::size_t m,
                        double delta, std::size_t trial, std::uint64_t seed) {
  TrialRecord r;
  r.algorithm = alg;
  r.ensemble = ens;
  r.n = n;
  r.k = k;
  r.m = m;
  r.delta = delta;
  r.trial = trial;
  r.seed = seed;
  return r;
}

struct TrialPair {
  TrialRecord tgp;
  TrialRecord cosamp;
};

TrialPair run_comparison_trial(const ComparisonConfig& c, std::size_t cell, std::size_t m,
                               double delta, std::size_t trial,
                               std::shared_ptr<const MeasurementMatrix> shared) {
  const std::uint64_t trial_seed = derive_seed(c.seed, "trial", {cell, trial});
  TrialPair out{base_record(Algorithm::tgp, c.ensemble, c.n, c.k, m, delta, trial, trial_seed),
                base_record(Algorithm::cosamp, c.ensemble, c.n, c.k, m, delta, trial, trial_seed)};
  try {
    auto a = shared;
    if (!a) {
      a = std::make_shared<const MeasurementMatrix>(
          generate(c.ensemble, c.n, c.k, derive_seed(c.seed, "matrix", {cell, trial})));
    }
    if (c.measure_coherence) {
      const double mu = mutual_coherence(*a);
      out.tgp.coherence = mu;
      out.cosamp.coherence = mu;
    }
    const ProblemInstance inst =
        make_instance(a, gen_signal(c.k, m, derive_seed(trial_seed, "signal")), delta,
                      derive_seed(trial_seed, "noise"));
    for (TrialRecord* r : {&out.tgp, &out.cosamp}) {
      r->noiseless_norm = inst.noiseless_norm;
      r->noise_norm = inst.noise_norm;
    }

    // Both algorithms see the identical (A, b).
    auto run = [&](TrialRecord& rec, auto&& recover) {
      try {
        const RecoveryResult res = recover();
        score_trial(rec, res.omega, inst.x.support());
        rec.stop_reason = res.stop_reason;
        rec.elapsed_seconds = c.timing ? res.elapsed_seconds : 0.0;
      } catch (const std::exception& ex) {
        rec.failed = true;
        rec.failure = ex.what();
      }
    };
    run(out.tgp, [&] {
      TgpParams p;
      p.tau = c.tau;
      p.cg_tol = c.cg_tol;
      return tgp_recover(*a, inst.b, p);
    });
    run(out.cosamp, [&] {
      CosampParams p;
      p.sparsity_m = m;
      p.iterations = m;
      p.cg_tol = c.cg_tol;
      return cosamp_recover(*a, inst.b, p);
    });
  } catch (const std::exception& ex) {
    for (TrialRecord* r : {&out.tgp, &out.cosamp}) {
      r->failed = true;
      r->failure = ex.what();
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Algorithm algorithm) noexcept {
  return algorithm == Algorithm::tgp ? "tgp" : "cosamp";
}

void score_trial(TrialRecord& rec, const IndexSet& omega, const IndexSet& truth) {
  rec.omega_size = omega.size();
  rec.true_positives = omega.intersection_with(truth).size();
  rec.false_discoveries = rec.omega_size - rec.true_positives;
  rec.exact = rec.false_discoveries == 0 && rec.true_positives == truth.size();
}

std::vector<SweepRow> aggregate(const std::vector<TrialRecord>& records,
                                const std::vector<std::size_t>& m_values,
                                const std::vector<double>& deltas, std::size_t trials) {
  std::vector<SweepRow> rows;
  for (const auto m : m_values) {
    for (const auto d : deltas) {
      for (const Algorithm alg : {Algorithm::tgp, Algorithm::cosamp}) {
        SweepRow row;
        row.algorithm = alg;
        row.m = m;
        row.delta = d;
        row.trials = trials;
        std::size_t ok = 0;
        for (const auto& r : records) {
          if (r.algorithm != alg || r.m != m || r.delta != d) continue;
          if (r.failed) {
            ++row.failures;
            continue;
          }
          ++ok;
          row.mean_elapsed_seconds += r.elapsed_seconds;
          row.mean_true_positives += static_cast<double>(r.true_positives);
          row.mean_false_discoveries += static_cast<double>(r.false_discoveries);
          row.mean_omega_size += static_cast<double>(r.omega_size);
        }
        if (ok > 0) {
          const double inv = 1.0 / static_cast<double>(ok);
          row.mean_elapsed_seconds *= inv;
          row.mean_true_positives *= inv;
          row.mean_false_discoveries *= inv;
          row.mean_omega_size *= inv;
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

SweepTable run_comparison(const ComparisonConfig& c) {
  check_common(c.tau, c.trials, c.m_values, c.deltas);
  SweepTable table;
  table.ensemble = c.ensemble;
  table.n = c.n;
  table.k = c.k;
  table.tau = c.tau;
  table.seed = c.seed;
  table.timing = c.timing;

  for (std::size_t mi = 0; mi < c.m_values.size(); ++mi) {
    for (std::size_t di = 0; di < c.deltas.size(); ++di) {
      const std::size_t cell = mi * c.deltas.size() + di;
      std::shared_ptr<const MeasurementMatrix> shared;
      if (!c.fresh_matrix_per_trial) {
        shared = std::make_shared<const MeasurementMatrix>(
            generate(c.ensemble, c.n, c.k, derive_seed(c.seed, "matrix", {cell})));
      }
      std::vector<TrialPair> pairs(c.trials);
      parallel_for(c.trials, c.threads, [&](std::size_t t) {
        pairs[t] = run_comparison_trial(c, cell, c.m_values[mi], c.deltas[di], t, shared);
      });
      for (auto& p : pairs) {
        table.records.push_back(std::move(p.tgp));
        table.records.push_back(std::move(p.cosamp));
      }
    }
  }
  table.rows = aggregate(table.records, c.m_values, c.deltas, c.trials);
  return table;
}

double phase_overlay(std::size_t n, std::size_t m) {
  if (n < 2 || m < 1) throw ParameterError("overlay needs N >= 2 and M >= 1");
  const double nn = static_cast<double>(n);
  return std::sqrt(nn) / std::sqrt(static_cast<double>(m) * std::log(nn));
}

PhaseGrid run_phase_diagram(const PhaseConfig& c) {
  check_common(c.tau, c.trials, c.m_values, c.deltas);
  PhaseGrid grid;
  grid.ensemble = c.ensemble;
  grid.n = c.n;
  grid.k = c.k;
  grid.tau = c.tau;
  grid.seed = c.seed;
  grid.trials = c.trials;
  grid.m_values = c.m_values;
  grid.deltas = c.deltas;
  grid.success.assign(c.m_values.size() * c.deltas.size(), 0.0);
  for (const auto m : c.m_values) grid.overlay.push_back(phase_overlay(c.n, m));

  for (std::size_t mi = 0; mi < c.m_values.size(); ++mi) {
    for (std::size_t di = 0; di < c.deltas.size(); ++di) {
      const std::size_t cell = mi * c.deltas.size() + di;
      const auto a = std::make_shared<const MeasurementMatrix>(
          generate(c.ensemble, c.n, c.k, derive_seed(c.seed, "phase-matrix", {cell})));
      // 1 = exact, 0 = not exact, -1 = failed
      std::vector<int> outcome(c.trials, 0);
      parallel_for(c.trials, c.threads, [&](std::size_t t) {
        const std::uint64_t ts = derive_seed(c.seed, "phase-trial", {cell, t});
        try {
          const ProblemInstance inst =
              make_instance(a, gen_unit_signal(c.k, c.m_values[mi], derive_seed(ts, "signal")),
                            c.deltas[di], derive_seed(ts, "noise"));
          TgpParams p;
          p.tau = c.tau;
          p.cg_tol = c.cg_tol;
          const RecoveryResult res = tgp_recover(*a, inst.b, p);
          outcome[t] = res.omega == inst.x.support() ? 1 : 0;
        } catch (const std::exception&) {
          outcome[t] = -1;
        }
      });
      std::size_t exact = 0;
      for (const int o : outcome) {
        if (o == 1) ++exact;
        if (o < 0) ++grid.failures;
      }
      grid.success[cell] = static_cast<double>(exact) / static_cast<double>(c.trials);
    }
  }
  return grid;
}

std::uint64_t per_iteration_flops(std::uint64_t n, std::uint64_t k, std::uint64_t nu) {
  return (2 * nu + 2) * n * k;
}

std::string sweep_csv(const SweepTable& t) {
  std::ostringstream out;
  out << "# ensemble=" << to_string(t.ensemble) << '\n'
      << "# N=" << t.n << '\n'
      << "# K=" << t.k << '\n'
      << "# tau=" << sig6(t.tau) << '\n'
      << "# seed=" << t.seed << '\n'
      << "# timing=" << (t.timing ? "on" : "off") << '\n'
      << "# cosamp=2M selection, prune to M, M iterations\n"
      << "algorithm,ensemble,N,K,M,delta,trials,mean_elapsed_s,mean_true_positives,"
         "mean_false_discoveries,mean_omega_size,failures\n";
  for (const auto& r : t.rows) {
    out << to_string(r.algorithm) << ',' << to_string(t.ensemble) << ',' << t.n << ',' << t.k
        << ',' << r.m << ',' << sig6(r.delta) << ',' << r.trials << ','
        << sig6(r.mean_elapsed_seconds) << ',' << sig6(r.mean_true_positives) << ','
        << sig6(r.mean_false_discoveries) << ',' << sig6(r.mean_omega_size) << ',' << r.failures
        << '\n';
  }
  return out.str();
}

std::string trials_csv(const SweepTable& t) {
  std::ostringstream out;
  out << "# timing=" << (t.timing ? "on" : "off") << '\n'
      << "algorithm,ensemble,N,K,M,delta,trial,seed,elapsed_s,omega_size,true_positives,"
         "false_discoveries,exact,noiseless_norm,noise_norm,stop_reason,coherence,failure\n";
  for (const auto& r : t.records) {
    std::string failure = r.failure;
    for (auto& ch : failure) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    out << to_string(r.algorithm) << ',' << to_string(r.ensemble) << ',' << r.n << ',' << r.k
        << ',' << r.m << ',' << sig6(r.delta) << ',' << r.trial << ',' << r.seed << ','
        << sig6(r.elapsed_seconds) << ',' << r.omega_size << ',' << r.true_positives << ','
        << r.false_discoveries << ',' << (r.exact ? 1 : 0) << ',' << sig6(r.noiseless_norm) << ','
        << sig6(r.noise_norm) << ',' << (r.failed ? "failed" : to_string(r.stop_reason)) << ','
        << (r.coherence ? sig6(*r.coherence) : std::string()) << ',' << failure << '\n';
  }
  return out.str();
}

std::string phase_csv(const PhaseGrid& g) {
  std::ostringstream out;
  out << "# ensemble=" << to_string(g.ensemble) << '\n'
      << "# N=" << g.n << '\n'
      << "# K=" << g.k << '\n'
      << "# tau=" << sig6(g.tau) << '\n'
      << "# trials=" << g.trials << '\n'
      << "# seed=" << g.seed << '\n'
      << "# failures=" << g.failures << '\n'
      << "M,delta,success_rate,overlay\n";
  for (std::size_t mi = 0; mi < g.m_values.size(); ++mi) {
    for (std::size_t di = 0; di < g.deltas.size(); ++di) {
      out << g.m_values[mi] << ',' << sig6(g.deltas[di]) << ',' << sig6(g.at(mi, di)) << ','
          << sig6(g.overlay[mi]) << '\n';
    }
  }
  return out.str();
}

void emit_sweep_csv(const SweepTable& table, const std::filesystem::path& path) {
  write_file(path, sweep_csv(table));
}

void emit_phase_csv(const PhaseGrid& grid, const std::filesystem::path& path) {
  write_file(path, phase_csv(grid));
}

void emit_trials_csv(const SweepTable& table, const std::filesystem::path& path) {
  write_file(path, trials_csv(table));
}

}  // namespace tgp
