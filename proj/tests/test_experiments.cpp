#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tgp/errors.hpp"
#include "tgp/experiments.hpp"

namespace tgp {
namespace {

ComparisonConfig small_comparison() {
  ComparisonConfig c;
  c.n = 60;
  c.k = 120;
  c.m_values = {1, 3};
  c.deltas = {0.0, 1.0};
  c.tau = 0.45;
  c.trials = 4;
  c.seed = 11;
  c.timing = false;
  c.threads = 1;
  return c;
}

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    out.push_back(line);
  }
  return out;
}

TEST(PerIterationFlops, Values) {
  EXPECT_EQ(per_iteration_flops(1, 1, 1), 4u);
  EXPECT_EQ(per_iteration_flops(1600, 3200, 10), 112640000u);
  EXPECT_EQ(per_iteration_flops(1600, 6400, 10), 2 * per_iteration_flops(1600, 3200, 10));
}

TEST(PhaseOverlay, Values) {
  EXPECT_NEAR(phase_overlay(400, 4), 4.08538982653635, 1e-12);
  EXPECT_NEAR(phase_overlay(400, 1), 2 * phase_overlay(400, 4), 1e-12);
  EXPECT_THROW(phase_overlay(400, 0), ParameterError);
}

TEST(ScoreTrial, SupportMetrics) {
  TrialRecord r;
  score_trial(r, IndexSet{1, 2, 9}, IndexSet{1, 2, 3});
  EXPECT_EQ(r.omega_size, 3u);
  EXPECT_EQ(r.true_positives, 2u);
  EXPECT_EQ(r.false_discoveries, 1u);
  EXPECT_FALSE(r.exact);
  score_trial(r, IndexSet{1, 2, 3}, IndexSet{1, 2, 3});
  EXPECT_TRUE(r.exact);
}

TEST(RunComparison, AggregatesMatchBruteForce) {
  const SweepTable t = run_comparison(small_comparison());
  ASSERT_EQ(t.rows.size(), 2u * 2u * 2u);
  ASSERT_EQ(t.records.size(), 2u * 2u * 4u * 2u);
  for (const SweepRow& row : t.rows) {
    double tp = 0.0;
    double fd = 0.0;
    double om = 0.0;
    std::size_t n = 0;
    for (const TrialRecord& r : t.records) {
      if (r.algorithm != row.algorithm || r.m != row.m || r.delta != row.delta || r.failed) continue;
      tp += r.true_positives;
      fd += r.false_discoveries;
      om += r.omega_size;
      ++n;
    }
    ASSERT_EQ(n + row.failures, row.trials);
    EXPECT_DOUBLE_EQ(row.mean_true_positives, tp / n);
    EXPECT_DOUBLE_EQ(row.mean_false_discoveries, fd / n);
    EXPECT_DOUBLE_EQ(row.mean_omega_size, om / n);
    EXPECT_EQ(row.mean_elapsed_seconds, 0.0);
  }
  // Row order: M-major, then delta, then tgp before cosamp.
  EXPECT_EQ(t.rows[0].algorithm, Algorithm::tgp);
  EXPECT_EQ(t.rows[1].algorithm, Algorithm::cosamp);
  EXPECT_EQ(t.rows[2].delta, 1.0);
  EXPECT_EQ(t.rows[4].m, 3u);
}

TEST(RunComparison, BothAlgorithmsSeeTheSameInstance) {
  const SweepTable t = run_comparison(small_comparison());
  for (std::size_t i = 0; i < t.records.size(); i += 2) {
    const TrialRecord& a = t.records[i];
    const TrialRecord& b = t.records[i + 1];
    EXPECT_EQ(a.algorithm, Algorithm::tgp);
    EXPECT_EQ(b.algorithm, Algorithm::cosamp);
    EXPECT_EQ(a.seed, b.seed);
    EXPECT_EQ(a.noiseless_norm, b.noiseless_norm);
    EXPECT_EQ(a.noise_norm, b.noise_norm);
  }
}

TEST(RunComparison, DeterministicAcrossThreadsAndRuns) {
  ComparisonConfig c = small_comparison();
  const std::string first = sweep_csv(run_comparison(c));
  EXPECT_EQ(first, sweep_csv(run_comparison(c)));
  c.threads = 3;
  EXPECT_EQ(first, sweep_csv(run_comparison(c)));
  EXPECT_EQ(trials_csv(run_comparison(c)), trials_csv(run_comparison(small_comparison())));
}

TEST(RunComparison, OrthonormalSmokeHasPositiveTimes) {
  // A square partial Fourier matrix is the unitary DFT.
  ComparisonConfig c = small_comparison();
  c.ensemble = Ensemble::partial_fourier;
  c.n = c.k = 32;
  c.m_values = {1};
  c.deltas = {0.0};
  c.trials = 1;
  c.timing = true;
  const SweepTable t = run_comparison(c);
  ASSERT_EQ(t.rows.size(), 2u);
  for (const SweepRow& row : t.rows) {
    EXPECT_EQ(row.mean_true_positives, 1.0);
    EXPECT_EQ(row.mean_false_discoveries, 0.0);
    EXPECT_GT(row.mean_elapsed_seconds, 0.0);
    EXPECT_TRUE(std::isfinite(row.mean_elapsed_seconds));
  }
}

TEST(RunComparison, FailedTrialsAreTaggedNotFatal) {
  ComparisonConfig c = small_comparison();
  c.m_values = {25};  // 3M > N: CoSaMP refuses every trial
  c.deltas = {0.0};
  const SweepTable t = run_comparison(c);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0].failures, 0u);
  EXPECT_EQ(t.rows[1].failures, c.trials);
  EXPECT_NE(trials_csv(t).find("failed"), std::string::npos);
}

TEST(RunComparison, CoherenceRecordedWhenRequested) {
  ComparisonConfig c = small_comparison();
  c.measure_coherence = true;
  c.fresh_matrix_per_trial = true;
  const SweepTable t = run_comparison(c);
  for (const auto& r : t.records) {
    ASSERT_TRUE(r.coherence.has_value());
    EXPECT_GT(*r.coherence, 0.0);
    EXPECT_LT(*r.coherence, 1.0);
  }
}

TEST(SweepCsv, HeaderAndRowCounts) {
  ComparisonConfig c = small_comparison();
  c.m_values = {};
  const std::string empty = sweep_csv(run_comparison(c));
  EXPECT_TRUE(data_lines(empty).empty());
  EXPECT_NE(empty.find("algorithm,ensemble,N,K,M,delta,trials,mean_elapsed_s,mean_true_positives,"
                       "mean_false_discoveries,mean_omega_size,failures\n"),
            std::string::npos);

  c = small_comparison();
  c.m_values = {2};
  c.deltas = {0.5};
  EXPECT_EQ(data_lines(sweep_csv(run_comparison(c))).size(), 2u);

  c = small_comparison();
  c.m_values = {1, 2, 3};
  c.deltas = {0.0, 0.5, 1.0};
  c.trials = 1;
  EXPECT_EQ(data_lines(sweep_csv(run_comparison(c))).size(), 3u * 3u * 2u);
}

PhaseConfig small_phase() {
  PhaseConfig c;
  c.n = 60;
  c.k = 120;
  c.m_values = {1, 2};
  c.deltas = {0.0, 0.5, 20.0};
  c.tau = 0.45;
  c.trials = 6;
  c.seed = 5;
  c.threads = 1;
  return c;
}

TEST(RunPhaseDiagram, GridShapeAndExtremes) {
  const PhaseGrid g = run_phase_diagram(small_phase());
  ASSERT_EQ(g.success.size(), 6u);
  EXPECT_EQ(g.at(0, 0), 1.0);  // a single noiseless spike is always found
  EXPECT_EQ(g.at(0, 2), 0.0);  // noise twenty times the signal swamps it
  EXPECT_EQ(g.failures, 0u);
  EXPECT_NEAR(g.overlay[0], phase_overlay(60, 1), 1e-15);
  for (double v : g.success) {
    EXPECT_NEAR(v * 6, std::round(v * 6), 1e-12);
  }
}

TEST(PhaseCsv, RowsAndDeterminism) {
  PhaseConfig c = small_phase();
  const std::string csv = phase_csv(run_phase_diagram(c));
  EXPECT_EQ(data_lines(csv).size(), 6u);
  EXPECT_NE(csv.find("M,delta,success_rate,overlay\n"), std::string::npos);
  c.threads = 4;
  EXPECT_EQ(csv, phase_csv(run_phase_diagram(c)));

  c.m_values = {3};
  c.deltas = {0.0};
  EXPECT_EQ(data_lines(phase_csv(run_phase_diagram(c))).size(), 1u);
  c.m_values = {};
  EXPECT_TRUE(data_lines(phase_csv(run_phase_diagram(c))).empty());
}

TEST(EmitCsv, WritesFilesAndReportsIoErrors) {
  const SweepTable t = run_comparison(small_comparison());
  const auto dir = std::filesystem::temp_directory_path();
  emit_sweep_csv(t, dir / "tgp_test_sweep.csv");
  emit_trials_csv(t, dir / "tgp_test_trials.csv");
  std::ifstream in(dir / "tgp_test_sweep.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), sweep_csv(t));
  std::filesystem::remove(dir / "tgp_test_sweep.csv");
  std::filesystem::remove(dir / "tgp_test_trials.csv");
  EXPECT_THROW(emit_sweep_csv(t, "/nonexistent_dir/s.csv"), IoError);
  EXPECT_THROW(emit_phase_csv(run_phase_diagram(small_phase()), "/nonexistent_dir/p.csv"), IoError);
}

TEST(RunComparison, RejectsBadConfig) {
  ComparisonConfig c = small_comparison();
  c.tau = 1.0;
  EXPECT_THROW(run_comparison(c), ParameterError);
  c = small_comparison();
  c.trials = 0;
  EXPECT_THROW(run_comparison(c), ParameterError);
  c = small_comparison();
  c.deltas = {-1.0};
  EXPECT_THROW(run_comparison(c), ParameterError);
}

}  // namespace
}  // namespace tgp
