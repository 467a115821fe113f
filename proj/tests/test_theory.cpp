#include <gtest/gtest.h>

#include <cmath>

#include "tgp/errors.hpp"
#include "tgp/theory.hpp"

namespace tgp {
namespace {

// Reference values below were evaluated independently at 30 significant digits.
const double kGamma1600 = std::log(3200.0) / std::log(1600.0);

TEST(C0Constant, Values) {
  EXPECT_EQ(c0_constant(1.0, 1.0), 2.0);
  EXPECT_NEAR(c0_constant(1.0, 1e-15), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(c0_constant(kGamma1600, 1.0), 2.04643637201578, 1e-13);
}

TEST(C0Constant, RejectsOutOfDomain) {
  EXPECT_THROW(c0_constant(0.99, 1.0), ParameterError);
  EXPECT_THROW(c0_constant(1.0, 0.0), ParameterError);
}

TEST(GammaFor, LogRatio) {
  EXPECT_DOUBLE_EQ(gamma_for(1600, 3200), kGamma1600);
  EXPECT_DOUBLE_EQ(gamma_for(100, 100), 1.0);
}

TEST(TauFloor, Values) {
  EXPECT_NEAR(tau_floor(100, 1.0, 1.0), 0.429193205257869, 1e-13);
  EXPECT_NEAR(tau_floor(1600, kGamma1600, 1.0), 0.138963416935068, 1e-13);
  EXPECT_NEAR(tau_floor(200, gamma_for(200, 400), 1.0), 0.336002707037548, 1e-13);
}

TEST(TauFloor, DecreasesToZero) {
  double prev = tau_floor(8, 1.0, 1.0);
  for (std::size_t n = 9; n < 5000; ++n) {
    const double v = tau_floor(n, 1.0, 1.0);
    ASSERT_LT(v, prev) << "N=" << n;
    prev = v;
  }
  EXPECT_LT(tau_floor(100000000, 1.0, 1.0), 1e-3);
}

TEST(TauTheorem3, Values) {
  EXPECT_NEAR(tau_theorem3(0.05, 100, 1.0, 1.0), 0.512128639359974, 1e-13);
  EXPECT_LT(tau_theorem3(0.0, 100000000, 1.0, 1.0), 2e-3);
}

TEST(TauTheorem3, AdmissibleUnderSparsityCap) {
  for (std::size_t n : {1000u, 10000u, 100000u, 1000000u}) {
    for (double mu : {0.001, 0.01, 0.05, 0.1}) {
      const std::size_t cap = sparsity_cap(mu, n, 1.0, 1.0);
      if (cap == 0) continue;
      EXPECT_LE(tau_theorem3(mu, n, 1.0, 1.0), max_admissible_tau(cap) + 1e-12)
          << "N=" << n << " mu=" << mu;
    }
  }
}

TEST(SparsityCap, Values) {
  // min{5, 40 / (4 * 2 * sqrt(log 1600))} = min{5, 1.8408}
  EXPECT_EQ(sparsity_cap(0.05, 1600, 1.0, 1.0), 1u);
  EXPECT_EQ(sparsity_cap(0.05, 100000000, 1.0, 1.0), 5u);
  for (std::size_t m = 1; m <= 8; ++m) {
    EXPECT_EQ(sparsity_cap(1.0 / (4.0 * m), 100000000000ULL, 1.0, 1.0), m);
  }
}

TEST(SparsityCap, GrowsLikeSqrtNOverLogN) {
  for (std::size_t n : {10000u, 100000u, 1000000u, 10000000u}) {
    const double second = std::sqrt(double(n)) / (4.0 * 2.0 * std::sqrt(std::log(double(n))));
    EXPECT_EQ(sparsity_cap(0.0, n, 1.0, 1.0), static_cast<std::size_t>(std::floor(second)));
  }
}

TEST(NoiseTolerance, Values) {
  EXPECT_NEAR(noise_tolerance(1, 0.2), 1.29089414280814, 1e-12);
  EXPECT_NEAR(noise_tolerance(1, 0.2), 1.29090, 1e-5);
}

TEST(NoiseTolerance, BlowsUpAsTauVanishes) {
  EXPECT_GT(noise_tolerance(1, 1e-6), 1e5);
  double prev = noise_tolerance(3, 1e-4);
  for (double tau = 2e-4; tau < max_admissible_tau(3); tau *= 1.5) {
    const double v = noise_tolerance(3, tau);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(NoiseTolerance, AdmissibleRange) {
  EXPECT_NO_THROW(noise_tolerance(4, max_admissible_tau(4)));
  EXPECT_THROW(noise_tolerance(4, max_admissible_tau(4) * 1.001), ParameterError);
  EXPECT_THROW(noise_tolerance(1, 0.0), ParameterError);
  EXPECT_THROW(noise_tolerance(0, 0.1), ParameterError);
}

TEST(NoiseTolerance, PositiveOnAdmissibleRange) {
  for (std::size_t m = 1; m <= 50; ++m) {
    EXPECT_GT(noise_tolerance(m, max_admissible_tau(m)), 0.0) << "M=" << m;
  }
}

TEST(NoiseToleranceFormula, TabulatesPessimisticConstantGrid) {
  struct Row {
    std::size_t m;
    std::size_t n;
    double f;
  };
  const Row rows[] = {{1, 1000, 0.67321561215914},   {1, 10000, 0.81570804944918},
                      {1, 100000, 0.84070723239109}, {2, 1000, 0.38411745978152},
                      {2, 10000, 0.69851902029848},  {2, 100000, 0.76562955051357},
                      {4, 1000, 0.12215869566988},   {4, 10000, 0.72820889974958},
                      {4, 100000, 0.90068786151549}, {8, 1000, -0.30688510290363},
                      {8, 10000, 0.70748483844300},  {8, 100000, 1.12333246213821}};
  for (const auto& r : rows) {
    const double tau = tau_theorem3(1.0 / (4.0 * r.m), r.n, 1.0, 1.0);
    EXPECT_NEAR(noise_tolerance_formula(r.m, tau), r.f, 1e-10) << "M=" << r.m << " N=" << r.n;
  }
}

}  // namespace
}  // namespace tgp
