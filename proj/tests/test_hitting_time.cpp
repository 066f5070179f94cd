#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "onemax/hitting_time.hpp"
#include "oracles.hpp"

using namespace onemax;

namespace {

Rational r(std::int64_t p, std::int64_t q = 1) { return Rational(p, q); }

template <Scalar S>
HittingProfile<S> profile(std::int64_t n) {
  const ProblemSize size(n);
  return hitting_profile(build_kernel<S>(size), build_drift_table<S>(size));
}

} // namespace

TEST(HittingProfile, SmallExamples) {
  const auto two = profile<Rational>(2);
  EXPECT_EQ(two.g, (std::vector<Rational>{r(0), r(4), r(4)}));
  EXPECT_EQ(two.q, (std::vector<Rational>{r(0), r(4), r(5)}));
  const auto three = profile<Rational>(3);
  EXPECT_EQ(three.g[1], r(27, 4));
  EXPECT_EQ(three.g[2], r(351, 44));
  EXPECT_EQ(three.g[3], r(189, 22));
}

TEST(HittingProfile, MatchesDenseAbsorptionSolve) {
  for (unsigned n = 2; n <= 8; ++n) {
    std::vector<std::vector<Rational>> rows;
    for (unsigned k = 0; k <= n; ++k)
      rows.push_back(oracle::enumerate_row(n, k));
    const auto expected = oracle::absorption_times(rows);
    EXPECT_EQ(profile<Rational>(n).g, expected) << "n=" << n;
  }
}

TEST(HittingProfile, RejectsMismatchedInputs) {
  const auto kernel = build_kernel<double>(ProblemSize(5));
  const auto table = build_drift_table<double>(ProblemSize(6));
  EXPECT_THROW(hitting_profile(kernel, table), DomainError);
}

TEST(HittingProfile, TruncatedKernelGivesPrefix) {
  const ProblemSize n(40);
  const auto full = profile<Rational>(40);
  const auto part = hitting_profile(build_kernel<Rational>(n, kDefaultRationalCap, 20),
                                    build_drift_table<Rational>(n));
  ASSERT_EQ(part.g.size(), 21u);
  for (std::size_t k = 0; k <= 20; ++k)
    EXPECT_EQ(part.g[k], full.g[k]);
}

TEST(InverseDriftSum, Examples) {
  const auto table = build_drift_table<Rational>(ProblemSize(2));
  EXPECT_EQ(inverse_drift_sum(table, 0), 0);
  EXPECT_EQ(inverse_drift_sum(table, 1), 4);
  EXPECT_EQ(inverse_drift_sum(table, 2), 5);
  EXPECT_THROW(inverse_drift_sum(table, 3), DomainError);
  EXPECT_EQ(inverse_drift_sum(build_drift_table<double>(ProblemSize(77)), 0), 0.0);
}

TEST(Harmonic, Values) {
  EXPECT_EQ(harmonic<Rational>(0), 0);
  EXPECT_EQ(harmonic<Rational>(4), r(25, 12));
  EXPECT_NEAR(harmonic(1000000), std::log(1e6) + 0.5772156649015329 + 0.5e-6, 1e-12);
}

TEST(ClosedForm, Examples) {
  EXPECT_EQ(closed_form_g(ProblemSize(3), 2), r(351, 44));
  EXPECT_EQ(closed_form_g(ProblemSize(3), 3), r(189, 22));
  EXPECT_EQ(closed_form_g(ProblemSize(5), 1), r(3125, 256));
  EXPECT_EQ(closed_form_g(ProblemSize(9), 0), 0);
}

TEST(ClosedForm, Errors) {
  EXPECT_THROW(closed_form_g(ProblemSize(5), 4), DomainError);
  EXPECT_THROW(closed_form_g(ProblemSize(2), 3), DomainError);
  EXPECT_THROW(closed_form_g(ProblemSize(2), 5), DomainError);
}

TEST(ClosedForm, AgreesWithRecurrence) {
  for (std::int64_t n = 3; n <= 40; ++n) {
    const auto p = profile<Rational>(n);
    for (std::size_t k = 1; k <= 3; ++k)
      ASSERT_EQ(closed_form_g(ProblemSize(n), k), p.g[k]) << "n=" << n << " k=" << k;
  }
  EXPECT_EQ(closed_form_g(ProblemSize(2), 2), profile<Rational>(2).g[2]);
}

TEST(ClosedForm, PrintedPrefactorDisagreesWithRecurrence) {
  // The alternative factor (1 - 1/n)^{1 - n} is off by exactly (1 - 1/n).
  for (std::int64_t n : {3, 4, 7}) {
    const ProblemSize size(n);
    const Rational stay = Rational(1) - r(1, n);
    const auto p = profile<Rational>(n);
    for (std::size_t k : {2u, 3u}) {
      const Rational alternative = closed_form_g(size, k) * stay;
      EXPECT_NE(alternative, p.g[k]);
    }
  }
}

TEST(HittingProfile, UnitDriftOfTruePotential) {
  for (std::int64_t n = 2; n <= 24; ++n) {
    const ProblemSize size(n);
    const auto kernel = build_kernel<Rational>(size);
    const auto p = hitting_profile(kernel, build_drift_table<Rational>(size));
    for (std::size_t k = 1; k <= size; ++k) {
      Rational decrease(0);
      for (std::size_t j = 0; j <= k; ++j)
        decrease += kernel(k, j) * (p.g[k] - p.g[j]);
      ASSERT_EQ(decrease, 1) << "n=" << n << " k=" << k;
    }
  }
}

TEST(HittingProfile, OrderingProperties) {
  for (std::int64_t n : {2, 3, 10, 33, 64}) {
    const auto p = profile<Rational>(n);
    EXPECT_EQ(p.g[1], closed_form_g(ProblemSize(n), 1));
    for (std::size_t k = 1; k < p.g.size(); ++k) {
      // n = 2 is the one tie: g(1) = g(2) = 4.
      if (n == 2)
        EXPECT_GE(p.g[k], p.g[k - 1]);
      else
        EXPECT_GT(p.g[k], p.g[k - 1]) << "n=" << n << " k=" << k;
      EXPECT_LE(p.g[k], p.q[k]);
      EXPECT_GE(p.q[k] - p.g[k], p.q[k - 1] - p.g[k - 1]);
    }
  }
}

TEST(HittingProfile, FloatTracksRational) {
  const auto exact = profile<Rational>(64);
  const auto approx = profile<double>(64);
  for (std::size_t k = 0; k <= 64; ++k) {
    EXPECT_NEAR(approx.g[k], to_double(exact.g[k]), 1e-12 * to_double(exact.g[k]));
    EXPECT_NEAR(approx.q[k], to_double(exact.q[k]), 1e-12 * to_double(exact.q[k]));
  }
}

TEST(HittingProfile, LargeFloatEnvelope) {
  const ProblemSize n(4096);
  const auto table = build_drift_table<double>(n);
  const auto p = hitting_profile(build_kernel<double>(n, kDefaultRationalCap, 2048), table);
  const double dn = 4096.0;
  for (std::size_t k = 1; k <= 2048; k += 97) {
    EXPECT_LE(p.g[k], p.q[k]);
    EXPECT_LE(p.q[k], std::numbers::e * dn * harmonic(k));
  }
  EXPECT_NEAR(p.g[1], 1.0 / table.delta[1], 1e-10 * p.g[1]);
}
