#include "wigneg/swkernel.hpp"

#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

namespace wigneg {
namespace {

TEST(TwoBlockSpectrum, QubitKernel) {
  const auto s = two_block_spectrum(2, 1);
  ASSERT_EQ(s.blocks().size(), 2u);
  EXPECT_NEAR(s.blocks()[0].value, (1.0 + std::sqrt(3.0)) / 2.0, 1e-15);
  EXPECT_NEAR(s.blocks()[1].value, (1.0 - std::sqrt(3.0)) / 2.0, 1e-15);
  EXPECT_EQ(s.blocks()[0].multiplicity, 1);
  EXPECT_EQ(s.blocks()[1].multiplicity, 1);
  EXPECT_EQ(s.label(), "two-block k=1");
}

TEST(TwoBlockSpectrum, FourLevelValues) {
  // Reference values evaluated at 30 digits.
  const auto k1 = two_block_spectrum(4, 1);
  EXPECT_NEAR(k1.blocks()[0].value, 0.809016994374947424, 1e-15);
  EXPECT_EQ(k1.blocks()[0].multiplicity, 3);
  EXPECT_NEAR(k1.blocks()[1].value, -1.42705098312484227, 1e-15);
  EXPECT_EQ(k1.blocks()[1].multiplicity, 1);

  const auto k2 = two_block_spectrum(4, 2);
  EXPECT_NEAR(k2.blocks()[0].value, (2.0 + std::sqrt(60.0)) / 8.0, 1e-15);
  EXPECT_NEAR(k2.blocks()[0].value, 1.21824583655185422, 1e-15);
  EXPECT_NEAR(k2.blocks()[1].value, -0.718245836551854221, 1e-15);
  EXPECT_EQ(k2.blocks()[0].multiplicity, 2);
  EXPECT_EQ(k2.blocks()[1].multiplicity, 2);

  for (const auto& s : {k1, k2}) {
    const auto r = master_residuals(s);
    EXPECT_LT(std::abs(r.trace), 1e-12);
    EXPECT_LT(std::abs(r.trace_sq), 1e-12);
  }
}

TEST(TwoBlockSpectrum, RejectsBadArguments) {
  EXPECT_THROW(two_block_spectrum(1, 1), std::domain_error);
  EXPECT_THROW(two_block_spectrum(2, 2), std::domain_error);
  EXPECT_THROW(two_block_spectrum(5, 0), std::domain_error);
  EXPECT_THROW(two_block_spectrum(5, 5), std::domain_error);
}

TEST(TwoBlockSpectrum, MasterEquationsAcrossSizes) {
  for (int n = 2; n <= 512; ++n) {
    for (int k = 1; k <= std::min(8, n - 1); ++k) {
      const auto s = two_block_spectrum(n, k);
      const auto r = master_residuals(s);
      ASSERT_LT(std::abs(r.trace), 1e-10) << "N=" << n << " k=" << k;
      ASSERT_LT(std::abs(r.trace_sq), 1e-9) << "N=" << n << " k=" << k;
      ASSERT_LT(s.min_value(), 0.0);
      ASSERT_GT(s.max_value(), 0.0);
    }
  }
}

TEST(TwoBlockSpectrum, MatchesSingleDefectFormula) {
  for (int n = 2; n <= 512; ++n) {
    const auto s = two_block_spectrum(n, 1);
    const double root = std::sqrt(1.0 + n);
    ASSERT_NEAR(s.blocks()[0].value, (1.0 + root) / n, 1e-12) << n;
    ASSERT_NEAR(s.blocks()[1].value, (1.0 + (1.0 - n) * root) / n, 1e-12) << n;
    ASSERT_EQ(s.blocks()[0].multiplicity, n - 1);
  }
}

TEST(MasterResiduals, HandBuiltSpectrum) {
  const KernelSpectrum s(2, {{1.0, 2}}, "flat");
  const auto r = master_residuals(s);
  EXPECT_DOUBLE_EQ(r.trace, 1.0);
  EXPECT_DOUBLE_EQ(r.trace_sq, 0.0);
  EXPECT_FALSE(is_admissible(s));
}

TEST(MasterResiduals, LargeTwoBlock) {
  const auto r = master_residuals(two_block_spectrum(64, 3));
  EXPECT_NEAR(r.trace, 0.0, 1e-10);
  EXPECT_NEAR(r.trace_sq, 0.0, 1e-10);
}

TEST(KernelSpectrum, StructuralChecks) {
  EXPECT_THROW(KernelSpectrum(3, {{1.0, 1}, {0.5, 1}}, ""), std::invalid_argument);
  EXPECT_THROW(KernelSpectrum(2, {{0.5, 1}, {1.0, 1}}, ""), std::invalid_argument);
  EXPECT_THROW(KernelSpectrum(2, {{1.0, 0}, {0.5, 2}}, ""), std::invalid_argument);
  EXPECT_THROW(KernelSpectrum(2, {}, ""), std::invalid_argument);
}

TEST(KernelSpectrum, FromValuesMergesTies) {
  const auto s = KernelSpectrum::from_values({-1.0, 2.0, 2.0 + 1e-14, 0.5}, "x");
  ASSERT_EQ(s.blocks().size(), 3u);
  EXPECT_EQ(s.blocks()[0].multiplicity, 2);
  EXPECT_EQ(s.dimension(), 4);
  const auto e = s.expanded();
  ASSERT_EQ(e.size(), 4u);
  EXPECT_GE(e[0], e[1]);
  EXPECT_EQ(e[3], -1.0);
}

TEST(Moments, QubitKernel) {
  const auto m = moments(two_block_spectrum(2, 1));
  EXPECT_NEAR(m.z1, 1.3660254037844386, 1e-15);
  EXPECT_NEAR(m.z2, 0.3660254037844386, 1e-15);
  EXPECT_NEAR(m.m1, 1.8660254037844386, 1e-15);
  EXPECT_NEAR(m.m2, 0.1339745962155614, 1e-15);
  EXPECT_EQ(m.nonnegative_count, 1);
  EXPECT_NEAR(m.t, 2.0 - std::sqrt(3.0), 1e-15);
}

TEST(Moments, SumRulesHoldForGeneratedSpectra) {
  RandomStream rng(99);
  for (int n : {2, 3, 5, 17, 64}) {
    for (const auto& s : {two_block_spectrum(n, 1), random_spectrum(n, rng)}) {
      const auto m = moments(s);
      EXPECT_NEAR(m.z1 - m.z2, 1.0, 1e-10);
      EXPECT_NEAR(m.m1 + m.m2, n, 1e-9);
      EXPECT_GE(m.t, 0.0);
      EXPECT_NEAR(m.t, std::sqrt((n - m.m1) / m.m1), 1e-12);
    }
  }
}

TEST(RandomSpectrum, QubitIsForced) {
  const auto ref = two_block_spectrum(2, 1);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = random_spectrum(2, seed);
    ASSERT_EQ(s.blocks().size(), 2u);
    ASSERT_NEAR(s.blocks()[0].value, ref.blocks()[0].value, 1e-12) << seed;
    ASSERT_NEAR(s.blocks()[1].value, ref.blocks()[1].value, 1e-12) << seed;
  }
}

TEST(RandomSpectrum, SatisfiesConstraints) {
  for (int n : {3, 5, 16, 128}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto s = random_spectrum(n, seed);
      const auto r = master_residuals(s);
      ASSERT_LT(std::abs(r.trace), 1e-12);
      ASSERT_LT(std::abs(r.trace_sq), 1e-12 * n);
      ASSERT_LT(s.min_value(), 0.0);
      ASSERT_EQ(static_cast<int>(s.blocks().size()), n);  // generic
    }
  }
  EXPECT_EQ(random_spectrum(5, std::uint64_t{42}).label(), "random seed=42");
  EXPECT_THROW(random_spectrum(1, std::uint64_t{1}), std::domain_error);
}

TEST(RandomSpectrum, Deterministic) {
  const auto a = random_spectrum(7, std::uint64_t{5}).expanded();
  const auto b = random_spectrum(7, std::uint64_t{5}).expanded();
  EXPECT_EQ(a, b);
  EXPECT_NE(a, random_spectrum(7, std::uint64_t{6}).expanded());
}

}  // namespace
}  // namespace wigneg
