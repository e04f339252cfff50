#include "wigneg/mc.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "stat_helpers.hpp"
#include "wigneg/oracle.hpp"

namespace wigneg {
namespace {

constexpr double kQubitOracle = 0.115099820540249490;

void expect_consistent(const NegativityEstimate& e) {
  EXPECT_LE(0.0, e.ci_low);
  EXPECT_LE(e.ci_low, e.p_hat);
  EXPECT_LE(e.p_hat, e.ci_high);
  EXPECT_LE(e.ci_high, 1.0);
  EXPECT_LE(e.negatives, e.trials);
  EXPECT_EQ(e.p_hat * static_cast<double>(e.trials), static_cast<double>(e.negatives));
}

TEST(Wilson, Boundaries) {
  EXPECT_EQ(wilson_interval(0, 10, 1.96).low, 0.0);
  EXPECT_EQ(wilson_interval(10, 10, 1.96).high, 1.0);
}

TEST(Wilson, ReferenceInterval) {
  const auto ci = wilson_interval(159, 1000, 1.96);
  EXPECT_NEAR(ci.low, 0.13764593437383232, 1e-12);
  EXPECT_NEAR(ci.high, 0.18296401046208605, 1e-12);
}

TEST(Wilson, RejectsInvalidCounts) {
  EXPECT_THROW(wilson_interval(11, 10, 1.96), std::invalid_argument);
  EXPECT_THROW(wilson_interval(0, 0, 1.96), std::invalid_argument);
  EXPECT_THROW(wilson_interval(1, 10, 0.0), std::invalid_argument);
}

TEST(Method, Names) {
  for (Method m : {Method::FastGamma, Method::FullGinibre, Method::HaarPhasePoint})
    EXPECT_EQ(method_from_string(to_string(m)), m);
  EXPECT_THROW(method_from_string("gibbs"), std::invalid_argument);
}

TEST(EstimateGlobal, ZeroTrialsRejected) {
  EXPECT_THROW(estimate_global(two_block_spectrum(2, 1), Method::FastGamma, {0, 1, 1}),
               std::domain_error);
  EXPECT_THROW(estimate_global(two_block_spectrum(2, 1), Method::HaarPhasePoint, {10, 1, 1}),
               std::invalid_argument);
}

TEST(EstimateGlobal, QubitMatchesOracle) {
  const auto e = estimate_global(two_block_spectrum(2, 1), Method::FastGamma, {1'000'000, 7, 2});
  expect_consistent(e);
  EXPECT_EQ(e.seed, 7u);
  EXPECT_EQ(e.method, Method::FastGamma);
  EXPECT_NEAR(e.p_hat, kQubitOracle, 0.0010);
}

TEST(EstimateGlobal, WorkerCountInvariance) {
  const auto spec = two_block_spectrum(5, 2);
  for (Method m : {Method::FastGamma, Method::FullGinibre}) {
    const RunOptions one{300'000, 11, 1}, many{300'000, 11, 8};
    EXPECT_EQ(estimate_global(spec, m, one).negatives, estimate_global(spec, m, many).negatives);
  }
}

TEST(EstimateGlobal, PartialChunks) {
  // trials that are not a multiple of the chunk size
  const auto spec = two_block_spectrum(3, 1);
  const auto e = estimate_global(spec, Method::FastGamma, {kChunkSize + 17, 3, 3});
  EXPECT_EQ(e.trials, kChunkSize + 17);
  expect_consistent(e);
  const auto small = estimate_global(spec, Method::FastGamma, {1, 3, 4});
  EXPECT_EQ(small.trials, 1u);
}

TEST(EstimateGlobal, MethodsAgreeOnQubit) {
  const auto spec = two_block_spectrum(2, 1);
  const auto fast = estimate_global(spec, Method::FastGamma, {100'000, 1, 1});
  const auto full = estimate_global(spec, Method::FullGinibre, {100'000, 2, 1});
  EXPECT_TRUE(testing::overlap(testing::interval(fast), testing::interval(full)));
  EXPECT_TRUE(testing::contains(testing::interval(full), kQubitOracle));
}

TEST(EstimateGlobalAt, PhasePointIndependence) {
  const auto spec = two_block_spectrum(3, 1);
  RandomStream rng(1234);
  const auto point = haar_unitary(3, rng);
  const auto diag = estimate_global(spec, Method::FullGinibre, {100'000, 5, 1});
  const auto moved = estimate_global_at(spec, point, {100'000, 6, 1});
  EXPECT_TRUE(testing::overlap(testing::interval(diag), testing::interval(moved)));
  EXPECT_THROW(estimate_global_at(spec, UnitaryMatrix::identity(2), {10, 1, 1}),
               std::invalid_argument);
}

TEST(EstimateState, MaximallyMixedNeverNegative) {
  const auto e = estimate_state(DensityMatrix::maximally_mixed(4), two_block_spectrum(4, 1),
                                {50'000, 1, 1});
  EXPECT_EQ(e.negatives, 0u);
  EXPECT_EQ(e.p_hat, 0.0);
  EXPECT_EQ(e.method, Method::HaarPhasePoint);
}

TEST(EstimateState, QubitBasisState) {
  // W = pi_1 c + pi_2 (1 - c) with c uniform on [0, 1]; negative iff c < (3 - sqrt 3)/6.
  const double expected = (3.0 - std::sqrt(3.0)) / 6.0;
  const auto e = estimate_state(DensityMatrix::basis_state(2, 0), two_block_spectrum(2, 1),
                                {1'000'000, 9, 2});
  expect_consistent(e);
  EXPECT_NEAR(e.p_hat, expected, 0.0013);
}

TEST(EstimateState, Errors) {
  const auto spec = two_block_spectrum(2, 1);
  EXPECT_THROW(estimate_state(DensityMatrix::maximally_mixed(3), spec, {10, 1, 1}),
               std::invalid_argument);
  EXPECT_THROW(estimate_state(DensityMatrix::maximally_mixed(2), spec, {0, 1, 1}),
               std::domain_error);
}

TEST(RunSweep, SinglePoint) {
  SweepConfig config;
  config.dimensions = {2};
  config.kernels = {KernelSelector::two_block(1)};
  config.trials = 10'000;
  const auto records = run_sweep(config);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].n, 2);
  EXPECT_EQ(records[0].k, "1");
  EXPECT_EQ(records[0].kernel_label, "two-block k=1");
  EXPECT_GE(records[0].p_hat, 0.10);
  EXPECT_LE(records[0].p_hat, 0.13);
  EXPECT_EQ(records[0].seed, point_seed(config.seed, 2, 0));
  EXPECT_GE(records[0].wall_time_s, 0.0);
}

TEST(RunSweep, EmptyDimensions) {
  SweepConfig config;
  config.kernels = {KernelSelector::two_block(1)};
  EXPECT_TRUE(run_sweep(config).empty());
}

TEST(RunSweep, Deterministic) {
  SweepConfig config;
  config.dimensions = {2, 3, 6};
  config.kernels = {KernelSelector::two_block(1), KernelSelector::random(4)};
  config.trials = 20'000;
  config.workers = 1;
  auto a = run_sweep(config);
  config.workers = 4;
  auto b = run_sweep(config);
  ASSERT_EQ(a.size(), 6u);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].negatives, b[i].negatives);
    EXPECT_EQ(a[i].p_hat, b[i].p_hat);
    EXPECT_EQ(a[i].ci_low, b[i].ci_low);
    EXPECT_EQ(a[i].seed, b[i].seed);
    EXPECT_EQ(a[i].kernel_label, b[i].kernel_label);
  }
  EXPECT_EQ(a[1].k, "random");
  EXPECT_EQ(a[1].kernel_label, "random seed=4");
}

TEST(RunSweep, FailingPointIsNamed) {
  SweepConfig config;
  config.dimensions = {4, 2};
  config.kernels = {KernelSelector::two_block(3)};
  config.trials = 100;
  try {
    run_sweep(config);
    FAIL() << "expected SweepPointError";
  } catch (const SweepPointError& e) {
    EXPECT_EQ(e.n, 2);
    EXPECT_EQ(e.kernel, "3");
    EXPECT_NE(std::string(e.what()).find("N=2"), std::string::npos);
  }
  config.skip_invalid = true;
  const auto records = run_sweep(config);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].n, 4);
}

}  // namespace
}  // namespace wigneg
