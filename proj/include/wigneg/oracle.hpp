#pragma once

// Deterministic evaluation of the negativity probability
//
//   P( sum_j pi_j G_j < 0 ),  G_j ~ Gamma(N, 2) i.i.d.,
//
// which is the chance that a Hilbert-Schmidt random state has a negative
// Wigner value at a fixed phase-space point.

#include <stdexcept>
#include <string>
#include <string_view>

#include "wigneg/swkernel.hpp"

namespace wigneg {

enum class OracleMethod { BetaClosedForm, CfInversion, CltQuadrature, Limit };

std::string_view to_string(OracleMethod method) noexcept;

struct OracleResult {
  double value;
  OracleMethod method;
  double estimated_abs_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Large-N value, 1 - Phi(1) = erfc(1/sqrt 2) / 2.
OracleResult limit_quantumness();

/// Exact value for two_block_spectrum(n, k) as a regularized incomplete beta
/// function I_x(N(N-k), Nk).
OracleResult two_block_exact(int n, int k);

/// Gil-Pelaez inversion of the characteristic function of the weighted gamma
/// sum. Works for any spectrum. Throws ConvergenceError when the quadrature
/// error estimate exceeds `tol`.
OracleResult cf_inversion_exact(const KernelSpectrum& spectrum, double tol = 1e-10);

/// Probability of x < y t - sqrt(t^2 + 1) for independent standard normals,
/// by one-dimensional quadrature. Independent of t.
OracleResult clt_probability(double t);

struct BetaCdf {
  double value;
  double abs_error;
  bool converged;  ///< false when the normal approximation was used
};

/// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction, with
/// a normal approximation when the fraction fails to converge.
BetaCdf regularized_incomplete_beta(double a, double b, double x);

/// Normal approximation to the Beta(a, b) CDF at x, with a rough error bound.
BetaCdf beta_cdf_normal_approximation(double a, double b, double x);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace wigneg
