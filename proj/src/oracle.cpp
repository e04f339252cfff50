#include "wigneg/oracle.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace wigneg {

namespace {

constexpr int kMaxFractionTerms = 200000;
constexpr unsigned kMaxQuadratureDepth = 18;
// The characteristic-function integrand is smooth on every panel; deep
// recursion only happens when the tolerance sits below its roundoff.
constexpr unsigned kMaxPanelDepth = 8;

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;

struct Fraction {
  long double value;
  long double rel_error;
  bool converged;
};

// Continued fraction for I_x(a, b) / (x^a y^b / (a B(a, b))), modified Lentz.
Fraction beta_fraction(long double a, long double b, long double x) {
  constexpr long double tiny = 1e-300L;
  constexpr long double eps = LDBL_EPSILON;
  const long double qab = a + b, qap = a + 1.0L, qam = a - 1.0L;
  long double c = 1.0L;
  long double d = 1.0L - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0L / d;
  long double h = d;
  long double last = 1.0L;
  for (int m = 1; m <= kMaxFractionTerms; ++m) {
    const long double m2 = 2.0L * m;
    long double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0L + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0L + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0L / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0L + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0L + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0L / d;
    const long double del = d * c;
    h *= del;
    last = std::fabs(del - 1.0L);
    if (last < eps) return {h, 4.0L * eps * std::sqrt(static_cast<long double>(m)), true};
  }
  return {h, last, false};
}

// x and y = 1 - x are passed separately so callers can supply both exactly.
BetaCdf incomplete_beta(double a, double b, double x, double y) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta shapes must be positive");
  if (x <= 0.0) return {0.0, 0.0, true};
  if (y <= 0.0) return {1.0, 0.0, true};

  const bool swap = x > (a + 1.0) / (a + b + 2.0);
  const long double pa = swap ? b : a, pb = swap ? a : b;
  const long double px = swap ? y : x, py = swap ? x : y;

  const long double lg_ab = std::lgamma(pa + pb), lg_a = std::lgamma(pa), lg_b = std::lgamma(pb);
  const long double log_front = lg_ab - lg_a - lg_b + pa * std::log(px) + pb * std::log(py);
  const Fraction frac = beta_fraction(pa, pb, px);
  if (!frac.converged) return beta_cdf_normal_approximation(a, b, x);

  const long double part = std::exp(log_front) * frac.value / pa;
  // Rounding in the log prefactor scales with the size of the lgamma terms.
  const long double log_scale =
      std::fabs(lg_ab) + std::fabs(lg_a) + std::fabs(lg_b) + std::fabs(pa * std::log(px)) +
      std::fabs(pb * std::log(py));
  const long double rel = frac.rel_error + 8.0L * LDBL_EPSILON * (1.0L + log_scale);
  const double value = static_cast<double>(swap ? 1.0L - part : part);
  const double err = static_cast<double>(std::fabs(part) * rel) + DBL_EPSILON * std::fabs(value);
  return {std::clamp(value, 0.0, 1.0), err, true};
}

}  // namespace

std::string_view to_string(OracleMethod method) noexcept {
  switch (method) {
    case OracleMethod::BetaClosedForm: return "beta-closed-form";
    case OracleMethod::CfInversion: return "cf-inversion";
    case OracleMethod::CltQuadrature: return "clt-quadrature";
    case OracleMethod::Limit: return "limit";
  }
  return "unknown";
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

BetaCdf beta_cdf_normal_approximation(double a, double b, double x) {
  const double s = a + b;
  const double mean = a / s;
  const double sd = std::sqrt(a * b / (s * s * (s + 1.0)));
  const double skew = 2.0 * (b - a) * std::sqrt(s + 1.0) / ((s + 2.0) * std::sqrt(a * b));
  const double err = std::min(1.0, 0.1 * std::abs(skew) + 1.0 / s);
  return {normal_cdf((x - mean) / sd), err, false};
}

BetaCdf regularized_incomplete_beta(double a, double b, double x) {
  return incomplete_beta(a, b, x, 1.0 - x);
}

OracleResult limit_quantumness() {
  const double value = 0.5 * std::erfc(std::numbers::sqrt2 / 2.0);
  return {value, OracleMethod::Limit, 2.0 * DBL_EPSILON * value};
}

OracleResult two_block_exact(int n, int k) {
  const auto spectrum = two_block_spectrum(n, k);
  const double upper = spectrum.blocks()[0].value;
  const double lower = -spectrum.blocks()[1].value;
  // Negative iff upper * X < lower * Y with X ~ Gamma(N(N-k), 2), Y ~ Gamma(Nk, 2),
  // i.e. X / (X + Y) < lower / (upper + lower).
  const double x = lower / (upper + lower);
  const double y = upper / (upper + lower);
  const double nd = n;
  const auto cdf = incomplete_beta(nd * (n - k), nd * k, x, y);
  return {cdf.value, OracleMethod::BetaClosedForm, cdf.abs_error};
}

OracleResult cf_inversion_exact(const KernelSpectrum& spectrum, double tol) {
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
  const double n = spectrum.dimension();
  struct Term {
    double weight;    // 2 pi_j
    double exponent;  // N m_j
  };
  std::vector<Term> terms;
  double slope = 0.0;  // d(arg phi)/du at 0
  for (const auto& b : spectrum.blocks()) {
    terms.push_back({2.0 * b.value, n * b.multiplicity});
    slope += n * b.multiplicity * 2.0 * b.value;
  }

  auto log_modulus = [&](double u) {
    double s = 0.0;
    for (const auto& t : terms) s -= 0.5 * t.exponent * std::log1p(t.weight * t.weight * u * u);
    return s;
  };
  // Im phi(u) / u
  auto integrand = [&](double u) {
    double theta = 0.0;
    for (const auto& t : terms) theta += t.exponent * std::atan(t.weight * u);
    // sin(theta)/u -> theta'(0) as u -> 0
    if (u * (1.0 + std::abs(slope)) < 1e-12) return slope;
    return std::exp(log_modulus(u)) * std::sin(theta) / u;
  };

  const double panel = 1.0 / (2.0 * n);
  // Relative tolerance per panel. With many blocks the integrand carries
  // roundoff near 1e-13 relative, so asking for less than 1e-12 just recurses.
  const double inner_tol = std::max(1e-12, tol * 1e-2);
  double a = 0.0, b = panel;
  double integral = 0.0, error = 0.0, tail = 0.0;
  int panels = 0;
  for (;;) {
    double panel_err = 0.0;
    integral += Kronrod::integrate(integrand, a, b, kMaxPanelDepth, inner_tol, &panel_err);
    error += panel_err;
    ++panels;
    const double modulus = std::exp(log_modulus(b));
    tail = std::max(modulus, modulus / b);
    if (tail < tol * 1e-2) break;
    if (panels >= 200) {
      std::ostringstream msg;
      msg << "characteristic function did not decay: |phi(" << b << ")| = " << modulus
          << " after " << panels << " panels";
      throw ConvergenceError(msg.str());
    }
    a = b;
    b *= 2.0;
  }
  const double abs_error = (error + tail) / std::numbers::pi;
  if (!(abs_error <= tol)) {
    std::ostringstream msg;
    msg << "Gil-Pelaez quadrature error estimate " << abs_error << " exceeds tolerance " << tol
        << " (" << panels << " panels, upper limit " << b << ")";
    throw ConvergenceError(msg.str());
  }
  const double value = std::clamp(0.5 - integral / std::numbers::pi, 0.0, 1.0);
  return {value, OracleMethod::CfInversion, abs_error};
}

OracleResult clt_probability(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::domain_error("t must be finite and >= 0");
  const double shift = std::sqrt(t * t + 1.0);
  auto integrand = [&](double y) {
    return normal_cdf(y * t - shift) * std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi);
  };
  constexpr double reach = 40.0;
  std::vector<double> cuts{-reach, reach};
  if (t > 0.0) {
    // Phi(y t - shift) switches on around y = shift / t over a width ~ 1/t.
    const double centre = shift / t, width = 8.0 / t;
    for (double c : {centre - width, centre, centre + width})
      if (c > -reach && c < reach) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  double value = 0.0, error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double err = 0.0;
    value += Kronrod::integrate(integrand, cuts[i], cuts[i + 1], kMaxQuadratureDepth, 1e-14, &err);
    error += err;
  }
  return {std::clamp(value, 0.0, 1.0), OracleMethod::CltQuadrature, error};
}

}  // namespace wigneg
