#pragma once

// Entire-function series used by the asymptotic expansion of the normalized
// drift: modified Bessel functions I_0, I_1 and the sums S_0, S_1, plus the
// first two correction terms T_1, T_2.

#include <cmath>
#include <cstddef>
#include <string>

#include "onemax/errors.hpp"

namespace onemax {

namespace detail {

inline constexpr double kSeriesRelTol = 1e-17;
inline constexpr std::size_t kSeriesMaxTerms = 400;

// sum_{m>=0} u^m / (m! (m+nu)!)
inline double bessel_u_series(unsigned nu, double u) {
  double term = 1.0;
  for (unsigned i = 1; i <= nu; ++i)
    term /= i;
  double sum = term;
  for (std::size_t m = 1; m < kSeriesMaxTerms; ++m) {
    term *= u / (static_cast<double>(m) * static_cast<double>(m + nu));
    sum += term;
    if (std::abs(term) <= kSeriesRelTol * std::abs(sum))
      return sum;
  }
  throw NumericError("Bessel series did not converge");
}

} // namespace detail

/// Modified Bessel function of the first kind I_nu(x), nu in {0, 1}, by its
/// power series sum_m (x/2)^{2m+nu} / (m! (m+nu)!).
inline double bessel_i(unsigned nu, double x) {
  if (nu > 1)
    throw DomainError("bessel_i: only orders 0 and 1 are supported");
  if (!(x >= 0.0))
    throw DomainError("bessel_i: argument must be non-negative");
  const double half = x / 2.0;
  const double series = detail::bessel_u_series(nu, half * half);
  return nu == 0 ? series : half * series;
}

/// I_0(2 sqrt(u)) as a power series in u.
inline double bessel_i0_sqrt(double u) { return detail::bessel_u_series(0, u); }

/// I_1(2 sqrt(u)) / sqrt(u) as a power series in u; finite at u = 0.
inline double bessel_i1_sqrt_ratio(double u) { return detail::bessel_u_series(1, u); }

/// S_r(z) = sum_{l>=0} z^l/l! sum_{j=0}^{l-1} (l-j)^r (1-z)^j/j!, r in {0, 1}.
/// Inner sums are carried incrementally across l.
inline double s_r(unsigned r, double z) {
  if (r > 1)
    throw DomainError("s_r: only r = 0 and r = 1 are supported");
  if (!(z >= 0.0 && z <= 1.0))
    throw DomainError("s_r: z must lie in [0, 1]");
  const double w = 1.0 - z;
  double outer = 1.0;  // z^l / l!
  double inner_c = 1.0; // (1-z)^{l-1} / (l-1)!
  double prefix = 0.0;  // sum_{j<l} (1-z)^j / j!
  double weighted = 0.0; // sum_{j<l} (l-j) (1-z)^j / j!
  double sum = 0.0;
  for (std::size_t l = 1; l < detail::kSeriesMaxTerms; ++l) {
    outer *= z / static_cast<double>(l);
    if (l > 1)
      inner_c *= w / static_cast<double>(l - 1);
    prefix += inner_c;
    weighted += prefix;
    const double term = outer * (r == 0 ? prefix : weighted);
    sum += term;
    if (l >= 2 && term <= detail::kSeriesRelTol * sum)
      return sum;
  }
  throw NumericError("s_r series did not converge at z = " + std::to_string(z));
}

/// First-order correction of the normalized drift,
///   T_1 = S_1/2 - 2 a S_0 - a I_0(2 sqrt(a(1-a))) - sqrt(a(1-a)) I_1(2 sqrt(a(1-a))).
inline double t1(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("t1: alpha must lie in [0, 1]");
  const double u = alpha * (1.0 - alpha);
  return 0.5 * s_r(1, alpha) - 2.0 * alpha * s_r(0, alpha) - alpha * bessel_i0_sqrt(u) -
         u * bessel_i1_sqrt_ratio(u);
}

/// Second-order correction,
///   T_2 = -S_1/24 + a S_0 + (1+6a)/12 I_0(2 sqrt(u))
///         - (1 - 10a + 4a^2)/12 * I_1(2 sqrt(u)) / sqrt(u),   u = a(1-a).
/// The ratio I_1(2 sqrt u)/sqrt u is evaluated as a series in u, so the
/// endpoints need no special casing.
inline double t2(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("t2: alpha must lie in [0, 1]");
  const double u = alpha * (1.0 - alpha);
  return -s_r(1, alpha) / 24.0 + alpha * s_r(0, alpha) +
         (1.0 + 6.0 * alpha) / 12.0 * bessel_i0_sqrt(u) -
         (1.0 - 10.0 * alpha + 4.0 * alpha * alpha) / 12.0 * bessel_i1_sqrt_ratio(u);
}

} // namespace onemax
