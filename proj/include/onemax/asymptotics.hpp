#pragma once

// Asymptotic approximations of the normalized drift and of the runtime, the
// constants of the runtime expansion, and the data behind the comparison
// plots (expansion errors per state, inverse-drift overestimate per n).

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "onemax/drift.hpp"
#include "onemax/errors.hpp"
#include "onemax/hitting_time.hpp"
#include "onemax/special_functions.hpp"

namespace onemax {

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Constant term of the runtime expansion; taken as published, not derived.
inline constexpr double kStoredC2 = 0.59789875;

/// Default margin for the expansion's validity range 1 <= k <= (1 - eps) n.
inline constexpr double kDefaultExpansionEps = 0.125;

/// S_0, S_1, T_1, T_2 at one normalized state and the three truncations
/// S_1, S_1 + T_1/n, S_1 + T_1/n + T_2/n^2 of the normalized drift.
struct ExpansionEval {
  double alpha = 0.0;
  double s0 = 0.0;
  double s1 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  std::array<double, 3> approx{};
};

inline ExpansionEval evaluate_expansion(double alpha, std::size_t n) {
  ExpansionEval ev;
  ev.alpha = alpha;
  ev.s0 = s_r(0, alpha);
  ev.s1 = s_r(1, alpha);
  ev.t1 = t1(alpha);
  ev.t2 = t2(alpha);
  const double dn = static_cast<double>(n);
  ev.approx[0] = ev.s1;
  ev.approx[1] = ev.s1 + ev.t1 / dn;
  ev.approx[2] = ev.approx[1] + ev.t2 / (dn * dn);
  return ev;
}

/// Matching truncations of 1/Delta*_n(k):
///   1/S_1,  1/S_1 - T_1/(n S_1^2),  ... - (S_1 T_2 - T_1^2)/(n^2 S_1^3).
inline std::array<double, 3> inverse_approximations(const ExpansionEval& ev, std::size_t n) {
  const double dn = static_cast<double>(n);
  std::array<double, 3> inv{};
  inv[0] = 1.0 / ev.s1;
  inv[1] = inv[0] - ev.t1 / (dn * ev.s1 * ev.s1);
  inv[2] = inv[1] - (ev.s1 * ev.t2 - ev.t1 * ev.t1) / (dn * dn * ev.s1 * ev.s1 * ev.s1);
  return inv;
}

/// Order-truncated approximation of Delta*_n(k) at alpha = k/n. Only defined
/// on 1 <= k <= (1 - eps) n; outside that range a DomainError is thrown.
inline double expansion_delta_star(ProblemSize n, std::size_t k, unsigned order,
                                   double eps = kDefaultExpansionEps) {
  if (order > 2)
    throw DomainError("expansion_delta_star: order must be 0, 1 or 2");
  if (!(eps > 0.0 && eps < 1.0))
    throw DomainError("expansion_delta_star: eps must lie in (0, 1)");
  const double dn = static_cast<double>(n.value());
  if (k < 1 || static_cast<double>(k) > (1.0 - eps) * dn)
    throw DomainError("expansion_delta_star: k = " + std::to_string(k) +
                      " outside validity range 1..(1-eps)n");
  return evaluate_expansion(static_cast<double>(k) / dn, n).approx[order];
}

/// E_m(n) = max over 1 <= k <= k_max of |Delta*_n(k) - order-m approximation|.
inline double max_expansion_error(ProblemSize n, unsigned order, std::size_t k_max) {
  if (order > 2)
    throw DomainError("max_expansion_error: order must be 0, 1 or 2");
  double worst = 0.0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double exact = normalized_drift<double>(n, k);
    const auto ev = evaluate_expansion(static_cast<double>(k) / static_cast<double>(n.value()), n);
    worst = std::max(worst, std::abs(exact - ev.approx[order]));
  }
  return worst;
}

namespace detail {

// R(t) = 1/S_1(t) - 1/t, bounded on (0, 1] with R(0+) = -3/2.
inline double s1_reciprocal_remainder(double t) { return 1.0 / s_r(1, t) - 1.0 / t; }

inline constexpr double kQuadratureSliver = 1e-6;
inline constexpr double kQuadratureTol = 1e-12;

} // namespace detail

/// C_0 = gamma - log 2 + int_0^{1/2} (1/S_1(t) - 1/t) dt.
/// Adaptive Gauss-Kronrod on [1e-6, 1/2]; on the sliver [0, 1e-6] the
/// integrand is replaced by its expansion -3/2 + (11/6) t.
inline double constant_c0() {
  constexpr double h = detail::kQuadratureSliver;
  const double sliver = -1.5 * h + (11.0 / 12.0) * h * h;
  double error = 0.0;
  const double body = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      detail::s1_reciprocal_remainder, h, 0.5, 20, detail::kQuadratureTol, &error);
  if (!(error <= 1e-10))
    throw NumericError("constant_c0: quadrature error estimate " + std::to_string(error));
  return kEulerGamma - std::numbers::ln2 + sliver + body;
}

/// C_1 = -e C_0, the linear coefficient of the runtime.
inline double constant_c1() { return -std::numbers::e * constant_c0(); }

/// e n log n - C_1 n + e log n: asymptotic inverse-drift sum up to floor(n/2).
inline double asymptotic_q(ProblemSize n, double c1) {
  const double dn = static_cast<double>(n.value());
  const double logn = std::log(dn);
  return std::numbers::e * dn * logn - c1 * dn + std::numbers::e * logn;
}

/// e n log n - C_1 n + (e/2) log n + C_2: asymptotic expected runtime.
inline double asymptotic_et(ProblemSize n, double c1) {
  const double dn = static_cast<double>(n.value());
  const double logn = std::log(dn);
  return std::numbers::e * dn * logn - c1 * dn + 0.5 * std::numbers::e * logn + kStoredC2;
}

inline double asymptotic_q(ProblemSize n) { return asymptotic_q(n, constant_c1()); }
inline double asymptotic_et(ProblemSize n) { return asymptotic_et(n, constant_c1()); }

struct RuntimeEstimate {
  ProblemSize n;
  double q_asym;
  double et_asym;
  double c0;
  double c1;
  double c2;
  double gamma;
};

inline RuntimeEstimate runtime_estimate(ProblemSize n) {
  const double c0 = constant_c0();
  const double c1 = -std::numbers::e * c0;
  return {n, asymptotic_q(n, c1), asymptotic_et(n, c1), c0, c1, kStoredC2, kEulerGamma};
}

/// One point of the expansion-error plot: exact Delta*_n(k), its three
/// truncations and the errors of both Delta* and 1/Delta* approximations.
struct ExpansionErrorRow {
  std::size_t n = 0;
  std::size_t k = 0;
  double alpha = 0.0;
  double delta_star_exact = 0.0;
  std::array<double, 3> approx{};
  std::array<double, 3> err{};
  std::array<double, 3> inv_err{};
};

/// Rows for k = 1..n (the full unit interval, beyond the validity range).
inline std::vector<ExpansionErrorRow> expansion_error_rows(ProblemSize n) {
  std::vector<ExpansionErrorRow> rows;
  rows.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    ExpansionErrorRow row;
    row.n = n;
    row.k = k;
    row.alpha = static_cast<double>(k) / static_cast<double>(n.value());
    row.delta_star_exact = normalized_drift<double>(n, k);
    const auto ev = evaluate_expansion(row.alpha, n);
    const auto inv = inverse_approximations(ev, n);
    row.approx = ev.approx;
    for (std::size_t m = 0; m < 3; ++m) {
      row.err[m] = row.delta_star_exact - ev.approx[m];
      row.inv_err[m] = 1.0 / row.delta_star_exact - inv[m];
    }
    rows.push_back(row);
  }
  return rows;
}

/// Overestimate of the expected runtime by the inverse-drift sum, from the
/// fixed start of floor(n/2) zero-bits.
struct OverestimateRow {
  std::size_t n = 0;
  double q_exact = 0.0;
  double g_exact = 0.0;
  double diff = 0.0;
  double diff_minus_half_e_log = 0.0;
};

inline OverestimateRow overestimate_row(ProblemSize n) {
  const std::size_t half = n / 2;
  const auto table = build_drift_table<double>(n);
  const auto kernel = build_kernel<double>(n, kDefaultRationalCap, half);
  const auto profile = hitting_profile(kernel, table);
  OverestimateRow row;
  row.n = n;
  row.q_exact = profile.q[half];
  row.g_exact = profile.g[half];
  row.diff = row.q_exact - row.g_exact;
  row.diff_minus_half_e_log = row.diff - 0.5 * std::numbers::e * std::log(static_cast<double>(n.value()));
  return row;
}

} // namespace onemax
