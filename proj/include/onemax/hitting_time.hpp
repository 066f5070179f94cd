#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "onemax/drift.hpp"
#include "onemax/errors.hpp"
#include "onemax/scalar.hpp"

namespace onemax {

/// Expected hitting times g(k) of state 0 and inverse-drift partial sums
/// Q_k = sum_{j=1}^{k} 1/Delta_n(j), both indexed by k = 0..max_state.
template <Scalar S>
struct HittingProfile {
  ProblemSize n;
  std::vector<S> g;
  std::vector<S> q;

  static constexpr ScalarBackend backend = backend_of<S>;
};

/// Q_{k0}; Q_0 = 0.
template <Scalar S>
S inverse_drift_sum(const DriftTable<S>& table, std::size_t k0) {
  detail::require_state(k0, table.n, "inverse_drift_sum");
  Accumulator<S> sum;
  for (std::size_t k = 1; k <= k0; ++k)
    sum += S(1) / table.delta[k];
  return sum.value();
}

/// First-step recurrence, in increasing k:
///   g(k) = (1 + sum_{j=1}^{k-1} p(k,j) g(j)) / sum_{j=0}^{k-1} p(k,j).
/// Covers states 0..kernel.max_state().
template <Scalar S>
HittingProfile<S> hitting_profile(const TransitionKernel<S>& kernel, const DriftTable<S>& table) {
  if (!(kernel.n() == table.n))
    throw DomainError("hitting_profile: kernel and drift table disagree on n");
  const std::size_t last = kernel.max_state();
  HittingProfile<S> profile{table.n, std::vector<S>(last + 1, S(0)),
                            std::vector<S>(last + 1, S(0))};
  for (std::size_t k = 1; k <= last; ++k) {
    const auto& row = kernel.row(k);
    Accumulator<S> numerator;
    numerator += S(1);
    Accumulator<S> leaving;
    leaving += row[0];
    for (std::size_t j = 1; j < k; ++j) {
      numerator += row[j] * profile.g[j];
      leaving += row[j];
    }
    const S out = leaving.value();
    if (!(out > S(0)))
      throw NumericError("hitting_profile: state " + std::to_string(k) +
                         " has zero probability of leaving");
    profile.g[k] = numerator.value() / out;
  }
  Accumulator<S> q;
  for (std::size_t k = 1; k <= last; ++k) {
    q += S(1) / table.delta[k];
    profile.q[k] = q.value();
  }
  return profile;
}

/// H_m = 1 + 1/2 + ... + 1/m.
template <Scalar S = double>
S harmonic(std::size_t m) {
  Accumulator<S> h;
  for (std::size_t i = m; i >= 1; --i)
    h += S(1) / S(static_cast<std::int64_t>(i));
  return h.value();
}

/// Rational closed forms of g(k) for k <= 3. g(2) and g(3) use the prefactor
/// (1 - 1/n)^{-n}; the recurrence pins this down exactly (the factor
/// (1 - 1/n)^{1-n} is off by (1 - 1/n)).
inline Rational closed_form_g(ProblemSize n, std::size_t k) {
  const Rational nn(static_cast<std::int64_t>(n.value()));
  const Rational stay = Rational(1) - Rational(1) / nn;
  auto poly = [&](std::initializer_list<std::int64_t> coeffs) {
    Rational acc(0);
    for (std::int64_t c : coeffs)
      acc = acc * nn + c;
    return acc;
  };
  if (k > n)
    throw DomainError("closed_form_g: state exceeds n");
  switch (k) {
  case 0:
    return Rational(0);
  case 1:
    return nn * ipow_signed<Rational>(stay, 1 - static_cast<std::int64_t>(n.value()));
  case 2:
    return poly({3, -8, 6, -1}) * ipow_signed<Rational>(stay, -static_cast<std::int64_t>(n.value())) /
           poly({2, -2, -1});
  case 3:
    if (n < 3)
      throw DomainError("closed_form_g: k = 3 requires n >= 3");
    return poly({22, -114, 203, -117, -38, 49, -7, 2}) *
           ipow_signed<Rational>(stay, -static_cast<std::int64_t>(n.value())) /
           poly({12, -36, 4, 60, -23, -21, -2});
  default:
    throw DomainError("closed_form_g: closed forms exist only for k <= 3");
  }
}

} // namespace onemax
