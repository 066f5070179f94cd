#pragma once

// Exact one-step quantities of the zero-count chain of the (1+1) EA on
// OneMax: drift, normalized drift and the transition kernel.
//
// State k is the number of zero-bits. A mutation flips each bit with
// probability 1/n; with a zero-bits and b one-bits flipped the offspring is
// accepted iff a >= b, and the state moves from k to k - a + b.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "onemax/errors.hpp"
#include "onemax/scalar.hpp"

namespace onemax {

namespace detail {

inline void require_state(std::size_t k, std::size_t max_k, const char* what) {
  if (k > max_k)
    throw DomainError(std::string(what) + ": state " + std::to_string(k) +
                      " outside 0.." + std::to_string(max_k));
}

inline void require_rational_cap(std::size_t n, std::size_t cap) {
  if (n > cap)
    throw CapacityError("exact-rational backend limited to n <= " + std::to_string(cap) +
                        ", got n = " + std::to_string(n));
}

// sum_{l>=1} first[l] * sum_{j<l} (l - j) second[j], with the inner sum
// carried incrementally: U_{l+1} = U_l + (second[0] + ... + second[l]).
template <Scalar S>
S weighted_excess_sum(const std::vector<S>& first, const std::vector<S>& second) {
  Accumulator<S> total;
  S prefix = S(0);
  S inner = S(0);
  for (std::size_t l = 1; l < first.size(); ++l) {
    if (l - 1 < second.size())
      prefix += second[l - 1];
    inner += prefix;
    if constexpr (std::same_as<S, double>) {
      if (first[l] == 0.0)
        break;
    }
    total += first[l] * inner;
  }
  return total.value();
}

// C(t, i) n^{-i}, i = 0..t.
template <Scalar S>
std::vector<S> scaled_binomials(std::size_t t, std::size_t n) {
  std::vector<S> w(t + 1, S(0));
  w[0] = S(1);
  for (std::size_t i = 0; i < t; ++i) {
    if constexpr (std::same_as<S, double>) {
      if (w[i] == 0.0)
        break;
    }
    w[i + 1] = w[i] * ratio<S>(static_cast<std::int64_t>(t - i),
                               static_cast<std::int64_t>((i + 1) * n));
  }
  return w;
}

} // namespace detail

/// Expected decrease of the zero-count in one iteration from state k:
///   sum_{l=1}^{k} sum_{j=0}^{l} (l-j) C(k,l) C(n-k,j) n^{-l-j} (1-1/n)^{n-l-j}.
/// The summand factors into two binomial probabilities (zeros flipped, ones
/// flipped), so this is E[(A - B)^+] with A ~ Bin(k, 1/n), B ~ Bin(n-k, 1/n).
template <Scalar S>
S drift(ProblemSize n, std::size_t k) {
  detail::require_state(k, n, "drift");
  if (k == 0)
    return S(0);
  return detail::weighted_excess_sum(binomial_pmf<S>(k, n), binomial_pmf<S>(n - k, n));
}

/// Normalized drift
///   Delta*_n(k) = sum_{l=1}^{k} C(k,l) sum_{j=0}^{l-1} (l-j) C(n+1-k,j) n^{-j-l},
/// defined for 0 <= k <= n+1 with Delta*_n(0) = 0.
template <Scalar S>
S normalized_drift(ProblemSize n, std::size_t k) {
  detail::require_state(k, n + 1, "normalized_drift");
  if (k == 0)
    return S(0);
  return detail::weighted_excess_sum(detail::scaled_binomials<S>(k, n),
                                     detail::scaled_binomials<S>(n + 1 - k, n));
}

namespace detail {

// p(k, j) for j < k from the two flip-count distributions of state k.
template <Scalar S>
S improving_prob(const std::vector<S>& zeros_flipped, const std::vector<S>& ones_flipped,
                 std::size_t k, std::size_t j) {
  const std::size_t gap = k - j;
  const std::size_t top = std::min(j, ones_flipped.size() - 1);
  Accumulator<S> sum;
  for (std::size_t l = 0; l <= top; ++l) {
    const S term = zeros_flipped[gap + l] * ones_flipped[l];
    if constexpr (std::same_as<S, double>) {
      if (term == 0.0)
        break;
    }
    sum += term;
  }
  return sum.value();
}

template <Scalar S>
std::vector<S> kernel_row(ProblemSize n, std::size_t k) {
  const auto zeros = binomial_pmf<S>(k, n);
  const auto ones = binomial_pmf<S>(n - k, n);
  std::vector<S> row(k + 1, S(0));
  Accumulator<S> leaving;
  for (std::size_t j = 0; j < k; ++j) {
    row[j] = improving_prob(zeros, ones, k, j);
    leaving += row[j];
  }
  row[k] = S(1) - leaving.value();
  return row;
}

} // namespace detail

/// One-step transition probability from k to j zero-bits. For j < k this is
///   sum_{l=0}^{min(j,n-k)} C(k,k-j+l) C(n-k,l) n^{-(k-j+2l)} (1-1/n)^{n-(k-j)-2l};
/// p(k,k) is the complement, absorbing both rejected offspring and accepted
/// offspring of equal fitness.
template <Scalar S>
S transition_prob(ProblemSize n, std::size_t k, std::size_t j) {
  detail::require_state(k, n, "transition_prob");
  if (j > k)
    throw DomainError("transition_prob: chain is non-increasing, j > k");
  if (j < k)
    return detail::improving_prob(binomial_pmf<S>(k, n), binomial_pmf<S>(n - k, n), k, j);
  return detail::kernel_row<S>(n, k)[k];
}

/// p(k, <= j) = sum_{j' <= j} p(k, j') for j < k.
template <Scalar S>
S transition_tail(ProblemSize n, std::size_t k, std::size_t j) {
  detail::require_state(k, n, "transition_tail");
  if (j >= k)
    throw DomainError("transition_tail: requires j < k");
  const auto zeros = binomial_pmf<S>(k, n);
  const auto ones = binomial_pmf<S>(n - k, n);
  Accumulator<S> sum;
  for (std::size_t i = 0; i <= j; ++i)
    sum += detail::improving_prob(zeros, ones, k, i);
  return sum.value();
}

/// Drifts Delta_n(k), k = 0..n, and normalized drifts Delta*_n(k), k = 0..n+1.
template <Scalar S>
struct DriftTable {
  ProblemSize n;
  std::vector<S> delta;
  std::vector<S> delta_star;

  static constexpr ScalarBackend backend = backend_of<S>;
};

/// Lower-triangular row-stochastic kernel; row k holds p(k, 0..k).
template <Scalar S>
class TransitionKernel {
public:
  TransitionKernel(ProblemSize n, std::vector<std::vector<S>> rows)
      : n_(n), rows_(std::move(rows)) {}

  static constexpr ScalarBackend backend = backend_of<S>;

  ProblemSize n() const { return n_; }
  /// Highest state with a stored row.
  std::size_t max_state() const { return rows_.size() - 1; }
  const std::vector<S>& row(std::size_t k) const { return rows_.at(k); }

  /// p(k, j); zero above the diagonal.
  S operator()(std::size_t k, std::size_t j) const {
    if (j > k)
      return S(0);
    return rows_.at(k).at(j);
  }

private:
  ProblemSize n_;
  std::vector<std::vector<S>> rows_;
};

template <Scalar S>
DriftTable<S> build_drift_table(ProblemSize n, std::size_t rational_cap = kDefaultRationalCap) {
  if constexpr (std::same_as<S, Rational>)
    detail::require_rational_cap(n, rational_cap);
  DriftTable<S> table{n, std::vector<S>(n + 1), std::vector<S>(n + 2)};
  for (std::size_t k = 0; k <= n; ++k)
    table.delta[k] = drift<S>(n, k);
  for (std::size_t k = 0; k <= n + 1; ++k)
    table.delta_star[k] = normalized_drift<S>(n, k);
  return table;
}

/// Builds rows 0..max_state (default: all of them). Truncated kernels are
/// enough for hitting times from states <= max_state since the chain never
/// moves up.
template <Scalar S>
TransitionKernel<S> build_kernel(ProblemSize n, std::size_t rational_cap = kDefaultRationalCap,
                                 std::size_t max_state = SIZE_MAX) {
  if constexpr (std::same_as<S, Rational>)
    detail::require_rational_cap(n, rational_cap);
  const std::size_t last = std::min<std::size_t>(max_state, n);
  std::vector<std::vector<S>> rows;
  rows.reserve(last + 1);
  for (std::size_t k = 0; k <= last; ++k)
    rows.push_back(detail::kernel_row<S>(n, k));
  return TransitionKernel<S>(n, std::move(rows));
}

} // namespace onemax
