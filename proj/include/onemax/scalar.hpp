#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "onemax/errors.hpp"

namespace onemax {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

/// Largest n for which exact-rational tables are built unless the caller
/// raises the cap. Denominators grow like n^n.
inline constexpr std::size_t kDefaultRationalCap = 64;

template <class S>
concept Scalar = std::same_as<S, double> || std::same_as<S, Rational>;

enum class ScalarBackend { Float64, ExactRational };

template <Scalar S>
inline constexpr ScalarBackend backend_of =
    std::same_as<S, double> ? ScalarBackend::Float64 : ScalarBackend::ExactRational;

inline std::string_view to_string(ScalarBackend b) {
  return b == ScalarBackend::Float64 ? "float" : "rational";
}

/// Number of bits of the search space. Always at least 2.
class ProblemSize {
public:
  explicit ProblemSize(std::int64_t n) : n_(static_cast<std::size_t>(n)) {
    if (n < 2)
      throw DomainError("problem size must be at least 2, got " + std::to_string(n));
  }

  std::size_t value() const noexcept { return n_; }
  operator std::size_t() const noexcept { return n_; }

  friend bool operator==(ProblemSize, ProblemSize) = default;

private:
  std::size_t n_;
};

template <Scalar S>
S ratio(std::int64_t num, std::int64_t den) {
  if constexpr (std::same_as<S, double>)
    return static_cast<double>(num) / static_cast<double>(den);
  else
    return Rational(num, den);
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

/// base^exp by repeated squaring. Doubles with huge exponents go through
/// exp/log1p instead, where squaring would accumulate more rounding.
template <Scalar S>
S ipow(S base, std::uint64_t exp) {
  if constexpr (std::same_as<S, double>) {
    if (exp > 1'000'000 && base > 0.0)
      return std::exp(static_cast<double>(exp) * std::log1p(base - 1.0));
  }
  S result = S(1);
  while (exp > 0) {
    if (exp & 1u)
      result *= base;
    exp >>= 1;
    if (exp > 0)
      base *= base;
  }
  return result;
}

template <Scalar S>
S ipow_signed(const S& base, std::int64_t exp) {
  if (exp >= 0)
    return ipow<S>(base, static_cast<std::uint64_t>(exp));
  return S(1) / ipow<S>(base, static_cast<std::uint64_t>(-exp));
}

/// Binomial coefficient with the convention C(a, b) = 0 outside 0 <= b <= a.
inline Integer binomial(std::int64_t a, std::int64_t b) {
  if (a < 0 || b < 0 || b > a)
    return Integer(0);
  b = std::min(b, a - b);
  Integer r = 1;
  for (std::int64_t i = 1; i <= b; ++i) {
    r *= a - b + i;
    r /= i;
  }
  return r;
}

/// Running sum. Doubles use Neumaier compensation; rationals are exact.
template <Scalar S>
class Accumulator {
public:
  void add(const S& x) {
    if constexpr (std::same_as<S, double>) {
      const double t = sum_ + x;
      if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
      else
        comp_ += (x - t) + sum_;
      sum_ = t;
    } else {
      sum_ += x;
    }
  }

  Accumulator& operator+=(const S& x) {
    add(x);
    return *this;
  }

  S value() const {
    if constexpr (std::same_as<S, double>)
      return sum_ + comp_;
    else
      return sum_;
  }

private:
  S sum_ = S(0);
  S comp_ = S(0);
};

/// Probabilities C(t, i) p^i (1-p)^(t-i), i = 0..t, for p = 1/n.
/// Built by the ratio recurrence so no factorial ever overflows a double;
/// far-tail entries underflow to zero.
template <Scalar S>
std::vector<S> binomial_pmf(std::size_t trials, std::size_t n) {
  std::vector<S> pmf(trials + 1, S(0));
  const S stay = S(1) - ratio<S>(1, static_cast<std::int64_t>(n));
  pmf[0] = ipow<S>(stay, trials);
  const auto odds_den = static_cast<std::int64_t>(n - 1);
  for (std::size_t i = 0; i < trials; ++i) {
    if constexpr (std::same_as<S, double>) {
      if (pmf[i] == 0.0)
        break;
    }
    pmf[i + 1] = pmf[i] * ratio<S>(static_cast<std::int64_t>(trials - i),
                                   static_cast<std::int64_t>(i + 1) * odds_den);
  }
  return pmf;
}

} // namespace onemax
