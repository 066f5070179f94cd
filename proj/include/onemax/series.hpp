#pragma once

// Truncated power series over exact rationals, and the coefficient-extraction
// route to the normalized drift:
//   Delta*_n(k) = [z^{k-1}] (z + 1/n)^k (1 - z)^{-2} (1 + z/n)^{n+1-k}.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "onemax/drift.hpp"
#include "onemax/scalar.hpp"

namespace onemax {

/// Power series in z with coefficients of z^0..z^order; higher terms dropped.
class TruncatedSeries {
public:
  explicit TruncatedSeries(std::size_t order) : coeffs_(order + 1, Rational(0)) {}

  TruncatedSeries(std::size_t order, std::vector<Rational> leading) : TruncatedSeries(order) {
    for (std::size_t i = 0; i < leading.size() && i <= order; ++i)
      coeffs_[i] = std::move(leading[i]);
  }

  static TruncatedSeries one(std::size_t order) { return TruncatedSeries(order, {Rational(1)}); }

  std::size_t order() const { return coeffs_.size() - 1; }
  const Rational& operator[](std::size_t i) const { return coeffs_.at(i); }
  Rational& operator[](std::size_t i) { return coeffs_.at(i); }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t order = std::min(a.order(), b.order());
    TruncatedSeries out(order);
    for (std::size_t i = 0; i <= order; ++i) {
      if (a.coeffs_[i] == 0)
        continue;
      for (std::size_t j = 0; i + j <= order; ++j)
        out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return out;
  }

  TruncatedSeries pow(std::uint64_t exp) const {
    TruncatedSeries result = one(order());
    TruncatedSeries base = *this;
    while (exp > 0) {
      if (exp & 1u)
        result = result * base;
      exp >>= 1;
      if (exp > 0)
        base = base * base;
    }
    return result;
  }

private:
  std::vector<Rational> coeffs_;
};

/// Normalized drift by coefficient extraction from the three-factor product.
/// Serves as an independent oracle for normalized_drift<Rational>.
inline Rational normalized_drift_gf(ProblemSize n, std::size_t k) {
  detail::require_state(k, n + 1, "normalized_drift_gf");
  if (k == 0)
    return Rational(0);
  const std::size_t order = k - 1;
  const Rational inv_n(1, static_cast<std::int64_t>(n.value()));

  const TruncatedSeries shifted_flip = TruncatedSeries(order, {inv_n, Rational(1)}).pow(k);
  const TruncatedSeries ones_factor =
      TruncatedSeries(order, {Rational(1), inv_n}).pow(n + 1 - k);
  TruncatedSeries double_pole(order);
  for (std::size_t h = 0; h <= order; ++h)
    double_pole[h] = Rational(static_cast<std::int64_t>(h + 1));

  return (shifted_flip * double_pole * ones_factor)[order];
}

} // namespace onemax
