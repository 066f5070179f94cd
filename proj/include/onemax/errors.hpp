#pragma once

#include <stdexcept>
#include <string>

namespace onemax {

/// Argument outside the domain of an operation (state index out of range,
/// unsupported order, n too small).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Requested table is too large for the exact-rational backend.
class CapacityError : public std::length_error {
public:
  using std::length_error::length_error;
};

/// A numerical procedure failed to produce a trustworthy value.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace onemax
