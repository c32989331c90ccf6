#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace hierarb {

using Rational = boost::multiprecision::mpq_rational;
using RationalVector = std::vector<Rational>;

/// Base class for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition or domain restriction was violated by the caller.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An input document or configuration could not be accepted.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Parses "p/q" or "p" (optional leading '-') into an exact rational.
/// Decimal points, exponents and whitespace are rejected.
Rational parse_rational(std::string_view text);

/// True iff `text` is a syntactically valid exact rational literal.
bool is_rational_literal(std::string_view text);

/// Canonical form: "p/q" in lowest terms, or "p" when q == 1.
std::string to_string(const Rational& value);

std::vector<std::string> to_strings(const RationalVector& values);

Rational dot(const RationalVector& lhs, const RationalVector& rhs);

}  // namespace hierarb
