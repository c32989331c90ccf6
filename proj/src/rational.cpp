#include "hierarb/rational.hpp"

#include <cctype>

namespace hierarb {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

bool is_rational_literal(std::string_view text) {
  if (!text.empty() && text.front() == '-') text.remove_prefix(1);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return all_digits(text);
  const auto num = text.substr(0, slash);
  const auto den = text.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) return false;
  return den.find_first_not_of('0') != std::string_view::npos;
}

Rational parse_rational(std::string_view text) {
  if (!is_rational_literal(text)) {
    throw ConfigError("exact rational required, got \"" + std::string(text) + "\"");
  }
  return Rational(std::string(text));
}

std::string to_string(const Rational& value) { return value.str(); }

std::vector<std::string> to_strings(const RationalVector& values) {
  std::vector<std::string> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

Rational dot(const RationalVector& lhs, const RationalVector& rhs) {
  if (lhs.size() != rhs.size()) throw DomainError("dot: length mismatch");
  Rational acc = 0;
  for (std::size_t k = 0; k < lhs.size(); ++k) acc += lhs[k] * rhs[k];
  return acc;
}

}  // namespace hierarb
