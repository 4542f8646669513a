#include "lmono/rational.hpp"

#include <cctype>
#include <limits>

namespace lmono {

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const Integer& z) { return z.get_str(); }

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  if (!is_integer_literal(s)) throw ParseError("malformed integer '" + std::string(s) + "'");
  if (s.front() == '+') s.remove_prefix(1);
  return Integer(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(s));
  Integer num = parse_integer(trim(s.substr(0, slash)));
  Integer den = parse_integer(trim(s.substr(slash + 1)));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

RatVector to_rational(const IntVector& v) {
  RatVector out;
  out.reserve(v.size());
  for (const auto& z : v) out.emplace_back(z);
  return out;
}

Integer as_integer(const Rational& q) {
  if (q.get_den() != 1) throw PreconditionError("expected an integer, got " + to_string(q));
  return q.get_num();
}

bool is_integral(const Rational& q) { return q.get_den() == 1; }

bool is_integral(const RatVector& v) {
  for (const auto& q : v)
    if (!is_integral(q)) return false;
  return true;
}

std::int64_t to_int64(const Integer& z) {
  if (!z.fits_slong_p()) throw Error("integer " + z.get_str() + " does not fit in 64 bits");
  return z.get_si();
}

Integer lcm_of_denominators(const RatVector& v) {
  Integer l = 1;
  for (const auto& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  return l;
}

Rational dot(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw PreconditionError("dot: length mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Integer dot(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw PreconditionError("dot: length mismatch");
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace lmono
