#ifndef LMONO_RATIONAL_HPP
#define LMONO_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lmono {

using Integer = mpz_class;
using Rational = mpq_class;

using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition.
class PreconditionError : public Error {
public:
  using Error::Error;
};

// An iteration cap was reached before the loop converged.
class CapExceeded : public Error {
public:
  using Error::Error;
};

// Malformed textual or JSON input.
class ParseError : public Error {
public:
  using Error::Error;
};

// Canonical "p/q" text; integers print without a denominator.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

// Accepts "p", "-p", "p/q" with optional surrounding blanks.
Rational parse_rational(std::string_view text);

RatVector to_rational(const IntVector& v);

// Throws PreconditionError unless q is an integer.
Integer as_integer(const Rational& q);

bool is_integral(const Rational& q);
bool is_integral(const RatVector& v);

std::int64_t to_int64(const Integer& z);

Integer lcm_of_denominators(const RatVector& v);

Rational dot(const RatVector& a, const RatVector& b);
Integer dot(const IntVector& a, const IntVector& b);

}  // namespace lmono

#endif  // LMONO_RATIONAL_HPP
