#ifndef LMONO_SERIES_HPP
#define LMONO_SERIES_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lmono/rational.hpp"
#include "lmono/valuegroup.hpp"

namespace lmono {

// Exponent vector of a monomial in the ambient variables.
using Monomial = std::vector<long>;
// Exponents of formal unit symbols; zero exponents are never stored.
using SymExps = std::map<std::string, long>;

long degree(const Monomial& e);
Monomial operator+(const Monomial& a, const Monomial& b);
// Componentwise a >= b.
bool divides(const Monomial& b, const Monomial& a);

void add_into(SymExps& acc, const SymExps& more, long times = 1);
SymExps negate(const SymExps& s);

// Nonzero rational scalar times a product of unit symbols with integer
// exponents. The scalar may be negative (residue constants of type II
// transforms are arbitrary nonzero rationals).
class UnitExpr {
public:
  UnitExpr() = default;
  explicit UnitExpr(Rational scalar, SymExps syms = {});

  static UnitExpr symbol(const std::string& name, long exp = 1);

  const Rational& scalar() const { return scalar_; }
  const SymExps& syms() const { return syms_; }
  bool is_one() const { return scalar_ == 1 && syms_.empty(); }
  bool is_rational() const { return syms_.empty(); }

  UnitExpr inverse() const;
  UnitExpr pow(long k) const;
  friend UnitExpr operator*(const UnitExpr& a, const UnitExpr& b);
  friend bool operator==(const UnitExpr&, const UnitExpr&) = default;

  std::string to_string() const;

private:
  Rational scalar_ = 1;
  SymExps syms_;
};

// Sparse polynomial over Q in nvars variables whose coefficients may carry
// formal unit symbols. Terms are keyed by (variable exponents, symbol
// exponents).
class Poly {
public:
  struct Key {
    Monomial e;
    SymExps u;
    auto operator<=>(const Key&) const = default;
  };
  using Terms = std::map<Key, Rational>;

  explicit Poly(std::size_t nvars = 0) : nvars_(nvars) {}

  static Poly constant(std::size_t nvars, const Rational& c);
  static Poly variable(std::size_t nvars, std::size_t i);
  static Poly monomial(std::size_t nvars, Monomial e, const Rational& c = 1, SymExps u = {});
  static Poly unit(std::size_t nvars, const UnitExpr& u);

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Monomial& e, const SymExps& u, const Rational& c);

  // Largest total degree of a stored term, -1 for zero.
  long max_degree() const;
  long min_degree() const;

  // Terms of total degree < D.
  Poly truncated(long D) const;
  // Terms whose variable exponents are all zero.
  Poly constant_part() const;
  // Divides every term by the monomial y^d; throws if some term is not
  // divisible.
  Poly divide_monomial(const Monomial& d) const;
  // Same polynomial in a larger ambient set (new trailing variables unused).
  Poly extended(std::size_t nvars) const;

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Rational& k, const Poly& p);
  friend bool operator==(const Poly&, const Poly&) = default;

  std::string to_string(const std::string& prefix = "y") const;

private:
  std::size_t nvars_ = 0;
  Terms terms_;
};

// Product with every term of total degree >= D dropped.
Poly multiply(const Poly& a, const Poly& b, std::optional<long> trunc);
Poly power(const Poly& p, unsigned k, std::optional<long> trunc = std::nullopt);

// Text form: sum of terms "c * y1^a1 * ... * yn^an"; '*' may be replaced by
// blanks. Identifiers other than <prefix><index> are unit symbols and may
// carry negative exponents.
Poly parse_poly(std::string_view text, std::size_t nvars, const std::string& prefix = "y");

// A polynomial known modulo total degree >= trunc; nullopt means exact.
class TruncatedSeries {
public:
  TruncatedSeries() = default;
  TruncatedSeries(Poly poly, std::optional<long> trunc);

  const Poly& poly() const { return poly_; }
  std::optional<long> trunc() const { return trunc_; }
  std::size_t nvars() const { return poly_.nvars(); }

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);

private:
  Poly poly_;
  std::optional<long> trunc_;
};

std::optional<long> min_trunc(std::optional<long> a, std::optional<long> b);

bool is_unit(const Poly& f);
bool is_unit(const TruncatedSeries& f);

// Inverse of a unit series modulo degree D. The constant part must be a
// single term.
Poly inverse_unit(const Poly& f, long D);

struct GaussValue {
  enum class Kind { Finite, AboveTruncation, Infinity };
  Kind kind = Kind::Infinity;
  Value value;      // set when Finite
  Monomial argmin;  // exponent of the attaining term when Finite
  bool finite() const { return kind == Kind::Finite; }
};

// Gauss extension: min over supported monomials of exps . vals. vals may be
// shorter than nvars; the trailing variables then have infinite value, so
// terms involving them never attain a finite minimum.
GaussValue gauss_value(const Poly& f, std::span<const Value> vals);
// For a series the minimum must lie strictly below the smallest value any
// monomial of degree trunc can take, otherwise AboveTruncation. A larger
// known_floor (a lower bound on the value of the unknown part, e.g. carried
// over from coordinates before a monomial substitution) replaces that bound.
GaussValue gauss_value(const TruncatedSeries& f, std::span<const Value> vals,
                       const std::optional<Value>& known_floor = std::nullopt);

// Value of a single monomial over the graded variables; trailing exponents
// must be zero.
Value monomial_value(const Monomial& e, std::span<const Value> vals);

// Image of each old variable as a polynomial in the new variables.
using Substitution = std::vector<Poly>;

Substitution identity_substitution(std::size_t nvars);
Poly substitute(const Poly& f, const Substitution& sub, std::optional<long> trunc = std::nullopt);
// `first` maps system 0 into system 1, `second` maps system 1 into system 2;
// the result maps system 0 into system 2.
Substitution compose(const Substitution& first, const Substitution& second,
                     std::optional<long> trunc = std::nullopt);
// Replaces unit symbols by polynomials (negative exponents need the symbol
// in `inverses`).
Poly expand_symbols(const Poly& f, const std::map<std::string, Poly>& defs,
                    const std::map<std::string, Poly>& inverses, std::optional<long> trunc);

// Lemma 3 derivation: c*y^b -> c*(b.e)*y^b; trailing variables weigh 0.
Poly derivation_apply(const Poly& f, const RatVector& e);

}  // namespace lmono

#endif  // LMONO_SERIES_HPP
