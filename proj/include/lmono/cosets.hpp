#ifndef LMONO_COSETS_HPP
#define LMONO_COSETS_HPP

#include <compare>
#include <map>
#include <span>
#include <vector>

#include "lmono/lattice.hpp"
#include "lmono/series.hpp"
#include "lmono/valuegroup.hpp"

namespace lmono {

// Class of an exponent vector modulo the saturated row lattice
// (Q^r C) cap Z^s. With left*C*right = diag, that lattice is the set of x
// whose image x*right vanishes past position r, so the trailing s-r
// coordinates of x*right are a canonical key.
struct CosetIndex {
  IntVector key;
  bool is_zero() const;
  auto operator<=>(const CosetIndex&) const = default;
};

class CosetMap {
public:
  explicit CosetMap(IntMatrix C);

  const IntMatrix& matrix() const { return C_; }
  std::size_t graded() const { return C_.cols(); }

  CosetIndex classify(const IntVector& lambda) const;
  CosetIndex classify(const Monomial& e) const;  // first s coordinates
  // Element of the class with zero leading coordinates in the SNF frame.
  IntVector representative(const CosetIndex& c) const;

private:
  IntMatrix C_;
  IntMatrix right_;
  IntMatrix right_inv_;
  std::size_t rank_ = 0;
};

CosetIndex coset_class(const IntVector& lambda, const IntMatrix& C);

// Eq (2): f = sum over classes of h_[Lambda]. Trailing variables (beyond the
// columns of C) do not affect the class.
std::map<CosetIndex, Poly> decompose(const Poly& f, const IntMatrix& C);

struct MinClass {
  CosetIndex cls;
  Value value;
};

// Class whose part has the least finite Gauss value. Two distinct classes
// with the same finite value contradict Lemma 2 and raise Error.
MinClass min_value_class(const std::map<CosetIndex, Poly>& parts, std::span<const Value> vals);

// c * syms * x^h * (trailing y monomial), h in H.
struct RewriteTerm {
  Rational c;
  SymExps syms;
  RatVector h;
  Monomial tail;
};

// phi^{-u} x^u * sum_terms phi^{-h} * term
struct RewriteGroup {
  RatVector u;
  std::vector<RewriteTerm> terms;
};

// h = y^Lambda * sum_groups phi^{-u} x^u g_u with x_i = y^{C_i} phi_i.
struct Rewrite {
  IntVector lambda;
  std::vector<RewriteGroup> groups;
};

Rewrite rewrite_in_x(const Poly& h, const IntMatrix& C, std::span<const UnitExpr> phis, const ModuleGens& gens);

// Substitutes x_i = y^{C_i} phi_i back; the phi exponents cancel exactly
// (checked) and the result is a polynomial in nvars y-variables.
Poly rewrite_round_trip(const Rewrite& rw, const IntMatrix& C, std::size_t nvars);

// Integral e with C e = 0 and e . lambda1 != 0, first nonzero entry positive.
RatVector kernel_derivation_vector(const IntMatrix& C, const IntVector& lambda1);

}  // namespace lmono

#endif  // LMONO_COSETS_HPP
