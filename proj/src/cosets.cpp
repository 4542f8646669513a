#include "lmono/cosets.hpp"

#include <algorithm>

namespace lmono {

bool CosetIndex::is_zero() const {
  return std::all_of(key.begin(), key.end(), [](const Integer& z) { return z == 0; });
}

CosetMap::CosetMap(IntMatrix C) : C_(std::move(C)) {
  require_full_row_rank(C_);
  const SmithForm snf = smith_normal_form(C_);
  right_ = snf.right;
  right_inv_ = unimodular_inverse(right_);
  rank_ = snf.rank;
}

CosetIndex CosetMap::classify(const IntVector& lambda) const {
  if (lambda.size() != C_.cols()) throw PreconditionError("exponent length must equal the columns of C");
  const IntVector img = lambda * right_;
  return CosetIndex{IntVector(img.begin() + static_cast<long>(rank_), img.end())};
}

CosetIndex CosetMap::classify(const Monomial& e) const {
  if (e.size() < C_.cols()) throw PreconditionError("monomial shorter than the graded variables");
  IntVector lambda;
  for (std::size_t i = 0; i < C_.cols(); ++i) lambda.emplace_back(e[i]);
  return classify(lambda);
}

IntVector CosetMap::representative(const CosetIndex& c) const {
  IntVector w(C_.cols(), Integer(0));
  for (std::size_t i = 0; i < c.key.size(); ++i) w[rank_ + i] = c.key[i];
  return w * right_inv_;
}

CosetIndex coset_class(const IntVector& lambda, const IntMatrix& C) { return CosetMap(C).classify(lambda); }

std::map<CosetIndex, Poly> decompose(const Poly& f, const IntMatrix& C) {
  const CosetMap map(C);
  std::map<CosetIndex, Poly> parts;
  for (const auto& [k, c] : f.terms()) {
    auto it = parts.try_emplace(map.classify(k.e), Poly(f.nvars())).first;
    it->second.add_term(k.e, k.u, c);
  }
  return parts;
}

MinClass min_value_class(const std::map<CosetIndex, Poly>& parts, std::span<const Value> vals) {
  std::optional<MinClass> best;
  bool tied = false;
  for (const auto& [cls, part] : parts) {
    const GaussValue g = gauss_value(part, vals);
    if (!g.finite()) continue;
    if (!best) {
      best = MinClass{cls, g.value};
      continue;
    }
    const auto o = cmp(g.value, best->value);
    if (o == std::strong_ordering::less) {
      best = MinClass{cls, g.value};
      tied = false;
    } else if (o == std::strong_ordering::equal) {
      tied = true;
    }
  }
  if (!best) throw PreconditionError("min_value_class: no part has a finite value");
  if (tied) throw Error("min_value_class: two classes attain the same value (contradicts Lemma 2)");
  return *best;
}

namespace {

bool in_H(const RatVector& v, const IntMatrix& C) { return in_semigroup(v, C, SemigroupKind::H); }

}  // namespace

Rewrite rewrite_in_x(const Poly& h, const IntMatrix& C, std::span<const UnitExpr> phis, const ModuleGens& gens) {
  require_full_row_rank(C);
  const std::size_t r = C.rows(), s = C.cols();
  if (phis.size() != r) throw PreconditionError("one unit per row of C is required");
  if (gens.lambda.size() != s) throw PreconditionError("module generators built for another C");
  if (h.nvars() < s) throw PreconditionError("poly has fewer variables than the columns of C");
  const RatMatrix Cq = to_rational(C);

  Rewrite rw{gens.lambda, {}};
  std::map<RatVector, std::size_t> slot;
  for (const auto& [k, c] : h.terms()) {
    RatVector alpha(s);
    for (std::size_t j = 0; j < s; ++j) alpha[j] = Rational(k.e[j]) - Rational(gens.lambda[j]);
    auto v = solve_left(alpha, Cq);
    if (!v) throw PreconditionError("rewrite_in_x: exponent minus Lambda is outside the image lattice");
    const RatVector* pick = nullptr;
    RatVector rest;
    for (const auto& u : gens.gens) {
      RatVector d(r);
      for (std::size_t i = 0; i < r; ++i) d[i] = (*v)[i] - u[i];
      if (in_H(d, C)) {
        pick = &u;
        rest = std::move(d);
        break;
      }
    }
    if (!pick) throw Error("rewrite_in_x: no module generator covers the term");
    auto [it, fresh] = slot.try_emplace(*pick, rw.groups.size());
    if (fresh) rw.groups.push_back(RewriteGroup{*pick, {}});
    Monomial tail(k.e.begin() + static_cast<long>(s), k.e.end());
    rw.groups[it->second].terms.push_back(RewriteTerm{c, k.u, std::move(rest), std::move(tail)});
  }
  std::sort(rw.groups.begin(), rw.groups.end(), [](const RewriteGroup& a, const RewriteGroup& b) { return a.u < b.u; });
  return rw;
}

Poly rewrite_round_trip(const Rewrite& rw, const IntMatrix& C, std::size_t nvars) {
  const std::size_t r = C.rows(), s = C.cols();
  const RatMatrix Cq = to_rational(C);
  Poly out(nvars);
  for (const auto& g : rw.groups) {
    for (const auto& t : g.terms) {
      RatVector xexp(r), phi(r);
      for (std::size_t i = 0; i < r; ++i) {
        xexp[i] = g.u[i] + t.h[i];
        // phi^{-u} phi^{-h} from the rewrite, phi^{u+h} from x^{u+h}
        phi[i] = -g.u[i] - t.h[i] + xexp[i];
        if (phi[i] != 0) throw Error("rewrite round trip: unit exponents do not cancel");
      }
      const RatVector yexp = xexp * Cq;
      Monomial e(nvars, 0);
      for (std::size_t j = 0; j < s; ++j) {
        const Rational q = yexp[j] + Rational(rw.lambda[j]);
        if (!is_integral(q) || q < 0) throw Error("rewrite round trip: non-monomial exponent");
        e[j] = to_int64(q.get_num());
      }
      for (std::size_t j = 0; j < t.tail.size(); ++j) e[s + j] = t.tail[j];
      out.add_term(e, t.syms, t.c);
    }
  }
  return out;
}

RatVector kernel_derivation_vector(const IntMatrix& C, const IntVector& lambda1) {
  if (lambda1.size() != C.cols()) throw PreconditionError("lambda length must equal the columns of C");
  const RatMatrix ker = right_kernel(to_rational(C));
  const RatVector l = to_rational(lambda1);
  for (std::size_t i = 0; i < ker.rows(); ++i) {
    RatVector e = ker.row(i);
    if (dot(e, l) == 0) continue;
    const Integer den = lcm_of_denominators(e);
    Integer g = 0;
    for (auto& q : e) {
      q *= den;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), q.get_num_mpz_t());
    }
    for (auto& q : e) q /= g;
    const auto first = std::find_if(e.begin(), e.end(), [](const Rational& q) { return q != 0; });
    if (*first < 0)
      for (auto& q : e) q = -q;
    return e;
  }
  throw PreconditionError("kernel_derivation_vector: [Lambda1] = 0, no kernel vector separates it");
}

}  // namespace lmono
