// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Seeds, sizes and time limits are fixed.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lmono/certify.hpp"
#include "lmono/cosets.hpp"
#include "lmono/cuts.hpp"
#include "lmono/io.hpp"
#include "lmono/lattice.hpp"
#include "lmono/perron.hpp"
#include "lmono/series.hpp"
#include "lmono/valuegroup.hpp"

#include "oracles.hpp"

using namespace lmono;

namespace {

using Clock = std::chrono::steady_clock;
using Rng = std::mt19937_64;
using LMat = std::vector<std::vector<long>>;

constexpr double kGaussSeconds = 5.0;
constexpr double kPerronSeconds = 5.0;
constexpr double kLiftSeconds = 30.0;
constexpr std::size_t kDivisibilityCap = 10000;
constexpr long kHilbertBox = 8;
constexpr long kModuleBox = 8;

const std::vector<long> kPrimes3{2, 3, 5};
const std::vector<long> kPrimes4{2, 3, 5, 7};

struct Tally {
  std::size_t checks = 0, failures = 0;
  std::string first;

  void need(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures++ == 0) first = what;
  }
};

long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

BasisPtr sqrt_basis(const std::vector<long>& ps) {
  std::vector<GeneratorDescriptor> d;
  for (long p : ps) d.push_back(GeneratorDescriptor::sqrt(p));
  return EmbeddingBasis::make(d);
}

int oracle_sign(const RatVector& coords, const std::vector<long>& ps) {
  return oracle::sign(oracle::Quad::of(ps, coords));
}

RatVector combo(const std::vector<long>& e, const std::vector<RatVector>& vals) {
  RatVector acc(vals.front().size());
  for (std::size_t j = 0; j < vals.size(); ++j)
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += Rational(e[j]) * vals[j][k];
  return acc;
}

RatVector minus(const RatVector& a, const RatVector& b) {
  RatVector d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] - b[k];
  return d;
}

// count positive, rationally independent values in Q(sqrt ps)
std::vector<RatVector> random_coords(Rng& rng, std::size_t count, const std::vector<long>& ps) {
  for (;;) {
    std::vector<RatVector> out;
    for (std::size_t i = 0; i < count; ++i) {
      RatVector c(ps.size());
      do {
        for (auto& q : c) q = uniform(rng, -4, 4);
      } while (oracle_sign(c, ps) <= 0);
      out.push_back(c);
    }
    if (oracle::rank(out) == count) return out;
  }
}

std::vector<Value> as_values(const std::vector<RatVector>& coords, const BasisPtr& b) {
  std::vector<Value> out;
  for (const auto& c : coords) out.emplace_back(b, c);
  return out;
}

LMat to_long(const IntMatrix& A) {
  LMat out(A.rows(), std::vector<long>(A.cols()));
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) out[i][j] = to_int64(A(i, j));
  return out;
}

IntMatrix from_long(const LMat& a) {
  IntMatrix A(a.size(), a.empty() ? 0 : a[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) A(i, j) = a[i][j];
  return A;
}

LMat random_full_rank(Rng& rng, std::size_t r, std::size_t s, long maxe) {
  for (;;) {
    LMat C(r, std::vector<long>(s));
    for (auto& row : C)
      for (auto& x : row) x = uniform(rng, 0, maxe);
    if (oracle::rank(oracle::to_q(C)) == r) return C;
  }
}

Poly random_poly(Rng& rng, std::size_t n, long maxdeg, std::size_t maxterms = 5) {
  Poly p(n);
  while (p.is_zero()) {
    for (long t = uniform(rng, 1, static_cast<long>(maxterms)); t > 0; --t) {
      Monomial m(n, 0);
      long budget = uniform(rng, 0, maxdeg);
      for (std::size_t j = 0; j < n && budget > 0; ++j) {
        const long e = j + 1 == n ? budget : uniform(rng, 0, budget);
        m[j] = e;
        budget -= e;
      }
      std::shuffle(m.begin(), m.end(), rng);
      long c = uniform(rng, -5, 5);
      if (c == 0) c = 1;
      p.add_term(m, {}, Rational(c));
    }
  }
  return p;
}

// Brute-force minimum of e . vals over the terms of f.
RatVector oracle_min(const Poly& f, const std::vector<RatVector>& vals, const std::vector<long>& ps) {
  std::optional<RatVector> best;
  for (const auto& [k, c] : f.terms()) {
    const RatVector v = combo(k.e, vals);
    if (!best || oracle_sign(minus(v, *best), ps) < 0) best = v;
  }
  return *best;
}

bool same_class(const std::vector<long>& a, const std::vector<long>& b, const LMat& C) {
  auto rows = oracle::to_q(C);
  std::vector<oracle::Q> d(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) d[j] = a[j] - b[j];
  rows.push_back(d);
  return oracle::rank(rows) == C.size();
}

// Step semantics as stated in the transform definitions, rebuilt here rather
// than taken from the solver: type I x_i = prod x'_j^{A_ij}; type II_r
// x_i = x'^{A0_i} c^{A_{i,nv}}, x_{nv+r} = x'^{a_row} (x'_{nv+r} + 1) c^{a_corner}.
Substitution oracle_substitution(const TransformStep& s, std::size_t nvars) {
  const std::size_t nv = s.kind == TransformStep::Kind::TypeI ? s.A.rows() : s.A.rows() - 1;
  Substitution sub;
  for (std::size_t i = 0; i < nvars; ++i) sub.push_back(Poly::variable(nvars, i));
  auto mono = [&](std::size_t row) {
    Monomial e(nvars, 0);
    for (std::size_t j = 0; j < nv; ++j) e[j] = to_int64(s.A(row, j));
    return Poly::monomial(nvars, e);
  };
  if (s.kind == TransformStep::Kind::TypeI) {
    for (std::size_t i = 0; i < nv; ++i) sub[i] = mono(i);
    return sub;
  }
  auto cpow = [&](const Integer& k) { return Poly::unit(nvars, s.c.pow(to_int64(k))); };
  for (std::size_t i = 0; i < nv; ++i) sub[i] = mono(i) * cpow(s.A(i, nv));
  const std::size_t t = nv + s.r - 1;
  sub[t] = mono(nv) * (Poly::variable(nvars, t) + Poly::constant(nvars, 1)) * cpow(s.A(nv, nv));
  return sub;
}

// x_i -> y^{C_i} phi_i, tails x_{rbar+j} -> y_{sbar+j}
std::vector<Poly> oracle_relation(const CutsState& s) {
  std::vector<Poly> out;
  for (std::size_t i = 0; i < s.rbar; ++i) {
    Monomial e(s.n, 0);
    for (std::size_t j = 0; j < s.sbar; ++j) e[j] = to_int64(s.C(i, j));
    out.push_back(Poly::monomial(s.n, e) * Poly::unit(s.n, s.phis[i]));
  }
  for (std::size_t j = 0; j < s.l; ++j) out.push_back(Poly::variable(s.n, s.sbar + j));
  return out;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// 1. Gauss valuation multiplicativity
Tally gauss_multiplicativity() {
  Tally t;
  Rng rng(101);
  const auto b = sqrt_basis(kPrimes3);
  const auto t0 = Clock::now();
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = uniform(rng, 1, 3);
    const auto coords = random_coords(rng, n, kPrimes3);
    const auto vals = as_values(coords, b);
    const Poly f = random_poly(rng, n, 6), g = random_poly(rng, n, 6);
    const GaussValue gf = gauss_value(f, vals), gg = gauss_value(g, vals), gfg = gauss_value(f * g, vals);
    t.need(gf.finite() && gg.finite() && gfg.finite(), "finite values");
    t.need(gf.value.coords() == oracle_min(f, coords, kPrimes3), "gauss_value(f) vs brute-force minimum");
    t.need(gg.value.coords() == oracle_min(g, coords, kPrimes3), "gauss_value(g) vs brute-force minimum");
    t.need(gfg.value == gf.value + gg.value, "gauss_value(fg) = gauss_value(f) + gauss_value(g)");
  }
  const double sec = seconds_since(t0);
  t.need(sec < kGaussSeconds, "runtime " + std::to_string(sec) + " s");
  return t;
}

// 2. Perron steps
Tally perron_suite() {
  Tally t;
  Rng rng(202);
  const auto b = sqrt_basis(kPrimes3);
  const auto t0 = Clock::now();
  for (int it = 0; it < 500; ++it) {
    const std::size_t r = uniform(rng, 1, 3);
    auto coords = random_coords(rng, r, kPrimes3);
    auto vals = as_values(coords, b);
    for (int step = 0; step < 4; ++step) {
      const PerronStepResult st = perron_step(vals);
      const LMat A = to_long(st.step.A);
      const long det = oracle::det_long(A);
      t.need(det == 1 || det == -1, "det +-1");
      bool nonneg = true;
      for (const auto& row : A)
        for (long x : row) nonneg = nonneg && x >= 0;
      t.need(nonneg, "nonnegative entries");
      std::vector<RatVector> after;
      for (const auto& v : st.vals) {
        after.push_back(v.coords());
        t.need(oracle_sign(v.coords(), kPrimes3) > 0, "post-values positive");
      }
      // old = A * new
      for (std::size_t i = 0; i < r; ++i) t.need(combo(A[i], after) == coords[i], "values transform by A^-1");
      t.need(oracle::rank(after) == oracle::rank(coords), "rank preserved");
      coords = after;
      vals = st.vals;
    }
  }
  const double sec = seconds_since(t0);
  t.need(sec < kPerronSeconds, "runtime " + std::to_string(sec) + " s");
  return t;
}

// 3. Divisibility normalization
Tally divisibility_suite() {
  Tally t;
  Rng rng(303);
  const auto b = sqrt_basis(kPrimes3);
  std::size_t cap_failures = 0;
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = it < 100 ? 2 : 3;
    const auto coords = random_coords(rng, n, kPrimes3);
    const auto vals = as_values(coords, b);
    std::vector<long> a(n), c(n);
    do {
      for (auto& x : a) x = uniform(rng, 0, 5);
      for (auto& x : c) x = uniform(rng, 0, 5);
    } while (a == c);
    if (oracle_sign(minus(combo(c, coords), combo(a, coords)), kPrimes3) < 0) std::swap(a, c);
    IntVector ai(a.begin(), a.end()), ci(c.begin(), c.end());
    DivisibilityResult res;
    try {
      res = monomialize_divisibility(ai, ci, vals, kDivisibilityCap);
    } catch (const CapExceeded&) {
      ++cap_failures;
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) t.need(res.a[j] <= res.b[j], "a' <= b'");
    std::vector<long> ea = a, eb = c;
    Poly pa = Poly::monomial(n, a), pb = Poly::monomial(n, c);
    for (const auto& st : res.steps) {
      const LMat A = to_long(st.A);
      std::vector<long> na(n, 0), nb(n, 0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          na[j] += ea[i] * A[i][j];
          nb[j] += eb[i] * A[i][j];
        }
      ea = na;
      eb = nb;
      pa = substitute(pa, oracle_substitution(st, n));
      pb = substitute(pb, oracle_substitution(st, n));
    }
    t.need(IntVector(ea.begin(), ea.end()) == res.a && IntVector(eb.begin(), eb.end()) == res.b,
           "exponents follow the steps");
    t.need(pa == Poly::monomial(n, ea) && pb == Poly::monomial(n, eb), "substitution round trip");
  }
  t.need(cap_failures == 0, std::to_string(cap_failures) + " cap failures");
  return t;
}

// 4. Lattice oracle equivalence
Tally lattice_suite() {
  Tally t;
  Rng rng(404);
  for (int it = 0; it < 100; ++it) {
    const std::size_t s = uniform(rng, 1, 3), r = uniform(rng, 1, static_cast<long>(s));
    const LMat C = random_full_rank(rng, r, s, 4);
    const IntMatrix Cm = from_long(C);
    const PreimageLattice pl = preimage_lattice(Cm);

    const long N = oracle::smallest_minor(C).det;
    const long side = 2 * N + 1;
    long cells = 1;
    for (std::size_t i = 0; i < r; ++i) cells *= side;
    auto check_point = [&](const std::vector<long>& a) {
      RatVector v(r);
      for (std::size_t i = 0; i < r; ++i) {
        v[i] = Rational(a[i], N);
        v[i].canonicalize();
      }
      const bool want = oracle::in_G(v, C);
      t.need(in_preimage(v, Cm) == want, "in_preimage vs vC in Z^s");
      t.need(in_lattice(v, pl) == want, "lattice basis membership vs vC in Z^s");
    };
    std::vector<long> a(r);
    if (cells <= 5000) {
      for (long k = 0; k < cells; ++k) {
        long q = k;
        for (std::size_t i = 0; i < r; ++i, q /= side) a[i] = q % side - N;
        check_point(a);
      }
    } else {
      for (int k = 0; k < 5000; ++k) {
        for (auto& x : a) x = uniform(rng, -N, N);
        check_point(a);
      }
    }
    t.need(pl.index == oracle::brute_index(C), "index vs brute-force coset count");

    for (bool integral : {true, false}) {
      const auto hb = hilbert_basis(Cm, integral ? SemigroupKind::H : SemigroupKind::I);
      std::set<RatVector> in_box;
      for (const auto& v : hb.hilbert) {
        const auto img = oracle::image(v, C);
        t.need(oracle::in_G(v, C) && oracle::nonneg(img) && (!integral || oracle::integral(v)),
               "Hilbert element lies in the semigroup");
        bool inside = true;
        for (const auto& q : img) inside = inside && q <= kHilbertBox;
        if (inside) in_box.insert(v);
      }
      t.need(in_box == oracle::brute_irreducibles(C, kHilbertBox, integral),
             integral ? "Hilbert basis of H vs brute force" : "Hilbert basis of I vs brute force");
    }

    if (it < 50) {
      std::vector<long> lam(s);
      for (auto& x : lam) x = uniform(rng, 0, 4);
      const ModuleGens mg = module_generators(Cm, IntVector(lam.begin(), lam.end()));
      for (const auto& u : mg.gens) {
        auto img = oracle::image(u, C);
        for (std::size_t j = 0; j < s; ++j) img[j] += lam[j];
        t.need(oracle::in_G(u, C) && oracle::nonneg(img), "generator lies in M_Lambda");
      }
      for (const auto& v : oracle::module_box_points(C, lam, kModuleBox)) {
        bool covered = false;
        for (const auto& u : mg.gens) {
          RatVector d(r);
          for (std::size_t i = 0; i < r; ++i) d[i] = v[i] - u[i];
          if (oracle::integral(d) && oracle::nonneg(oracle::image(d, C))) {
            covered = true;
            break;
          }
        }
        t.need(covered, "module_generators cover M_Lambda");
      }
    }
  }
  return t;
}

// 5. Cosets
Tally coset_suite() {
  Tally t;
  Rng rng(505);
  const auto b = sqrt_basis(kPrimes3);
  for (int it = 0; it < 200; ++it) {
    const std::size_t s = uniform(rng, 1, 3), r = uniform(rng, 1, static_cast<long>(s));
    const LMat C = random_full_rank(rng, r, s, 3);
    const std::size_t nvars = s + uniform(rng, 0, 1);
    const Poly f = random_poly(rng, nvars, 6, 8);
    const auto parts = decompose(f, from_long(C));
    Poly sum(nvars);
    std::size_t terms = 0;
    std::vector<std::vector<long>> reps;
    for (const auto& [cls, h] : parts) {
      sum = sum + h;
      terms += h.size();
      const auto& first = h.terms().begin()->first.e;
      const std::vector<long> rep(first.begin(), first.begin() + static_cast<long>(s));
      for (const auto& [k, c] : h.terms())
        t.need(same_class(std::vector<long>(k.e.begin(), k.e.begin() + static_cast<long>(s)), rep, C),
               "terms of one part share a class");
      for (const auto& other : reps) t.need(!same_class(rep, other, C), "parts have distinct classes");
      reps.push_back(rep);
    }
    t.need(sum == f && terms == f.size(), "decompose partitions and re-sums");
  }
  // class values on polynomial parts only; truncated parts are not covered
  for (int it = 0; it < 200; ++it) {
    const std::size_t s = uniform(rng, 1, 3), r = uniform(rng, 1, static_cast<long>(s));
    const LMat C = random_full_rank(rng, r, s, 3);
    const auto coords = random_coords(rng, s, kPrimes3);
    const auto vals = as_values(coords, b);
    const Poly f = random_poly(rng, s, 6, 8);
    const auto parts = decompose(f, from_long(C));
    std::vector<RatVector> seen;
    for (const auto& [cls, h] : parts) {
      const GaussValue g = gauss_value(h, vals);
      t.need(g.finite(), "finite class value");
      t.need(g.value.coords() == oracle_min(h, coords, kPrimes3), "class value vs brute force");
      for (const auto& v : seen) t.need(oracle_sign(minus(v, g.value.coords()), kPrimes3) != 0, "distinct class values");
      seen.push_back(g.value.coords());
    }
    const MinClass mc = min_value_class(parts, vals);
    t.need(mc.value.coords() == oracle_min(f, coords, kPrimes3), "min_value_class attains the minimum");
  }
  for (int it = 0; it < 100; ++it) {
    const std::size_t s = uniform(rng, 2, 3), r = uniform(rng, 1, static_cast<long>(s) - 1);
    const LMat C = random_full_rank(rng, r, s, 3);
    const IntMatrix Cm = from_long(C);
    const Poly f = random_poly(rng, s, 6, 8);
    for (const auto& [cls, h] : decompose(f, Cm)) {
      if (cls.is_zero()) continue;
      const auto& k = h.terms().begin()->first.e;
      const IntVector lam(k.begin(), k.begin() + static_cast<long>(s));
      const RatVector e = kernel_derivation_vector(Cm, lam);
      for (const auto& row : C) {
        Rational acc = 0;
        for (std::size_t j = 0; j < s; ++j) acc += Rational(row[j]) * e[j];
        t.need(acc == 0, "C e = 0");
      }
      Rational le = 0;
      for (std::size_t j = 0; j < s; ++j) le += Rational(lam[j]) * e[j];
      t.need(le != 0, "Lambda . e != 0");
      t.need(derivation_apply(h, e) == le * h, "eigen-derivation identity");
    }
  }
  return t;
}

// 6. CUTS lifting
struct LiftInstance {
  CutsState state;
  LMat A0, A0inv;
};

LiftInstance random_lift_instance(Rng& rng, std::size_t lmin) {
  const auto b = sqrt_basis(kPrimes4);
  const std::size_t l = uniform(rng, static_cast<long>(lmin), 2);
  const std::size_t rbar = uniform(rng, 1, 4 - static_cast<long>(l));
  const std::size_t sbar = uniform(rng, static_cast<long>(rbar), 4 - static_cast<long>(l));
  const LMat C = random_full_rank(rng, rbar, sbar, 3);
  std::vector<UnitExpr> phis;
  for (std::size_t i = 0; i < rbar; ++i) phis.push_back(UnitExpr::symbol(phi_symbol(i)));
  LiftInstance inst{make_state(from_long(C), phis, as_values(random_coords(rng, sbar, kPrimes4), b), l, sbar + l), {}, {}};

  // legal T-side block: elementary moves x_i = x_i' x_j' with nu(x_i) > nu(x_j)
  LMat A(rbar, std::vector<long>(rbar, 0)), Ainv = A;
  for (std::size_t i = 0; i < rbar; ++i) A[i][i] = Ainv[i][i] = 1;
  std::vector<RatVector> x;
  for (const auto& v : inst.state.xvals) x.push_back(v.coords());
  for (long k = uniform(rng, 0, 3); k > 0 && rbar > 1; --k) {
    const std::size_t i = uniform(rng, 0, rbar - 1), j = uniform(rng, 0, rbar - 1);
    if (i == j || oracle_sign(minus(x[i], x[j]), kPrimes4) <= 0) continue;
    x[i] = minus(x[i], x[j]);
    for (std::size_t q = 0; q < rbar; ++q) A[q][j] += A[q][i];        // A * (I + e_i e_j^T)
    for (std::size_t q = 0; q < rbar; ++q) Ainv[i][q] -= Ainv[j][q];  // (I - e_i e_j^T) * Ainv
  }
  inst.A0 = A;
  inst.A0inv = Ainv;
  return inst;
}

void check_lift(Tally& t, const CutsState& before, const CutsState& after, std::optional<std::size_t> moved_tail) {
  t.need(oracle::rank(oracle::to_q(to_long(after.C))) == before.rbar, "rank(C') = rbar");
  t.need(after.l == before.l && after.m == before.m && after.n == before.n, "shape preserved");
  t.need(after.t_history.size() == before.t_history.size() + 1, "one T step");

  // y = pulled through the new U steps
  Substitution u;
  for (std::size_t i = 0; i < before.n; ++i) u.push_back(Poly::variable(before.n, i));
  for (std::size_t k = before.u_history.size(); k < after.u_history.size(); ++k) {
    const Substitution st = oracle_substitution(after.u_history[k], before.n);
    for (auto& p : u) p = substitute(p, st);
  }
  for (std::size_t j = 0; j < before.l; ++j)
    if (!moved_tail || *moved_tail != j)
      t.need(u[before.sbar + j] == Poly::variable(before.n, before.sbar + j), "untouched tails preserved");

  const auto rel_before = oracle_relation(before), rel_after = oracle_relation(after);
  const Substitution tstep = oracle_substitution(after.t_history.back(), before.m);
  for (std::size_t i = 0; i < before.m; ++i) {
    const Poly lhs = substitute(rel_before[i], u);
    const Poly rhs = substitute(tstep[i], rel_after);
    t.need(lhs == rhs, i < before.rbar ? "compatibility identity" : "tail relation compatibility");
  }
}

Tally lift_suite() {
  Tally t;
  Rng rng(606);
  const auto t0 = Clock::now();
  for (int it = 0; it < 100; ++it) {
    const LiftInstance inst = random_lift_instance(rng, 0);
    const CutsState after = lift_type_I(inst.state, from_long(inst.A0));
    check_lift(t, inst.state, after, std::nullopt);
  }
  const std::vector<UnitExpr> consts{UnitExpr(Rational(1)), UnitExpr(Rational(-1)), UnitExpr(Rational(2)),
                                     UnitExpr(Rational(-3, 2)), UnitExpr::symbol("c"),
                                     UnitExpr(Rational(1, 3)) * UnitExpr::symbol("c", -1)};
  for (int it = 0; it < 50;) {
    const LiftInstance inst = random_lift_instance(rng, 1);
    const std::size_t rb = inst.state.rbar;
    std::vector<long> a_row(rb), a_col(rb);
    for (auto& v : a_row) v = uniform(rng, 0, 2);
    for (auto& v : a_col) v = uniform(rng, 0, 2);
    long q = 0;
    for (std::size_t i = 0; i < rb; ++i)
      for (std::size_t j = 0; j < rb; ++j) q += a_row[i] * inst.A0inv[i][j] * a_col[j];
    const long corner = q + (uniform(rng, 0, 1) ? 1 : -1);
    if (corner < 0) continue;
    LMat A(rb + 1, std::vector<long>(rb + 1));
    for (std::size_t i = 0; i < rb; ++i) {
      for (std::size_t j = 0; j < rb; ++j) A[i][j] = inst.A0[i][j];
      A[i][rb] = a_col[i];
      A[rb][i] = a_row[i];
    }
    A[rb][rb] = corner;
    const std::size_t r = uniform(rng, 1, static_cast<long>(inst.state.l));
    const UnitExpr& c = consts[uniform(rng, 0, static_cast<long>(consts.size()) - 1)];
    const CutsState after = lift_type_II(inst.state, r, c, from_long(A));
    check_lift(t, inst.state, after, r - 1);
    ++it;
  }
  const double sec = seconds_since(t0);
  t.need(sec < kLiftSeconds, "runtime " + std::to_string(sec) + " s");
  return t;
}

// 7. End-to-end catalog
Tally catalog_suite() {
  Tally t;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(LMONO_PROBLEMS_DIR))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  t.need(files.size() == 10, std::to_string(files.size()) + " bundled problems");
  for (const auto& f : files) {
    const std::string name = f.stem().string();
    const ExtensionProblem p = problem_from_json(load_json_file(f.string()));
    const SolveResult res = run_monomialization(p);
    t.need(res.ok, name + ": solves");
    if (!res.ok) continue;
    // certify the serialized form, as the CLI would
    const Certificate cert = certificate_from_json(parse_json_text(dump(certificate_to_json(make_certificate(p, res)))));
    t.need(check_certificate(cert, problem_hash(cert.problem)).ok(), name + ": certifier passes");
    if (cert.final_form.rbar == 0) continue;

    Certificate entry = cert;
    if (!entry.u_steps.empty())
      entry.u_steps[0].A(0, 0) += 1;
    else
      entry.final_form.C(0, 0) += 1;
    t.need(!check_certificate(entry).ok(), name + ": corrupted entry rejected");

    Certificate deficient = cert;
    IntMatrix& C = deficient.final_form.C;
    if (C.rows() == 1)
      C.set_row(0, IntVector(C.cols(), Integer(0)));
    else
      C.set_row(1, C.row(0));
    const Report rr = check_certificate(deficient);
    bool rank_item_failed = false;
    for (const auto& item : rr.items)
      if (item.name == "b.rank" && !item.ok) rank_item_failed = true;
    t.need(!rr.ok() && rank_item_failed, name + ": rank-deficient C rejected");
  }
  return t;
}

// 8. Rank bookkeeping on generated composite instances
std::vector<std::size_t> contraction_dims(const std::vector<std::vector<RatVector>>& xlevels, std::size_t nlevels) {
  // dim {w : sum_i w_i X_i vanishes on the top k levels}, k = 0..nlevels
  const std::size_t r = xlevels.size();
  std::vector<std::size_t> dims{r};
  std::vector<std::vector<oracle::Q>> rows;
  for (std::size_t k = 0; k < nlevels; ++k) {
    for (std::size_t c = 0; c < xlevels[0][k].size(); ++c) {
      std::vector<oracle::Q> row(r);
      for (std::size_t i = 0; i < r; ++i) row[i] = xlevels[i][k][c];
      rows.push_back(row);
    }
    dims.push_back(r - oracle::rank(rows));
  }
  return dims;
}

// beta levels of nu* on y_1..y_sbar: each y_j leads at a home level with a
// positive value, levels below are free, and the y's are rationally
// independent.
std::vector<CompositeLevel> random_u_levels(Rng& rng, std::size_t sbar, std::size_t beta) {
  const std::vector<std::vector<long>> level_bases{{}, {2}, {3}, {2, 3}, {2, 3, 5}};
  for (;;) {
    std::vector<CompositeLevel> levels;
    std::vector<std::vector<long>> primes;
    std::size_t width = 0;
    for (std::size_t L = 0; L < beta; ++L) {
      const auto& ps = level_bases[uniform(rng, 0, 4)];
      CompositeLevel lev;
      if (ps.empty()) lev.basis = {GeneratorDescriptor::one()};
      for (long p : ps) lev.basis.push_back(GeneratorDescriptor::sqrt(p));
      lev.coords.assign(sbar, RatVector(lev.basis.size()));
      width += lev.basis.size();
      levels.push_back(lev);
      primes.push_back(ps);
    }
    if (width < sbar) continue;
    for (std::size_t j = 0; j < sbar; ++j) {
      const std::size_t home = j < beta ? j : uniform(rng, 0, static_cast<long>(beta) - 1);
      for (std::size_t L = home; L < beta; ++L) {
        RatVector& c = levels[L].coords[j];
        do {
          for (auto& q : c) q = uniform(rng, L == home ? 0 : -3, 3);
        } while (L == home && (primes[L].empty() ? c[0] <= 0 : oracle_sign(c, primes[L]) <= 0));
      }
    }
    std::vector<std::vector<oracle::Q>> flat(sbar);
    for (std::size_t j = 0; j < sbar; ++j)
      for (const auto& lev : levels) flat[j].insert(flat[j].end(), lev.coords[j].begin(), lev.coords[j].end());
    if (oracle::rank(flat) == sbar) return levels;
  }
}

Tally bookkeeping_suite() {
  Tally t;
  Rng rng(808);
  for (int it = 0; it < 100; ++it) {
    const std::size_t sbar = uniform(rng, 1, 3), rbar = uniform(rng, 1, static_cast<long>(sbar));
    const std::size_t beta = uniform(rng, 1, static_cast<long>(sbar));
    CompositeDecl cd;
    cd.u_levels = random_u_levels(rng, sbar, beta);
    const LMat C = random_full_rank(rng, rbar, sbar, 3);

    std::vector<std::vector<RatVector>> X(rbar);
    for (std::size_t i = 0; i < rbar; ++i)
      for (std::size_t L = 0; L < beta; ++L) X[i].push_back(combo(C[i], cd.u_levels[L].coords));
    const auto dims = contraction_dims(X, beta);
    std::size_t rank_nu = 0;
    for (std::size_t k = 1; k <= beta; ++k)
      if (dims[k] < dims[k - 1]) {
        ++rank_nu;
        CompositeLevel lev;
        lev.basis = cd.u_levels[k - 1].basis;
        for (std::size_t i = 0; i < rbar; ++i) lev.coords.push_back(X[i][k - 1]);
        cd.t_levels.push_back(lev);
      }
    t.need(dims.back() == 0, "generator: nu is injective on the x's");
    t.need(rbar <= sbar, "rbar <= sbar");
    t.need(rank_nu <= beta, "rank(nu) <= rank(nu*) (oracle)");

    ExtensionProblem p;
    p.name = "composite" + std::to_string(it);
    p.m = rbar;
    p.n = sbar;
    p.basis = {GeneratorDescriptor::sqrt(2), GeneratorDescriptor::sqrt(3), GeneratorDescriptor::sqrt(5)};
    p.yvals = random_coords(rng, sbar, kPrimes3);
    for (std::size_t i = 0; i < rbar; ++i) {
      ProblemRow row;
      Monomial e(C[i].begin(), C[i].end());
      Poly f = Poly::monomial(sbar, e);
      e[uniform(rng, 0, static_cast<long>(sbar) - 1)] += 1;
      f = f + Poly::monomial(sbar, e, Rational(uniform(rng, 1, 3)));
      row.f = TruncatedSeries(f, std::nullopt);
      p.rows.push_back(row);
    }
    p.composite = cd;
    const SolveResult res = run_monomialization(p);
    t.need(res.ok, p.name + " solves");
    if (!res.ok) continue;
    const Certificate cert = make_certificate(p, res);
    const Report rep = check_rank_bookkeeping(p, cert);
    t.need(rep.ok(), p.name + ": " + (rep.first_failure() ? rep.first_failure()->name : std::string()));
    for (const auto& item : rep.items)
      if (item.name == "contraction_alignment") {
        std::string want;
        // T_k matches the first U level at which the k-th drop has happened
        std::size_t k = 0;
        for (std::size_t q = 0; q <= beta; ++q)
          if (q == 0 || dims[q] < dims[q - 1]) {
            if (!want.empty()) want += ' ';
            want += "T" + std::to_string(k++) + "->U" + std::to_string(q);
          }
        t.need(item.detail == want, p.name + ": alignment " + item.detail + " vs " + want);
      }
    t.need(check_certificate(cert, problem_hash(p)).ok(), p.name + " certificate passes");
  }
  return t;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Tally()> run;
  };
  const std::vector<Criterion> criteria{
      {"Gauss valuation multiplicativity", gauss_multiplicativity},
      {"Perron step suite", perron_suite},
      {"Divisibility normalization", divisibility_suite},
      {"Lattice oracle equivalence", lattice_suite},
      {"Coset suite", coset_suite},
      {"CUTS lifting", lift_suite},
      {"End-to-end catalog", catalog_suite},
      {"Bookkeeping inequalities", bookkeeping_suite},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Tally t;
    try {
      t = criteria[i].run();
    } catch (const std::exception& e) {
      t.need(false, std::string("exception: ") + e.what());
    }
    const double sec = seconds_since(t0);
    const bool ok = t.failures == 0;
    failed += !ok;
    std::printf("[%s] criterion %zu: %s (%zu checks, %.2f s)%s%s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].name,
                t.checks, sec, ok ? "" : " first failure: ", ok ? "" : t.first.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed ? 1 : 0;
}
