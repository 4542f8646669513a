#include "lmono/cuts.hpp"

#include <algorithm>

namespace lmono {

namespace {

Value combine(const IntVector& row, std::span<const Value> vals) {
  return dot(std::span<const Integer>(row), vals);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error("CUTS invariant violated: " + what);
}

UnitExpr unit_product(std::span<const UnitExpr> units, const IntVector& exps) {
  UnitExpr acc;
  for (std::size_t i = 0; i < units.size(); ++i)
    if (exps[i] != 0) acc = acc * units[i].pow(to_int64(exps[i]));
  return acc;
}

bool all_positive(std::span<const Value> vals) {
  return std::all_of(vals.begin(), vals.end(), [](const Value& v) { return v.sign() > 0; });
}

Substitution chain_substitution(const TransformSeq& steps, std::size_t first, std::size_t nvars) {
  Substitution acc = identity_substitution(nvars);
  for (std::size_t i = first; i < steps.size(); ++i) acc = compose(acc, step_substitution(steps[i], nvars));
  return acc;
}

}  // namespace

void validate_state(const CutsState& s) {
  require(s.C.rows() == s.rbar && s.C.cols() == s.sbar, "C has shape rbar x sbar");
  require(s.phis.size() == s.rbar, "one unit per valued row");
  require(s.xvals.size() == s.rbar && s.yvals.size() == s.sbar, "value counts");
  require(s.m == s.rbar + s.l, "m = rbar + l");
  require(s.n >= s.sbar + s.l, "n >= sbar + l");
  require(s.rbar <= s.sbar, "rbar <= sbar");
  require(rank(s.C) == s.rbar, "rank(C) = rbar");
  require(is_nonnegative(s.C), "C >= 0");
  require(all_positive(s.yvals), "U-side values positive");
  require(is_rationally_independent(s.yvals), "U-side values independent");
  require(all_positive(s.xvals), "T-side values positive");
  require(is_rationally_independent(s.xvals), "T-side values independent");
  for (std::size_t i = 0; i < s.rbar; ++i)
    require(combine(s.C.row(i), s.yvals) == s.xvals[i], "nu(x_" + std::to_string(i + 1) + ") = C_i . nu*(y)");
}

CutsState make_state(IntMatrix C, std::vector<UnitExpr> phis, std::vector<Value> yvals, std::size_t l,
                     std::size_t n) {
  CutsState s;
  s.rbar = C.rows();
  s.sbar = C.cols();
  s.l = l;
  s.m = s.rbar + l;
  s.n = n;
  for (std::size_t i = 0; i < s.rbar; ++i) s.xvals.push_back(combine(C.row(i), yvals));
  s.C = std::move(C);
  s.phis = std::move(phis);
  s.yvals = std::move(yvals);
  validate_state(s);
  return s;
}

CutsState lift_type_I(const CutsState& s, const IntMatrix& A, std::size_t cap) {
  const TransformStep t = TransformStep::type_I(A);
  validate_step(t);
  if (A.rows() != s.rbar) throw PreconditionError("lift_type_I: A must be rbar x rbar");
  std::vector<Value> xvals = transform_values(t, s.xvals);
  const IntMatrix Ainv = unimodular_inverse(A);
  const IntMatrix M = Ainv * s.C;
  auto run = perron_until(s.yvals, [&](const IntMatrix& B) { return is_nonnegative(M * B); }, cap);

  CutsState out = s;
  out.C = M * run.cumulative;
  for (std::size_t k = 0; k < s.rbar; ++k) out.phis[k] = unit_product(s.phis, Ainv.row(k));
  out.xvals = std::move(xvals);
  out.yvals = std::move(run.vals);
  out.t_history.push_back(t);
  for (auto& st : run.steps) out.u_history.push_back(std::move(st));
  validate_state(out);
  return out;
}

CutsState lift_type_II(const CutsState& s, std::size_t r, const UnitExpr& c, const IntMatrix& A, std::size_t cap) {
  const TransformStep t = TransformStep::type_II(r, A, c);
  validate_step(t);
  const std::size_t rb = s.rbar;
  if (A.rows() != rb + 1) throw PreconditionError("lift_type_II: A must be (rbar+1) x (rbar+1)");
  if (r < 1 || r > s.l) throw PreconditionError("lift_type_II: r outside 1..l");
  const IntMatrix A0 = t.block();
  if (!is_unimodular(A0)) throw PreconditionError("lift_type_II: valued block A0 must be unimodular");
  std::vector<Value> xvals = rb ? transform_values(t, s.xvals) : std::vector<Value>{};
  const IntMatrix A0inv = unimodular_inverse(A0);
  IntVector a_row(rb), a_col(rb);
  for (std::size_t i = 0; i < rb; ++i) {
    a_row[i] = A(rb, i);
    a_col[i] = A(i, rb);
  }
  const Integer a_corner = A(rb, rb);
  const IntMatrix D1 = A0inv * s.C;
  const IntVector w = a_row * D1;
  auto run = perron_until(
      s.yvals, [&](const IntMatrix& B) { return is_nonnegative(D1 * B) && is_nonnegative(w * B); }, cap);

  const IntVector wB = w * run.cumulative;
  IntMatrix Bhat = IntMatrix::identity(s.sbar + 1);
  for (std::size_t j = 0; j < s.sbar; ++j) Bhat(s.sbar, j) = wB[j];
  const IntVector rowA0inv = a_row * A0inv;
  const UnitExpr kappa = unit_product(s.phis, rowA0inv) * c.pow(to_int64(a_corner - dot(rowA0inv, a_col)));
  TransformStep u = TransformStep::type_II(r, Bhat, kappa);
  validate_step(u);

  CutsState out = s;
  out.C = D1 * run.cumulative;
  const IntVector shift = A0inv * a_col;
  for (std::size_t k = 0; k < rb; ++k)
    out.phis[k] = unit_product(s.phis, A0inv.row(k)) * c.pow(-to_int64(shift[k]));
  out.xvals = std::move(xvals);
  out.yvals = std::move(run.vals);
  out.t_history.push_back(t);
  for (auto& st : run.steps) out.u_history.push_back(std::move(st));
  out.u_history.push_back(std::move(u));
  validate_state(out);
  return out;
}

std::string phi_symbol(std::size_t i) { return "phi" + std::to_string(i + 1); }

namespace {

// x_i -> y^{C_i} phi_i, x_{rbar+j} -> y_{sbar+j}
Substitution relation(const CutsState& s) {
  Substitution sub;
  for (std::size_t i = 0; i < s.rbar; ++i) {
    Monomial e(s.n, 0);
    for (std::size_t j = 0; j < s.sbar; ++j) e[j] = to_int64(s.C(i, j));
    sub.push_back(Poly::monomial(s.n, std::move(e)) * Poly::unit(s.n, s.phis[i]));
  }
  for (std::size_t j = 0; j < s.l; ++j) sub.push_back(Poly::variable(s.n, s.sbar + j));
  return sub;
}

}  // namespace

bool lift_is_compatible(const CutsState& before, const CutsState& after) {
  if (after.t_history.size() != before.t_history.size() + 1) return false;
  const Substitution u = chain_substitution(after.u_history, before.u_history.size(), before.n);
  const Substitution lhs = compose(relation(before), u);
  const Substitution t = step_substitution(after.t_history.back(), before.m);
  const Substitution rhs = compose(t, relation(after));
  return lhs == rhs;
}

void check_admissible(const ExtensionProblem& p) {
  auto fail = [&](const std::string& why) { throw PreconditionError("inadmissible problem: " + why); };
  const auto basis = EmbeddingBasis::make(p.basis);
  const std::size_t sbar = p.sbar();
  if (sbar > p.n) fail("more valued y's than U-side variables");
  std::vector<Value> yv;
  for (const auto& c : p.yvals) {
    if (c.size() != basis->dim()) fail("value coordinates do not match the basis");
    yv.emplace_back(basis, c);
  }
  if (!all_positive(yv)) fail("U-side values must be positive");
  if (!is_rationally_independent(yv)) fail("U-side values must be rationally independent");
  if (p.rows.size() != p.m) fail("expected one row per T-side parameter");
  std::size_t rbar = 0;
  while (rbar < p.rows.size() && p.rows[rbar].kind == ProblemRow::Kind::Series) ++rbar;
  std::vector<Value> xv;
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    const auto& row = p.rows[i];
    if (i >= rbar) {
      if (row.kind != ProblemRow::Kind::Tail) fail("series rows must precede tail identifications");
      if (row.y != sbar + (i - rbar) + 1)
        fail("row " + std::to_string(i + 1) + " must identify with y" + std::to_string(sbar + (i - rbar) + 1));
      if (row.y > p.n) fail("tail identification outside the U-side variables");
      continue;
    }
    if (row.f.nvars() != p.n) fail("row " + std::to_string(i + 1) + " is not a series in n variables");
    for (const auto& [k, c] : row.f.poly().terms())
      for (const auto& [name, e] : k.u)
        if (name.rfind(kDeltaPrefix, 0) == 0) fail("unit symbol names starting with 'delta' are reserved");
    for (const auto& [name, e] : row.unit.syms())
      if (name.rfind(kDeltaPrefix, 0) == 0) fail("unit symbol names starting with 'delta' are reserved");
    if (sbar == 0) fail("a valued row needs valued U-side variables");
    const GaussValue g = gauss_value(TruncatedSeries(row.f.poly(), p.trunc), yv);
    if (!g.finite()) fail("row " + std::to_string(i + 1) + " has no finite value below the truncation");
    if (g.value.sign() <= 0) fail("row " + std::to_string(i + 1) + " is a unit, not a parameter");
    xv.push_back(g.value);
  }
  if (!is_rationally_independent(xv)) fail("values of the series rows must be rationally independent");
  for (const auto& t : p.t_steps) {
    if (t.kind != TransformStep::Kind::TypeI)
      fail("T-side steps must be type I in a problem file (type II lifts are library-level)");
    if (t.A.rows() != rbar) fail("T-side step size must equal the number of series rows");
    validate_step(t);
  }
}

SolveResult run_monomialization(const ExtensionProblem& p, std::size_t cap) {
  check_admissible(p);
  const auto basis = EmbeddingBasis::make(p.basis);
  const std::size_t n = p.n, sbar = p.sbar();
  std::size_t rbar = 0;
  while (rbar < p.rows.size() && p.rows[rbar].kind == ProblemRow::Kind::Series) ++rbar;
  const std::size_t l = p.m - rbar;

  SolveResult res;
  for (const auto& c : p.yvals) res.yvals.emplace_back(basis, c);
  std::vector<Poly> fs;
  for (std::size_t i = 0; i < rbar; ++i)
    fs.push_back(Poly::unit(n, p.rows[i].unit) * p.rows[i].f.poly());
  std::vector<Monomial> ds(rbar);
  std::vector<TruncatedSeries> deltas(rbar);
  // Dropped terms have degree >= trunc in the original y, hence value at
  // least trunc * min nu*(y); monomial substitutions keep values.
  std::optional<Value> floor;
  if (p.trunc && !res.yvals.empty()) {
    Value least = res.yvals.front();
    for (const auto& v : res.yvals)
      if (cmp(v, least) == std::strong_ordering::less) least = v;
    floor = Rational(*p.trunc) * least;
  }

  try {
    for (std::size_t i = 0; i < rbar; ++i) {
      const Factorization fm = factor_monomial_unit(TruncatedSeries(fs[i], p.trunc), res.yvals, cap, floor);
      if (!fm.steps.empty()) {
        TransformSeq here(fm.steps.begin(), fm.steps.end());
        const Substitution sub = chain_substitution(here, 0, n);
        for (std::size_t k = i + 1; k < rbar; ++k) fs[k] = substitute(fs[k], sub, p.trunc);
        for (std::size_t k = 0; k < i; ++k) {
          const Poly mono = substitute(Poly::monomial(n, ds[k]), sub);
          ds[k] = mono.terms().begin()->first.e;
          deltas[k] = TruncatedSeries(substitute(deltas[k].poly(), sub, deltas[k].trunc()), deltas[k].trunc());
        }
        for (const auto& st : fm.steps) res.u_steps.push_back(st);
      }
      ds[i] = fm.d;
      deltas[i] = fm.u;
      res.yvals = fm.vals;
    }

    IntMatrix C(rbar, sbar);
    for (std::size_t i = 0; i < rbar; ++i)
      for (std::size_t j = 0; j < sbar; ++j) C(i, j) = ds[i][j];
    std::vector<UnitExpr> phis;
    for (std::size_t i = 0; i < rbar; ++i) phis.push_back(UnitExpr::symbol(kDeltaPrefix + std::to_string(i + 1)));
    CutsState state = make_state(C, phis, res.yvals, l, n);
    state.u_history = res.u_steps;

    for (const auto& t : p.t_steps) {
      const std::size_t before = state.u_history.size();
      state = lift_type_I(state, t.A, cap);
      const Substitution sub = chain_substitution(state.u_history, before, n);
      for (auto& d : deltas) d = TruncatedSeries(substitute(d.poly(), sub, d.trunc()), d.trunc());
    }

    res.t_steps = state.t_history;
    res.u_steps = state.u_history;
    res.xvals = state.xvals;
    res.yvals = state.yvals;
    MonomialForm& F = res.final_form;
    F.rbar = rbar;
    F.sbar = sbar;
    F.l = l;
    F.C = state.C;
    F.phis = state.phis;
    for (std::size_t i = 0; i < rbar; ++i) F.deltas.emplace(kDeltaPrefix + std::to_string(i + 1), deltas[i]);
    for (std::size_t j = 0; j < l; ++j) F.tails.emplace_back(rbar + j + 1, sbar + j + 1);
    res.ok = true;
  } catch (const CapExceeded& e) {
    res.ok = false;
    res.failure = e.what();
  }
  return res;
}

}  // namespace lmono
