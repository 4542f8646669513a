#include "lmono/certify.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "lmono/linalg.hpp"
#include "lmono/series.hpp"

namespace lmono {

void Report::add(std::string name, bool ok, std::string detail) {
  items.push_back({std::move(name), ok, std::move(detail)});
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (const auto& it : other.items) items.push_back({prefix + it.name, it.ok, it.detail});
}

bool Report::ok() const {
  return std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.ok; });
}

const CheckItem* Report::first_failure() const {
  for (const auto& it : items)
    if (!it.ok) return &it;
  return nullptr;
}

std::string Report::to_text() const {
  std::ostringstream os;
  for (const auto& it : items) {
    os << (it.ok ? "PASS " : "FAIL ") << it.name;
    if (!it.detail.empty()) os << ": " << it.detail;
    os << '\n';
  }
  os << (ok() ? "RESULT PASS" : "RESULT FAIL") << '\n';
  return os.str();
}

namespace {

// The certifier's own reading of a recorded step; mirrors the documented
// transform equations without going through the solver.
Substitution images_of(const TransformStep& s, std::size_t nvars) {
  const std::size_t N = s.A.rows();
  if (N != s.A.cols() || N == 0) throw Error("step matrix is not square");
  const bool two = s.kind == TransformStep::Kind::TypeII;
  const std::size_t nv = two ? N - 1 : N;
  if (nv > nvars) throw Error("step larger than the parameter system");
  Substitution sub(nvars);
  for (std::size_t i = 0; i < nvars; ++i) sub[i] = Poly::variable(nvars, i);
  auto mono = [&](std::size_t row) {
    Monomial e(nvars, 0);
    for (std::size_t j = 0; j < nv; ++j) {
      if (s.A(row, j) < 0) throw Error("negative exponent in step matrix");
      e[j] = to_int64(s.A(row, j));
    }
    return Poly::monomial(nvars, std::move(e));
  };
  for (std::size_t i = 0; i < nv; ++i) {
    sub[i] = mono(i);
    if (two) sub[i] = sub[i] * Poly::unit(nvars, s.c.pow(to_int64(s.A(i, nv))));
  }
  if (two) {
    if (s.r < 1 || nv + s.r > nvars) throw Error("type II index outside the trailing variables");
    const std::size_t t = nv + s.r - 1;
    sub[t] = mono(nv) * (Poly::variable(nvars, t) + Poly::constant(nvars, 1)) *
             Poly::unit(nvars, s.c.pow(to_int64(s.A(nv, nv))));
  }
  return sub;
}

IntMatrix valued_block(const TransformStep& s) {
  const std::size_t nv = s.kind == TransformStep::Kind::TypeII ? s.A.rows() - 1 : s.A.rows();
  IntMatrix b(nv, nv);
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t j = 0; j < nv; ++j) b(i, j) = s.A(i, j);
  return b;
}

bool has_type_II(const TransformSeq& seq) {
  return std::any_of(seq.begin(), seq.end(),
                     [](const TransformStep& s) { return s.kind == TransformStep::Kind::TypeII; });
}

std::size_t series_rows(const ExtensionProblem& p) {
  std::size_t r = 0;
  while (r < p.rows.size() && p.rows[r].kind == ProblemRow::Kind::Series) ++r;
  return r;
}

std::vector<Value> problem_yvals(const ExtensionProblem& p) {
  const auto basis = EmbeddingBasis::make(p.basis);
  std::vector<Value> out;
  for (const auto& c : p.yvals) out.emplace_back(basis, c);
  return out;
}

Poly row_poly(const ExtensionProblem& p, std::size_t i) {
  return Poly::unit(p.n, p.rows[i].unit) * p.rows[i].f.poly();
}

// Runs the step checks along a history; nullopt once a step fails.
std::optional<std::vector<Value>> walk(const TransformSeq& seq, std::vector<Value> vals, Report& rep,
                                       const std::string& side) {
  for (std::size_t k = 0; k < seq.size(); ++k) {
    std::vector<Value> next;
    Report r = check_step(seq[k], vals, &next);
    if (!r.ok()) {
      rep.merge(r, side + "[" + std::to_string(k) + "].");
      return std::nullopt;
    }
    vals = std::move(next);
  }
  rep.add(side + ".steps", true, std::to_string(seq.size()) + " legal steps");
  return vals;
}

bool delta_exponents_nonnegative(const Poly& f) {
  for (const auto& [k, c] : f.terms())
    for (const auto& [name, e] : k.u)
      if (e < 0 && name.rfind(kDeltaPrefix, 0) == 0) return false;
  return true;
}

void check_substitution(const Certificate& cert, Report& rep) {
  const ExtensionProblem& p = cert.problem;
  const MonomialForm& F = cert.final_form;
  const std::size_t m = p.m, n = p.n;
  const std::optional<long> D = p.trunc;
  if (D && (has_type_II(cert.u_steps) || has_type_II(cert.t_steps))) {
    rep.add("a.substitution", false, "truncated rows combined with type II steps are not supported");
    return;
  }
  std::optional<long> W = D ? std::optional<long>(*D + 2) : std::nullopt;

  Substitution Y(n);
  for (std::size_t i = 0; i < n; ++i) Y[i] = Poly::variable(n, i);
  for (const auto& s : cert.u_steps) Y = compose(Y, images_of(s, n), W);
  Substitution T(m);
  for (std::size_t i = 0; i < m; ++i) T[i] = Poly::variable(m, i);
  for (const auto& s : cert.t_steps) T = compose(T, images_of(s, m));

  Substitution R(m, Poly(n));
  for (std::size_t k = 0; k < F.rbar; ++k) {
    Monomial e(n, 0);
    for (std::size_t j = 0; j < F.sbar; ++j) {
      if (F.C(k, j) < 0) throw Error("negative entry in C");
      e[j] = to_int64(F.C(k, j));
    }
    R[k] = Poly::monomial(n, std::move(e), F.phis[k].scalar(), F.phis[k].syms());
  }
  for (const auto& [x, y] : F.tails) R[x - 1] = Poly::variable(n, y - 1);

  std::map<std::string, Poly> defs, inverses;
  for (const auto& [name, d] : F.deltas) defs.emplace(name, d.poly());
  std::optional<long> cmpD = D;
  for (std::size_t i = 0; i < m; ++i) {
    const Poly formal = substitute(T[i], R);
    if (!delta_exponents_nonnegative(formal) && inverses.empty()) {
      const long Dinv = W ? *W : kDefaultTrunc + 2;
      if (!cmpD) cmpD = kDefaultTrunc;
      for (const auto& [name, d] : defs) inverses.emplace(name, inverse_unit(d, Dinv));
      if (!W) W = Dinv;
    }
    Poly rhs = expand_symbols(formal, defs, inverses, W);
    Poly lhs = p.rows[i].kind == ProblemRow::Kind::Series ? substitute(row_poly(p, i), Y, W) : Y[p.rows[i].y - 1];
    if (cmpD) {
      rhs = rhs.truncated(*cmpD);
      lhs = lhs.truncated(*cmpD);
    }
    if (!(lhs == rhs)) {
      rep.add("a.substitution", false, "row " + std::to_string(i + 1) + " differs after pull-back");
      return;
    }
  }
  rep.add("a.substitution", true,
          cmpD ? "equal modulo degree " + std::to_string(*cmpD) + " (worked at " + std::to_string(*W) + ")"
               : "exact");
}

}  // namespace

Report check_step(const TransformStep& s, std::span<const Value> before, std::vector<Value>* after) {
  Report rep;
  const std::size_t N = s.A.rows();
  const bool two = s.kind == TransformStep::Kind::TypeII;
  if (N != s.A.cols() || N == 0 || (two && s.r < 1)) {
    rep.add("shape", false, "matrix " + std::to_string(N) + "x" + std::to_string(s.A.cols()));
    return rep;
  }
  const std::size_t nv = two ? N - 1 : N;
  if (before.size() != nv) {
    rep.add("shape", false, "step acts on " + std::to_string(nv) + " values, got " + std::to_string(before.size()));
    return rep;
  }
  rep.add("shape", true);
  const Integer det = determinant(s.A);
  rep.add("det", det == 1 || det == -1, "det " + to_string(det));
  rep.add("nonnegative", is_nonnegative(s.A));
  if (!rep.ok()) return rep;

  std::vector<Value> out;
  if (nv > 0) {
    const auto inv = inverse(to_rational(valued_block(s)));
    if (!inv) {
      rep.add("positive", false, "valued block is singular");
      return rep;
    }
    for (std::size_t i = 0; i < nv; ++i) {
      Value acc = Value::zero(before.front().basis());
      for (std::size_t j = 0; j < nv; ++j)
        if ((*inv)(i, j) != 0) acc = acc + (*inv)(i, j) * before[j];
      out.push_back(std::move(acc));
    }
  }
  bool pos = true;
  std::string where;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].sign() <= 0) {
      pos = false;
      where = "value " + std::to_string(i + 1) + " = " + out[i].to_string();
      break;
    }
  rep.add("positive", pos, where);
  rep.add("independent", is_rationally_independent(out));
  if (after) *after = std::move(out);
  return rep;
}

Report check_final_form(const Certificate& cert) {
  Report rep;
  const ExtensionProblem& p = cert.problem;
  const MonomialForm& F = cert.final_form;
  const std::size_t rbar = series_rows(p);
  const std::size_t sbar = p.sbar();
  const std::size_t l = p.m - rbar;

  bool shape = F.rbar == rbar && F.sbar == sbar && F.l == l && F.C.rows() == rbar && F.C.cols() == sbar &&
               F.phis.size() == rbar && F.deltas.size() == rbar && p.rows.size() == p.m && sbar + l <= p.n;
  rep.add("shape", shape, shape ? "" : "final form dimensions disagree with the problem");
  if (!shape) return rep;

  // (d) identification block
  bool tails = F.tails.size() == l;
  for (std::size_t j = 0; tails && j < l; ++j)
    tails = F.tails[j].first == rbar + j + 1 && F.tails[j].second == sbar + j + 1 &&
            p.rows[rbar + j].kind == ProblemRow::Kind::Tail && p.rows[rbar + j].y == sbar + j + 1;
  rep.add("d.tails", tails);

  // (b) rank of (c_ij) with the identification block
  IntMatrix full(p.m, p.n);
  for (std::size_t i = 0; i < rbar; ++i)
    for (std::size_t j = 0; j < sbar; ++j) full(i, j) = F.C(i, j);
  for (std::size_t j = 0; j < l; ++j) full(rbar + j, sbar + j) = 1;
  const std::size_t rk = rank(full);
  rep.add("b.rank", rk == p.m, "rank " + std::to_string(rk) + ", m = " + std::to_string(p.m));
  rep.add("b.nonnegative", is_nonnegative(F.C));

  // units
  bool units = true;
  std::string bad;
  for (std::size_t i = 0; i < rbar; ++i) {
    const std::string name = kDeltaPrefix + std::to_string(i + 1);
    auto it = F.deltas.find(name);
    if (it == F.deltas.end() || !is_unit(it->second)) {
      units = false;
      bad = name;
      break;
    }
  }
  rep.add("a.units", units, units ? "" : bad + " is missing or not a unit");
  if (!rep.ok()) return rep;

  // (c) values
  const auto y0 = problem_yvals(p);
  std::vector<Value> x0;
  for (std::size_t i = 0; i < rbar; ++i) {
    const GaussValue g = gauss_value(TruncatedSeries(row_poly(p, i), p.trunc), y0);
    if (!g.finite()) {
      rep.add("c.values", false, "row " + std::to_string(i + 1) + " has no finite value");
      return rep;
    }
    x0.push_back(g.value);
  }
  auto yv = walk(cert.u_steps, y0, rep, "u");
  auto xv = walk(cert.t_steps, x0, rep, "t");
  if (!yv || !xv) return rep;
  rep.add("c.independent", is_rationally_independent(*yv) && is_rationally_independent(*xv));
  bool match = true;
  for (std::size_t i = 0; i < rbar && match; ++i) {
    IntVector row(sbar);
    for (std::size_t j = 0; j < sbar; ++j) row[j] = F.C(i, j);
    match = dot(std::span<const Integer>(row), *yv) == (*xv)[i];
  }
  rep.add("c.values", match, match ? "" : "C nu(y') differs from nu(x')");

  // (a) substitution identity
  try {
    check_substitution(cert, rep);
  } catch (const std::exception& e) {
    rep.add("a.substitution", false, e.what());
  }
  return rep;
}

namespace {

// Coordinates of the composite value of sum_j E_ij y_j at each level.
std::vector<std::vector<RatVector>> level_values(const std::vector<CompositeLevel>& levels, const RatMatrix& E) {
  std::vector<std::vector<RatVector>> out(E.rows());
  for (std::size_t i = 0; i < E.rows(); ++i)
    for (const auto& L : levels) {
      RatVector acc(L.basis.size());
      for (std::size_t j = 0; j < E.cols(); ++j)
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += E(i, j) * L.coords[j][k];
      out[i].push_back(std::move(acc));
    }
  return out;
}

bool lex_positive(const std::vector<CompositeLevel>& levels, const std::vector<RatVector>& v) {
  for (std::size_t L = 0; L < levels.size(); ++L) {
    const Value val(EmbeddingBasis::make(levels[L].basis), v[L]);
    const int s = val.sign();
    if (s != 0) return s > 0;
  }
  return false;
}

// Basis rows of {w : sum_i w_i v_i vanishes on the top k levels}, k = 0..levels.
std::vector<RatMatrix> contraction_chain(const std::vector<std::vector<RatVector>>& vals, std::size_t nlevels) {
  const std::size_t r = vals.size();
  std::vector<RatMatrix> chain;
  for (std::size_t k = 0; k <= nlevels; ++k) {
    std::size_t width = 0;
    for (std::size_t L = 0; L < k; ++L) width += r ? vals[0][L].size() : 0;
    RatMatrix M(width, r);
    for (std::size_t i = 0; i < r; ++i) {
      std::size_t c = 0;
      for (std::size_t L = 0; L < k; ++L)
        for (const auto& q : vals[i][L]) M(c++, i) = q;
    }
    chain.push_back(width == 0 ? RatMatrix::identity(r) : right_kernel(M));
  }
  return chain;
}

bool same_subspace(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows()) return false;
  if (a.rows() == 0) return true;
  std::vector<RatVector> rows = a.to_rows();
  for (const auto& r : b.to_rows()) rows.push_back(r);
  return rank(RatMatrix::from_rows(rows)) == a.rows();
}

std::vector<std::size_t> distinct_dims(const std::vector<RatMatrix>& chain) {
  std::vector<std::size_t> dims;
  for (const auto& s : chain)
    if (dims.empty() || dims.back() != s.rows()) dims.push_back(s.rows());
  return dims;
}

bool level_shapes_ok(const std::vector<CompositeLevel>& levels, std::size_t nvars) {
  for (const auto& L : levels) {
    if (L.basis.empty() || L.coords.size() != nvars) return false;
    for (const auto& c : L.coords)
      if (c.size() != L.basis.size()) return false;
  }
  return true;
}

}  // namespace

Report check_rank_bookkeeping(const ExtensionProblem& p, const Certificate& cert) {
  (void)cert;
  Report rep;
  const std::size_t rbar = series_rows(p), sbar = p.sbar();
  rep.add("rbar<=sbar", rbar <= sbar, "rbar " + std::to_string(rbar) + ", sbar " + std::to_string(sbar));
  if (!p.composite || p.composite->u_levels.empty()) {
    rep.add("rank", true, "rank 1 on both sides");
    return rep;
  }
  const CompositeDecl& cd = *p.composite;
  const bool shapes = level_shapes_ok(cd.u_levels, sbar) && level_shapes_ok(cd.t_levels, rbar);
  rep.add("composite.shape", shapes);
  if (!shapes) return rep;

  const std::size_t beta = cd.u_levels.size();
  bool ypos = true;
  for (std::size_t j = 0; j < sbar && ypos; ++j) {
    std::vector<RatVector> v;
    for (const auto& L : cd.u_levels) v.push_back(L.coords[j]);
    ypos = lex_positive(cd.u_levels, v);
  }
  rep.add("composite.u_positive", ypos);
  bool nontrivial = true;
  for (const auto& L : cd.u_levels)
    nontrivial = nontrivial && std::any_of(L.coords.begin(), L.coords.end(), [](const RatVector& c) {
                   return std::any_of(c.begin(), c.end(), [](const Rational& q) { return q != 0; });
                 });
  rep.add("composite.u_levels_nontrivial", nontrivial);

  // leading exponents of the series rows under the rank-1 values
  const auto y0 = problem_yvals(p);
  RatMatrix C0(rbar, sbar);
  for (std::size_t i = 0; i < rbar; ++i) {
    const GaussValue g = gauss_value(TruncatedSeries(row_poly(p, i), p.trunc), y0);
    if (!g.finite()) {
      rep.add("composite.leading", false, "row " + std::to_string(i + 1) + " has no finite value");
      return rep;
    }
    for (std::size_t j = 0; j < sbar; ++j) C0(i, j) = g.argmin[j];
  }
  const auto xv = level_values(cd.u_levels, C0);
  bool xpos = true;
  for (const auto& v : xv) xpos = xpos && lex_positive(cd.u_levels, v);
  rep.add("composite.x_positive", xpos);

  const auto uchain = contraction_chain(xv, beta);
  const auto udims = distinct_dims(uchain);
  const std::size_t rank_nu = udims.size() - 1;
  rep.add("rank(nu)<=rank(nu*)", rank_nu <= beta,
          "rank(nu) " + std::to_string(rank_nu) + ", rank(nu*) " + std::to_string(beta));

  if (cd.t_levels.empty()) return rep;
  std::vector<std::vector<RatVector>> tv(rbar);
  for (std::size_t i = 0; i < rbar; ++i)
    for (const auto& L : cd.t_levels) tv[i].push_back(L.coords[i]);
  bool tpos = true;
  for (const auto& v : tv) tpos = tpos && lex_positive(cd.t_levels, v);
  rep.add("composite.t_positive", tpos);
  const auto tchain = contraction_chain(tv, cd.t_levels.size());
  std::ostringstream map;
  bool aligned = true;
  for (std::size_t k = 0; k < tchain.size(); ++k) {
    std::optional<std::size_t> hit;
    for (std::size_t q = 0; q < uchain.size() && !hit; ++q)
      if (same_subspace(tchain[k], uchain[q])) hit = q;
    if (!hit) {
      aligned = false;
      map << "T" << k << "->none ";
    } else {
      map << "T" << k << "->U" << *hit << ' ';
    }
  }
  std::string chain = map.str();
  if (!chain.empty()) chain.pop_back();
  rep.add("contraction_alignment", aligned, chain);
  const std::size_t rank_t = distinct_dims(tchain).size() - 1;
  rep.add("t_rank", rank_t == rank_nu,
          "declared T-side rank " + std::to_string(rank_t) + ", contraction rank " + std::to_string(rank_nu));
  return rep;
}

Report check_certificate(const Certificate& cert, const std::string& computed_hash) {
  Report rep;
  if (!computed_hash.empty())
    rep.add("problem_hash", computed_hash == cert.problem_hash, "recorded " + cert.problem_hash);
  rep.add("status", cert.solved, cert.solved ? "solved" : "solver reported failure: " + cert.failure);
  if (!cert.solved) return rep;
  try {
    rep.merge(check_final_form(cert));
    rep.merge(check_rank_bookkeeping(cert.problem, cert), "bookkeeping.");
  } catch (const std::exception& e) {
    rep.add("internal", false, e.what());
  }
  return rep;
}

}  // namespace lmono
