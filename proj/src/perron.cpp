#include "lmono/perron.hpp"

#include <string>

namespace lmono {

void validate_step(const TransformStep& s) {
  if (s.A.rows() != s.A.cols()) throw PreconditionError("transform matrix is not square");
  if (s.kind == TransformStep::Kind::TypeII) {
    if (s.A.rows() < 1) throw PreconditionError("type II matrix needs size >= 1");
    if (s.r < 1) throw PreconditionError("type II index r must be >= 1");
  }
  if (!is_nonnegative(s.A)) throw PreconditionError("transform matrix has a negative entry");
  if (!is_unimodular(s.A)) throw PreconditionError("transform matrix determinant is not +-1");
}

namespace {

Poly unit_power(std::size_t nvars, const UnitExpr& c, const Integer& k) {
  return Poly::unit(nvars, c.pow(to_int64(k)));
}

Monomial row_monomial(const IntMatrix& A, std::size_t i, std::size_t ncols, std::size_t nvars) {
  Monomial e(nvars, 0);
  for (std::size_t j = 0; j < ncols; ++j) e[j] = to_int64(A(i, j));
  return e;
}

}  // namespace

Substitution step_substitution(const TransformStep& s, std::size_t nvars) {
  validate_step(s);
  const std::size_t nv = s.valued_dim();
  if (nv > nvars) throw PreconditionError("transform larger than the parameter system");
  Substitution sub = identity_substitution(nvars);
  if (s.kind == TransformStep::Kind::TypeI) {
    for (std::size_t i = 0; i < nv; ++i) sub[i] = Poly::monomial(nvars, row_monomial(s.A, i, nv, nvars));
    return sub;
  }
  const std::size_t t = nv + s.r - 1;
  if (t >= nvars) throw PreconditionError("type II index r exceeds the trailing variables");
  for (std::size_t i = 0; i < nv; ++i)
    sub[i] = Poly::monomial(nvars, row_monomial(s.A, i, nv, nvars)) * unit_power(nvars, s.c, s.A(i, nv));
  sub[t] = Poly::monomial(nvars, row_monomial(s.A, nv, nv, nvars)) *
           (Poly::variable(nvars, t) + Poly::constant(nvars, 1)) * unit_power(nvars, s.c, s.A(nv, nv));
  return sub;
}

std::vector<Value> transform_values(const TransformStep& s, std::span<const Value> vals) {
  const std::size_t nv = s.valued_dim();
  if (vals.size() != nv) throw PreconditionError("value count does not match the transform");
  auto inv = inverse(to_rational(s.block()));
  if (!inv) throw PreconditionError("valued block of the transform is singular");
  std::vector<Value> out;
  for (std::size_t i = 0; i < nv; ++i) {
    Value acc = Value::zero(vals.front().basis());
    for (std::size_t j = 0; j < nv; ++j)
      if ((*inv)(i, j) != 0) acc = acc + (*inv)(i, j) * vals[j];
    if (acc.sign() <= 0) throw PreconditionError("transform makes value " + std::to_string(i + 1) + " non-positive");
    out.push_back(std::move(acc));
  }
  return out;
}

IntMatrix cumulative_matrix(const TransformSeq& seq, std::size_t nvalued) {
  IntMatrix acc = IntMatrix::identity(nvalued);
  for (const auto& s : seq) {
    if (s.valued_dim() != nvalued) throw PreconditionError("transform sizes do not compose");
    acc = acc * s.block();
  }
  return acc;
}

PerronStepResult perron_step(std::span<const Value> vals) {
  const std::size_t n = vals.size();
  if (n == 0) throw PreconditionError("perron_step needs at least one value");
  for (const auto& v : vals)
    if (v.sign() <= 0) throw PreconditionError("perron_step: values must be positive");
  std::vector<Value> out(vals.begin(), vals.end());
  if (n == 1) return {TransformStep::type_I(IntMatrix::identity(1)), out};
  std::size_t big = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (cmp(vals[i], vals[big]) == std::strong_ordering::greater) big = i;
  std::size_t sec = big == 0 ? 1 : 0;
  for (std::size_t i = 0; i < n; ++i)
    if (i != big && cmp(vals[i], vals[sec]) == std::strong_ordering::greater) sec = i;
  if (cmp(vals[big], vals[sec]) == std::strong_ordering::equal)
    throw PreconditionError("perron_step: tied values; inputs are not rationally independent");
  IntMatrix E = IntMatrix::identity(n);
  E(big, sec) = 1;
  out[big] = vals[big] - vals[sec];
  return {TransformStep::type_I(std::move(E)), std::move(out)};
}

PerronRun perron_until(std::span<const Value> vals, const std::function<bool(const IntMatrix&)>& done,
                       std::size_t cap) {
  PerronRun run{{}, IntMatrix::identity(vals.size()), std::vector<Value>(vals.begin(), vals.end())};
  while (!done(run.cumulative)) {
    if (run.steps.size() >= cap)
      throw CapExceeded("Perron normalization did not finish within " + std::to_string(cap) + " steps");
    auto st = perron_step(run.vals);
    run.cumulative = run.cumulative * st.step.A;
    run.vals = std::move(st.vals);
    run.steps.push_back(std::move(st.step));
  }
  return run;
}

DivisibilityResult monomialize_divisibility(const IntVector& a, const IntVector& b, std::span<const Value> vals,
                                            std::size_t cap) {
  if (a.size() != vals.size() || b.size() != vals.size())
    throw PreconditionError("exponent vectors must match the value count");
  const Value va = dot(std::span<const Integer>(a), vals);
  const Value vb = dot(std::span<const Integer>(b), vals);
  if (cmp(va, vb) == std::strong_ordering::greater)
    throw PreconditionError("monomialize_divisibility: nu(x^a) > nu(x^b)");
  IntVector diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = b[i] - a[i];
  auto run = perron_until(vals, [&](const IntMatrix& B) { return is_nonnegative(diff * B); }, cap);
  return {std::move(run.steps), a * run.cumulative, b * run.cumulative, std::move(run.vals)};
}

namespace {

IntVector valued_part(const Monomial& e, std::size_t nv) {
  IntVector out;
  for (std::size_t i = 0; i < nv; ++i) out.emplace_back(e[i]);
  return out;
}

bool has_trailing(const Monomial& e, std::size_t nv) {
  for (std::size_t i = nv; i < e.size(); ++i)
    if (e[i] != 0) return true;
  return false;
}

}  // namespace

Factorization factor_monomial_unit(const TruncatedSeries& f, std::span<const Value> vals, std::size_t cap,
                                   const std::optional<Value>& known_floor) {
  const std::size_t nv = vals.size();
  const std::size_t nvars = f.nvars();
  const GaussValue g = gauss_value(f, vals, known_floor);
  if (g.kind == GaussValue::Kind::AboveTruncation)
    throw PreconditionError("factor_monomial_unit: value is not attained below the truncation");
  if (g.kind == GaussValue::Kind::Infinity)
    throw PreconditionError("factor_monomial_unit: series has infinite value");
  const IntVector a0 = valued_part(g.argmin, nv);

  // Every other term must become divisible by x^a0 on the valued block.
  std::vector<IntVector> diffs;
  for (const auto& [k, c] : f.poly().terms()) {
    const IntVector a = valued_part(k.e, nv);
    if (a == a0) continue;
    if (has_trailing(k.e, nv)) {
      const Value v = dot(std::span<const Integer>(a), vals);
      if (cmp(v, g.value) == std::strong_ordering::less)
        throw PreconditionError("factor_monomial_unit: a term with trailing variables has a smaller valued part "
                                "than the minimum; outside the desk-scale class");
    }
    IntVector d(nv);
    for (std::size_t i = 0; i < nv; ++i) d[i] = a[i] - a0[i];
    diffs.push_back(std::move(d));
  }
  auto run = perron_until(
      vals,
      [&](const IntMatrix& B) {
        for (const auto& d : diffs)
          if (!is_nonnegative(d * B)) return false;
        return true;
      },
      cap);

  Substitution sub = identity_substitution(nvars);
  for (std::size_t i = 0; i < nv; ++i) {
    Monomial e(nvars, 0);
    for (std::size_t j = 0; j < nv; ++j) e[j] = to_int64(run.cumulative(i, j));
    sub[i] = Poly::monomial(nvars, std::move(e));
  }
  const Poly image = substitute(f.poly(), sub, f.trunc());

  Monomial d(nvars, 0);
  const IntVector dv = a0 * run.cumulative;
  for (std::size_t i = 0; i < nv; ++i) d[i] = to_int64(dv[i]);
  std::optional<long> ut;
  if (f.trunc()) {
    ut = *f.trunc() - degree(d);
    if (*ut <= 0) throw PreconditionError("factor_monomial_unit: truncation exhausted by the monomial factor");
  }
  TruncatedSeries u(image.divide_monomial(d), ut);
  if (!is_unit(u)) throw Error("factor_monomial_unit: quotient is not a unit");
  return {std::move(run.steps), std::move(d), std::move(u), std::move(run.vals)};
}

TypeIIResult apply_type_II(std::span<const Value> vals, std::size_t ntrailing, std::size_t r, const UnitExpr& c,
                           const IntMatrix& A) {
  if (A.rows() != vals.size() + 1) throw PreconditionError("type II matrix must have size nvalued+1");
  if (r < 1 || r > ntrailing) throw PreconditionError("type II index r outside 1..ntrailing");
  TransformStep step = TransformStep::type_II(r, A, c);
  validate_step(step);
  std::vector<Value> nv = transform_values(step, vals);
  if (!is_rationally_independent(nv)) throw PreconditionError("type II transform loses rational independence");
  Substitution sub = step_substitution(step, vals.size() + ntrailing);
  return {std::move(step), std::move(sub), std::move(nv)};
}

}  // namespace lmono
