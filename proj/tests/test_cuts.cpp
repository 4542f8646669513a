#include "doctest.h"

#include "lmono/cuts.hpp"

using namespace lmono;

namespace {

std::vector<Value> gens(std::initializer_list<long> ns) {
  std::vector<GeneratorDescriptor> d;
  for (long n : ns) d.push_back(GeneratorDescriptor::sqrt(n));
  const auto b = EmbeddingBasis::make(d);
  std::vector<Value> out;
  for (std::size_t i = 0; i < d.size(); ++i) out.push_back(Value::generator(b, i));
  return out;
}

std::vector<UnitExpr> phis(std::size_t r) {
  std::vector<UnitExpr> out;
  for (std::size_t i = 0; i < r; ++i) out.push_back(UnitExpr::symbol(phi_symbol(i)));
  return out;
}

ExtensionProblem problem(std::size_t m, std::size_t n, std::vector<std::string> rows, std::optional<long> trunc = {}) {
  ExtensionProblem p;
  p.m = m;
  p.n = n;
  p.basis = {GeneratorDescriptor::sqrt(2), GeneratorDescriptor::sqrt(3)};
  p.yvals = {RatVector{1, 0}, RatVector{0, 1}};
  p.trunc = trunc;
  for (const auto& r : rows) {
    ProblemRow row;
    row.f = TruncatedSeries(parse_poly(r, n), trunc);
    p.rows.push_back(row);
  }
  return p;
}

}  // namespace

TEST_CASE("lift_type_I examples") {
  const CutsState s = make_state(IntMatrix{{1, 1}, {0, 1}}, phis(2), gens({2, 3}), 0, 2);
  const CutsState same = lift_type_I(s, IntMatrix::identity(2));
  CHECK(same.C == s.C);
  CHECK(same.phis == s.phis);
  CHECK(same.t_history.size() == 1);
  CHECK(same.u_history.empty());

  const CutsState one = make_state(IntMatrix{{1}}, phis(1), gens({2}), 0, 1);
  const CutsState one2 = lift_type_I(one, IntMatrix{{1}});
  CHECK(one2.C == IntMatrix{{1}});
  CHECK(one2.phis == one.phis);

  const IntMatrix C{{1, 1}};
  CHECK(C * IntMatrix{{1, 1}, {0, 1}} == IntMatrix{{1, 2}});
  const CutsState t = make_state(C, phis(1), gens({2, 3}), 0, 2);
  const CutsState t2 = lift_type_I(t, IntMatrix{{1}});
  CHECK(is_nonnegative(t2.C));
  CHECK(lift_is_compatible(t, t2));
}

TEST_CASE("lift_type_I with a nontrivial T step") {
  const CutsState s = make_state(IntMatrix{{1, 2}, {0, 1}}, phis(2), gens({2, 3}), 1, 3);
  const CutsState s2 = lift_type_I(s, IntMatrix{{1, 1}, {0, 1}});
  CHECK_NOTHROW(validate_state(s2));
  CHECK(rank(s2.C) == 2);
  CHECK(is_nonnegative(s2.C));
  CHECK(lift_is_compatible(s, s2));
  // phi' = phi^{A^-1}
  CHECK(s2.phis[0] == UnitExpr::symbol("phi1") * UnitExpr::symbol("phi2", -1));
}

TEST_CASE("lift_type_II examples") {
  const CutsState s = make_state(IntMatrix{{1}}, phis(1), gens({2}), 1, 2);
  const CutsState tr = lift_type_II(s, 1, UnitExpr(Rational(1)), IntMatrix::identity(2));
  CHECK_NOTHROW(validate_state(tr));
  CHECK(lift_is_compatible(s, tr));
  CHECK(tr.l == 1);

  const CutsState k = lift_type_II(s, 1, UnitExpr(Rational(2)), IntMatrix{{1, 1}, {0, 1}});
  CHECK_NOTHROW(validate_state(k));
  CHECK(lift_is_compatible(s, k));
  CHECK(rank(k.C) == 1);
  CHECK(k.C == IntMatrix{{1}});
  CHECK(k.u_history.back().kind == TransformStep::Kind::TypeII);
  CHECK(k.u_history.back().c == UnitExpr(Rational(2)));

  CHECK_THROWS_AS(lift_type_II(s, 2, UnitExpr(Rational(1)), IntMatrix::identity(2)), PreconditionError);
}

TEST_CASE("run_monomialization examples") {
  auto id = run_monomialization(problem(2, 2, {"y1", "y2"}));
  REQUIRE(id.ok);
  CHECK(id.u_steps.empty());
  CHECK(id.t_steps.empty());
  CHECK(id.final_form.C == IntMatrix::identity(2));

  auto blow = run_monomialization(problem(2, 2, {"y1*y2", "y2"}));
  REQUIRE(blow.ok);
  CHECK(blow.final_form.C == IntMatrix{{1, 1}, {0, 1}});
  CHECK(rank(blow.final_form.C) == 2);

  auto tail = run_monomialization(problem(1, 2, {"y1*y2 + y1^2*y2"}, 8));
  REQUIRE(tail.ok);
  CHECK(tail.final_form.C == IntMatrix{{1, 1}});
  CHECK(tail.final_form.deltas.at("delta1").poly() == parse_poly("1 + y1", 2));

  auto bin = run_monomialization(problem(1, 2, {"y1 + y2"}));
  REQUIRE(bin.ok);
  CHECK_FALSE(bin.u_steps.empty());
  CHECK(is_unit(bin.final_form.deltas.at("delta1")));
}

TEST_CASE("run_monomialization reports cap failures") {
  auto r = run_monomialization(problem(1, 2, {"y1 + y2"}), 0);
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.failure.empty());
}

TEST_CASE("admissibility diagnostics") {
  auto p = problem(1, 2, {"delta1*y1"});
  CHECK_THROWS_AS(check_admissible(p), PreconditionError);
  auto q = problem(1, 2, {"y1"});
  q.t_steps.push_back(TransformStep::type_II(1, IntMatrix::identity(2), UnitExpr(Rational(1))));
  CHECK_THROWS_AS(check_admissible(q), PreconditionError);
  auto u = problem(1, 2, {"1 + y1"});
  CHECK_THROWS_AS(check_admissible(u), PreconditionError);
  auto dep = problem(2, 2, {"y1", "y1^2"});
  CHECK_THROWS_AS(check_admissible(dep), PreconditionError);
}
