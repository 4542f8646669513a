#include "doctest.h"

#include "lmono/perron.hpp"

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

}  // namespace

TEST_CASE("perron_step examples") {
  auto v = gens({2, 3});
  auto st = perron_step(v);
  CHECK(st.step.A == IntMatrix{{1, 0}, {1, 1}});
  CHECK(st.vals[0] == v[0]);
  CHECK(st.vals[1] == v[1] - v[0]);

  std::vector<Value> rev{v[1], v[0]};
  auto st2 = perron_step(rev);
  CHECK(st2.vals[0] == v[1] - v[0]);
  CHECK(st2.vals[1] == v[0]);

  auto one = gens({2});
  auto st3 = perron_step(one);
  CHECK(st3.step.A == IntMatrix::identity(1));
  CHECK(st3.vals == one);
}

TEST_CASE("perron_step preconditions") {
  auto v = gens({2, 3});
  std::vector<Value> neg{v[0], -v[1]};
  CHECK_THROWS_AS(perron_step(neg), PreconditionError);
  std::vector<Value> tie{v[0], v[0]};
  CHECK_THROWS_AS(perron_step(tie), PreconditionError);
}

TEST_CASE("monomialize_divisibility examples") {
  auto v = gens({2, 3});
  auto r = monomialize_divisibility(IntVector{1, 0}, IntVector{2, 0}, v);
  CHECK(r.steps.empty());
  CHECK_THROWS_AS(monomialize_divisibility(IntVector{0, 1}, IntVector{1, 0}, v), PreconditionError);
  auto s = monomialize_divisibility(IntVector{1, 0}, IntVector{0, 1}, v);
  CHECK_FALSE(s.steps.empty());
  for (std::size_t i = 0; i < 2; ++i) CHECK(s.a[i] <= s.b[i]);
  const IntMatrix B = cumulative_matrix(s.steps, 2);
  CHECK(s.a == IntVector{1, 0} * B);
  CHECK(s.b == IntVector{0, 1} * B);
  // value identity: nu(x^a) is unchanged by the coordinate change
  CHECK(dot(std::span<const Integer>(s.a), s.vals) == v[0]);
}

TEST_CASE("factor_monomial_unit examples") {
  auto v = gens({2, 3});
  auto f1 = factor_monomial_unit(TruncatedSeries(parse_poly("y1", 2), std::nullopt), v);
  CHECK(f1.steps.empty());
  CHECK(f1.d == Monomial{1, 0});
  CHECK(f1.u.poly() == Poly::constant(2, 1));

  auto f2 = factor_monomial_unit(TruncatedSeries(parse_poly("y1 + y2", 2), std::nullopt), v);
  CHECK_FALSE(f2.steps.empty());
  CHECK(is_unit(f2.u));
  CHECK(f2.u.poly().size() == 2);
  Substitution sub = identity_substitution(2);
  for (const auto& s : f2.steps) sub = compose(sub, step_substitution(s, 2));
  CHECK(substitute(parse_poly("y1 + y2", 2), sub) == Poly::monomial(2, f2.d) * f2.u.poly());
  CHECK(monomial_value(f2.d, f2.vals) == v[0]);

  auto f3 = factor_monomial_unit(TruncatedSeries(parse_poly("5*y1^2", 2), std::nullopt), v);
  CHECK(f3.d == Monomial{2, 0});
  CHECK(f3.u.poly() == Poly::constant(2, 5));
}

TEST_CASE("factor_monomial_unit errors") {
  auto v = gens({2, 3});
  CHECK_THROWS_AS(factor_monomial_unit(TruncatedSeries(parse_poly("y2^7", 2), 8), v), PreconditionError);
  CHECK_THROWS_AS(factor_monomial_unit(TruncatedSeries(parse_poly("y1 + y2", 2), std::nullopt), v, 0), CapExceeded);
}

TEST_CASE("apply_type_II examples") {
  auto v = gens({2});
  auto t = apply_type_II(v, 1, 1, UnitExpr(Rational(1)), IntMatrix::identity(2));
  CHECK(t.sub[0] == parse_poly("y1", 2));
  CHECK(t.sub[1] == parse_poly("y2 + 1", 2));

  auto u = apply_type_II(v, 1, 1, UnitExpr(Rational(2)), IntMatrix{{1, 1}, {0, 1}});
  CHECK(u.sub[0] == parse_poly("2*y1", 2));
  CHECK(u.sub[1] == parse_poly("2*y2 + 2", 2));
  CHECK(u.vals == v);
  // the translated variable has value 0: constant term present
  CHECK(is_unit(TruncatedSeries(u.sub[1], std::nullopt)));

  CHECK_THROWS_AS(apply_type_II(v, 1, 1, UnitExpr(Rational(1)), IntMatrix{{2, 0}, {0, 1}}), PreconditionError);
  CHECK_THROWS_AS(apply_type_II(v, 1, 1, UnitExpr(Rational(1)), IntMatrix{{1, -1}, {0, 1}}), PreconditionError);
}

TEST_CASE("validate_step") {
  CHECK_NOTHROW(validate_step(TransformStep::type_I(IntMatrix{{1, 1}, {0, 1}})));
  CHECK_THROWS(validate_step(TransformStep::type_I(IntMatrix{{2, 0}, {0, 1}})));
  CHECK_THROWS(validate_step(TransformStep::type_I(IntMatrix{{1, -1}, {0, 1}})));
}
