#include "lmono/valuegroup.hpp"

#include <algorithm>
#include <sstream>

#include "lmono/linalg.hpp"

namespace lmono {

std::string GeneratorDescriptor::to_string() const {
  return kind == Kind::One ? std::string("1") : "sqrt" + n.get_str();
}

namespace {

bool is_squarefree(const Integer& n) {
  Integer m = n;
  for (Integer p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      m /= p;
      if (m % p == 0) return false;
    }
  }
  return true;
}

}  // namespace

EmbeddingBasis::EmbeddingBasis(std::vector<GeneratorDescriptor> generators)
    : generators_(std::move(generators)) {
  std::size_t ones = 0;
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const auto& g = generators_[i];
    if (g.kind == GeneratorDescriptor::Kind::One) {
      ++ones;
      continue;
    }
    if (g.n < 2 || !is_squarefree(g.n))
      throw PreconditionError("embedding basis: sqrt(" + g.n.get_str() +
                              ") needs a squarefree radicand > 1");
    for (std::size_t j = 0; j < i; ++j)
      if (generators_[j] == g)
        throw PreconditionError("embedding basis: duplicate generator " + g.to_string());
  }
  if (ones > 1) throw PreconditionError("embedding basis: the generator 1 may appear once");
}

std::shared_ptr<const EmbeddingBasis> EmbeddingBasis::square_roots(std::size_t d) {
  std::vector<GeneratorDescriptor> gens;
  for (long n = 2; gens.size() < d; ++n)
    if (is_squarefree(Integer(n))) gens.push_back(GeneratorDescriptor::sqrt(n));
  return std::make_shared<const EmbeddingBasis>(std::move(gens));
}

std::shared_ptr<const EmbeddingBasis> EmbeddingBasis::make(std::vector<GeneratorDescriptor> generators) {
  return std::make_shared<const EmbeddingBasis>(std::move(generators));
}

Interval EmbeddingBasis::enclose(std::size_t i, unsigned precision) const {
  const auto& g = generators_.at(i);
  if (g.kind == GeneratorDescriptor::Kind::One) return {Rational(1), Rational(1)};
  // floor(sqrt(n * 4^k)) / 2^k <= sqrt(n) < (floor(...) + 1) / 2^k
  Integer scaled = g.n << (2 * precision);
  Integer root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  Integer den = Integer(1) << precision;
  Interval out{Rational(root, den), Rational(root + 1, den)};
  out.lo.canonicalize();
  out.hi.canonicalize();
  return out;
}

bool same_basis(const BasisPtr& a, const BasisPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

Value::Value(BasisPtr basis, RatVector coords) : basis_(std::move(basis)), coords_(std::move(coords)) {
  if (!basis_) throw PreconditionError("value without a basis");
  if (coords_.size() != basis_->dim())
    throw PreconditionError("value: coordinate count does not match the basis dimension");
}

Value Value::zero(BasisPtr basis) {
  const auto d = basis->dim();
  return Value(std::move(basis), RatVector(d, Rational(0)));
}

Value Value::generator(BasisPtr basis, std::size_t i) {
  Value v = zero(std::move(basis));
  v.coords_.at(i) = 1;
  return v;
}

bool Value::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Rational& q) { return q == 0; });
}

Interval Value::enclose(unsigned precision) const {
  Interval acc{Rational(0), Rational(0)};
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    const Rational& c = coords_[i];
    if (c == 0) continue;
    const Interval g = basis_->enclose(i, precision);
    if (c > 0) {
      acc.lo += c * g.lo;
      acc.hi += c * g.hi;
    } else {
      acc.lo += c * g.hi;
      acc.hi += c * g.lo;
    }
  }
  return acc;
}

SignDecision decide_sign(const Value& v) {
  if (v.is_zero()) return {0, 0};
  for (unsigned round = 0; round <= kRefinementCap; ++round) {
    const Interval iv = v.enclose(kInitialPrecision + round);
    if (iv.lo > 0) return {1, round};
    if (iv.hi < 0) return {-1, round};
  }
  throw Error("sign refinement did not separate " + v.to_string() + " from zero within " +
              std::to_string(kRefinementCap) + " rounds");
}

int Value::sign() const { return decide_sign(*this).sign; }

Value Value::operator-() const {
  Value out = *this;
  for (auto& c : out.coords_) c = -c;
  return out;
}

namespace {

void require_same_basis(const Value& a, const Value& b) {
  if (!same_basis(a.basis(), b.basis())) throw PreconditionError("values live on different embedding bases");
}

}  // namespace

Value operator+(const Value& a, const Value& b) {
  require_same_basis(a, b);
  Value out = a;
  for (std::size_t i = 0; i < out.coords_.size(); ++i) out.coords_[i] += b.coords_[i];
  return out;
}

Value operator-(const Value& a, const Value& b) { return a + (-b); }

Value operator*(const Rational& k, const Value& v) {
  Value out = v;
  for (auto& c : out.coords_) c *= k;
  return out;
}

bool operator==(const Value& a, const Value& b) {
  require_same_basis(a, b);
  return a.coords_ == b.coords_;
}

std::strong_ordering operator<=>(const Value& a, const Value& b) { return cmp(a, b); }

std::string Value::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (coords_[i] == 0) continue;
    if (!first) os << " + ";
    os << lmono::to_string(coords_[i]) << "*" << basis_->generators()[i].to_string();
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

std::strong_ordering cmp(const Value& a, const Value& b) {
  require_same_basis(a, b);
  if (a.coords() == b.coords()) return std::strong_ordering::equal;
  const int s = (a - b).sign();
  return s < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

bool is_rationally_independent(std::span<const Value> values) {
  if (values.empty()) return true;
  for (const auto& v : values) require_same_basis(v, values.front());
  RatMatrix m(values.size(), values.front().dim());
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = values[i].coords()[j];
  return rank(m) == values.size();
}

Value dot(std::span<const Integer> exps, std::span<const Value> values) {
  if (exps.size() != values.size()) throw PreconditionError("exponent/value length mismatch");
  if (values.empty()) throw PreconditionError("dot of an empty value list has no basis");
  Value acc = Value::zero(values.front().basis());
  for (std::size_t i = 0; i < exps.size(); ++i)
    if (exps[i] != 0) acc = acc + Rational(exps[i]) * values[i];
  return acc;
}

CompositeGroup::CompositeGroup(std::vector<BasisPtr> levels) : levels_(std::move(levels)) {
  for (const auto& b : levels_)
    if (!b) throw PreconditionError("composite group level without a basis");
}

std::size_t CompositeGroup::rational_rank() const {
  std::size_t r = 0;
  for (const auto& b : levels_) r += b->dim();
  return r;
}

CompositeValue::CompositeValue(std::vector<Value> levels) : levels_(std::move(levels)) {}

bool CompositeValue::is_zero() const {
  return std::all_of(levels_.begin(), levels_.end(), [](const Value& v) { return v.is_zero(); });
}

CompositeValue operator+(const CompositeValue& a, const CompositeValue& b) {
  if (a.rank() != b.rank()) throw PreconditionError("composite values of different rank");
  std::vector<Value> out;
  for (std::size_t i = 0; i < a.rank(); ++i) out.push_back(a.levels_[i] + b.levels_[i]);
  return CompositeValue(std::move(out));
}

std::strong_ordering operator<=>(const CompositeValue& a, const CompositeValue& b) {
  if (a.rank() != b.rank()) throw PreconditionError("composite values of different rank");
  for (std::size_t i = 0; i < a.rank(); ++i) {
    const auto c = cmp(a.levels_[i], b.levels_[i]);
    if (c != std::strong_ordering::equal) return c;
  }
  return std::strong_ordering::equal;
}

CompositeValue composite_zero(const CompositeGroup& g) {
  std::vector<Value> levels;
  for (const auto& b : g.levels()) levels.push_back(Value::zero(b));
  return CompositeValue(std::move(levels));
}

std::vector<IsolatedSubgroup> isolated_subgroups(const CompositeGroup& g) {
  std::vector<IsolatedSubgroup> chain;
  for (std::size_t vanish = g.rank() + 1; vanish-- > 0;) {
    std::size_t rr = 0;
    for (std::size_t i = vanish; i < g.rank(); ++i) rr += g.levels()[i]->dim();
    chain.push_back({vanish, rr});
  }
  return chain;
}

CompositeValue composite_project(const CompositeValue& v, std::size_t level) {
  if (level > v.rank())
    throw PreconditionError("composite_project: level " + std::to_string(level) + " exceeds rank " +
                            std::to_string(v.rank()));
  return CompositeValue(std::vector<Value>(v.levels().begin(), v.levels().begin() + level));
}

}  // namespace lmono
