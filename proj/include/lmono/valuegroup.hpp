#ifndef LMONO_VALUEGROUP_HPP
#define LMONO_VALUEGROUP_HPP

#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lmono/rational.hpp"

namespace lmono {

// One generator of an embedding basis: either the rational 1 or sqrt(n) for a
// squarefree n > 1.
struct GeneratorDescriptor {
  enum class Kind { One, Sqrt };
  Kind kind = Kind::Sqrt;
  Integer n = 2;

  static GeneratorDescriptor one() { return {Kind::One, 1}; }
  static GeneratorDescriptor sqrt(long n) { return {Kind::Sqrt, n}; }

  std::string to_string() const;
  friend bool operator==(const GeneratorDescriptor&, const GeneratorDescriptor&) = default;
};

struct Interval {
  Rational lo;
  Rational hi;
  Rational width() const { return hi - lo; }
};

// Real numbers linearly independent over Q, each with a convergent interval
// oracle. Distinct square roots of squarefree integers (plus at most one 1)
// are independent, which the constructor enforces.
class EmbeddingBasis {
public:
  explicit EmbeddingBasis(std::vector<GeneratorDescriptor> generators);

  // sqrt of the first d squarefree integers > 1: sqrt2, sqrt3, sqrt5, sqrt6, ...
  static std::shared_ptr<const EmbeddingBasis> square_roots(std::size_t d);
  static std::shared_ptr<const EmbeddingBasis> make(std::vector<GeneratorDescriptor> generators);

  std::size_t dim() const { return generators_.size(); }
  const std::vector<GeneratorDescriptor>& generators() const { return generators_; }

  // Enclosure of generator i with width at most 2^-precision.
  Interval enclose(std::size_t i, unsigned precision) const;

  friend bool operator==(const EmbeddingBasis& a, const EmbeddingBasis& b) {
    return a.generators_ == b.generators_;
  }

private:
  std::vector<GeneratorDescriptor> generators_;
};

using BasisPtr = std::shared_ptr<const EmbeddingBasis>;

bool same_basis(const BasisPtr& a, const BasisPtr& b);

// An element of the Q-span of an embedding basis, i.e. a point of Gamma (x) Q.
class Value {
public:
  Value() = default;
  Value(BasisPtr basis, RatVector coords);

  static Value zero(BasisPtr basis);
  static Value generator(BasisPtr basis, std::size_t i);

  const BasisPtr& basis() const { return basis_; }
  const RatVector& coords() const { return coords_; }
  std::size_t dim() const { return coords_.size(); }

  bool is_zero() const;

  // Sign of the represented real, decided by interval refinement.
  int sign() const;

  // Enclosure of the represented real; width shrinks by half per unit of
  // precision.
  Interval enclose(unsigned precision) const;

  Value operator-() const;
  friend Value operator+(const Value& a, const Value& b);
  friend Value operator-(const Value& a, const Value& b);
  friend Value operator*(const Rational& k, const Value& v);

  friend bool operator==(const Value& a, const Value& b);
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

  std::string to_string() const;

private:
  BasisPtr basis_;
  RatVector coords_;
};

// Number of refinement rounds allowed before sign() gives up.
inline constexpr unsigned kRefinementCap = 256;
// Precision of the first enclosure tried.
inline constexpr unsigned kInitialPrecision = 24;

struct SignDecision {
  int sign = 0;
  unsigned rounds = 0;  // refinement rounds after the initial enclosure
};

SignDecision decide_sign(const Value& v);

std::strong_ordering cmp(const Value& a, const Value& b);

// Rank of the coordinate matrix equals the number of values. Empty input is
// independent by convention.
bool is_rationally_independent(std::span<const Value> values);

Value dot(std::span<const Integer> exps, std::span<const Value> values);

// Ordered group built from rank-1 levels, highest level first; elements
// compare lexicographically level by level.
class CompositeGroup {
public:
  explicit CompositeGroup(std::vector<BasisPtr> levels);

  std::size_t rank() const { return levels_.size(); }
  std::size_t rational_rank() const;
  const std::vector<BasisPtr>& levels() const { return levels_; }

private:
  std::vector<BasisPtr> levels_;
};

class CompositeValue {
public:
  CompositeValue() = default;
  explicit CompositeValue(std::vector<Value> levels);

  const std::vector<Value>& levels() const { return levels_; }
  std::size_t rank() const { return levels_.size(); }
  bool is_zero() const;

  friend CompositeValue operator+(const CompositeValue& a, const CompositeValue& b);
  friend bool operator==(const CompositeValue& a, const CompositeValue& b) = default;
  friend std::strong_ordering operator<=>(const CompositeValue& a, const CompositeValue& b);

private:
  std::vector<Value> levels_;
};

CompositeValue composite_zero(const CompositeGroup& g);

// Isolated subgroup made of the elements whose top `vanishing_levels` levels
// are zero.
struct IsolatedSubgroup {
  std::size_t vanishing_levels = 0;
  std::size_t rational_rank = 0;
};

// The chain 0 = Gamma_rank c ... c Gamma_0 = Gamma, listed from 0 upwards.
std::vector<IsolatedSubgroup> isolated_subgroups(const CompositeGroup& g);

// Image of v in Gamma / Gamma_level, which keeps the top `level` levels.
CompositeValue composite_project(const CompositeValue& v, std::size_t level);

}  // namespace lmono

#endif  // LMONO_VALUEGROUP_HPP
