#ifndef LMONO_PERRON_HPP
#define LMONO_PERRON_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lmono/linalg.hpp"
#include "lmono/series.hpp"
#include "lmono/transform.hpp"
#include "lmono/valuegroup.hpp"

namespace lmono {

// Steps per normalization call before CapExceeded.
inline constexpr std::size_t kPerronCap = 10000;

// Throws PreconditionError unless A is square, nonnegative, det +-1 and the
// shape matches the kind.
void validate_step(const TransformStep& s);

// Images of the old variables in the new ones.
Substitution step_substitution(const TransformStep& s, std::size_t nvars);

// New values of the valued block (A0^-1 vals); throws unless all positive.
std::vector<Value> transform_values(const TransformStep& s, std::span<const Value> vals);

// A1 * A2 * ... over the valued blocks; identity for an empty sequence.
IntMatrix cumulative_matrix(const TransformSeq& seq, std::size_t nvalued);

struct PerronStepResult {
  TransformStep step;
  std::vector<Value> vals;
};

// Brun step: the largest value is reduced by the second largest.
PerronStepResult perron_step(std::span<const Value> vals);

struct PerronRun {
  TransformSeq steps;
  IntMatrix cumulative;
  std::vector<Value> vals;
};

// Perron steps until done(cumulative) holds; throws CapExceeded after cap
// steps.
PerronRun perron_until(std::span<const Value> vals, const std::function<bool(const IntMatrix&)>& done,
                       std::size_t cap = kPerronCap);

struct DivisibilityResult {
  TransformSeq steps;
  IntVector a;
  IntVector b;
  std::vector<Value> vals;
};

// Type-I sequence after which a' <= b' componentwise. Requires
// nu(x^a) <= nu(x^b).
DivisibilityResult monomialize_divisibility(const IntVector& a, const IntVector& b, std::span<const Value> vals,
                                            std::size_t cap = kPerronCap);

struct Factorization {
  TransformSeq steps;
  Monomial d;
  TruncatedSeries u;
  std::vector<Value> vals;
};

// After the returned steps, f = x^d * u with u a unit. vals cover the first
// valued variables; the rest are trailing. known_floor is passed to
// gauss_value.
Factorization factor_monomial_unit(const TruncatedSeries& f, std::span<const Value> vals,
                                   std::size_t cap = kPerronCap,
                                   const std::optional<Value>& known_floor = std::nullopt);

struct TypeIIResult {
  TransformStep step;
  Substitution sub;
  std::vector<Value> vals;
};

TypeIIResult apply_type_II(std::span<const Value> vals, std::size_t ntrailing, std::size_t r, const UnitExpr& c,
                           const IntMatrix& A);

}  // namespace lmono

#endif  // LMONO_PERRON_HPP
