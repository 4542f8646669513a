#ifndef LMONO_PROBLEM_HPP
#define LMONO_PROBLEM_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lmono/linalg.hpp"
#include "lmono/series.hpp"
#include "lmono/transform.hpp"
#include "lmono/valuegroup.hpp"

namespace lmono {

// One row of an extension problem.
struct ProblemRow {
  enum class Kind { Series, Tail };
  Kind kind = Kind::Series;
  TruncatedSeries f;  // Series: x_i = unit * f(y)
  UnitExpr unit;
  std::size_t y = 0;  // Tail: x_i = y_{y} (1-based)
};

struct CompositeLevel {
  std::vector<GeneratorDescriptor> basis;
  std::vector<RatVector> coords;  // one entry per variable
};

// Optional composite structure for rank bookkeeping: levels of nu* on
// y_1..y_sbar and, optionally, levels of nu on the valued x's.
struct CompositeDecl {
  std::vector<CompositeLevel> u_levels;
  std::vector<CompositeLevel> t_levels;
};

struct ExtensionProblem {
  std::string name;
  std::size_t m = 0, n = 0;
  std::vector<GeneratorDescriptor> basis;
  std::vector<RatVector> yvals;  // coordinates of nu*(y_1..y_sbar)
  std::vector<ProblemRow> rows;
  std::optional<long> trunc;     // series rows are known modulo this degree
  std::vector<TransformStep> t_steps;
  std::optional<CompositeDecl> composite;

  std::size_t sbar() const { return yvals.size(); }
};

inline constexpr long kDefaultTrunc = 8;
inline constexpr const char* kDeltaPrefix = "delta";

// Final form x'_i = y'^{C_i} * phi_i (phi over delta symbols) with the
// delta symbols defined as unit series in the final y'.
struct MonomialForm {
  std::size_t rbar = 0, sbar = 0, l = 0;
  IntMatrix C;
  std::vector<UnitExpr> phis;
  std::map<std::string, TruncatedSeries> deltas;
  std::vector<std::pair<std::size_t, std::size_t>> tails;  // (x index, y index), 1-based
};

}  // namespace lmono

#endif  // LMONO_PROBLEM_HPP
