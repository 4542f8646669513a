#ifndef LMONO_CUTS_HPP
#define LMONO_CUTS_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lmono/perron.hpp"
#include "lmono/problem.hpp"
#include "lmono/series.hpp"
#include "lmono/valuegroup.hpp"

namespace lmono {

// Eq (1) shape:
//   x_i       = y^{C_i} * phi_i        1 <= i <= rbar
//   x_{rbar+j} = y_{sbar+j}             1 <= j <= l
// with m = rbar + l parameters on the T side and n >= sbar + l on the U side.
struct CutsState {
  std::size_t m = 0, n = 0, rbar = 0, sbar = 0, l = 0;
  IntMatrix C;
  std::vector<UnitExpr> phis;
  std::vector<Value> xvals;
  std::vector<Value> yvals;
  TransformSeq t_history;
  TransformSeq u_history;
};

// Throws Error naming the first violated invariant: shapes, rank(C) = rbar,
// C >= 0, positivity and independence of both value lists, and
// xvals = C * yvals.
void validate_state(const CutsState& s);

// Fresh state from C, units and U-side values; x-values follow from C.
CutsState make_state(IntMatrix C, std::vector<UnitExpr> phis, std::vector<Value> yvals, std::size_t l,
                     std::size_t n);

// Lemma 4.3: T side x = x'^A; the U side follows with Perron steps until
// A^-1 C B >= 0.
CutsState lift_type_I(const CutsState& s, const IntMatrix& A, std::size_t cap = kPerronCap);

// Lemmas 4.4/4.5: T side type II_r with constant c. The U side runs Perron
// steps until A0^-1 C B >= 0 and a_row A0^-1 C B >= 0, then one type II_r
// step with constant kappa = phi^{a_row A0^-1} c^{a_corner - a_row A0^-1 a_col}.
// Requires the valued block A0 to be unimodular.
CutsState lift_type_II(const CutsState& s, std::size_t r, const UnitExpr& c, const IntMatrix& A,
                       std::size_t cap = kPerronCap);

// Symbol name of the unit phi_i used in compatibility checks.
std::string phi_symbol(std::size_t i);

// Exact check that the steps appended by a lift are compatible: every
// original x_i, pulled through the new T step and the claimed relation of
// `after`, equals the original relation of `before` pulled through the new
// U steps. Units are the formal symbols phi_symbol(i) of `before`.
bool lift_is_compatible(const CutsState& before, const CutsState& after);

struct SolveResult {
  bool ok = false;
  std::string failure;
  TransformSeq t_steps;
  TransformSeq u_steps;
  MonomialForm final_form;
  std::vector<Value> xvals;
  std::vector<Value> yvals;
};

// Throws PreconditionError with a diagnosis when the problem is outside the
// admissible class.
void check_admissible(const ExtensionProblem& p);

SolveResult run_monomialization(const ExtensionProblem& p, std::size_t cap = kPerronCap);

}  // namespace lmono

#endif  // LMONO_CUTS_HPP
