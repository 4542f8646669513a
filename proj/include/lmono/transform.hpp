#ifndef LMONO_TRANSFORM_HPP
#define LMONO_TRANSFORM_HPP

#include <cstddef>
#include <vector>

#include "lmono/linalg.hpp"
#include "lmono/series.hpp"

namespace lmono {

// One transform on a parameter system whose first `nvalued` variables carry
// values and whose remaining variables are trailing (infinite value).
//
// TypeI, A of size nvalued:  x_i = prod_j x'_j^{A_ij}.
// TypeII_r, A of size nvalued+1, constant c:
//   x_i          = prod_j x'_j^{A_ij} * c^{A_{i,nvalued}}          (i < nvalued)
//   x_{nvalued+r} = prod_j x'_j^{A_{nvalued,j}} * (x'_{nvalued+r} + 1) * c^{A_{nvalued,nvalued}}
// A monomial x^v becomes x'^{vA} on the valued block, and nu(x) = A0 nu(x').
struct TransformStep {
  enum class Kind { TypeI, TypeII };
  Kind kind = Kind::TypeI;
  std::size_t r = 0;  // TypeII: 1-based index among the trailing variables
  IntMatrix A;
  UnitExpr c;

  static TransformStep type_I(IntMatrix A) {
    TransformStep s;
    s.A = std::move(A);
    return s;
  }
  static TransformStep type_II(std::size_t r, IntMatrix A, UnitExpr c) {
    TransformStep s;
    s.kind = Kind::TypeII;
    s.r = r;
    s.A = std::move(A);
    s.c = std::move(c);
    return s;
  }

  std::size_t valued_dim() const { return kind == Kind::TypeI ? A.rows() : A.rows() - 1; }
  // Top-left valued block.
  IntMatrix block() const {
    const std::size_t n = valued_dim();
    IntMatrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) b(i, j) = A(i, j);
    return b;
  }
  friend bool operator==(const TransformStep&, const TransformStep&) = default;
};

using TransformSeq = std::vector<TransformStep>;

}  // namespace lmono

#endif  // LMONO_TRANSFORM_HPP
