#include "lmono/linalg.hpp"

#include <algorithm>
#include <utility>

namespace lmono {

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

IntMatrix to_integer(const RatMatrix& m) {
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = as_integer(m(i, j));
  return r;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    const Rational inv = 1 / m(r, c);
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Rational f = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank(const RatMatrix& m) {
  RatMatrix w = m;
  return rref(w).size();
}

std::size_t rank(const IntMatrix& m) { return rank(to_rational(m)); }

Rational determinant(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw PreconditionError("determinant of a non-square matrix");
  RatMatrix w = m;
  Rational det = 1;
  const std::size_t n = w.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && w(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(w(p, j), w(c, j));
      det = -det;
    }
    det *= w(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (w(i, c) == 0) continue;
      const Rational f = w(i, c) / w(c, c);
      for (std::size_t j = c; j < n; ++j) w(i, j) -= f * w(c, j);
    }
  }
  return det;
}

Integer determinant(const IntMatrix& m) { return as_integer(determinant(to_rational(m))); }

std::optional<RatMatrix> inverse(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw PreconditionError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return RatMatrix(0, 0);
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  const auto piv = rref(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

std::optional<RatVector> solve_left(const RatVector& v, const RatMatrix& m) {
  if (v.size() != m.cols()) throw PreconditionError("solve_left: length mismatch");
  // x * m = v  <=>  m^T x^T = v^T
  const std::size_t k = m.rows();
  RatMatrix aug(m.cols(), k + 1);
  for (std::size_t i = 0; i < m.cols(); ++i) {
    for (std::size_t j = 0; j < k; ++j) aug(i, j) = m(j, i);
    aug(i, k) = v[i];
  }
  const auto piv = rref(aug);
  if (!piv.empty() && piv.back() == k) return std::nullopt;
  if (piv.size() < k) throw PreconditionError("solve_left: rows are not independent");
  RatVector x(k);
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, k);
  return x;
}

RatMatrix right_kernel(const RatMatrix& m) {
  RatMatrix w = m;
  const auto piv = rref(w);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<RatVector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    RatVector e(m.cols(), Rational(0));
    e[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) e[piv[r]] = -w(r, f);
    basis.push_back(std::move(e));
  }
  if (basis.empty()) return RatMatrix(0, m.cols());
  return RatMatrix::from_rows(basis);
}

bool is_nonnegative(const IntMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) < 0) return false;
  return true;
}

bool is_nonnegative(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& z) { return z >= 0; });
}

bool is_unimodular(const IntMatrix& m) {
  if (m.rows() != m.cols()) return false;
  const Integer d = determinant(m);
  return d == 1 || d == -1;
}

IntVector SmithForm::divisors() const {
  IntVector out;
  for (std::size_t i = 0; i < rank; ++i) out.push_back(diag(i, i));
  return out;
}

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// row[dst] -= q * row[src]
void row_axpy(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& q) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) -= q * m(src, j);
}

void col_axpy(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& q) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) -= q * m(i, src);
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  IntMatrix d = a;
  IntMatrix left = IntMatrix::identity(m);
  IntMatrix right = IntMatrix::identity(n);

  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    bool found = false;
    std::size_t pi = t, pj = t;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (d(i, j) != 0 && (!found || abs(d(i, j)) < abs(d(pi, pj)))) {
          found = true;
          pi = i;
          pj = j;
        }
    if (!found) break;
    swap_rows(d, t, pi);
    swap_rows(left, t, pi);
    swap_cols(d, t, pj);
    swap_cols(right, t, pj);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
        row_axpy(d, i, t, q);
        row_axpy(left, i, t, q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
        col_axpy(d, j, t, q);
        col_axpy(right, j, t, q);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) {
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < m; ++i)
          if (d(i, t) != 0 && abs(d(i, t)) < abs(d(bi, bj))) {
            bi = i;
            bj = t;
          }
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(t, j) != 0 && abs(d(t, j)) < abs(d(bi, bj))) {
            bi = t;
            bj = j;
          }
        swap_rows(d, t, bi);
        swap_rows(left, t, bi);
        swap_cols(d, t, bj);
        swap_cols(right, t, bj);
        continue;
      }
      // Divisibility chain: fold an offending row into the pivot row.
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            row_axpy(d, t, i, Integer(-1));
            row_axpy(left, t, i, Integer(-1));
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (d(t, t) < 0) {
      for (std::size_t j = 0; j < n; ++j) d(t, j) = -d(t, j);
      for (std::size_t j = 0; j < m; ++j) left(t, j) = -left(t, j);
    }
  }
  return SmithForm{std::move(left), std::move(d), std::move(right), t};
}

IntMatrix unimodular_inverse(const IntMatrix& m) {
  auto inv = inverse(to_rational(m));
  if (!inv) throw PreconditionError("matrix is singular");
  return to_integer(*inv);
}

}  // namespace lmono
