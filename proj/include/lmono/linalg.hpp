#ifndef LMONO_LINALG_HPP
#define LMONO_LINALG_HPP

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "lmono/rational.hpp"

namespace lmono {

// Dense row-major matrix over an exact ring.
template <typename T>
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<long>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw PreconditionError("ragged matrix literal");
      for (long x : row) data_.emplace_back(x);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    Matrix m;
    m.rows_ = rows.size();
    m.cols_ = rows.empty() ? 0 : rows.front().size();
    for (const auto& r : rows) {
      if (r.size() != m.cols_) throw PreconditionError("ragged matrix rows");
      m.data_.insert(m.data_.end(), r.begin(), r.end());
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  std::vector<T> col(std::size_t j) const {
    std::vector<T> c;
    c.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
    return c;
  }
  void set_row(std::size_t i, const std::vector<T>& r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = r[j];
  }

  std::vector<std::vector<T>> to_rows() const {
    std::vector<std::vector<T>> out;
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw PreconditionError("matrix product: shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  // Row vector times matrix.
  friend std::vector<T> operator*(const std::vector<T>& v, const Matrix& m) {
    if (v.size() != m.rows_) throw PreconditionError("vector-matrix product: shape mismatch");
    std::vector<T> out(m.cols_, T(0));
    for (std::size_t i = 0; i < m.rows_; ++i) {
      if (v[i] == 0) continue;
      for (std::size_t j = 0; j < m.cols_; ++j) out[j] += v[i] * m(i, j);
    }
    return out;
  }

  // Matrix times column vector.
  friend std::vector<T> operator*(const Matrix& m, const std::vector<T>& v) {
    if (v.size() != m.cols_) throw PreconditionError("matrix-vector product: shape mismatch");
    std::vector<T> out(m.rows_, T(0));
    for (std::size_t i = 0; i < m.rows_; ++i)
      for (std::size_t j = 0; j < m.cols_; ++j) out[i] += m(i, j) * v[j];
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

RatMatrix to_rational(const IntMatrix& m);
// Throws PreconditionError if some entry is not integral.
IntMatrix to_integer(const RatMatrix& m);

std::size_t rank(const RatMatrix& m);
std::size_t rank(const IntMatrix& m);
Rational determinant(const RatMatrix& m);
Integer determinant(const IntMatrix& m);
std::optional<RatMatrix> inverse(const RatMatrix& m);

// Unique x with x*m == v, assuming m has independent rows; nullopt if v is
// outside the row space.
std::optional<RatVector> solve_left(const RatVector& v, const RatMatrix& m);

// Basis (as rows) of {e : m * e == 0}.
RatMatrix right_kernel(const RatMatrix& m);

bool is_nonnegative(const IntMatrix& m);
bool is_nonnegative(const IntVector& v);
bool is_unimodular(const IntMatrix& m);

// Smith normal form: left * a * right == diag, with left and right unimodular
// and diag(i, i) dividing diag(i+1, i+1), all diagonal entries nonnegative.
struct SmithForm {
  IntMatrix left;
  IntMatrix diag;
  IntMatrix right;
  std::size_t rank = 0;
  IntVector divisors() const;
};

SmithForm smith_normal_form(const IntMatrix& a);

// Inverse of a unimodular integer matrix.
IntMatrix unimodular_inverse(const IntMatrix& m);

}  // namespace lmono

#endif  // LMONO_LINALG_HPP
