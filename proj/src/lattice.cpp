#include "lmono/lattice.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace lmono {

void require_full_row_rank(const IntMatrix& C) {
  if (C.rows() == 0) return;
  if (rank(C) != C.rows())
    throw PreconditionError("exponent matrix has rank " + std::to_string(rank(C)) + " < " +
                            std::to_string(C.rows()) + " rows");
}

PreimageLattice preimage_lattice(const IntMatrix& C) {
  require_full_row_rank(C);
  const std::size_t r = C.rows();
  const SmithForm snf = smith_normal_form(C);
  PreimageLattice g{RatMatrix(r, r), Integer(1), snf.divisors()};
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) g.basis(i, j) = Rational(snf.left(i, j), g.divisors[i]);
    g.index *= g.divisors[i];
  }
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) g.basis(i, j).canonicalize();
  return g;
}

bool in_preimage(const RatVector& v, const IntMatrix& C) { return is_integral(v * to_rational(C)); }

bool in_lattice(const RatVector& v, const PreimageLattice& g) {
  auto x = solve_left(v, g.basis);
  return x && is_integral(*x);
}

std::vector<RatVector> coset_representatives(const PreimageLattice& g) {
  const std::size_t r = g.basis.rows();
  std::vector<RatVector> reps;
  IntVector a(r, Integer(0));
  while (true) {
    RatVector v(r, Rational(0));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) v[j] += a[i] * g.basis(i, j);
    reps.push_back(std::move(v));
    std::size_t i = 0;
    for (; i < r; ++i) {
      if (++a[i] < g.divisors[i]) break;
      a[i] = 0;
    }
    if (i == r) break;
  }
  return reps;
}

namespace {

// Parallelepiped points are enumerated one by one; refuse absurd cones.
constexpr long kParallelepipedCap = 2000000;

IntVector primitive(const RatVector& v) {
  const Integer l = lcm_of_denominators(v);
  IntVector z;
  Integer g = 0;
  for (const auto& q : v) {
    z.push_back(as_integer(q * l));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.back().get_mpz_t());
  }
  if (g != 0)
    for (auto& x : z) x /= g;
  return z;
}

bool is_zero(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
    if (pos == k) {
      fn(idx);
      return;
    }
    for (std::size_t i = start; i + (k - pos) <= n; ++i) {
      idx[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
}

std::vector<IntVector> extreme_rays(const IntMatrix& M) {
  const std::size_t k = M.rows(), p = M.cols();
  std::set<IntVector> rays;
  auto consider = [&](const IntVector& z) {
    if (is_zero(z)) return;
    if (is_nonnegative(z * M)) rays.insert(z);
    IntVector neg = z;
    for (auto& x : neg) x = -x;
    if (is_nonnegative(neg * M)) rays.insert(neg);
  };
  if (k == 1) {
    consider(IntVector{Integer(1)});
  } else {
    for_each_subset(p, k - 1, [&](const std::vector<std::size_t>& cols) {
      RatMatrix sub(cols.size(), k);  // transpose of the column block
      for (std::size_t a = 0; a < cols.size(); ++a)
        for (std::size_t i = 0; i < k; ++i) sub(a, i) = M(i, cols[a]);
      if (rank(sub) != k - 1) return;
      const RatMatrix ker = right_kernel(sub);
      consider(primitive(ker.row(0)));
    });
  }
  return {rays.begin(), rays.end()};
}

std::size_t rank_of(const std::vector<IntVector>& rays, const std::vector<std::size_t>& idx) {
  if (idx.empty()) return 0;
  std::vector<IntVector> rows;
  for (auto i : idx) rows.push_back(rays[i]);
  return rank(IntMatrix::from_rows(rows));
}

// Pulling triangulation: cone(face) = union over facets G not containing the
// apex of cone(apex, G).
std::vector<std::vector<std::size_t>> triangulate(const std::vector<IntVector>& rays,
                                                  const std::vector<IntVector>& slack,
                                                  const std::vector<std::size_t>& face, std::size_t dim) {
  if (face.size() == dim) return {face};
  const std::size_t apex = face.front();
  std::set<std::vector<std::size_t>> facets;
  const std::size_t ncons = slack.empty() ? 0 : slack.front().size();
  for (std::size_t j = 0; j < ncons; ++j) {
    std::vector<std::size_t> sub;
    for (auto i : face)
      if (slack[i][j] == 0) sub.push_back(i);
    if (sub.size() == face.size() || std::find(sub.begin(), sub.end(), apex) != sub.end()) continue;
    if (rank_of(rays, sub) == dim - 1) facets.insert(sub);
  }
  std::vector<std::vector<std::size_t>> out;
  for (const auto& f : facets)
    for (auto simplex : triangulate(rays, slack, f, dim - 1)) {
      simplex.push_back(apex);
      out.push_back(std::move(simplex));
    }
  return out;
}

// Lattice points of {sum q_i P_i : 0 <= q_i < 1}.
std::vector<IntVector> parallelepiped_points(const IntMatrix& P) {
  const std::size_t k = P.rows();
  const SmithForm snf = smith_normal_form(P);
  const IntVector d = snf.divisors();
  Integer count = 1;
  for (const auto& x : d) count *= x;
  if (count > kParallelepipedCap) throw CapExceeded("simplicial cone has too many parallelepiped points");
  const IntMatrix right_inv = unimodular_inverse(snf.right);
  const RatMatrix P_inv = *inverse(to_rational(P));
  const RatMatrix Pq = to_rational(P);
  std::vector<IntVector> pts;
  IntVector w(k, Integer(0));
  while (true) {
    RatVector q = to_rational(w * right_inv) * P_inv;
    for (auto& x : q) {
      Integer f;
      mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
      x -= f;
    }
    IntVector pt;
    for (const auto& x : q * Pq) pt.push_back(as_integer(x));
    pts.push_back(std::move(pt));
    std::size_t i = 0;
    for (; i < k; ++i) {
      if (++w[i] < d[i]) break;
      w[i] = 0;
    }
    if (i == k) break;
  }
  return pts;
}

}  // namespace

std::vector<IntVector> hilbert_basis_of_cone(const IntMatrix& M) {
  require_full_row_rank(M);
  const std::size_t k = M.rows();
  if (k == 0) return {};
  const std::vector<IntVector> rays = extreme_rays(M);
  std::vector<std::size_t> all(rays.size());
  for (std::size_t i = 0; i < rays.size(); ++i) all[i] = i;
  if (rank_of(rays, all) != k) throw PreconditionError("cone is not full-dimensional");
  std::vector<IntVector> slack;
  for (const auto& r : rays) slack.push_back(r * M);

  std::set<IntVector> cands(rays.begin(), rays.end());
  for (const auto& simplex : triangulate(rays, slack, all, k)) {
    std::vector<IntVector> rows;
    for (auto i : simplex) rows.push_back(rays[i]);
    for (auto& p : parallelepiped_points(IntMatrix::from_rows(rows)))
      if (!is_zero(p)) cands.insert(std::move(p));
  }

  std::vector<IntVector> out;
  for (const auto& x : cands) {
    bool reducible = false;
    for (const auto& y : cands) {
      if (y == x) continue;
      IntVector diff(k);
      for (std::size_t i = 0; i < k; ++i) diff[i] = x[i] - y[i];
      if (is_nonnegative(diff * M)) {
        reducible = true;
        break;
      }
    }
    if (!reducible) out.push_back(x);
  }
  return out;
}

ConeSemigroup hilbert_basis(const IntMatrix& C, SemigroupKind which) {
  require_full_row_rank(C);
  ConeSemigroup out{which, {}};
  if (which == SemigroupKind::H) {
    for (const auto& z : hilbert_basis_of_cone(C)) out.hilbert.push_back(to_rational(z));
  } else {
    const PreimageLattice g = preimage_lattice(C);
    const IntMatrix M = to_integer(g.basis * to_rational(C));
    for (const auto& z : hilbert_basis_of_cone(M)) out.hilbert.push_back(to_rational(z) * g.basis);
  }
  std::sort(out.hilbert.begin(), out.hilbert.end());
  return out;
}

bool in_semigroup(const RatVector& v, const IntMatrix& C, SemigroupKind which) {
  if (which == SemigroupKind::H && !is_integral(v)) return false;
  const RatVector img = v * to_rational(C);
  if (!is_integral(img)) return false;
  return std::all_of(img.begin(), img.end(), [](const Rational& q) { return q >= 0; });
}

ModuleGens module_generators(const IntMatrix& C, const IntVector& lambda) {
  require_full_row_rank(C);
  const std::size_t r = C.rows(), s = C.cols();
  if (lambda.size() != s) throw PreconditionError("lambda length must equal the column count of C");
  if (!is_nonnegative(lambda)) throw PreconditionError("lambda must be nonnegative");
  ModuleGens out{lambda, {}, hilbert_basis(C, SemigroupKind::H).hilbert};
  const PreimageLattice g = preimage_lattice(C);
  // Each coset g + Z^r: homogenize {z : zC + (gC + lambda) >= 0} and keep the
  // Hilbert basis elements at height 1.
  for (const auto& rep : coset_representatives(g)) {
    const RatVector shift = rep * to_rational(C);
    IntMatrix M(r + 1, s + 1);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < s; ++j) M(i, j) = C(i, j);
    for (std::size_t j = 0; j < s; ++j) M(r, j) = as_integer(shift[j]) + lambda[j];
    M(r, s) = 1;
    for (const auto& h : hilbert_basis_of_cone(M)) {
      if (h[r] != 1) continue;
      RatVector v = rep;
      for (std::size_t i = 0; i < r; ++i) v[i] += h[i];
      out.gens.push_back(std::move(v));
    }
  }
  std::sort(out.gens.begin(), out.gens.end());
  return out;
}

bool in_module(const RatVector& v, const IntMatrix& C, const IntVector& lambda) {
  const RatVector img = v * to_rational(C);
  if (!is_integral(img)) return false;
  for (std::size_t j = 0; j < img.size(); ++j)
    if (img[j] + lambda[j] < 0) return false;
  return true;
}

}  // namespace lmono
