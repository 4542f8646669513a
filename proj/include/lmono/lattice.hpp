#ifndef LMONO_LATTICE_HPP
#define LMONO_LATTICE_HPP

#include <cstddef>
#include <vector>

#include "lmono/linalg.hpp"

namespace lmono {

// G = {v in Q^r : vC in Z^s}. With left*C*right = diag(d_1..d_r), the rows
// left_i / d_i form a basis and [G : Z^r] = d_1 * ... * d_r.
struct PreimageLattice {
  RatMatrix basis;
  Integer index;
  IntVector divisors;
};

// Throws PreconditionError unless rank(C) equals its row count.
void require_full_row_rank(const IntMatrix& C);

PreimageLattice preimage_lattice(const IntMatrix& C);

// vC in Z^s.
bool in_preimage(const RatVector& v, const IntMatrix& C);
// v is an integral combination of the basis rows.
bool in_lattice(const RatVector& v, const PreimageLattice& g);

// Representatives of G / Z^r: sum a_i * basis_i with 0 <= a_i < d_i.
std::vector<RatVector> coset_representatives(const PreimageLattice& g);

// Hilbert basis of the pointed, full-dimensional cone {z in Z^k : zM >= 0},
// rank(M) = k. Sorted lexicographically.
std::vector<IntVector> hilbert_basis_of_cone(const IntMatrix& M);

enum class SemigroupKind { H, I };

// H = {v in Z^r : vC >= 0}, I = {v in G : vC >= 0}.
struct ConeSemigroup {
  SemigroupKind which = SemigroupKind::H;
  std::vector<RatVector> hilbert;
};

ConeSemigroup hilbert_basis(const IntMatrix& C, SemigroupKind which);

// Membership in H or I.
bool in_semigroup(const RatVector& v, const IntMatrix& C, SemigroupKind which);

// M_lambda = {v in G : vC_j + lambda_j >= 0 for all j} as a module over H:
// M_lambda is the union of gens_i + H, and `over` is the Hilbert basis of H.
// M_0 = I, so module_generators(C, 0) generates I as an H-module.
struct ModuleGens {
  IntVector lambda;
  std::vector<RatVector> gens;
  std::vector<RatVector> over;
};

ModuleGens module_generators(const IntMatrix& C, const IntVector& lambda);

bool in_module(const RatVector& v, const IntMatrix& C, const IntVector& lambda);

}  // namespace lmono

#endif  // LMONO_LATTICE_HPP
