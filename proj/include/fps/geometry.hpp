#pragma once

// Convex-geometric operations on free spectrahedra: separation certificates,
// projection-lemma witnesses, minimal boundary projections, extreme-point
// tests and Caratheodory reduction of matrix convex combinations.

#include "fps/pencil.hpp"

#include <optional>
#include <vector>

namespace fps {

struct NotOutside : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotBoundary : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DependenceSolveFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A monic pencil of size delta = Y.k separating Y from D_M, with the
/// eigenvector witness the construction came from. Soundness: L(X) >= 0 on
/// D_M, lambda_min(L(Y)) = negativity < 0.
struct SeparationCertificate {
  MonicPencil pencil;
  CVector witness;    // unit eigenvector of lambda_min(M(Y)), in C^{m*delta}
  double negativity;  // lambda_min of the certificate at Y
};

SeparationCertificate separate(const MonicPencil& m, const HermTuple& y,
                               double tol = -1.0);

/// Rank <= delta compression that preserves an Outside verdict: w the most
/// negative unit eigenvector of L(A), P the span of its delta components.
struct Compression {
  CMatrix isometry;     // k x r, orthonormal columns; compression is V* A V
  HermTuple compressed; // level r
};

Compression compress_witness(const MonicPencil& l, const HermTuple& a, double tol = -1.0);

/// Projection onto the components of a kernel vector; the compression stays
/// on the boundary. multiple_kernel is set when dim ker L(A) > 1 (uniqueness
/// of the minimal projection then needs a regularity hypothesis).
Compression minimal_boundary_projection(const MonicPencil& l, const HermTuple& a,
                                        bool* multiple_kernel = nullptr);

/// A is an extreme point of the level-k spectrahedron: the linear system
/// (sum_i A^L_i (x) H_i) v = 0 over hermitian H for all kernel vectors v has
/// only H = 0.
bool is_euclidean_extreme(const MonicPencil& l, const HermTuple& a);

struct Dilation {
  std::vector<CVector> alpha;  // g columns in C^k
  std::vector<double> beta;    // all zero in this construction
  double t = 0.0;
  HermTuple dilated;           // [[A_i, t alpha_i],[t alpha_i*, 0]]
  bool verified = false;       // dilated tuple confirmed inside D_L
};

struct AbsoluteExtremeResult {
  bool absolute = false;
  std::optional<Dilation> dilation;  // present when not absolute
  bool inconclusive = false;         // bisection failed to verify membership
};

/// "alpha = 0" criterion: solves v*(sum_i A^L_i (x) alpha_i) = 0 over
/// alpha in (C^k)^g for every kernel vector v; a nonzero solution yields a
/// constructive dilation witness with t found by bisection in (0,1].
AbsoluteExtremeResult absolute_extreme_test(const MonicPencil& l, const HermTuple& a);

struct CombTerm {
  HermTuple c;  // level k_j
  CMatrix v;    // k_j x m
};

/// sum_j V_j* C_j V_j with sum_j V_j* V_j = I_m.
struct MatrixCombination {
  int m = 0;
  std::vector<CombTerm> terms;

  HermTuple value() const;            // sum_j V_j* C_j V_j
  double identity_residual() const;   // ||sum V_j* V_j - I||_F
};

/// Reduce to at most 4m^2+1 terms (valid bound for g <= 3; larger g reduces
/// to (g+1)m^2+1) by repeatedly zeroing one coefficient of a real affine
/// dependence. Preserves the value and the identity sum to 1e-9.
MatrixCombination caratheodory_reduce(const MatrixCombination& comb);

enum class Prefilter { FailsNecessary, PassesNecessary };

/// Necessary conditions for matrix extremality: irreducible + boundary +
/// euclidean extreme. Not a sufficiency certificate.
Prefilter matrix_extreme_prefilter(const MonicPencil& l, const HermTuple& a);

}  // namespace fps
