#pragma once

// Coefficient *-algebra analysis: commutant, irreducibility,
// invariant-subspace splitting, unitary equivalence of tuples, and the
// decomposition of a pencil into irreducible unitary-equivalence classes
// with multiplicities (normal form (I_r (x) 0) + sum_j I_h(j) (x) C_j).

#include "fps/pencil.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace fps {

struct SplitFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AlgebraBasis {
  int delta = 0;
  std::vector<CMatrix> basis;  // Frobenius-orthonormal
  int dim() const { return static_cast<int>(basis.size()); }
};

/// Unital algebra generated by the tuple, closed iteratively under
/// left-multiplication by generators with Gram-Schmidt at tol 1e-9.
AlgebraBasis algebra_span(const std::vector<CMatrix>& a);

/// Basis of {S : S A_i = A_i S for all i}. Always contains a multiple of I.
std::vector<CMatrix> commutant(const std::vector<CMatrix>& a);

/// Commutant dimension 1. For hermitian tuples this is equivalent to having
/// no joint non-trivial invariant subspace.
bool is_irreducible(const std::vector<CMatrix>& a);

/// Either irreducible, or two isometries onto complementary reducing
/// subspaces (V_i* A_j V_i hermitian, V_1* A_j V_2 = 0 within 1e-8).
struct SplitResult {
  bool irreducible = false;
  CMatrix v1, v2;  // delta x r_i isometries when reducible
};
SplitResult split_once(const std::vector<CMatrix>& a, Rng& rng);

/// Unitary u with u A_i u* = B_i, or nullopt. Irreducible inputs go through
/// the intertwiner space; general inputs are decomposed and matched
/// class-by-class.
std::optional<CMatrix> unitary_equivalent(const std::vector<CMatrix>& a,
                                          const std::vector<CMatrix>& b);

struct DecompClass {
  std::vector<CMatrix> representative;  // irreducible tuple at level size
  int size = 0;
  int multiplicity = 0;
};

struct DecompositionReport {
  std::vector<DecompClass> classes;  // canonical order (size asc, eigen-lex)
  int zero_rank = 0;
  CMatrix transform;    // unitary U with U* A_i U in normal form
  double max_residual;  // max_i ||U* A_i U - normal form||_F
  int delta = 0;
  int g = 0;

  int component_count() const { return static_cast<int>(classes.size()); }
  int minimal_size() const;
  /// Normal-form coefficients (I_r (x) 0) + sum_j I_h(j) (x) C_j.
  std::vector<CMatrix> normal_form() const;
};

DecompositionReport decompose(const MonicPencil& l, std::uint64_t seed = 0xF5EE);

/// Direct sum of one representative per class, zero blocks dropped.
/// A fully zero pencil has no classes; callers must handle size 0.
std::optional<MonicPencil> try_minimal_pencil(const MonicPencil& l,
                                              std::uint64_t seed = 0xF5EE);
MonicPencil minimal_pencil(const MonicPencil& l, std::uint64_t seed = 0xF5EE);

/// Number of irreducible components of the free locus Z(L).
int count_components(const MonicPencil& l, std::uint64_t seed = 0xF5EE);

/// Heuristic (non-certified) redundancy scan: class j is flagged when 512
/// random boundary points of the intersection of the other classes all sit
/// strictly inside D_{L_j}. Exact containment would need an SDP.
std::vector<int> prune_heuristic(const DecompositionReport& report, int samples,
                                 Rng& rng);

}  // namespace fps
