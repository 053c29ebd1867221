#pragma once

// Degree hierarchy of det_k L: rank-sampling estimator, the WDW*
// decomposition QAQ^T = WDW* of hermitian matrices of rational expressions
// with per-level rank counting, eventual slope detection, and determinant
// multiplicativity checks.

#include "fps/expr.hpp"
#include "fps/pencil.hpp"

#include <map>
#include <optional>
#include <vector>

namespace fps {

enum class VarKind { generic, hermitian };

/// max over trials of rank(sum_i A_i (x) B_i) with B random Ginibre
/// (generic) or GUE (hermitian). A gap check sigma_r/sigma_{r+1} >= 1e3
/// guards the integer claim; failing draws are resampled.
int degree_at_level(const MonicPencil& l, int k, int trials, double rtol, VarKind kind,
                    Rng& rng);

inline int degree_at_level(const MonicPencil& l, int k, Rng& rng) {
  return degree_at_level(l, k, 20, kRankRtol, VarKind::generic, rng);
}

/// The 7x7 tridiagonal counterexample pencil over variables {a,x,y,z}:
/// superdiagonal pattern (z,x,y,z,x,y), corners a and -a; L = I_7 - H.
MonicPencil gegen_pencil();
const std::vector<std::string>& gegen_names();

/// Truly linear part of a pencil as a matrix of expressions.
ExprMatrix pencil_to_exprmatrix(const MonicPencil& l,
                                std::vector<std::string> names = {});

// ---- WDW* ----------------------------------------------------------------------

struct WdwBlock {
  bool antidiag = false;  // false: (p); true: [[0, p*],[p, 0]]
  ExprPtr p;
};

struct WdwResult {
  std::vector<int> permutation;  // (QAQ^T)[i][j] = A[perm[i]][perm[j]]
  ExprMatrix w;                  // lower unitriangular, permuted order
  std::vector<WdwBlock> blocks;  // diagonal of D, top-left to bottom-right
  std::vector<int> probe_levels;
  std::map<int, std::vector<bool>> zero_flags;  // level -> flag per block
  int g = 0;
  std::vector<std::string> var_names;

  int size() const;  // total diagonal length
};

/// Symmetric elimination per the two pivot rules (scalar pivot with Schur
/// update, antidiagonal pivot when only off-diagonal entries survive).
/// Pivot nonzero-ness is decided by is_zero_fn at the largest probe level;
/// zero_flags records every block's status at every probe level.
WdwResult wdw(const ExprMatrix& m, std::vector<int> probe_levels, Rng& rng);

inline WdwResult wdw(const ExprMatrix& m, Rng& rng) { return wdw(m, {1, 2, 3}, rng); }

/// h*k where h counts D-blocks that are nonzero functions at level k
/// (antidiagonal blocks count twice). Re-probes when k was not recorded.
int wdw_rank_per_level(const WdwResult& res, int k, Rng& rng);

/// Relative residual ||QM(B)Q^T - W(B) D(B) W(B)*|| / (1 + ||QM(B)Q^T||) at a
/// random hermitian domain point of level k.
double wdw_reconstruction_residual(const WdwResult& res, const ExprMatrix& m, int k,
                                   Rng& rng);

// ---- slope ----------------------------------------------------------------------

struct DegreeTable {
  std::map<int, int> degs;       // level -> degree
  std::optional<int> slope_b;    // unset when unstable
  std::optional<int> threshold_n;
  bool unstable = false;
  std::string note;
  int trials_used = 0;
};

/// Fills degrees for k = 1..kmax; b = degs[kmax]/kmax must be integral and
/// consistent with level kmax-1, else the table is flagged Unstable (still
/// returned). N is the least level from which deg_k = b*k onwards.
DegreeTable eventual_slope(const MonicPencil& l, int kmax, int trials, Rng& rng);

struct MultiplicativityReport {
  int samples = 0;
  int passes = 0;
  double max_violation = 0.0;  // relative: |det(X+Z)-det X det Z|/(1+|prod|)
};

/// det_level(L, X (+) Z) = det_level(L,X) * det_level(L,Z) over random pairs.
MultiplicativityReport verify_multiplicativity(const MonicPencil& l, int k1, int k2,
                                               int samples, double tol, Rng& rng);

}  // namespace fps
