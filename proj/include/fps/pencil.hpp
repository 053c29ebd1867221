#pragma once

// Monic linear pencils L = I - sum_i A_i X_i and their free spectrahedra.
// Sign convention is minus everywhere; a plus-sign pencil is represented by
// negating its coefficients.

#include "fps/numkernel.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fps {

/// A point in S^g(k): g hermitian k x k matrices. Construction symmetrizes.
struct HermTuple {
  int g = 0;
  int k = 0;
  std::vector<CMatrix> mats;

  HermTuple() = default;
  HermTuple(std::vector<CMatrix> matrices, bool already_hermitian = false);

  static HermTuple zero(int g, int k);
  /// GUE sample.
  static HermTuple random(int g, int k, Rng& rng);

  double norm() const;  // sqrt(sum_i ||X_i||_F^2)
  HermTuple scaled(double t) const;
  HermTuple direct_sum(const HermTuple& other) const;
  HermTuple conjugated(const CMatrix& u) const;  // u* X_i u
};

struct MonicPencil {
  int delta = 0;
  int g = 0;
  std::vector<CMatrix> coeffs;  // hermitian delta x delta, symmetrized on construction
  std::string label;

  MonicPencil() = default;
  MonicPencil(std::vector<CMatrix> a, std::string label = {});

  /// L = I - diag(values) x1 (g = 1).
  static MonicPencil diagonal(const std::vector<double>& values, std::string label = {});
};

enum class Verdict { Interior, Boundary, Outside };

struct Classification {
  Verdict verdict;
  double min_eigenvalue;
  std::optional<CMatrix> kernel_basis;  // populated iff Boundary
};

const char* to_string(Verdict v);

struct NotUnitary : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroDirection : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Truly linear part sum_i A_i (x) X_i.
CMatrix truly_linear(const MonicPencil& l, const HermTuple& x);

/// L(X) = I - sum_i A_i (x) X_i, hermitian of size delta*k.
CMatrix evaluate(const MonicPencil& l, const HermTuple& x);

/// Membership tolerance scales with the point: tol = 1e-8 * (1 + ||X||).
double default_member_tol(const HermTuple& x);

Classification classify(const MonicPencil& l, const HermTuple& x, double tol = -1.0);

/// X in Z(L), i.e. ker L(X) != 0 regardless of PSD-ness. Optionally returns
/// the kernel basis.
bool in_free_locus(const MonicPencil& l, const HermTuple& x, double tol = -1.0,
                   CMatrix* kernel = nullptr);

MonicPencil direct_sum(const MonicPencil& a, const MonicPencil& b);

/// Coefficients u* A_i u for unitary u.
MonicPencil conjugate(const MonicPencil& l, const CMatrix& u);

/// det L(X) as a signed real (product of eigenvalues).
double det_level(const MonicPencil& l, const HermTuple& x);

/// Roots of t -> det L(tX): reciprocals of the nonzero eigenvalues of the
/// hermitian direction matrix sum A_i (x) X_i. Real by construction.
std::vector<double> line_roots(const MonicPencil& l, const HermTuple& x);

/// Newton-normalized residual |p(t0)| / |p'(t0)| of a reported root
/// (estimated distance to the exact root). Also returns the raw |det|.
struct RootResidual {
  double newton;
  double raw_det;
};
RootResidual line_root_residual(const MonicPencil& l, const HermTuple& x, double root);

/// lambda_min(I (x) I - sum_i B_i (x) A_i) >= -tol.
bool polar_member(const HermTuple& b, const HermTuple& a, double tol = 1e-8);

/// Scale t such that t*X sits on the ray boundary of D_L (smallest t > 0 with
/// det L(tX) = 0); nullopt when the ray never leaves the spectrahedron.
std::optional<double> boundary_scale(const MonicPencil& l, const HermTuple& x);

}  // namespace fps
