#pragma once

// Dense complex linear-algebra primitives shared by every other module.
// All numerical contracts (hermiticity tolerance, relative rank threshold)
// are fixed here.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fps {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// |M[i,j] - conj(M[j,i])| must stay below htol * (1 + ||M||_F).
inline constexpr double kHermTol = 1e-10;

/// Default relative rank threshold: sigma_i > rtol * sigma_max counts.
inline constexpr double kRankRtol = 1e-9;

struct ConvergenceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- deterministic RNG -----------------------------------------------------

// splitmix64 stream with a Box-Muller normal source. Self-contained so that
// seeded runs reproduce bit-exactly across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0,1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard real normal.
  double normal();

  /// Standard complex normal, E|z|^2 = 1.
  Complex cnormal() { return Complex(normal(), normal()) / std::sqrt(2.0); }

  /// Independent child stream; deterministic in (parent state, salt).
  Rng fork(std::uint64_t salt) const {
    Rng child(state_ ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
    child.next_u64();
    return child;
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// ---- basic predicates and transforms ----------------------------------------

bool is_hermitian(const CMatrix& m, double htol = kHermTol);

/// (M + M*) / 2.
CMatrix symmetrize(const CMatrix& m);

/// Kronecker product, (a kron b)[(i*p+r),(j*q+s)] = a[i,j] * b[r,s].
CMatrix kron(const CMatrix& a, const CMatrix& b);

// ---- factorizations ---------------------------------------------------------

struct EigResult {
  RVector values;   // ascending
  CMatrix vectors;  // unitary, columns match values
};

/// Eigendecomposition of a hermitian matrix. Symmetrizes its input first.
/// Throws ConvergenceFailure if the solver does not converge.
EigResult hermitian_eig(const CMatrix& h);

/// Number of singular values above rtol * sigma_max; 0 for the zero matrix.
Eigen::Index numerical_rank(const CMatrix& m, double rtol = kRankRtol);

/// Orthonormal basis (columns) of the approximate kernel at relative
/// threshold rtol. May have zero columns.
CMatrix nullspace(const CMatrix& m, double rtol = kRankRtol);

/// Nullspace with threshold rtol * max(sigma_max, scale). Use when the
/// system's natural scale is external, e.g. difference systems between
/// nearly identical tuples, where sigma_max itself is pure noise.
CMatrix nullspace_scaled(const CMatrix& m, double rtol, double scale);

/// Unitary factor U = s (s*s)^{-1/2} of an invertible matrix.
/// Throws SingularInput on rank deficiency.
CMatrix polar_unitary(const CMatrix& s);

// ---- random points ----------------------------------------------------------

enum class RandomKind { ginibre, gue };

/// g independent k x k samples. ginibre: iid standard complex normal entries;
/// gue: (M + M*)/sqrt(2) of a ginibre sample.
std::vector<CMatrix> random_tuple(int g, int k, RandomKind kind, Rng& rng);

/// Haar-distributed unitary (QR of a ginibre sample with phase correction).
CMatrix random_unitary(int n, Rng& rng);

inline double frob(const CMatrix& m) { return m.norm(); }

}  // namespace fps
