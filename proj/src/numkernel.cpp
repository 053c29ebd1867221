#include "fps/numkernel.hpp"

#include <cmath>

namespace fps {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 bounded away from 0 so the log is finite.
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 1e-300);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

bool is_hermitian(const CMatrix& m, double htol) {
  if (m.rows() != m.cols()) return false;
  const double scale = 1.0 + m.norm();
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= htol * scale;
}

CMatrix symmetrize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

EigResult hermitian_eig(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(symmetrize(h));
  if (solver.info() != Eigen::Success)
    throw ConvergenceFailure("hermitian_eig: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::Index numerical_rank(const CMatrix& m, double rtol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  if (smax == 0.0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rtol * smax) ++r;
  return r;
}

CMatrix nullspace(const CMatrix& m, double rtol) { return nullspace_scaled(m, rtol, 0.0); }

CMatrix nullspace_scaled(const CMatrix& m, double rtol, double scale) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = std::max(sv.size() ? sv(0) : 0.0, scale);
  Eigen::Index r = 0;
  if (smax > 0.0)
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > rtol * smax) ++r;
  return svd.matrixV().rightCols(m.cols() - r);
}

CMatrix polar_unitary(const CMatrix& s) {
  if (s.rows() != s.cols()) throw DimensionMismatch("polar_unitary: square input required");
  if (numerical_rank(s) != s.rows()) throw SingularInput("polar_unitary: rank-deficient input");
  Eigen::JacobiSVD<CMatrix> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

std::vector<CMatrix> random_tuple(int g, int k, RandomKind kind, Rng& rng) {
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(g));
  for (int i = 0; i < g; ++i) {
    CMatrix m(k, k);
    for (Eigen::Index r = 0; r < k; ++r)
      for (Eigen::Index c = 0; c < k; ++c) m(r, c) = rng.cnormal();
    if (kind == RandomKind::gue) m = (m + m.adjoint().eval()) / std::sqrt(2.0);
    out.push_back(std::move(m));
  }
  return out;
}

CMatrix random_unitary(int n, Rng& rng) {
  CMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = rng.cnormal();
  Eigen::HouseholderQR<CMatrix> qr(m);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    Complex d = r(i, i);
    q.col(i) *= (d == Complex(0) ? Complex(1) : d / std::abs(d));
  }
  return q;
}

}  // namespace fps
