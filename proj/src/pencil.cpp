#include "fps/pencil.hpp"

#include <cmath>

namespace fps {

HermTuple::HermTuple(std::vector<CMatrix> matrices, bool already_hermitian)
    : g(static_cast<int>(matrices.size())), mats(std::move(matrices)) {
  if (mats.empty()) throw DimensionMismatch("HermTuple: empty tuple");
  k = static_cast<int>(mats[0].rows());
  for (auto& m : mats) {
    if (m.rows() != k || m.cols() != k)
      throw DimensionMismatch("HermTuple: matrices must share dimension k");
    if (!already_hermitian) m = symmetrize(m);
  }
}

HermTuple HermTuple::zero(int g, int k) {
  std::vector<CMatrix> mats(static_cast<std::size_t>(g), CMatrix::Zero(k, k));
  return HermTuple(std::move(mats), true);
}

HermTuple HermTuple::random(int g, int k, Rng& rng) {
  return HermTuple(random_tuple(g, k, RandomKind::gue, rng), true);
}

double HermTuple::norm() const {
  double s = 0.0;
  for (const auto& m : mats) s += m.squaredNorm();
  return std::sqrt(s);
}

HermTuple HermTuple::scaled(double t) const {
  HermTuple out = *this;
  for (auto& m : out.mats) m *= t;
  return out;
}

HermTuple HermTuple::direct_sum(const HermTuple& other) const {
  if (g != other.g) throw DimensionMismatch("direct_sum: variable counts differ");
  std::vector<CMatrix> mats_out;
  mats_out.reserve(static_cast<std::size_t>(g));
  for (int i = 0; i < g; ++i) {
    CMatrix m = CMatrix::Zero(k + other.k, k + other.k);
    m.topLeftCorner(k, k) = mats[static_cast<std::size_t>(i)];
    m.bottomRightCorner(other.k, other.k) = other.mats[static_cast<std::size_t>(i)];
    mats_out.push_back(std::move(m));
  }
  return HermTuple(std::move(mats_out), true);
}

HermTuple HermTuple::conjugated(const CMatrix& u) const {
  std::vector<CMatrix> mats_out;
  mats_out.reserve(mats.size());
  for (const auto& m : mats) mats_out.push_back(u.adjoint() * m * u);
  return HermTuple(std::move(mats_out));
}

MonicPencil::MonicPencil(std::vector<CMatrix> a, std::string lbl)
    : g(static_cast<int>(a.size())), coeffs(std::move(a)), label(std::move(lbl)) {
  if (coeffs.empty()) throw DimensionMismatch("MonicPencil: empty coefficient tuple");
  delta = static_cast<int>(coeffs[0].rows());
  if (delta < 1) throw DimensionMismatch("MonicPencil: minimal size is 1");
  for (auto& m : coeffs) {
    if (m.rows() != delta || m.cols() != delta)
      throw DimensionMismatch("MonicPencil: coefficients must share size delta");
    m = symmetrize(m);
  }
}

MonicPencil MonicPencil::diagonal(const std::vector<double>& values, std::string label) {
  const int d = static_cast<int>(values.size());
  CMatrix a = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) a(i, i) = values[static_cast<std::size_t>(i)];
  return MonicPencil({a}, std::move(label));
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Interior: return "Interior";
    case Verdict::Boundary: return "Boundary";
    case Verdict::Outside: return "Outside";
  }
  return "?";
}

CMatrix truly_linear(const MonicPencil& l, const HermTuple& x) {
  if (l.g != x.g) throw DimensionMismatch("pencil and point have different variable counts");
  CMatrix acc = CMatrix::Zero(l.delta * x.k, l.delta * x.k);
  for (int i = 0; i < l.g; ++i)
    acc += kron(l.coeffs[static_cast<std::size_t>(i)], x.mats[static_cast<std::size_t>(i)]);
  return acc;
}

CMatrix evaluate(const MonicPencil& l, const HermTuple& x) {
  CMatrix k = truly_linear(l, x);
  return CMatrix::Identity(k.rows(), k.cols()) - k;
}

double default_member_tol(const HermTuple& x) { return 1e-8 * (1.0 + x.norm()); }

Classification classify(const MonicPencil& l, const HermTuple& x, double tol) {
  if (tol < 0) tol = default_member_tol(x);
  const CMatrix lx = evaluate(l, x);
  EigResult eig = hermitian_eig(lx);
  const double mineig = eig.values(0);
  Classification out{Verdict::Interior, mineig, std::nullopt};
  if (mineig > tol) {
    out.verdict = Verdict::Interior;
  } else if (mineig < -tol) {
    out.verdict = Verdict::Outside;
  } else {
    out.verdict = Verdict::Boundary;
    Eigen::Index dim = 0;
    while (dim < eig.values.size() && std::abs(eig.values(dim)) <= tol) ++dim;
    out.kernel_basis = eig.vectors.leftCols(dim);
  }
  return out;
}

bool in_free_locus(const MonicPencil& l, const HermTuple& x, double tol, CMatrix* kernel) {
  if (tol < 0) tol = default_member_tol(x);
  const CMatrix lx = evaluate(l, x);
  EigResult eig = hermitian_eig(lx);
  const double smax = eig.values.cwiseAbs().maxCoeff();
  bool hit = false;
  std::vector<Eigen::Index> ker;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (std::abs(eig.values(i)) <= tol * std::max(1.0, smax)) {
      hit = true;
      ker.push_back(i);
    }
  if (kernel) {
    CMatrix basis(lx.rows(), static_cast<Eigen::Index>(ker.size()));
    for (std::size_t j = 0; j < ker.size(); ++j) basis.col(static_cast<Eigen::Index>(j)) = eig.vectors.col(ker[j]);
    *kernel = std::move(basis);
  }
  return hit;
}

MonicPencil direct_sum(const MonicPencil& a, const MonicPencil& b) {
  if (a.g != b.g) throw DimensionMismatch("direct_sum: variable counts differ");
  std::vector<CMatrix> coeffs;
  coeffs.reserve(static_cast<std::size_t>(a.g));
  for (int i = 0; i < a.g; ++i) {
    CMatrix m = CMatrix::Zero(a.delta + b.delta, a.delta + b.delta);
    m.topLeftCorner(a.delta, a.delta) = a.coeffs[static_cast<std::size_t>(i)];
    m.bottomRightCorner(b.delta, b.delta) = b.coeffs[static_cast<std::size_t>(i)];
    coeffs.push_back(std::move(m));
  }
  std::string label = a.label.empty() && b.label.empty() ? std::string{}
                                                         : a.label + "+" + b.label;
  return MonicPencil(std::move(coeffs), std::move(label));
}

MonicPencil conjugate(const MonicPencil& l, const CMatrix& u) {
  if (u.rows() != l.delta || u.cols() != l.delta)
    throw DimensionMismatch("conjugate: unitary size must equal delta");
  if ((u.adjoint() * u - CMatrix::Identity(l.delta, l.delta)).norm() > 1e-9)
    throw NotUnitary("conjugate: transform is not unitary within 1e-9");
  std::vector<CMatrix> coeffs;
  coeffs.reserve(l.coeffs.size());
  for (const auto& a : l.coeffs) coeffs.push_back(u.adjoint() * a * u);
  return MonicPencil(std::move(coeffs), l.label);
}

double det_level(const MonicPencil& l, const HermTuple& x) {
  EigResult eig = hermitian_eig(evaluate(l, x));
  double det = 1.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) det *= eig.values(i);
  return det;
}

std::vector<double> line_roots(const MonicPencil& l, const HermTuple& x) {
  const CMatrix k = truly_linear(l, x);
  const double scale = k.norm();
  if (scale == 0.0) throw ZeroDirection("line_roots: truly linear part vanishes at X");
  EigResult eig = hermitian_eig(k);
  std::vector<double> roots;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (std::abs(eig.values(i)) > 1e-10 * scale) roots.push_back(1.0 / eig.values(i));
  return roots;
}

RootResidual line_root_residual(const MonicPencil& l, const HermTuple& x, double root) {
  // p(t) = det L(tX) = prod_j (1 - t mu_j); numerator from a fresh
  // eigendecomposition of L(root*X), derivative from the mu's. Log-space to
  // dodge overflow.
  const CMatrix k = truly_linear(l, x);
  EigResult dir = hermitian_eig(k);
  EigResult at = hermitian_eig(evaluate(l, x.scaled(root)));

  double log_num = 0.0;
  double sign_num = 1.0;
  bool num_zero = false;
  for (Eigen::Index i = 0; i < at.values.size(); ++i) {
    const double v = at.values(i);
    if (v == 0.0) { num_zero = true; break; }
    log_num += std::log(std::abs(v));
    if (v < 0) sign_num = -sign_num;
  }

  // p'(t0) = -mu_i prod_{j != i} (1 - t0 mu_j) with mu_i the eigenvalue
  // closest to 1/root.
  Eigen::Index best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < dir.values.size(); ++i) {
    const double gap = std::abs(1.0 - root * dir.values(i));
    if (gap < best_gap) { best_gap = gap; best = i; }
  }
  double log_den = std::log(std::abs(dir.values(best)));
  bool den_zero = false;
  for (Eigen::Index j = 0; j < dir.values.size(); ++j) {
    if (j == best) continue;
    const double f = std::abs(1.0 - root * dir.values(j));
    if (f == 0.0) { den_zero = true; break; }
    log_den += std::log(f);
  }

  RootResidual out{};
  out.raw_det = num_zero ? 0.0 : sign_num * std::exp(log_num);
  if (num_zero) {
    out.newton = 0.0;
  } else if (den_zero) {
    out.newton = std::numeric_limits<double>::infinity();  // multiple root; flagged by caller
  } else {
    out.newton = std::exp(log_num - log_den);
  }
  out.raw_det = std::abs(out.raw_det);
  return out;
}

bool polar_member(const HermTuple& b, const HermTuple& a, double tol) {
  if (b.g != a.g) throw DimensionMismatch("polar_member: variable counts differ");
  CMatrix m = CMatrix::Identity(b.k * a.k, b.k * a.k);
  for (int i = 0; i < b.g; ++i)
    m -= kron(b.mats[static_cast<std::size_t>(i)], a.mats[static_cast<std::size_t>(i)]);
  EigResult eig = hermitian_eig(m);
  return eig.values(0) >= -tol;
}

std::optional<double> boundary_scale(const MonicPencil& l, const HermTuple& x) {
  const CMatrix k = truly_linear(l, x);
  EigResult eig = hermitian_eig(k);
  const double lmax = eig.values(eig.values.size() - 1);
  if (lmax <= 1e-12 * (1.0 + k.norm())) return std::nullopt;
  return 1.0 / lmax;
}

}  // namespace fps
