#include "fps/geometry.hpp"

#include "fps/structure.hpp"

#include <cmath>

namespace fps {

namespace {

// Regroup w in C^{delta*k} as the k x delta matrix (w_1 ... w_delta),
// w_alpha the alpha-th component block.
CMatrix component_matrix(const CVector& w, int delta, int k) {
  CMatrix out(k, delta);
  for (int a = 0; a < delta; ++a) out.col(a) = w.segment(a * k, k);
  return out;
}

CMatrix orthonormal_span(const CMatrix& cols) {
  Eigen::JacobiSVD<CMatrix> svd(cols, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  Eigen::Index r = 0;
  if (smax > 0.0)
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-9 * smax) ++r;
  return svd.matrixU().leftCols(r);
}

HermTuple compress_tuple(const HermTuple& a, const CMatrix& basis) {
  std::vector<CMatrix> mats;
  mats.reserve(a.mats.size());
  for (const auto& m : a.mats) mats.push_back(symmetrize(basis.adjoint() * m * basis));
  return HermTuple(std::move(mats), true);
}

}  // namespace

SeparationCertificate separate(const MonicPencil& m, const HermTuple& y, double tol) {
  if (tol < 0) tol = default_member_tol(y);
  const CMatrix my = evaluate(m, y);
  EigResult eig = hermitian_eig(my);
  if (eig.values(0) >= -tol)
    throw NotOutside("separate: point is not outside the spectrahedron");

  const int delta = y.k;
  auto build = [&](const CVector& u) {
    // u = sum_gamma e_gamma (x) u_gamma with u_gamma in C^delta; the
    // certificate coefficients realize v* L(B) v = phi(V* B V) for
    // phi(X) = u* M(X) u (Effros-Winkler via the affine-functional lemma).
    CMatrix ug(delta, m.delta);  // column gamma = u_gamma
    for (int gam = 0; gam < m.delta; ++gam) ug.col(gam) = u.segment(gam * delta, delta);
    std::vector<CMatrix> coeffs;
    coeffs.reserve(m.coeffs.size());
    for (const auto& mj : m.coeffs)
      coeffs.push_back(ug.conjugate() * mj * ug.transpose());
    return MonicPencil(std::move(coeffs),
                       m.label.empty() ? "separation" : "sep(" + m.label + ")");
  };

  // The most negative eigenvector almost surely certifies; degenerate bottom
  // eigenspaces can produce a spread witness, so fall through the others.
  SeparationCertificate best{};
  bool have = false;
  for (Eigen::Index i = 0; i < eig.values.size() && eig.values(i) < -tol; ++i) {
    CVector u = eig.vectors.col(i);
    MonicPencil cert = build(u);
    const double neg = hermitian_eig(evaluate(cert, y)).values(0);
    if (!have || neg < best.negativity) {
      best = {std::move(cert), u, neg};
      have = true;
    }
    if (best.negativity < -tol) return best;
  }
  if (have && best.negativity < -tol) return best;
  throw std::runtime_error("separate: no eigenvector yielded a certificate (degenerate witness)");
}

Compression compress_witness(const MonicPencil& l, const HermTuple& a, double tol) {
  if (tol < 0) tol = default_member_tol(a);
  Classification cls = classify(l, a, tol);
  if (cls.verdict != Verdict::Outside)
    throw NotOutside("compress_witness: point is not outside");
  EigResult eig = hermitian_eig(evaluate(l, a));
  const CMatrix comps = component_matrix(eig.vectors.col(0), l.delta, a.k);
  const CMatrix basis = orthonormal_span(comps);
  return {basis, compress_tuple(a, basis)};
}

Compression minimal_boundary_projection(const MonicPencil& l, const HermTuple& a,
                                        bool* multiple_kernel) {
  Classification cls = classify(l, a);
  if (cls.verdict != Verdict::Boundary || !cls.kernel_basis || cls.kernel_basis->cols() == 0)
    throw NotBoundary("minimal_boundary_projection: point is not on the boundary");
  if (multiple_kernel) *multiple_kernel = cls.kernel_basis->cols() > 1;
  const CVector v = cls.kernel_basis->col(0);
  const CMatrix basis = orthonormal_span(component_matrix(v, l.delta, a.k));
  return {basis, compress_tuple(a, basis)};
}

namespace {

// Hermitian basis of C^{k x k} as real coordinates: k diagonal units, then
// (E_pq + E_qp) and i(E_pq - E_qp) for p < q.
std::vector<CMatrix> hermitian_basis(int k) {
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(k) * k);
  for (int p = 0; p < k; ++p) {
    CMatrix e = CMatrix::Zero(k, k);
    e(p, p) = 1.0;
    out.push_back(e);
  }
  for (int p = 0; p < k; ++p)
    for (int q = p + 1; q < k; ++q) {
      CMatrix e = CMatrix::Zero(k, k);
      e(p, q) = e(q, p) = 1.0;
      out.push_back(e);
      CMatrix f = CMatrix::Zero(k, k);
      f(p, q) = Complex(0, 1);
      f(q, p) = Complex(0, -1);
      out.push_back(f);
    }
  return out;
}

CMatrix kernel_basis_or_throw(const MonicPencil& l, const HermTuple& a, const char* who) {
  Classification cls = classify(l, a);
  if (cls.verdict != Verdict::Boundary || !cls.kernel_basis || cls.kernel_basis->cols() == 0)
    throw NotBoundary(std::string(who) + ": point is not on the boundary");
  return *cls.kernel_basis;
}

}  // namespace

bool is_euclidean_extreme(const MonicPencil& l, const HermTuple& a) {
  const CMatrix kers = kernel_basis_or_throw(l, a, "is_euclidean_extreme");
  const int k = a.k;
  const auto hbasis = hermitian_basis(k);
  const Eigen::Index rows = 2 * kers.rows() * kers.cols();
  const Eigen::Index cols = static_cast<Eigen::Index>(l.g) * k * k;
  RMatrix sys(rows, cols);
  Eigen::Index col = 0;
  for (int i = 0; i < l.g; ++i)
    for (const auto& h : hbasis) {
      const CMatrix op = kron(l.coeffs[static_cast<std::size_t>(i)], h);
      Eigen::Index row = 0;
      for (Eigen::Index j = 0; j < kers.cols(); ++j) {
        CVector img = op * kers.col(j);
        sys.block(row, col, img.size(), 1) = img.real();
        sys.block(row + img.size(), col, img.size(), 1) = img.imag();
        row += 2 * img.size();
      }
      ++col;
    }
  Eigen::JacobiSVD<RMatrix> svd(sys);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  if (smax > 0.0)
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-9 * smax) ++rank;
  return rank == cols;
}

AbsoluteExtremeResult absolute_extreme_test(const MonicPencil& l, const HermTuple& a) {
  const CMatrix kers = kernel_basis_or_throw(l, a, "absolute_extreme_test");
  const int k = a.k;
  const int delta = l.delta;

  // Row (j, beta), column (i, kappa): sum_alpha conj(v_j[alpha k + kappa]) *
  // Lambda_i[alpha, beta].
  CMatrix sys(kers.cols() * delta, static_cast<Eigen::Index>(l.g) * k);
  for (Eigen::Index j = 0; j < kers.cols(); ++j) {
    const CMatrix comps = component_matrix(kers.col(j), delta, k);  // k x delta
    for (int i = 0; i < l.g; ++i)
      for (int beta = 0; beta < delta; ++beta)
        for (int kap = 0; kap < k; ++kap) {
          Complex s = 0;
          for (int al = 0; al < delta; ++al)
            s += std::conj(comps(kap, al)) * l.coeffs[static_cast<std::size_t>(i)](al, beta);
          sys(j * delta + beta, static_cast<Eigen::Index>(i) * k + kap) = s;
        }
  }
  const CMatrix null = nullspace(sys, 1e-9);
  AbsoluteExtremeResult out;
  if (null.cols() == 0) {
    out.absolute = true;
    return out;
  }

  Dilation dil;
  const CVector av = null.col(0);
  for (int i = 0; i < l.g; ++i) {
    dil.alpha.push_back(av.segment(static_cast<Eigen::Index>(i) * k, k));
    dil.beta.push_back(0.0);
  }
  auto dilate = [&](double t) {
    std::vector<CMatrix> mats;
    mats.reserve(a.mats.size());
    for (int i = 0; i < l.g; ++i) {
      CMatrix m = CMatrix::Zero(k + 1, k + 1);
      m.topLeftCorner(k, k) = a.mats[static_cast<std::size_t>(i)];
      m.block(0, k, k, 1) = t * dil.alpha[static_cast<std::size_t>(i)];
      m.block(k, 0, 1, k) = (t * dil.alpha[static_cast<std::size_t>(i)]).adjoint();
      mats.push_back(std::move(m));
    }
    return HermTuple(std::move(mats), true);
  };
  for (double t = 1.0; t >= 1e-6; t /= 2.0) {
    HermTuple cand = dilate(t);
    if (classify(l, cand).verdict != Verdict::Outside) {
      dil.t = t;
      dil.dilated = std::move(cand);
      dil.verified = true;
      out.dilation = std::move(dil);
      return out;
    }
  }
  dil.t = 0.0;
  dil.dilated = dilate(0.0);
  out.dilation = std::move(dil);
  out.inconclusive = true;  // raw alpha reported, no verifying t >= 1e-6
  return out;
}

HermTuple MatrixCombination::value() const {
  const int g = terms.at(0).c.g;
  std::vector<CMatrix> acc(static_cast<std::size_t>(g), CMatrix::Zero(m, m));
  for (const auto& t : terms)
    for (int i = 0; i < g; ++i)
      acc[static_cast<std::size_t>(i)] += t.v.adjoint() * t.c.mats[static_cast<std::size_t>(i)] * t.v;
  return HermTuple(std::move(acc));
}

double MatrixCombination::identity_residual() const {
  CMatrix s = CMatrix::Zero(m, m);
  for (const auto& t : terms) s += t.v.adjoint() * t.v;
  return (s - CMatrix::Identity(m, m)).norm();
}

namespace {

RVector realify_term(const CombTerm& t, int m, int g) {
  // V* C V (g hermitian m x m blocks) followed by V* V, stacked Re/Im.
  RVector out(2 * (g + 1) * m * m);
  Eigen::Index off = 0;
  auto push = [&](const CMatrix& h) {
    for (Eigen::Index c = 0; c < m; ++c)
      for (Eigen::Index r = 0; r < m; ++r) {
        out(off++) = h(r, c).real();
        out(off++) = h(r, c).imag();
      }
  };
  for (int i = 0; i < g; ++i)
    push(t.v.adjoint() * t.c.mats[static_cast<std::size_t>(i)] * t.v);
  push(t.v.adjoint() * t.v);
  return out;
}

}  // namespace

MatrixCombination caratheodory_reduce(const MatrixCombination& comb) {
  MatrixCombination out = comb;
  const int m = comb.m;
  const int g = comb.terms.at(0).c.g;
  const std::size_t bound =
      g <= 3 ? static_cast<std::size_t>(4 * m * m + 1)
             : static_cast<std::size_t>((g + 1) * m * m + 1);

  while (out.terms.size() > bound) {
    const std::size_t n = out.terms.size();
    std::vector<RVector> pts;
    pts.reserve(n);
    for (const auto& t : out.terms) pts.push_back(realify_term(t, m, g));
    RMatrix diff(pts[0].size(), static_cast<Eigen::Index>(n - 1));
    for (std::size_t i = 1; i < n; ++i) diff.col(static_cast<Eigen::Index>(i - 1)) = pts[i] - pts[0];
    Eigen::JacobiSVD<RMatrix> svd(diff, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    Eigen::Index rank = 0;
    if (smax > 0.0)
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-11 * smax) ++rank;
    if (rank >= diff.cols())
      throw DependenceSolveFailure("caratheodory_reduce: no affine dependence found");
    RVector mu = svd.matrixV().col(diff.cols() - 1);

    std::vector<double> lambda(n);
    double sum = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      lambda[i] = mu(static_cast<Eigen::Index>(i - 1));
      sum += lambda[i];
    }
    lambda[0] = -sum;
    double lmax = *std::max_element(lambda.begin(), lambda.end());
    if (lmax <= 0.0) {
      for (auto& v : lambda) v = -v;
      lmax = *std::max_element(lambda.begin(), lambda.end());
    }
    if (lmax <= 1e-14) throw DependenceSolveFailure("caratheodory_reduce: degenerate dependence");
    const double alpha = 1.0 / lmax;
    const std::size_t drop = static_cast<std::size_t>(
        std::max_element(lambda.begin(), lambda.end()) - lambda.begin());

    MatrixCombination next;
    next.m = m;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == drop) continue;
      const double f = 1.0 - alpha * lambda[i];
      if (f <= 1e-14) continue;  // a second coefficient may hit zero together
      CombTerm t = out.terms[i];
      t.v *= std::sqrt(f);
      next.terms.push_back(std::move(t));
    }
    out = std::move(next);
  }
  return out;
}

Prefilter matrix_extreme_prefilter(const MonicPencil& l, const HermTuple& a) {
  if (classify(l, a).verdict != Verdict::Boundary) return Prefilter::FailsNecessary;
  if (!is_irreducible(a.mats)) return Prefilter::FailsNecessary;
  return is_euclidean_extreme(l, a) ? Prefilter::PassesNecessary : Prefilter::FailsNecessary;
}

}  // namespace fps
