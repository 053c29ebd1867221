#include "fps/structure.hpp"

#include <algorithm>
#include <cmath>

namespace fps {

namespace {

Complex frob_ip(const CMatrix& x, const CMatrix& y) { return (x.adjoint() * y).trace(); }

// Twice-orthogonalized Gram-Schmidt append; returns false when the candidate
// already lies in the span at tol 1e-9.
bool gs_append(std::vector<CMatrix>& basis, CMatrix cand) {
  const double n0 = cand.norm();
  if (n0 <= 1e-14) return false;
  cand /= n0;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) cand -= frob_ip(b, cand) * b;
  if (cand.norm() <= 1e-9) return false;
  basis.push_back(cand / cand.norm());
  return true;
}

CMatrix unvec(const CVector& v, Eigen::Index n) {
  return Eigen::Map<const CMatrix>(v.data(), n, n);
}

}  // namespace

AlgebraBasis algebra_span(const std::vector<CMatrix>& a) {
  const Eigen::Index delta = a.at(0).rows();
  AlgebraBasis out;
  out.delta = static_cast<int>(delta);
  gs_append(out.basis, CMatrix::Identity(delta, delta));

  std::vector<CMatrix> frontier;  // un-normalized words added last round
  frontier.push_back(CMatrix::Identity(delta, delta));
  const int max_rounds = 2 * static_cast<int>(delta * delta);
  for (int round = 0; round < max_rounds; ++round) {
    std::vector<CMatrix> next;
    for (const auto& w : frontier)
      for (const auto& gen : a) {
        CMatrix word = gen * w;
        if (gs_append(out.basis, word)) next.push_back(std::move(word));
        if (out.dim() == out.delta * out.delta) return out;
      }
    if (next.empty()) break;
    frontier = std::move(next);
  }
  return out;
}

std::vector<CMatrix> commutant(const std::vector<CMatrix>& a) {
  const Eigen::Index delta = a.at(0).rows();
  const Eigen::Index n2 = delta * delta;
  const CMatrix id = CMatrix::Identity(delta, delta);
  CMatrix sys(static_cast<Eigen::Index>(a.size()) * n2, n2);
  double scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sys.middleRows(static_cast<Eigen::Index>(i) * n2, n2) =
        kron(a[i].transpose(), id) - kron(id, a[i]);
    scale = std::max(scale, a[i].norm());
  }
  CMatrix null = nullspace_scaled(sys, 1e-9, scale);
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(null.cols()));
  for (Eigen::Index c = 0; c < null.cols(); ++c) out.push_back(unvec(null.col(c), delta));
  return out;
}

bool is_irreducible(const std::vector<CMatrix>& a) { return commutant(a).size() == 1; }

namespace {

// Splits the spectrum of a hermitian commutant element at its largest gap
// and checks that the two eigencolumn groups reduce the tuple.
std::optional<SplitResult> try_split_with(const std::vector<CMatrix>& a, const CMatrix& c) {
  const Eigen::Index delta = c.rows();
  EigResult eig = hermitian_eig(c);
  const double spread = eig.values(delta - 1) - eig.values(0);
  const double scale = 1.0 + eig.values.cwiseAbs().maxCoeff();
  if (spread <= 1e-8 * scale) return std::nullopt;

  Eigen::Index cut = 0;
  double best_gap = -1.0;
  for (Eigen::Index i = 0; i + 1 < delta; ++i) {
    const double gap = eig.values(i + 1) - eig.values(i);
    if (gap > best_gap) { best_gap = gap; cut = i; }
  }
  SplitResult out;
  out.irreducible = false;
  out.v1 = eig.vectors.leftCols(cut + 1);
  out.v2 = eig.vectors.rightCols(delta - cut - 1);
  for (const auto& m : a)
    if ((out.v1.adjoint() * m * out.v2).norm() > 1e-8 * (1.0 + m.norm())) return std::nullopt;
  return out;
}

}  // namespace

SplitResult split_once(const std::vector<CMatrix>& a, Rng& rng) {
  const auto comm = commutant(a);
  if (comm.size() <= 1) return {.irreducible = true};
  const Eigen::Index delta = a.at(0).rows();

  for (int attempt = 0; attempt < 8; ++attempt) {
    CMatrix c = CMatrix::Zero(delta, delta);
    for (const auto& b : comm) {
      c += rng.normal() * 0.5 * (b + b.adjoint());
      c += rng.normal() * (Complex(0, -0.5) * (b - b.adjoint()));
    }
    if (auto res = try_split_with(a, c)) return *res;
  }
  // Deterministic fallback: hermitian parts of the fixed commutant basis.
  for (const auto& b : comm) {
    if (auto res = try_split_with(a, 0.5 * (b + b.adjoint()))) return *res;
    if (auto res = try_split_with(a, Complex(0, -0.5) * (b - b.adjoint()))) return *res;
  }
  throw SplitFailure("split_once: commutant is non-trivial but no element separated");
}

namespace {

std::optional<CMatrix> intertwiner_unitary(const std::vector<CMatrix>& a,
                                           const std::vector<CMatrix>& b) {
  const Eigen::Index delta = a.at(0).rows();
  const Eigen::Index n2 = delta * delta;
  const CMatrix id = CMatrix::Identity(delta, delta);
  CMatrix sys(static_cast<Eigen::Index>(a.size()) * n2, n2);
  double scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sys.middleRows(static_cast<Eigen::Index>(i) * n2, n2) =
        kron(a[i].transpose(), id) - kron(id, b[i]);
    scale = std::max(scale, a[i].norm() + b[i].norm());
  }
  CMatrix null = nullspace_scaled(sys, 1e-9, scale);
  if (null.cols() == 0) return std::nullopt;
  CMatrix s = unvec(null.col(0), delta);
  if (numerical_rank(s) != delta) return std::nullopt;
  CMatrix u = polar_unitary(s);
  for (std::size_t i = 0; i < a.size(); ++i)
    if ((u * a[i] * u.adjoint() - b[i]).norm() > 1e-7) return std::nullopt;
  return u;
}

struct Leaf {
  CMatrix isometry;            // delta x s
  std::vector<CMatrix> tuple;  // s x s compressed coefficients
  bool zero = false;
};

void split_rec(const std::vector<CMatrix>& a, const CMatrix& w, double scale, Rng rng,
               std::uint64_t path, std::vector<Leaf>& leaves) {
  bool all_zero = true;
  for (const auto& m : a)
    if (m.norm() > 1e-10 * (1.0 + scale)) { all_zero = false; break; }
  if (all_zero) {
    leaves.push_back({w, a, true});
    return;
  }
  Rng local = rng.fork(path);
  SplitResult sr = split_once(a, local);
  if (sr.irreducible) {
    leaves.push_back({w, a, false});
    return;
  }
  auto compress = [&](const CMatrix& v) {
    std::vector<CMatrix> out;
    out.reserve(a.size());
    for (const auto& m : a) out.push_back(symmetrize(v.adjoint() * m * v));
    return out;
  };
  split_rec(compress(sr.v1), w * sr.v1, scale, rng, 2 * path, leaves);
  split_rec(compress(sr.v2), w * sr.v2, scale, rng, 2 * path + 1, leaves);
}

// Canonical class order: size ascending, then lexicographic on the sorted
// eigenvalue lists of the coefficients in order.
bool class_less(const DecompClass& x, const DecompClass& y) {
  if (x.size != y.size) return x.size < y.size;
  for (std::size_t i = 0; i < x.representative.size(); ++i) {
    EigResult ex = hermitian_eig(x.representative[i]);
    EigResult ey = hermitian_eig(y.representative[i]);
    for (Eigen::Index j = 0; j < ex.values.size(); ++j) {
      if (ex.values(j) < ey.values(j) - 1e-12) return true;
      if (ex.values(j) > ey.values(j) + 1e-12) return false;
    }
  }
  return false;
}

}  // namespace

std::optional<CMatrix> unitary_equivalent(const std::vector<CMatrix>& a,
                                          const std::vector<CMatrix>& b) {
  if (a.size() != b.size() || a.empty()) return std::nullopt;
  if (a[0].rows() != b[0].rows()) return std::nullopt;
  if (is_irreducible(a) && is_irreducible(b)) return intertwiner_unitary(a, b);

  const DecompositionReport ra = decompose(MonicPencil(a), 0xF5EE);
  const DecompositionReport rb = decompose(MonicPencil(b), 0xF5EE);
  if (ra.zero_rank != rb.zero_rank) return std::nullopt;
  if (ra.classes.size() != rb.classes.size()) return std::nullopt;

  // Match classes of equal size/multiplicity one-to-one.
  const Eigen::Index delta = a[0].rows();
  CMatrix v = CMatrix::Zero(delta, delta);
  v.topLeftCorner(ra.zero_rank, ra.zero_rank) =
      CMatrix::Identity(ra.zero_rank, ra.zero_rank);
  Eigen::Index offset_a = ra.zero_rank;
  std::vector<bool> used(rb.classes.size(), false);
  std::vector<Eigen::Index> offsets_b(rb.classes.size());
  {
    Eigen::Index off = rb.zero_rank;
    for (std::size_t j = 0; j < rb.classes.size(); ++j) {
      offsets_b[j] = off;
      off += static_cast<Eigen::Index>(rb.classes[j].size) * rb.classes[j].multiplicity;
    }
  }
  for (const auto& ca : ra.classes) {
    bool matched = false;
    for (std::size_t j = 0; j < rb.classes.size(); ++j) {
      const auto& cb = rb.classes[j];
      if (used[j] || cb.size != ca.size || cb.multiplicity != ca.multiplicity) continue;
      auto u = intertwiner_unitary(ca.representative, cb.representative);
      if (!u) continue;
      const Eigen::Index block = static_cast<Eigen::Index>(ca.size) * ca.multiplicity;
      v.block(offsets_b[j], offset_a, block, block) =
          kron(CMatrix::Identity(ca.multiplicity, ca.multiplicity), *u);
      used[j] = true;
      offset_a += block;
      matched = true;
      break;
    }
    if (!matched) return std::nullopt;
  }
  // N(B) = V N(A) V*, so U = U_B V U_A* maps A onto B.
  CMatrix u = rb.transform * v * ra.transform.adjoint();
  for (std::size_t i = 0; i < a.size(); ++i)
    if ((u * a[i] * u.adjoint() - b[i]).norm() > 1e-7) return std::nullopt;
  return u;
}

int DecompositionReport::minimal_size() const {
  int s = 0;
  for (const auto& c : classes) s += c.size;
  return s;
}

std::vector<CMatrix> DecompositionReport::normal_form() const {
  std::vector<CMatrix> out(static_cast<std::size_t>(g), CMatrix::Zero(delta, delta));
  for (std::size_t i = 0; i < out.size(); ++i) {
    Eigen::Index off = zero_rank;
    for (const auto& c : classes)
      for (int copy = 0; copy < c.multiplicity; ++copy) {
        out[i].block(off, off, c.size, c.size) = c.representative[i];
        off += c.size;
      }
  }
  return out;
}

DecompositionReport decompose(const MonicPencil& l, std::uint64_t seed) {
  double scale = 0.0;
  for (const auto& m : l.coeffs) scale = std::max(scale, m.norm());

  std::vector<Leaf> leaves;
  split_rec(l.coeffs, CMatrix::Identity(l.delta, l.delta), scale, Rng(seed), 1, leaves);

  DecompositionReport report;
  report.delta = l.delta;
  report.g = l.g;

  struct ClassAccum {
    DecompClass cls;
    std::vector<CMatrix> isometries;  // adjusted leaf isometries, one per copy
  };
  std::vector<ClassAccum> accum;
  std::vector<CMatrix> zero_isometries;
  for (const auto& leaf : leaves) {
    if (leaf.zero) {
      report.zero_rank += static_cast<int>(leaf.isometry.cols());
      zero_isometries.push_back(leaf.isometry);
      continue;
    }
    bool matched = false;
    for (auto& acc : accum) {
      if (acc.cls.size != leaf.tuple[0].rows()) continue;
      auto u = intertwiner_unitary(leaf.tuple, acc.cls.representative);
      if (!u) continue;
      acc.cls.multiplicity += 1;
      acc.isometries.push_back(leaf.isometry * u->adjoint());
      matched = true;
      break;
    }
    if (!matched) {
      ClassAccum acc;
      acc.cls.representative = leaf.tuple;
      acc.cls.size = static_cast<int>(leaf.tuple[0].rows());
      acc.cls.multiplicity = 1;
      acc.isometries.push_back(leaf.isometry);
      accum.push_back(std::move(acc));
    }
  }

  std::sort(accum.begin(), accum.end(),
            [](const ClassAccum& x, const ClassAccum& y) { return class_less(x.cls, y.cls); });

  CMatrix u(l.delta, l.delta);
  Eigen::Index col = 0;
  for (const auto& w : zero_isometries) {
    u.middleCols(col, w.cols()) = w;
    col += w.cols();
  }
  for (const auto& acc : accum) {
    report.classes.push_back(acc.cls);
    for (const auto& w : acc.isometries) {
      u.middleCols(col, w.cols()) = w;
      col += w.cols();
    }
  }
  report.transform = std::move(u);

  const auto nf = report.normal_form();
  report.max_residual = 0.0;
  for (std::size_t i = 0; i < nf.size(); ++i) {
    const double r =
        (report.transform.adjoint() * l.coeffs[i] * report.transform - nf[i]).norm();
    report.max_residual = std::max(report.max_residual, r);
  }
  return report;
}

std::optional<MonicPencil> try_minimal_pencil(const MonicPencil& l, std::uint64_t seed) {
  const DecompositionReport report = decompose(l, seed);
  if (report.classes.empty()) return std::nullopt;
  int size = report.minimal_size();
  std::vector<CMatrix> coeffs(static_cast<std::size_t>(l.g), CMatrix::Zero(size, size));
  for (int i = 0; i < l.g; ++i) {
    Eigen::Index off = 0;
    for (const auto& c : report.classes) {
      coeffs[static_cast<std::size_t>(i)].block(off, off, c.size, c.size) =
          c.representative[static_cast<std::size_t>(i)];
      off += c.size;
    }
  }
  return MonicPencil(std::move(coeffs), l.label.empty() ? "minimal" : l.label + ":minimal");
}

MonicPencil minimal_pencil(const MonicPencil& l, std::uint64_t seed) {
  auto m = try_minimal_pencil(l, seed);
  if (!m) throw SplitFailure("minimal_pencil: pencil has zero truly linear part");
  return *m;
}

int count_components(const MonicPencil& l, std::uint64_t seed) {
  return decompose(l, seed).component_count();
}

std::vector<int> prune_heuristic(const DecompositionReport& report, int samples, Rng& rng) {
  std::vector<int> flagged;
  const int n = report.component_count();
  if (n < 2) return flagged;
  for (int j = 0; j < n; ++j) {
    std::optional<MonicPencil> others;
    int level = 1;
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      MonicPencil li(report.classes[static_cast<std::size_t>(i)].representative);
      others = others ? direct_sum(*others, li) : li;
      level = std::max(level, report.classes[static_cast<std::size_t>(i)].size);
    }
    MonicPencil lj(report.classes[static_cast<std::size_t>(j)].representative);
    level = std::max(level, lj.delta);
    bool all_interior = true;
    for (int s = 0; s < samples && all_interior; ++s) {
      HermTuple x = HermTuple::random(report.g, level, rng);
      auto t = boundary_scale(*others, x);
      if (!t) continue;
      HermTuple p = x.scaled(*t);
      if (classify(lj, p).verdict != Verdict::Interior) all_interior = false;
    }
    if (all_interior) flagged.push_back(j);
  }
  return flagged;
}

}  // namespace fps
