#include "fps/detdeg.hpp"

#include <algorithm>
#include <cmath>

namespace fps {

int degree_at_level(const MonicPencil& l, int k, int trials, double rtol, VarKind kind,
                    Rng& rng) {
  const RandomKind rk = kind == VarKind::generic ? RandomKind::ginibre : RandomKind::gue;
  int best = 0;
  int accepted = 0;
  int attempts = 0;
  const int max_attempts = 5 * trials;
  while (accepted < trials && attempts < max_attempts) {
    ++attempts;
    auto b = random_tuple(l.g, k, rk, rng);
    CMatrix m = CMatrix::Zero(l.delta * k, l.delta * k);
    for (int i = 0; i < l.g; ++i)
      m += kron(l.coeffs[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]);
    Eigen::JacobiSVD<CMatrix> svd(m);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    Eigen::Index r = 0;
    if (smax > 0.0)
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rtol * smax) ++r;
    if (r > 0 && r < sv.size()) {
      // Integer rank claims need a clear spectral cut.
      const double below = sv(r);
      if (below > 0.0 && sv(r - 1) / below < 1e3) continue;
    }
    ++accepted;
    best = std::max(best, static_cast<int>(r));
  }
  return best;
}

const std::vector<std::string>& gegen_names() {
  static const std::vector<std::string> names = {"a", "x", "y", "z"};
  return names;
}

MonicPencil gegen_pencil() {
  const int d = 7;
  CMatrix ca = CMatrix::Zero(d, d), cx = CMatrix::Zero(d, d), cy = CMatrix::Zero(d, d),
          cz = CMatrix::Zero(d, d);
  ca(0, 0) = 1.0;
  ca(6, 6) = -1.0;
  auto sym = [](CMatrix& m, int i, int j) { m(i, j) = m(j, i) = 1.0; };
  sym(cz, 0, 1);
  sym(cx, 1, 2);
  sym(cy, 2, 3);
  sym(cz, 3, 4);
  sym(cx, 4, 5);
  sym(cy, 5, 6);
  return MonicPencil({ca, cx, cy, cz}, "gegen");
}

ExprMatrix pencil_to_exprmatrix(const MonicPencil& l, std::vector<std::string> names) {
  ExprMatrix m;
  m.g = l.g;
  m.rows = m.cols = l.delta;
  m.var_names = std::move(names);
  m.entries.resize(static_cast<std::size_t>(l.delta) * l.delta);
  for (int r = 0; r < l.delta; ++r)
    for (int c = 0; c < l.delta; ++c) {
      ExprPtr e = make_scalar(0);
      for (int i = 0; i < l.g; ++i) {
        const Complex coeff = l.coeffs[static_cast<std::size_t>(i)](r, c);
        if (coeff != Complex(0)) e = make_add(e, make_mul(make_scalar(coeff), make_var(i + 1)));
      }
      m.at(r, c) = e;
    }
  return m;
}

// ---- WDW* ----------------------------------------------------------------------

int WdwResult::size() const {
  int n = 0;
  for (const auto& b : blocks) n += b.antidiag ? 2 : 1;
  return n;
}

namespace {

struct Elimination {
  std::vector<std::vector<ExprPtr>> s;
  std::vector<int> perm;
  ExprMatrix w;
  int n;
  int g;
  int top_level;
  Rng* rng;

  bool nonzero(const ExprPtr& e) const {
    if (is_zero_literal(e)) return false;
    return !is_zero_fn(e, g, top_level, *rng);
  }

  void swap_rc(int p, int q, int written_cols) {
    if (p == q) return;
    std::swap(perm[static_cast<std::size_t>(p)], perm[static_cast<std::size_t>(q)]);
    std::swap(s[static_cast<std::size_t>(p)], s[static_cast<std::size_t>(q)]);
    for (auto& row : s)
      std::swap(row[static_cast<std::size_t>(p)], row[static_cast<std::size_t>(q)]);
    for (int c = 0; c < written_cols; ++c) std::swap(w.at(p, c), w.at(q, c));
  }
};

}  // namespace

WdwResult wdw(const ExprMatrix& m, std::vector<int> probe_levels, Rng& rng) {
  if (m.rows != m.cols) throw DimensionMismatch("wdw: square matrix required");
  if (m.rows > 32) throw DimensionMismatch("wdw: matrix size capped at 32");
  if (probe_levels.empty()) probe_levels = {1, 2, 3};
  if (!is_structurally_hermitian(m))
    throw DimensionMismatch("wdw: input is not structurally hermitian");

  Elimination e;
  e.n = m.rows;
  e.g = m.g;
  e.top_level = *std::max_element(probe_levels.begin(), probe_levels.end());
  e.rng = &rng;
  e.perm.resize(static_cast<std::size_t>(e.n));
  for (int i = 0; i < e.n; ++i) e.perm[static_cast<std::size_t>(i)] = i;
  e.s.assign(static_cast<std::size_t>(e.n), {});
  for (int r = 0; r < e.n; ++r) {
    e.s[static_cast<std::size_t>(r)].resize(static_cast<std::size_t>(e.n));
    for (int c = 0; c < e.n; ++c) e.s[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = m.at(r, c);
  }
  e.w.g = m.g;
  e.w.rows = e.w.cols = e.n;
  e.w.var_names = m.var_names;
  e.w.entries.assign(static_cast<std::size_t>(e.n) * e.n, make_scalar(0));
  for (int i = 0; i < e.n; ++i) e.w.at(i, i) = make_scalar(1);

  WdwResult out;
  out.probe_levels = probe_levels;
  out.g = m.g;
  out.var_names = m.var_names;

  int pos = 0;
  while (pos < e.n) {
    // Scalar pivot: first diagonal entry that is a nonzero function at the
    // largest probe level.
    int piv = -1;
    for (int i = pos; i < e.n; ++i)
      if (e.nonzero(e.s[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)])) { piv = i; break; }
    if (piv >= 0) {
      e.swap_rc(pos, piv, pos);
      const ExprPtr a = e.s[static_cast<std::size_t>(pos)][static_cast<std::size_t>(pos)];
      const ExprPtr inv_a = make_inv(a);
      for (int r = pos + 1; r < e.n; ++r)
        e.w.at(r, pos) = make_mul(e.s[static_cast<std::size_t>(r)][static_cast<std::size_t>(pos)], inv_a);
      // Schur update c - b a^{-1} b*, built on the lower triangle and
      // mirrored by adjoint to keep structural hermiticity.
      std::vector<std::vector<ExprPtr>> next = e.s;
      for (int r = pos + 1; r < e.n; ++r)
        for (int c = pos + 1; c <= r; ++c) {
          ExprPtr upd = make_mul(
              make_mul(e.s[static_cast<std::size_t>(r)][static_cast<std::size_t>(pos)], inv_a),
              make_adj(e.s[static_cast<std::size_t>(c)][static_cast<std::size_t>(pos)]));
          ExprPtr val = make_sub(e.s[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], upd);
          next[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = val;
          next[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] = make_adj(val);
        }
      e.s = std::move(next);
      out.blocks.push_back({false, a});
      ++pos;
      continue;
    }

    // All remaining diagonal entries vanish as functions. Look for an
    // off-diagonal pivot.
    int pi = -1, pj = -1;
    for (int c = pos; c < e.n && pi < 0; ++c)
      for (int r = c + 1; r < e.n; ++r)
        if (e.nonzero(e.s[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)])) { pi = r; pj = c; break; }
    if (pi < 0) {
      // Whole tail vanishes; emit the (zero-function) diagonal entries.
      for (int r = pos; r < e.n; ++r)
        out.blocks.push_back({false, e.s[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)]});
      break;
    }
    e.swap_rc(pos, pj, pos);
    e.swap_rc(pos + 1, pi, pos);

    const ExprPtr b = e.s[static_cast<std::size_t>(pos + 1)][static_cast<std::size_t>(pos)];
    const ExprPtr inv_b = make_inv(b);
    const ExprPtr inv_bstar = make_inv(make_adj(b));
    for (int r = pos + 2; r < e.n; ++r) {
      e.w.at(r, pos) = make_mul(e.s[static_cast<std::size_t>(r)][static_cast<std::size_t>(pos + 1)], inv_bstar);
      e.w.at(r, pos + 1) = make_mul(e.s[static_cast<std::size_t>(r)][static_cast<std::size_t>(pos)], inv_b);
    }
    // G - F (b*)^{-1} E* - E b^{-1} F*
    std::vector<std::vector<ExprPtr>> next = e.s;
    for (int r = pos + 2; r < e.n; ++r)
      for (int c = pos + 2; c <= r; ++c) {
        ExprPtr t1 = make_mul(
            make_mul(e.s[static_cast<std::size_t>(r)][static_cast<std::size_t>(pos + 1)], inv_bstar),
            make_adj(e.s[static_cast<std::size_t>(c)][static_cast<std::size_t>(pos)]));
        ExprPtr t2 = make_mul(
            make_mul(e.s[static_cast<std::size_t>(r)][static_cast<std::size_t>(pos)], inv_b),
            make_adj(e.s[static_cast<std::size_t>(c)][static_cast<std::size_t>(pos + 1)]));
        ExprPtr val = make_sub(make_sub(e.s[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], t1), t2);
        next[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = val;
        next[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] = make_adj(val);
      }
    e.s = std::move(next);
    out.blocks.push_back({true, b});
    pos += 2;
  }

  out.permutation = e.perm;
  out.w = std::move(e.w);
  for (int level : probe_levels) {
    std::vector<bool> flags;
    flags.reserve(out.blocks.size());
    for (const auto& blk : out.blocks)
      flags.push_back(is_zero_literal(blk.p) || is_zero_fn(blk.p, out.g, level, rng));
    out.zero_flags[level] = std::move(flags);
  }
  return out;
}

int wdw_rank_per_level(const WdwResult& res, int k, Rng& rng) {
  std::vector<bool> flags;
  auto it = res.zero_flags.find(k);
  if (it != res.zero_flags.end()) {
    flags = it->second;
  } else {
    for (const auto& blk : res.blocks)
      flags.push_back(is_zero_literal(blk.p) || is_zero_fn(blk.p, res.g, k, rng));
  }
  int h = 0;
  for (std::size_t i = 0; i < res.blocks.size(); ++i)
    if (!flags[i]) h += res.blocks[i].antidiag ? 2 : 1;
  return h * k;
}

double wdw_reconstruction_residual(const WdwResult& res, const ExprMatrix& m, int k,
                                   Rng& rng) {
  const int n = m.rows;
  // Probe at numerically robust domain points: every inverse along the
  // elimination chain must be decently conditioned and the factor norms
  // moderate, otherwise the residual measures conditioning, not correctness.
  const EvalOptions opts{.inv_cond_floor = 3e-2};
  const double norm_bound = 30.0 * n;
  for (int attempt = 0; attempt < 256; ++attempt) {
    auto point = random_tuple(m.g, k, RandomKind::gue, rng);
    try {
      CMatrix mb = eval(m, point, opts);
      CMatrix wb = eval(res.w, point, opts);
      if (wb.norm() > norm_bound) continue;
      CMatrix db = CMatrix::Zero(n * k, n * k);
      int off = 0;
      bool norms_ok = true;
      for (const auto& blk : res.blocks) {
        CMatrix pb = eval(blk.p, point, opts);
        if (pb.norm() > norm_bound) { norms_ok = false; break; }
        if (blk.antidiag) {
          db.block(off * k, (off + 1) * k, k, k) = pb.adjoint();
          db.block((off + 1) * k, off * k, k, k) = pb;
          off += 2;
        } else {
          db.block(off * k, off * k, k, k) = pb;
          off += 1;
        }
      }
      if (!norms_ok) continue;
      CMatrix lhs(n * k, n * k);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          lhs.block(r * k, c * k, k, k) =
              mb.block(res.permutation[static_cast<std::size_t>(r)] * k,
                       res.permutation[static_cast<std::size_t>(c)] * k, k, k);
      const CMatrix rhs = wb * db * wb.adjoint();
      return (lhs - rhs).norm() / (1.0 + lhs.norm());
    } catch (const DomainError&) {
      continue;
    }
  }
  throw EmptyDomainSuspected("wdw_reconstruction_residual: no common domain point found");
}

DegreeTable eventual_slope(const MonicPencil& l, int kmax, int trials, Rng& rng) {
  if (kmax < 2) throw DimensionMismatch("eventual_slope: kmax >= 2 required");
  DegreeTable out;
  out.trials_used = trials;
  for (int k = 1; k <= kmax; ++k)
    out.degs[k] = degree_at_level(l, k, trials, kRankRtol, VarKind::generic, rng);

  const int top = out.degs[kmax];
  if (top % kmax != 0) {
    out.unstable = true;
    out.note = "deg_kmax not divisible by kmax";
    return out;
  }
  const int b = top / kmax;
  if (out.degs[kmax - 1] != b * (kmax - 1)) {
    out.unstable = true;
    out.note = "slope disagrees between the top two levels";
    return out;
  }
  const int deg1 = out.degs[1];
  for (const auto& [k, d] : out.degs)
    if (d < deg1 * k || d > b * k) {
      out.unstable = true;
      out.note = "sandwich inequality violated at level " + std::to_string(k);
      return out;
    }
  int n = kmax;
  while (n > 1 && out.degs[n - 1] == b * (n - 1)) --n;
  out.slope_b = b;
  out.threshold_n = n;
  return out;
}

MultiplicativityReport verify_multiplicativity(const MonicPencil& l, int k1, int k2,
                                               int samples, double tol, Rng& rng) {
  MultiplicativityReport rep;
  rep.samples = samples;
  for (int s = 0; s < samples; ++s) {
    HermTuple x = HermTuple::random(l.g, k1, rng);
    HermTuple z = HermTuple::random(l.g, k2, rng);
    const double dx = det_level(l, x);
    const double dz = det_level(l, z);
    const double dxz = det_level(l, x.direct_sum(z));
    const double viol = std::abs(dxz - dx * dz) / (1.0 + std::abs(dx * dz));
    rep.max_violation = std::max(rep.max_violation, viol);
    if (viol <= tol) ++rep.passes;
  }
  return rep;
}

}  // namespace fps
