#include "fps/selftest.hpp"

#include "fps/detdeg.hpp"
#include "fps/geometry.hpp"
#include "fps/structure.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

namespace fps {

std::vector<MonicPencil> standard_fixtures() {
  std::vector<MonicPencil> out;
  out.push_back(MonicPencil::diagonal({1.0, -1.0}, "interval"));

  CMatrix sx(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;
  out.push_back(MonicPencil({sx, sz}, "pauli"));

  CMatrix c1 = CMatrix::Zero(4, 4), c2 = CMatrix::Zero(4, 4);
  c1(0, 0) = 1;
  c1(1, 1) = -1;
  c2(2, 2) = 1;
  c2(3, 3) = -1;
  out.push_back(MonicPencil({c1, c2}, "cube"));

  out.push_back(gegen_pencil());
  return out;
}

namespace {

struct Harness {
  std::ostream& out;
  int failures = 0;

  void report(int idx, bool pass, const std::string& what, const std::string& detail = {}) {
    out << (pass ? "PASS" : "FAIL") << "  " << idx << "  " << what;
    if (!detail.empty()) out << "  [" << detail << "]";
    out << "\n";
    if (!pass) ++failures;
  }
};

// Random outside/boundary points along rays from the origin.
HermTuple ray_point(const MonicPencil& l, int level, double factor, Rng& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    HermTuple x = HermTuple::random(l.g, level, rng);
    auto t = boundary_scale(l, x);
    if (!t) continue;
    return x.scaled(factor * *t);
  }
  throw std::runtime_error("ray_point: no escaping ray found");
}

// --- criterion 1: the paper counterexample degrees -----------------------------

void criterion1(Harness& h, Rng rng) {
  const MonicPencil g = gegen_pencil();
  const auto t0 = std::chrono::steady_clock::now();
  const int d1g = degree_at_level(g, 1, 20, kRankRtol, VarKind::generic, rng);
  const int d1h = degree_at_level(g, 1, 20, kRankRtol, VarKind::hermitian, rng);
  const int d2g = degree_at_level(g, 2, 20, kRankRtol, VarKind::generic, rng);
  const int d2h = degree_at_level(g, 2, 20, kRankRtol, VarKind::hermitian, rng);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream det;
  det << "deg1=" << d1g << "/" << d1h << " deg2=" << d2g << "/" << d2h << " time=" << secs
      << "s";
  h.report(1, d1g == 6 && d1h == 6 && d2g == 14 && d2h == 14 && secs < 2.0,
           "counterexample degrees 6 and 14 (generic and hermitian)", det.str());
}

// --- criterion 2: WDW cross-check ----------------------------------------------

void criterion2(Harness& h, Rng rng) {
  const MonicPencil g = gegen_pencil();
  const ExprMatrix hm = pencil_to_exprmatrix(g, gegen_names());
  WdwResult res = wdw(hm, {1, 2}, rng);

  const auto& z1 = res.zero_flags.at(1);
  const auto& z2 = res.zero_flags.at(2);
  const int zeros1 = static_cast<int>(std::count(z1.begin(), z1.end(), true));
  const int zeros2 = static_cast<int>(std::count(z2.begin(), z2.end(), true));
  const int r1 = wdw_rank_per_level(res, 1, rng);
  const int r2 = wdw_rank_per_level(res, 2, rng);

  double worst = 0.0;
  for (int level : {1, 2})
    for (int i = 0; i < 5; ++i)
      worst = std::max(worst, wdw_reconstruction_residual(res, hm, level, rng));

  std::ostringstream det;
  det << "zero@1=" << zeros1 << " zero@2=" << zeros2 << " ranks=" << r1 << "," << r2
      << " recon=" << worst;
  h.report(2,
           zeros1 == 1 && zeros2 == 0 && r1 == 6 && r2 == 14 && worst <= 1e-8 &&
               res.size() == 7,
           "WDW of the 7x7 matrix: d7 vanishes at level 1 only; ranks 6 and 14",
           det.str());
}

// --- criterion 3: slope law -----------------------------------------------------

bool sandwich_ok(const DegreeTable& t, int b) {
  const int deg1 = t.degs.at(1);
  for (const auto& [k, d] : t.degs)
    if (d < deg1 * k || d > b * k) return false;
  return true;
}

void criterion3(Harness& h, Rng rng) {
  DegreeTable tg = eventual_slope(gegen_pencil(), 3, 20, rng);
  DegreeTable ti = eventual_slope(MonicPencil::diagonal({1.0, -1.0}, "interval"), 4, 20, rng);
  const bool ok_g = !tg.unstable && tg.slope_b == 7 && tg.threshold_n == 2 && sandwich_ok(tg, 7);
  const bool ok_i = !ti.unstable && ti.slope_b == 2 && ti.threshold_n == 1 && sandwich_ok(ti, 2);
  std::ostringstream det;
  det << "gegen b=" << (tg.slope_b ? *tg.slope_b : -1) << " N="
      << (tg.threshold_n ? *tg.threshold_n : -1) << "; interval b="
      << (ti.slope_b ? *ti.slope_b : -1) << " N=" << (ti.threshold_n ? *ti.threshold_n : -1);
  h.report(3, ok_g && ok_i, "eventual slope b=7,N=2 (gegen) and b=2,N=1 (interval)", det.str());
}

// --- criterion 4: multiplicativity ----------------------------------------------

void criterion4(Harness& h, Rng rng) {
  bool ok = true;
  double worst = 0.0;
  for (const auto& l : standard_fixtures())
    for (auto [k1, k2] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 2}}) {
      auto rep = verify_multiplicativity(l, k1, k2, 50, 1e-8, rng);
      worst = std::max(worst, rep.max_violation);
      if (rep.passes != rep.samples) ok = false;
    }
  std::ostringstream det;
  det << "max rel violation " << worst;
  h.report(4, ok, "determinant multiplicativity det(X+Z)=det(X)det(Z)", det.str());
}

// --- criterion 5: Gleichstellensatz property suite -------------------------------

void criterion5(Harness& h, Rng rng) {
  int good = 0;
  const int trials = 50;
  std::string first_fail;
  for (int trial = 0; trial < trials; ++trial) {
    Rng local = rng.fork(static_cast<std::uint64_t>(trial));
    const int g = 1 + static_cast<int>(local.next_u64() % 3);
    const int nclasses = 1 + static_cast<int>(local.next_u64() % 2);

    std::vector<std::vector<CMatrix>> reps;
    std::vector<int> mults;
    for (int c = 0; c < nclasses; ++c) {
      // A lone hermitian matrix of size >= 2 always reduces; irreducible
      // blocks for g = 1 are the scalars.
      const int size = g == 1 ? 1 : 1 + static_cast<int>(local.next_u64() % 3);
      std::vector<CMatrix> rep;
      for (int attempt = 0; attempt < 16; ++attempt) {
        rep = random_tuple(g, size, RandomKind::gue, local);
        if (!is_irreducible(rep)) continue;
        bool fresh = true;
        for (const auto& other : reps)
          if (static_cast<int>(other[0].rows()) == size && unitary_equivalent(other, rep))
            fresh = false;
        if (fresh) break;
      }
      reps.push_back(std::move(rep));
      mults.push_back(1 + static_cast<int>(local.next_u64() % 3));
    }

    int delta = 0;
    for (int c = 0; c < nclasses; ++c)
      delta += static_cast<int>(reps[static_cast<std::size_t>(c)][0].rows()) *
               mults[static_cast<std::size_t>(c)];
    std::vector<CMatrix> base(static_cast<std::size_t>(g), CMatrix::Zero(delta, delta));
    for (int i = 0; i < g; ++i) {
      Eigen::Index off = 0;
      for (int c = 0; c < nclasses; ++c) {
        const auto& rep = reps[static_cast<std::size_t>(c)];
        const Eigen::Index s = rep[0].rows();
        for (int copy = 0; copy < mults[static_cast<std::size_t>(c)]; ++copy) {
          base[static_cast<std::size_t>(i)].block(off, off, s, s) =
              rep[static_cast<std::size_t>(i)];
          off += s;
        }
      }
    }
    MonicPencil plain(base, "suite");
    MonicPencil scr1 = conjugate(plain, random_unitary(delta, local));
    MonicPencil scr2 = conjugate(plain, random_unitary(delta, local));

    DecompositionReport r1 = decompose(scr1, local.next_u64());
    std::vector<std::pair<int, int>> expect, got;
    for (int c = 0; c < nclasses; ++c)
      expect.push_back({static_cast<int>(reps[static_cast<std::size_t>(c)][0].rows()),
                        mults[static_cast<std::size_t>(c)]});
    for (const auto& c : r1.classes) got.push_back({c.size, c.multiplicity});
    std::sort(expect.begin(), expect.end());
    std::sort(got.begin(), got.end());

    bool ok = expect == got && r1.zero_rank == 0 && r1.max_residual <= 1e-7;
    if (ok) {
      MonicPencil m1 = minimal_pencil(scr1, local.next_u64());
      MonicPencil m2 = minimal_pencil(scr2, local.next_u64());
      ok = unitary_equivalent(m1.coeffs, m2.coeffs).has_value();
    }
    if (ok)
      ++good;
    else if (first_fail.empty())
      first_fail = "trial " + std::to_string(trial);
  }
  h.report(5, good == trials, "scrambled block sums recovered exactly (50 trials)",
           good == trials ? "" : first_fail + ", " + std::to_string(good) + "/50");
}

// --- criterion 6: projection lemma ----------------------------------------------

void criterion6(Harness& h, Rng rng) {
  bool ok = true;
  std::string detail;
  for (const auto& l : standard_fixtures()) {
    const int level = l.delta + 2;
    for (int i = 0; i < 100 && ok; ++i) {
      HermTuple y = ray_point(l, level, 2.0, rng);
      Compression c = compress_witness(l, y);
      if (c.isometry.cols() > l.delta ||
          classify(l, c.compressed).verdict != Verdict::Outside) {
        ok = false;
        detail = l.label + " outside case " + std::to_string(i);
      }
    }
    for (int i = 0; i < 100 && ok; ++i) {
      HermTuple p = ray_point(l, level, 1.0, rng);
      Compression c = minimal_boundary_projection(l, p);
      if (classify(l, c.compressed).verdict != Verdict::Boundary) {
        ok = false;
        detail = l.label + " boundary case " + std::to_string(i);
      }
    }
    if (!ok) break;
  }
  h.report(6, ok, "rank<=delta compressions preserve Outside/Boundary verdicts", detail);
}

// --- criterion 7: separation soundness -------------------------------------------

void criterion7(Harness& h, Rng rng) {
  bool ok = true;
  std::string detail;
  double worst_neg = -std::numeric_limits<double>::infinity(), worst_sound = 1.0;
  for (const auto& m : standard_fixtures()) {
    for (int i = 0; i < 20 && ok; ++i) {
      HermTuple y = ray_point(m, 2, 2.5, rng);
      SeparationCertificate cert = separate(m, y);
      worst_neg = std::max(worst_neg, cert.negativity);
      if (!(cert.negativity < -1e-6)) {
        ok = false;
        detail = m.label + ": weak certificate " + std::to_string(cert.negativity);
        break;
      }
      for (int s = 0; s < 200; ++s) {
        const int level = 1 + s % 3;
        HermTuple x = ray_point(m, level, rng.uniform(), rng);
        const double mineig = hermitian_eig(evaluate(cert.pencil, x)).values(0);
        worst_sound = std::min(worst_sound, mineig);
        if (mineig < -1e-9) {
          ok = false;
          detail = m.label + ": unsound at sample " + std::to_string(s);
          break;
        }
      }
    }
    if (!ok) break;
  }
  std::ostringstream det;
  det << "worst negativity " << worst_neg << ", worst member eig " << worst_sound;
  h.report(7, ok, "separation certificates negative at Y, nonnegative on 200 members",
           ok ? det.str() : detail);
}

// --- criterion 8: extreme point bracket ------------------------------------------

void criterion8(Harness& h, Rng rng) {
  const MonicPencil interval = MonicPencil::diagonal({1.0, -1.0}, "interval");

  CMatrix one(1, 1);
  one << 1.0;
  HermTuple corner({one});
  AbsoluteExtremeResult at_corner = absolute_extreme_test(interval, corner);

  CMatrix flat(2, 2);
  flat << 1, 0, 0, 0;
  HermTuple edge({flat});
  AbsoluteExtremeResult at_edge = absolute_extreme_test(interval, edge);

  bool ok = at_corner.absolute && !at_edge.absolute && at_edge.dilation &&
            at_edge.dilation->verified;

  // Verdicts must be invariant under joint unitary conjugation.
  for (int i = 0; i < 10 && ok; ++i) {
    CMatrix u = random_unitary(2, rng);
    CMatrix w1 = random_unitary(1, rng);
    CMatrix w2 = random_unitary(2, rng);
    MonicPencil lc = conjugate(interval, u);
    if (!absolute_extreme_test(lc, corner.conjugated(w1)).absolute) ok = false;
    AbsoluteExtremeResult e = absolute_extreme_test(lc, edge.conjugated(w2));
    if (e.absolute || !e.dilation || !e.dilation->verified) ok = false;
  }
  h.report(8, ok, "absolute-extreme bracket at the interval corner and edge");
}

// --- criterion 9: Caratheodory bound ---------------------------------------------

void criterion9(Harness& h, Rng rng) {
  bool ok = true;
  std::string detail;
  for (int m : {1, 2}) {
    const std::size_t bound = static_cast<std::size_t>(4 * m * m + 1);
    for (int trial = 0; trial < 20 && ok; ++trial) {
      Rng local = rng.fork(static_cast<std::uint64_t>(100 * m + trial));
      const int g = 1 + static_cast<int>(local.next_u64() % 3);
      const std::size_t nterms = bound + 3 + local.next_u64() % 8;

      MatrixCombination comb;
      comb.m = m;
      CMatrix s = CMatrix::Zero(m, m);
      for (std::size_t j = 0; j < nterms; ++j) {
        const int kj = 1 + static_cast<int>(local.next_u64() % 3);
        CombTerm t;
        t.c = HermTuple::random(g, kj, local);
        t.v = CMatrix(kj, m);
        for (Eigen::Index r = 0; r < kj; ++r)
          for (Eigen::Index c = 0; c < m; ++c) t.v(r, c) = local.cnormal();
        comb.terms.push_back(std::move(t));
      }
      for (const auto& t : comb.terms) s += t.v.adjoint() * t.v;
      EigResult es = hermitian_eig(s);
      CMatrix s_invsqrt =
          es.vectors *
          es.values.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal().toDenseMatrix() *
          es.vectors.adjoint();
      for (auto& t : comb.terms) t.v = t.v * s_invsqrt;

      const HermTuple target = comb.value();
      MatrixCombination red = caratheodory_reduce(comb);
      const HermTuple got = red.value();
      double value_res = 0.0;
      for (int i = 0; i < target.g; ++i)
        value_res = std::max(value_res, (got.mats[static_cast<std::size_t>(i)] -
                                         target.mats[static_cast<std::size_t>(i)])
                                            .norm());
      if (red.terms.size() > bound || value_res > 1e-9 || red.identity_residual() > 1e-9) {
        ok = false;
        detail = "m=" + std::to_string(m) + " trial=" + std::to_string(trial) + " terms=" +
                 std::to_string(red.terms.size()) + " res=" + std::to_string(value_res);
      }
    }
  }
  h.report(9, ok, "Caratheodory reduction to <= 4m^2+1 terms at residual 1e-9", detail);
}

// --- criterion 10: realness of line roots ----------------------------------------

void criterion10(Harness& h, Rng rng) {
  bool ok = true;
  std::string detail;
  double worst = 0.0;
  for (const auto& l : standard_fixtures()) {
    for (int i = 0; i < 100 && ok; ++i) {
      const int level = 1 + i % 2;
      HermTuple x = HermTuple::random(l.g, level, rng);
      std::vector<double> roots = line_roots(l, x);
      for (double r : roots) {
        RootResidual res = line_root_residual(l, x, r);
        worst = std::max(worst, res.newton);
        if (!(res.newton <= 1e-6)) {
          ok = false;
          detail = l.label + " root residual " + std::to_string(res.newton);
          break;
        }
      }
    }
    if (!ok) break;
  }
  std::ostringstream det;
  det << "worst residual " << worst;
  h.report(10, ok, "line-restriction roots real with residuals <= 1e-6",
           ok ? det.str() : detail);
}

}  // namespace

int run_selftest(std::uint64_t seed, std::ostream& out) {
  Harness h{out};
  criterion1(h, Rng(seed).fork(1));
  criterion2(h, Rng(seed).fork(2));
  criterion3(h, Rng(seed).fork(3));
  criterion4(h, Rng(seed).fork(4));
  criterion5(h, Rng(seed).fork(5));
  criterion6(h, Rng(seed).fork(6));
  criterion7(h, Rng(seed).fork(7));
  criterion8(h, Rng(seed).fork(8));
  criterion9(h, Rng(seed).fork(9));
  criterion10(h, Rng(seed).fork(10));
  out << (h.failures == 0 ? "ALL PASS" : "FAILURES: " + std::to_string(h.failures)) << "\n";
  return h.failures;
}

}  // namespace fps
