// fps — analysis toolkit for monic linear pencils and free spectrahedra.
//
// Subcommands: analyze, degree, member, separate, minimal, extreme, wdw,
// selftest. Exit codes: 0 success, 1 usage, 2 parse/file error, 3 numeric
// failure, 4 selftest failure.

#include "fps/detdeg.hpp"
#include "fps/geometry.hpp"
#include "fps/io.hpp"
#include "fps/selftest.hpp"
#include "fps/structure.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

struct RunConfig {
  std::uint64_t seed = 0xF5EE;
  double rank_rtol = 1e-9;
  double member_tol = 1e-8;
  double equiv_tol = 1e-7;
  int trials = 20;
  int levels = 3;
  std::string output_path;
};

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--seed", cfg.seed, "RNG seed (default FPS_SEED or 0xF5EE)");
  cmd->add_option("--trials", cfg.trials, "sampling trials per estimate");
  cmd->add_option("--tol", cfg.member_tol, "membership tolerance");
  cmd->add_option("-o,--output", cfg.output_path, "write a JSON report to this path");
}

int cmd_analyze(const std::string& pencil_file, const RunConfig& cfg, bool prune) {
  fps::MonicPencil l = fps::load_pencil(pencil_file);
  fps::DecompositionReport rep = fps::decompose(l, cfg.seed);
  std::cout << "pencil '" << l.label << "': delta=" << l.delta << " g=" << l.g << "\n";
  std::cout << "irreducible: " << (rep.component_count() == 1 && rep.zero_rank == 0 &&
                                           rep.classes.size() == 1 &&
                                           rep.classes[0].multiplicity == 1 &&
                                           rep.classes[0].size == l.delta
                                       ? "yes"
                                       : "no")
            << "\n";
  std::cout << "classes: " << rep.component_count();
  if (!rep.classes.empty()) {
    std::cout << " (h=";
    for (std::size_t i = 0; i < rep.classes.size(); ++i)
      std::cout << (i ? "," : "") << rep.classes[i].multiplicity;
    std::cout << ")";
  }
  std::cout << "\n";
  for (std::size_t i = 0; i < rep.classes.size(); ++i)
    std::cout << "  class " << i << ": size " << rep.classes[i].size << " multiplicity "
              << rep.classes[i].multiplicity << "\n";
  std::cout << "zero_rank: " << rep.zero_rank << "\n";
  if (rep.classes.empty())
    std::cout << "warning: zero truly linear part; minimal size: 0 classes\n";
  std::cout << "minimal size: " << rep.minimal_size() << "\n";
  std::cout << "components N: " << rep.component_count() << "\n";
  std::cout << "pz(minimal): " << rep.minimal_size() << "\n";
  std::cout << "decomposition residual: " << rep.max_residual << "\n";
  if (prune && rep.component_count() >= 2) {
    fps::Rng rng(cfg.seed ^ 0x9u);
    auto flagged = fps::prune_heuristic(rep, 512, rng);
    if (flagged.empty()) {
      std::cout << "prune heuristic: no class looked redundant (non-certified)\n";
    } else {
      std::cout << "prune heuristic (NON-CERTIFIED, 512 samples): possibly redundant classes:";
      for (int j : flagged) std::cout << " " << j;
      std::cout << "\n";
    }
  }
  if (!cfg.output_path.empty()) fps::save_json_file(cfg.output_path, fps::to_json(rep));
  return 0;
}

int cmd_degree(const std::string& pencil_file, const std::string& wdw_file,
               const RunConfig& cfg) {
  fps::MonicPencil l = fps::load_pencil(pencil_file);
  fps::Rng rng(cfg.seed);
  fps::json out;
  if (cfg.levels >= 2) {
    fps::DegreeTable t = fps::eventual_slope(l, cfg.levels, cfg.trials, rng);
    for (const auto& [k, d] : t.degs) std::cout << "deg_" << k << "=" << d << " ";
    std::cout << "\n";
    if (t.unstable)
      std::cout << "Unstable slope: " << t.note << "\n";
    else
      std::cout << "b=" << *t.slope_b << " N=" << *t.threshold_n << "\n";
    out["table"] = fps::to_json(t);
  } else {
    const int d = fps::degree_at_level(l, 1, cfg.trials, cfg.rank_rtol,
                                       fps::VarKind::generic, rng);
    std::cout << "deg_1=" << d << "\n";
    out["table"] = {{"degrees", {{"1", d}}}};
  }
  if (!wdw_file.empty()) {
    fps::ExprMatrix m = fps::load_exprmatrix(wdw_file);
    std::vector<int> probes;
    for (int k = 1; k <= cfg.levels; ++k) probes.push_back(k);
    fps::WdwResult res = fps::wdw(m, probes, rng);
    std::cout << "WDW cross-check:\n";
    bool all_agree = true;
    for (int k = 1; k <= cfg.levels; ++k) {
      const int wr = fps::wdw_rank_per_level(res, k, rng);
      const int dr = fps::degree_at_level(l, k, cfg.trials, cfg.rank_rtol,
                                          fps::VarKind::generic, rng);
      const bool agree = wr == dr;
      all_agree = all_agree && agree;
      std::cout << "  k=" << k << ": wdw=" << wr << " sampled=" << dr
                << (agree ? "  agree" : "  DISAGREE") << "\n";
    }
    out["wdw"] = fps::to_json(res);
    out["wdw_agrees"] = all_agree;
  }
  if (!cfg.output_path.empty()) fps::save_json_file(cfg.output_path, out);
  return 0;
}

int cmd_member(const std::string& pencil_file, const std::string& tuple_file,
               const RunConfig& cfg) {
  fps::MonicPencil l = fps::load_pencil(pencil_file);
  fps::HermTuple x = fps::load_tuple(tuple_file);
  fps::Classification c = fps::classify(l, x);
  std::cout << to_string(c.verdict) << " min_eig=" << c.min_eigenvalue << "\n";
  if (!cfg.output_path.empty())
    fps::save_json_file(cfg.output_path, {{"verdict", to_string(c.verdict)},
                                          {"min_eigenvalue", c.min_eigenvalue}});
  return 0;
}

int cmd_separate(const std::string& pencil_file, const std::string& tuple_file,
                 const RunConfig& cfg) {
  fps::MonicPencil m = fps::load_pencil(pencil_file);
  fps::HermTuple y = fps::load_tuple(tuple_file);
  fps::SeparationCertificate cert = fps::separate(m, y);
  std::cout << "certificate size " << cert.pencil.delta << ", negativity " << cert.negativity
            << "\n";
  // Soundness spot check on sampled members (ray to boundary, then shrink).
  fps::Rng rng(cfg.seed);
  double worst = 1.0;
  int checked = 0;
  for (int s = 0; s < 200; ++s) {
    const int level = 1 + s % 3;
    fps::HermTuple x = fps::HermTuple::random(m.g, level, rng);
    auto t = fps::boundary_scale(m, x);
    if (!t) continue;
    fps::HermTuple p = x.scaled(rng.uniform() * *t);
    worst = std::min(worst, fps::hermitian_eig(fps::evaluate(cert.pencil, p)).values(0));
    ++checked;
  }
  std::cout << "soundness: min eig over " << checked << " sampled members = " << worst << "\n";
  if (!cfg.output_path.empty()) {
    fps::json j = fps::to_json(cert);
    j["soundness_min_eig"] = worst;
    j["soundness_samples"] = checked;
    fps::save_json_file(cfg.output_path, j);
  }
  return 0;
}

int cmd_minimal(const std::string& pencil_file, const RunConfig& cfg) {
  fps::MonicPencil l = fps::load_pencil(pencil_file);
  auto m = fps::try_minimal_pencil(l, cfg.seed);
  if (!m) {
    std::cout << "pencil has zero truly linear part; minimal pencil is empty (size 0)\n";
    return 0;
  }
  std::cout << "minimal pencil size " << m->delta << " (from " << l.delta << ")\n";
  if (!cfg.output_path.empty()) fps::save_json_file(cfg.output_path, fps::to_json(*m));
  return 0;
}

int cmd_extreme(const std::string& pencil_file, const std::string& tuple_file,
                const RunConfig& cfg) {
  fps::MonicPencil l = fps::load_pencil(pencil_file);
  fps::HermTuple a = fps::load_tuple(tuple_file);
  fps::Classification c = fps::classify(l, a);
  std::cout << "classification: " << to_string(c.verdict) << " min_eig=" << c.min_eigenvalue
            << "\n";
  if (c.verdict != fps::Verdict::Boundary) {
    std::cout << "extreme-point tests need a boundary point\n";
    return 3;
  }
  const bool euclid = fps::is_euclidean_extreme(l, a);
  std::cout << "euclidean extreme: " << (euclid ? "yes" : "no") << "\n";
  fps::AbsoluteExtremeResult res = fps::absolute_extreme_test(l, a);
  if (res.absolute) {
    std::cout << "absolute extreme: yes (alpha = 0 forced)\n";
  } else if (res.inconclusive) {
    std::cout << "absolute extreme: inconclusive (dilation direction found, bisection failed)\n";
  } else {
    std::cout << "absolute extreme: no; dilation witness verified at t=" << res.dilation->t
              << "\n";
  }
  std::cout << "matrix-extreme prefilter: "
            << (fps::matrix_extreme_prefilter(l, a) == fps::Prefilter::PassesNecessary
                    ? "PassesNecessary"
                    : "FailsNecessary")
            << "\n";
  if (!cfg.output_path.empty())
    fps::save_json_file(cfg.output_path, fps::to_json(res, euclid ? "yes" : "no"));
  return 0;
}

int cmd_wdw(const std::string& exprmatrix_file, const RunConfig& cfg) {
  fps::ExprMatrix m = fps::load_exprmatrix(exprmatrix_file);
  std::vector<int> probes;
  for (int k = 1; k <= cfg.levels; ++k) probes.push_back(k);
  fps::Rng rng(cfg.seed);
  fps::WdwResult res = fps::wdw(m, probes, rng);
  std::cout << "permutation:";
  for (int p : res.permutation) std::cout << " " << p;
  std::cout << "\nD blocks:\n";
  for (std::size_t i = 0; i < res.blocks.size(); ++i) {
    const auto& b = res.blocks[i];
    std::cout << "  d" << i + 1 << (b.antidiag ? " [antidiag] " : " ") << "= "
              << fps::print(b.p, res.var_names) << "\n";
  }
  for (int k : probes) {
    std::cout << "zero at level " << k << ":";
    for (bool z : res.zero_flags.at(k)) std::cout << " " << (z ? "1" : "0");
    std::cout << "  -> rank " << fps::wdw_rank_per_level(res, k, rng) << "\n";
  }
  if (!cfg.output_path.empty()) fps::save_json_file(cfg.output_path, fps::to_json(res));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analysis toolkit for monic linear pencils and free spectrahedra"};
  app.require_subcommand(1);

  RunConfig cfg;
  if (const char* env = std::getenv("FPS_SEED")) cfg.seed = std::strtoull(env, nullptr, 0);

  std::string pencil_file, tuple_file, expr_file, wdw_file;
  bool prune = false;

  auto* analyze = app.add_subcommand("analyze", "decompose a pencil into irreducible classes");
  analyze->add_option("pencil", pencil_file, "pencil JSON file")->required();
  analyze->add_flag("--prune-heuristic", prune, "non-certified redundancy scan");
  add_common(analyze, cfg);

  auto* degree = app.add_subcommand("degree", "determinant degree table and slope");
  degree->add_option("pencil", pencil_file, "pencil JSON file")->required();
  degree->add_option("--levels", cfg.levels, "levels k = 1..K");
  degree->add_option("--wdw", wdw_file, "expression-matrix file for the WDW cross-check");
  add_common(degree, cfg);

  auto* member = app.add_subcommand("member", "classify a point against a spectrahedron");
  member->add_option("pencil", pencil_file)->required();
  member->add_option("tuple", tuple_file)->required();
  add_common(member, cfg);

  auto* separate = app.add_subcommand("separate", "Effros-Winkler separation certificate");
  separate->add_option("pencil", pencil_file)->required();
  separate->add_option("tuple", tuple_file)->required();
  add_common(separate, cfg);

  auto* minimal = app.add_subcommand("minimal", "minimal pencil with the same spectrahedron");
  minimal->add_option("pencil", pencil_file)->required();
  add_common(minimal, cfg);

  auto* extreme = app.add_subcommand("extreme", "euclidean/absolute extreme point tests");
  extreme->add_option("pencil", pencil_file)->required();
  extreme->add_option("tuple", tuple_file)->required();
  add_common(extreme, cfg);

  auto* wdwc = app.add_subcommand("wdw", "WDW* decomposition of a hermitian expression matrix");
  wdwc->add_option("exprmatrix", expr_file)->required();
  wdwc->add_option("--levels", cfg.levels, "probe levels 1..K");
  add_common(wdwc, cfg);

  auto* selftest = app.add_subcommand("selftest", "run the full acceptance suite");
  add_common(selftest, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(pencil_file, cfg, prune);
    if (degree->parsed()) return cmd_degree(pencil_file, wdw_file, cfg);
    if (member->parsed()) return cmd_member(pencil_file, tuple_file, cfg);
    if (separate->parsed()) return cmd_separate(pencil_file, tuple_file, cfg);
    if (minimal->parsed()) return cmd_minimal(pencil_file, cfg);
    if (extreme->parsed()) return cmd_extreme(pencil_file, tuple_file, cfg);
    if (wdwc->parsed()) return cmd_wdw(expr_file, cfg);
    if (selftest->parsed())
      return fps::run_selftest(cfg.seed, std::cout) == 0 ? 0 : 4;
  } catch (const fps::FileFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fps::ParseError& e) {
    std::cerr << "error: " << e.what() << " at position " << e.position << "\n";
    return 2;
  } catch (const fps::UnknownVariable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
