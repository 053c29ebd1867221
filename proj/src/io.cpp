#include "fps/io.hpp"

#include <fstream>

namespace fps {

json to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix cmatrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw FileFormatError("matrix: expected an array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols)
      throw FileFormatError("matrix: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = j[r][c];
      if (!e.is_array() || e.size() != 2)
        throw FileFormatError("matrix entry: expected [re, im]");
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json to_json(const MonicPencil& l) {
  json coeffs = json::array();
  for (const auto& a : l.coeffs) coeffs.push_back(to_json(a));
  return {{"label", l.label}, {"g", l.g}, {"delta", l.delta}, {"coeffs", std::move(coeffs)}};
}

MonicPencil pencil_from_json(const json& j) {
  const int g = j.at("g").get<int>();
  const int delta = j.at("delta").get<int>();
  const auto& coeffs = j.at("coeffs");
  if (static_cast<int>(coeffs.size()) != g)
    throw FileFormatError("pencil: coeffs count differs from g");
  std::vector<CMatrix> mats;
  for (const auto& c : coeffs) {
    CMatrix m = cmatrix_from_json(c);
    if (m.rows() != delta || m.cols() != delta)
      throw FileFormatError("pencil: coefficient size differs from delta");
    if (!is_hermitian(m))
      throw FileFormatError("pencil: coefficient violates hermiticity beyond htol");
    mats.push_back(std::move(m));
  }
  MonicPencil l(std::move(mats), j.value("label", std::string{}));
  return l;
}

json to_json(const HermTuple& t) {
  json mats = json::array();
  for (const auto& m : t.mats) mats.push_back(to_json(m));
  return {{"g", t.g}, {"k", t.k}, {"matrices", std::move(mats)}};
}

HermTuple tuple_from_json(const json& j) {
  const int g = j.at("g").get<int>();
  const int k = j.at("k").get<int>();
  const auto& arr = j.at("matrices");
  if (static_cast<int>(arr.size()) != g)
    throw FileFormatError("tuple: matrices count differs from g");
  std::vector<CMatrix> mats;
  for (const auto& m : arr) {
    CMatrix x = cmatrix_from_json(m);
    if (x.rows() != k || x.cols() != k) throw FileFormatError("tuple: matrix size differs from k");
    if (!is_hermitian(x)) throw FileFormatError("tuple: matrix violates hermiticity beyond htol");
    mats.push_back(std::move(x));
  }
  return HermTuple(std::move(mats));
}

json to_json(const ExprMatrix& m) {
  json entries = json::array();
  for (int r = 0; r < m.rows; ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols; ++c) row.push_back(print(m.at(r, c), m.var_names));
    entries.push_back(std::move(row));
  }
  json out = {{"g", m.g}, {"rows", m.rows}, {"cols", m.cols}, {"entries", std::move(entries)}};
  if (!m.var_names.empty()) out["vars"] = m.var_names;
  return out;
}

ExprMatrix exprmatrix_from_json(const json& j) {
  ExprMatrix m;
  m.g = j.at("g").get<int>();
  m.rows = j.at("rows").get<int>();
  m.cols = j.at("cols").get<int>();
  if (j.contains("vars")) {
    m.var_names = j.at("vars").get<std::vector<std::string>>();
    if (static_cast<int>(m.var_names.size()) != m.g)
      throw FileFormatError("exprmatrix: vars header size differs from g");
  }
  const auto& entries = j.at("entries");
  if (static_cast<int>(entries.size()) != m.rows)
    throw FileFormatError("exprmatrix: row count mismatch");
  m.entries.resize(static_cast<std::size_t>(m.rows) * m.cols);
  for (int r = 0; r < m.rows; ++r) {
    if (static_cast<int>(entries[r].size()) != m.cols)
      throw FileFormatError("exprmatrix: column count mismatch");
    for (int c = 0; c < m.cols; ++c)
      m.at(r, c) = parse(entries[r][c].get<std::string>(), m.g, m.var_names);
  }
  return m;
}

json to_json(const DecompositionReport& r) {
  json classes = json::array();
  for (const auto& c : r.classes) {
    json rep = json::array();
    for (const auto& m : c.representative) rep.push_back(to_json(m));
    classes.push_back(
        {{"size", c.size}, {"multiplicity", c.multiplicity}, {"representative", std::move(rep)}});
  }
  return {{"delta", r.delta},
          {"g", r.g},
          {"classes", std::move(classes)},
          {"zero_rank", r.zero_rank},
          {"transform", to_json(r.transform)},
          {"max_residual", r.max_residual},
          {"minimal_size", r.minimal_size()},
          {"component_count", r.component_count()}};
}

json to_json(const DegreeTable& t) {
  json degs = json::object();
  for (const auto& [k, d] : t.degs) degs[std::to_string(k)] = d;
  json out = {{"degrees", std::move(degs)}, {"unstable", t.unstable}, {"trials", t.trials_used}};
  if (t.slope_b) out["b"] = *t.slope_b;
  if (t.threshold_n) out["N"] = *t.threshold_n;
  if (!t.note.empty()) out["note"] = t.note;
  return out;
}

json to_json(const SeparationCertificate& c) {
  json witness = json::array();
  for (Eigen::Index i = 0; i < c.witness.size(); ++i)
    witness.push_back({c.witness(i).real(), c.witness(i).imag()});
  return {{"pencil", to_json(c.pencil)},
          {"witness", std::move(witness)},
          {"negativity", c.negativity}};
}

json to_json(const WdwResult& r) {
  json blocks = json::array();
  for (const auto& b : r.blocks)
    blocks.push_back({{"kind", b.antidiag ? "antidiag2" : "scalar1"},
                      {"p", print(b.p, r.var_names)}});
  json flags = json::object();
  for (const auto& [level, f] : r.zero_flags) flags[std::to_string(level)] = f;
  return {{"permutation", r.permutation},
          {"W", to_json(r.w)},
          {"D", std::move(blocks)},
          {"zero_flags", std::move(flags)},
          {"probe_levels", r.probe_levels}};
}

json to_json(const AbsoluteExtremeResult& r, const std::string& euclidean_verdict) {
  json out = {{"euclidean_extreme", euclidean_verdict},
              {"absolute_extreme", r.absolute},
              {"inconclusive", r.inconclusive}};
  if (r.dilation) {
    json alpha = json::array();
    for (const auto& a : r.dilation->alpha) {
      json col = json::array();
      for (Eigen::Index i = 0; i < a.size(); ++i) col.push_back({a(i).real(), a(i).imag()});
      alpha.push_back(std::move(col));
    }
    out["dilation"] = {{"alpha", std::move(alpha)},
                       {"beta", r.dilation->beta},
                       {"t", r.dilation->t},
                       {"verified", r.dilation->verified},
                       {"dilated", to_json(r.dilation->dilated)}};
  }
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw FileFormatError("JSON parse error in " + path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FileFormatError("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

MonicPencil load_pencil(const std::string& path) { return pencil_from_json(load_json_file(path)); }
HermTuple load_tuple(const std::string& path) { return tuple_from_json(load_json_file(path)); }
ExprMatrix load_exprmatrix(const std::string& path) {
  return exprmatrix_from_json(load_json_file(path));
}

}  // namespace fps
