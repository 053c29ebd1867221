#pragma once

// JSON file formats: pencils, tuples, expression matrices, and report
// serialization. Complex entries are [re, im] pairs. Loading a pencil or
// tuple whose file violates hermiticity beyond htol is an error, not a
// silent symmetrization.

#include "fps/detdeg.hpp"
#include "fps/geometry.hpp"
#include "fps/pencil.hpp"
#include "fps/structure.hpp"

#include <json.hpp>

#include <string>

namespace fps {

struct FileFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using json = nlohmann::json;

json to_json(const CMatrix& m);
CMatrix cmatrix_from_json(const json& j);

/// {"label": str, "g": int, "delta": int, "coeffs": [g][delta][delta] pairs}
json to_json(const MonicPencil& l);
MonicPencil pencil_from_json(const json& j);

/// {"g": int, "k": int, "matrices": [g][k][k] pairs}
json to_json(const HermTuple& t);
HermTuple tuple_from_json(const json& j);

/// {"g": int, "rows": int, "cols": int, "entries": [[str]], "vars": [str]?}
json to_json(const ExprMatrix& m);
ExprMatrix exprmatrix_from_json(const json& j);

json to_json(const DecompositionReport& r);
json to_json(const DegreeTable& t);
json to_json(const SeparationCertificate& c);
json to_json(const WdwResult& r);
json to_json(const AbsoluteExtremeResult& r, const std::string& euclidean_verdict);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

MonicPencil load_pencil(const std::string& path);
HermTuple load_tuple(const std::string& path);
ExprMatrix load_exprmatrix(const std::string& path);

}  // namespace fps
