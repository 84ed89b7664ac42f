#pragma once

#include <string>

#include <json.hpp>

#include "minmax_lab/core.hpp"
#include "minmax_lab/reductions.hpp"

namespace minmax_lab {

using nlohmann::json;

json to_json(const Vec& v);
Vec vec_from_json(const json& j);
json to_json(const Mat& m);  // row-major: array of rows
Mat mat_from_json(const json& j);

json to_json(const LinearVIInstance& vi);
LinearVIInstance linearvi_from_json(const json& j);

json to_json(const MinMaxInstance& inst);
MinMaxInstance minmax_from_json(const json& j);

json to_json(const CorrespondenceSpec& spec);
CorrespondenceSpec correspondence_from_json(const json& j);

json to_json(const QVIInstance& qvi);
QVIInstance qvi_from_json(const json& j);

json to_json(const PolymatrixGame& game);
PolymatrixGame polymatrix_from_json(const json& j);

json to_json(const Certificate& cert);
Certificate certificate_from_json(const json& j);

json to_json(const ReductionTrace& trace);
ReductionTrace trace_from_json(const json& j);

struct GnepProblem {
  int n = 0, l = 0;
  std::vector<GnepPlayerSpec> players;
  double nu = 0.0;
  double eps = 0.0;
};
GnepProblem gnep_from_json(const json& j);

/// Reads a document, checks "format": 1, returns the parsed json.
json load_document(const std::string& path);
void save_document(const std::string& path, const json& doc);

/// FNV-1a 64-bit over the canonical dump; reports embed it for
/// reproducibility bookkeeping.
std::string content_hash(const json& doc);

}  // namespace minmax_lab
