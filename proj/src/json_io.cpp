#include "minmax_lab/json_io.hpp"

#include <fstream>

namespace minmax_lab {

json to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& j) {
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

json to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& j) {
  const std::size_t r = j.size();
  const std::size_t c = r == 0 ? 0 : j[0].size();
  Mat m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t k = 0; k < c; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

json to_json(const LinearVIInstance& vi) {
  return {{"format", 1},
          {"type", "linearvi"},
          {"d", vi.d},
          {"D", to_json(vi.D)},
          {"c", to_json(vi.c)},
          {"rho", vi.rho},
          {"norm_certified", vi.norm_certified}};
}

LinearVIInstance linearvi_from_json(const json& j) {
  return LinearVIInstance(mat_from_json(j.at("D")), vec_from_json(j.at("c")),
                          j.at("rho").get<double>(), j.value("norm_certified", false));
}

namespace {

json objective_to_json(const QuadraticObjective& q) {
  json o;
  if (q.evaluator_tag == "gadget-jc" || q.evaluator_tag == "gadget-bilinear") {
    o["evaluator"] = q.evaluator_tag;
    o["D"] = to_json(q.gadget_D);
    o["c"] = to_json(q.gadget_c);
  } else {
    if (!q.evaluator_tag.empty()) o["evaluator"] = q.evaluator_tag;
    o["M"] = to_json(q.M);
    o["h"] = to_json(q.h);
    o["k"] = q.k;
  }
  return o;
}

QuadraticObjective objective_from_json(int d, const json& j) {
  const std::string tag = j.value("evaluator", "");
  if (tag == "gadget-jc" || tag == "gadget-bilinear") {
    const Mat D = mat_from_json(j.at("D"));
    const Vec c = vec_from_json(j.at("c"));
    Mat M = Mat::Zero(2 * d, 2 * d);
    Vec h(2 * d);
    if (tag == "gadget-jc") {
      M.topLeftCorner(d, d) = D;
      M.bottomLeftCorner(d, d) = -D;
      h << c, -c;
    } else {
      M.topRightCorner(d, d) = D;
      h << c, Vec::Zero(d);
    }
    QuadraticObjective q(d, std::move(M), std::move(h), 0.0);
    q.evaluator_tag = tag;
    q.gadget_D = D;
    q.gadget_c = c;
    return q;
  }
  QuadraticObjective q(d, mat_from_json(j.at("M")), vec_from_json(j.at("h")),
                       j.value("k", 0.0));
  q.evaluator_tag = tag;
  return q;
}

json pieces_to_json(const BilinearConstraintSet& g) {
  json set;
  set["owner"] = g.owner;
  json pieces = json::array();
  for (const auto& p : g.pieces) {
    pieces.push_back(
        {{"B", to_json(p.B)}, {"b1", to_json(p.b1)}, {"b2", to_json(p.b2)}, {"c", p.c}});
  }
  set["pieces"] = std::move(pieces);
  return set;
}

BilinearConstraintSet pieces_from_json(int d, const json& j) {
  std::vector<BilinearPiece> pieces;
  for (const auto& pj : j.at("pieces")) {
    BilinearPiece p;
    p.B = mat_from_json(pj.at("B"));
    p.b1 = vec_from_json(pj.at("b1"));
    p.b2 = vec_from_json(pj.at("b2"));
    p.c = pj.at("c").get<double>();
    pieces.push_back(std::move(p));
  }
  return BilinearConstraintSet(d, j.value("owner", 1), std::move(pieces));
}

}  // namespace

json to_json(const MinMaxInstance& inst) {
  if (!inst.has_quadratic()) {
    throw std::invalid_argument("minmax document: opaque objectives are not serializable");
  }
  json j{{"format", 1},
         {"type", "minmax"},
         {"d", inst.d()},
         {"constraint_kind", to_string(inst.kind())},
         {"objective", objective_to_json(inst.quadratic())},
         {"eps", inst.eps},
         {"delta", inst.delta},
         {"nu", inst.nu},
         {"G", inst.G()},
         {"L", inst.L()}};
  if (inst.kind() == ConstraintKind::JointlyConvex) {
    j["g"] = pieces_to_json(inst.g1());
  } else {
    j["g1"] = pieces_to_json(inst.g1());
    j["g2"] = pieces_to_json(inst.g2());
  }
  return j;
}

MinMaxInstance minmax_from_json(const json& j) {
  const int d = j.at("d").get<int>();
  auto obj = objective_from_json(d, j.at("objective"));
  const auto kind = constraint_kind_from_string(j.at("constraint_kind").get<std::string>());
  const double eps = j.at("eps").get<double>();
  const double delta = j.at("delta").get<double>();
  MinMaxInstance inst = [&] {
    switch (kind) {
      case ConstraintKind::JointlyConvex:
        return MinMaxInstance::jointly_convex(d, std::move(obj), pieces_from_json(d, j.at("g")),
                                              eps, delta);
      case ConstraintKind::Bilinear:
        return MinMaxInstance::bilinear(d, std::move(obj), pieces_from_json(d, j.at("g1")),
                                        pieces_from_json(d, j.at("g2")), eps, delta,
                                        j.value("nu", 0.0));
      default:
        return MinMaxInstance::product(d, std::move(obj), pieces_from_json(d, j.at("g1")),
                                       pieces_from_json(d, j.at("g2")), eps, delta);
    }
  }();
  if (j.contains("G") && j.contains("L")) {
    inst.set_bounds(j.at("G").get<double>(), j.at("L").get<double>());
  }
  return inst;
}

json to_json(const CorrespondenceSpec& spec) {
  json rows = json::array();
  for (const auto& r : spec.rows) {
    rows.push_back(
        {{"B", to_json(r.B)}, {"b1", to_json(r.b1)}, {"b2", to_json(r.b2)}, {"c", r.c}});
  }
  return {{"format", 1},       {"type", "correspondence"},
          {"d", spec.d},       {"rows", std::move(rows)},
          {"nu", spec.nu},     {"lipschitz", spec.lipschitz}};
}

CorrespondenceSpec correspondence_from_json(const json& j) {
  CorrespondenceSpec spec;
  spec.d = j.at("d").get<int>();
  spec.nu = j.value("nu", 0.0);
  spec.lipschitz = j.value("lipschitz", 0.0);
  for (const auto& rj : j.at("rows")) {
    CorrRow r;
    r.B = mat_from_json(rj.at("B"));
    r.b1 = vec_from_json(rj.at("b1"));
    r.b2 = vec_from_json(rj.at("b2"));
    r.c = rj.at("c").get<double>();
    spec.rows.push_back(std::move(r));
  }
  return spec;
}

json to_json(const QVIInstance& qvi) {
  json j{{"format", 1},
         {"type", "qvi"},
         {"correspondence", to_json(qvi.correspondence)},
         {"G", qvi.G},
         {"eps", qvi.eps},
         {"L", qvi.L}};
  if (qvi.affine) {
    j["operator"] = {{"D", to_json(qvi.affine->first)}, {"c", to_json(qvi.affine->second)}};
  }
  return j;
}

QVIInstance qvi_from_json(const json& j) {
  auto corr = correspondence_from_json(j.at("correspondence"));
  if (!j.contains("operator")) {
    throw std::invalid_argument("qvi document: opaque operators are not serializable");
  }
  auto qvi = QVIInstance::with_affine(std::move(corr), mat_from_json(j.at("operator").at("D")),
                                      vec_from_json(j.at("operator").at("c")),
                                      j.at("eps").get<double>());
  if (j.contains("G")) qvi.G = j.at("G").get<double>();
  if (j.contains("L")) qvi.L = j.at("L").get<double>();
  return qvi;
}

json to_json(const PolymatrixGame& game) {
  json edges = json::array();
  for (const auto& e : game.edges) {
    Mat aij = e.a_ij, aji = e.a_ji;
    edges.push_back({{"i", e.i}, {"j", e.j}, {"a_ij", to_json(aij)}, {"a_ji", to_json(aji)}});
  }
  return {{"format", 1},
          {"type", "polymatrix"},
          {"n", game.n},
          {"eps_star", game.eps_star},
          {"edges", std::move(edges)}};
}

PolymatrixGame polymatrix_from_json(const json& j) {
  PolymatrixGame game;
  game.n = j.at("n").get<int>();
  game.eps_star = j.value("eps_star", 0.088);
  for (const auto& ej : j.at("edges")) {
    EdgePayoffs e;
    e.i = ej.at("i").get<int>();
    e.j = ej.at("j").get<int>();
    e.a_ij = mat_from_json(ej.at("a_ij"));
    e.a_ji = mat_from_json(ej.at("a_ji"));
    game.edges.push_back(e);
  }
  return game;
}

json to_json(const Certificate& cert) {
  return {{"format", 1},
          {"type", "certificate"},
          {"method", cert.method},
          {"point", to_json(cert.point)},
          {"residual", cert.residual},
          {"pass", cert.pass},
          {"params", json(cert.params)},
          {"details", json(cert.details)}};
}

Certificate certificate_from_json(const json& j) {
  Certificate cert;
  cert.method = j.at("method").get<std::string>();
  cert.point = vec_from_json(j.at("point"));
  cert.residual = j.at("residual").get<double>();
  cert.pass = j.at("pass").get<bool>();
  if (j.contains("params")) {
    cert.params = j.at("params").get<std::map<std::string, double>>();
  }
  if (j.contains("details")) {
    cert.details = j.at("details").get<std::map<std::string, double>>();
  }
  return cert;
}

json to_json(const ReductionTrace& trace) {
  return {{"source", trace.source},
          {"target", trace.target},
          {"constants", json(trace.constants)},
          {"pullback", trace.pullback}};
}

ReductionTrace trace_from_json(const json& j) {
  ReductionTrace trace;
  trace.source = j.at("source").get<std::string>();
  trace.target = j.at("target").get<std::string>();
  trace.pullback = j.value("pullback", "");
  if (j.contains("constants")) {
    trace.constants = j.at("constants").get<std::map<std::string, double>>();
  }
  return trace;
}

GnepProblem gnep_from_json(const json& j) {
  GnepProblem g;
  g.n = j.at("n").get<int>();
  g.l = j.at("l").get<int>();
  g.nu = j.value("nu", 0.0);
  g.eps = j.value("eps", 1e-6);
  for (const auto& pj : j.at("players")) {
    GnepPlayerSpec p;
    p.utility.Q = mat_from_json(pj.at("utility").at("Q"));
    p.utility.r = vec_from_json(pj.at("utility").at("r"));
    p.utility.s = pj.at("utility").value("s", 0.0);
    if (pj.contains("rows")) {
      for (const auto& rj : pj.at("rows")) {
        GnepConstraintRow r;
        r.B = mat_from_json(rj.at("B"));
        r.b1 = vec_from_json(rj.at("b1"));
        r.b2 = vec_from_json(rj.at("b2"));
        r.c = rj.at("c").get<double>();
        p.gamma_rows.push_back(std::move(r));
      }
    }
    g.players.push_back(std::move(p));
  }
  return g;
}

json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json doc = json::parse(in);
  if (doc.value("format", 0) != 1) {
    throw std::invalid_argument(path + ": unsupported document format (want \"format\": 1)");
  }
  return doc;
}

void save_document(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << "\n";
}

std::string content_hash(const json& doc) {
  const std::string s = doc.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace minmax_lab
