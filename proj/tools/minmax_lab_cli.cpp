#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include "minmax_lab/dynamics.hpp"
#include "minmax_lab/gallery.hpp"
#include "minmax_lab/json_io.hpp"
#include "minmax_lab/reductions.hpp"
#include "minmax_lab/sperner.hpp"
#include "minmax_lab/verify.hpp"

using namespace minmax_lab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFailedCertificate = 2;
constexpr int kExitPromiseViolation = 3;
constexpr int kExitUsage = 64;

int default_threads() {
  if (const char* env = std::getenv("MINMAX_LAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

std::pair<Vec, Vec> candidate_xy(const json& doc, int d) {
  if (doc.contains("x") && doc.contains("y")) {
    return {vec_from_json(doc.at("x")), vec_from_json(doc.at("y"))};
  }
  const Vec z = vec_from_json(doc.at("z"));
  if (z.size() != 2 * d) throw DimensionMismatch("candidate: z must have dimension 2d");
  return {z.head(d), z.tail(d)};
}

Vec candidate_z(const json& doc) {
  if (doc.contains("z")) return vec_from_json(doc.at("z"));
  const Vec x = vec_from_json(doc.at("x"));
  const Vec y = vec_from_json(doc.at("y"));
  Vec z(x.size() + y.size());
  z << x, y;
  return z;
}

json certificate_doc(const Certificate& cert, const json& instance_doc) {
  json doc = to_json(cert);
  doc["instance_hash"] = content_hash(instance_doc);
  return doc;
}

int finish_certificate(const Certificate& cert, const json& instance_doc,
                       const std::string& out) {
  const json doc = certificate_doc(cert, instance_doc);
  if (!out.empty()) save_document(out, doc);
  std::cout << (cert.pass ? "PASS" : "FAIL") << " method=" << cert.method
            << " residual=" << cert.residual << "\n";
  return cert.pass ? kExitPass : kExitFailedCertificate;
}

Graph parse_graph(int n, const std::string& edges) {
  Graph g;
  g.n = n;
  std::stringstream ss(edges);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    const auto dash = tok.find('-');
    if (dash == std::string::npos) throw std::invalid_argument("edge format: i-j");
    g.edges.emplace_back(std::stoi(tok.substr(0, dash)), std::stoi(tok.substr(dash + 1)));
  }
  return g;
}

int run_gallery(const std::string& name, const std::string& out, double eps, std::uint64_t seed,
                int n, int d, int degree, bool monotone, int k, const std::string& edges) {
  json doc;
  if (name == "eq-not-vi") {
    const auto env = gallery::eq_not_vi();
    doc = to_json(env.inst);
    doc["probe"] = {{"x", to_json(env.probe_x)}, {"y", to_json(env.probe_y)}};
    doc["claims"] = json(env.claims);
  } else if (name == "irrational-kakutani") {
    const auto kak = gallery::irrational_kakutani();
    doc = to_json(kak.spec);
    doc["claims"] = json(kak.claims);
  } else if (name == "nonexistence") {
    const auto ne = gallery::nonexistence_instance(eps);
    doc = to_json(ne.inst);
    doc["probe"] = {{"x", to_json(ne.probe_x)}, {"y", to_json(ne.probe_y)}};
    doc["claims"] = json(ne.claims);
  } else if (name == "indep-set") {
    const auto [inst, probe] = independent_set_localmin_instance(parse_graph(n, edges), k);
    doc = to_json(inst);
    const Vec ytrivial = Vec::Zero(inst.d());
    doc["probe"] = {{"x", to_json(probe)}, {"y", to_json(ytrivial)}};
  } else if (name == "random-polymatrix") {
    doc = to_json(gallery::random_polymatrix(n, degree, seed));
  } else if (name == "random-linearvi") {
    doc = to_json(gallery::random_linearvi(d, seed, monotone));
  } else {
    std::cerr << "unknown gallery name: " << name << "\n";
    return kExitUsage;
  }
  save_document(out, doc);
  std::cout << "wrote " << out << " (" << content_hash(doc) << ")\n";
  return kExitPass;
}

int run_reduce(const std::string& from, const std::string& to, const std::string& in,
               const std::string& out, double gamma, double eps_star, double eps, bool joint) {
  const json doc = load_document(in);
  json result;
  if (from == "polymatrix" && to == "linearvi") {
    auto game = polymatrix_from_json(doc);
    if (eps_star > 0) game.eps_star = eps_star;
    const auto [vi, trace] = polymatrix_to_linearvi(game);
    result = to_json(vi);
    result["trace"] = to_json(trace);
  } else if (from == "linearvi" && (to == "minmax-jc" || to == "minmax-bilinear")) {
    const auto vi = linearvi_from_json(doc);
    const auto [inst, trace] = to == "minmax-jc" ? linearvi_to_jc_minmax(vi, gamma)
                                                 : linearvi_to_bilinear_minmax(vi, gamma);
    result = to_json(inst);
    result["trace"] = to_json(trace);
  } else if (from == "minmax" && to == "qvi") {
    const auto inst = minmax_from_json(doc);
    const auto qvi = joint ? minmax_to_joint_vi(inst, eps) : minmax_to_qvi(inst, eps);
    result = to_json(qvi);
  } else if (from == "gnep" && to == "qvi") {
    const auto g = gnep_from_json(doc);
    result = to_json(gnep_to_qvi(g.n, g.l, g.players, g.nu, g.eps));
  } else {
    std::cerr << "unsupported reduction " << from << " -> " << to << "\n";
    return kExitUsage;
  }
  result["source_hash"] = content_hash(doc);
  save_document(out, result);
  std::cout << "wrote " << out << " (" << content_hash(result) << ")\n";
  return kExitPass;
}

int run_solve(const std::string& method, const std::string& in, const std::string& candidate,
              const std::string& out, double damping, int max_iters, double target, long grid,
              double eta, double gamma, int threads, double step, double nu_override) {
  const json doc = load_document(in);
  if (method == "gda" || method == "sgda") {
    const auto inst = minmax_from_json(doc);
    Vec x = Vec::Constant(inst.d(), 0.5), y = Vec::Constant(inst.d(), 0.5);
    if (!candidate.empty()) std::tie(x, y) = candidate_xy(load_document(candidate), inst.d());
    const auto kind = map_kind_from_string(method);
    const auto run = iterate(inst, x, y, kind, damping, max_iters, target);
    Certificate cert;
    cert.method = "iterate-" + method;
    Vec pt(2 * inst.d());
    pt << run.x, run.y;
    cert.point = pt;
    cert.residual = run.residual;
    cert.params = {{"damping", damping},
                   {"max_iters", static_cast<double>(max_iters)},
                   {"target", target}};
    cert.details["iterations"] = run.iterations;
    cert.details["budget_exhausted"] = run.budget_exhausted ? 1.0 : 0.0;
    cert.pass = run.residual <= target;
    return finish_certificate(cert, doc, out);
  }
  if (method == "extragradient") {
    const auto vi = linearvi_from_json(doc);
    const auto run = extragradient_vi(vi.D, vi.c, step, target > 0 ? target : vi.rho, max_iters);
    Certificate cert = verify_linearvi(vi, run.z);
    cert.method = "extragradient";
    cert.details["iterations"] = run.iterations;
    return finish_certificate(cert, doc, out);
  }
  if (method == "sperner") {
    QVIInstance qvi = doc.at("type") == "correspondence"
                          ? QVIInstance::with_affine(correspondence_from_json(doc),
                                                     Mat::Zero(doc.at("d").get<int>(),
                                                               doc.at("d").get<int>()),
                                                     Vec::Zero(doc.at("d").get<int>()),
                                                     target > 0 ? target : 1e-6)
                          : qvi_from_json(doc);
    if (nu_override >= 0) qvi.correspondence.nu = nu_override;
    if (target > 0) qvi.eps = target;
    const auto params = make_params(qvi, eta, gamma, grid);
    PanchromaticSimplex simplex;
    const Certificate cert = solve_qvi(qvi, params, threads, &simplex);
    json cdoc = certificate_doc(cert, doc);
    if (simplex.found) {
      json verts = json::array();
      for (const auto& v : simplex.lattice) verts.push_back(v);
      cdoc["simplex"] = std::move(verts);
      cdoc["colors"] = simplex.colors;
    }
    if (!out.empty()) save_document(out, cdoc);
    std::cout << (cert.pass ? "PASS" : "FAIL") << " method=sperner residual=" << cert.residual
              << "\n";
    return cert.pass ? kExitPass : kExitFailedCertificate;
  }
  std::cerr << "unknown solve method: " << method << "\n";
  return kExitUsage;
}

int run_verify(const std::string& concept_name, const std::string& in,
               const std::string& candidate, const std::string& out, double grid_step,
               double alpha, double eps, double delta, double nu) {
  const json doc = load_document(in);
  json cand;
  if (!candidate.empty()) {
    cand = load_document(candidate);
  } else if (doc.contains("probe")) {
    cand = doc.at("probe");
    cand["format"] = 1;
  } else {
    std::cerr << "no candidate given and the instance has no probe\n";
    return kExitUsage;
  }

  if (concept_name == "linearvi") {
    const auto vi = linearvi_from_json(doc);
    return finish_certificate(verify_linearvi(vi, candidate_z(cand)), doc, out);
  }
  if (concept_name == "qvi") {
    const auto qvi = qvi_from_json(doc);
    return finish_certificate(verify_qvi(qvi, candidate_z(cand)), doc, out);
  }
  if (concept_name == "kakutani") {
    const auto spec = correspondence_from_json(doc);
    return finish_certificate(verify_kakutani(spec, candidate_z(cand), nu >= 0 ? nu : spec.nu),
                              doc, out);
  }
  const auto inst = minmax_from_json(doc);
  const auto [x, y] = candidate_xy(cand, inst.d());
  if (concept_name == "local-minmax") {
    return finish_certificate(verify_local_minmax(inst, x, y, grid_step, eps, delta), doc, out);
  }
  if (concept_name == "gda") {
    return finish_certificate(verify_gda_fixed_point(inst, x, y, alpha), doc, out);
  }
  if (concept_name == "global") {
    return finish_certificate(
        verify_globalization(inst, x, y, eps > 0 ? eps : inst.eps,
                             delta > 0 ? delta : inst.delta, grid_step),
        doc, out);
  }
  std::cerr << "unknown concept: " << concept_name << "\n";
  return kExitUsage;
}

int run_pipeline(std::uint64_t seed, double gamma, double eps_star, const std::string& gadget,
                 int n, const std::string& out) {
  const auto game = gallery::random_polymatrix(n, 3, seed, eps_star);
  const json game_doc = to_json(game);
  const auto [vi, trace1] = polymatrix_to_linearvi(game);
  const json vi_doc = to_json(vi);
  const auto [inst, trace2] =
      gadget == "bilinear" ? linearvi_to_bilinear_minmax(vi, gamma) : linearvi_to_jc_minmax(vi, gamma);
  const json inst_doc = to_json(inst);

  json report{{"format", 1}, {"type", "report"}};
  report["seed"] = seed;
  report["gamma"] = gamma;
  report["gadget"] = gadget;
  report["eps_star"] = eps_star;
  report["inputs"] = {{"polymatrix", content_hash(game_doc)},
                      {"linearvi", content_hash(vi_doc)},
                      {"minmax", content_hash(inst_doc)}};
  report["traces"] = json::array({to_json(trace1), to_json(trace2)});

  const auto sol = find_gadget_solution_on_grid(inst, 200);
  if (!sol) {
    report["pass"] = false;
    report["note"] = "grid search found no (eps, delta)-solution";
    if (!out.empty()) save_document(out, report);
    std::cout << "FAIL pipeline seed=" << seed << ": no solution found\n";
    return kExitFailedCertificate;
  }
  report["solution"] = {{"x", to_json(sol->first)}, {"y", to_json(sol->second)}};

  const auto pull = minmax_solution_to_linearvi(sol->first, sol->second, vi, trace2);
  report["pullback"] = to_json(pull);
  const auto eq = linearvi_solution_to_polymatrix(pull.point, game, trace1);
  report["equilibrium"] = to_json(eq);
  const double regret = eq.residual;
  const bool pass = pull.pass && regret <= eps_star + 0.02;
  report["regret"] = regret;
  report["pass"] = pass;
  if (!out.empty()) save_document(out, report);
  std::cout << (pass ? "PASS" : "FAIL") << " pipeline seed=" << seed << " gadget=" << gadget
            << " regret=" << regret << " (eps_star=" << eps_star << " + 0.02 slack)\n";
  return pass ? kExitPass : kExitFailedCertificate;
}

void render_report(const json& doc) {
  const std::string type = doc.value("type", "?");
  if (type == "certificate") {
    std::cout << "certificate method=" << doc.value("method", "?")
              << " pass=" << (doc.value("pass", false) ? "yes" : "no")
              << " residual=" << doc.value("residual", 0.0) << "\n";
    if (doc.contains("params")) {
      for (const auto& [k, v] : doc.at("params").items()) {
        std::cout << "  param " << k << " = " << v << "\n";
      }
    }
    if (doc.contains("details")) {
      for (const auto& [k, v] : doc.at("details").items()) {
        std::cout << "  " << k << " = " << v << "\n";
      }
    }
  } else if (type == "report") {
    std::cout << "pipeline report seed=" << doc.value("seed", 0) << " gadget="
              << doc.value("gadget", "?") << " pass="
              << (doc.value("pass", false) ? "yes" : "no") << " regret="
              << doc.value("regret", 0.0) << "\n";
    if (doc.contains("inputs")) {
      for (const auto& [k, v] : doc.at("inputs").items()) {
        std::cout << "  input " << k << " hash " << v.get<std::string>() << "\n";
      }
    }
  } else {
    std::cout << type << " document, hash " << content_hash(doc) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minmax-lab: constrained min-max, VI and QVI laboratory"};
  app.require_subcommand(1);
  int threads = default_threads();
  app.add_option("--threads", threads, "worker threads for parallel scans");

  // gallery
  auto* g = app.add_subcommand("gallery", "emit a named instance document");
  std::string g_name, g_out = "instance.json", g_edges;
  double g_eps = 0.1;
  std::uint64_t g_seed = 0;
  int g_n = 3, g_d = 4, g_degree = 3, g_k = 2;
  bool g_monotone = false;
  g->add_option("--name", g_name)->required();
  g->add_option("--out", g_out);
  g->add_option("--eps", g_eps);
  g->add_option("--seed", g_seed);
  g->add_option("--n", g_n);
  g->add_option("--d", g_d);
  g->add_option("--degree", g_degree);
  g->add_option("--k", g_k);
  g->add_option("--edges", g_edges);
  g->add_flag("--monotone", g_monotone);

  // reduce
  auto* r = app.add_subcommand("reduce", "apply an instance transformation");
  std::string r_from, r_to, r_in, r_out;
  double r_gamma = 1.0, r_eps_star = -1.0, r_eps = -1.0;
  bool r_joint = false;
  r->add_option("--from", r_from)->required();
  r->add_option("--to", r_to)->required();
  r->add_option("in", r_in)->required();
  r->add_option("out", r_out)->required();
  r->add_option("--gamma", r_gamma);
  r->add_option("--eps-star", r_eps_star);
  r->add_option("--eps", r_eps);
  r->add_flag("--joint", r_joint, "use the joint-set VI for jointly convex instances");

  // solve
  auto* s = app.add_subcommand("solve", "run a solver on an instance document");
  std::string s_method, s_in, s_cand, s_out;
  double s_damping = 1.0, s_target = 1e-8, s_eta = 1.0, s_gamma = 0.01, s_step = -1.0,
         s_nu = -1.0;
  int s_iters = 100000;
  long s_grid = 64;
  s->add_option("--method", s_method)->required();
  s->add_option("--instance", s_in)->required();
  s->add_option("--candidate", s_cand);
  s->add_option("--out", s_out);
  s->add_option("--damping", s_damping);
  s->add_option("--max-iters", s_iters);
  s->add_option("--target", s_target);
  s->add_option("--grid", s_grid);
  s->add_option("--eta", s_eta);
  s->add_option("--gamma", s_gamma);
  s->add_option("--step", s_step);
  s->add_option("--nu", s_nu, "override the correspondence relaxation");

  // verify
  auto* v = app.add_subcommand("verify", "check a candidate against a solution concept");
  std::string v_concept, v_in, v_cand, v_out;
  double v_grid = 0.01, v_alpha = 1e-9, v_eps = -1.0, v_delta = -1.0, v_nu = -1.0;
  v->add_option("--concept", v_concept)->required();
  v->add_option("--instance", v_in)->required();
  v->add_option("--candidate", v_cand);
  v->add_option("--out", v_out);
  v->add_option("--grid-step", v_grid);
  v->add_option("--alpha", v_alpha);
  v->add_option("--eps", v_eps);
  v->add_option("--delta", v_delta);
  v->add_option("--nu", v_nu);

  // pipeline
  auto* p = app.add_subcommand("pipeline",
                               "polymatrix -> linearvi -> minmax -> solve -> pullback -> verify");
  std::uint64_t p_seed = 0;
  double p_gamma = 1.0, p_eps_star = 0.088;
  std::string p_gadget = "jc", p_out = "report.json";
  int p_n = 2;
  p->add_option("--seed", p_seed)->required();
  p->add_option("--gamma", p_gamma);
  p->add_option("--eps-star", p_eps_star);
  p->add_option("--gadget", p_gadget)->check(CLI::IsMember({"jc", "bilinear"}));
  p->add_option("--n", p_n);
  p->add_option("--out", p_out);

  // report
  auto* rep = app.add_subcommand("report", "render documents as text");
  std::vector<std::string> rep_files;
  rep->add_option("files", rep_files)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*g) {
      return run_gallery(g_name, g_out, g_eps, g_seed, g_n, g_d, g_degree, g_monotone, g_k,
                         g_edges);
    }
    if (*r) return run_reduce(r_from, r_to, r_in, r_out, r_gamma, r_eps_star, r_eps, r_joint);
    if (*s) {
      return run_solve(s_method, s_in, s_cand, s_out, s_damping, s_iters, s_target, s_grid,
                       s_eta, s_gamma, threads, s_step, s_nu);
    }
    if (*v) return run_verify(v_concept, v_in, v_cand, v_out, v_grid, v_alpha, v_eps, v_delta, v_nu);
    if (*p) return run_pipeline(p_seed, p_gamma, p_eps_star, p_gadget, p_n, p_out);
    if (*rep) {
      for (const auto& f : rep_files) render_report(load_document(f));
      return kExitPass;
    }
  } catch (const PromiseViolation& e) {
    std::cerr << "promise violation: " << e.what() << "\n";
    return kExitPromiseViolation;
  } catch (const json::exception& e) {
    std::cerr << "malformed document: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailedCertificate;
  }
  return kExitUsage;
}
