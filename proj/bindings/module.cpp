#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "minmax_lab/dynamics.hpp"
#include "minmax_lab/gallery.hpp"
#include "minmax_lab/json_io.hpp"
#include "minmax_lab/reductions.hpp"
#include "minmax_lab/sperner.hpp"
#include "minmax_lab/verify.hpp"

namespace py = pybind11;
using namespace minmax_lab;

namespace {

py::dict trace_dict(const ReductionTrace& t) {
  py::dict d;
  d["source"] = t.source;
  d["target"] = t.target;
  d["constants"] = t.constants;
  d["pullback"] = t.pullback;
  return d;
}

}  // namespace

PYBIND11_MODULE(_minmax_lab, m) {
  m.doc() = "constrained min-max / VI / QVI laboratory core";

  py::register_exception<PromiseViolation>(m, "PromiseViolation");
  py::register_exception<InfeasibleSet>(m, "InfeasibleSet");

  py::class_<Certificate>(m, "Certificate")
      .def_readonly("method", &Certificate::method)
      .def_readonly("point", &Certificate::point)
      .def_readonly("residual", &Certificate::residual)
      .def_property_readonly("ok", [](const Certificate& c) { return c.pass; })
      .def_readonly("params", &Certificate::params)
      .def_readonly("details", &Certificate::details)
      .def("__repr__", [](const Certificate& c) {
        return "<Certificate " + c.method + (c.pass ? " PASS" : " FAIL") +
               " residual=" + std::to_string(c.residual) + ">";
      });

  py::class_<BoxPolytope>(m, "BoxPolytope")
      .def(py::init<int>())
      .def("add_row", [](BoxPolytope& p, const Vec& a, double beta) { p.add_row({a, beta}); })
      .def_property_readonly("d", &BoxPolytope::dim)
      .def("contains", &BoxPolytope::contains, py::arg("z"), py::arg("tol") = 0.0)
      .def("max_row_excess", &BoxPolytope::max_row_excess)
      .def("relaxed", &BoxPolytope::relaxed);

  m.def("project_box", &project_box);
  m.def(
      "project_polytope",
      [](const BoxPolytope& P, const Vec& p, double tol) {
        ProjectionOptions opts;
        opts.tol = tol;
        return project_polytope(P, p, opts);
      },
      py::arg("P"), py::arg("p"), py::arg("tol") = 1e-9);
  m.def("lp_min", [](const BoxPolytope& P, const Vec& cost) {
    const auto r = lp_min(P, cost);
    return py::make_tuple(r.point, r.value);
  });
  m.def("feasibility", [](const BoxPolytope& P) -> py::object {
    const auto z = feasibility(P);
    return z ? py::cast(*z) : py::none();
  });
  m.def("one_sided_hausdorff", &one_sided_hausdorff, py::arg("Pa"), py::arg("Pb"),
        py::arg("samples"), py::arg("seed") = 0);

  py::class_<LinearVIInstance>(m, "LinearVIInstance")
      .def(py::init<Mat, Vec, double, bool>(), py::arg("D"), py::arg("c"), py::arg("rho"),
           py::arg("norm_certified"))
      .def_readonly("d", &LinearVIInstance::d)
      .def_readonly("D", &LinearVIInstance::D)
      .def_readonly("c", &LinearVIInstance::c)
      .def_readonly("rho", &LinearVIInstance::rho)
      .def_readonly("norm_certified", &LinearVIInstance::norm_certified)
      .def("operator_at", &LinearVIInstance::operator_at);

  py::class_<MinMaxInstance>(m, "MinMaxInstance")
      .def_property_readonly("d", &MinMaxInstance::d)
      .def_readwrite("eps", &MinMaxInstance::eps)
      .def_readwrite("delta", &MinMaxInstance::delta)
      .def_readwrite("nu", &MinMaxInstance::nu)
      .def_property_readonly("kind",
                             [](const MinMaxInstance& i) { return to_string(i.kind()); })
      .def_property_readonly("G", &MinMaxInstance::G)
      .def_property_readonly("L", &MinMaxInstance::L)
      .def("f", &MinMaxInstance::f)
      .def("grad", &MinMaxInstance::grad)
      .def("local_regime", &MinMaxInstance::local_regime)
      .def("feasible_pair", &MinMaxInstance::feasible_pair, py::arg("x"), py::arg("y"),
           py::arg("tol") = 1e-9);

  m.def("eval_objective", &eval_objective);
  m.def("pseudo_gradient", &pseudo_gradient);

  py::class_<CorrespondenceSpec>(m, "CorrespondenceSpec")
      .def_readonly("d", &CorrespondenceSpec::d)
      .def_readwrite("nu", &CorrespondenceSpec::nu)
      .def_readonly("lipschitz", &CorrespondenceSpec::lipschitz)
      .def("max_row_value", &CorrespondenceSpec::max_row_value)
      .def("slice", &CorrespondenceSpec::slice);
  m.def("nonempty_fraction", &nonempty_fraction, py::arg("spec"), py::arg("samples"),
        py::arg("seed") = 0);

  py::class_<QVIInstance>(m, "QVIInstance")
      .def_property_readonly("d", &QVIInstance::d)
      .def_readwrite("eps", &QVIInstance::eps)
      .def_readonly("G", &QVIInstance::G)
      .def_readonly("L", &QVIInstance::L)
      .def_property_readonly("correspondence",
                             [](const QVIInstance& q) { return q.correspondence; })
      .def("set_nu", [](QVIInstance& q, double nu) { q.correspondence.nu = nu; })
      .def("F", &QVIInstance::F);

  py::class_<PolymatrixGame>(m, "PolymatrixGame")
      .def_readonly("n", &PolymatrixGame::n)
      .def_readonly("eps_star", &PolymatrixGame::eps_star)
      .def("utility", &PolymatrixGame::utility)
      .def("regret", &PolymatrixGame::regret)
      .def("worst_regret", &PolymatrixGame::worst_regret)
      .def("degree_bounded", &PolymatrixGame::degree_bounded);

  // dynamics
  m.def("gda_map", &gda_map);
  m.def("sgda_map", &sgda_map);
  m.def(
      "residual",
      [](const MinMaxInstance& inst, const Vec& x, const Vec& y, const std::string& kind) {
        return residual(inst, x, y, map_kind_from_string(kind));
      },
      py::arg("inst"), py::arg("x"), py::arg("y"), py::arg("map_kind") = "gda");
  m.def(
      "iterate",
      [](const MinMaxInstance& inst, const Vec& x0, const Vec& y0, const std::string& kind,
         double damping, int max_iters, double target) {
        const auto r = iterate(inst, x0, y0, map_kind_from_string(kind), damping, max_iters,
                               target);
        py::dict d;
        d["x"] = r.x;
        d["y"] = r.y;
        d["residual"] = r.residual;
        d["iterations"] = r.iterations;
        d["budget_exhausted"] = r.budget_exhausted;
        return d;
      },
      py::arg("inst"), py::arg("x0"), py::arg("y0"), py::arg("map_kind") = "gda",
      py::arg("damping") = 1.0, py::arg("max_iters") = 10000, py::arg("target") = 1e-9);
  m.def(
      "extragradient_vi",
      [](const Mat& D, const Vec& c, double step, double tol, int max_iters) {
        const auto r = extragradient_vi(D, c, step, tol, max_iters);
        return py::make_tuple(r.z, r.vi_residual, r.iterations, r.converged);
      },
      py::arg("D"), py::arg("c"), py::arg("step") = -1.0, py::arg("tol") = 1e-9,
      py::arg("max_iters") = 100000);
  m.def("alpha_from_eps_delta", &alpha_from_eps_delta);
  m.def("eps_delta_from_alpha", &eps_delta_from_alpha);
  m.def("qvi_alpha", &qvi_alpha);
  m.def("qvi_reverse_bound", &qvi_reverse_bound);

  // reductions
  m.def("polymatrix_to_linearvi", [](const PolymatrixGame& g) {
    auto [vi, tr] = polymatrix_to_linearvi(g);
    return py::make_tuple(vi, trace_dict(tr));
  });
  m.def("linearvi_to_jc_minmax", [](const LinearVIInstance& vi, double gamma) {
    auto [inst, tr] = linearvi_to_jc_minmax(vi, gamma);
    return py::make_tuple(inst, trace_dict(tr));
  });
  m.def("linearvi_to_bilinear_minmax", [](const LinearVIInstance& vi, double gamma) {
    auto [inst, tr] = linearvi_to_bilinear_minmax(vi, gamma);
    return py::make_tuple(inst, trace_dict(tr));
  });
  m.def("minmax_solution_to_linearvi",
        [](const Vec& x, const Vec& y, const LinearVIInstance& vi) {
          return minmax_solution_to_linearvi(x, y, vi, {});
        });
  m.def("linearvi_solution_to_polymatrix", [](const Vec& z, const PolymatrixGame& g) {
    return linearvi_solution_to_polymatrix(z, g, {});
  });
  m.def("minmax_to_qvi", &minmax_to_qvi, py::arg("inst"), py::arg("eps_override") = -1.0);
  m.def("minmax_to_joint_vi", &minmax_to_joint_vi, py::arg("inst"),
        py::arg("eps_override") = -1.0);
  m.def(
      "independent_set_localmin_instance",
      [](int n, const std::vector<std::pair<int, int>>& edges, int k) {
        auto [inst, probe] = independent_set_localmin_instance(Graph{n, edges}, k);
        return py::make_tuple(inst, probe);
      },
      py::arg("n"), py::arg("edges"), py::arg("k"));
  m.def("find_gadget_solution_on_grid",
        [](const MinMaxInstance& inst, int steps) -> py::object {
          const auto sol = find_gadget_solution_on_grid(inst, steps);
          return sol ? py::make_tuple(sol->first, sol->second) : py::object(py::none());
        });

  // sperner
  py::class_<SpernerSolverParams>(m, "SpernerSolverParams")
      .def_readwrite("eta", &SpernerSolverParams::eta)
      .def_readwrite("gamma", &SpernerSolverParams::gamma)
      .def_readwrite("mu", &SpernerSolverParams::mu)
      .def_readwrite("grid_cells", &SpernerSolverParams::grid_cells)
      .def("ell", &SpernerSolverParams::ell)
      .def("kappa", &SpernerSolverParams::kappa)
      .def("omega", &SpernerSolverParams::omega);
  m.def("make_params", &make_params);
  m.def("reference_params", [](int d, double eps, double nu, double L) {
    const auto r = reference_params(d, eps, nu, L);
    return py::make_tuple(r.params, r.eta_bound, r.tractable);
  });
  m.def("proximal_selector", &proximal_selector);
  m.def(
      "solve_qvi",
      [](const QVIInstance& qvi, const SpernerSolverParams& params, int threads) {
        return solve_qvi(qvi, params, threads);
      },
      py::arg("qvi"), py::arg("params"), py::arg("threads") = 1);
  m.def("find_panchromatic",
        [](const QVIInstance& qvi, const SpernerSolverParams& params, int threads) {
          const auto r = find_panchromatic(qvi, params, threads);
          py::dict d;
          d["found"] = r.found;
          d["lattice"] = r.lattice;
          d["colors"] = r.colors;
          d["points"] = r.points;
          return d;
        },
        py::arg("qvi"), py::arg("params"), py::arg("threads") = 1);

  // verify
  m.def("verify_linearvi", &verify_linearvi);
  m.def("verify_qvi", &verify_qvi);
  m.def("verify_kakutani", &verify_kakutani);
  m.def("verify_local_minmax", &verify_local_minmax, py::arg("inst"), py::arg("x"), py::arg("y"),
        py::arg("grid_step"), py::arg("eps") = -1.0, py::arg("delta") = -1.0);
  m.def("verify_gda_fixed_point", &verify_gda_fixed_point);
  m.def("verify_globalization", &verify_globalization, py::arg("inst"), py::arg("x"),
        py::arg("y"), py::arg("eps"), py::arg("delta"), py::arg("grid_step") = 0.01);

  // gallery
  auto gal = m.def_submodule("gallery");
  gal.def("eq_not_vi", [] {
    const auto e = gallery::eq_not_vi();
    return py::make_tuple(e.inst, e.probe_x, e.probe_y, e.claims);
  });
  gal.def("irrational_kakutani", [] {
    const auto k = gallery::irrational_kakutani();
    return py::make_tuple(k.spec, k.claims);
  });
  gal.def(
      "nonexistence_instance",
      [](double eps) {
        const auto n = gallery::nonexistence_instance(eps);
        return py::make_tuple(n.inst, n.probe_x, n.probe_y, n.claims);
      },
      py::arg("eps") = 0.1);
  gal.def("random_polymatrix", &gallery::random_polymatrix, py::arg("n"), py::arg("max_degree"),
          py::arg("seed"), py::arg("eps_star") = 0.088);
  gal.def("random_linearvi", &gallery::random_linearvi, py::arg("d"), py::arg("seed"),
          py::arg("monotone") = false);

  // json document round trips
  m.def("dumps", [](const MinMaxInstance& i) { return to_json(i).dump(2); });
  m.def("dumps", [](const LinearVIInstance& i) { return to_json(i).dump(2); });
  m.def("dumps", [](const QVIInstance& i) { return to_json(i).dump(2); });
  m.def("dumps", [](const CorrespondenceSpec& i) { return to_json(i).dump(2); });
  m.def("dumps", [](const PolymatrixGame& i) { return to_json(i).dump(2); });
  m.def("dumps", [](const Certificate& i) { return to_json(i).dump(2); });
  m.def("loads_minmax", [](const std::string& s) { return minmax_from_json(json::parse(s)); });
  m.def("loads_linearvi",
        [](const std::string& s) { return linearvi_from_json(json::parse(s)); });
  m.def("loads_qvi", [](const std::string& s) { return qvi_from_json(json::parse(s)); });
  m.def("loads_correspondence",
        [](const std::string& s) { return correspondence_from_json(json::parse(s)); });
  m.def("loads_polymatrix",
        [](const std::string& s) { return polymatrix_from_json(json::parse(s)); });
}
