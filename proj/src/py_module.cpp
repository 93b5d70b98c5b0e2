#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flowlab/checks.hpp"
#include "flowlab/config.hpp"
#include "flowlab/conjugate_heat.hpp"
#include "flowlab/entropy.hpp"
#include "flowlab/errors.hpp"
#include "flowlab/flows.hpp"
#include "flowlab/fourier.hpp"
#include "flowlab/geometry.hpp"
#include "flowlab/grid.hpp"
#include "flowlab/report.hpp"
#include "flowlab/runner.hpp"
#include "flowlab/spectrum.hpp"
#include "flowlab/sphere.hpp"

namespace py = pybind11;
using namespace flowlab;

PYBIND11_MODULE(flowlab, m) {
  m.doc() = "numerical laboratory for entropy and eigenvalue evolution on "
            "deforming metrics";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<GridSpec>(m, "GridSpec")
      .def_readonly("n", &GridSpec::n)
      .def_readonly("len_x", &GridSpec::len_x)
      .def_readonly("len_y", &GridSpec::len_y)
      .def("dx", &GridSpec::dx);
  m.def("make_grid", &make_grid, py::arg("n"), py::arg("len_x"), py::arg("len_y"));
  m.def("grid_points", &grid_points);

  py::class_<ScalarField>(m, "ScalarField")
      .def(py::init([](const GridSpec& g, std::vector<double> v) {
             if (v.size() != static_cast<size_t>(g.n))
               throw ConfigError("field length does not match grid");
             return ScalarField{g, std::move(v)};
           }),
           py::arg("grid"), py::arg("values"))
      .def_readonly("grid", &ScalarField::grid)
      .def_readonly("values", &ScalarField::v);

  py::class_<VectorField>(m, "VectorField")
      .def(py::init([](const GridSpec& g, std::vector<double> x, std::vector<double> y) {
             if (x.size() != static_cast<size_t>(g.n) || y.size() != x.size())
               throw ConfigError("component length does not match grid");
             return VectorField{g, std::move(x), std::move(y)};
           }),
           py::arg("grid"), py::arg("x"), py::arg("y"))
      .def_readonly("x", &VectorField::x)
      .def_readonly("y", &VectorField::y);

  py::class_<TensorField>(m, "TensorField")
      .def_readonly("xx", &TensorField::xx)
      .def_readonly("yy", &TensorField::yy);

  py::class_<Metric>(m, "Metric")
      .def_readonly("grid", &Metric::grid)
      .def_readonly("a", &Metric::a)
      .def_readonly("b", &Metric::b);
  m.def("make_metric", &make_metric);
  m.def("flat_metric", &flat_metric);
  m.def("conformal_metric", &conformal_metric);

  py::class_<FourierSeries>(m, "FourierSeries")
      .def(py::init([](double base, const std::vector<std::tuple<int, double, double>>& modes) {
             FourierSeries f;
             f.base = base;
             for (const auto& [mm, ac, as] : modes) f.modes.push_back({mm, ac, as});
             return f;
           }),
           py::arg("base") = 0.0,
           py::arg("modes") = std::vector<std::tuple<int, double, double>>{})
      .def("eval", &FourierSeries::eval)
      .def("deriv", &FourierSeries::deriv)
      .def_static("random", &FourierSeries::random, py::arg("seed"), py::arg("max_mode"),
                  py::arg("amplitude"));
  m.def("sample", &sample, py::arg("grid"), py::arg("series"));

  m.def("gauss_curvature", &gauss_curvature);
  m.def("scalar_curvature", &scalar_curvature);
  m.def("ricci_tensor", &ricci_tensor);
  m.def("laplace_beltrami", &laplace_beltrami);
  m.def("grad_norm_sq", &grad_norm_sq);
  m.def("inner_grad", &inner_grad);
  m.def("gradient", &gradient);
  m.def("hessian", &hessian);
  m.def("divergence", &divergence);
  m.def("tensor_norm_sq", &tensor_norm_sq);
  m.def("metric_trace", &metric_trace);
  m.def("integrate", &integrate);
  m.def("volume", &volume);

  py::class_<FlowKind>(m, "FlowKind")
      .def_static("static_metric", &FlowKind::static_metric)
      .def_static("ricci", &FlowKind::ricci)
      .def_static("list_extended", &FlowKind::list_extended, py::arg("a_n"))
      .def_static("ricci_harmonic", &FlowKind::ricci_harmonic, py::arg("a0"),
                  py::arg("decay"))
      .def("has_aux", &FlowKind::has_aux)
      .def("coupling_at", &FlowKind::coupling_at)
      .def("name", &FlowKind::name);

  py::class_<FlowState>(m, "FlowState")
      .def_readonly("kind", &FlowState::kind)
      .def_readonly("time", &FlowState::time)
      .def_readonly("metric", &FlowState::metric)
      .def_readonly("aux", &FlowState::aux);
  m.def("make_flow_state",
        py::overload_cast<FlowKind, double, Metric>(&make_flow_state), py::arg("kind"),
        py::arg("time"), py::arg("metric"));
  m.def("make_flow_state",
        py::overload_cast<FlowKind, double, Metric, ScalarField>(&make_flow_state),
        py::arg("kind"), py::arg("time"), py::arg("metric"), py::arg("aux"));
  m.def("alpha", &alpha);
  m.def("trace_a", &trace_a);

  py::class_<FlowTrajectory>(m, "FlowTrajectory")
      .def_readonly("kind", &FlowTrajectory::kind)
      .def_readonly("dt", &FlowTrajectory::dt)
      .def("full_count", &FlowTrajectory::full_count)
      .def("full", &FlowTrajectory::full, py::return_value_policy::reference_internal)
      .def("t_begin", &FlowTrajectory::t_begin)
      .def("t_end", &FlowTrajectory::t_end);
  m.def("stable_dt", &stable_dt, py::arg("state"), py::arg("t_end"),
        py::arg("cfl") = 0.2);
  m.def("evolve", &evolve, py::arg("initial"), py::arg("dt"), py::arg("t_end"));
  m.def("b_minus_delta_a_closed", &b_minus_delta_a_closed);
  m.def("b_minus_delta_a_numeric", &b_minus_delta_a_numeric);
  m.def("theta_general", &theta_general);
  m.def("theta_closed", &theta_closed);

  py::class_<HeatSolution>(m, "HeatSolution")
      .def_readonly("dt", &HeatSolution::dt)
      .def_readonly("mass", &HeatSolution::mass)
      .def_readonly("times", &HeatSolution::times)
      .def_readonly("u", &HeatSolution::u);
  m.def("solve_backward", &solve_backward, py::arg("trajectory"), py::arg("terminal"),
        py::arg("normalize") = true);

  m.def("entropy_E", &entropy_E);
  m.def("entropy_E1", &entropy_E1);
  m.def("entropy_E2", &entropy_E2);
  m.def("f_functional", &f_functional);
  m.def("f_derivative_formula", &f_derivative_formula);
  m.def("au_identity", &au_identity);
  m.def("w_entropy", &w_entropy);
  m.def("w_derivative_formula", &w_derivative_formula);
  m.def("w_plus_entropy", &w_plus_entropy);
  m.def("w_plus_derivative_formula", &w_plus_derivative_formula);

  py::class_<SeriesSpec>(m, "SeriesSpec")
      .def(py::init<>())
      .def_readwrite("k_list", &SeriesSpec::k_list)
      .def_readwrite("T_ref", &SeriesSpec::T_ref)
      .def_readwrite("T_plus_ref", &SeriesSpec::T_plus_ref)
      .def_readwrite("stride", &SeriesSpec::stride)
      .def_readwrite("bmda_numeric", &SeriesSpec::bmda_numeric);
  py::class_<EntropySeries>(m, "EntropySeries")
      .def_readonly("full_index", &EntropySeries::full_index)
      .def_readonly("t", &EntropySeries::t)
      .def_readonly("vol", &EntropySeries::vol)
      .def_readonly("E", &EntropySeries::E)
      .def_readonly("E1", &EntropySeries::E1)
      .def_readonly("E2", &EntropySeries::E2)
      .def_readonly("k_list", &EntropySeries::k_list)
      .def_readonly("F", &EntropySeries::F)
      .def_readonly("dF", &EntropySeries::dF)
      .def_readonly("W", &EntropySeries::W)
      .def_readonly("dW", &EntropySeries::dW)
      .def_readonly("Wp", &EntropySeries::Wp)
      .def_readonly("dWp", &EntropySeries::dWp)
      .def_readonly("min_theta", &EntropySeries::min_theta)
      .def_readonly("min_bmda", &EntropySeries::min_bmda);
  m.def("build_series", &build_series, py::arg("trajectory"), py::arg("heat"),
        py::arg("spec"));

  py::class_<EigenOptions>(m, "EigenOptions")
      .def(py::init<>())
      .def_readwrite("tol", &EigenOptions::tol)
      .def_readwrite("max_iter", &EigenOptions::max_iter)
      .def_readwrite("seed", &EigenOptions::seed)
      .def_readwrite("start", &EigenOptions::start);
  py::class_<EigenResult>(m, "EigenResult")
      .def_readonly("lam", &EigenResult::lam)
      .def_readonly("f", &EigenResult::f)
      .def_readonly("iterations", &EigenResult::iterations)
      .def_readonly("residual", &EigenResult::residual);
  m.def("lowest_eigenpair", &lowest_eigenpair, py::arg("metric"), py::arg("A"),
        py::arg("c"), py::arg("options") = EigenOptions{});
  m.def("rayleigh_quotient", &rayleigh_quotient);
  m.def("lowest_eigenvalue_2d", &lowest_eigenvalue_2d, py::arg("metric"), py::arg("A"),
        py::arg("c"), py::arg("n_y"), py::arg("tol") = 1e-9);
  m.def("lambda_prime_formula", &lambda_prime_formula);
  m.def("lambda_prime_flow_form", &lambda_prime_flow_form);
  m.def("lemma_ibp_identity", &lemma_ibp_identity);
  m.def("normalized_lambda", &normalized_lambda, py::arg("metric"), py::arg("lam"),
        py::arg("dim") = 2);
  py::class_<LambdaBarBound>(m, "LambdaBarBound")
      .def_readonly("lower_bound", &LambdaBarBound::lower_bound)
      .def_readonly("tensor_term", &LambdaBarBound::tensor_term)
      .def_readonly("holder_gap", &LambdaBarBound::holder_gap);
  m.def("lambda_bar_lower_bound", &lambda_bar_lower_bound);
  py::class_<SpectrumSeries>(m, "SpectrumSeries")
      .def_readonly("full_index", &SpectrumSeries::full_index)
      .def_readonly("t", &SpectrumSeries::t)
      .def_readonly("c_list", &SpectrumSeries::c_list)
      .def_readonly("lam", &SpectrumSeries::lambda)
      .def_readonly("lambda_prime", &SpectrumSeries::lambda_prime)
      .def_readonly("lambda_bar", &SpectrumSeries::lambda_bar);
  m.def("build_spectrum_series", &build_spectrum_series, py::arg("trajectory"),
        py::arg("c_list"), py::arg("stride"));

  py::class_<SphereState>(m, "SphereState")
      .def_readonly("dim", &SphereState::dim)
      .def_readonly("scale", &SphereState::scale)
      .def("volume", &SphereState::volume)
      .def("scalar_curvature", &SphereState::scalar_curvature);
  m.def("unit_sphere_volume", &unit_sphere_volume);
  m.def("sphere_blowup_time", &sphere_blowup_time);
  m.def("sphere_flow", &sphere_flow);
  py::class_<SphereReport>(m, "SphereReport")
      .def_readonly("vol", &SphereReport::vol)
      .def_readonly("E", &SphereReport::E)
      .def_readonly("E1", &SphereReport::E1)
      .def_readonly("E2", &SphereReport::E2)
      .def_readonly("F_k", &SphereReport::F_k)
      .def_readonly("lam", &SphereReport::lam)
      .def_readonly("lam_prime", &SphereReport::lam_prime)
      .def_readonly("lam_bar", &SphereReport::lam_bar)
      .def_readonly("W", &SphereReport::W)
      .def_readonly("dW", &SphereReport::dW);
  m.def("sphere_reports", &sphere_reports);
  m.def("sphere_w_plus", &sphere_w_plus);
  m.def("sphere_w_plus_derivative", &sphere_w_plus_derivative);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("backend", &ExperimentConfig::backend)
      .def_readwrite("flow_kind", &ExperimentConfig::flow_kind)
      .def_readwrite("flow_a_n", &ExperimentConfig::flow_a_n)
      .def_readwrite("flow_a0", &ExperimentConfig::flow_a0)
      .def_readwrite("flow_decay", &ExperimentConfig::flow_decay)
      .def_readwrite("grid_n", &ExperimentConfig::grid_n)
      .def_readwrite("grid_len_x", &ExperimentConfig::grid_len_x)
      .def_readwrite("grid_len_y", &ExperimentConfig::grid_len_y)
      .def_readwrite("dt", &ExperimentConfig::dt)
      .def_readwrite("t_end", &ExperimentConfig::t_end)
      .def_readwrite("metric_preset", &ExperimentConfig::metric_preset)
      .def_readwrite("metric_u", &ExperimentConfig::metric_u)
      .def_readwrite("metric_log_a", &ExperimentConfig::metric_log_a)
      .def_readwrite("metric_log_b", &ExperimentConfig::metric_log_b)
      .def_readwrite("aux_v", &ExperimentConfig::aux_v)
      .def_readwrite("terminal_u", &ExperimentConfig::terminal_u)
      .def_readwrite("k_list", &ExperimentConfig::k_list)
      .def_readwrite("c_list", &ExperimentConfig::c_list)
      .def_readwrite("t_ref_mode", &ExperimentConfig::t_ref_mode)
      .def_readwrite("t_ref_value", &ExperimentConfig::t_ref_value)
      .def_readwrite("t_plus_ref", &ExperimentConfig::t_plus_ref)
      .def_readwrite("stride", &ExperimentConfig::stride)
      .def_readwrite("bmda_numeric", &ExperimentConfig::bmda_numeric)
      .def_readwrite("sphere_s0", &ExperimentConfig::sphere_s0)
      .def_readwrite("sphere_dim", &ExperimentConfig::sphere_dim)
      .def_readwrite("tol_scale", &ExperimentConfig::tol_scale)
      .def_readwrite("out_csv", &ExperimentConfig::out_csv)
      .def_readwrite("out_json", &ExperimentConfig::out_json);
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config_file", &load_config_file, py::arg("path"));
  m.def("apply_override", &apply_override, py::arg("config"), py::arg("assignment"));
  m.def("validate_config", &validate_config);
  m.def("echo_config", &echo_config);

  py::class_<Verdict>(m, "Verdict")
      .def_readonly("name", &Verdict::name)
      .def_readonly("measured", &Verdict::measured)
      .def_readonly("tol", &Verdict::tol)
      .def_readonly("pass_", &Verdict::pass)
      .def("__repr__", [](const Verdict& v) {
        return "Verdict(" + v.name + (v.pass ? ": ok)" : ": FAIL)");
      });
  py::class_<RunReport>(m, "RunReport")
      .def_readonly("header", &RunReport::header)
      .def_readonly("columns", &RunReport::columns)
      .def_readonly("verdicts", &RunReport::verdicts)
      .def_readonly("config_echo", &RunReport::config_echo)
      .def_readonly("backend", &RunReport::backend)
      .def_readonly("flow_name", &RunReport::flow_name)
      .def_readonly("grid_n", &RunReport::grid_n)
      .def_readonly("dt", &RunReport::dt)
      .def_readonly("steps", &RunReport::steps)
      .def_readonly("stride", &RunReport::stride)
      .def_readonly("build_id", &RunReport::build_id)
      .def("rows", &RunReport::rows)
      .def("passed", &RunReport::passed)
      .def("column", [](const RunReport& rep, const std::string& name) {
        for (size_t i = 0; i < rep.header.size(); ++i)
          if (rep.header[i] == name) return rep.columns[i];
        throw ConfigError("no column named " + name);
      });
  m.def("run_experiment", &run_experiment, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("auto_dt", &auto_dt);
  m.def("render_csv", &render_csv);
  m.def("render_json", &render_json);
  m.def("write_report_files", &write_report_files, py::arg("report"),
        py::arg("out_dir"));

  py::class_<verify::CheckResult>(m, "CheckResult")
      .def_readonly("name", &verify::CheckResult::name)
      .def_readonly("suite", &verify::CheckResult::suite)
      .def_readonly("criterion", &verify::CheckResult::criterion)
      .def_readonly("measured", &verify::CheckResult::measured)
      .def_readonly("tol", &verify::CheckResult::tol)
      .def_readonly("pass_", &verify::CheckResult::pass)
      .def("__repr__", [](const verify::CheckResult& r) {
        return "CheckResult(" + r.suite + "/" + r.name + (r.pass ? ": ok)" : ": FAIL)");
      });
  m.def("run_checks", &verify::run_checks, py::arg("suite"),
        py::arg("tol_scale") = 1.0, py::arg("seed") = 0,
        py::call_guard<py::gil_scoped_release>());
}
