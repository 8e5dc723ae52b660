#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "optret/errors.hpp"
#include "optret/oracle.hpp"
#include "optret/primal.hpp"

namespace py = pybind11;
using namespace optret;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Optimal retirement boundary solver (dual free-boundary method)";

  py::register_exception<Error>(m, "OptretError");

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("mu", &ModelParams::mu)
      .def_readwrite("sigma", &ModelParams::sigma)
      .def_readwrite("r", &ModelParams::r)
      .def_readwrite("beta", &ModelParams::beta)
      .def_readwrite("gamma", &ModelParams::gamma)
      .def_readwrite("mu_y", &ModelParams::mu_y)
      .def_readwrite("sigma_y", &ModelParams::sigma_y)
      .def_readwrite("a", &ModelParams::a)
      .def_readwrite("T_horizon", &ModelParams::T_horizon)
      .def_readwrite("K", &ModelParams::K)
      .def_readwrite("m0", &ModelParams::m0)
      .def("fingerprint", &ModelParams::fingerprint)
      .def("to_kv_text", &ModelParams::to_kv_text)
      .def_static("from_kv_text", &ModelParams::from_kv_text);

  py::enum_<GammaRegime>(m, "GammaRegime")
      .value("LOW", GammaRegime::LOW)
      .value("HIGH", GammaRegime::HIGH);

  py::class_<DerivedConstants>(m, "DerivedConstants")
      .def_readonly("theta", &DerivedConstants::theta)
      .def_readonly("kappa", &DerivedConstants::kappa)
      .def_readonly("rho", &DerivedConstants::rho)
      .def_readonly("mu1", &DerivedConstants::mu1)
      .def_readonly("sigma1", &DerivedConstants::sigma1)
      .def_readonly("L_terminal", &DerivedConstants::L_terminal)
      .def_readonly("gamma_regime", &DerivedConstants::gamma_regime);

  m.def("derive_constants", &derive_constants, py::arg("params"),
        py::arg("override_assumptions") = false);
  m.def("initial_mortality_from_age", &initial_mortality_from_age,
        py::arg("age"), py::arg("modal_value"), py::arg("dispersion"));

  py::class_<Model>(m, "Model")
      .def(py::init<const ModelParams&, bool>(), py::arg("params"),
           py::arg("override_assumptions") = false)
      .def_property_readonly("params", &Model::params)
      .def_property_readonly("constants", &Model::constants)
      .def("mortality_at", &Model::mortality_at)
      .def("q_factor", &Model::q_factor)
      .def("growth_factor", &Model::growth_factor)
      .def("running_reward", &Model::running_reward)
      .def("dual_utility_pre",
           [](const Model& mod, double x) { return mod.dual_utility(x, UtilitySide::PRE); })
      .def("dual_utility_post",
           [](const Model& mod, double x) { return mod.dual_utility(x, UtilitySide::POST); });

  py::class_<PostRetirementValue>(m, "PostRetirementValue")
      .def_readonly("value", &PostRetirementValue::value)
      .def_readonly("minimizer", &PostRetirementValue::minimizer);

  py::class_<PostRetirement>(m, "PostRetirement")
      .def(py::init<const Model&, double>(), py::arg("model"),
           py::arg("quadrature_tol") = 1e-10)
      .def("lifetime_integral", &PostRetirement::lifetime_integral)
      .def("c_of_m", &PostRetirement::c_of_m)
      .def("q", &PostRetirement::q)
      .def("q_x", &PostRetirement::q_x)
      .def("q_xx", &PostRetirement::q_xx)
      .def("value", &PostRetirement::value)
      .def("consumption", &PostRetirement::consumption);

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("n_steps", &SolverOptions::n_steps)
      .def_readwrite("root_tol", &SolverOptions::root_tol);

  py::class_<BoundarySolution>(m, "BoundarySolution")
      .def_readonly("m_initial", &BoundarySolution::m_initial)
      .def_readonly("n_steps", &BoundarySolution::n_steps)
      .def_readonly("xi", &BoundarySolution::xi)
      .def_readonly("b_star", &BoundarySolution::b_star)
      .def_readonly("residual", &BoundarySolution::residual)
      .def_readonly("regime", &BoundarySolution::regime)
      .def_readonly("fingerprint", &BoundarySolution::fingerprint)
      .def("boundary_at", &BoundarySolution::boundary_at)
      .def("mortality_at_xi", &BoundarySolution::mortality_at_xi)
      .def("to_csv", &BoundarySolution::to_csv)
      .def_static("from_csv", &BoundarySolution::from_csv);

  m.def("solve_boundary", &solve_boundary, py::arg("model"),
        py::arg("m_initial"), py::arg("options") = SolverOptions{});
  m.def("j_hat", &j_hat, py::arg("model"), py::arg("solution"), py::arg("xi"),
        py::arg("x"), py::arg("m"));
  m.def("d_arguments",
        [](const Model& model, double s, double y, double mm) {
          const DArguments d = d_arguments(model, s, y, mm);
          return py::make_tuple(d.d1, d.d2);
        });
  m.def("g_kernel", &g_kernel, py::arg("model"), py::arg("xi"), py::arg("s"),
        py::arg("b_at_xi"), py::arg("b_at_xi_minus_s"), py::arg("m"));

  py::class_<PrimalState>(m, "PrimalState")
      .def(py::init([](double t, double w, double mm, double y) {
             return PrimalState{t, w, mm, y};
           }),
           py::arg("t"), py::arg("w"), py::arg("m"), py::arg("y"))
      .def_readwrite("t", &PrimalState::t)
      .def_readwrite("w", &PrimalState::w)
      .def_readwrite("m", &PrimalState::m)
      .def_readwrite("y", &PrimalState::y);

  py::class_<PolicyOutput>(m, "PolicyOutput")
      .def_readonly("z_star", &PolicyOutput::z_star)
      .def_readonly("c_star", &PolicyOutput::c_star)
      .def_readonly("pi_star", &PolicyOutput::pi_star)
      .def_readonly("retire_now", &PolicyOutput::retire_now)
      .def_readonly("b_hat", &PolicyOutput::b_hat);

  py::class_<JTilde>(m, "JTilde")
      .def_readonly("value", &JTilde::value)
      .def_readonly("dx", &JTilde::dx)
      .def_readonly("dxx", &JTilde::dxx);

  py::class_<PrimalTransform>(m, "PrimalTransform")
      .def(py::init<const Model&, const BoundarySolution&, double>(),
           py::arg("model"), py::arg("solution"),
           py::arg("quadrature_tol") = 1e-10)
      .def("j_tilde", &PrimalTransform::j_tilde)
      .def("invert_multiplier", &PrimalTransform::invert_multiplier,
           py::arg("t"), py::arg("w"), py::arg("m"), py::arg("y"),
           py::arg("rel_tol") = 1e-10)
      .def("wealth_boundary", &PrimalTransform::wealth_boundary)
      .def("wealth_to_wage_ratio", &PrimalTransform::wealth_to_wage_ratio)
      .def("feedback_policies", &PrimalTransform::feedback_policies)
      .def("primal_value", &PrimalTransform::primal_value);

  py::class_<LatticeSpec>(m, "LatticeSpec")
      .def(py::init<>())
      .def_readwrite("n_time", &LatticeSpec::n_time)
      .def_readwrite("n_space", &LatticeSpec::n_space)
      .def_readwrite("x_lo", &LatticeSpec::x_lo)
      .def_readwrite("x_hi", &LatticeSpec::x_hi)
      .def_readwrite("m_initial", &LatticeSpec::m_initial)
      .def_readwrite("stencil", &LatticeSpec::stencil);

  py::class_<McResult>(m, "McResult")
      .def_readonly("mean", &McResult::mean)
      .def_readonly("stderr", &McResult::stderr_)
      .def_readonly("n_paths", &McResult::n_paths);

  py::class_<OracleReport>(m, "OracleReport")
      .def_readonly("t", &OracleReport::t)
      .def_readonly("xi", &OracleReport::xi)
      .def_readonly("boundary_lattice", &OracleReport::boundary_lattice)
      .def_readonly("x_grid", &OracleReport::x_grid)
      .def_readonly("value_at_t0", &OracleReport::value_at_t0)
      .def("to_csv", &OracleReport::to_csv);

  m.def("lattice_solve", &lattice_solve, py::arg("model"), py::arg("spec"));
  m.def("mc_evaluate", &mc_evaluate, py::arg("model"), py::arg("boundary"),
        py::arg("xi"), py::arg("x"), py::arg("m"), py::arg("n_paths"),
        py::arg("seed"));
}
