#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uio/errors.hpp"
#include "uio/lqr.hpp"
#include "uio/model_io.hpp"
#include "uio/numlin.hpp"
#include "uio/observer.hpp"
#include "uio/poleplace.hpp"
#include "uio/scenarios.hpp"
#include "uio/sim.hpp"

namespace py = pybind11;
using namespace uio;

PYBIND11_MODULE(_uio_lab, m) {
  m.doc() = "Unknown input observer design, verification and simulation";

  py::register_exception<Error>(m, "UioError", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<SingularError>(m, "SingularError", PyExc_RuntimeError);
  py::register_exception<NoUioError>(m, "NoUioError", PyExc_RuntimeError);

  m.def("rank", &numlin::rank, py::arg("m"), py::arg("tol") = 0.0);
  m.def("pinv", &numlin::pinv);
  m.def("eigvals", &numlin::eigvals);
  m.def("solve_sylvester", &numlin::solve_sylvester);
  m.def("obsv_matrix", &numlin::obsv_matrix);
  m.def("full_rank_factorization", &numlin::full_rank_factorization, py::arg("e"),
        py::arg("tol") = 0.0);

  py::class_<LinearSystem>(m, "LinearSystem")
      .def(py::init<Matrix, Matrix, Matrix, Matrix>(), py::arg("A"), py::arg("B"),
           py::arg("C"), py::arg("E"))
      .def_property_readonly("A", &LinearSystem::A)
      .def_property_readonly("B", &LinearSystem::B)
      .def_property_readonly("C", &LinearSystem::C)
      .def_property_readonly("E", &LinearSystem::E)
      .def_property_readonly("n", &LinearSystem::n)
      .def_property_readonly("m", &LinearSystem::m)
      .def_property_readonly("r", &LinearSystem::r)
      .def_property_readonly("q", &LinearSystem::q);

  py::class_<UioGains>(m, "UioGains")
      .def(py::init<>())
      .def_readwrite("F", &UioGains::F)
      .def_readwrite("T", &UioGains::T)
      .def_readwrite("K", &UioGains::K)
      .def_readwrite("H", &UioGains::H)
      .def_readwrite("K1", &UioGains::K1)
      .def_readwrite("K2", &UioGains::K2);

  py::class_<ExistenceReport>(m, "ExistenceReport")
      .def_readonly("rank_CE", &ExistenceReport::rank_ce)
      .def_readonly("rank_E", &ExistenceReport::rank_e)
      .def_readonly("rank_condition_ok", &ExistenceReport::rank_condition_ok)
      .def_readonly("detectable", &ExistenceReport::detectable)
      .def_readonly("unstable_unobservable_modes",
                    &ExistenceReport::unstable_unobservable_modes)
      .def_readonly("uio_exists", &ExistenceReport::uio_exists);

  py::class_<GainCheck>(m, "GainCheck")
      .def_readonly("decoupling", &GainCheck::decoupling)
      .def_readonly("t_residual", &GainCheck::t_residual)
      .def_readonly("f_residual", &GainCheck::f_residual)
      .def_readonly("k2_residual", &GainCheck::k2_residual)
      .def_readonly("k_residual", &GainCheck::k_residual)
      .def_readonly("spectral_abscissa", &GainCheck::spectral_abscissa)
      .def_readonly("passed", &GainCheck::passed);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("x", &Trajectory::x)
      .def_readonly("xhat", &Trajectory::xhat)
      .def_readonly("e", &Trajectory::e)
      .def_readonly("y", &Trajectory::y)
      .def_readonly("u", &Trajectory::u)
      .def_readonly("d", &Trajectory::d)
      .def_readonly("dhat", &Trajectory::dhat);

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("name", &Scenario::name)
      .def_readonly("system", &Scenario::system);

  m.def("compute_decoupling", [](const LinearSystem& sys) {
    const Decoupling d = compute_decoupling(sys);
    return py::make_tuple(d.H, d.T, d.A1);
  });
  m.def("check_existence", &check_existence);
  m.def("design", [](const LinearSystem& sys, const ComplexList& poles) {
    return design(sys, poles).gains;
  });
  m.def("design_full_measurement", [](const LinearSystem& sys, const Matrix& f) {
    return design_full_measurement(sys, f).gains;
  });
  m.def("place_full_measurement", &place_full_measurement);
  m.def("verify_gains", &verify_gains, py::arg("sys"), py::arg("gains"),
        py::arg("tol") = kVerifyTol);
  m.def("place_poles", [](const Matrix& a, const Matrix& c, const ComplexList& poles) {
    return place_poles(a, c, PoleSet(poles));
  });

  m.def("solve_care", [](const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r) {
    return solve_care(LqrProblem(a, b, q, r));
  });
  m.def("lqr_gain", [](const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r) {
    return lqr_gain(LqrProblem(a, b, q, r));
  });

  m.def("scenario_names", &builtin_scenario_names);
  m.def("builtin_scenario", &builtin_scenario);
  m.def("design_scenario", [](const Scenario& s) { return design_scenario(s).gains; });
  m.def("simulate_scenario", [](const Scenario& s) { return simulate_scenario(s); });
  m.def("convergence_time", &convergence_time, py::arg("traj"), py::arg("fraction"));
  m.def("parse_model", [](const std::string& text) { return parse_model_text(text); });
  m.def("export_model", [](const Scenario& s) { return export_model(s).dump(2); });
}
