#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tase/errors.hpp"
#include "tase/fov.hpp"
#include "tase/harness.hpp"
#include "tase/problems.hpp"
#include "tase/splitting.hpp"
#include "tase/stability.hpp"

namespace py = pybind11;
using namespace tase;

namespace {

DiagramQuery query(const TaseOperator& op, double y) {
    return std::isinf(y) ? DiagramQuery::limit(op) : DiagramQuery::at(op, y);
}

std::pair<int, std::string> run_command(const std::string& command, const std::string& config) {
    ExperimentConfig cfg;
    parse_config_text(cfg, config);
    std::ostringstream out;
    int code = 0;
    if (command == "integrate") code = cmd_integrate(cfg, out);
    else if (command == "certify") code = cmd_certify(cfg, out);
    else if (command == "kstar") code = cmd_kstar(cfg, out);
    else if (command == "diagram") code = cmd_diagram(cfg, out);
    else if (command == "fov") code = cmd_fov(cfg, out);
    else if (command == "convergence") code = cmd_convergence(cfg, out);
    else if (command == "workprec") code = cmd_work_precision(cfg, out);
    else throw ConfigError("unknown command '" + command + "'");
    return {code, out.str()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "TASE-RK time steppers and stability analysis";

    auto& base = py::register_exception<Error>(m, "TaseError");
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<NonFiniteState>(m, "NonFiniteState", base.ptr());

    py::class_<TaseOperator>(m, "TaseOperator")
        .def(py::init<int, std::vector<double>>(), py::arg("p"), py::arg("omega"))
        .def_static("standard", &TaseOperator::standard, py::arg("p"))
        .def_property_readonly("p", &TaseOperator::p)
        .def_property_readonly("omega", &TaseOperator::omega)
        .def_property_readonly("beta", &TaseOperator::beta)
        .def("__call__", py::overload_cast<cplx>(&TaseOperator::scalar, py::const_), py::arg("z"))
        .def("hat_t", &TaseOperator::hat_t, py::arg("y"))
        .def("hat_t_limit", &TaseOperator::hat_t_limit);

    m.def("tase_weights", &tase_weights, py::arg("p"), py::arg("omega"));
    m.def("rp", &rp, py::arg("p"), py::arg("z"));
    m.def("rt", &rt, py::arg("op"), py::arg("z"));
    m.def(
        "rt_tilde", [](const TaseOperator& op, double y, cplx mu) { return rt_tilde(query(op, y), mu); },
        py::arg("op"), py::arg("y"), py::arg("mu"), "y = -inf gives the unconditional diagram");
    m.def(
        "in_diagram", [](const TaseOperator& op, double y, cplx mu) { return in_diagram(query(op, y), mu); },
        py::arg("op"), py::arg("y"), py::arg("mu"));
    m.def(
        "boundary",
        [](const TaseOperator& op, double y, int n_theta) {
            const BoundaryCurve c = boundary(query(op, y), n_theta);
            return py::make_tuple(c.thetas, c.points, c.residuals);
        },
        py::arg("op"), py::arg("y"), py::arg("n_theta") = 720, "(thetas, points, residuals)");
    m.def(
        "real_axis_endpoints", [](const TaseOperator& op, double y) { return real_axis_endpoints(query(op, y)); },
        py::arg("op"), py::arg("y"));
    m.def(
        "kstar_real",
        [](const TaseOperator& op, const std::vector<std::pair<double, double>>& pairs) {
            std::vector<ModeRatio> modes;
            for (const auto& [l, mu] : pairs) modes.push_back({l, mu});
            return kstar_real(op, modes);
        },
        py::arg("op"), py::arg("pairs"), "pairs of (lambda_i, mu_i)");

    m.def(
        "fov",
        [](const Matrix& X, int n_theta) {
            const FovBoundary w = fov(X, n_theta);
            return py::make_tuple(w.angles, w.points);
        },
        py::arg("X"), py::arg("n_theta") = 720, "(angles, support points)");
    m.def(
        "generalized_eigenvalues", [](const Matrix& A, const Matrix& B) { return generalized_eigenvalues(Splitting(A, B)); },
        py::arg("A"), py::arg("B"));

    py::class_<SplitProblem>(m, "Problem")
        .def_readonly("name", &SplitProblem::name)
        .def_readonly("A", &SplitProblem::A)
        .def_readonly("u0", &SplitProblem::u0)
        .def_readonly("t0", &SplitProblem::t0)
        .def_readonly("te", &SplitProblem::te)
        .def_readonly("params", &SplitProblem::params)
        .def("f", [](const SplitProblem& p, double t, const Vector& u) { return p.f(t, u); })
        .def("jacobian", [](const SplitProblem& p, double t, const Vector& u) { return p.jacobian(t, u); })
        .def("B", &SplitProblem::B);
    m.def("make_problem", &make_problem, py::arg("name"), py::arg("params") = std::map<std::string, double>{});
    m.def("problem_names", &problem_names);

    py::class_<IntegrationRun>(m, "IntegrationRun")
        .def_readonly("k", &IntegrationRun::k)
        .def_readonly("steps", &IntegrationRun::steps)
        .def_readonly("times", &IntegrationRun::times)
        .def_readonly("states", &IntegrationRun::states)
        .def_readonly("final_state", &IntegrationRun::final_state)
        .def_readonly("max_norm", &IntegrationRun::max_norm)
        .def_readonly("blew_up", &IntegrationRun::blew_up)
        .def_readonly("blowup_time", &IntegrationRun::blowup_time);
    m.def(
        "integrate",
        [](const SplitProblem& p, const std::string& method, double k, double t_end, long store_every) {
            IntegrateOptions o;
            o.store_every = store_every;
            return run_method(p, parse_method(method), k, t_end, o);
        },
        py::arg("problem"), py::arg("method"), py::arg("k"), py::arg("t_end"), py::arg("store_every") = 1);

    m.def("run_command", &run_command, py::arg("command"), py::arg("config") = "",
          "Run a harness command with `key = value` config text; returns (exit code, output)");
}
