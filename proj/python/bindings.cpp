#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mrlab/acceptance.hpp"
#include "mrlab/config.hpp"
#include "mrlab/errors.hpp"
#include "mrlab/extrapolation.hpp"
#include "mrlab/fem.hpp"
#include "mrlab/norms.hpp"
#include "mrlab/runner.hpp"

namespace py = pybind11;
using namespace mrlab;

namespace {

RunConfig config_from_text(const std::string& text)
{
    return parse_run_config(ConfigFile::parse_string(text));
}

// The scipy conversion reads raw CSC arrays, so hand over compressed storage.
Eigen::SparseMatrix<double> compressed(const SparseMatrix& m)
{
    Eigen::SparseMatrix<double> out = m.eigen();
    out.makeCompressed();
    return out;
}

py::dict window_dict(const WindowResult& w)
{
    py::dict d;
    d["center"] = w.center;
    d["lo"] = w.lo;
    d["hi"] = w.hi;
    d["theta"] = w.theta;
    d["radius"] = w.radius;
    d["bound"] = w.bound;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "P1 finite elements, parabolic maximal regularity diagnostics and extrapolation windows";
    m.attr("__version__") = kVersion;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<MeshError>(m, "MeshError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    py::class_<Mesh>(m, "Mesh")
        .def_property_readonly("dimension", &Mesh::dimension)
        .def_property_readonly("num_vertices", &Mesh::num_vertices)
        .def_property_readonly("num_cells", &Mesh::num_cells)
        .def("measure", &Mesh::measure)
        .def("cell_measure", &Mesh::cell_measure)
        .def("boundary_vertices", &Mesh::boundary_vertices)
        .def_property_readonly("vertices", &Mesh::vertices);

    m.def("interval_mesh", &build_interval_mesh, py::arg("cells"), py::arg("length") = 1.0);
    m.def("rect_mesh", &build_rect_mesh, py::arg("nx"), py::arg("ny"), py::arg("lx") = 1.0, py::arg("ly") = 1.0);

    py::class_<P1Space>(m, "Space")
        .def(py::init([](const Mesh& mesh, const std::string& dirichlet) {
                 return P1Space(mesh, build_partition(mesh, dirichlet));
             }),
             py::arg("mesh"), py::arg("dirichlet") = "all",
             "P1 space with Dirichlet conditions on the named sides (all, none, or a comma list)")
        .def_property_readonly("num_dofs", &P1Space::num_dofs)
        .def("mass", [](const P1Space& s) { return compressed(s.mass()); })
        .def("stiffness", [](const P1Space& s) { return compressed(s.stiffness_identity()); })
        .def("gram", [](const P1Space& s) { return compressed(s.gram()); });

    m.def("w1q_norm", &w1q_norm, py::arg("v"), py::arg("space"), py::arg("q"));
    m.def(
        "dual_norm",
        [](const Vector& f, const P1Space& space, double qprime) {
            const DualNorm d = dual_norm(f, space, qprime);
            return py::make_tuple(d.value, d.converged);
        },
        py::arg("f"), py::arg("space"), py::arg("qprime"));

    m.def("interp_exponent", &interp_exponent, py::arg("r0"), py::arg("r1"), py::arg("theta"));
    m.def("theta_from_r", &theta_from_r, py::arg("r"), py::arg("r0"), py::arg("r1"));
    m.def(
        "sneiberg_surjectivity_radius",
        [](double theta, double beta, double gamma) { return sneiberg_surjectivity_radius({theta, beta, gamma}); },
        py::arg("theta"), py::arg("beta"), py::arg("gamma"));
    m.def(
        "sneiberg_isomorphism_radius",
        [](double theta, double beta, double gamma) {
            const IsomorphismRadius r = sneiberg_isomorphism_radius({theta, beta, gamma});
            return py::make_tuple(r.radius, r.inverse_bound);
        },
        py::arg("theta"), py::arg("beta"), py::arg("gamma"));
    m.def(
        "hilbert_window",
        [](double c_lower, double c_upper, double c, double r0, double r1, const std::string& mode) {
            return window_dict(hilbert_window(c_lower, c_upper, c, r0, r1,
                                              mode == "surjective" ? WindowMode::surjective
                                                                   : WindowMode::isomorphism));
        },
        py::arg("c_lower"), py::arg("c_upper"), py::arg("C"), py::arg("r0") = 4.0, py::arg("r1") = 4.0 / 3.0,
        py::arg("mode") = "isomorphism");
    m.def(
        "kappa_r0",
        [](double c_lower, double c_upper, double c, double s) {
            const KappaResult k = kappa_r0(c_lower, c_upper, c, s);
            py::dict d;
            d["kappa"] = k.kappa;
            d["r0"] = k.r0;
            d["lo"] = k.lo;
            d["hi"] = k.hi;
            d["bound"] = k.bound;
            return d;
        },
        py::arg("c_lower"), py::arg("c_upper"), py::arg("C"), py::arg("s"));

    // Runners take config text and return the JSON report as a string.
    m.def(
        "run_solve",
        [](const std::string& text, std::optional<std::string> out) {
            return dump_report(run_solve(config_from_text(text), out));
        },
        py::arg("config"), py::arg("out") = py::none());
    m.def(
        "run_estimate",
        [](const std::string& text, std::optional<std::string> out) {
            return dump_report(run_estimate(config_from_text(text), out));
        },
        py::arg("config"), py::arg("out") = py::none());
    m.def(
        "run_quasilinear",
        [](const std::string& text, std::optional<std::string> out) {
            return dump_report(run_quasilinear(config_from_text(text), out));
        },
        py::arg("config"), py::arg("out") = py::none());
    m.def(
        "run_window",
        [](double c_lower, double c_upper, double c, std::optional<double> s, double r0, double r1,
           const std::string& mode) {
            WindowRequest req;
            req.c_lower = c_lower;
            req.c_upper = c_upper;
            req.c = c;
            req.s = s;
            req.r0 = r0;
            req.r1 = r1;
            req.mode = mode == "surjective" ? WindowMode::surjective : WindowMode::isomorphism;
            return dump_report(run_window(req));
        },
        py::arg("c_lower"), py::arg("c_upper"), py::arg("C"), py::arg("s") = py::none(), py::arg("r0") = 4.0,
        py::arg("r1") = 4.0 / 3.0, py::arg("mode") = "isomorphism");

    m.def(
        "run_acceptance",
        [](const std::vector<std::string>& only) {
            py::list out;
            for (const auto& r : run_acceptance(only)) {
                py::dict d;
                d["id"] = r.id;
                d["title"] = r.title;
                d["pass"] = r.pass;
                d["detail"] = r.detail;
                d["seconds"] = r.seconds;
                out.append(d);
            }
            return out;
        },
        py::arg("only") = std::vector<std::string>{});
}
