#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>

#include "nlslab/config.hpp"
#include "nlslab/error.hpp"
#include "nlslab/fft.hpp"
#include "nlslab/morawetz.hpp"
#include "nlslab/nls_integrator.hpp"
#include "nlslab/norms.hpp"
#include "nlslab/presets.hpp"
#include "nlslab/records.hpp"
#include "nlslab/scattering.hpp"

namespace py = pybind11;
using namespace nlslab;

namespace {

std::vector<py::ssize_t> shape_of(const Grid& g) {
    std::vector<py::ssize_t> shape(g.d, g.nx);
    shape.push_back(g.ny);
    return shape;
}

py::array_t<cplx> as_array(const Grid& g, const std::vector<cplx>& data) {
    py::array_t<cplx> out(shape_of(g));
    std::copy(data.begin(), data.end(), out.mutable_data());
    return out;
}

std::optional<Rational> opt_rational(const std::optional<std::string>& s) {
    if (!s) return std::nullopt;
    return parse_rational(*s);
}

py::dict run_result_dict(const RunResult& r) {
    py::list checks;
    for (const auto& c : r.checks) checks.append(py::dict(py::arg("name") = c.name, py::arg("passed") = c.passed,
                                                          py::arg("detail") = c.detail));
    return py::dict(py::arg("exit_code") = r.exit_code, py::arg("checks") = checks,
                    py::arg("flags") = r.flags.dump(), py::arg("rows") = r.rows,
                    py::arg("wall_seconds") = r.wall_seconds, py::arg("output_dir") = r.output_dir.string());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Pseudospectral NLS laboratory on R^d x T";

    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<BlowUp>(m, "BlowUp", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<Grid>(m, "Grid")
        .def(py::init(&Grid::make), py::arg("d"), py::arg("L"), py::arg("nx"), py::arg("ny"))
        .def_readonly("d", &Grid::d)
        .def_readonly("L", &Grid::L)
        .def_readonly("nx", &Grid::nx)
        .def_readonly("ny", &Grid::ny)
        .def_property_readonly("dx", &Grid::dx)
        .def_property_readonly("volume", &Grid::volume)
        .def("x", [](const Grid& g) {
            py::array_t<double> out(g.nx);
            for (int j = 0; j < g.nx; ++j) out.mutable_at(j) = g.x(j);
            return out;
        })
        .def("__eq__", &Grid::operator==)
        .def("__repr__", [](const Grid& g) {
            return "Grid(d=" + std::to_string(g.d) + ", L=" + format_double(g.L) + ", nx=" + std::to_string(g.nx) +
                   ", ny=" + std::to_string(g.ny) + ")";
        });

    py::class_<SpectralField>(m, "SpectralField")
        .def_static("from_physical",
                    [](const Grid& g, py::array_t<cplx, py::array::c_style | py::array::forcecast> a, double t) {
                        if (static_cast<std::size_t>(a.size()) != g.size())
                            throw InvalidInput("array size does not match the grid");
                        return SpectralField::from_physical(g, {a.data(), g.size()}, t);
                    },
                    py::arg("grid"), py::arg("samples"), py::arg("time") = 0.0)
        .def_property_readonly("grid", &SpectralField::grid)
        .def_property_readonly("time", &SpectralField::time)
        .def("coeffs", [](const SpectralField& f) { return as_array(f.grid(), f.coeffs()); },
             "Fourier coefficients in FFT order, shape (nx[, nx], ny)")
        .def("physical", [](const SpectralField& f) { return as_array(f.grid(), f.to_physical()); },
             "Grid samples, shape (nx[, nx], ny)");

    m.def("gaussian", &gaussian, py::arg("grid"), py::arg("amplitude") = 1.0, py::arg("width") = 0.45,
          py::arg("y_modulation") = 0.0);
    m.def("soliton", &soliton_profile, py::arg("grid"), py::arg("B") = 1.0);
    m.def("plane_wave",
          [](const Grid& g, int k1, int k2, int n, cplx A) { return plane_wave(g, {k1, k2}, n, A); },
          py::arg("grid"), py::arg("k1"), py::arg("k2") = 0, py::arg("n") = 0, py::arg("amplitude") = cplx(1.0));

    m.def("free_evolve", &free_evolve, py::arg("field"), py::arg("t"));
    m.def("pullback", &pullback, py::arg("field"));
    m.def("strang_step",
          [](const SpectralField& f, double alpha, double lam, double dt) {
              return strang_step(f, PhysicsParams::make(alpha, lam), dt);
          },
          py::arg("field"), py::arg("alpha"), py::arg("lam"), py::arg("dt"));
    m.def("evolve",
          [](const SpectralField& u0, double alpha, double lam, double dt, double t_end, int sample_every,
             std::function<void(double, const SpectralField&)> callback) {
              std::vector<Sink> sinks;
              if (callback) sinks.push_back([&](const Sample& s) { callback(s.t, s.field); });
              return evolve(u0, PhysicsParams::make(alpha, lam), StepControl::make(dt, t_end, sample_every), sinks);
          },
          py::arg("field"), py::arg("alpha"), py::arg("lam"), py::arg("dt"), py::arg("t_end"),
          py::arg("sample_every") = 1, py::arg("callback") = nullptr,
          "Strang split-step run; callback(t, field) at every sample.");

    m.def("mass", &mass);
    m.def("energy", [](const SpectralField& f, double alpha, double lam) { return energy(f, PhysicsParams::make(alpha, lam)); },
          py::arg("field"), py::arg("alpha"), py::arg("lam"));
    m.def("lebesgue_norm", py::overload_cast<const SpectralField&, double>(&lebesgue_norm), py::arg("field"),
          py::arg("q"));
    m.def("sobolev_h1", &sobolev_h1);
    m.def("homogeneous_hs_y", &homogeneous_hs_y, py::arg("field"), py::arg("s"));
    m.def("cube_sup_mass", py::overload_cast<const SpectralField&, double>(&cube_sup_mass), py::arg("field"),
          py::arg("r_side") = 1.0);

    m.def("morawetz_terms",
          [](const SpectralField& f, double alpha, double lam) {
              const MorawetzKernels kernels(f.grid());
              const auto t = morawetz_terms(f, PhysicsParams::make(alpha, lam), kernels);
              return py::dict(py::arg("J") = morawetz_J(f, kernels), py::arg("lhs") = t.lhs, py::arg("rhs") = t.rhs,
                              py::arg("S") = t.S(), py::arg("kinetic") = t.kinetic,
                              py::arg("kinetic_partner") = t.kinetic_partner, py::arg("momentum") = t.momentum,
                              py::arg("gradient") = t.gradient, py::arg("interaction") = t.interaction,
                              py::arg("interaction_partner") = t.interaction_partner);
          },
          py::arg("field"), py::arg("alpha"), py::arg("lam"));

    m.def("cauchy_table",
          [](const std::vector<SpectralField>& snaps) {
              const auto t = cauchy_table(snaps);
              const auto n = static_cast<py::ssize_t>(t.size());
              py::array_t<double> mat({n, n});
              std::copy(t.matrix.begin(), t.matrix.end(), mat.mutable_data());
              return py::make_tuple(t.times, mat);
          },
          py::arg("snapshots"), "(times, C) with C_ij = ||w(t_i) - w(t_j)||_H1 of the pull-backs");

    m.def("_exponent_query",
          [](int d, const std::string& alpha, const std::string& mode, std::optional<std::string> r,
             std::optional<std::string> epsilon, std::optional<std::string> theta, const std::string& res) {
              ExponentQuery q;
              q.d = d;
              q.alpha = parse_rational(alpha);
              q.mode = parse_exponent_mode(mode);
              q.r = opt_rational(r);
              q.epsilon = opt_rational(epsilon);
              q.theta = opt_rational(theta);
              q.theta_resolution = parse_rational(res);
              return exponent_query(q).dump();
          },
          py::arg("d"), py::arg("alpha"), py::arg("mode") = "critical", py::arg("r") = py::none(),
          py::arg("epsilon") = py::none(), py::arg("theta") = py::none(), py::arg("theta_resolution") = "1/100");

    m.def("_check_config", [](const std::string& text) { return emit_config(parse_config(text)); },
          py::arg("text"), "Validates INI text; returns the normalized form.");
    m.def("_run_preset",
          [](const std::string& text, std::optional<std::string> output_dir) {
              auto c = parse_config(text);
              if (output_dir) c.output_dir = *output_dir;
              RunResult r;
              {
                  py::gil_scoped_release release;
                  r = run_preset(c);
              }
              return run_result_dict(r);
          },
          py::arg("text"), py::arg("output_dir") = py::none());
    m.def("verify_records",
          [](const std::string& path, double tol) {
              std::ifstream in(path, std::ios::binary);
              if (!in) throw IoError("cannot open " + path);
              const auto report = verify_records(parse_records(in), tol);
              py::list failures;
              for (const auto& f : report.failures) failures.append(f.row);
              return py::dict(py::arg("rows") = report.rows, py::arg("checked") = report.checked,
                              py::arg("ok") = report.ok(), py::arg("failed_rows") = failures,
                              py::arg("boundary_guard_fired") = report.boundary_guard_fired);
          },
          py::arg("path"), py::arg("tol") = 1e-8);

    m.def("fft_threads", &fft::threads);
    m.def("set_fft_threads", &fft::set_threads);
    m.attr("__version__") = NLSLAB_VERSION;
}
