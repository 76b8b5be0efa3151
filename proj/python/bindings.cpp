#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "cesaro/appendix.hpp"
#include "cesaro/errors.hpp"
#include "cesaro/field.hpp"
#include "cesaro/lab.hpp"
#include "cesaro/mean.hpp"
#include "cesaro/report.hpp"
#include "cesaro/weights.hpp"

namespace py = pybind11;
using namespace cesaro;

namespace {

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Field field_from(const Array& a) {
    if (a.ndim() != 2) {
        throw std::invalid_argument("field must be a 2-D array");
    }
    Field f(a.shape(0), a.shape(1));
    std::copy(a.data(), a.data() + a.size(), f.data().begin());
    return f;
}

Array array_from(const Field& f) {
    Array out({f.rows(), f.cols()});
    std::copy(f.data().begin(), f.data().end(), out.mutable_data());
    return out;
}

}  // namespace

PYBIND11_MODULE(cesaro, m) {
    m.doc() = "Cesaro means of random fields";

    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<TailProfile>(m, "Profile")
        .def_static("pareto_log", &TailProfile::pareto_log, py::arg("p"), py::arg("q") = 0.0, py::arg("mu") = 0.0,
                    py::arg("x0") = std::numbers::e)
        .def_static("rademacher", &TailProfile::rademacher, py::arg("mu") = 0.0)
        .def_static("uniform_sym", &TailProfile::uniform_sym, py::arg("mu") = 0.0)
        .def_static("gaussian", &TailProfile::gaussian, py::arg("mu") = 0.0)
        .def_property_readonly("family", [](const TailProfile& p) { return std::string(to_string(p.family)); })
        .def_readonly("p", &TailProfile::p)
        .def_readonly("q", &TailProfile::q)
        .def_readonly("mu", &TailProfile::mu)
        .def_readonly("x0", &TailProfile::x0)
        .def("to_dict", [](const TailProfile& p) { return to_python(to_json(p)); })
        .def("__eq__", [](const TailProfile& a, const TailProfile& b) { return a == b; })
        .def("__repr__", [](const TailProfile& p) { return "Profile(" + to_json(p).dump() + ")"; });

    m.def("log_weight", &log_weight, py::arg("alpha"), py::arg("n"));
    m.def("weight", &weight, py::arg("alpha"), py::arg("n"));
    m.def("log_weight_gamma", &log_weight_gamma, py::arg("alpha"), py::arg("n"));
    m.def("log_weight_recurrence", &log_weight_recurrence, py::arg("alpha"), py::arg("n"));
    m.def("asymptotic_ratio", &asymptotic_ratio, py::arg("alpha"), py::arg("n"));

    m.def(
        "sample_field",
        [](const TailProfile& profile, std::uint64_t seed, std::size_t rows, std::size_t cols, unsigned threads) {
            return array_from(materialize(FieldSpec{profile, seed, {rows, cols}}, threads));
        },
        py::arg("profile"), py::arg("seed"), py::arg("rows"), py::arg("cols"), py::arg("threads") = 1);

    m.def(
        "mean_1d",
        [](const Array& xs, double alpha) {
            if (xs.ndim() != 1) {
                throw std::invalid_argument("xs must be a 1-D array");
            }
            const auto out = cesaro_mean_1d(std::span<const double>(xs.data(), xs.size()), alpha);
            return Array(out.size(), out.data());
        },
        py::arg("xs"), py::arg("alpha"));

    m.def(
        "mean_2d",
        [](const Array& field, double alpha, double beta, const std::vector<std::pair<std::size_t, std::size_t>>& at) {
            std::vector<Checkpoint> cps;
            for (auto [i, j] : at) {
                cps.push_back({i, j});
            }
            return cesaro_mean_2d(field_from(field), CesaroOrder::two_dim(alpha, beta), cps).values;
        },
        py::arg("field"), py::arg("alpha"), py::arg("beta"), py::arg("checkpoints"));

    m.def(
        "mean_lattice",
        [](const Array& field, double alpha, double beta, unsigned threads) {
            return array_from(cesaro_mean_lattice(field_from(field), CesaroOrder::two_dim(alpha, beta), threads));
        },
        py::arg("field"), py::arg("alpha"), py::arg("beta"), py::arg("threads") = 1);

    m.def(
        "moment_finite", [](const TailProfile& p, double r, double s) { return moment_finite(p, r, s); },
        py::arg("profile"), py::arg("r"), py::arg("s"));

    m.def(
        "complete_sum",
        [](const TailProfile& p, double alpha, double beta, std::size_t N) {
            return to_python(to_json(complete_convergence_sum(p, CesaroOrder::two_dim(alpha, beta), N)));
        },
        py::arg("profile"), py::arg("alpha"), py::arg("beta"), py::arg("N") = 128);

    m.def(
        "verdict",
        [](const std::string& mode, const TailProfile& p, double alpha, double beta, std::uint64_t master_seed,
           unsigned threads) {
            VerdictConfig cfg;
            cfg.mode = parse_mode(mode);
            cfg.profile = p;
            cfg.order = CesaroOrder::two_dim(alpha, beta);
            cfg.master_seed = master_seed;
            cfg.threads = threads;
            Json j;
            {
                py::gil_scoped_release release;
                j = to_json(run_verdict(cfg));
            }
            return to_python(j);
        },
        py::arg("mode"), py::arg("profile"), py::arg("alpha"), py::arg("beta"), py::arg("master_seed") = 1,
        py::arg("threads") = 1);

    m.def("branch_ratio", &branch_ratio, py::arg("gamma"), py::arg("y"));

    m.def(
        "matrix",
        [](const std::string& scale, std::uint64_t master_seed, unsigned threads) {
            MatrixConfig cfg;
            cfg.scale = parse_scale(scale);
            cfg.master_seed = master_seed;
            cfg.threads = threads;
            Json j;
            {
                py::gil_scoped_release release;
                j = run_matrix(cfg);
            }
            return to_python(j);
        },
        py::arg("scale") = "quick", py::arg("master_seed") = 20240601, py::arg("threads") = 1);
}
