#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "expcircle/circle_map.hpp"
#include "expcircle/correlation_suite.hpp"
#include "expcircle/coupling_lab.hpp"
#include "expcircle/errors.hpp"
#include "expcircle/inverse_branches.hpp"
#include "expcircle/system_constants.hpp"
#include "expcircle/transfer_operator.hpp"

namespace py = pybind11;
using namespace expcircle;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

GridFunction to_grid(const Array& a) {
    if (a.ndim() != 1) throw InvalidGrid("expected a one-dimensional array of node values");
    return GridFunction(std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const GridFunction& f) {
    Array out(static_cast<py::ssize_t>(f.resolution()));
    std::copy(f.values().begin(), f.values().end(), out.mutable_data());
    return out;
}

py::dict ledger_dict(const ConstantsLedger& l) {
    py::dict d;
    d["alpha"] = l.alpha;
    d["lambda"] = l.lambda;
    d["omega"] = l.omega;
    d["a"] = l.a;
    d["K"] = l.K;
    d["N_K"] = l.N_K;
    d["n_k_paper_raw"] = l.n_k_paper_raw;
    d["D_exact"] = l.D_exact;
    d["D_relaxed"] = l.D_relaxed;
    d["D_tilde"] = l.D_tilde;
    d["theta_exact"] = l.theta_exact;
    d["theta_paper"] = l.theta_paper;
    d["C"] = l.C;
    d["lower_floor"] = l.lower_floor;
    return d;
}

}  // namespace

PYBIND11_MODULE(_expcircle, m) {
    m.doc() = "Transfer operators of smooth expanding circle maps";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<MapError>(m, "MapError", base.ptr());
    py::register_exception<NoConvergence>(m, "NoConvergence", base.ptr());
    py::register_exception<NotInvariant>(m, "NotInvariant", base.ptr());
    py::register_exception<FloorViolation>(m, "FloorViolation", base.ptr());
    py::register_exception<InvalidAlpha>(m, "InvalidAlpha", base.ptr());

    py::class_<ExpandingMap>(m, "ExpandingMap")
        .def_static("linear", &ExpandingMap::linear, py::arg("w"))
        .def_static("perturbed", &ExpandingMap::perturbed, py::arg("w"), py::arg("eps"))
        .def_property_readonly("winding", &ExpandingMap::winding)
        .def_property_readonly("lam", &ExpandingMap::lambda)
        .def_property_readonly("d2_sup", &ExpandingMap::d2_sup)
        .def("__call__", [](const ExpandingMap& map, double x) { return map.evaluate(CirclePoint(x)).value(); })
        .def("derivative", &ExpandingMap::derivative)
        .def("second_derivative", &ExpandingMap::second_derivative)
        .def("preimages", [](const ExpandingMap& map, double x) {
            std::vector<double> out;
            for (const auto& p : preimages(map, CirclePoint(x))) out.push_back(p.point.value());
            return out;
        })
        .def("__repr__", &ExpandingMap::describe);

    py::class_<TransferOperator>(m, "TransferOperator")
        .def(py::init<ExpandingMap, std::size_t>(), py::arg("map"), py::arg("resolution") = kDefaultResolution)
        .def_property_readonly("resolution", &TransferOperator::resolution)
        .def("apply", [](const TransferOperator& op, const Array& u) { return to_array(op.apply(to_grid(u))); },
             "Linear application to node values, without renormalization.")
        .def("apply_density",
             [](const TransferOperator& op, const Array& u) {
                 return to_array(op.apply(GridDensity::normalize(to_grid(u))).function());
             });

    m.def(
        "invariant_density",
        [](const TransferOperator& op, double tol, int max_iter) {
            const auto r = invariant_density(op, tol, max_iter);
            return py::make_tuple(to_array(r.density.function()), r.diagnostics.n_steps, r.diagnostics.residual);
        },
        py::arg("op"), py::arg("tol") = kInvariantTolerance, py::arg("max_iter") = kInvariantMaxIterations,
        "Returns (density, steps, residual).");

    m.def(
        "constants", [](const ExpandingMap& map, double alpha) { return ledger_dict(compute_ledger(map, alpha)); },
        py::arg("map"), py::arg("alpha") = 1.0);

    m.def("integrate", [](const Array& f) { return integrate(to_grid(f)); });
    m.def("holder_coefficient", [](const Array& f, double alpha) { return holder_coefficient(to_grid(f), alpha); },
          py::arg("f"), py::arg("alpha") = 1.0);

    m.def(
        "correlation_series",
        [](const TransferOperator& op, const Array& phi, const Array& f, const Array& g, int n_max) {
            return correlation_series(op, GridDensity::normalize(to_grid(phi)), to_grid(f), to_grid(g), n_max);
        },
        py::arg("op"), py::arg("phi"), py::arg("f"), py::arg("g"), py::arg("n_max"));

    m.def(
        "decay_report",
        [](const TransferOperator& op, const Array& f, const Array& g, double alpha, int n_max) {
            const auto r = decay_report(op, to_grid(f), to_grid(g), alpha, n_max);
            py::list rows;
            for (const auto& row : r.rows) {
                py::dict d;
                d["n"] = row.n;
                d["corr"] = row.corr;
                d["bound"] = row.bound;
                d["ok"] = row.ok;
                rows.append(d);
            }
            py::dict out;
            out["rows"] = rows;
            out["ok"] = r.ok;
            out["fitted_rate"] = r.fitted_rate;
            return out;
        },
        py::arg("op"), py::arg("f"), py::arg("g"), py::arg("alpha") = 1.0, py::arg("n_max") = kDefaultDecaySteps);

    m.def(
        "monte_carlo_coupling",
        [](const TransferOperator& op, const Array& psi1, const Array& psi2, double alpha, int n_max,
           std::size_t trials, std::uint64_t seed) {
            const auto t = monte_carlo_coupling(op, GridDensity::normalize(to_grid(psi1)),
                                                GridDensity::normalize(to_grid(psi2)), alpha, n_max, trials, seed);
            py::dict out;
            out["csv"] = t.to_csv();
            out["ok"] = t.ok;
            std::vector<double> mismatch, tv;
            for (const auto& row : t.rows) {
                mismatch.push_back(row.empirical_mismatch);
                tv.push_back(row.tv_true);
            }
            out["empirical_mismatch"] = mismatch;
            out["tv_true"] = tv;
            return out;
        },
        py::arg("op"), py::arg("psi1"), py::arg("psi2"), py::arg("alpha"), py::arg("n_max"),
        py::arg("trials") = 100000, py::arg("seed") = 42);
}
