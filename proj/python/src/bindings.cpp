// Copyright 2026 The certikit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "certikit/harness.hpp"

namespace py = pybind11;
using namespace certikit;

namespace {

py::dict plan_dict(const TestPlan& p) {
    py::dict d;
    d["n"] = p.n;
    d["theta"] = p.theta;
    d["gamma"] = p.gamma;
    d["C"] = p.C;
    d["threshold"] = p.threshold();
    d["guaranteed_error"] = p.guaranteed_error;
    d["profile"] = p.profile;
    return d;
}

py::dict verdict_dict(const TestVerdict& v) {
    py::dict d;
    d["verdict"] = to_string(v.verdict);
    d["statistic"] = v.statistic;
    d["n"] = v.plan.n;
    d["theta"] = v.plan.theta;
    d["guaranteed_error"] = v.guaranteed_error ? py::object(py::float_(*v.guaranteed_error)) : py::none();
    d["copies_used"] = v.copies_used;
    d["seed"] = v.seed;
    return d;
}

TesterOptions options(const std::string& backend, std::optional<double> C, std::optional<std::int64_t> n, int batches,
                      int rank) {
    TesterOptions o;
    o.backend = parse_backend(backend);
    o.C = C;
    o.n = n;
    o.batches = batches;
    o.rank = rank;
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "certikit native core";
    // Leaked on purpose: the type must outlive every translator call.
    static auto* error = new py::exception<Error>(m, "CertikitError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object type = py::reinterpret_borrow<py::object>(error->ptr());
            py::object exc = type(e.what());
            exc.attr("kind") = to_string(e.kind());
            PyErr_SetObject(type.ptr(), exc.ptr());
        }
    });

    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def(py::init([](const Matrix& a) { return validate_state(a); }), py::arg("matrix"))
        .def_property_readonly("dim", &DensityMatrix::dim)
        .def_property_readonly("matrix", [](const DensityMatrix& r) { return Matrix(r.matrix()); })
        .def_property_readonly("spectrum", [](const DensityMatrix& r) { return r.spectrum().values; })
        .def("is_diagonal", &DensityMatrix::is_diagonal, py::arg("tol") = 1e-12)
        .def("to_json", &state_to_json)
        .def("__repr__", [](const DensityMatrix& r) { return "<DensityMatrix d=" + std::to_string(r.dim()) + ">"; });

    m.def("load_state", &load_state, py::arg("spec"), "Resolve a shorthand, inline JSON or file state spec.");
    m.def("maximally_mixed", &maximally_mixed, py::arg("d"));
    m.def("paninski", &paninski, py::arg("d"), py::arg("eps"));
    m.def("random_state", &random_state, py::arg("d"), py::arg("rank"), py::arg("seed"));
    m.def("depolarize", &depolarize, py::arg("rho"), py::arg("eta"));

    m.def("trace_distance", &trace_distance);
    m.def("hs_distance", &hs_distance);
    m.def("fidelity", &fidelity);
    m.def("bures_sq", &bures_sq);
    m.def("bures_chisq", [](const DensityMatrix& r, const DensityMatrix& s) { return bures_chisq(r, s); });

    py::class_<Tester>(m, "Tester")
        .def("run",
             [](const Tester& t, std::uint64_t seed, std::uint64_t stream) {
                 Rng rng = make_stream(seed, stream);
                 py::gil_scoped_release release;
                 TestVerdict v = t.run(rng);
                 v.seed = stream_key(seed, stream);
                 py::gil_scoped_acquire acquire;
                 return verdict_dict(v);
             },
             py::arg("seed"), py::arg("stream") = 0)
        .def_property_readonly("plan", [](const Tester& t) { return plan_dict(t.plan()); })
        .def_property_readonly("kind", [](const Tester& t) { return std::string(to_string(t.kind())); })
        .def_property_readonly("backend", [](const Tester& t) { return std::string(to_string(t.backend())); })
        .def_property_readonly("copies_per_run", &Tester::copies_per_run)
        .def_property_readonly("true_mean", &Tester::true_mean)
        .def_property_readonly("theoretical_variance", &Tester::theoretical_variance)
        .def_property_readonly("ground_truth", [](const Tester& t) -> std::optional<std::string> {
            if (auto g = t.ground_truth()) return std::string(to_string(*g));
            return std::nullopt;
        });

    m.def(
        "make_tester",
        [](const std::string& kind, const DensityMatrix& rho, std::optional<DensityMatrix> sigma, double eps,
           const std::string& backend, std::optional<double> C, std::optional<std::int64_t> n, int batches, int rank) {
            return make_tester(parse_test_kind(kind), rho, sigma ? &*sigma : nullptr, eps,
                               options(backend, C, n, batches, rank));
        },
        py::arg("kind"), py::arg("rho"), py::arg("sigma") = py::none(), py::kw_only(), py::arg("eps"),
        py::arg("backend") = "rsk", py::arg("C") = py::none(), py::arg("n") = py::none(), py::arg("batches") = 1,
        py::arg("rank") = 0);

    m.def(
        "run_experiment_json",
        [](const std::string& config, int threads) {
            const ExperimentConfig c = ExperimentConfig::from_json(config);
            ExperimentReport rep;
            {
                py::gil_scoped_release release;
                rep = run_experiment(c, threads);
            }
            if (c.out) write_report(rep, *c.out);
            return py::make_tuple(rep.to_json(), rep.to_csv());
        },
        py::arg("config"), py::arg("threads") = 0);

    m.def(
        "verify",
        [](const std::string& suite, std::optional<double> tolerance) {
            py::list out;
            for (const auto& c : run_verify_suite(suite, tolerance).checks) {
                py::dict d;
                d["suite"] = c.suite;
                d["identity"] = c.identity;
                d["cases"] = c.cases;
                d["worst_residual"] = c.worst_residual;
                d["tolerance"] = c.tolerance;
                d["passed"] = c.passed();
                out.append(d);
            }
            return out;
        },
        py::arg("suite") = "all", py::arg("tolerance") = py::none());

    m.def(
        "estimate_json",
        [](const std::string& quantity, const std::string& state, std::optional<std::string> sigma,
           std::int64_t copies, std::uint64_t seed, std::optional<std::string> backend) {
            EstimateConfig c{quantity, state, sigma, copies, seed, std::nullopt};
            if (backend) c.backend = parse_backend(*backend);
            return run_estimate(c).to_json();
        },
        py::arg("quantity"), py::arg("state"), py::arg("sigma") = py::none(), py::kw_only(), py::arg("copies"),
        py::arg("seed"), py::arg("backend") = py::none());

    m.def(
        "calibrate_json",
        [](const std::string& profile, double target_error, double margin, std::optional<std::string> grid,
           std::int64_t trials, std::uint64_t seed, int d, double eps, std::optional<std::string> out) {
            CalibrationConfig c;
            c.profile = profile;
            c.target_error = target_error;
            c.margin = margin;
            if (grid) c.set_grid(*grid);
            c.trials = trials;
            c.seed = seed;
            c.d = d;
            c.eps = eps;
            CalibrationResult r;
            {
                py::gil_scoped_release release;
                r = calibrate(c);
            }
            if (out) write_constants(r, *out);
            return r.to_json();
        },
        py::arg("profile") = "mixedness", py::arg("target_error") = 1.0 / 3.0, py::arg("margin") = 0.05,
        py::arg("grid") = py::none(), py::arg("trials") = 400, py::arg("seed") = 1, py::arg("d") = 8,
        py::arg("eps") = 0.12, py::arg("out") = py::none());

    m.attr("CHEBYSHEV_C") = kChebyshevC;
    m.attr("__version__") = "0.1.0";
}
