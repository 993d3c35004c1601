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

// certikit command-line tool. Exit codes: 0 success, 2 configuration or I/O
// error, 3 numerical failure (including failed verification identities).

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "certikit/harness.hpp"
#include "json.hpp"

namespace {

using namespace certikit;

constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

void report_error(const std::string& kind, const std::string& message) {
    nlohmann::ordered_json j{{"error", kind}, {"message", message}};
    std::cerr << j.dump() << "\n";
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::InvalidArgument, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CertifyArgs {
    std::string config, test, state, sigma, backend, constants, out;
    std::optional<double> eps, C;
    std::optional<std::int64_t> trials, n;
    std::optional<std::uint64_t> seed;
    std::optional<int> batches, rank;
    bool timing = false;
};

int do_certify(const CertifyArgs& a) {
    ExperimentConfig c;
    if (!a.config.empty()) c = ExperimentConfig::from_json(slurp(a.config));
    if (!a.test.empty()) c.test = parse_test_kind(a.test);
    else if (a.config.empty()) fail(ErrorKind::InvalidArgument, "--test is required");
    if (!a.state.empty()) c.state = a.state;
    if (!a.sigma.empty()) c.sigma = a.sigma;
    if (a.eps) c.eps = a.eps;
    if (a.trials) c.trials = *a.trials;
    if (a.seed) c.seed = a.seed;
    if (!a.backend.empty()) c.backend = parse_backend(a.backend);
    if (a.C) c.C = a.C;
    if (a.n) c.n = a.n;
    if (a.batches) c.batches = *a.batches;
    if (a.rank) c.rank = *a.rank;
    if (!a.constants.empty()) c.constants = a.constants;
    if (!a.out.empty()) c.out = a.out;
    if (a.timing) c.timing = true;
    const ExperimentReport rep = run_experiment(c);
    if (c.out) write_report(rep, *c.out);
    std::cout << rep.to_json();
    return 0;
}

int do_verify(const std::string& suite, std::optional<double> tol) {
    const SuiteReport rep = run_verify_suite(suite, tol);
    std::cout << rep.to_text();
    if (!rep.ok()) {
        std::cerr << "verification failed\n";
        return kNumericalFailure;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certikit: quantum state certification testers and simulators"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "certikit 0.1.0");

    CertifyArgs ca;
    auto* certify = app.add_subcommand("certify", "run a seeded certification experiment");
    certify->add_option("--config", ca.config, "JSON experiment config (flags override it)");
    certify->add_option("--test", ca.test, "mixedness, hs, trace, lowrank, chisq, fidelity, diagonal");
    certify->add_option("--state", ca.state, "state spec: shorthand, inline JSON, or file");
    certify->add_option("--sigma", ca.sigma, "reference state spec");
    certify->add_option("--eps", ca.eps, "distance parameter");
    certify->add_option("--trials", ca.trials, "number of trials (default 1)");
    certify->add_option("--seed", ca.seed, "master seed");
    certify->add_option("--backend", ca.backend, "rsk, dense, analytic, pinched");
    certify->add_option("--C", ca.C, "planner constant");
    certify->add_option("--n", ca.n, "override the planned number of copies");
    certify->add_option("--batches", ca.batches, "odd number of batches for a majority vote");
    certify->add_option("--rank", ca.rank, "k for the low-rank test");
    certify->add_option("--constants", ca.constants, "constants file with a calibrated C");
    certify->add_option("--out", ca.out, "report path (.json; CSV written alongside)");
    certify->add_flag("--timing", ca.timing, "record wall time in the report");

    std::string suite = "all";
    std::optional<double> tolerance;
    auto* verify = app.add_subcommand("verify", "evaluate the invariant suites");
    verify->add_option("--suite", suite, "distances, symalg, schurweyl, chisq, all");
    verify->add_option("--tolerance", tolerance, "override every identity's tolerance");

    EstimateConfig ec;
    std::string est_backend;
    bool est_json = false;
    auto* estimate = app.add_subcommand("estimate", "point estimate with its theoretical standard deviation");
    estimate->add_option("--quantity", ec.quantity, "purity, overlap, hs, bures-chisq")->required();
    estimate->add_option("--state", ec.state, "state spec")->required();
    estimate->add_option("--sigma", ec.sigma, "second state spec");
    estimate->add_option("--copies", ec.copies, "copies per state")->required();
    estimate->add_option("--seed", ec.seed, "seed")->required();
    estimate->add_option("--backend", est_backend, "rsk, dense, pinched");
    estimate->add_flag("--json", est_json, "print JSON");

    CalibrationConfig cc;
    std::string grid, cal_out;
    auto* cal = app.add_subcommand("calibrate", "find the smallest planner constant meeting a target error");
    cal->add_option("--profile", cc.profile, "mixedness, hs, chisq");
    cal->add_option("--target-error", cc.target_error, "target error per arm (default 1/3)");
    cal->add_option("--margin", cc.margin, "safety margin subtracted from the target (default 0.05)");
    cal->add_option("--grid", grid, "geometric grid min:max:points");
    cal->add_option("--trials", cc.trials, "trials per arm and grid point (default 400)");
    cal->add_option("--seed", cc.seed, "seed (default 1)");
    cal->add_option("--d", cc.d, "dimension of the boundary instances (default 8)");
    cal->add_option("--eps", cc.eps, "eps of the boundary instances (default 0.12)");
    cal->add_option("--out", cal_out, "constants file to update");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error("UsageError", e.what());
        return kConfigError;
    }

    try {
        if (certify->parsed()) return do_certify(ca);
        if (verify->parsed()) return do_verify(suite, tolerance);
        if (estimate->parsed()) {
            if (!est_backend.empty()) ec.backend = parse_backend(est_backend);
            const EstimateResult r = run_estimate(ec);
            std::cout << (est_json ? r.to_json() : r.to_text()) << "\n";
            return 0;
        }
        if (cal->parsed()) {
            if (!grid.empty()) cc.set_grid(grid);
            const CalibrationResult r = calibrate(cc);
            if (!cal_out.empty()) write_constants(r, cal_out);
            std::cout << r.to_json() << "\n";
            return 0;
        }
    } catch (const Error& e) {
        report_error(to_string(e.kind()), e.what());
        return is_numerical(e.kind()) ? kNumericalFailure : kConfigError;
    } catch (const std::exception& e) {
        report_error("InvalidArgument", e.what());
        return kConfigError;
    }
    return kConfigError;
}
