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

#pragma once

// Experiment plumbing: state specs, seeded Monte Carlo runs, reports,
// invariant suites, point estimates and calibration of the planner constant.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "certikit/certify.hpp"

namespace certikit {

// ---------------------------------------------------------------------------
// State specs.

/// Resolves a state spec. Accepted forms:
///   shorthand   "mixed:8", "paninski:8:0.2", "random:4:2:17" (d, rank, seed),
///               "pure:4:1" (basis vector 1), "diag:0.5,0.3,0.2"
///   inline JSON {"generator": {"name": "paninski", "d": 4, "eps": 0.25}}
///               {"matrix": {"re": [[...]], "im": [[...]]}}   (im optional)
///   a path to a file holding the JSON form.
/// Malformed specs throw InvalidArgument; invalid matrices throw the
/// validation error (NotHermitian, NotPSD, TraceNotOne).
DensityMatrix load_state(const std::string& spec);

/// The {"matrix": {"re": ..., "im": ...}} JSON text of a state.
std::string state_to_json(const DensityMatrix& rho);

/// Worker count: CERTIKIT_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
int worker_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t)>& body);

// ---------------------------------------------------------------------------
// Experiments.

struct ExperimentConfig {
    TestKind test = TestKind::Mixedness;
    std::string state;
    std::optional<std::string> sigma;
    std::optional<double> eps;
    std::int64_t trials = 1;
    std::optional<std::uint64_t> seed;
    std::optional<Backend> backend;  // default depends on the test and inputs
    std::optional<double> C;
    std::optional<std::int64_t> n;
    int batches = 1;
    int rank = 0;
    std::optional<std::string> constants;  // constants file supplying C
    std::optional<std::string> out;        // report path (.json; CSV alongside)
    bool timing = false;                   // include wall_time in the summary

    /// Parses the JSON config schema; unknown keys throw InvalidArgument.
    static ExperimentConfig from_json(const std::string& text);
    std::string to_json() const;
    /// trials >= 1, seed present, eps present and in (0, 1], batches odd.
    void validate() const;
};

/// Backend used when the config names none: rsk for mixedness, rsk for the
/// distance tests on diagonal pairs, pinched for the divergence tests when rho
/// is diagonal (and sigma diagonal), analytic otherwise.
Backend default_backend(TestKind kind, const DensityMatrix& rho, const DensityMatrix* sigma);

struct TrialRow {
    std::int64_t trial = 0;
    Verdict verdict = Verdict::Close;
    double statistic = 0;
    std::int64_t copies = 0;
    std::uint64_t seed = 0;
};

struct ExperimentSummary {
    std::int64_t trials = 0;
    std::optional<Verdict> ground_truth;
    std::optional<double> error_rate;  // vs ground_truth
    std::int64_t close_count = 0;
    double mean_statistic = 0;
    double empirical_variance = 0;  // unbiased sample variance of the statistic
    std::optional<double> theoretical_variance;
    double true_mean = 0;
    std::int64_t copies_total = 0;
    std::optional<double> wall_time;  // seconds; only with timing
};

struct ExperimentReport {
    ExperimentConfig config;
    Backend backend = Backend::Rsk;
    TestPlan plan;
    std::vector<TrialRow> rows;  // ordered by trial id
    ExperimentSummary summary;

    /// Header trial,verdict,statistic,copies,seed then one row per trial.
    std::string to_csv() const;
    /// {"schema": 1, "config", "backend", "plan", "summary"}.
    std::string to_json() const;
};

/// Runs the configured trials. Trial t draws from make_stream(seed, t).
ExperimentReport run_experiment(const ExperimentConfig& config, int threads = 0);

/// Writes report.to_json() to `path` and report.to_csv() next to it (the
/// extension replaced by .csv).
void write_report(const ExperimentReport& report, const std::string& path);

/// C for `profile` ("mixedness", "hs", "chisq") from a constants file.
double load_calibrated_C(const std::string& path, const std::string& profile);
/// Profile name used to plan the given test.
std::string profile_for(TestKind kind);
/// Default constants file shipped with the source tree.
std::string default_constants_path();

// ---------------------------------------------------------------------------
// Invariant suites.

struct IdentityCheck {
    std::string suite;
    std::string identity;
    int cases = 0;
    double worst_residual = 0;
    double tolerance = 0;
    bool passed() const { return worst_residual <= tolerance; }
};

struct SuiteReport {
    std::vector<IdentityCheck> checks;
    bool ok() const;
    /// One line per identity: suite, identity, cases, worst residual, PASS/FAIL.
    std::string to_text() const;
};

/// Suites: "distances", "symalg", "schurweyl", "chisq", "all"; anything else
/// throws SuiteUnknown. `tolerance` overrides each identity's default.
SuiteReport run_verify_suite(const std::string& suite, std::optional<double> tolerance = std::nullopt);
std::vector<std::string> verify_suite_names();

// ---------------------------------------------------------------------------
// Point estimates.

struct EstimateConfig {
    std::string quantity;  // purity, overlap, hs, bures-chisq
    std::string state;
    std::optional<std::string> sigma;
    std::int64_t copies = 0;  // per state
    std::uint64_t seed = 0;
    std::optional<Backend> backend;
};

struct EstimateResult {
    std::string quantity;
    double estimate = 0;
    std::optional<double> sd;  // theoretical standard deviation
    double exact = 0;          // true value of the quantity
    std::int64_t copies = 0;
    Backend backend = Backend::Rsk;

    /// e.g. "purity = 0.1249 +/- 0.0011 (exact 0.125, n = 2000, rsk)".
    std::string to_text() const;
    std::string to_json() const;
};

/// purity: weak Schur sampling via RSK (any state). overlap / hs: dense
/// (lambda, mu, nu) sampling for n <= 4, or for hs on diagonal pairs the
/// known-reference estimator via RSK. bures-chisq: pinched multinomial
/// sampling when rho commutes with sigma, dense otherwise.
EstimateResult run_estimate(const EstimateConfig& config);

// ---------------------------------------------------------------------------
// Calibration.

struct CalibrationConfig {
    std::string profile = "mixedness";  // mixedness, hs, chisq
    double target_error = 1.0 / 3.0;
    double margin = 0.05;
    double c_min = 0.02;
    double c_max = 0;  // 0 means kChebyshevC
    int grid_points = 24;
    std::int64_t trials = 400;  // per arm and grid point
    std::uint64_t seed = 1;
    int d = 8;
    double eps = 0.12;

    /// "min:max:points", e.g. "0.02:12.93:24".
    void set_grid(const std::string& spec);
};

struct CalibrationPoint {
    double C = 0;
    std::int64_t n = 0;
    double close_error = 0;  // wrong verdicts on the gamma * theta instance
    double far_error = 0;    // wrong verdicts on the theta instance
};

struct CalibrationResult {
    CalibrationConfig config;
    double C = 0;
    std::vector<CalibrationPoint> sweep;  // grid points visited, ascending

    std::string to_json() const;
};

/// Sweeps C upward over a geometric grid on the two boundary instances of the
/// profile and returns the first C whose error on both is at most
/// target - margin. Throws GridExhausted when target - margin <= 0 or no grid
/// point qualifies.
CalibrationResult calibrate(const CalibrationConfig& config, int threads = 0);

/// Merges the result into a constants file (creating it when absent).
void write_constants(const CalibrationResult& result, const std::string& path);

}  // namespace certikit
