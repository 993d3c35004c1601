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

// State certification testers.
//
// Every tester estimates a nonnegative quantity mu with an unbiased estimator
// whose variance obeys Var <= b(mu)/n^2 + v(mu)/n, and distinguishes
// mu <= gamma * theta from mu > theta. With gap g = (1 - gamma) * theta the
// planner picks
//
//   n = ceil(C * max(sqrt(b(theta)) / g, v(theta) / g^2))
//
// and the decision rule reports Close iff the estimate is <= (1 + gamma)/2 * theta.
// Chebyshev at the midpoint gives error <= 4 (b/n^2 + v/n) / g^2, which is
// at most 4/C^2 + 4/C; C = 6 + 4 sqrt(3) makes that exactly 1/3.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "certikit/chisq.hpp"
#include "certikit/densesim.hpp"
#include "certikit/schurweyl.hpp"
#include "certikit/states.hpp"

namespace certikit {

/// Planner constant for which the Chebyshev guarantee is exactly 1/3.
inline const double kChebyshevC = 6.0 + 4.0 * std::sqrt(3.0);
/// Squared-scale closeness factor for testers quoted on distances (0.99^2).
inline constexpr double kDistanceGamma = 0.9801;
inline constexpr double kDivergenceGamma = 0.99;
/// Depolarization strength per unit eps in the fidelity tester:
/// ((sqrt(0.5) - sqrt(0.495)) / 2)^2 / 2.
double default_fidelity_c();
/// Minimum eigenvalue of sigma, in units of eps^2 / d, accepted by the
/// chi-squared tester.
inline constexpr double kDefaultConditionFloor = 1e-3;
/// c = 1 / (1 + 1/sqrt(2)) from the low-rank trace reduction.
double low_rank_c();

// ---------------------------------------------------------------------------
// Planner.

struct EstimatorProfile {
    std::string name;
    std::function<double(double)> b;
    std::function<double(double)> v;
};

EstimatorProfile mixedness_profile();                   // b = 4, v = 4 mu
EstimatorProfile hs_profile();                          // b = 16, v = 8 mu
EstimatorProfile chisq_profile(int d, double delta);    // envelopes of chi_var_bound

/// Checks that b, v, mu^2/b and mu^2/v are nondecreasing on a grid covering
/// (0, 16 theta]; throws BadProfile otherwise.
void validate_profile(const EstimatorProfile& p, double theta);

struct TestPlan {
    std::int64_t n = 0;
    double theta = 0;
    double gamma = kDivergenceGamma;
    double C = 0;
    double guaranteed_error = 1;
    std::string profile;

    double threshold() const { return 0.5 * (1.0 + gamma) * theta; }
};

/// Throws BadTheta unless theta > 0 is finite, BadGamma unless 0 < gamma < 1.
TestPlan plan_samples(const EstimatorProfile& p, double theta, double gamma, double C);
/// 4 (b/n^2 + v/n) / ((1-gamma) theta)^2, capped at 1.
double envelope_error(const EstimatorProfile& p, double theta, double gamma, std::int64_t n);
/// Chebyshev bound on the chance that an estimator with the given exact mean
/// and variance lands on the wrong side of the threshold (capped at 1).
double certified_error(double mean, double variance, double threshold);

enum class Verdict { Close, Far };
const char* to_string(Verdict v);

struct TestVerdict {
    Verdict verdict = Verdict::Close;
    double statistic = 0;
    TestPlan plan;
    std::int64_t copies_used = 0;
    std::uint64_t seed = 0;
    std::optional<double> guaranteed_error;

    /// {"verdict","statistic","n","theta","guaranteed_error","copies_used","seed"}.
    std::string to_json() const;
};

/// Close iff xbar <= (1 + gamma)/2 * theta.
TestVerdict decide(double xbar, const TestPlan& plan);

// ---------------------------------------------------------------------------
// Testers.

enum class Backend { Rsk, Dense, Analytic, Pinched };
const char* to_string(Backend b);
/// "rsk", "dense", "analytic", "pinched"; InvalidArgument otherwise.
Backend parse_backend(const std::string& s);

enum class TestKind { Mixedness, HilbertSchmidt, Trace, LowRank, ChiSquared, Fidelity, Diagonal };
const char* to_string(TestKind k);
/// "mixedness", "hs", "trace", "lowrank", "chisq", "fidelity", "diagonal".
TestKind parse_test_kind(const std::string& s);

struct TesterOptions {
    Backend backend = Backend::Rsk;
    std::optional<double> C;        // planner constant (kChebyshevC when absent)
    std::optional<std::int64_t> n;  // overrides the planner's n
    int batches = 1;                // odd; > 1 takes a majority vote
    int rank = 0;                   // k for the low-rank test
    std::int64_t dense_cap = kDefaultDenseCap;
    double fidelity_c = default_fidelity_c();
    double condition_floor = kDefaultConditionFloor;
};

/// A tester bound to fixed inputs. Construction plans n and precomputes any
/// exact law; run() is const and thread-safe, drawing only from `rng`.
class Tester {
   public:
    virtual ~Tester() = default;
    virtual TestVerdict run(Rng& rng) const = 0;
    const TestPlan& plan() const { return plan_; }
    TestKind kind() const { return kind_; }
    Backend backend() const { return opts_.backend; }
    /// Copies of the unknown state(s) consumed by one run().
    virtual std::int64_t copies_per_run() const;
    /// Exact value of the estimated quantity.
    double true_mean() const { return true_mean_; }
    /// Exact variance of one (unamplified) statistic, when known.
    std::optional<double> theoretical_variance() const { return variance_; }
    /// Close / Far when the inputs lie in the corresponding promise region.
    std::optional<Verdict> ground_truth() const { return truth_; }

   protected:
    Tester(TestKind kind, TesterOptions opts) : kind_(kind), opts_(std::move(opts)) {}
    /// Majority vote over opts.batches draws of one_statistic.
    TestVerdict amplify(Rng& rng, const std::function<double(Rng&)>& one_statistic) const;

    TestKind kind_;
    TesterOptions opts_;
    TestPlan plan_;
    double true_mean_ = 0;
    std::optional<double> variance_;
    std::optional<Verdict> truth_;
};

std::unique_ptr<Tester> make_mixedness_tester(const DensityMatrix& rho, double eps, const TesterOptions& opts);
std::unique_ptr<Tester> make_hs_tester(const DensityMatrix& rho, const DensityMatrix& sigma, double eps,
                                       const TesterOptions& opts);
std::unique_ptr<Tester> make_trace_tester(const DensityMatrix& rho, const DensityMatrix& sigma, double eps,
                                          const TesterOptions& opts);
std::unique_ptr<Tester> make_low_rank_tester(const DensityMatrix& rho, const DensityMatrix& sigma, double eps,
                                             const TesterOptions& opts);
std::unique_ptr<Tester> make_chisq_tester(const DensityMatrix& rho, const DensityMatrix& sigma, double eps,
                                          const TesterOptions& opts);
std::unique_ptr<Tester> make_fidelity_tester(const DensityMatrix& rho, const DensityMatrix& sigma, double eps,
                                             const TesterOptions& opts);
std::unique_ptr<Tester> make_diagonal_tester(const DensityMatrix& rho, double eps, const TesterOptions& opts);

/// Dispatch on kind; sigma is ignored by the single-state tests.
std::unique_ptr<Tester> make_tester(TestKind kind, const DensityMatrix& rho, const DensityMatrix* sigma, double eps,
                                    const TesterOptions& opts);

// One-shot conveniences.
TestVerdict test_maximally_mixed(const DensityMatrix& rho, double eps, const TesterOptions& opts, Rng& rng);
TestVerdict test_hs_two_state(const DensityMatrix& rho, const DensityMatrix& sigma, double eps,
                              const TesterOptions& opts, Rng& rng);
TestVerdict test_trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma, double eps,
                                const TesterOptions& opts, Rng& rng);
TestVerdict test_low_rank(const DensityMatrix& rho, const DensityMatrix& sigma, double eps, const TesterOptions& opts,
                          Rng& rng);
TestVerdict test_chisq_known_sigma(const DensityMatrix& rho, const DensityMatrix& sigma, double eps,
                                   const TesterOptions& opts, Rng& rng);
TestVerdict test_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma, double eps, const TesterOptions& opts,
                          Rng& rng);
TestVerdict test_diagonal(const DensityMatrix& rho, double eps, const TesterOptions& opts, Rng& rng);

/// Planner output of the fidelity tester at the worst-case conditioning
/// delta = c eps / d that depolarization guarantees.
TestPlan fidelity_worst_case_plan(int d, double eps, double C, double fidelity_c = default_fidelity_c());

/// Exact variance of the classical collision statistic
/// sum_i x_i (x_i - 1) / (n (n-1) beta_i) - 1 for x ~ Multinomial(n, p).
double pinched_chisq_variance(std::span<const double> p, std::span<const double> beta, std::int64_t n);

/// Multinomial(n, p) counts by sequential binomial splitting (O(d) per draw).
std::vector<std::int64_t> sample_multinomial(std::span<const double> p, std::int64_t n, Rng& rng);

/// The matrix-analysis fact behind the low-rank reduction, evaluated on one pair.
struct PcaCheck {
    double delta = 0;          // 1 - (sum of the k largest eigenvalues of sigma)
    double hs = 0;             // D_HS(rho, sigma)
    double trace = 0;          // D_tr(rho, sigma)
    bool hypothesis = false;   // hs <= c eps / sqrt(k)
    bool conclusion = false;   // trace <= delta + eps
};
PcaCheck verify_pca_inequality(const DensityMatrix& rho, const DensityMatrix& sigma, int k, double eps);

}  // namespace certikit
