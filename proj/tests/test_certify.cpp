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

#include "certikit/certify.hpp"

#include <cmath>

#include "json.hpp"
#include "test_util.hpp"

namespace certikit {
namespace {

using testing::rand_diag_state;
using testing::rand_state;

// rho on the segment from sigma towards tau with D_HS(rho, sigma) = target.
DensityMatrix at_hs_distance(const DensityMatrix& sigma, const DensityMatrix& tau, double target) {
    const double full = hs_distance(sigma, tau);
    const double t = target / full;
    EXPECT_LE(t, 1.0);
    return validate_state((1 - t) * sigma.matrix() + t * tau.matrix());
}

DensityMatrix at_trace_distance(const DensityMatrix& sigma, const DensityMatrix& tau, double target) {
    const double t = target / trace_distance(sigma, tau);
    EXPECT_LE(t, 1.0);
    return validate_state((1 - t) * sigma.matrix() + t * tau.matrix());
}

TesterOptions with_backend(Backend b) {
    TesterOptions o;
    o.backend = b;
    return o;
}

TEST(Decide, ThresholdRule) {
    TestPlan plan;
    plan.theta = 0.04;
    plan.gamma = 0.99;
    plan.n = 10;
    EXPECT_EQ(decide(0.0, plan).verdict, Verdict::Close);
    EXPECT_EQ(decide(plan.theta, plan).verdict, Verdict::Far);
    EXPECT_EQ(decide(0.995 * plan.theta, plan).verdict, Verdict::Close);
    EXPECT_EQ(decide(0.996 * plan.theta, plan).verdict, Verdict::Far);
}

TEST(Decide, ScaleConsistent) {
    Rng rng = make_stream(4, 0);
    for (int i = 0; i < 500; ++i) {
        TestPlan a, b;
        a.theta = 0.1 + uniform01(rng);
        a.gamma = b.gamma = 0.9801;
        const double s = std::pow(2.0, static_cast<int>(rng() % 21) - 10);
        b.theta = a.theta * s;
        const double x = 2 * a.theta * uniform01(rng);
        EXPECT_EQ(decide(x, a).verdict, decide(x * s, b).verdict);
    }
}

TEST(Planner, ErrorsAndScaling) {
    EXPECT_THROW_KIND(plan_samples(hs_profile(), 0.0, 0.99, kChebyshevC), ErrorKind::BadTheta);
    EXPECT_THROW_KIND(plan_samples(hs_profile(), -1.0, 0.99, kChebyshevC), ErrorKind::BadTheta);
    EXPECT_THROW_KIND(plan_samples(hs_profile(), 0.1, 1.0, kChebyshevC), ErrorKind::BadGamma);
    EXPECT_THROW_KIND(plan_samples(hs_profile(), 0.1, 0.0, kChebyshevC), ErrorKind::BadGamma);

    // HS: n = Theta(1/eps^2), so halving eps quadruples n.
    for (double eps : {0.05, 0.1, 0.25}) {
        auto a = plan_samples(hs_profile(), eps * eps, kDistanceGamma, kChebyshevC);
        auto b = plan_samples(hs_profile(), eps * eps / 4, kDistanceGamma, kChebyshevC);
        EXPECT_NEAR(static_cast<double>(b.n) / a.n, 4.0, 4.0 / a.n + 1e-9);
        EXPECT_LE(a.guaranteed_error, 1.0 / 3.0);
    }
    // Constant b, linear v: doubling theta roughly halves n.
    auto a = plan_samples(hs_profile(), 0.01, kDistanceGamma, kChebyshevC);
    auto b = plan_samples(hs_profile(), 0.02, kDistanceGamma, kChebyshevC);
    EXPECT_NEAR(static_cast<double>(a.n) / b.n, 2.0, 0.01);
}

TEST(Planner, ChiSquaredScalesAsDOverEpsSquared) {
    for (int d : {2, 4, 8, 16}) {
        for (double eps : {0.1, 0.2, 0.4}) {
            auto plan = plan_samples(chisq_profile(d, 1.0 / d), eps * eps, kDivergenceGamma, kChebyshevC);
            const double scaled = plan.n * eps * eps / d;
            EXPECT_GT(scaled, 1e3);
            EXPECT_LT(scaled, 1e7);
        }
    }
    auto small = plan_samples(chisq_profile(4, 0.25), 0.01, kDivergenceGamma, kChebyshevC);
    auto big = plan_samples(chisq_profile(8, 0.125), 0.01, kDivergenceGamma, kChebyshevC);
    EXPECT_GT(big.n, small.n);
}

TEST(Planner, ChebyshevGuaranteeOnSyntheticProfiles) {
    // Exact moments at the boundary of each region, variance equal to the envelope.
    for (double kb : {0.5, 4.0, 40.0}) {
        for (double kv : {0.1, 1.0, 10.0}) {
            for (double theta : {1e-3, 0.05, 0.7}) {
                for (double gamma : {0.5, 0.9801, 0.99}) {
                    EstimatorProfile p{"synthetic", [=](double) { return kb; }, [=](double mu) { return kv * mu; }};
                    auto plan = plan_samples(p, theta, gamma, kChebyshevC);
                    const double thr = plan.threshold();
                    const double nn = static_cast<double>(plan.n);
                    for (double mu : {0.0, gamma * theta, theta, 1.5 * theta, 10 * theta}) {
                        const double var = p.b(mu) / (nn * nn) + p.v(mu) / nn;
                        if (mu <= gamma * theta || mu > theta) {
                            EXPECT_LE(certified_error(mu, var, thr), 1.0 / 3.0 + 1e-12)
                                << kb << " " << kv << " " << theta << " " << gamma << " " << mu;
                        }
                    }
                    EXPECT_LE(plan.guaranteed_error, 1.0 / 3.0 + 1e-12);
                }
            }
        }
    }
}

TEST(Planner, GuaranteeNonincreasingInN) {
    auto p = mixedness_profile();
    double prev = 2;
    for (std::int64_t n = 2; n < 10000000; n = n * 3 / 2 + 1) {
        double e = envelope_error(p, 0.01, kDistanceGamma, n);
        EXPECT_LE(e, prev);
        prev = e;
    }
}

TEST(Planner, RejectsNonMonotoneProfiles) {
    EstimatorProfile bad{"bad", [](double) { return 1.0; }, [](double mu) { return 1.0 / (1.0 + mu); }};
    EXPECT_THROW_KIND(plan_samples(bad, 0.1, 0.9, kChebyshevC), ErrorKind::BadProfile);
    // v growing faster than mu^2 makes mu^2 / v decrease.
    EstimatorProfile steep{"steep", [](double) { return 1.0; }, [](double mu) { return mu * mu * mu; }};
    EXPECT_THROW_KIND(plan_samples(steep, 0.1, 0.9, kChebyshevC), ErrorKind::BadProfile);
    for (double theta : {1e-4, 0.01, 0.5}) {
        validate_profile(mixedness_profile(), theta);
        validate_profile(hs_profile(), theta);
        validate_profile(chisq_profile(5, 1e-3), theta);
    }
}

TEST(Verdict, JsonRecord) {
    TestPlan plan = plan_samples(hs_profile(), 0.01, kDistanceGamma, kChebyshevC);
    TestVerdict v = decide(0.5, plan);
    v.seed = 42;
    auto j = nlohmann::json::parse(v.to_json());
    EXPECT_EQ(j["verdict"], "far");
    EXPECT_EQ(j["n"], plan.n);
    EXPECT_EQ(j["seed"], 42);
    EXPECT_DOUBLE_EQ(j["theta"].get<double>(), 0.01);
    v.guaranteed_error.reset();
    EXPECT_TRUE(nlohmann::json::parse(v.to_json())["guaranteed_error"].is_null());
}

TEST(Names, RoundTrip) {
    for (auto s : {"rsk", "dense", "analytic", "pinched"}) EXPECT_EQ(to_string(parse_backend(s)), std::string(s));
    for (auto s : {"mixedness", "hs", "trace", "lowrank", "chisq", "fidelity", "diagonal"})
        EXPECT_EQ(to_string(parse_test_kind(s)), std::string(s));
    EXPECT_THROW_KIND(parse_backend("gpu"), ErrorKind::InvalidArgument);
}

TEST(Mixedness, AnalyticVerdicts) {
    auto opts = with_backend(Backend::Analytic);
    Rng rng = make_stream(0, 0);
    auto close = test_maximally_mixed(maximally_mixed(8), 0.2, opts, rng);
    EXPECT_EQ(close.verdict, Verdict::Close);
    EXPECT_LE(*close.guaranteed_error, 1.0 / 3.0);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
    psi(0) = 1;
    auto far = test_maximally_mixed(pure_state(psi), 0.5, opts, rng);
    EXPECT_EQ(far.verdict, Verdict::Far);
    EXPECT_LT(*far.guaranteed_error, 1e-3);
}

TEST(Mixedness, RskMonteCarlo) {
    TesterOptions opts;
    opts.C = 0.5;
    auto mixed = make_mixedness_tester(maximally_mixed(4), 0.15, opts);
    auto pan = make_mixedness_tester(paninski(4, 0.2), 0.15, opts);  // D_HS = 0.2
    EXPECT_EQ(mixed->ground_truth(), Verdict::Close);
    EXPECT_EQ(pan->ground_truth(), Verdict::Far);
    int wrong_close = 0, wrong_far = 0;
    const int trials = 60;
    double sum = 0;
    for (int t = 0; t < trials; ++t) {
        Rng a = make_stream(9, t), b = make_stream(10, t);
        auto v = mixed->run(a);
        sum += v.statistic;
        wrong_close += v.verdict != Verdict::Close;
        wrong_far += pan->run(b).verdict != Verdict::Far;
        EXPECT_EQ(v.copies_used, mixed->plan().n);
    }
    EXPECT_LE(wrong_close, trials / 3);
    EXPECT_LE(wrong_far, trials / 3);
    const double sd = std::sqrt(*mixed->theoretical_variance() / trials);
    EXPECT_NEAR(sum / trials, 0.0, 5 * sd);
}

TEST(Mixedness, DenseBackendMatchesLaw) {
    TesterOptions opts = with_backend(Backend::Dense);
    opts.n = 4;
    auto rho = rand_state(2, 3);
    auto t = make_mixedness_tester(rho, 0.3, opts);
    const int trials = 20000;
    double sum = 0, sq = 0;
    for (int i = 0; i < trials; ++i) {
        Rng r = make_stream(1, i);
        double x = t->run(r).statistic;
        sum += x;
        sq += x * x;
    }
    const double mean = sum / trials;
    const double var = *t->theoretical_variance();
    EXPECT_NEAR(mean, t->true_mean(), 4 * std::sqrt(var / trials));
    EXPECT_NEAR(sq / trials - mean * mean, var, 0.1 * var);
    opts.n = 20;
    EXPECT_THROW_KIND(make_mixedness_tester(rho, 0.3, opts), ErrorKind::TooLarge);
}

TEST(HilbertSchmidt, AnalyticCertification) {
    auto opts = with_backend(Backend::Analytic);
    Rng rng = make_stream(0, 0);
    auto sigma = rand_state(3, 1);
    auto same = make_hs_tester(sigma, sigma, 0.25, opts);
    auto v = same->run(rng);
    EXPECT_NEAR(v.statistic, 0.0, 1e-12);
    EXPECT_EQ(v.verdict, Verdict::Close);
    EXPECT_LT(*v.guaranteed_error, 1.0 / 3.0);

    Eigen::VectorXcd psi(2);
    psi << 1, 0;
    auto s2 = rand_state(2, 5);
    auto rho = at_hs_distance(s2, pure_state(psi), 0.3);
    EXPECT_NEAR(hs_distance(rho, s2), 0.3, 1e-12);
    auto far = test_hs_two_state(rho, s2, 0.25, opts, rng);
    EXPECT_EQ(far.verdict, Verdict::Far);
    EXPECT_LE(*far.guaranteed_error, 1.0 / 3.0);
    EXPECT_NEAR(far.statistic, 0.09, 1e-10);
}

TEST(HilbertSchmidt, DenseMonteCarloUnbiased) {
    TesterOptions opts = with_backend(Backend::Dense);
    opts.n = 4;
    auto rho = rand_state(2, 11), sigma = rand_state(2, 12);
    auto t = make_hs_tester(rho, sigma, 0.3, opts);
    const int trials = 10000;
    double sum = 0, sq = 0;
    for (int i = 0; i < trials; ++i) {
        Rng r = make_stream(2, i);
        const double x = t->run(r).statistic;
        sum += x;
        sq += x * x;
    }
    const double mean = sum / trials;
    const double stderr_ = std::sqrt((sq / trials - mean * mean) / trials);
    const double truth = std::pow(hs_distance(rho, sigma), 2);
    EXPECT_NEAR(mean, truth, 3 * stderr_);
    EXPECT_NEAR(sq / trials - mean * mean, *t->theoretical_variance(), 0.1 * *t->theoretical_variance());
    opts.n = 5;
    EXPECT_THROW_KIND(make_hs_tester(rho, sigma, 0.3, opts), ErrorKind::TooLarge);
}

TEST(HilbertSchmidt, RskOnDiagonalPairs) {
    TesterOptions opts;
    opts.n = 50;
    auto rho = rand_diag_state(3, 1), sigma = rand_diag_state(3, 2);
    auto t = make_hs_tester(rho, sigma, 0.3, opts);
    const int trials = 20000;
    double sum = 0, sq = 0;
    for (int i = 0; i < trials; ++i) {
        Rng r = make_stream(3, i);
        const double x = t->run(r).statistic;
        sum += x;
        sq += x * x;
    }
    const double mean = sum / trials;
    EXPECT_NEAR(mean, t->true_mean(), 4 * std::sqrt((sq / trials - mean * mean) / trials));
    EXPECT_THROW_KIND(make_hs_tester(rand_state(3, 1), sigma, 0.3, opts), ErrorKind::BackendUnsupported);
}

TEST(Trace, ReductionAndVerdicts) {
    for (int d : {2, 4, 8}) {
        const double eps = 0.2;
        EXPECT_NEAR(hs_distance(paninski(d, eps), maximally_mixed(d)), 2 * eps / std::sqrt(d), 1e-12);
    }
    auto opts = with_backend(Backend::Analytic);
    Rng rng = make_stream(0, 0);
    auto sigma = rand_state(4, 21);
    EXPECT_EQ(test_trace_distance(sigma, sigma, 0.2, opts, rng).verdict, Verdict::Close);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
    psi(3) = 1;
    auto rho = at_trace_distance(sigma, pure_state(psi), 0.3);
    EXPECT_NEAR(trace_distance(rho, sigma), 0.3, 1e-9);
    auto t = make_trace_tester(rho, sigma, 0.2, opts);
    EXPECT_EQ(t->ground_truth(), Verdict::Far);
    EXPECT_EQ(t->run(rng).verdict, Verdict::Far);
    // n = Theta(d / eps^2).
    auto t2 = make_trace_tester(maximally_mixed(16), maximally_mixed(16), 0.2, opts);
    EXPECT_NEAR(static_cast<double>(t2->plan().n) / make_trace_tester(sigma, sigma, 0.2, opts)->plan().n, 4.0, 0.01);
}

TEST(LowRank, PcaInequalityHolds) {
    Rng rng = make_stream(77, 0);
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        const int d = 3 + i % 5;
        const int k = 1 + static_cast<int>(rng() % (d - 1));
        const double eps = 0.05 + 0.5 * uniform01(rng);
        const double mix = 0.2 * uniform01(rng);
        auto low = random_state(d, k, 500 + i);
        auto sigma = validate_state((1 - mix) * low.matrix() + mix * rand_state(d, 900 + i).matrix());
        auto tau = rand_state(d, 1300 + i);
        const double target = low_rank_c() * eps / std::sqrt(k) * uniform01(rng);
        const double full = hs_distance(sigma, tau);
        const double t = std::min(1.0, target / full);
        auto rho = validate_state((1 - t) * sigma.matrix() + t * tau.matrix());
        auto c = verify_pca_inequality(rho, sigma, k, eps);
        ASSERT_TRUE(c.hypothesis);
        EXPECT_TRUE(c.conclusion) << c.trace << " > " << c.delta << " + " << eps;
        EXPECT_LE(c.delta, mix + 1e-12);
        ++checked;
    }
    EXPECT_EQ(checked, 100);
}

TEST(LowRank, DelegatesWithScaledParameter) {
    auto opts = with_backend(Backend::Analytic);
    auto sigma = rand_state(4, 2);
    opts.rank = 4;
    auto lr = make_low_rank_tester(sigma, sigma, 0.2, opts);
    auto tr = make_trace_tester(sigma, sigma, 0.2, opts);
    // Thresholds differ by the constant ratio (c / sqrt(k))^2 / (2 / sqrt(d))^2.
    EXPECT_NEAR(lr->plan().theta / tr->plan().theta, low_rank_c() * low_rank_c() / 4, 1e-12);
    Rng rng = make_stream(0, 0);
    EXPECT_EQ(lr->run(rng).verdict, Verdict::Close);
    opts.rank = 0;
    EXPECT_THROW_KIND(make_low_rank_tester(sigma, sigma, 0.2, opts), ErrorKind::RankOutOfRange);
    opts.rank = 5;
    EXPECT_THROW_KIND(make_low_rank_tester(sigma, sigma, 0.2, opts), ErrorKind::RankOutOfRange);
}

TEST(ChiSquared, AnalyticVerdicts) {
    auto opts = with_backend(Backend::Analytic);
    Rng rng = make_stream(0, 0);
    auto sigma = rand_state(3, 7);
    EXPECT_EQ(test_chisq_known_sigma(sigma, sigma, 0.2, opts, rng).verdict, Verdict::Close);
    // Diagonal d = 4 pair with classical chi^2 = 0.1.
    std::vector<double> q{0.25, 0.25, 0.25, 0.25};
    const double a = std::sqrt(0.1 / 4) * 0.25 * 2;  // p = q +- a, chi2 = 4 a^2 / 0.25
    std::vector<double> p{0.25 + a, 0.25 - a, 0.25 + a, 0.25 - a};
    auto rho = diagonal_state(ClassicalDistribution(p));
    auto s = diagonal_state(ClassicalDistribution(q));
    ASSERT_NEAR(classical_chisq(ClassicalDistribution(p), ClassicalDistribution(q)), 0.1, 1e-12);
    auto v = test_chisq_known_sigma(rho, s, std::sqrt(0.08), opts, rng);
    EXPECT_EQ(v.verdict, Verdict::Far);
    EXPECT_NEAR(v.statistic, 0.1, 1e-12);
}

TEST(ChiSquared, RotatesIntoReferenceBasis) {
    auto opts = with_backend(Backend::Analytic);
    auto rho = rand_state(3, 31), sigma = rand_state(3, 32);
    auto t = make_chisq_tester(rho, sigma, 0.3, opts);
    EXPECT_NEAR(t->true_mean(), bures_chisq(rho, sigma), 1e-10);
}

TEST(ChiSquared, ConditioningChecks) {
    auto opts = with_backend(Backend::Analytic);
    std::vector<double> q{1e-7, 0.5 - 1e-7, 0.5};
    auto s = diagonal_state(ClassicalDistribution(q));
    EXPECT_THROW_KIND(make_chisq_tester(s, s, 0.1, opts), ErrorKind::SigmaIllConditioned);
    std::vector<double> sing{0.0, 0.5, 0.5};
    auto z = diagonal_state(ClassicalDistribution(sing));
    EXPECT_THROW_KIND(make_chisq_tester(z, z, 0.1, opts), ErrorKind::SigmaSingular);
}

TEST(ChiSquared, PinchedAndDenseBackends) {
    auto rho = rand_diag_state(3, 41), sigma = rand_diag_state(3, 42);
    TesterOptions opts = with_backend(Backend::Pinched);
    opts.n = 200;
    auto pinched = make_chisq_tester(rho, sigma, 0.3, opts);
    opts.backend = Backend::Dense;
    opts.n = 4;
    auto dense = make_chisq_tester(rho, sigma, 0.3, opts);
    for (const Tester* t : {pinched.get(), dense.get()}) {
        const int trials = 20000;
        double sum = 0, sq = 0;
        for (int i = 0; i < trials; ++i) {
            Rng r = make_stream(5, i);
            const double x = t->run(r).statistic;
            sum += x;
            sq += x * x;
        }
        const double mean = sum / trials, var = sq / trials - mean * mean;
        EXPECT_NEAR(mean, bures_chisq(rho, sigma), 4 * std::sqrt(*t->theoretical_variance() / trials));
        EXPECT_NEAR(var, *t->theoretical_variance(), 0.1 * *t->theoretical_variance());
    }
    opts.backend = Backend::Pinched;
    EXPECT_THROW_KIND(make_chisq_tester(rand_state(3, 1), sigma, 0.3, opts), ErrorKind::BackendUnsupported);
    opts.backend = Backend::Rsk;
    EXPECT_THROW_KIND(make_chisq_tester(rho, sigma, 0.3, opts), ErrorKind::BackendUnsupported);
}

TEST(Fidelity, Verdicts) {
    Rng rng = make_stream(0, 0);
    auto sigma = rand_state(3, 51);
    EXPECT_EQ(test_fidelity(sigma, sigma, 0.2, with_backend(Backend::Analytic), rng).verdict, Verdict::Close);
    // Diagonal pair with large infidelity.
    std::vector<double> p{0.85, 0.05, 0.05, 0.05}, q{0.05, 0.05, 0.05, 0.85};
    auto rho = diagonal_state(ClassicalDistribution(p));
    auto s = diagonal_state(ClassicalDistribution(q));
    ASSERT_GT(1 - fidelity(rho, s), 0.3);
    auto t = make_fidelity_tester(rho, s, 0.3, with_backend(Backend::Pinched));
    EXPECT_EQ(t->ground_truth(), Verdict::Far);
    for (int i = 0; i < 10; ++i) {
        Rng r = make_stream(6, i);
        EXPECT_EQ(t->run(r).verdict, Verdict::Far);
    }
    EXPECT_THROW_KIND(make_fidelity_tester(rho, s, 1.5, with_backend(Backend::Pinched)), ErrorKind::EpsOutOfRange);
    EXPECT_NEAR(default_fidelity_c(), 1.5704e-6, 1e-9);
}

TEST(Fidelity, PlannerLinearInDOverEps) {
    const double ref = fidelity_worst_case_plan(2, 0.3, kChebyshevC).n * 0.3 / 2;
    for (int d : {2, 4, 8, 16})
        for (double eps : {0.05, 0.1, 0.3, 1.0}) {
            const double scaled = fidelity_worst_case_plan(d, eps, kChebyshevC).n * eps / d;
            EXPECT_NEAR(scaled / ref, 1.0, 0.2) << d << " " << eps;
        }
}

TEST(Fidelity, ComplementarityOnDiagonalInstances) {
    Rng rng = make_stream(8, 0);
    for (int i = 0; i < 500; ++i) {
        const int d = 2 + i % 6;
        auto p = diag_of(rand_diag_state(d, 3000 + i)), q = diag_of(rand_diag_state(d, 4000 + i));
        const double eps = 0.01 + uniform01(rng);
        const double f = bhattacharyya(p, q);
        const double chi = classical_chisq(p, q);
        EXPECT_TRUE(f >= 1 - eps || chi > 0.5 * eps) << f << " " << chi << " " << eps;
    }
}

TEST(Diagonal, Verdicts) {
    auto opts = with_backend(Backend::Pinched);
    auto diag = rand_diag_state(4, 61);
    auto t = make_diagonal_tester(diag, 0.3, opts);
    EXPECT_EQ(t->ground_truth(), Verdict::Close);
    EXPECT_EQ(t->copies_per_run(), 2 * t->plan().n);
    int close = 0;
    for (int i = 0; i < 15; ++i) {
        Rng r = make_stream(7, i);
        auto v = t->run(r);
        close += v.verdict == Verdict::Close;
        EXPECT_EQ(v.copies_used, 2 * t->plan().n);
    }
    EXPECT_GE(close, 10);
    Rng rng = make_stream(0, 0);
    EXPECT_EQ(test_diagonal(maximally_mixed(3), 0.3, opts, rng).verdict, Verdict::Close);

    Eigen::VectorXcd plus(2);
    plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    auto h = make_diagonal_tester(pure_state(plus), 0.3, with_backend(Backend::Analytic));
    EXPECT_EQ(h->ground_truth(), Verdict::Far);
    for (int i = 0; i < 5; ++i) {
        Rng r = make_stream(8, i);
        EXPECT_EQ(h->run(r).verdict, Verdict::Far);
    }
}

TEST(Amplification, MajorityOfBatches) {
    TesterOptions opts;
    opts.C = 0.5;
    opts.batches = 5;
    auto t = make_mixedness_tester(maximally_mixed(4), 0.3, opts);
    Rng r = make_stream(1, 1);
    auto v = t->run(r);
    EXPECT_EQ(v.copies_used, 5 * t->plan().n);
    EXPECT_EQ(v.verdict, Verdict::Close);
    opts.batches = 2;
    auto bad = make_mixedness_tester(maximally_mixed(4), 0.3, opts);
    EXPECT_THROW_KIND(bad->run(r), ErrorKind::InvalidArgument);
}

TEST(Multinomial, MomentsAndTotal) {
    std::vector<double> p{0.5, 0.3, 0.2};
    Rng rng = make_stream(2, 2);
    std::vector<double> mean(3, 0);
    const int trials = 5000;
    for (int i = 0; i < trials; ++i) {
        auto c = sample_multinomial(p, 1000, rng);
        EXPECT_EQ(c[0] + c[1] + c[2], 1000);
        for (int j = 0; j < 3; ++j) mean[j] += c[j] / double(trials);
    }
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(mean[j], 1000 * p[j], 1.0);
    auto huge = sample_multinomial(p, 10'000'000'000LL, rng);
    EXPECT_EQ(huge[0] + huge[1] + huge[2], 10'000'000'000LL);
}

}  // namespace
}  // namespace certikit
