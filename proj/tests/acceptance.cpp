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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "certikit/harness.hpp"
#include "certikit/symalg.hpp"

using namespace certikit;

namespace {

struct Result {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

std::string g17(double x) { return fmt("%.17g", x); }

std::string diag_spec(const std::vector<double>& p) {
    std::string s = "diag:";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + g17(p[i]);
    return s;
}

// Reports produced by criteria 5 and 9, replayed by criterion 10.
std::vector<std::pair<ExperimentConfig, std::string>> g_reports;

ExperimentReport run_recorded(const ExperimentConfig& c) {
    ExperimentReport rep = run_experiment(c);
    g_reports.emplace_back(c, rep.to_json() + rep.to_csv());
    return rep;
}

// 1. Structure constants in exact arithmetic.
Result criterion1() {
    Result o;
    int checked = 0;
    for (int n = 4; n <= 8; ++n) {
        const ClassElement t = ClassElement::basis(ClassAvg(Partition({2}), n));
        const Rational c2(n * (n - 1) / 2);
        ClassElement expect(n);
        expect.add(Partition(), Rational(1) / c2);
        expect.add(Partition({3}), Rational(2 * (n - 2)) / c2);
        expect.add(Partition({2, 2}), Rational((n - 2) * (n - 3) / 2) / c2);
        const ClassElement got = class_product(t, t);
        if (!(got == expect)) {
            o.pass = false;
            o.detail += " O_(2)^2 mismatch at n=" + std::to_string(n) + ": " + got.str();
        }
        ++checked;
    }
    // (i j)(k l) with i, k on the rho side and j, l on the sigma side: equal
    // pairs give the identity, a shared rho index a 3-cycle rss, a shared sigma
    // index rrs, disjoint pairs (rs)(rs).
    for (int m = 1; m <= 4; ++m) {
        for (int n = 1; n <= 4; ++n) {
            const OrbitElement x = OrbitElement::basis(OrbitSignature::parse("(rs)"), m, n);
            const Rational mn(m * n);
            OrbitElement expect(m, n);
            expect.add(OrbitSignature{}, Rational(1) / mn);
            if (n > 1) expect.add(OrbitSignature::parse("(rss)"), Rational(n - 1) / mn);
            if (m > 1) expect.add(OrbitSignature::parse("(rrs)"), Rational(m - 1) / mn);
            if (m > 1 && n > 1) expect.add(OrbitSignature::parse("(rs)(rs)"), Rational((m - 1) * (n - 1)) / mn);
            const OrbitElement got = orbit_product(x, x);
            if (!(got == expect)) {
                o.pass = false;
                o.detail += " O_(rs)^2 mismatch at m=" + std::to_string(m) + " n=" + std::to_string(n) + ": " +
                            got.str();
            }
            ++checked;
        }
    }
    o.detail = std::to_string(checked) + " products exact" + o.detail;
    return o;
}

// 2. Exact moments from the dense oracle.
Result criterion2() {
    double worst = 0;
    int cases = 0;
    for (int d = 2; d <= 3; ++d) {
        const auto rho = random_state(d, d, 100 + d);
        const auto sigma = random_state(d, d, 200 + d);
        const auto alpha = rho.spectrum();
        double p2 = 0;
        for (int i = 0; i < rho.eigenvalues().size(); ++i) p2 += std::pow(rho.eigenvalues()(i), 2);
        const double overlap = (rho.matrix() * sigma.matrix()).trace().real();
        const double hs = std::pow(hs_distance(rho, sigma), 2);
        for (int n = 2; n <= 6; ++n) {
            auto [mean, var] = exact_moments(algebra_matrix(ClassElement::basis(ClassAvg(Partition({2}), n)), d),
                                             tensor_power(rho, n));
            worst = std::max({worst, std::abs(mean - p2), std::abs(var - var_purity(alpha, n))});
            ++cases;
        }
        for (int m = 1; m <= 5; ++m) {
            for (int n = 1; m + n <= 6; ++n) {
                auto x = OrbitElement::basis(OrbitSignature::parse("(rs)"), m, n);
                auto [mean, var] = exact_moments(algebra_matrix(x, d), bipartite_state(rho, m, sigma, n));
                worst = std::max({worst, std::abs(mean - overlap), std::abs(var - var_linear_fidelity(rho, sigma, m, n))});
                ++cases;
            }
        }
        for (int n = 2; n <= 3; ++n) {
            auto [mean, var] = exact_moments(algebra_matrix(hs_combination(n, n), d), bipartite_state(rho, n, sigma, n));
            worst = std::max({worst, std::abs(mean - hs), std::abs(var - var_hs_exact(rho, sigma, n))});
            ++cases;
        }
    }
    return {worst <= 1e-10, std::to_string(cases) + " cases, worst residual " + fmt("%.2e", worst)};
}

// 3. Backend equivalence.
Result criterion3() {
    double worst_sw = 0;
    for (int d = 1; d <= 3; ++d) {
        for (int n = 1; n <= 5; ++n) {
            const auto rho = random_state(d, d, 300 + 10 * d + n);
            const auto pmf = sw_pmf(rho.spectrum(), n);
            const auto state = tensor_power(rho, n);
            for (const auto& [lam, proj] : schur_projectors(d, n)) {
                const double dense = (proj.m * state.m).trace().real();
                const auto it = pmf.find(lam);
                worst_sw = std::max(worst_sw, std::abs(dense - (it == pmf.end() ? 0.0 : it->second)));
            }
        }
    }
    double worst_tv = 0;
    const std::vector<double> diag{0.65, 0.35};
    const auto dstate = diagonal_state(ClassicalDistribution(diag));
    for (int n = 1; n <= 4; ++n) {
        const auto pmf = gt_pmf(diag, n);
        const auto state = tensor_power(dstate, n);
        const auto types = type_projectors(2, n);
        double tv = 0;
        for (const auto& [lam, pl] : schur_projectors(2, n)) {
            for (const auto& [tau, pt] : types) {
                const double dense = (pt.m * pl.m * state.m * pl.m * pt.m).trace().real();
                const auto key = std::make_pair(lam, TypeVector{tau});
                tv += std::abs(dense - (pmf.count(key) ? pmf.at(key) : 0.0));
            }
        }
        worst_tv = std::max(worst_tv, tv / 2);
    }
    // Sampler against its exact law.
    const int n = 4, draws = 200000;
    std::map<std::pair<Partition, TypeVector>, double> freq;
    Rng rng = make_stream(3, 0);
    for (int i = 0; i < draws; ++i) {
        GTSample s = gt_sample(diag, n, rng);
        freq[{s.shape, s.type}] += 1.0 / draws;
    }
    double mc_tv = 0;
    for (const auto& [k, p] : gt_pmf(diag, n)) mc_tv += std::abs(p - freq[k]) / 2;
    int mismatches = 0, total = 0;
    for (int m = 2; m <= 8; ++m) {  // a transposition needs m >= 2
        for (const auto& lam : partitions_of(m)) {
            const Rational mn(character(lam, Partition({2})), hook_dimension_exact(lam));
            if (r_lambda_exact(lam, m) != mn) ++mismatches;
            ++total;
        }
    }
    const bool pass = worst_sw <= 1e-10 && worst_tv < 1e-10 && mismatches == 0 && mc_tv < 0.01;
    return {pass, "sw_pmf residual " + fmt("%.2e", worst_sw) + ", GT law TV " + fmt("%.2e", worst_tv) +
                      ", gt_sample empirical TV " + fmt("%.4f", mc_tv) + ", r_lambda mismatches " +
                      std::to_string(mismatches) + "/" + std::to_string(total)};
}

// 4. Chi-squared machinery.
Result criterion4() {
    double dense_worst = 0;
    for (int d = 2; d <= 3; ++d) {
        for (int n = 2; n <= 4; ++n) {
            const auto sigma = diagonal_state(diag_of(random_state(d, d, 400 + 10 * d + n)));
            const auto rho = random_state(d, d, 500 + 10 * d + n);
            const auto ctx = ChiContext::from_diagonal_state(sigma);
            auto [mean, var] = exact_moments(chi_averaged_observable(ctx, n), tensor_power(rho, n));
            dense_worst =
                std::max({dense_worst, std::abs(mean - bures_chisq(rho, sigma)), std::abs(var - chi_var_exact(rho, ctx, n))});
        }
    }
    int bound_violations = 0;
    double contract_worst = 0;
    for (int i = 0; i < 100; ++i) {
        const int d = 2 + i % 5;
        const auto sigma = diagonal_state(diag_of(random_state(d, d, 600 + i)));
        const auto rho = random_state(d, 1 + i % d, 700 + i);
        const auto ctx = ChiContext::from_diagonal_state(sigma);
        const int n = 2 + (i * 7) % 50;
        if (chi_var_exact(rho, ctx, n) > chi_var_bound(rho, ctx, n) * (1 + 1e-12)) ++bound_violations;

        Rng rng = make_stream(8, i);
        auto randm = [&] {
            Matrix m(d, d);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) m(a, b) = Complex(2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1);
            return m;
        };
        const Matrix s = randm(), t = randm();
        const Matrix& sig = sigma.matrix();
        const Complex st = trtwo(s, t, ctx);
        const double scale = std::max(1.0, std::abs(st));
        contract_worst = std::max({contract_worst, std::abs(trtwo(s, sig, ctx) - s.trace()),
                                   std::abs(trtwo(sig, s, ctx) - s.trace()),
                                   std::abs(trthree(sig, s, t, ctx) - st) / scale,
                                   std::abs(trthree(s, t, sig, ctx) - st) / scale});
    }
    const bool pass = dense_worst <= 1e-9 && bound_violations == 0 && contract_worst <= 1e-12;
    return {pass, "dense residual " + fmt("%.2e", dense_worst) + ", bound violations " +
                      std::to_string(bound_violations) + "/100, contraction residual " + fmt("%.2e", contract_worst)};
}

// 5. End-to-end mixedness tester with the calibrated constant.
Result criterion5() {
    const std::string path = default_constants_path();
    double C = 0;
    try {
        C = load_calibrated_C(path, "mixedness");
    } catch (const Error& e) {
        return {false, std::string("no calibrated constant: ") + e.what()};
    }
    const double dhs = hs_distance(paninski(8, 0.2), maximally_mixed(8));
    Result o;
    std::string detail = "C=" + fmt("%.4f", C);
    for (const auto& [state, label] : {std::pair<std::string, Verdict>{"mixed:8", Verdict::Close},
                                       std::pair<std::string, Verdict>{"paninski:8:0.2", Verdict::Far}}) {
        ExperimentConfig c;
        c.test = TestKind::Mixedness;
        c.state = state;
        c.eps = 0.12;
        c.trials = 500;
        c.seed = 5;
        c.backend = Backend::Rsk;
        c.constants = path;
        const auto rep = run_recorded(c);
        std::int64_t wrong = 0;
        for (const auto& r : rep.rows) wrong += r.verdict != label;
        const double err = double(wrong) / double(rep.rows.size());
        if (err > 1.0 / 3) o.pass = false;
        detail += ", n=" + std::to_string(rep.plan.n) + " " + state + " error " + fmt("%.3f", err);
    }
    o.detail = detail + " (D_HS of paninski(8,0.2) = " + fmt("%.4f", dhs) + ")";
    if (!(dhs > 0.12)) o.pass = false;
    return o;
}

// 6. Analytic HS tester: certified verdicts and 1/eps^2 scaling.
Result criterion6() {
    const double eps = 0.1;
    const std::vector<double> factors{0.0, 0.99, 1.01, 1.5, 2.0};
    int correct = 0, certified = 0;
    double worst_cert = 0;
    TesterOptions opts;
    opts.backend = Backend::Analytic;
    for (int i = 0; i < 50; ++i) {
        const int d = 2 + i % 7;
        const auto sigma = random_state(d, d, 800 + i);
        Eigen::VectorXcd psi(d);
        Rng rng = make_stream(9, i);
        for (int k = 0; k < d; ++k) psi(k) = Complex(2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1);
        const auto tau = pure_state(psi.normalized());
        const double target = factors[i % factors.size()] * eps;
        const double s = target / hs_distance(sigma, tau);
        const auto rho = validate_state((1 - s) * sigma.matrix() + s * tau.matrix());
        auto tester = make_hs_tester(rho, sigma, eps, opts);
        Rng unused = make_stream(0, 0);
        const TestVerdict v = tester->run(unused);
        const Verdict expect = target <= 0.99 * eps + 1e-12 ? Verdict::Close : Verdict::Far;
        correct += v.verdict == expect;
        worst_cert = std::max(worst_cert, v.guaranteed_error.value_or(1.0));
        certified += v.guaranteed_error && *v.guaranteed_error <= 1.0 / 3;
    }
    const auto plan = [](double e) { return plan_samples(hs_profile(), e * e, kDistanceGamma, kChebyshevC).n; };
    const std::int64_t n1 = plan(eps), n2 = plan(eps / 2);
    const bool scaling = std::abs(double(n2) - 4.0 * double(n1)) <= 4.0;
    const bool pass = correct == 50 && certified == 50 && scaling;
    return {pass, std::to_string(correct) + "/50 correct, worst certified error " + fmt("%.4f", worst_cert) +
                      ", n(eps)=" + std::to_string(n1) + " n(eps/2)=" + std::to_string(n2) + " ratio " +
                      fmt("%.6f", double(n2) / double(n1))};
}

// 7. Add-one identity by exhaustive enumeration.
double multinomial_enumerated(const std::vector<double>& p, int n) {
    const int d = static_cast<int>(p.size());
    std::vector<std::int64_t> x(d, 0);
    double total = 0;
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == d - 1) {
            x[i] = left;
            double prob = std::tgamma(n + 1.0);
            double chi = 0;
            for (int k = 0; k < d; ++k) {
                prob *= std::pow(p[k], double(x[k])) / std::tgamma(x[k] + 1.0);
                const double q = (x[k] + 1.0) / (n + d);
                chi += (p[k] - q) * (p[k] - q) / q;
            }
            total += prob * chi;
            return;
        }
        for (int k = 0; k <= left; ++k) {
            x[i] = k;
            rec(i + 1, left - k);
        }
    };
    rec(0, n);
    return total;
}

Result criterion7() {
    double worst = 0, printed_worst = 0;
    int cases = 0;
    for (int d = 2; d <= 3; ++d) {
        for (int n = 1; n <= 6; ++n) {
            for (int rep = 0; rep < 4; ++rep) {
                const auto p = diag_of(random_state(d, d, 900 + 100 * d + 10 * n + rep)).probs;
                const double exact = multinomial_enumerated(p, n);
                worst = std::max(worst, std::abs(exact - add_one_expected_chisq(ClassicalDistribution(p), n)));
                double tail = 0;
                for (double pi : p) tail += std::pow(1 - pi, n + 1.0);
                const double printed = (d - 1.0) / (n + 1) - (n + d) / (n + 1.0) * (1 - tail);
                printed_worst = std::max(printed_worst, std::abs(exact - printed));
                ++cases;
            }
        }
    }
    return {worst <= 1e-12, std::to_string(cases) + " cases, closed form residual " + fmt("%.2e", worst) +
                                " (the variant with 1 - sum (1-p_i)^(n+1) is off by up to " +
                                fmt("%.3f", printed_worst) + ")"};
}

// 8. Low-rank reduction: D_HS <= c eps / sqrt(k) and top-k mass >= 1 - delta
// imply D_tr <= delta + eps.
Result criterion8() {
    int violations = 0, hypothesis_failures = 0;
    double tightest = -1;
    const double c = low_rank_c();
    for (int i = 0; i < 1000; ++i) {
        Rng rng = make_stream(10, i);
        const int d = 2 + i % 7;
        const int k = 1 + static_cast<int>(uniform01(rng) * d) % d;
        const double eps = 0.02 + 0.3 * uniform01(rng);
        // sigma: k heavy eigenvalues, tail mass delta spread over the rest.
        const double delta = k == d ? 0.0 : 0.2 * uniform01(rng);
        std::vector<double> spec(d);
        double heavy = 0;
        for (int j = 0; j < k; ++j) heavy += spec[j] = 0.5 + uniform01(rng);
        for (int j = 0; j < k; ++j) spec[j] *= (1 - delta) / heavy;
        for (int j = k; j < d; ++j) spec[j] = delta / (d - k);
        const Matrix u = random_unitary(d, rng);
        RealVector sv(d);
        for (int j = 0; j < d; ++j) sv(j) = spec[j];
        const auto sigma = validate_state(u * sv.asDiagonal() * u.adjoint());
        const auto tau = random_state(d, 1 + i % d, 2000 + i);
        const double budget = uniform01(rng) * c * eps / std::sqrt(double(k));
        const double s = std::min(1.0, budget / std::max(1e-300, hs_distance(sigma, tau)));
        const auto rho = validate_state((1 - s) * sigma.matrix() + s * tau.matrix());
        const PcaCheck chk = verify_pca_inequality(rho, sigma, k, eps);
        if (!chk.hypothesis || chk.delta > delta + 1e-12) ++hypothesis_failures;
        if (chk.hypothesis && !chk.conclusion) ++violations;
        tightest = std::max(tightest, chk.trace - (chk.delta + eps));
    }
    return {violations == 0 && hypothesis_failures == 0,
            "1000 instances, violations " + std::to_string(violations) + ", hypothesis misses " +
                std::to_string(hypothesis_failures) + ", max D_tr - (delta + eps) = " + fmt("%.4f", tightest)};
}

// 9. Fidelity certifier on commuting instances plus planner scaling.
Result criterion9() {
    const double eps = 0.3;
    const std::vector<double> sigma{0.4, 0.3, 0.2, 0.1};
    auto chisq = [](const std::vector<double>& p, const std::vector<double>& q) {
        double s = 0;
        for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - q[i]) * (p[i] - q[i]) / q[i];
        return s;
    };
    auto infidelity = [](const std::vector<double>& p, const std::vector<double>& q) {
        double f = 0;
        for (std::size_t i = 0; i < p.size(); ++i) f += std::sqrt(p[i] * q[i]);
        return 1 - f;
    };
    // Close on the boundary: mix sigma toward tau until chi2 = 0.49 eps.
    const std::vector<double> tau{0.1, 0.2, 0.3, 0.4};
    const double t = std::sqrt(0.49 * eps / chisq(tau, sigma));
    std::vector<double> boundary(4);
    for (int i = 0; i < 4; ++i) boundary[i] = (1 - t) * sigma[i] + t * tau[i];
    struct Inst {
        std::vector<double> p;
        Verdict label;
    };
    const std::vector<Inst> instances{{sigma, Verdict::Close},
                                      {boundary, Verdict::Close},
                                      {{0.05, 0.05, 0.1, 0.8}, Verdict::Far},
                                      {{0.0, 0.0, 0.0, 1.0}, Verdict::Far}};
    Result o;
    std::string detail;
    for (const auto& inst : instances) {
        const bool ok_region = inst.label == Verdict::Close ? chisq(inst.p, sigma) <= 0.49 * eps + 1e-12
                                                            : infidelity(inst.p, sigma) > eps;
        if (!ok_region) {
            o.pass = false;
            detail += " [instance outside its region]";
        }
        ExperimentConfig c;
        c.test = TestKind::Fidelity;
        c.state = diag_spec(inst.p);
        c.sigma = diag_spec(sigma);
        c.eps = eps;
        c.trials = 200;
        c.seed = 9;
        c.backend = Backend::Pinched;
        const auto rep = run_recorded(c);
        std::int64_t wrong = 0;
        for (const auto& r : rep.rows) wrong += r.verdict != inst.label;
        const double err = double(wrong) / 200.0;
        if (err > 1.0 / 3) o.pass = false;
        detail += (detail.empty() ? "" : ", ") + std::string(to_string(inst.label)) + " error " + fmt("%.3f", err);
    }
    // log n against log(d / eps) on a grid; the fitted slope should be 1.
    std::vector<double> xs, ys;
    for (int d : {2, 4, 8, 16, 32})
        for (double e : {0.05, 0.1, 0.2, 0.4}) {
            xs.push_back(std::log(d / e));
            ys.push_back(std::log(double(fidelity_worst_case_plan(d, e, kChebyshevC).n)));
        }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i] / xs.size(), my += ys[i] / ys.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) sxy += (xs[i] - mx) * (ys[i] - my), sxx += (xs[i] - mx) * (xs[i] - mx);
    const double slope = sxy / sxx;
    if (std::abs(slope - 1) > 0.2) o.pass = false;
    o.detail = detail + ", planner slope in d/eps " + fmt("%.4f", slope);
    return o;
}

// 10. Determinism: replay every recorded run, on a different worker count.
Result criterion10() {
    if (g_reports.empty()) return {false, "no recorded runs"};
    int same = 0;
    for (const auto& [config, text] : g_reports) {
        const ExperimentReport rep = run_experiment(config, std::max(2, worker_count()));
        same += rep.to_json() + rep.to_csv() == text;
    }
    CalibrationConfig cc;
    cc.profile = "chisq";
    cc.d = 4;
    cc.eps = 0.3;
    cc.trials = 100;
    cc.c_min = 0.001;
    const bool cal_same = calibrate(cc, 1).to_json() == calibrate(cc, 3).to_json();
    const int total = static_cast<int>(g_reports.size());
    return {same == total && cal_same, std::to_string(same) + "/" + std::to_string(total) +
                                           " reports byte-identical, calibration " +
                                           (cal_same ? "identical" : "differs")};
}

}  // namespace

int main() {
    const std::vector<std::pair<int, std::function<Result()>>> criteria{
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
        {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}};
    int failed = 0;
    for (const auto& [id, fn] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Result o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %d: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
