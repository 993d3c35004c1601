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

// Invariant suites behind `certikit verify`. Each identity is evaluated on a
// fixed, seeded family of instances and reported by its worst residual.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "certikit/harness.hpp"
#include "certikit/symalg.hpp"

namespace certikit {

namespace {

constexpr double kDefaultTolerance = 1e-9;

class Collector {
   public:
    Collector(std::string suite, std::optional<double> tol, SuiteReport& out)
        : suite_(std::move(suite)), tol_(tol), out_(out) {}

    /// Runs `body` once per case; body returns the residual of that case.
    void check(const std::string& identity, int cases, const std::function<double(int)>& body,
               double tolerance = kDefaultTolerance) {
        IdentityCheck c;
        c.suite = suite_;
        c.identity = identity;
        c.cases = cases;
        c.tolerance = tol_.value_or(tolerance);
        for (int i = 0; i < cases; ++i) {
            const double r = body(i);
            // NaN counts as a violation.
            c.worst_residual = std::isnan(r) ? INFINITY : std::max(c.worst_residual, r);
            if (std::isinf(c.worst_residual)) break;
        }
        out_.checks.push_back(c);
    }

   private:
    std::string suite_;
    std::optional<double> tol_;
    SuiteReport& out_;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }
double excess(double lhs, double rhs) { return std::max(0.0, lhs - rhs) / std::max(1.0, std::abs(rhs)); }

// Random instances: dimension 2..6, varied rank, seeds from a fixed range.
DensityMatrix rand_state(int i, std::uint64_t salt) {
    const int d = 2 + i % 5;
    return random_state(d, 1 + (i / 5) % d, 1000 * salt + i);
}

DensityMatrix rand_full(int d, std::uint64_t seed) { return random_state(d, d, seed); }

DensityMatrix rand_diag(int d, std::uint64_t seed) { return diagonal_state(diag_of(rand_full(d, seed))); }

double ratio(const Rational& r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

/// E[chi2(p, add_one(x))] by enumerating every count vector.
double add_one_enumerated(const std::vector<double>& p, int n) {
    const int d = static_cast<int>(p.size());
    std::vector<std::int64_t> x(d, 0);
    double total = 0;
    std::function<void(int, int, double)> rec = [&](int i, int left, double coef) {
        if (i == d - 1) {
            x[i] = left;
            double prob = coef * std::pow(p[i], left);
            for (int k = 1; k <= left; ++k) prob /= k;
            total += prob * classical_chisq(ClassicalDistribution(p), add_one_estimate(x, n));
            return;
        }
        double c = coef;
        for (int k = 0; k <= left; ++k) {
            x[i] = k;
            rec(i + 1, left - k, c);
            c *= p[i] / (k + 1);
        }
    };
    rec(0, n, std::tgamma(n + 1.0));
    return total;
}

void distances_suite(Collector& col) {
    const int N = 60;
    col.check("1/2 D_HS <= D_tr <= sqrt(d)/2 D_HS", N, [](int i) {
        auto r = rand_state(i, 1), s = rand_state(i, 2);
        const double hs = hs_distance(r, s), tr = trace_distance(r, s);
        return std::max(excess(0.5 * hs, tr), excess(tr, 0.5 * std::sqrt(double(r.dim())) * hs));
    });
    col.check("1/2 D_B^2 <= D_tr <= D_B", N, [](int i) {
        auto r = rand_state(i, 3), s = rand_state(i, 4);
        const double b = bures_sq(r, s), tr = trace_distance(r, s);
        return std::max(excess(0.5 * b, tr), excess(tr, std::sqrt(b)));
    });
    col.check("D_B^2 <= chi2_B", N, [](int i) {
        auto r = rand_state(i, 5);
        auto s = rand_full(r.dim(), 6000 + i);
        return excess(bures_sq(r, s), bures_chisq(r, s));
    });
    col.check("unitary invariance", N, [](int i) {
        auto r = rand_state(i, 7);
        auto s = rand_full(r.dim(), 8000 + i);
        Rng rng = make_stream(9, i);
        const Matrix u = random_unitary(r.dim(), rng);
        auto ru = r.conjugated(u), su = s.conjugated(u);
        return std::max({std::abs(trace_distance(r, s) - trace_distance(ru, su)),
                         std::abs(hs_distance(r, s) - hs_distance(ru, su)), std::abs(fidelity(r, s) - fidelity(ru, su)),
                         rel(bures_chisq(ru, su), bures_chisq(r, s))});
    });
    col.check("commuting pairs reduce to classical", N, [](int i) {
        const int d = 2 + i % 5;
        auto r = rand_diag(d, 10000 + i), s = rand_diag(d, 11000 + i);
        auto p = diag_of(r), q = diag_of(s);
        return std::max({std::abs(trace_distance(r, s) - tv(p, q)), std::abs(hs_distance(r, s) - l2(p, q)),
                         std::abs(fidelity(r, s) - bhattacharyya(p, q)),
                         rel(bures_chisq(r, s), classical_chisq(p, q))});
    });
    col.check("paninski: D_tr = eps, D_HS = 2eps/sqrt(d), chi2_B = 4eps^2", 12, [](int i) {
        const int d = 2 * (1 + i % 4);
        const double eps = 0.05 + 0.1 * (i / 4);
        auto r = paninski(d, eps), m = maximally_mixed(d);
        return std::max({std::abs(trace_distance(r, m) - eps),
                         std::abs(hs_distance(r, m) - 2 * eps / std::sqrt(double(d))),
                         std::abs(bures_chisq(r, m) - 4 * eps * eps)});
    });
    col.check("add-one expected chi2 closed form", 15, [](int i) {
        const int d = 2 + i % 2;
        const int n = 1 + i % 6;
        const auto p = diag_of(rand_full(d, 12000 + i)).probs;
        return std::abs(add_one_enumerated(p, n) - add_one_expected_chisq(ClassicalDistribution(p), n));
    }, 1e-12);
}

void symalg_suite(Collector& col) {
    col.check("O_(2)^2 structure constants", 5, [](int i) {
        const int n = 4 + i;
        const ClassElement t = ClassElement::basis(ClassAvg(Partition({2}), n));
        const ClassElement sq = class_product(t, t);
        const Rational c2(n * (n - 1) / 2);
        return std::max({std::abs(ratio(sq.coefficient(Partition()) - Rational(1) / c2)),
                         std::abs(ratio(sq.coefficient(Partition({3})) - Rational(2 * (n - 2)) / c2)),
                         std::abs(ratio(sq.coefficient(Partition({2, 2})) - Rational((n - 2) * (n - 3) / 2) / c2))});
    }, 0.0);
    col.check("E[O_(2)] = p_2", 30, [](int i) {
        auto r = rand_state(i, 13);
        const int n = 2 + i % 5;
        return std::abs(expect_class(ClassElement::basis(ClassAvg(Partition({2}), n)), r.spectrum()) -
                        r.spectrum().power_sum(2));
    });
    col.check("dense Var[O_(2)] = var_purity", 8, [](int i) {
        const int d = 2 + i % 2;
        const int n = 2 + i / 2;
        auto r = rand_full(d, 14000 + i);
        auto [mean, var] =
            exact_moments(algebra_matrix(ClassElement::basis(ClassAvg(Partition({2}), n)), d), tensor_power(r, n));
        return std::max(std::abs(mean - r.spectrum().power_sum(2)), std::abs(var - var_purity(r.spectrum(), n)));
    });
    col.check("dense Var[O_(rs)] = var_linear_fidelity", 6, [](int i) {
        const int m = 1 + i % 3, n = 1 + i / 3;
        auto r = rand_full(2, 15000 + i), s = rand_full(2, 15100 + i);
        auto x = OrbitElement::basis(OrbitSignature::parse("(rs)"), m, n);
        auto [mean, var] = exact_moments(algebra_matrix(x, 2), bipartite_state(r, m, s, n));
        return std::max(std::abs(mean - (r.matrix() * s.matrix()).trace().real()),
                        std::abs(var - var_linear_fidelity(r, s, m, n)));
    });
    col.check("E[HS combination] = D_HS^2", 20, [](int i) {
        auto r = rand_state(i, 16);
        auto s = rand_full(r.dim(), 17000 + i);
        const int n = 2 + i % 4;
        const double hs = hs_distance(r, s);
        return std::abs(expect_orbit(hs_combination(n, n), r, s) - hs * hs);
    });
    col.check("dense Var[HS combination] = var_hs_exact", 2, [](int i) {
        const int n = 2 + i;
        auto r = rand_full(2, 18000 + i), s = rand_full(2, 18100 + i);
        auto [mean, var] = exact_moments(algebra_matrix(hs_combination(n, n), 2), bipartite_state(r, n, s, n));
        return std::abs(var - var_hs_exact(r, s, n));
    });
    col.check("var_hs_exact <= var_hs_bound", 40, [](int i) {
        auto r = rand_state(i, 19);
        auto s = rand_state(i, 20);
        const int n = 2 + 3 * i;
        return excess(var_hs_exact(r, s, n), var_hs_bound(r, s, n));
    });
}

void schurweyl_suite(Collector& col) {
    col.check("sw_pmf = dense tr(Pi_lambda rho^n)", 8, [](int i) {
        const int d = 2 + i % 2;
        const int n = 2 + i / 2;
        auto r = rand_full(d, 21000 + i);
        const auto pmf = sw_pmf(r.spectrum(), n);
        const auto state = tensor_power(r, n);
        double worst = 0;
        for (const auto& [lam, proj] : schur_projectors(d, n)) {
            const double dense = (proj.m * state.m).trace().real();
            const auto it = pmf.find(lam);
            worst = std::max(worst, std::abs(dense - (it == pmf.end() ? 0.0 : it->second)));
        }
        return worst;
    });
    col.check("sw_pmf sums to 1 and E[purity estimate] = p_2", 20, [](int i) {
        auto r = rand_state(i, 22);
        const int n = 2 + 2 * (i % 6);
        double total = 0, mean = 0;
        for (const auto& [lam, p] : sw_pmf(r.spectrum(), n)) {
            total += p;
            mean += p * purity_estimate(lam, n);
        }
        return std::max(std::abs(total - 1), std::abs(mean - r.spectrum().power_sum(2)));
    });
    col.check("r_lambda = chi_lambda(transposition) / dim", 7, [](int i) {
        const int n = 2 + i;
        double worst = 0;
        for (const auto& lam : partitions_of(n)) {
            const Rational ratio(character(lam, Partition({2})), hook_dimension_exact(lam));
            worst = std::max(worst, std::abs(certikit::ratio(r_lambda_exact(lam, n) - ratio)));
        }
        return worst;
    }, 0.0);
    col.check("gt_pmf marginal = sw_pmf", 6, [](int i) {
        const int d = 2 + i % 2;
        const int n = 2 + i / 2;
        const auto p = diag_of(rand_full(d, 23000 + i)).probs;
        std::map<Partition, double> marg;
        for (const auto& [k, pr] : gt_pmf(p, n)) marg[k.first] += pr;
        std::vector<double> sorted = p;
        std::sort(sorted.rbegin(), sorted.rend());
        double worst = 0;
        for (const auto& [lam, pr] : sw_pmf(Spectrum{sorted}, n)) worst = std::max(worst, std::abs(marg[lam] - pr));
        return worst;
    });
    col.check("E[alt-HS estimate] = D_HS^2 (diagonal pairs)", 6, [](int i) {
        const int d = 2 + i % 3;
        const int n = 2 + 2 * (i / 3);
        auto r = rand_diag(d, 24000 + i), s = rand_diag(d, 24100 + i);
        const auto p = diag_of(r).probs, beta = diag_of(s).probs;
        double mean = 0;
        for (const auto& [k, pr] : gt_pmf(p, n)) mean += pr * alt_hs_estimate(GTSample{k.first, k.second}, beta, n);
        const double hs = hs_distance(r, s);
        return std::abs(mean - hs * hs);
    });
}

void chisq_suite(Collector& col) {
    const int N = 100;
    auto instance = [](int i) {
        const int d = 2 + i % 5;
        auto sigma = rand_diag(d, 30000 + i);
        auto rho = random_state(d, 1 + i % d, 31000 + i);
        return std::make_pair(rho, sigma);
    };
    auto sig_matrix = [](const ChiContext& ctx) {
        Matrix s = Matrix::Zero(ctx.dim(), ctx.dim());
        for (int k = 0; k < ctx.dim(); ++k) s(k, k) = ctx.beta().values[k];
        return s;
    };
    col.check("tr_2(S, sigma) = tr_2(sigma, S) = tr S", N, [&](int i) {
        auto [rho, sigma] = instance(i);
        ChiContext ctx = ChiContext::from_diagonal_state(sigma);
        Rng rng = make_stream(32, i);
        Matrix s = random_unitary(ctx.dim(), rng) * Complex(0.3, 0.7);
        const Matrix sig = sig_matrix(ctx);
        return std::max(std::abs(trtwo(s, sig, ctx) - s.trace()), std::abs(trtwo(sig, s, ctx) - s.trace()));
    }, 1e-12);
    col.check("tr_3(sigma, S, T) = tr_3(S, T, sigma) = tr_2(S, T)", N, [&](int i) {
        auto [rho, sigma] = instance(i);
        ChiContext ctx = ChiContext::from_diagonal_state(sigma);
        Rng rng = make_stream(33, i);
        const Matrix s = random_unitary(ctx.dim(), rng), t = random_unitary(ctx.dim(), rng);
        const Matrix sig = sig_matrix(ctx);
        const Complex st = trtwo(s, t, ctx);
        const double scale = std::max(1.0, std::abs(st));
        return std::max(std::abs(trthree(sig, s, t, ctx) - st), std::abs(trthree(s, t, sig, ctx) - st)) / scale;
    }, 1e-12);
    col.check("tr_3(rho,rho,rho) - tr_2^2 = tr_3(D,D,D) + tr_3(D,sigma,D) - D^2", N, [&](int i) {
        auto [rho, sigma] = instance(i);
        ChiContext ctx = ChiContext::from_diagonal_state(sigma);
        const Matrix& r = rho.matrix();
        const Matrix delta = r - sig_matrix(ctx);
        const double D = chi_mean(rho, ctx);
        const double two = trtwo(r, r, ctx).real();
        const double lhs = trthree(r, r, r, ctx).real() - two * two;
        const double rhs = trthree(delta, delta, delta, ctx).real() + trthree(delta, sig_matrix(ctx), delta, ctx).real() -
                           D * D;
        return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
    });
    col.check("tr_3(D, sigma, D) <= 2 chi2_B", N, [&](int i) {
        auto [rho, sigma] = instance(i);
        ChiContext ctx = ChiContext::from_diagonal_state(sigma);
        const Matrix delta = rho.matrix() - sig_matrix(ctx);
        return excess(trthree(delta, sig_matrix(ctx), delta, ctx).real(), 2 * chi_mean(rho, ctx));
    });
    col.check("tr_3(D, D, D) <= sqrt(2d/delta) chi2_B^1.5", N, [&](int i) {
        auto [rho, sigma] = instance(i);
        ChiContext ctx = ChiContext::from_diagonal_state(sigma);
        const Matrix delta = rho.matrix() - sig_matrix(ctx);
        const double D = chi_mean(rho, ctx);
        return excess(trthree(delta, delta, delta, ctx).real(),
                      std::sqrt(2.0 * ctx.dim() / ctx.delta()) * std::pow(std::max(0.0, D), 1.5));
    });
    col.check("E[X^2] <= 2d^2 + (2d/delta) chi2_B", N, [&](int i) {
        auto [rho, sigma] = instance(i);
        ChiContext ctx = ChiContext::from_diagonal_state(sigma);
        const double d = ctx.dim();
        return excess(chi_second_moment(rho, ctx), 2 * d * d + 2 * d / ctx.delta() * chi_mean(rho, ctx));
    });
    col.check("chi_var_exact <= chi_var_bound", N, [&](int i) {
        auto [rho, sigma] = instance(i);
        ChiContext ctx = ChiContext::from_diagonal_state(sigma);
        const int n = 2 + i % 40;
        return excess(chi_var_exact(rho, ctx, n), chi_var_bound(rho, ctx, n));
    });
    col.check("dense averaged observable: mean = chi2_B, variance = chi_var_exact", 6, [&](int i) {
        const int d = 2 + i % 2;
        const int n = 2 + i / 2;
        auto sigma = rand_diag(d, 34000 + i);
        auto rho = rand_full(d, 34100 + i);
        ChiContext ctx = ChiContext::from_diagonal_state(sigma);
        auto [mean, var] = exact_moments(chi_averaged_observable(ctx, n), tensor_power(rho, n));
        return std::max(std::abs(mean - bures_chisq(rho, sigma)), std::abs(var - chi_var_exact(rho, ctx, n)));
    });
}

}  // namespace

bool SuiteReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed(); });
}

std::string SuiteReport::to_text() const {
    std::string out;
    char buf[64];
    for (const auto& c : checks) {
        std::snprintf(buf, sizeof buf, "%.3e", c.worst_residual);
        out += std::string(c.passed() ? "PASS" : "FAIL") + "  " + c.suite + "  " + c.identity + "  cases=" +
               std::to_string(c.cases) + "  worst=" + buf + "\n";
    }
    return out;
}

std::vector<std::string> verify_suite_names() { return {"distances", "symalg", "schurweyl", "chisq", "all"}; }

SuiteReport run_verify_suite(const std::string& suite, std::optional<double> tolerance) {
    using Fn = void (*)(Collector&);
    const std::vector<std::pair<std::string, Fn>> suites{
        {"distances", distances_suite}, {"symalg", symalg_suite}, {"schurweyl", schurweyl_suite}, {"chisq", chisq_suite}};
    if (tolerance && !(*tolerance >= 0)) fail(ErrorKind::InvalidArgument, "tolerance must be nonnegative");
    SuiteReport report;
    bool found = false;
    for (const auto& [name, fn] : suites) {
        if (suite != "all" && suite != name) continue;
        found = true;
        Collector col(name, tolerance, report);
        fn(col);
    }
    if (!found) fail(ErrorKind::SuiteUnknown, "unknown suite '" + suite + "' (distances, symalg, schurweyl, chisq, all)");
    return report;
}

}  // namespace certikit
