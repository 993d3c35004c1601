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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "certikit/symalg.hpp"
#include "json.hpp"

namespace certikit {

double default_fidelity_c() {
    const double half_gap = (std::sqrt(0.5) - std::sqrt(0.495)) / 2.0;
    return half_gap * half_gap / 2.0;
}

double low_rank_c() { return 1.0 / (1.0 + 1.0 / std::sqrt(2.0)); }

// ---------------------------------------------------------------------------
// Planner.

EstimatorProfile mixedness_profile() {
    return {"mixedness", [](double) { return 4.0; }, [](double mu) { return 4.0 * mu; }};
}

EstimatorProfile hs_profile() {
    return {"hs", [](double) { return 16.0; }, [](double mu) { return 8.0 * mu; }};
}

EstimatorProfile chisq_profile(int d, double delta) {
    if (!(delta > 0)) fail(ErrorKind::SigmaSingular, "chi-squared profile needs a full-rank reference");
    const double dd = d;
    const double r = std::sqrt(2.0 * dd / delta);
    return {"chisq", [=](double mu) { return 4.0 * (2.0 * dd * dd + 2.0 * dd / delta * mu); },
            [=](double mu) { return 4.0 * (r * std::pow(mu, 1.5) + 2.0 * mu); }};
}

void validate_profile(const EstimatorProfile& p, double theta) {
    constexpr int kGrid = 256;
    const double top = 16.0 * theta;
    double prev[4] = {0, 0, 0, 0};
    for (int k = 1; k <= kGrid; ++k) {
        const double mu = top * k / kGrid;
        const double b = p.b(mu), v = p.v(mu);
        if (!(b > 0) || !(v > 0) || !std::isfinite(b) || !std::isfinite(v))
            fail(ErrorKind::BadProfile, p.name + ": envelopes must be positive and finite");
        const double cur[4] = {b, v, mu * mu / b, mu * mu / v};
        static const char* names[4] = {"b", "v", "mu^2/b", "mu^2/v"};
        if (k > 1)
            for (int j = 0; j < 4; ++j)
                if (cur[j] < prev[j] * (1 - 1e-12))
                    fail(ErrorKind::BadProfile, p.name + ": " + names[j] + " decreases near mu = " + std::to_string(mu));
        std::copy(cur, cur + 4, prev);
    }
}

double envelope_error(const EstimatorProfile& p, double theta, double gamma, std::int64_t n) {
    const double g = (1.0 - gamma) * theta;
    const double nn = static_cast<double>(n);
    return std::min(1.0, 4.0 * (p.b(theta) / (nn * nn) + p.v(theta) / nn) / (g * g));
}

TestPlan plan_samples(const EstimatorProfile& p, double theta, double gamma, double C) {
    if (!(theta > 0) || !std::isfinite(theta)) fail(ErrorKind::BadTheta, "theta must be positive and finite");
    if (!(gamma > 0 && gamma < 1)) fail(ErrorKind::BadGamma, "gamma must lie in (0, 1)");
    if (!(C > 0) || !std::isfinite(C)) fail(ErrorKind::InvalidArgument, "planner constant must be positive");
    validate_profile(p, theta);
    const double g = (1.0 - gamma) * theta;
    const double raw = std::ceil(C * std::max(std::sqrt(p.b(theta)) / g, p.v(theta) / (g * g)));
    if (!(raw < 4e18)) fail(ErrorKind::TooLarge, "planned sample size overflows");
    TestPlan plan;
    plan.n = std::max<std::int64_t>(2, static_cast<std::int64_t>(raw));
    plan.theta = theta;
    plan.gamma = gamma;
    plan.C = C;
    plan.profile = p.name;
    plan.guaranteed_error = envelope_error(p, theta, gamma, plan.n);
    return plan;
}

double certified_error(double mean, double variance, double threshold) {
    const double gap = std::abs(mean - threshold);
    if (gap == 0) return 1.0;
    return std::min(1.0, std::max(0.0, variance) / (gap * gap));
}

const char* to_string(Verdict v) { return v == Verdict::Close ? "close" : "far"; }

TestVerdict decide(double xbar, const TestPlan& plan) {
    TestVerdict out;
    out.verdict = xbar <= plan.threshold() ? Verdict::Close : Verdict::Far;
    out.statistic = xbar;
    out.plan = plan;
    out.copies_used = plan.n;
    out.guaranteed_error = plan.guaranteed_error;
    return out;
}

std::string TestVerdict::to_json() const {
    nlohmann::ordered_json j;
    j["verdict"] = to_string(verdict);
    j["statistic"] = statistic;
    j["n"] = plan.n;
    j["theta"] = plan.theta;
    if (guaranteed_error)
        j["guaranteed_error"] = *guaranteed_error;
    else
        j["guaranteed_error"] = nullptr;
    j["copies_used"] = copies_used;
    j["seed"] = seed;
    return j.dump();
}

// ---------------------------------------------------------------------------
// Names.

const char* to_string(Backend b) {
    switch (b) {
        case Backend::Rsk: return "rsk";
        case Backend::Dense: return "dense";
        case Backend::Analytic: return "analytic";
        case Backend::Pinched: return "pinched";
    }
    return "?";
}

Backend parse_backend(const std::string& s) {
    for (Backend b : {Backend::Rsk, Backend::Dense, Backend::Analytic, Backend::Pinched})
        if (s == to_string(b)) return b;
    fail(ErrorKind::InvalidArgument, "unknown backend '" + s + "' (expected rsk, dense, analytic or pinched)");
}

const char* to_string(TestKind k) {
    switch (k) {
        case TestKind::Mixedness: return "mixedness";
        case TestKind::HilbertSchmidt: return "hs";
        case TestKind::Trace: return "trace";
        case TestKind::LowRank: return "lowrank";
        case TestKind::ChiSquared: return "chisq";
        case TestKind::Fidelity: return "fidelity";
        case TestKind::Diagonal: return "diagonal";
    }
    return "?";
}

TestKind parse_test_kind(const std::string& s) {
    for (TestKind k : {TestKind::Mixedness, TestKind::HilbertSchmidt, TestKind::Trace, TestKind::LowRank,
                       TestKind::ChiSquared, TestKind::Fidelity, TestKind::Diagonal})
        if (s == to_string(k)) return k;
    fail(ErrorKind::InvalidArgument, "unknown test '" + s + "'");
}

// ---------------------------------------------------------------------------
// Sampling helpers.

std::vector<std::int64_t> sample_multinomial(std::span<const double> p, std::int64_t n, Rng& rng) {
    std::vector<std::int64_t> counts(p.size(), 0);
    double mass = 0;
    for (double x : p) mass += std::max(0.0, x);
    std::int64_t left = n;
    for (std::size_t i = 0; i + 1 < p.size() && left > 0; ++i) {
        const double pi = std::max(0.0, p[i]);
        const double q = mass > 0 ? std::clamp(pi / mass, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::int64_t> bin(left, q);
        counts[i] = bin(rng);
        left -= counts[i];
        mass -= pi;
    }
    if (!p.empty()) counts.back() += left;
    return counts;
}

double pinched_chisq_variance(std::span<const double> p, std::span<const double> beta, std::int64_t n) {
    if (p.size() != beta.size()) fail(ErrorKind::DimMismatch, "p and beta have different lengths");
    if (n < 2) fail(ErrorKind::NTooSmall, "collision statistic needs n >= 2");
    double a = 0, s2 = 0, s3 = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        a += p[i] * p[i] / beta[i];
        s2 += p[i] * p[i] / (beta[i] * beta[i]);
        s3 += p[i] * p[i] * p[i] / (beta[i] * beta[i]);
    }
    const double nn = static_cast<double>(n);
    const double pairs = 0.5 * nn * (nn - 1);
    return ((s2 - a * a) + 2.0 * (nn - 2) * (s3 - a * a)) / pairs;
}

namespace {

void require_eps(double eps) {
    if (!(eps > 0) || !std::isfinite(eps)) fail(ErrorKind::EpsOutOfRange, "eps must be positive");
}

void require_unit_eps(double eps) {
    if (!(eps > 0 && eps <= 1)) fail(ErrorKind::EpsOutOfRange, "eps must lie in (0, 1]");
}

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) fail(ErrorKind::DimMismatch, "states have different dimensions");
}

[[noreturn]] void unsupported(TestKind k, Backend b, const std::string& why = "") {
    fail(ErrorKind::BackendUnsupported, std::string("backend '") + to_string(b) + "' is not available for the " +
                                            to_string(k) + " test" + (why.empty() ? "" : ": " + why));
}

std::vector<double> diagonal_of(const DensityMatrix& rho) {
    std::vector<double> p(rho.dim());
    for (int i = 0; i < rho.dim(); ++i) p[i] = std::max(0.0, rho.matrix()(i, i).real());
    return p;
}

std::optional<Verdict> region(bool close, bool far) {
    if (close) return Verdict::Close;
    if (far) return Verdict::Far;
    return std::nullopt;
}

/// Applies an optional n override and recomputes the envelope guarantee.
TestPlan finish_plan(const EstimatorProfile& p, double theta, double gamma, const TesterOptions& opts) {
    TestPlan plan = plan_samples(p, theta, gamma, opts.C.value_or(kChebyshevC));
    if (opts.n) {
        if (*opts.n < 2) fail(ErrorKind::NTooSmall, "n must be at least 2");
        plan.n = *opts.n;
        plan.guaranteed_error = envelope_error(p, theta, gamma, plan.n);
    }
    return plan;
}

/// Discrete law over real outcomes, sampled with an alias table.
class OutcomeSampler {
   public:
    OutcomeSampler() = default;
    OutcomeSampler(std::vector<double> values, const std::vector<double>& probs)
        : values_(std::move(values)), table_(std::make_unique<AliasTable>(probs)) {}
    double sample(Rng& rng) const { return values_[table_->sample(rng)]; }

   private:
    std::vector<double> values_;
    std::shared_ptr<AliasTable> table_;
};

// -- mixedness ---------------------------------------------------------------

class MixednessTester final : public Tester {
   public:
    MixednessTester(const DensityMatrix& rho, double eps, const TesterOptions& opts)
        : Tester(TestKind::Mixedness, opts), d_(rho.dim()) {
        require_eps(eps);
        plan_ = finish_plan(mixedness_profile(), eps * eps, kDistanceGamma, opts_);
        const Spectrum spec = rho.spectrum();
        true_mean_ = spec.power_sum(2) - 1.0 / d_;
        variance_ = var_purity(spec, static_cast<int>(std::min<std::int64_t>(plan_.n, INT32_MAX)));
        const double dist = std::sqrt(std::max(0.0, true_mean_));
        truth_ = region(dist <= 0.99 * eps, dist > eps);
        switch (opts_.backend) {
            case Backend::Rsk: {
                std::vector<double> p(spec.values.begin(), spec.values.end());
                for (double& x : p) x = std::max(0.0, x);
                alias_ = std::make_shared<AliasTable>(p);
                break;
            }
            case Backend::Dense: {
                if (plan_.n > 8) fail(ErrorKind::TooLarge, "dense weak Schur sampling needs n <= 8");
                const int n = static_cast<int>(plan_.n);
                auto state = tensor_power(rho, n, opts_.dense_cap);
                std::vector<double> values, probs;
                for (const auto& [lam, proj] : schur_projectors(d_, n, opts_.dense_cap)) {
                    values.push_back(mixedness_statistic(lam, n, d_));
                    probs.push_back(std::max(0.0, (proj.m * state.m).trace().real()));
                }
                dense_ = OutcomeSampler(values, probs);
                break;
            }
            case Backend::Analytic: break;
            default: unsupported(kind_, opts_.backend);
        }
    }

    TestVerdict run(Rng& rng) const override {
        if (opts_.backend == Backend::Analytic) {
            TestVerdict v = decide(true_mean_, plan_);
            v.guaranteed_error = certified_error(true_mean_, *variance_, plan_.threshold());
            return v;
        }
        return amplify(rng, [this](Rng& r) { return one(r); });
    }

   private:
    double one(Rng& rng) const {
        if (opts_.backend == Backend::Dense) return dense_.sample(rng);
        RskInserter ins(alias_->size());
        for (std::int64_t t = 0; t < plan_.n; ++t) ins.insert(alias_->sample(rng));
        return mixedness_statistic(ins.shape(), static_cast<int>(plan_.n), d_);
    }

    int d_;
    std::shared_ptr<AliasTable> alias_;
    OutcomeSampler dense_;
};

// -- Hilbert-Schmidt and its reductions --------------------------------------

class HsTester final : public Tester {
   public:
    /// `param` is the HS-distance threshold; `truth` the caller's promise label.
    HsTester(TestKind kind, const DensityMatrix& rho, const DensityMatrix& sigma, double param,
             std::optional<Verdict> truth, const TesterOptions& opts)
        : Tester(kind, opts), rho_(rho), sigma_(sigma) {
        require_same_dim(rho, sigma);
        plan_ = finish_plan(hs_profile(), param * param, kDistanceGamma, opts_);
        const double hs = hs_distance(rho, sigma);
        true_mean_ = hs * hs;
        truth_ = truth;
        const int n = static_cast<int>(std::min<std::int64_t>(plan_.n, INT32_MAX));
        switch (opts_.backend) {
            case Backend::Analytic:
                true_mean_ = expect_orbit(hs_combination(n, n), rho, sigma);
                variance_ = var_hs_exact(rho, sigma, n);
                break;
            case Backend::Dense: {
                if (plan_.n > 4) fail(ErrorKind::TooLarge, "dense (lambda, mu, nu) sampling needs n <= 4");
                dense_dimension(rho.dim(), 2 * n, opts_.dense_cap);
                std::vector<double> values, probs;
                for (const auto& [t, p] : hs_triple_pmf(rho, sigma, n)) {
                    values.push_back(hs_estimate(t.lambda, t.mu, t.nu, n));
                    probs.push_back(p);
                }
                dense_ = OutcomeSampler(values, probs);
                variance_ = var_hs_exact(rho, sigma, n);
                break;
            }
            case Backend::Rsk: {
                if (!rho.is_diagonal(1e-12) || !sigma.is_diagonal(1e-12))
                    unsupported(kind_, opts_.backend, "both states must be diagonal in the standard basis");
                p_ = diagonal_of(rho);
                beta_ = diagonal_of(sigma);
                alias_ = std::make_shared<AliasTable>(p_);
                break;
            }
            default: unsupported(kind_, opts_.backend);
        }
    }

    TestVerdict run(Rng& rng) const override {
        if (opts_.backend == Backend::Analytic) {
            TestVerdict v = decide(true_mean_, plan_);
            v.guaranteed_error = certified_error(true_mean_, *variance_, plan_.threshold());
            return v;
        }
        return amplify(rng, [this](Rng& r) { return one(r); });
    }

   private:
    double one(Rng& rng) const {
        if (opts_.backend == Backend::Dense) return dense_.sample(rng);
        GTSample s;
        RskInserter ins(alias_->size());
        s.type.counts.assign(alias_->size(), 0);
        for (std::int64_t t = 0; t < plan_.n; ++t) {
            const int x = alias_->sample(rng);
            ins.insert(x);
            ++s.type.counts[x];
        }
        s.shape = ins.shape();
        return alt_hs_estimate(s, beta_, static_cast<int>(plan_.n));
    }

    DensityMatrix rho_, sigma_;
    std::vector<double> p_, beta_;
    std::shared_ptr<AliasTable> alias_;
    OutcomeSampler dense_;
};

// -- chi-squared core --------------------------------------------------------

/// Rotates rho into sigma's eigenbasis (identity when sigma is already diagonal).
std::pair<DensityMatrix, Spectrum> to_sigma_basis(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (sigma.is_diagonal(1e-14)) return {rho, Spectrum{diagonal_of(sigma)}};
    const Matrix& u = sigma.eigenvectors();
    const RealVector& ev = sigma.eigenvalues();
    return {rho.conjugated(u.adjoint()), Spectrum{std::vector<double>(ev.data(), ev.data() + ev.size())}};
}

class ChiTester final : public Tester {
   public:
    ChiTester(TestKind kind, const DensityMatrix& rho, const DensityMatrix& sigma, double theta, double gamma,
              std::optional<Verdict> truth, const TesterOptions& opts)
        : Tester(kind, opts), rotated_(to_sigma_basis(rho, sigma)), ctx_(rotated_.second) {
        const DensityMatrix& r = rotated_.first;
        plan_ = finish_plan(chisq_profile(ctx_.dim(), ctx_.delta()), theta, gamma, opts_);
        true_mean_ = chi_mean(r, ctx_);
        truth_ = truth;
        const std::int64_t n = plan_.n;
        switch (opts_.backend) {
            case Backend::Analytic:
                variance_ = chi_var_exact(r, ctx_, static_cast<int>(std::min<std::int64_t>(n, INT32_MAX)));
                break;
            case Backend::Dense: {
                if (n > 12) fail(ErrorKind::TooLarge, "dense chi-squared sampling needs a small n");
                auto dist = exact_distribution(chi_averaged_observable(ctx_, static_cast<int>(n), opts_.dense_cap),
                                               tensor_power(r, static_cast<int>(n), opts_.dense_cap));
                std::vector<double> values, probs;
                for (const auto& o : dist.outcomes) {
                    values.push_back(o.value);
                    probs.push_back(std::max(0.0, o.prob));
                }
                dense_ = OutcomeSampler(values, probs);
                variance_ = chi_var_exact(r, ctx_, static_cast<int>(n));
                break;
            }
            case Backend::Pinched:
                if (!r.is_diagonal(1e-10))
                    unsupported(kind_, opts_.backend, "rho must commute with the reference state");
                p_ = diagonal_of(r);
                variance_ = pinched_chisq_variance(p_, ctx_.beta().values, n);
                break;
            default: unsupported(kind_, opts_.backend);
        }
    }

    TestVerdict run(Rng& rng) const override {
        if (opts_.backend == Backend::Analytic) {
            TestVerdict v = decide(true_mean_, plan_);
            v.guaranteed_error = certified_error(true_mean_, *variance_, plan_.threshold());
            return v;
        }
        return amplify(rng, [this](Rng& r) { return one(r); });
    }

   private:
    double one(Rng& rng) const {
        if (opts_.backend == Backend::Dense) return dense_.sample(rng);
        const auto counts = sample_multinomial(p_, plan_.n, rng);
        const double nn = static_cast<double>(plan_.n);
        double acc = 0;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            const double x = static_cast<double>(counts[i]);
            acc += x * (x - 1) / ctx_.beta().values[i];
        }
        return acc / (nn * (nn - 1)) - 1.0;
    }

    std::pair<DensityMatrix, Spectrum> rotated_;
    ChiContext ctx_;
    std::vector<double> p_;
    OutcomeSampler dense_;
};

double bures_chisq_or_inf(const DensityMatrix& rho, const DensityMatrix& sigma) {
    try {
        return bures_chisq(rho, sigma);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::SigmaSingular) return std::numeric_limits<double>::infinity();
        throw;
    }
}

std::unique_ptr<Tester> fidelity_core(const DensityMatrix& rho, const DensityMatrix& sigma, double eps,
                                      const TesterOptions& opts, std::optional<Verdict> truth) {
    require_same_dim(rho, sigma);
    require_unit_eps(eps);
    const double eta = opts.fidelity_c * eps;
    if (!(eta > 0 && eta <= 1)) fail(ErrorKind::EtaOutOfRange, "depolarization strength must lie in (0, 1]");
    return std::make_unique<ChiTester>(TestKind::Fidelity, depolarize(rho, eta), depolarize(sigma, eta), 0.495 * eps,
                                       0.49 / 0.495, truth, opts);
}

std::optional<Verdict> fidelity_truth(const DensityMatrix& rho, const DensityMatrix& sigma, double eps) {
    return region(bures_chisq_or_inf(rho, sigma) <= 0.49 * eps, bures_sq(rho, sigma) > 0.5 * eps);
}

// -- diagonality -------------------------------------------------------------

class DiagonalTester final : public Tester {
   public:
    DiagonalTester(const DensityMatrix& rho, double eps, const TesterOptions& opts)
        : Tester(TestKind::Diagonal, opts), rho_(rho), eps_(eps), p_(diagonal_of(rho)) {
        require_unit_eps(eps);
        const int d = rho.dim();
        plan_ = fidelity_worst_case_plan(d, eps, opts_.C.value_or(kChebyshevC), opts_.fidelity_c);
        const auto markov = static_cast<std::int64_t>(std::ceil(3.0 * (d - 1) / (0.49 * eps)));
        n_stage_ = opts_.n ? *opts_.n : std::max(markov, plan_.n);
        if (n_stage_ < 2) fail(ErrorKind::NTooSmall, "n must be at least 2");
        plan_.n = n_stage_;
        inner_opts_ = opts_;
        inner_opts_.n = n_stage_;
        inner_opts_.batches = 1;
        if (rho.is_diagonal(1e-12)) {
            truth_ = Verdict::Close;
        } else if (rho.eigenvalues()(d - 1) > 1 - 1e-12) {
            // Pure: the best diagonal state has fidelity sqrt(max_i rho_ii).
            const double best = std::sqrt(*std::max_element(p_.begin(), p_.end()));
            if (2.0 * (1.0 - best) > 0.5 * eps) truth_ = Verdict::Far;
        }
        true_mean_ = 0;
    }

    std::int64_t copies_per_run() const override { return 2 * n_stage_ * opts_.batches; }

    TestVerdict run(Rng& rng) const override {
        TestVerdict v = amplify(rng, [this](Rng& r) { return one(r); });
        v.copies_used = copies_per_run();
        return v;
    }

   private:
    double one(Rng& rng) const {
        const auto counts = sample_multinomial(p_, n_stage_, rng);
        const DensityMatrix sigma = diagonal_state(add_one_estimate(counts, n_stage_));
        auto inner = fidelity_core(rho_, sigma, eps_, inner_opts_, std::nullopt);
        return inner->run(rng).statistic;
    }

    DensityMatrix rho_;
    double eps_;
    std::vector<double> p_;
    std::int64_t n_stage_ = 0;
    TesterOptions inner_opts_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Tester base.

std::int64_t Tester::copies_per_run() const {
    return opts_.backend == Backend::Analytic ? plan_.n : plan_.n * opts_.batches;
}

TestVerdict Tester::amplify(Rng& rng, const std::function<double(Rng&)>& one_statistic) const {
    if (opts_.batches < 1 || opts_.batches % 2 == 0)
        fail(ErrorKind::InvalidArgument, "batches must be a positive odd number");
    std::vector<double> xs(opts_.batches);
    int close = 0;
    for (double& x : xs) {
        x = one_statistic(rng);
        if (x <= plan_.threshold()) ++close;
    }
    std::nth_element(xs.begin(), xs.begin() + xs.size() / 2, xs.end());
    TestVerdict v = decide(xs[xs.size() / 2], plan_);
    // The median lies on the majority side, so the verdict agrees with the vote.
    v.verdict = 2 * close > opts_.batches ? Verdict::Close : Verdict::Far;
    v.copies_used = copies_per_run();
    return v;
}

// ---------------------------------------------------------------------------
// Factories.

std::unique_ptr<Tester> make_mixedness_tester(const DensityMatrix& rho, double eps, const TesterOptions& opts) {
    return std::make_unique<MixednessTester>(rho, eps, opts);
}

std::unique_ptr<Tester> make_hs_tester(const DensityMatrix& rho, const DensityMatrix& sigma, double eps,
                                       const TesterOptions& opts) {
    require_eps(eps);
    require_same_dim(rho, sigma);
    const double hs = hs_distance(rho, sigma);
    return std::make_unique<HsTester>(TestKind::HilbertSchmidt, rho, sigma, eps, region(hs <= 0.99 * eps, hs > eps),
                                      opts);
}

std::unique_ptr<Tester> make_trace_tester(const DensityMatrix& rho, const DensityMatrix& sigma, double eps,
                                          const TesterOptions& opts) {
    require_eps(eps);
    require_same_dim(rho, sigma);
    const double param = 2.0 * eps / std::sqrt(static_cast<double>(rho.dim()));
    const double hs = hs_distance(rho, sigma);
    return std::make_unique<HsTester>(TestKind::Trace, rho, sigma, param,
                                      region(hs <= 0.99 * param, trace_distance(rho, sigma) > eps), opts);
}

std::unique_ptr<Tester> make_low_rank_tester(const DensityMatrix& rho, const DensityMatrix& sigma, double eps,
                                             const TesterOptions& opts) {
    require_eps(eps);
    require_same_dim(rho, sigma);
    const int k = opts.rank;
    if (k < 1 || k > rho.dim()) fail(ErrorKind::RankOutOfRange, "rank must lie in [1, d]");
    const double param = low_rank_c() * eps / std::sqrt(static_cast<double>(k));
    const PcaCheck pca = verify_pca_inequality(rho, sigma, k, eps);
    return std::make_unique<HsTester>(TestKind::LowRank, rho, sigma, param,
                                      region(pca.hs <= 0.99 * param, pca.trace > pca.delta + eps), opts);
}

std::unique_ptr<Tester> make_chisq_tester(const DensityMatrix& rho, const DensityMatrix& sigma, double eps,
                                          const TesterOptions& opts) {
    require_eps(eps);
    require_same_dim(rho, sigma);
    const int d = sigma.dim();
    const double lmin = sigma.min_eigenvalue();
    if (!(lmin > Tolerances{}.full_rank)) fail(ErrorKind::SigmaSingular, "reference state is not full rank");
    if (lmin < opts.condition_floor * eps * eps / d)
        fail(ErrorKind::SigmaIllConditioned, "smallest eigenvalue of the reference is below the conditioning floor");
    const double D = bures_chisq(rho, sigma);
    return std::make_unique<ChiTester>(TestKind::ChiSquared, rho, sigma, eps * eps, kDivergenceGamma,
                                       region(D <= 0.99 * eps * eps, D > eps * eps), opts);
}

std::unique_ptr<Tester> make_fidelity_tester(const DensityMatrix& rho, const DensityMatrix& sigma, double eps,
                                             const TesterOptions& opts) {
    require_same_dim(rho, sigma);
    require_unit_eps(eps);
    return fidelity_core(rho, sigma, eps, opts, fidelity_truth(rho, sigma, eps));
}

std::unique_ptr<Tester> make_diagonal_tester(const DensityMatrix& rho, double eps, const TesterOptions& opts) {
    return std::make_unique<DiagonalTester>(rho, eps, opts);
}

std::unique_ptr<Tester> make_tester(TestKind kind, const DensityMatrix& rho, const DensityMatrix* sigma, double eps,
                                    const TesterOptions& opts) {
    auto need_sigma = [&]() -> const DensityMatrix& {
        if (!sigma) fail(ErrorKind::InvalidArgument, std::string("the ") + to_string(kind) + " test needs --sigma");
        return *sigma;
    };
    switch (kind) {
        case TestKind::Mixedness: return make_mixedness_tester(rho, eps, opts);
        case TestKind::HilbertSchmidt: return make_hs_tester(rho, need_sigma(), eps, opts);
        case TestKind::Trace: return make_trace_tester(rho, need_sigma(), eps, opts);
        case TestKind::LowRank: return make_low_rank_tester(rho, need_sigma(), eps, opts);
        case TestKind::ChiSquared: return make_chisq_tester(rho, need_sigma(), eps, opts);
        case TestKind::Fidelity: return make_fidelity_tester(rho, need_sigma(), eps, opts);
        case TestKind::Diagonal: return make_diagonal_tester(rho, eps, opts);
    }
    fail(ErrorKind::InvalidArgument, "unknown test kind");
}

TestVerdict test_maximally_mixed(const DensityMatrix& rho, double eps, const TesterOptions& opts, Rng& rng) {
    return make_mixedness_tester(rho, eps, opts)->run(rng);
}
TestVerdict test_hs_two_state(const DensityMatrix& rho, const DensityMatrix& sigma, double eps,
                              const TesterOptions& opts, Rng& rng) {
    return make_hs_tester(rho, sigma, eps, opts)->run(rng);
}
TestVerdict test_trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma, double eps,
                                const TesterOptions& opts, Rng& rng) {
    return make_trace_tester(rho, sigma, eps, opts)->run(rng);
}
TestVerdict test_low_rank(const DensityMatrix& rho, const DensityMatrix& sigma, double eps, const TesterOptions& opts,
                          Rng& rng) {
    return make_low_rank_tester(rho, sigma, eps, opts)->run(rng);
}
TestVerdict test_chisq_known_sigma(const DensityMatrix& rho, const DensityMatrix& sigma, double eps,
                                   const TesterOptions& opts, Rng& rng) {
    return make_chisq_tester(rho, sigma, eps, opts)->run(rng);
}
TestVerdict test_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma, double eps, const TesterOptions& opts,
                          Rng& rng) {
    return make_fidelity_tester(rho, sigma, eps, opts)->run(rng);
}
TestVerdict test_diagonal(const DensityMatrix& rho, double eps, const TesterOptions& opts, Rng& rng) {
    return make_diagonal_tester(rho, eps, opts)->run(rng);
}

TestPlan fidelity_worst_case_plan(int d, double eps, double C, double fidelity_c) {
    require_unit_eps(eps);
    const double delta = fidelity_c * eps / d;
    return plan_samples(chisq_profile(d, delta), 0.495 * eps, 0.49 / 0.495, C);
}

PcaCheck verify_pca_inequality(const DensityMatrix& rho, const DensityMatrix& sigma, int k, double eps) {
    require_same_dim(rho, sigma);
    if (k < 1 || k > sigma.dim()) fail(ErrorKind::RankOutOfRange, "rank must lie in [1, d]");
    const RealVector& ev = sigma.eigenvalues();  // ascending
    double top = 0;
    for (int i = 0; i < k; ++i) top += ev(sigma.dim() - 1 - i);
    PcaCheck c;
    c.delta = std::max(0.0, 1.0 - top);
    c.hs = hs_distance(rho, sigma);
    c.trace = trace_distance(rho, sigma);
    c.hypothesis = c.hs <= low_rank_c() * eps / std::sqrt(static_cast<double>(k));
    c.conclusion = c.trace <= c.delta + eps + 1e-12;
    return c;
}

}  // namespace certikit
