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

#include "certikit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace certikit {

using json = nlohmann::ordered_json;

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        double x = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return x;
    } catch (const std::exception&) {
        fail(ErrorKind::InvalidArgument, "cannot parse " + what + " '" + s + "' as a number");
    }
}

long long to_int(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        long long x = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return x;
    } catch (const std::exception&) {
        fail(ErrorKind::InvalidArgument, "cannot parse " + what + " '" + s + "' as an integer");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::InvalidArgument, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
    out << text;
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidArgument, what + " is not valid JSON: " + e.what());
    }
}

DensityMatrix basis_state(int d, int i) {
    if (d < 1 || i < 0 || i >= d) fail(ErrorKind::InvalidArgument, "basis index out of range");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d);
    psi(i) = 1;
    return pure_state(psi);
}

DensityMatrix generator_state(const json& g) {
    try {
        const std::string name = g.at("name").get<std::string>();
        if (name == "mixed" || name == "maximally_mixed") return maximally_mixed(g.at("d").get<int>());
        if (name == "paninski") return paninski(g.at("d").get<int>(), g.at("eps").get<double>());
        if (name == "random")
            return random_state(g.at("d").get<int>(), g.value("rank", g.at("d").get<int>()),
                                g.at("seed").get<std::uint64_t>());
        if (name == "pure") return basis_state(g.at("d").get<int>(), g.value("index", 0));
        if (name == "diagonal")
            return diagonal_state(ClassicalDistribution(g.at("probs").get<std::vector<double>>()));
        fail(ErrorKind::InvalidArgument, "unknown generator '" + name + "'");
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidArgument, std::string("malformed generator: ") + e.what());
    }
}

DensityMatrix matrix_state(const json& m) {
    try {
        const auto re = m.at("re").get<std::vector<std::vector<double>>>();
        std::vector<std::vector<double>> im;
        if (m.contains("im")) im = m.at("im").get<std::vector<std::vector<double>>>();
        const int d = static_cast<int>(re.size());
        if (d == 0) fail(ErrorKind::InvalidArgument, "empty matrix");
        if (!im.empty() && static_cast<int>(im.size()) != d) fail(ErrorKind::InvalidArgument, "re/im shape mismatch");
        Matrix a(d, d);
        for (int i = 0; i < d; ++i) {
            if (static_cast<int>(re[i].size()) != d || (!im.empty() && static_cast<int>(im[i].size()) != d))
                fail(ErrorKind::InvalidArgument, "matrix is not square");
            for (int j = 0; j < d; ++j) a(i, j) = Complex(re[i][j], im.empty() ? 0.0 : im[i][j]);
        }
        return validate_state(a);
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidArgument, std::string("malformed matrix: ") + e.what());
    }
}

DensityMatrix state_from_json(const json& j) {
    if (j.is_object() && j.contains("generator")) return generator_state(j.at("generator"));
    if (j.is_object() && j.contains("matrix")) return matrix_state(j.at("matrix"));
    fail(ErrorKind::InvalidArgument, "state JSON needs a 'generator' or 'matrix' key");
}

DensityMatrix shorthand_state(const std::string& spec) {
    const auto f = split(spec, ':');
    const std::string& name = f[0];
    auto arity = [&](std::size_t k) {
        if (f.size() != k + 1)
            fail(ErrorKind::InvalidArgument, "state '" + spec + "': " + name + " takes " + std::to_string(k) +
                                                 " field(s)");
    };
    if (name == "mixed") {
        arity(1);
        return maximally_mixed(static_cast<int>(to_int(f[1], "d")));
    }
    if (name == "paninski") {
        arity(2);
        return paninski(static_cast<int>(to_int(f[1], "d")), to_double(f[2], "eps"));
    }
    if (name == "random") {
        arity(3);
        return random_state(static_cast<int>(to_int(f[1], "d")), static_cast<int>(to_int(f[2], "rank")),
                            static_cast<std::uint64_t>(to_int(f[3], "seed")));
    }
    if (name == "pure") {
        arity(2);
        return basis_state(static_cast<int>(to_int(f[1], "d")), static_cast<int>(to_int(f[2], "index")));
    }
    if (name == "diag") {
        arity(1);
        std::vector<double> p;
        for (const auto& s : split(f[1], ',')) p.push_back(to_double(s, "probability"));
        return diagonal_state(ClassicalDistribution(p));
    }
    fail(ErrorKind::InvalidArgument, "unknown state generator '" + name + "'");
}

bool is_diag(const DensityMatrix& r) { return r.is_diagonal(1e-12); }

std::vector<double> diagonal_vector(const DensityMatrix& rho) {
    std::vector<double> p(rho.dim());
    for (int i = 0; i < rho.dim(); ++i) p[i] = std::max(0.0, rho.matrix()(i, i).real());
    return p;
}

double sample_variance(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0;
    double acc = 0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(xs.size() - 1);
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

}  // namespace

// ---------------------------------------------------------------------------
// States and workers.

DensityMatrix load_state(const std::string& spec) {
    if (spec.empty()) fail(ErrorKind::InvalidArgument, "empty state spec");
    if (spec.front() == '{') return state_from_json(parse_json(spec, "state"));
    std::error_code ec;
    if (std::filesystem::is_regular_file(spec, ec)) return state_from_json(parse_json(read_file(spec), spec));
    if (spec.find(':') != std::string::npos) return shorthand_state(spec);
    fail(ErrorKind::InvalidArgument, "state '" + spec + "' is neither a generator shorthand nor a readable file");
}

std::string state_to_json(const DensityMatrix& rho) {
    const int d = rho.dim();
    json re = json::array(), im = json::array();
    for (int i = 0; i < d; ++i) {
        json r = json::array(), m = json::array();
        for (int j = 0; j < d; ++j) {
            r.push_back(rho.matrix()(i, j).real());
            m.push_back(rho.matrix()(i, j).imag());
        }
        re.push_back(r);
        im.push_back(m);
    }
    return json{{"matrix", {{"re", re}, {"im", im}}}}.dump();
}

int worker_count() {
    if (const char* env = std::getenv("CERTIKIT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t)>& body) {
    if (count <= 0) return;
    if (threads <= 0) threads = worker_count();
    threads = static_cast<int>(std::min<std::int64_t>(threads, count));
    std::atomic<std::int64_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr first;
    std::mutex mu;
    auto work = [&] {
        for (;;) {
            if (stop.load()) return;
            const std::int64_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first) first = std::current_exception();
                stop = true;
            }
        }
    };
    if (threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (first) std::rethrow_exception(first);
}

// ---------------------------------------------------------------------------
// Config.

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    const json j = parse_json(text, "config");
    if (!j.is_object()) fail(ErrorKind::InvalidArgument, "config must be a JSON object");
    static const std::vector<std::string> keys{"test", "state", "sigma", "eps",  "trials", "seed",      "backend",
                                               "C",    "n",     "batches", "rank", "constants", "out", "timing"};
    for (const auto& [k, v] : j.items())
        if (std::find(keys.begin(), keys.end(), k) == keys.end())
            fail(ErrorKind::InvalidArgument, "unknown config key '" + k + "'");
    ExperimentConfig c;
    auto spec = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    try {
        if (!j.contains("test")) fail(ErrorKind::InvalidArgument, "config needs 'test'");
        if (!j.contains("state")) fail(ErrorKind::InvalidArgument, "config needs 'state'");
        c.test = parse_test_kind(j.at("test").get<std::string>());
        c.state = spec(j.at("state"));
        if (j.contains("sigma")) c.sigma = spec(j.at("sigma"));
        if (j.contains("eps")) c.eps = j.at("eps").get<double>();
        if (j.contains("trials")) c.trials = j.at("trials").get<std::int64_t>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("backend")) c.backend = parse_backend(j.at("backend").get<std::string>());
        if (j.contains("C")) c.C = j.at("C").get<double>();
        if (j.contains("n")) c.n = j.at("n").get<std::int64_t>();
        if (j.contains("batches")) c.batches = j.at("batches").get<int>();
        if (j.contains("rank")) c.rank = j.at("rank").get<int>();
        if (j.contains("constants")) c.constants = j.at("constants").get<std::string>();
        if (j.contains("out")) c.out = j.at("out").get<std::string>();
        if (j.contains("timing")) c.timing = j.at("timing").get<bool>();
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidArgument, std::string("malformed config: ") + e.what());
    }
    return c;
}

std::string ExperimentConfig::to_json() const {
    auto spec = [](const std::string& s) -> json { return !s.empty() && s.front() == '{' ? json::parse(s) : json(s); };
    json j;
    j["test"] = certikit::to_string(test);
    j["state"] = spec(state);
    if (sigma) j["sigma"] = spec(*sigma);
    if (eps) j["eps"] = *eps;
    j["trials"] = trials;
    if (seed) j["seed"] = *seed;
    if (backend) j["backend"] = certikit::to_string(*backend);
    if (C) j["C"] = *C;
    if (n) j["n"] = *n;
    j["batches"] = batches;
    if (rank) j["rank"] = rank;
    if (constants) j["constants"] = *constants;
    if (out) j["out"] = *out;
    if (timing) j["timing"] = true;
    return j.dump();
}

void ExperimentConfig::validate() const {
    if (trials < 1) fail(ErrorKind::InvalidArgument, "trials must be at least 1");
    if (!seed) fail(ErrorKind::InvalidArgument, "a seed is required");
    if (!eps) fail(ErrorKind::InvalidArgument, "eps is required");
    if (!(*eps > 0 && *eps <= 1)) fail(ErrorKind::EpsOutOfRange, "eps must lie in (0, 1]");
    if (batches < 1 || batches % 2 == 0) fail(ErrorKind::InvalidArgument, "batches must be a positive odd number");
    if (C && !(*C > 0 && std::isfinite(*C))) fail(ErrorKind::InvalidArgument, "C must be positive");
    if (n && *n < 2) fail(ErrorKind::NTooSmall, "n must be at least 2");
    if (state.empty()) fail(ErrorKind::InvalidArgument, "a state is required");
}

Backend default_backend(TestKind kind, const DensityMatrix& rho, const DensityMatrix* sigma) {
    const bool both_diag = is_diag(rho) && (!sigma || is_diag(*sigma));
    switch (kind) {
        case TestKind::Mixedness: return Backend::Rsk;
        case TestKind::HilbertSchmidt:
        case TestKind::Trace:
        case TestKind::LowRank: return both_diag ? Backend::Rsk : Backend::Analytic;
        case TestKind::ChiSquared:
        case TestKind::Fidelity:
        case TestKind::Diagonal: return both_diag ? Backend::Pinched : Backend::Analytic;
    }
    return Backend::Analytic;
}

std::string profile_for(TestKind kind) {
    switch (kind) {
        case TestKind::Mixedness: return "mixedness";
        case TestKind::HilbertSchmidt:
        case TestKind::Trace:
        case TestKind::LowRank: return "hs";
        default: return "chisq";
    }
}

std::string default_constants_path() { return std::string(CERTIKIT_DATA_DIR) + "/constants.json"; }

double load_calibrated_C(const std::string& path, const std::string& profile) {
    const json j = parse_json(read_file(path), path);
    try {
        return j.at("constants").at(profile).at("C").get<double>();
    } catch (const json::exception&) {
        fail(ErrorKind::InvalidArgument, "'" + path + "' has no calibrated C for profile '" + profile + "'");
    }
}

// ---------------------------------------------------------------------------
// Experiments.

ExperimentReport run_experiment(const ExperimentConfig& config, int threads) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const DensityMatrix rho = load_state(config.state);
    std::optional<DensityMatrix> sigma;
    if (config.sigma) sigma = load_state(*config.sigma);
    const DensityMatrix* sp = sigma ? &*sigma : nullptr;

    TesterOptions opts;
    opts.backend = config.backend.value_or(default_backend(config.test, rho, sp));
    opts.C = config.C;
    if (!opts.C && config.constants) opts.C = load_calibrated_C(*config.constants, profile_for(config.test));
    opts.n = config.n;
    opts.batches = config.batches;
    opts.rank = config.rank;
    auto tester = make_tester(config.test, rho, sp, *config.eps, opts);

    ExperimentReport rep;
    rep.config = config;
    rep.backend = opts.backend;
    rep.plan = tester->plan();
    rep.rows.resize(static_cast<std::size_t>(config.trials));
    const std::uint64_t seed = *config.seed;
    parallel_for(config.trials, threads, [&](std::int64_t t) {
        Rng rng = make_stream(seed, static_cast<std::uint64_t>(t));
        const TestVerdict v = tester->run(rng);
        TrialRow& row = rep.rows[static_cast<std::size_t>(t)];
        row.trial = t;
        row.verdict = v.verdict;
        row.statistic = v.statistic;
        row.copies = v.copies_used;
        row.seed = stream_key(seed, static_cast<std::uint64_t>(t));
    });

    ExperimentSummary& s = rep.summary;
    s.trials = config.trials;
    s.ground_truth = tester->ground_truth();
    s.true_mean = tester->true_mean();
    if (config.batches == 1) s.theoretical_variance = tester->theoretical_variance();
    std::vector<double> xs;
    xs.reserve(rep.rows.size());
    std::int64_t wrong = 0;
    for (const auto& r : rep.rows) {
        xs.push_back(r.statistic);
        s.copies_total += r.copies;
        if (r.verdict == Verdict::Close) ++s.close_count;
        if (s.ground_truth && r.verdict != *s.ground_truth) ++wrong;
    }
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    s.mean_statistic = mean;
    s.empirical_variance = sample_variance(xs, mean);
    if (s.ground_truth) s.error_rate = static_cast<double>(wrong) / static_cast<double>(config.trials);
    if (config.timing)
        s.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::string ExperimentReport::to_csv() const {
    std::string out = "trial,verdict,statistic,copies,seed\n";
    for (const auto& r : rows) {
        out += std::to_string(r.trial) + ',' + certikit::to_string(r.verdict) + ',' + num(r.statistic) + ',' +
               std::to_string(r.copies) + ',' + std::to_string(r.seed) + '\n';
    }
    return out;
}

std::string ExperimentReport::to_json() const {
    json j;
    j["schema"] = 1;
    j["config"] = json::parse(config.to_json());
    j["backend"] = certikit::to_string(backend);
    j["plan"] = {{"n", plan.n},
                 {"theta", plan.theta},
                 {"gamma", plan.gamma},
                 {"C", plan.C},
                 {"threshold", plan.threshold()},
                 {"guaranteed_error", plan.guaranteed_error},
                 {"profile", plan.profile}};
    json sj;
    sj["trials"] = summary.trials;
    sj["ground_truth"] = summary.ground_truth ? json(certikit::to_string(*summary.ground_truth)) : json(nullptr);
    sj["error_rate"] = optional_number(summary.error_rate);
    sj["close_count"] = summary.close_count;
    sj["far_count"] = summary.trials - summary.close_count;
    sj["mean_statistic"] = summary.mean_statistic;
    sj["true_mean"] = summary.true_mean;
    sj["empirical_variance"] = summary.empirical_variance;
    sj["theoretical_variance"] = optional_number(summary.theoretical_variance);
    sj["copies_total"] = summary.copies_total;
    if (summary.wall_time) sj["wall_time"] = *summary.wall_time;
    j["summary"] = sj;
    return j.dump(2) + "\n";
}

void write_report(const ExperimentReport& report, const std::string& path) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    write_file(path, report.to_json());
    std::filesystem::path csv = p;
    csv.replace_extension(".csv");
    if (csv == p) csv += ".csv";
    write_file(csv.string(), report.to_csv());
}

// ---------------------------------------------------------------------------
// Point estimates.

namespace {

std::pair<DensityMatrix, Spectrum> in_sigma_basis(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (is_diag(sigma)) return {rho, Spectrum{diagonal_vector(sigma)}};
    const RealVector& ev = sigma.eigenvalues();
    return {rho.conjugated(sigma.eigenvectors().adjoint()),
            Spectrum{std::vector<double>(ev.data(), ev.data() + ev.size())}};
}

double sample_from(const std::vector<double>& values, const std::vector<double>& probs, Rng& rng) {
    return values[sample_discrete(probs, rng)];
}

}  // namespace

EstimateResult run_estimate(const EstimateConfig& cfg) {
    if (cfg.copies < 2) fail(ErrorKind::NTooSmall, "at least 2 copies are needed");
    const DensityMatrix rho = load_state(cfg.state);
    std::optional<DensityMatrix> sigma;
    if (cfg.sigma) sigma = load_state(*cfg.sigma);
    auto need_sigma = [&]() -> const DensityMatrix& {
        if (!sigma) fail(ErrorKind::InvalidArgument, cfg.quantity + " needs a second state");
        if (sigma->dim() != rho.dim()) fail(ErrorKind::DimMismatch, "states have different dimensions");
        return *sigma;
    };
    Rng rng = make_stream(cfg.seed, 0);
    EstimateResult r;
    r.quantity = cfg.quantity;
    r.copies = cfg.copies;
    const std::int64_t n = cfg.copies;

    if (cfg.quantity == "purity") {
        r.backend = cfg.backend.value_or(Backend::Rsk);
        if (r.backend != Backend::Rsk) fail(ErrorKind::BackendUnsupported, "purity is estimated with the rsk backend");
        if (n > INT32_MAX) fail(ErrorKind::TooLarge, "too many copies");
        const Spectrum spec = rho.spectrum();
        r.estimate = purity_estimate(sw_sample(spec, n, rng), static_cast<int>(n));
        r.sd = std::sqrt(std::max(0.0, var_purity(spec, static_cast<int>(n))));
        r.exact = spec.power_sum(2);
        return r;
    }
    if (cfg.quantity == "overlap" || cfg.quantity == "hs") {
        const DensityMatrix& s = need_sigma();
        const bool hs = cfg.quantity == "hs";
        const double dist = hs_distance(rho, s);
        r.exact = hs ? dist * dist : (rho.matrix() * s.matrix()).trace().real();
        const bool diag_pair = is_diag(rho) && is_diag(s);
        r.backend = cfg.backend.value_or(hs && diag_pair && n > 4 ? Backend::Rsk : Backend::Dense);
        if (r.backend == Backend::Dense) {
            if (n > 4) fail(ErrorKind::TooLarge, "dense (lambda, mu, nu) sampling needs at most 4 copies");
            const int k = static_cast<int>(n);
            dense_dimension(rho.dim(), 2 * k);
            std::vector<double> values, probs;
            for (const auto& [t, p] : hs_triple_pmf(rho, s, k)) {
                values.push_back(hs ? hs_estimate(t.lambda, t.mu, t.nu, k) : overlap_estimate(t.lambda, t.mu, t.nu, k));
                probs.push_back(std::max(0.0, p));
            }
            r.estimate = sample_from(values, probs, rng);
            r.sd = std::sqrt(std::max(0.0, hs ? var_hs_exact(rho, s, k) : var_linear_fidelity(rho, s, k, k)));
            return r;
        }
        if (r.backend == Backend::Rsk && hs) {
            if (!diag_pair) fail(ErrorKind::BackendUnsupported, "rsk hs estimation needs two diagonal states");
            if (n > INT32_MAX) fail(ErrorKind::TooLarge, "too many copies");
            const auto p = diagonal_vector(rho);
            r.estimate = alt_hs_estimate(gt_sample(p, n, rng), diagonal_vector(s), static_cast<int>(n));
            return r;  // no closed-form variance for the known-reference estimator
        }
        fail(ErrorKind::BackendUnsupported,
             std::string("backend '") + to_string(r.backend) + "' is not available for " + cfg.quantity);
    }
    if (cfg.quantity == "bures-chisq") {
        const DensityMatrix& s = need_sigma();
        const auto [rot, beta] = in_sigma_basis(rho, s);
        const ChiContext ctx(beta);  // SigmaSingular for rank-deficient references
        r.exact = chi_mean(rot, ctx);
        r.backend = cfg.backend.value_or(is_diag(rot) ? Backend::Pinched : Backend::Dense);
        if (r.backend == Backend::Pinched) {
            if (!rot.is_diagonal(1e-10))
                fail(ErrorKind::BackendUnsupported, "pinched estimation needs rho to commute with sigma");
            const auto p = diagonal_vector(rot);
            const auto counts = sample_multinomial(p, n, rng);
            const double nn = static_cast<double>(n);
            double acc = 0;
            for (std::size_t i = 0; i < counts.size(); ++i) {
                const double x = static_cast<double>(counts[i]);
                acc += x * (x - 1) / beta.values[i];
            }
            r.estimate = acc / (nn * (nn - 1)) - 1.0;
            r.sd = std::sqrt(std::max(0.0, pinched_chisq_variance(p, beta.values, n)));
            return r;
        }
        if (r.backend == Backend::Dense) {
            if (n > 12) fail(ErrorKind::TooLarge, "dense chi-squared sampling needs at most 12 copies");
            const int k = static_cast<int>(n);
            const auto dist = exact_distribution(chi_averaged_observable(ctx, k), tensor_power(rot, k));
            std::vector<double> values, probs;
            for (const auto& o : dist.outcomes) {
                values.push_back(o.value);
                probs.push_back(std::max(0.0, o.prob));
            }
            r.estimate = sample_from(values, probs, rng);
            r.sd = std::sqrt(std::max(0.0, chi_var_exact(rot, ctx, k)));
            return r;
        }
        fail(ErrorKind::BackendUnsupported, "bures-chisq supports the pinched and dense backends");
    }
    fail(ErrorKind::InvalidArgument, "unknown quantity '" + cfg.quantity + "' (purity, overlap, hs, bures-chisq)");
}

std::string EstimateResult::to_text() const {
    std::ostringstream o;
    o.precision(6);
    o << quantity << " = " << estimate;
    if (sd) o << " +/- " << *sd;
    else o << " (sd unavailable)";
    o << " (exact " << exact << ", n = " << copies << ", " << to_string(backend) << ")";
    return o.str();
}

std::string EstimateResult::to_json() const {
    json j;
    j["quantity"] = quantity;
    j["estimate"] = estimate;
    j["sd"] = optional_number(sd);
    j["exact"] = exact;
    j["copies"] = copies;
    j["backend"] = to_string(backend);
    return j.dump();
}

// ---------------------------------------------------------------------------
// Calibration.

void CalibrationConfig::set_grid(const std::string& spec) {
    const auto f = split(spec, ':');
    if (f.size() != 3) fail(ErrorKind::InvalidArgument, "grid must be min:max:points");
    c_min = to_double(f[0], "grid minimum");
    c_max = to_double(f[1], "grid maximum");
    grid_points = static_cast<int>(to_int(f[2], "grid points"));
}

namespace {

struct BoundaryInstance {
    DensityMatrix rho;
    std::optional<DensityMatrix> sigma;
    TestKind kind;
    Backend backend;
    Verdict label;
};

/// Paninski-type states sitting exactly on the two promise boundaries.
std::vector<BoundaryInstance> boundary_instances(const CalibrationConfig& c) {
    const int d = c.d;
    const double eps = c.eps;
    const DensityMatrix mixed = maximally_mixed(d);
    std::vector<BoundaryInstance> out;
    if (c.profile == "mixedness" || c.profile == "hs") {
        // D_HS(paninski(d, a), Id/d) = 2a / sqrt(d).
        const double close_a = std::sqrt(kDistanceGamma) * eps * std::sqrt(static_cast<double>(d)) / 2;
        const double far_a = eps * std::sqrt(static_cast<double>(d)) / 2;
        const bool mix = c.profile == "mixedness";
        const TestKind kind = mix ? TestKind::Mixedness : TestKind::HilbertSchmidt;
        auto sig = mix ? std::optional<DensityMatrix>() : std::optional<DensityMatrix>(mixed);
        out.push_back({paninski(d, close_a), sig, kind, Backend::Rsk, Verdict::Close});
        out.push_back({paninski(d, far_a), sig, kind, Backend::Rsk, Verdict::Far});
    } else if (c.profile == "chisq") {
        // chi2(paninski(d, a), Id/d) = 4 a^2.
        const double close_a = std::sqrt(kDivergenceGamma) * eps / 2;
        const double far_a = eps / 2;
        out.push_back({paninski(d, close_a), mixed, TestKind::ChiSquared, Backend::Pinched, Verdict::Close});
        out.push_back({paninski(d, far_a), mixed, TestKind::ChiSquared, Backend::Pinched, Verdict::Far});
    } else {
        fail(ErrorKind::InvalidArgument, "unknown profile '" + c.profile + "' (mixedness, hs, chisq)");
    }
    return out;
}

}  // namespace

CalibrationResult calibrate(const CalibrationConfig& config, int threads) {
    CalibrationConfig c = config;
    if (c.c_max <= 0) c.c_max = kChebyshevC;
    const double budget = c.target_error - c.margin;
    if (!(budget > 0))
        fail(ErrorKind::GridExhausted, "target error minus margin is " + num(budget) + "; no finite C can certify it");
    if (!(c.c_min > 0 && c.c_max >= c.c_min) || c.grid_points < 1)
        fail(ErrorKind::InvalidArgument, "grid needs 0 < min <= max and at least one point");
    if (c.trials < 1) fail(ErrorKind::InvalidArgument, "trials must be at least 1");
    const auto instances = boundary_instances(c);

    CalibrationResult res;
    res.config = c;
    for (int g = 0; g < c.grid_points; ++g) {
        const double C = c.grid_points == 1 ? c.c_min
                                            : c.c_min * std::pow(c.c_max / c.c_min, g / double(c.grid_points - 1));
        CalibrationPoint pt;
        pt.C = C;
        for (std::size_t arm = 0; arm < instances.size(); ++arm) {
            const auto& inst = instances[arm];
            TesterOptions opts;
            opts.backend = inst.backend;
            opts.C = C;
            auto tester = make_tester(inst.kind, inst.rho, inst.sigma ? &*inst.sigma : nullptr, c.eps, opts);
            pt.n = tester->plan().n;
            std::vector<char> wrong(static_cast<std::size_t>(c.trials), 0);
            const std::uint64_t base = (static_cast<std::uint64_t>(g) * 2 + arm) << 32;
            parallel_for(c.trials, threads, [&](std::int64_t t) {
                Rng rng = make_stream(c.seed, base + static_cast<std::uint64_t>(t));
                wrong[static_cast<std::size_t>(t)] = tester->run(rng).verdict != inst.label;
            });
            double rate = 0;
            for (char w : wrong) rate += w;
            rate /= static_cast<double>(c.trials);
            (inst.label == Verdict::Close ? pt.close_error : pt.far_error) = rate;
        }
        res.sweep.push_back(pt);
        if (pt.close_error <= budget && pt.far_error <= budget) {
            res.C = C;
            return res;
        }
    }
    fail(ErrorKind::GridExhausted, "no C in [" + num(c.c_min) + ", " + num(c.c_max) + "] reaches error " + num(budget));
}

std::string CalibrationResult::to_json() const {
    json sweep_j = json::array();
    for (const auto& p : sweep)
        sweep_j.push_back({{"C", p.C}, {"n", p.n}, {"close_error", p.close_error}, {"far_error", p.far_error}});
    json j;
    j["C"] = C;
    j["target_error"] = config.target_error;
    j["margin"] = config.margin;
    j["grid"] = {{"min", config.c_min}, {"max", config.c_max}, {"points", config.grid_points}};
    j["trials"] = config.trials;
    j["seed"] = config.seed;
    j["instance"] = {{"d", config.d}, {"eps", config.eps}};
    j["sweep"] = sweep_j;
    return j.dump();
}

void write_constants(const CalibrationResult& result, const std::string& path) {
    json j = {{"schema", 1}, {"constants", json::object()}};
    std::error_code ec;
    if (std::filesystem::is_regular_file(path, ec)) {
        j = parse_json(read_file(path), path);
        if (!j.contains("constants") || !j["constants"].is_object()) j["constants"] = json::object();
    }
    j["constants"][result.config.profile] = json::parse(result.to_json());
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    write_file(path, j.dump(2) + "\n");
}

}  // namespace certikit
