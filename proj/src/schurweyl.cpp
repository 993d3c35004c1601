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

#include "certikit/schurweyl.hpp"

#include <bit>
#include <cmath>
#include <functional>

#include "certikit/densesim.hpp"

namespace certikit {

namespace {

constexpr int kPmfMaxN = 40;
constexpr int kPmfMaxD = 6;

Partition from_padded(const std::vector<int>& v) { return Partition(v); }

// Calls f(lambda, added) for every lambda of length k with lambda / mu a
// horizontal strip and |lambda| <= budget_total; mu has length k - 1.
template <typename F>
void for_each_strip(const std::vector<int>& mu, int k, int room, F&& f) {
    std::vector<int> lam(k, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == k) {
            f(lam, room - left);
            return;
        }
        const int lo = i < k - 1 ? mu[i] : 0;
        const int hi = i == 0 ? (k - 1 > 0 ? mu[0] : 0) + left : mu[i - 1];
        const int base = i < k - 1 ? mu[i] : 0;
        for (int v = lo; v <= hi && v - base <= left; ++v) {
            lam[i] = v;
            rec(i + 1, left - (v - base));
        }
    };
    rec(0, room);
}

template <typename Scalar>
Scalar power(Scalar x, int e) {
    Scalar r(1);
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

int size_of(const std::vector<int>& v) {
    int s = 0;
    for (int x : v) s += x;
    return s;
}

void require_shape_size(const Partition& lambda, int n) {
    if (lambda.size() != n)
        fail(ErrorKind::SizeMismatch, "partition " + lambda.str() + " is not a partition of " + std::to_string(n));
}

}  // namespace

int TypeVector::total() const {
    int s = 0;
    for (int c : counts) s += c;
    return s;
}

// ---------------------------------------------------------------------------
// RSK.

RskInserter::RskInserter(int d) : d_(d) {
    if (d < 1 || d > 64) fail(ErrorKind::InvalidArgument, "RSK alphabet size must be in [1, 64]");
}

void RskInserter::insert(int x) {
    if (x < 0 || x >= d_) fail(ErrorKind::InvalidArgument, "letter out of range");
    std::size_t r = 0;
    while (true) {
        if (r == masks_.size()) {
            masks_.push_back(0);
            lengths_.push_back(0);
            counts_.resize(counts_.size() + d_, 0);
        }
        std::int64_t* row = counts_.data() + r * d_;
        const std::uint64_t above = x + 1 >= 64 ? 0 : (masks_[r] & (~std::uint64_t{0} << (x + 1)));
        ++row[x];
        masks_[r] |= std::uint64_t{1} << x;
        if (above == 0) {
            ++lengths_[r];
            return;
        }
        const int y = std::countr_zero(above);
        if (--row[y] == 0) masks_[r] &= ~(std::uint64_t{1} << y);
        x = y;
        ++r;
    }
}

Partition RskInserter::shape() const {
    std::vector<int> parts;
    for (auto len : lengths_) parts.push_back(static_cast<int>(len));
    return Partition(std::move(parts));
}

Partition rsk_shape(std::span<const int> w, int d) {
    if (d <= 0) {
        int mx = 0;
        for (int x : w) mx = std::max(mx, x);
        d = mx + 1;
    }
    RskInserter ins(d);
    for (int x : w) ins.insert(x);
    return ins.shape();
}

AliasTable::AliasTable(std::span<const double> weights) {
    const int k = static_cast<int>(weights.size());
    if (k == 0) fail(ErrorKind::InvalidArgument, "empty distribution");
    double total = 0;
    for (double w : weights) {
        if (!(w >= 0)) fail(ErrorKind::InvalidArgument, "negative weight");
        total += w;
    }
    if (!(total > 0)) fail(ErrorKind::InvalidArgument, "weights sum to zero");
    prob_.assign(k, 0.0);
    alias_.assign(k, 0);
    std::vector<double> scaled(k);
    std::vector<int> small, large;
    for (int i = 0; i < k; ++i) {
        scaled[i] = weights[i] * k / total;
        (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
        int s = small.back(), l = large.back();
        small.pop_back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] -= 1.0 - scaled[s];
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    for (int i : large) {
        prob_[i] = 1.0;
        alias_[i] = i;
    }
    for (int i : small) {
        prob_[i] = 1.0;
        alias_[i] = i;
    }
}

int AliasTable::sample(Rng& rng) const {
    const double u = uniform01(rng) * static_cast<double>(prob_.size());
    int i = static_cast<int>(u);
    if (i >= static_cast<int>(prob_.size())) i = static_cast<int>(prob_.size()) - 1;
    return (u - i) < prob_[i] ? i : alias_[i];
}

Partition sw_sample(std::span<const double> probs, std::int64_t n, Rng& rng) {
    AliasTable table(probs);
    RskInserter ins(table.size());
    for (std::int64_t t = 0; t < n; ++t) ins.insert(table.sample(rng));
    return ins.shape();
}

Partition sw_sample(const Spectrum& alpha, std::int64_t n, Rng& rng) {
    std::vector<double> p(alpha.values.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::max(0.0, alpha.values[i]);
    return sw_sample(p, n, rng);
}

// ---------------------------------------------------------------------------
// Schur polynomials and exact laws.

template <typename Scalar>
std::map<Partition, Scalar> schur_polynomials(const std::vector<Scalar>& x, int n) {
    // Layer k holds sum over SSYT with entries <= k of x^T, keyed by shape padded to length k.
    std::map<std::vector<int>, Scalar> layer{{std::vector<int>{}, Scalar(1)}};
    const int vars = static_cast<int>(x.size());
    for (int k = 1; k <= vars; ++k) {
        std::vector<Scalar> pw(n + 1);
        pw[0] = Scalar(1);
        for (int e = 1; e <= n; ++e) pw[e] = pw[e - 1] * x[k - 1];
        std::map<std::vector<int>, Scalar> next;
        for (const auto& [mu, val] : layer) {
            const int room = n - size_of(mu);
            for_each_strip(mu, k, room, [&](const std::vector<int>& lam, int added) {
                auto [it, inserted] = next.try_emplace(lam, Scalar(0));
                it->second += val * pw[added];
            });
        }
        layer = std::move(next);
    }
    std::map<Partition, Scalar> out;
    for (const auto& [lam, val] : layer)
        if (size_of(lam) == n) out[from_padded(lam)] += val;
    if (vars == 0 && n == 0) out[Partition{}] = Scalar(1);
    return out;
}

template std::map<Partition, double> schur_polynomials<double>(const std::vector<double>&, int);
template std::map<Partition, Rational> schur_polynomials<Rational>(const std::vector<Rational>&, int);

std::map<Partition, double> sw_pmf(const Spectrum& alpha, int n) {
    if (n > kPmfMaxN || static_cast<int>(alpha.dim()) > kPmfMaxD)
        fail(ErrorKind::TooLarge, "sw_pmf is limited to n <= 40 and d <= 6");
    if (n < 0) fail(ErrorKind::InvalidArgument, "negative n");
    std::vector<double> x(alpha.values.begin(), alpha.values.end());
    for (double& v : x) v = std::max(0.0, v);
    auto s = schur_polynomials(x, n);
    std::map<Partition, double> out;
    for (const auto& [lam, val] : s) out[lam] = hook_dimension(lam) * val;
    return out;
}

std::map<Partition, Rational> sw_pmf_exact(const std::vector<Rational>& alpha, int n) {
    if (n > 20 || static_cast<int>(alpha.size()) > kPmfMaxD)
        fail(ErrorKind::TooLarge, "exact sw_pmf is limited to n <= 20 and d <= 6");
    auto s = schur_polynomials(alpha, n);
    std::map<Partition, Rational> out;
    for (const auto& [lam, val] : s) out[lam] = Rational(hook_dimension_exact(lam)) * val;
    return out;
}

Rational r_lambda_exact(const Partition& lambda, int n) {
    if (n < 2) fail(ErrorKind::NTooSmall, "r_lambda needs n >= 2");
    require_shape_size(lambda, n);
    // (lambda_i - i + 1/2)^2 - (-i + 1/2)^2 = lambda_i^2 - (2i - 1) lambda_i with 1-based i.
    std::int64_t num = 0;
    for (int i = 0; i < lambda.length(); ++i) {
        const std::int64_t l = lambda.parts[i];
        num += l * l - (2 * (i + 1) - 1) * l;
    }
    return Rational(num, static_cast<std::int64_t>(n) * (n - 1));
}

double r_lambda(const Partition& lambda, int n) {
    if (n < 2) fail(ErrorKind::NTooSmall, "r_lambda needs n >= 2");
    require_shape_size(lambda, n);
    double num = 0;
    for (int i = 0; i < lambda.length(); ++i) {
        const double l = lambda.parts[i];
        num += l * l - (2.0 * (i + 1) - 1.0) * l;
    }
    return num / (static_cast<double>(n) * (n - 1));
}

double purity_estimate(const Partition& lambda, int n) { return r_lambda(lambda, n); }

double mixedness_statistic(const Partition& lambda, int n, int d) { return r_lambda(lambda, n) - 1.0 / d; }

GTSample gt_sample(std::span<const double> diag, std::int64_t n, Rng& rng) {
    AliasTable table(diag);
    RskInserter ins(table.size());
    GTSample s;
    s.type.counts.assign(table.size(), 0);
    for (std::int64_t t = 0; t < n; ++t) {
        int x = table.sample(rng);
        ins.insert(x);
        ++s.type.counts[x];
    }
    s.shape = ins.shape();
    return s;
}

std::map<std::pair<Partition, TypeVector>, double> gt_pmf(std::span<const double> diag, int n) {
    const int d = static_cast<int>(diag.size());
    if (n > 20 || d > kPmfMaxD) fail(ErrorKind::TooLarge, "gt_pmf is limited to n <= 20 and d <= 6");
    // Kostka numbers by the same strip recursion, keeping the type.
    std::map<std::pair<std::vector<int>, std::vector<int>>, std::int64_t> layer{{{{}, {}}, 1}};
    for (int k = 1; k <= d; ++k) {
        std::map<std::pair<std::vector<int>, std::vector<int>>, std::int64_t> next;
        for (const auto& [key, count] : layer) {
            const auto& [mu, tau] = key;
            for_each_strip(mu, k, n - size_of(mu), [&](const std::vector<int>& lam, int added) {
                std::vector<int> t2 = tau;
                t2.push_back(added);
                next[{lam, t2}] += count;
            });
        }
        layer = std::move(next);
    }
    std::map<std::pair<Partition, TypeVector>, double> out;
    for (const auto& [key, kostka] : layer) {
        const auto& [lam, tau] = key;
        if (size_of(lam) != n) continue;
        double w = 1.0;
        for (int i = 0; i < d; ++i) w *= power(diag[i], tau[i]);
        if (w == 0.0) continue;
        Partition shape = from_padded(lam);
        out[{shape, TypeVector{tau}}] += hook_dimension(shape) * static_cast<double>(kostka) * w;
    }
    return out;
}

double alt_hs_estimate(const GTSample& s, std::span<const double> beta, int n) {
    if (beta.size() != s.type.counts.size()) fail(ErrorKind::DimMismatch, "beta and type have different lengths");
    if (s.type.total() != n) fail(ErrorKind::SizeMismatch, "type does not sum to n");
    double p2 = 0, ip = 0;
    for (std::size_t i = 0; i < beta.size(); ++i) {
        p2 += beta[i] * beta[i];
        ip += beta[i] * s.type.counts[i];
    }
    return r_lambda(s.shape, n) + p2 - 2.0 * ip / n;
}

double hs_estimate(const Partition& lambda, const Partition& mu, const Partition& nu, int n) {
    if (n < 2) fail(ErrorKind::NTooSmall, "hs_estimate needs n >= 2");
    require_shape_size(lambda, n);
    require_shape_size(mu, n);
    require_shape_size(nu, 2 * n);
    const double a = (2.0 * n - 1.0) / n, b = (4.0 * n - 2.0) / n;
    return a * (r_lambda(lambda, n) + r_lambda(mu, n)) - b * r_lambda(nu, 2 * n);
}

double overlap_estimate(const Partition& lambda, const Partition& mu, const Partition& nu, int n) {
    if (n < 2) fail(ErrorKind::NTooSmall, "overlap_estimate needs n >= 2");
    require_shape_size(lambda, n);
    require_shape_size(mu, n);
    require_shape_size(nu, 2 * n);
    return (2.0 * n - 1.0) / n * r_lambda(nu, 2 * n) - (n - 1.0) / (2.0 * n) * (r_lambda(lambda, n) + r_lambda(mu, n));
}

std::map<ShapeTriple, double> hs_triple_pmf(const DensityMatrix& rho, const DensityMatrix& sigma, int n) {
    if (rho.dim() != sigma.dim()) fail(ErrorKind::DimMismatch, "states have different dimensions");
    if (2 * n > 8) fail(ErrorKind::TooLarge, "dense (lambda, mu, nu) law needs 2n <= 8");
    const int d = rho.dim();
    auto half = schur_projectors(d, n);
    auto whole = schur_projectors(d, 2 * n);
    auto id = identity_operator(d, n);
    std::vector<Partition> hl, wl;
    ProjectorFamily left, right, joint;
    // Shapes with more than d rows have zero projectors; dropping them keeps the family complete.
    for (auto& [l, p] : half) {
        if (l.length() > d) continue;
        hl.push_back(l);
        left.push_back(kron(p, id));
        right.push_back(kron(id, p));
    }
    for (auto& [l, p] : whole) {
        if (l.length() > d) continue;
        wl.push_back(l);
        joint.push_back(p);
    }
    auto pmf = sequential_joint_pmf({left, right, joint}, bipartite_state(rho, n, sigma, n));
    std::map<ShapeTriple, double> out;
    for (const auto& [k, p] : pmf) out[{hl[k[0]], hl[k[1]], wl[k[2]]}] += p;
    return out;
}

std::map<ShapeTriple, double> rsk_concat_pmf(std::span<const double> p, std::span<const double> q, int n) {
    if (p.size() != q.size()) fail(ErrorKind::DimMismatch, "distributions have different lengths");
    const int d = static_cast<int>(p.size());
    double words = std::pow(d, 2 * n);
    if (words > 1e6) fail(ErrorKind::TooLarge, "exhaustive word enumeration limited to 1e6 words");
    std::map<ShapeTriple, double> out;
    std::vector<int> w(2 * n, 0);
    const std::int64_t total = static_cast<std::int64_t>(words);
    for (std::int64_t code = 0; code < total; ++code) {
        std::int64_t c = code;
        double prob = 1.0;
        for (int j = 0; j < 2 * n; ++j) {
            w[j] = static_cast<int>(c % d);
            c /= d;
            prob *= j < n ? p[w[j]] : q[w[j]];
        }
        if (prob == 0.0) continue;
        std::span<const int> all(w);
        out[{rsk_shape(all.subspan(0, n), d), rsk_shape(all.subspan(n, n), d), rsk_shape(all, d)}] += prob;
    }
    return out;
}

CouplingReport rsk_coupling_report(std::span<const double> p, std::span<const double> q, int n) {
    auto dense = hs_triple_pmf(diagonal_state(ClassicalDistribution({p.begin(), p.end()})),
                               diagonal_state(ClassicalDistribution({q.begin(), q.end()})), n);
    auto rsk = rsk_concat_pmf(p, q, n);
    double tv = 0;
    for (const auto& [k, v] : dense) tv += std::abs(v - (rsk.count(k) ? rsk.at(k) : 0.0));
    for (const auto& [k, v] : rsk)
        if (!dense.count(k)) tv += v;
    return {static_cast<int>(p.size()), n, tv / 2};
}

}  // namespace certikit
