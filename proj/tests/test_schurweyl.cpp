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

#include <algorithm>
#include <cmath>

#include "certikit/densesim.hpp"
#include "test_util.hpp"

namespace certikit {
namespace {

using testing::rand_diag_state;
using testing::rand_state;

// Textbook RSK with explicit rows.
Partition naive_rsk(const std::vector<int>& w) {
    std::vector<std::vector<int>> rows;
    for (int x : w) {
        for (std::size_t r = 0;; ++r) {
            if (r == rows.size()) {
                rows.push_back({x});
                break;
            }
            auto it = std::upper_bound(rows[r].begin(), rows[r].end(), x);
            if (it == rows[r].end()) {
                rows[r].push_back(x);
                break;
            }
            std::swap(*it, x);
        }
    }
    std::vector<int> parts;
    for (auto& r : rows) parts.push_back(static_cast<int>(r.size()));
    return Partition(parts);
}

int longest_weakly_increasing(const std::vector<int>& w) {
    std::vector<int> best(w.size(), 1);
    int out = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (w[j] <= w[i]) best[i] = std::max(best[i], best[j] + 1);
        out = std::max(out, best[i]);
    }
    return out;
}

int longest_strictly_decreasing(const std::vector<int>& w) {
    std::vector<int> best(w.size(), 1);
    int out = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (w[j] > w[i]) best[i] = std::max(best[i], best[j] + 1);
        out = std::max(out, best[i]);
    }
    return out;
}

double trace_real(const Matrix& m) { return m.trace().real(); }

TEST(Rsk, SmallExample) {
    std::vector<int> w{0, 1, 0, 1};
    EXPECT_EQ(rsk_shape(w).str(), "[3,1]");
    EXPECT_EQ(rsk_shape(std::vector<int>{}).size(), 0);
    EXPECT_THROW_KIND(rsk_shape(std::vector<int>{0, 3}, 2), ErrorKind::InvalidArgument);
}

TEST(Rsk, MatchesNaiveInsertionAndGreene) {
    Rng rng = make_stream(7, 0);
    for (int trial = 0; trial < 300; ++trial) {
        int d = 1 + static_cast<int>(rng() % 7);
        int len = static_cast<int>(rng() % 40);
        std::vector<int> w(len);
        for (int& x : w) x = static_cast<int>(rng() % d);
        Partition s = rsk_shape(w, d);
        EXPECT_EQ(s, naive_rsk(w));
        EXPECT_EQ(s.size(), len);
        EXPECT_LE(s.length(), d);
        if (len > 0) {
            EXPECT_EQ(s.parts[0], longest_weakly_increasing(w));
            EXPECT_EQ(s.length(), longest_strictly_decreasing(w));
        }
    }
}

TEST(Rsk, LargeAlphabet) {
    std::vector<int> w;
    for (int x = 63; x >= 0; --x) w.push_back(x);
    EXPECT_EQ(rsk_shape(w, 64).length(), 64);
}

TEST(AliasTable, EmpiricalFrequencies) {
    std::vector<double> p{0.5, 0.25, 0.125, 0.125, 0.0};
    AliasTable t(p);
    Rng rng = make_stream(3, 1);
    std::vector<int> count(p.size(), 0);
    const int n = 200000;
    for (int i = 0; i < n; ++i) ++count[t.sample(rng)];
    EXPECT_EQ(count[4], 0);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(count[i] / double(n), p[i], 0.005);
    EXPECT_THROW_KIND(AliasTable(std::vector<double>{}), ErrorKind::InvalidArgument);
}

TEST(SwPmf, UniformQubitPair) {
    auto pmf = sw_pmf_exact({Rational(1, 2), Rational(1, 2)}, 2);
    ASSERT_EQ(pmf.size(), 2u);
    EXPECT_EQ(pmf.at(Partition({2})), Rational(3, 4));
    EXPECT_EQ(pmf.at(Partition({1, 1})), Rational(1, 4));
}

TEST(SwPmf, SumsToOneAndRefusesLargeInputs) {
    Spectrum a{{0.4, 0.3, 0.2, 0.1}};
    for (int n : {1, 5, 12, 30}) {
        double total = 0;
        for (const auto& [l, p] : sw_pmf(a, n)) {
            EXPECT_GE(p, -1e-15);
            EXPECT_LE(l.length(), 4);
            total += p;
        }
        EXPECT_NEAR(total, 1.0, 1e-10) << n;
    }
    EXPECT_THROW_KIND(sw_pmf(a, 41), ErrorKind::TooLarge);
    EXPECT_THROW_KIND(sw_pmf(Spectrum{std::vector<double>(7, 1.0 / 7)}, 3), ErrorKind::TooLarge);
}

TEST(SwPmf, MatchesDenseProjectors) {
    for (int d = 2; d <= 3; ++d) {
        auto rho = rand_state(d, 100 + d);
        for (int n = 1; n <= (d == 2 ? 6 : 5); ++n) {
            auto pmf = sw_pmf(rho.spectrum(), n);
            auto state = tensor_power(rho, n);
            for (const auto& [l, proj] : schur_projectors(d, n)) {
                double dense = trace_real(proj.m * state.m);
                double fast = pmf.count(l) ? pmf.at(l) : 0.0;
                EXPECT_NEAR(fast, dense, 1e-10) << d << " " << n << " " << l.str();
            }
        }
    }
}

TEST(SwPmf, SamplerMatchesLaw) {
    Spectrum a{{0.5, 0.3, 0.2}};
    const int n = 6, trials = 40000;
    auto pmf = sw_pmf(a, n);
    std::map<Partition, int> counts;
    Rng rng = make_stream(11, 0);
    for (int t = 0; t < trials; ++t) ++counts[sw_sample(a, n, rng)];
    double tv = 0;
    for (const auto& [l, p] : pmf) tv += std::abs(p - (counts.count(l) ? counts[l] : 0) / double(trials));
    EXPECT_LT(tv / 2, 0.02);
}

TEST(SchurPolynomial, KnownValues) {
    // s_[1,1](x,y,z) = xy + yz + xz, s_[2](x,y) = x^2 + xy + y^2.
    auto s = schur_polynomials(std::vector<Rational>{Rational(2), Rational(3), Rational(5)}, 2);
    EXPECT_EQ(s.at(Partition({1, 1})), Rational(31));
    EXPECT_EQ(s.at(Partition({2})), Rational(4 + 9 + 25 + 6 + 10 + 15));
    auto s3 = schur_polynomials(std::vector<double>{1.0, 1.0}, 3);
    EXPECT_DOUBLE_EQ(s3.at(Partition({3})), 4.0);  // dimension of Sym^3(C^2)
    EXPECT_DOUBLE_EQ(s3.at(Partition({2, 1})), 2.0);
    EXPECT_EQ(s3.count(Partition({1, 1, 1})), 0u);
}

TEST(RLambda, MatchesCharacterRatio) {
    for (int n = 2; n <= 8; ++n) {
        for (const auto& l : partitions_of(n)) {
            Rational ratio(character(l, Partition({2})), hook_dimension_exact(l));
            EXPECT_EQ(r_lambda_exact(l, n), ratio) << l.str();
            EXPECT_NEAR(r_lambda(l, n), boost::rational_cast<double>(ratio), 1e-14);
        }
    }
    EXPECT_THROW_KIND(r_lambda(Partition({1}), 1), ErrorKind::NTooSmall);
    EXPECT_THROW_KIND(r_lambda(Partition({2, 1}), 4), ErrorKind::SizeMismatch);
}

TEST(RLambda, UnbiasedPurity) {
    for (int d = 2; d <= 4; ++d) {
        auto rho = rand_state(d, 300 + d);
        double purity = trace_real(rho.matrix() * rho.matrix());
        for (int n : {2, 3, 7}) {
            double mean = 0;
            for (const auto& [l, p] : sw_pmf(rho.spectrum(), n)) mean += p * purity_estimate(l, n);
            EXPECT_NEAR(mean, purity, 1e-10);
            double mix = 0;
            for (const auto& [l, p] : sw_pmf(rho.spectrum(), n)) mix += p * mixedness_statistic(l, n, d);
            EXPECT_NEAR(mix, purity - 1.0 / d, 1e-10);
        }
    }
}

TEST(GtPmf, MatchesDenseProjectors) {
    std::vector<double> diag{0.7, 0.3};
    for (int n = 1; n <= 4; ++n) {
        auto pmf = gt_pmf(diag, n);
        auto state = tensor_power(diagonal_state(ClassicalDistribution(diag)), n);
        auto types = type_projectors(2, n);
        double tv = 0;
        for (const auto& [l, pl] : schur_projectors(2, n)) {
            for (const auto& [tau, pt] : types) {
                double dense = trace_real(pt.m * pl.m * state.m * pl.m * pt.m);
                auto key = std::make_pair(l, TypeVector{tau});
                tv += std::abs(dense - (pmf.count(key) ? pmf.at(key) : 0.0));
            }
        }
        EXPECT_LT(tv / 2, 1e-10) << n;
    }
}

TEST(GtSample, AltHsUnbiasedOnDiagonalStates) {
    std::vector<double> p{0.6, 0.3, 0.1}, beta{0.2, 0.5, 0.3};
    double truth = 0;
    for (int i = 0; i < 3; ++i) truth += (p[i] - beta[i]) * (p[i] - beta[i]);
    for (int n : {2, 4, 6}) {
        double mean = 0;
        for (const auto& [k, pr] : gt_pmf(p, n)) mean += pr * alt_hs_estimate(GTSample{k.first, k.second}, beta, n);
        EXPECT_NEAR(mean, truth, 1e-10);
    }
    Rng rng = make_stream(5, 2);
    GTSample s = gt_sample(p, 10, rng);
    EXPECT_EQ(s.type.total(), 10);
    EXPECT_EQ(s.shape.size(), 10);
    EXPECT_THROW_KIND(alt_hs_estimate(s, std::vector<double>{0.5, 0.5}, 10), ErrorKind::DimMismatch);
}

TEST(HsEstimate, UnbiasedUnderDenseLaw) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto rho = rand_state(2, 400 + seed), sigma = rand_state(2, 500 + seed);
        double truth = hs_distance(rho, sigma);
        truth *= truth;
        Matrix prod = rho.matrix() * sigma.matrix();
        for (int n : {2, 3}) {
            double hs = 0, ov = 0, total = 0;
            for (const auto& [t, p] : hs_triple_pmf(rho, sigma, n)) {
                hs += p * hs_estimate(t.lambda, t.mu, t.nu, n);
                ov += p * overlap_estimate(t.lambda, t.mu, t.nu, n);
                total += p;
            }
            EXPECT_NEAR(total, 1.0, 1e-10);
            EXPECT_NEAR(hs, truth, 1e-10);
            EXPECT_NEAR(ov, trace_real(prod), 1e-10);
        }
    }
    EXPECT_THROW_KIND(hs_estimate(Partition({2}), Partition({2}), Partition({3}), 2), ErrorKind::SizeMismatch);
}

TEST(HsEstimate, RejectsLargeDenseRequests) {
    auto rho = rand_state(2, 1);
    EXPECT_THROW_KIND(hs_triple_pmf(rho, rho, 5), ErrorKind::TooLarge);
    EXPECT_THROW_KIND(hs_triple_pmf(rho, rand_state(3, 2), 2), ErrorKind::DimMismatch);
}

TEST(RskCoupling, ReportIsAProperDistance) {
    std::vector<double> p{0.8, 0.2}, q{0.3, 0.7};
    auto law = rsk_concat_pmf(p, q, 3);
    double total = 0;
    for (const auto& [t, pr] : law) total += pr;
    EXPECT_NEAR(total, 1.0, 1e-12);
    auto rep = rsk_coupling_report(p, q, 2);
    EXPECT_EQ(rep.d, 2);
    EXPECT_EQ(rep.n, 2);
    EXPECT_GE(rep.tv, 0.0);
    EXPECT_LE(rep.tv, 1.0);
    // Identical halves: the marginals of both laws agree, so only the
    // joint shape can differ.
    auto same = rsk_coupling_report(p, p, 2);
    EXPECT_LE(same.tv, 1.0);
}

}  // namespace
}  // namespace certikit
