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

// Classical simulation of Schur-Weyl measurements.
//
// Weak Schur sampling on rho^{(x)n} depends only on the spectrum of rho, and
// for a diagonal state it is the RSK shape of an i.i.d. word drawn from the
// diagonal. Exact laws come from Pr[lambda] = f^lambda s_lambda(alpha), with
// Schur polynomials evaluated by summing over semistandard tableaux one letter
// at a time (horizontal strips).

#include <cstdint>
#include <map>
#include <span>
#include <tuple>
#include <vector>

#include "certikit/combinatorics.hpp"
#include "certikit/common.hpp"
#include "certikit/states.hpp"

namespace certikit {

using Word = std::vector<int>;

/// Letter counts of a word.
struct TypeVector {
    std::vector<int> counts;
    int total() const;
    auto operator<=>(const TypeVector&) const = default;
};

/// Shape and type of a Gelfand-Tsetlin measurement outcome.
struct GTSample {
    Partition shape;
    TypeVector type;
};

/// Incremental RSK row insertion over the alphabet {0, ..., d-1} (d <= 64).
/// Rows are stored as letter counts, so memory is O(d^2) regardless of length.
class RskInserter {
   public:
    explicit RskInserter(int d);
    void insert(int letter);
    Partition shape() const;
    int alphabet() const { return d_; }

   private:
    int d_;
    std::vector<std::int64_t> counts_;  // row-major rows x d
    std::vector<std::uint64_t> masks_;  // letters present per row
    std::vector<std::int64_t> lengths_;
};

/// Shape of the RSK insertion tableau of w. Letters must lie in [0, d) when
/// d > 0; d = 0 infers the alphabet from the word.
Partition rsk_shape(std::span<const int> w, int d = 0);

/// Walker alias table: O(1) sampling from a fixed discrete distribution with
/// one 64-bit draw per sample.
class AliasTable {
   public:
    explicit AliasTable(std::span<const double> weights);
    int sample(Rng& rng) const;
    int size() const { return static_cast<int>(prob_.size()); }

   private:
    std::vector<double> prob_;
    std::vector<int> alias_;
};

/// Draws an i.i.d. word of length n from alpha and returns its RSK shape.
Partition sw_sample(const Spectrum& alpha, std::int64_t n, Rng& rng);
Partition sw_sample(std::span<const double> probs, std::int64_t n, Rng& rng);

/// Schur polynomials s_lambda(x) for every lambda |- n with at most x.size() parts.
template <typename Scalar>
std::map<Partition, Scalar> schur_polynomials(const std::vector<Scalar>& x, int n);

/// Exact weak Schur sampling law; requires n <= 40 and d <= 6 (TooLarge otherwise).
std::map<Partition, double> sw_pmf(const Spectrum& alpha, int n);
/// Exact rational law (n <= 20 so that f^lambda fits in 64 bits).
std::map<Partition, Rational> sw_pmf_exact(const std::vector<Rational>& alpha, int n);

/// Character ratio chi_lambda(transposition) / dim(lambda) via the content formula
///   (1/(n(n-1))) sum_i [(lambda_i - i + 1/2)^2 - (-i + 1/2)^2].
/// Throws NTooSmall for n < 2 and SizeMismatch if |lambda| != n.
double r_lambda(const Partition& lambda, int n);
Rational r_lambda_exact(const Partition& lambda, int n);

/// Unbiased purity estimate r_lambda.
double purity_estimate(const Partition& lambda, int n);
/// r_lambda - 1/d, unbiased for D_HS^2(rho, Id/d).
double mixedness_statistic(const Partition& lambda, int n, int d);

/// Shape and type of an i.i.d. word from the diagonal of a state that is
/// diagonal in the measurement basis.
GTSample gt_sample(std::span<const double> diag, std::int64_t n, Rng& rng);

/// Exact joint law Pr[lambda, tau] = f^lambda K_{lambda tau} prod_i p_i^{tau_i}.
std::map<std::pair<Partition, TypeVector>, double> gt_pmf(std::span<const double> diag, int n);

/// r_lambda + sum_i beta_i^2 - 2 <beta, tau> / n, where beta is the diagonal of
/// sigma in the measurement basis. Unbiased for D_HS^2 when rho is diagonal.
double alt_hs_estimate(const GTSample& s, std::span<const double> beta, int n);

/// ((2n-1)/n)(r_lambda + r_mu) - ((4n-2)/n) r_nu for lambda, mu |- n and nu |- 2n.
double hs_estimate(const Partition& lambda, const Partition& mu, const Partition& nu, int n);
/// ((2n-1)/n) r_nu - ((n-1)/(2n))(r_lambda + r_mu), unbiased for tr(rho sigma).
double overlap_estimate(const Partition& lambda, const Partition& mu, const Partition& nu, int n);

struct ShapeTriple {
    Partition lambda, mu, nu;
    auto operator<=>(const ShapeTriple&) const = default;
};

/// Exact law of (lambda, mu, nu): weak Schur sampling on each half of
/// rho^{(x)n} (x) sigma^{(x)n}, then on all 2n factors. Computed with the dense
/// oracle, so limited to 2n <= 8 and d^{2n} within the dense cap.
std::map<ShapeTriple, double> hs_triple_pmf(const DensityMatrix& rho, const DensityMatrix& sigma, int n);

/// Law of the RSK shapes of (first half, second half, whole word) of a word
/// with n letters from p followed by n letters from q, by exhaustive enumeration.
std::map<ShapeTriple, double> rsk_concat_pmf(std::span<const double> p, std::span<const double> q, int n);

struct CouplingReport {
    int d = 0;
    int n = 0;
    double tv = 0.0;  // total variation between the two laws
};

/// Compares hs_triple_pmf with rsk_concat_pmf for diagonal pairs.
CouplingReport rsk_coupling_report(std::span<const double> p, std::span<const double> q, int n);

}  // namespace certikit
