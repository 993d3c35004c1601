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

// Dense brute-force simulation on (C^d)^{(x)n}.
//
// Basis ordering: |x_0 x_1 ... x_{n-1}> has index sum_j x_j d^{n-1-j}, so the
// first tensor factor is the most significant digit. P(pi) moves the letter
// at position j to position pi(j), which makes P a homomorphism:
// P(a) P(b) = P(a * b).

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "certikit/combinatorics.hpp"
#include "certikit/common.hpp"
#include "certikit/states.hpp"
#include "certikit/symalg.hpp"

namespace certikit {

/// Largest matrix side the dense oracle will build (4096 covers d=2,n=12; d=4,n=6).
inline constexpr std::int64_t kDefaultDenseCap = 4096;

/// Square operator on (C^d)^{(x)n}.
struct DenseOperator {
    int d = 0;
    int n = 0;
    Matrix m;

    DenseOperator() = default;
    DenseOperator(int d_, int n_, Matrix m_);
    std::int64_t dim() const { return m.rows(); }
    /// max |M - M^dagger| <= tol * max(1, max |M|).
    bool is_hermitian(double tol = 1e-9) const;
};

/// d^n, throwing TooLarge above `cap`.
std::int64_t dense_dimension(int d, int n, std::int64_t cap = kDefaultDenseCap);

DenseOperator identity_operator(int d, int n, std::int64_t cap = kDefaultDenseCap);
DenseOperator perm_matrix(const Permutation& p, int d, std::int64_t cap = kDefaultDenseCap);
DenseOperator algebra_matrix(const ClassElement& x, int d, std::int64_t cap = kDefaultDenseCap);
/// Orbit elements act on m + n tensor factors (rho factors first).
DenseOperator algebra_matrix(const OrbitElement& x, int d, std::int64_t cap = kDefaultDenseCap);

/// Kronecker product; the left operand occupies the leading factors.
DenseOperator kron(const DenseOperator& a, const DenseOperator& b);
/// rho^{(x)n}.
DenseOperator tensor_power(const DensityMatrix& rho, int n, std::int64_t cap = kDefaultDenseCap);
/// rho^{(x)m} (x) sigma^{(x)n}.
DenseOperator bipartite_state(const DensityMatrix& rho, int m, const DensityMatrix& sigma, int n,
                              std::int64_t cap = kDefaultDenseCap);
/// Places a two-site operator x (d^2 x d^2) on sites (i, j) of n, i != j.
DenseOperator embed_pair(const Matrix& x, int d, int n, int i, int j, std::int64_t cap = kDefaultDenseCap);

struct Outcome {
    double value;
    double prob;
};

/// Exact law of an observable: distinct values with their probabilities.
struct OutcomeDistribution {
    std::vector<Outcome> outcomes;  // sorted by value

    double mean() const;
    double variance() const;
    double total() const;
    /// "value,probability" header plus one row per outcome.
    std::string csv() const;
};

/// Spectral decomposition of O with eigenvalues clustered at 1e-9 (relative),
/// probabilities tr(rho Pi_i). Throws NotHermitian or DimMismatch.
OutcomeDistribution exact_distribution(const DenseOperator& obs, const DenseOperator& state);

/// tr(rho O) and tr(rho O^2) - tr(rho O)^2 computed directly.
std::pair<double, double> exact_moments(const DenseOperator& obs, const DenseOperator& state);

/// chi_lambda(kappa) by Murnaghan-Nakayama; kappa may omit fixed points.
std::int64_t character(const Partition& lambda, const Partition& kappa);
/// Full character table of S_n keyed by (lambda, full cycle type); requires n <= 8.
std::map<std::pair<Partition, Partition>, std::int64_t> characters(int n);

/// Isotypic projectors Pi_lambda = (dim lambda / n!) sum_pi chi_lambda(pi) P(pi)
/// for every lambda |- n (zero when the length exceeds d). Requires n <= 8.
std::map<Partition, DenseOperator> schur_projectors(int d, int n, std::int64_t cap = kDefaultDenseCap);

/// Projectors onto computational basis states of a fixed type (letter counts).
std::map<std::vector<int>, DenseOperator> type_projectors(int d, int n, std::int64_t cap = kDefaultDenseCap);

using ProjectorFamily = std::vector<DenseOperator>;

/// Throws IncompleteFamily unless the projectors sum to the identity within 1e-9.
void check_family(const ProjectorFamily& family);

/// Measures the families in order, updating the state by projection; returns
/// the index of the outcome in each family.
std::vector<int> sequential_measure(const std::vector<ProjectorFamily>& families, const DenseOperator& state,
                                    Rng& rng);

/// Exact joint law tr(F_k ... F_1 rho F_1 ... F_k) of sequential measurement,
/// keyed by outcome indices; zero-probability branches are omitted.
std::map<std::vector<int>, double> sequential_joint_pmf(const std::vector<ProjectorFamily>& families,
                                                        const DenseOperator& state);

}  // namespace certikit
