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

#include <cstdint>
#include <vector>

#include "certikit/common.hpp"

namespace certikit {

/// Numerical tolerances used when validating states and taking spectral
/// functions. The defaults are the module constants; callers may pass their own.
struct Tolerances {
    double hermitian = 1e-9;
    double psd = 1e-9;
    double trace = 1e-9;
    /// Eigenvalues below this are clamped to zero before square roots.
    double clamp = 1e-12;
    /// Minimum eigenvalue for a reference state to count as full rank.
    double full_rank = 1e-12;
};

/// Eigenvalues of a state, sorted nonincreasing.
struct Spectrum {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
    /// p_r(values) = sum_i values_i^r.
    double power_sum(int r) const;
};

struct ClassicalDistribution {
    std::vector<double> probs;

    ClassicalDistribution() = default;
    /// Validates nonnegativity and normalization (1e-12).
    explicit ClassicalDistribution(std::vector<double> p);
    std::size_t dim() const { return probs.size(); }
    static ClassicalDistribution uniform(std::size_t d);
};

/// A validated d x d density matrix together with its eigendecomposition.
/// Immutable after construction.
class DensityMatrix {
   public:
    /// Checks Hermiticity, positivity and unit trace; throws NotHermitian,
    /// NotPSD or TraceNotOne naming the measured residual.
    static DensityMatrix validate(const Matrix& m, const Tolerances& tol = Tolerances{});

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    /// Eigenvalues ascending (Eigen order), matching eigenvectors().
    const RealVector& eigenvalues() const { return evals_; }
    const Matrix& eigenvectors() const { return evecs_; }
    Spectrum spectrum() const;
    double min_eigenvalue() const { return evals_(0); }
    /// p.s.d. square root with eigenvalues clamped at `clamp`.
    Matrix sqrt(double clamp = 1e-12) const;
    /// Conjugation U rho U^dagger (U assumed unitary).
    DensityMatrix conjugated(const Matrix& u) const;
    /// True when all off-diagonal entries are below `tol` in magnitude.
    bool is_diagonal(double tol = 1e-12) const;

   private:
    DensityMatrix(Matrix m, RealVector evals, Matrix evecs)
        : m_(std::move(m)), evals_(std::move(evals)), evecs_(std::move(evecs)) {}
    Matrix m_;
    RealVector evals_;
    Matrix evecs_;
};

DensityMatrix validate_state(const Matrix& m, const Tolerances& tol = Tolerances{});

// Quantum distances. All throw DimMismatch on unequal dimensions.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double hs_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double bures_sq(const DensityMatrix& rho, const DensityMatrix& sigma);
/// Bures chi-squared divergence; requires sigma full rank (SigmaSingular otherwise).
double bures_chisq(const DensityMatrix& rho, const DensityMatrix& sigma,
                   const Tolerances& tol = Tolerances{});

// Classical divergences.
double tv(const ClassicalDistribution& p, const ClassicalDistribution& q);
double l2(const ClassicalDistribution& p, const ClassicalDistribution& q);
double hellinger(const ClassicalDistribution& p, const ClassicalDistribution& q);
double bhattacharyya(const ClassicalDistribution& p, const ClassicalDistribution& q);
/// +infinity when supp(p) is not contained in supp(q).
double classical_chisq(const ClassicalDistribution& p, const ClassicalDistribution& q);

/// Laplace-smoothed estimate (x_i + 1) / (n + d); CountMismatch if counts do not sum to n.
ClassicalDistribution add_one_estimate(std::span<const std::int64_t> counts, std::int64_t n);

/// E[chi2(p, add_one(x))] for x ~ Multinomial(n, p), closed form:
///   (d-1)/(n+1) - ((n+d)/(n+1)) sum_i p_i (1-p_i)^{n+1}.
double add_one_expected_chisq(const ClassicalDistribution& p, std::int64_t n);

/// (1 - eta) rho + eta Id/d.
DensityMatrix depolarize(const DensityMatrix& rho, double eta);

// Generators.
DensityMatrix maximally_mixed(int d);
/// diag((1+2eps)/d, (1-2eps)/d, ...); requires even d and 0 <= eps <= 1/2.
DensityMatrix paninski(int d, double eps);
/// G G^dagger / tr(G G^dagger) with G a d x rank matrix of standard complex
/// Gaussians drawn from make_stream(seed, 0).
DensityMatrix random_state(int d, int rank, std::uint64_t seed);
DensityMatrix pure_state(const Eigen::VectorXcd& psi);
DensityMatrix diagonal_state(const ClassicalDistribution& p);
ClassicalDistribution diag_of(const DensityMatrix& rho);

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
Matrix random_unitary(int d, Rng& rng);

}  // namespace certikit
