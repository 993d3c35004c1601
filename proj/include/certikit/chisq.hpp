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

// The Bures chi-squared observable for a reference sigma = diag(beta).
//
//   X = sum_ij |ji><ij| / avg(beta_i, beta_j),     avg = arithmetic mean,
//   <<S, T>>    = sum_ij T_ij S_ji / avg_ij,
//   <<R, S, T>> = sum_ijk T_ij S_jk R_ki / (avg_ij avg_ik).
//
// E_{rho (x) rho}[X] = <<rho, rho>> = D + 1 where D is the Bures chi-squared
// divergence; averaging X over all pairs of n copies gives an unbiased
// estimator of D whose variance has a closed form.

#include "certikit/common.hpp"
#include "certikit/densesim.hpp"
#include "certikit/states.hpp"

namespace certikit {

/// Reference state sigma = diag(beta); immutable.
class ChiContext {
   public:
    /// Throws SigmaSingular if some beta_i <= 0 and TraceNotOne if sum beta != 1.
    explicit ChiContext(Spectrum beta);
    /// The diagonal of a state that must already be diagonal (NotHermitian otherwise).
    static ChiContext from_diagonal_state(const DensityMatrix& sigma);

    int dim() const { return static_cast<int>(beta_.dim()); }
    const Spectrum& beta() const { return beta_; }
    double delta() const;  // smallest beta_i
    double avg(int i, int j) const { return 0.5 * (beta_.values[i] + beta_.values[j]); }

   private:
    Spectrum beta_;
};

/// X as a d^2 x d^2 operator on two tensor factors.
DenseOperator chi_matrix(const ChiContext& ctx);

Complex trtwo(const Matrix& s, const Matrix& t, const ChiContext& ctx);
Complex trthree(const Matrix& r, const Matrix& s, const Matrix& t, const ChiContext& ctx);

/// tr(X^2 rho^{(x)2}) = sum_ij rho_ii rho_jj / avg_ij^2.
double chi_second_moment(const DensityMatrix& rho, const ChiContext& ctx);

/// <<rho, rho>> - 1.
double chi_mean(const DensityMatrix& rho, const ChiContext& ctx);
/// Exact variance of the pair-averaged observable on n copies (n >= 2).
double chi_var_exact(const DensityMatrix& rho, const ChiContext& ctx, int n);
/// Upper bound on chi_var_exact depending only on d, delta = min beta and D.
double chi_var_bound_from_mean(double mean, int d, double delta, int n);
double chi_var_bound(const DensityMatrix& rho, const ChiContext& ctx, int n);

/// (1 / C(n,2)) sum_{i<j} X^{(i,j)} - Id on n factors.
DenseOperator chi_averaged_observable(const ChiContext& ctx, int n, std::int64_t cap = kDefaultDenseCap);

}  // namespace certikit
