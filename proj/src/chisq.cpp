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

#include "certikit/chisq.hpp"

#include <algorithm>
#include <cmath>

namespace certikit {

namespace {

constexpr double kFullRank = 1e-12;

void require_dims(const Matrix& m, const ChiContext& ctx) {
    if (m.rows() != ctx.dim() || m.cols() != ctx.dim())
        fail(ErrorKind::DimMismatch, "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                         ", reference has dimension " + std::to_string(ctx.dim()));
}

void require_n(int n) {
    if (n < 2) fail(ErrorKind::NTooSmall, "the pair-averaged observable needs n >= 2");
}

double pairs(int n) { return 0.5 * n * (n - 1.0); }

}  // namespace

ChiContext::ChiContext(Spectrum beta) : beta_(std::move(beta)) {
    if (beta_.values.empty()) fail(ErrorKind::InvalidArgument, "empty reference spectrum");
    double total = 0;
    for (double b : beta_.values) {
        if (!(b > kFullRank)) fail(ErrorKind::SigmaSingular, "reference state is not full rank");
        total += b;
    }
    if (std::abs(total - 1.0) > 1e-9) fail(ErrorKind::TraceNotOne, "reference spectrum does not sum to 1");
}

ChiContext ChiContext::from_diagonal_state(const DensityMatrix& sigma) {
    if (!sigma.is_diagonal(1e-12)) fail(ErrorKind::InvalidArgument, "reference state must be diagonal");
    std::vector<double> b(sigma.dim());
    for (int i = 0; i < sigma.dim(); ++i) b[i] = sigma.matrix()(i, i).real();
    return ChiContext(Spectrum{b});
}

double ChiContext::delta() const { return *std::min_element(beta_.values.begin(), beta_.values.end()); }

DenseOperator chi_matrix(const ChiContext& ctx) {
    const int d = ctx.dim();
    Matrix x = Matrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) x(j * d + i, i * d + j) = 1.0 / ctx.avg(i, j);
    return DenseOperator(d, 2, std::move(x));
}

Complex trtwo(const Matrix& s, const Matrix& t, const ChiContext& ctx) {
    require_dims(s, ctx);
    require_dims(t, ctx);
    Complex acc = 0;
    for (int i = 0; i < ctx.dim(); ++i)
        for (int j = 0; j < ctx.dim(); ++j) acc += t(i, j) * s(j, i) / ctx.avg(i, j);
    return acc;
}

Complex trthree(const Matrix& r, const Matrix& s, const Matrix& t, const ChiContext& ctx) {
    require_dims(r, ctx);
    require_dims(s, ctx);
    require_dims(t, ctx);
    const int d = ctx.dim();
    Complex acc = 0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Complex inner = 0;
            for (int k = 0; k < d; ++k) inner += s(j, k) * r(k, i) / ctx.avg(i, k);
            acc += t(i, j) * inner / ctx.avg(i, j);
        }
    return acc;
}

double chi_second_moment(const DensityMatrix& rho, const ChiContext& ctx) {
    require_dims(rho.matrix(), ctx);
    double acc = 0;
    for (int i = 0; i < ctx.dim(); ++i)
        for (int j = 0; j < ctx.dim(); ++j) {
            const double a = ctx.avg(i, j);
            acc += rho.matrix()(i, i).real() * rho.matrix()(j, j).real() / (a * a);
        }
    return acc;
}

double chi_mean(const DensityMatrix& rho, const ChiContext& ctx) {
    return trtwo(rho.matrix(), rho.matrix(), ctx).real() - 1.0;
}

double chi_var_exact(const DensityMatrix& rho, const ChiContext& ctx, int n) {
    require_n(n);
    const double two = trtwo(rho.matrix(), rho.matrix(), ctx).real();
    const double three = trthree(rho.matrix(), rho.matrix(), rho.matrix(), ctx).real();
    const double c = pairs(n);
    return (chi_second_moment(rho, ctx) - two * two) / c + 2.0 * (n - 2) / c * (three - two * two);
}

double chi_var_bound_from_mean(double mean, int d, double delta, int n) {
    require_n(n);
    const double D = std::max(0.0, mean);
    const double c = pairs(n);
    return (2.0 * d * d + 2.0 * d / delta * D) / c +
           2.0 * (n - 2) / c * (std::sqrt(2.0 * d / delta) * std::pow(D, 1.5) + 2.0 * D);
}

double chi_var_bound(const DensityMatrix& rho, const ChiContext& ctx, int n) {
    return chi_var_bound_from_mean(chi_mean(rho, ctx), ctx.dim(), ctx.delta(), n);
}

DenseOperator chi_averaged_observable(const ChiContext& ctx, int n, std::int64_t cap) {
    require_n(n);
    const int d = ctx.dim();
    const Matrix x = chi_matrix(ctx).m;
    const std::int64_t side = dense_dimension(d, n, cap);
    Matrix acc = Matrix::Zero(side, side);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) acc += embed_pair(x, d, n, i, j, cap).m;
    acc /= pairs(n);
    acc -= Matrix::Identity(side, side);
    return DenseOperator(d, n, std::move(acc));
}

}  // namespace certikit
