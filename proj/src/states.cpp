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

#include "certikit/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace certikit {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim())
        fail(ErrorKind::DimMismatch,
             "states have dimensions " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
}

void require_same_dim(const ClassicalDistribution& p, const ClassicalDistribution& q) {
    if (p.dim() != q.dim())
        fail(ErrorKind::DimMismatch,
             "distributions have lengths " + std::to_string(p.dim()) + " and " + std::to_string(q.dim()));
}

}  // namespace

double Spectrum::power_sum(int r) const {
    double s = 0.0;
    for (double a : values) s += std::pow(a, r);
    return s;
}

ClassicalDistribution::ClassicalDistribution(std::vector<double> p) : probs(std::move(p)) {
    double total = 0.0;
    for (double x : probs) {
        if (x < 0) fail(ErrorKind::InvalidArgument, "negative probability " + fmt(x));
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-12)
        fail(ErrorKind::InvalidArgument, "probabilities sum to " + fmt(total));
}

ClassicalDistribution ClassicalDistribution::uniform(std::size_t d) {
    return ClassicalDistribution(std::vector<double>(d, 1.0 / static_cast<double>(d)));
}

DensityMatrix DensityMatrix::validate(const Matrix& m, const Tolerances& tol) {
    if (m.rows() != m.cols() || m.rows() == 0)
        fail(ErrorKind::DimMismatch, "density matrix must be square and nonempty");
    double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol.hermitian)
        fail(ErrorKind::NotHermitian, "max |M - M^dagger| = " + fmt(herm));
    Matrix h = (m + m.adjoint()) / 2.0;
    double tr = h.trace().real();
    if (std::abs(tr - 1.0) > tol.trace) fail(ErrorKind::TraceNotOne, "trace = " + fmt(tr));
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    double lo = es.eigenvalues()(0);
    if (lo < -tol.psd) fail(ErrorKind::NotPSD, "minimum eigenvalue = " + fmt(lo));
    return DensityMatrix(std::move(h), es.eigenvalues(), es.eigenvectors());
}

Spectrum DensityMatrix::spectrum() const {
    Spectrum s;
    s.values.assign(evals_.data(), evals_.data() + evals_.size());
    std::sort(s.values.begin(), s.values.end(), std::greater<>());
    return s;
}

Matrix DensityMatrix::sqrt(double clamp) const {
    RealVector r = evals_.unaryExpr([clamp](double x) { return x < clamp ? 0.0 : std::sqrt(x); });
    return evecs_ * r.cast<Complex>().asDiagonal() * evecs_.adjoint();
}

DensityMatrix DensityMatrix::conjugated(const Matrix& u) const {
    Matrix c = u * m_ * u.adjoint();
    return validate((c + c.adjoint()) / 2.0);
}

bool DensityMatrix::is_diagonal(double tol) const {
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j)
            if (i != j && std::abs(m_(i, j)) > tol) return false;
    return true;
}

DensityMatrix validate_state(const Matrix& m, const Tolerances& tol) { return DensityMatrix::validate(m, tol); }

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho, sigma);
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix() - sigma.matrix(), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double hs_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho, sigma);
    return (rho.matrix() - sigma.matrix()).norm();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho, sigma);
    Matrix prod = rho.sqrt() * sigma.sqrt();
    Eigen::JacobiSVD<Matrix> svd(prod);
    return std::min(1.0, svd.singularValues().sum());
}

double bures_sq(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return std::max(0.0, 2.0 * (1.0 - fidelity(rho, sigma)));
}

double bures_chisq(const DensityMatrix& rho, const DensityMatrix& sigma, const Tolerances& tol) {
    require_same_dim(rho, sigma);
    if (sigma.min_eigenvalue() <= tol.full_rank)
        fail(ErrorKind::SigmaSingular, "reference state has eigenvalue " + fmt(sigma.min_eigenvalue()));
    const Matrix& u = sigma.eigenvectors();
    const RealVector& beta = sigma.eigenvalues();
    Matrix delta = u.adjoint() * (rho.matrix() - sigma.matrix()) * u;
    double total = 0.0;
    for (int i = 0; i < delta.rows(); ++i)
        for (int j = 0; j < delta.cols(); ++j) total += 2.0 * std::norm(delta(i, j)) / (beta(i) + beta(j));
    return total;
}

double tv(const ClassicalDistribution& p, const ClassicalDistribution& q) {
    require_same_dim(p, q);
    double s = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) s += std::abs(p.probs[i] - q.probs[i]);
    return 0.5 * s;
}

double l2(const ClassicalDistribution& p, const ClassicalDistribution& q) {
    require_same_dim(p, q);
    double s = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) s += (p.probs[i] - q.probs[i]) * (p.probs[i] - q.probs[i]);
    return std::sqrt(s);
}

double hellinger(const ClassicalDistribution& p, const ClassicalDistribution& q) {
    require_same_dim(p, q);
    double s = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
        double d = std::sqrt(p.probs[i]) - std::sqrt(q.probs[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

double bhattacharyya(const ClassicalDistribution& p, const ClassicalDistribution& q) {
    require_same_dim(p, q);
    double s = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) s += std::sqrt(p.probs[i] * q.probs[i]);
    return s;
}

double classical_chisq(const ClassicalDistribution& p, const ClassicalDistribution& q) {
    require_same_dim(p, q);
    double s = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
        if (q.probs[i] == 0.0) {
            if (p.probs[i] > 0.0) return std::numeric_limits<double>::infinity();
            continue;
        }
        double d = p.probs[i] - q.probs[i];
        s += d * d / q.probs[i];
    }
    return s;
}

ClassicalDistribution add_one_estimate(std::span<const std::int64_t> counts, std::int64_t n) {
    std::int64_t total = 0;
    for (auto c : counts) {
        if (c < 0) fail(ErrorKind::CountMismatch, "negative count");
        total += c;
    }
    if (total != n)
        fail(ErrorKind::CountMismatch, "counts sum to " + std::to_string(total) + ", expected " + std::to_string(n));
    const double denom = static_cast<double>(n) + static_cast<double>(counts.size());
    std::vector<double> p(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) p[i] = (static_cast<double>(counts[i]) + 1.0) / denom;
    ClassicalDistribution out;
    out.probs = std::move(p);
    return out;
}

double add_one_expected_chisq(const ClassicalDistribution& p, std::int64_t n) {
    const double d = static_cast<double>(p.dim());
    const double nn = static_cast<double>(n);
    double tail = 0.0;
    for (double pi : p.probs) tail += pi * std::pow(1.0 - pi, nn + 1.0);
    return (d - 1.0) / (nn + 1.0) - ((nn + d) / (nn + 1.0)) * tail;
}

DensityMatrix depolarize(const DensityMatrix& rho, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) fail(ErrorKind::EtaOutOfRange, "eta = " + fmt(eta));
    const int d = rho.dim();
    Matrix out = (1.0 - eta) * rho.matrix() + (eta / d) * Matrix::Identity(d, d);
    return DensityMatrix::validate(out);
}

DensityMatrix maximally_mixed(int d) {
    if (d < 1) fail(ErrorKind::InvalidArgument, "dimension must be positive");
    return DensityMatrix::validate(Matrix::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix paninski(int d, double eps) {
    if (d < 2 || d % 2 != 0) fail(ErrorKind::OddDimension, "paninski family needs even d, got " + std::to_string(d));
    if (!(eps >= 0.0 && eps <= 0.5)) fail(ErrorKind::EpsOutOfRange, "eps = " + fmt(eps));
    Matrix m = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = (i % 2 == 0 ? 1.0 + 2.0 * eps : 1.0 - 2.0 * eps) / d;
    return DensityMatrix::validate(m);
}

DensityMatrix random_state(int d, int rank, std::uint64_t seed) {
    if (d < 1) fail(ErrorKind::InvalidArgument, "dimension must be positive");
    if (rank < 1 || rank > d) fail(ErrorKind::RankOutOfRange, "rank " + std::to_string(rank) + " for d = " + std::to_string(d));
    Rng rng = make_stream(seed, 0);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(d, rank);
    for (int j = 0; j < rank; ++j)
        for (int i = 0; i < d; ++i) {
            double re = normal(rng);
            double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    Matrix w = g * g.adjoint();
    w /= w.trace().real();
    return DensityMatrix::validate((w + w.adjoint()) / 2.0);
}

DensityMatrix pure_state(const Eigen::VectorXcd& psi) {
    double nrm = psi.norm();
    if (!(nrm > 0)) fail(ErrorKind::InvalidArgument, "zero state vector");
    Eigen::VectorXcd v = psi / nrm;
    return DensityMatrix::validate(v * v.adjoint());
}

DensityMatrix diagonal_state(const ClassicalDistribution& p) {
    const int d = static_cast<int>(p.dim());
    Matrix m = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = p.probs[i];
    return DensityMatrix::validate(m);
}

ClassicalDistribution diag_of(const DensityMatrix& rho) {
    std::vector<double> p(rho.dim());
    double total = 0.0;
    for (int i = 0; i < rho.dim(); ++i) {
        p[i] = std::max(0.0, rho.matrix()(i, i).real());
        total += p[i];
    }
    for (double& x : p) x /= total;
    ClassicalDistribution out;
    out.probs = std::move(p);
    return out;
}

Matrix random_unitary(int d, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix z(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            double re = normal(rng);
            double im = normal(rng);
            z(i, j) = Complex(re, im);
        }
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        Complex ph = r(i, i) / std::abs(r(i, i));
        q.col(i) *= ph;
    }
    return q;
}

}  // namespace certikit
