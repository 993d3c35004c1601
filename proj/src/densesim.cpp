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

#include "certikit/densesim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace certikit {

namespace {

constexpr int kMaxTableN = 8;

// Basis index map of P(p): index(x) -> index(y) with y_{p(j)} = x_j.
std::vector<std::int64_t> basis_action(const Permutation& p, int d, std::int64_t dim) {
    const int n = p.size();
    std::vector<std::int64_t> weight(n);
    for (int j = 0; j < n; ++j) {
        std::int64_t w = 1;
        for (int k = j + 1; k < n; ++k) w *= d;
        weight[j] = w;
    }
    std::vector<std::int64_t> out(dim);
    for (std::int64_t x = 0; x < dim; ++x) {
        std::int64_t rest = x, y = 0;
        for (int j = 0; j < n; ++j) {
            std::int64_t letter = rest / weight[j];
            rest %= weight[j];
            y += letter * weight[p(j)];
        }
        out[x] = y;
    }
    return out;
}

void accumulate_perm(Matrix& m, const Permutation& p, int d, Complex coef) {
    auto act = basis_action(p, d, m.rows());
    for (std::int64_t x = 0; x < m.rows(); ++x) m(act[x], x) += coef;
}

void require_same_shape(const DenseOperator& a, const DenseOperator& b) {
    if (a.dim() != b.dim())
        fail(ErrorKind::DimMismatch,
             "operators have sides " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
}

}  // namespace

DenseOperator::DenseOperator(int d_, int n_, Matrix m_) : d(d_), n(n_), m(std::move(m_)) {
    std::int64_t side = 1;
    for (int k = 0; k < n; ++k) side *= d;
    if (m.rows() != side || m.cols() != side)
        fail(ErrorKind::DimMismatch, "dense operator side must equal d^n = " + std::to_string(side));
}

bool DenseOperator::is_hermitian(double tol) const {
    if (m.size() == 0) return true;
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

std::int64_t dense_dimension(int d, int n, std::int64_t cap) {
    if (d < 1 || n < 0) fail(ErrorKind::InvalidArgument, "dense dimension needs d >= 1, n >= 0");
    std::int64_t side = 1;
    for (int k = 0; k < n; ++k) {
        side *= d;
        if (side > cap)
            fail(ErrorKind::TooLarge, "d^n exceeds dense cap " + std::to_string(cap) + " (d=" + std::to_string(d) +
                                          ", n=" + std::to_string(n) + ")");
    }
    return side;
}

DenseOperator identity_operator(int d, int n, std::int64_t cap) {
    std::int64_t side = dense_dimension(d, n, cap);
    return DenseOperator(d, n, Matrix::Identity(side, side));
}

DenseOperator perm_matrix(const Permutation& p, int d, std::int64_t cap) {
    std::int64_t side = dense_dimension(d, p.size(), cap);
    Matrix m = Matrix::Zero(side, side);
    accumulate_perm(m, p, d, 1.0);
    return DenseOperator(d, p.size(), std::move(m));
}

DenseOperator algebra_matrix(const ClassElement& x, int d, std::int64_t cap) {
    const int n = x.ambient();
    std::int64_t side = dense_dimension(d, n, cap);
    Matrix m = Matrix::Zero(side, side);
    for (const auto& [kappa, c] : x.terms()) {
        ClassAvg avg(kappa, n);
        const double w = boost::rational_cast<double>(c) / static_cast<double>(class_size(kappa, n));
        for_each_in_class(avg, [&](const Permutation& p) { accumulate_perm(m, p, d, w); });
    }
    return DenseOperator(d, n, std::move(m));
}

DenseOperator algebra_matrix(const OrbitElement& x, int d, std::int64_t cap) {
    const int total = x.m() + x.n();
    std::int64_t side = dense_dimension(d, total, cap);
    Matrix m = Matrix::Zero(side, side);
    for (const auto& [s, c] : x.terms()) {
        std::vector<Permutation> members;
        for_each_in_orbit(s, x.m(), x.n(), [&](const Permutation& p) { members.push_back(p); });
        const double w = boost::rational_cast<double>(c) / static_cast<double>(members.size());
        for (const auto& p : members) accumulate_perm(m, p, d, w);
    }
    return DenseOperator(d, total, std::move(m));
}

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
    if (a.d != b.d) fail(ErrorKind::DimMismatch, "Kronecker factors have different local dimensions");
    const std::int64_t ra = a.dim(), rb = b.dim();
    Matrix out(ra * rb, ra * rb);
    for (std::int64_t i = 0; i < ra; ++i)
        for (std::int64_t j = 0; j < ra; ++j) out.block(i * rb, j * rb, rb, rb) = a.m(i, j) * b.m;
    return DenseOperator(a.d, a.n + b.n, std::move(out));
}

DenseOperator tensor_power(const DensityMatrix& rho, int n, std::int64_t cap) {
    const int d = rho.dim();
    dense_dimension(d, n, cap);
    DenseOperator out(d, 0, Matrix::Identity(1, 1));
    DenseOperator one(d, 1, rho.matrix());
    for (int k = 0; k < n; ++k) out = kron(out, one);
    return out;
}

DenseOperator bipartite_state(const DensityMatrix& rho, int m, const DensityMatrix& sigma, int n, std::int64_t cap) {
    if (rho.dim() != sigma.dim()) fail(ErrorKind::DimMismatch, "states have different dimensions");
    dense_dimension(rho.dim(), m + n, cap);
    return kron(tensor_power(rho, m, cap), tensor_power(sigma, n, cap));
}

DenseOperator embed_pair(const Matrix& x, int d, int n, int i, int j, std::int64_t cap) {
    if (x.rows() != d * d || x.cols() != d * d) fail(ErrorKind::DimMismatch, "two-site operator must be d^2 x d^2");
    if (i == j || i < 0 || j < 0 || i >= n || j >= n) fail(ErrorKind::InvalidArgument, "invalid site pair");
    std::int64_t side = dense_dimension(d, n, cap);
    std::vector<std::int64_t> weight(n);
    for (int k = 0; k < n; ++k) {
        std::int64_t w = 1;
        for (int t = k + 1; t < n; ++t) w *= d;
        weight[k] = w;
    }
    Matrix out = Matrix::Zero(side, side);
    for (std::int64_t col = 0; col < side; ++col) {
        const int xi = static_cast<int>(col / weight[i] % d), xj = static_cast<int>(col / weight[j] % d);
        const std::int64_t base = col - xi * weight[i] - xj * weight[j];
        for (int yi = 0; yi < d; ++yi)
            for (int yj = 0; yj < d; ++yj) {
                Complex v = x(yi * d + yj, xi * d + xj);
                if (v != Complex(0.0)) out(base + yi * weight[i] + yj * weight[j], col) += v;
            }
    }
    return DenseOperator(d, n, std::move(out));
}

double OutcomeDistribution::mean() const {
    double s = 0.0;
    for (const auto& o : outcomes) s += o.value * o.prob;
    return s;
}

double OutcomeDistribution::variance() const {
    double mu = mean(), s = 0.0;
    for (const auto& o : outcomes) s += (o.value - mu) * (o.value - mu) * o.prob;
    return s;
}

double OutcomeDistribution::total() const {
    double s = 0.0;
    for (const auto& o : outcomes) s += o.prob;
    return s;
}

std::string OutcomeDistribution::csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "value,probability\n";
    for (const auto& o : outcomes) os << o.value << "," << o.prob << "\n";
    return os.str();
}

OutcomeDistribution exact_distribution(const DenseOperator& obs, const DenseOperator& state) {
    require_same_shape(obs, state);
    if (!obs.is_hermitian()) fail(ErrorKind::NotHermitian, "observable is not Hermitian");
    Matrix h = (obs.m + obs.m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const RealVector& ev = es.eigenvalues();
    const Matrix& vecs = es.eigenvectors();
    Matrix rv = state.m * vecs;
    OutcomeDistribution out;
    std::int64_t k = 0;
    const std::int64_t side = ev.size();
    while (k < side) {
        std::int64_t end = k + 1;
        while (end < side && ev(end) - ev(end - 1) <= 1e-9 * std::max(1.0, std::abs(ev(end)))) ++end;
        double prob = 0.0;
        for (std::int64_t t = k; t < end; ++t) prob += vecs.col(t).dot(rv.col(t)).real();
        out.outcomes.push_back({ev(k + (end - k) / 2), prob});
        k = end;
    }
    return out;
}

std::pair<double, double> exact_moments(const DenseOperator& obs, const DenseOperator& state) {
    require_same_shape(obs, state);
    Matrix ro = state.m * obs.m;
    double mean = ro.trace().real();
    double second = (ro * obs.m).trace().real();
    return {mean, second - mean * mean};
}

std::int64_t character(const Partition& lambda, const Partition& kappa) {
    const int n = lambda.size();
    Partition k = kappa;
    if (k.size() < n) k = k.without_ones().padded_to(n);
    if (k.size() != n)
        fail(ErrorKind::SizeMismatch, "cycle type " + kappa.str() + " does not match |lambda| = " + std::to_string(n));
    if (lambda.parts.empty()) return 1;
    const int len = lambda.length();
    if (lambda.parts[0] + len > 63) fail(ErrorKind::TooLarge, "partition too large for bead representation");
    // Beta set {lambda_i + (len - 1 - i)} as a bitmask.
    std::uint64_t beta = 0;
    for (int i = 0; i < len; ++i) beta |= std::uint64_t{1} << (lambda.parts[i] + len - 1 - i);
    std::map<std::pair<std::uint64_t, int>, std::int64_t> memo;
    std::function<std::int64_t(std::uint64_t, int)> rec = [&](std::uint64_t b, int idx) -> std::int64_t {
        if (idx == k.length()) return 1;
        auto key = std::make_pair(b, idx);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const int r = k.parts[idx];
        std::int64_t total = 0;
        for (int pos = r; pos < 64; ++pos) {
            if (!(b >> pos & 1)) continue;
            const int to = pos - r;
            if (b >> to & 1) continue;
            std::uint64_t between = (b >> (to + 1)) & ((std::uint64_t{1} << (r - 1)) - 1);
            const int crossed = std::popcount(between);
            std::uint64_t nb = (b & ~(std::uint64_t{1} << pos)) | (std::uint64_t{1} << to);
            std::int64_t v = rec(nb, idx + 1);
            total += (crossed % 2 ? -v : v);
        }
        memo[key] = total;
        return total;
    };
    return rec(beta, 0);
}

std::map<std::pair<Partition, Partition>, std::int64_t> characters(int n) {
    if (n > kMaxTableN) fail(ErrorKind::TooLarge, "character tables are limited to n <= 8");
    std::map<std::pair<Partition, Partition>, std::int64_t> table;
    auto parts = partitions_of(n);
    for (const auto& lambda : parts)
        for (const auto& kappa : parts) table[{lambda, kappa}] = character(lambda, kappa);
    return table;
}

std::map<Partition, DenseOperator> schur_projectors(int d, int n, std::int64_t cap) {
    if (n > kMaxTableN) fail(ErrorKind::TooLarge, "Schur projectors are limited to n <= 8");
    const std::int64_t side = dense_dimension(d, n, cap);
    auto parts = partitions_of(n);
    // Group sum per conjugacy class, then combine with characters.
    std::map<Partition, Matrix> class_sums;
    for (const auto& kappa : parts) class_sums[kappa] = Matrix::Zero(side, side);
    for_each_permutation(n, [&](const Permutation& p) { accumulate_perm(class_sums[cycle_type(p)], p, d, 1.0); });
    const double nfact = static_cast<double>(factorial(n));
    std::map<Partition, DenseOperator> out;
    for (const auto& lambda : parts) {
        Matrix m = Matrix::Zero(side, side);
        if (lambda.length() <= d) {
            const double scale = static_cast<double>(hook_dimension_exact(lambda)) / nfact;
            for (const auto& [kappa, sum] : class_sums) {
                std::int64_t chi = character(lambda, kappa);
                if (chi != 0) m += (scale * static_cast<double>(chi)) * sum;
            }
        }
        out.emplace(lambda, DenseOperator(d, n, std::move(m)));
    }
    return out;
}

std::map<std::vector<int>, DenseOperator> type_projectors(int d, int n, std::int64_t cap) {
    const std::int64_t side = dense_dimension(d, n, cap);
    std::map<std::vector<int>, Matrix> acc;
    for (std::int64_t x = 0; x < side; ++x) {
        std::vector<int> type(d, 0);
        std::int64_t rest = x;
        for (int j = 0; j < n; ++j) {
            ++type[rest % d];
            rest /= d;
        }
        auto [it, inserted] = acc.try_emplace(type, Matrix::Zero(side, side));
        it->second(x, x) = 1.0;
    }
    std::map<std::vector<int>, DenseOperator> out;
    for (auto& [t, m] : acc) out.emplace(t, DenseOperator(d, n, std::move(m)));
    return out;
}

void check_family(const ProjectorFamily& family) {
    if (family.empty()) fail(ErrorKind::IncompleteFamily, "empty projector family");
    Matrix sum = Matrix::Zero(family[0].dim(), family[0].dim());
    for (const auto& p : family) {
        require_same_shape(p, family[0]);
        sum += p.m;
    }
    double resid = (sum - Matrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff();
    if (resid > 1e-9)
        fail(ErrorKind::IncompleteFamily, "projectors sum to identity only within " + std::to_string(resid));
}

std::vector<int> sequential_measure(const std::vector<ProjectorFamily>& families, const DenseOperator& state,
                                    Rng& rng) {
    Matrix rho = state.m;
    std::vector<int> labels;
    for (const auto& family : families) {
        check_family(family);
        require_same_shape(family[0], state);
        std::vector<double> probs;
        for (const auto& p : family) probs.push_back(std::max(0.0, (p.m * rho * p.m).trace().real()));
        std::size_t k = sample_discrete(probs, rng);
        labels.push_back(static_cast<int>(k));
        rho = family[k].m * rho * family[k].m / probs[k];
    }
    return labels;
}

std::map<std::vector<int>, double> sequential_joint_pmf(const std::vector<ProjectorFamily>& families,
                                                        const DenseOperator& state) {
    for (const auto& f : families) {
        check_family(f);
        require_same_shape(f[0], state);
    }
    std::map<std::vector<int>, double> out;
    std::vector<int> labels;
    // Unnormalized post-measurement states carry the branch probability in their trace.
    std::function<void(std::size_t, const Matrix&)> rec = [&](std::size_t level, const Matrix& rho) {
        double p = rho.trace().real();
        if (p <= 1e-15) return;
        if (level == families.size()) {
            out[labels] = p;
            return;
        }
        for (std::size_t k = 0; k < families[level].size(); ++k) {
            const Matrix& proj = families[level][k].m;
            labels.push_back(static_cast<int>(k));
            rec(level + 1, proj * rho * proj);
            labels.pop_back();
        }
    };
    rec(0, state.m);
    return out;
}

}  // namespace certikit
