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

#include "certikit/combinatorics.hpp"

#include <functional>
#include <map>

#include "certikit/common.hpp"

namespace certikit {

Partition::Partition(std::vector<int> p) {
    for (int x : p) {
        if (x < 0) fail(ErrorKind::InvalidArgument, "negative part in partition");
        if (x > 0) parts.push_back(x);
    }
    std::sort(parts.begin(), parts.end(), std::greater<>());
}

int Partition::size() const { return std::accumulate(parts.begin(), parts.end(), 0); }

Partition Partition::without_ones() const {
    Partition out;
    for (int x : parts)
        if (x >= 2) out.parts.push_back(x);
    return out;
}

Partition Partition::padded_to(int n) const {
    Partition out = *this;
    int missing = n - size();
    if (missing < 0) fail(ErrorKind::SizeMismatch, "partition " + str() + " does not fit in " + std::to_string(n));
    out.parts.insert(out.parts.end(), missing, 1);
    return out;
}

std::string Partition::str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(parts[i]);
    }
    return s + "]";
}

std::vector<Partition> partitions_of(int n, int max_parts) {
    if (max_parts < 0) max_parts = n;
    std::vector<Partition> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int remaining, int cap) {
        if (remaining == 0) {
            Partition p;
            p.parts = cur;
            out.push_back(std::move(p));
            return;
        }
        if (static_cast<int>(cur.size()) == max_parts) return;
        for (int part = std::min(remaining, cap); part >= 1; --part) {
            cur.push_back(part);
            rec(remaining - part, part);
            cur.pop_back();
        }
    };
    if (n == 0) return {Partition{}};
    rec(n, n);
    return out;
}

namespace {

std::vector<int> hook_lengths(const Partition& lambda) {
    std::vector<int> hooks;
    const int rows = lambda.length();
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < lambda.parts[i]; ++j) {
            int arm = lambda.parts[i] - j - 1;
            int leg = 0;
            for (int k = i + 1; k < rows && lambda.parts[k] > j; ++k) ++leg;
            hooks.push_back(arm + leg + 1);
        }
    }
    return hooks;
}

}  // namespace

double hook_dimension(const Partition& lambda) {
    if (lambda.size() <= 20) return static_cast<double>(hook_dimension_exact(lambda));
    std::vector<int> hooks = hook_lengths(lambda);
    std::sort(hooks.begin(), hooks.end());
    // Interleave numerator and denominator factors to stay in range.
    double value = 1.0;
    for (std::size_t k = 0; k < hooks.size(); ++k) value *= static_cast<double>(k + 1) / hooks[k];
    return value;
}

std::int64_t hook_dimension_exact(const Partition& lambda) {
    const int n = lambda.size();
    if (n > 20) fail(ErrorKind::TooLarge, "exact hook dimension needs n <= 20");
    std::int64_t num = factorial(n);
    std::int64_t den = 1;
    for (int h : hook_lengths(lambda)) den *= h;
    return num / den;
}

std::int64_t factorial(int n) {
    if (n < 0 || n > 20) fail(ErrorKind::TooLarge, "factorial argument out of range");
    std::int64_t f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

double binomial(double n, int k) {
    if (k < 0 || n < k) return 0.0;
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<char> seen(images_.size(), 0);
    for (int x : images_) {
        if (x < 0 || x >= static_cast<int>(images_.size()) || seen[x])
            fail(ErrorKind::InvalidArgument, "not a permutation");
        seen[x] = 1;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 0);
    return Permutation(std::move(img));
}

Permutation Permutation::from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 0);
    std::vector<char> used(n, 0);
    for (const auto& c : cycles) {
        for (std::size_t k = 0; k < c.size(); ++k) {
            int a = c[k];
            if (a < 0 || a >= n || used[a]) fail(ErrorKind::InvalidArgument, "cycles are not disjoint in range");
            used[a] = 1;
            img[a] = c[(k + 1) % c.size()];
        }
    }
    return Permutation(std::move(img));
}

Permutation Permutation::operator*(const Permutation& other) const {
    if (size() != other.size()) fail(ErrorKind::SizeMismatch, "composing permutations of different sizes");
    std::vector<int> img(size());
    for (int j = 0; j < size(); ++j) img[j] = images_[other.images_[j]];
    Permutation out;
    out.images_ = std::move(img);
    return out;
}

Permutation Permutation::inverse() const {
    std::vector<int> img(size());
    for (int j = 0; j < size(); ++j) img[images_[j]] = j;
    Permutation out;
    out.images_ = std::move(img);
    return out;
}

std::vector<std::vector<int>> Permutation::cycles() const {
    std::vector<std::vector<int>> out;
    std::vector<char> seen(size(), 0);
    for (int s = 0; s < size(); ++s) {
        if (seen[s]) continue;
        std::vector<int> c;
        for (int j = s; !seen[j]; j = images_[j]) {
            seen[j] = 1;
            c.push_back(j);
        }
        out.push_back(std::move(c));
    }
    return out;
}

Partition cycle_type(const Permutation& p) {
    std::vector<int> lens;
    std::vector<char> seen(p.size(), 0);
    for (int s = 0; s < p.size(); ++s) {
        if (seen[s]) continue;
        int len = 0;
        for (int j = s; !seen[j]; j = p(j)) {
            seen[j] = 1;
            ++len;
        }
        lens.push_back(len);
    }
    return Partition(std::move(lens));
}

Permutation class_representative(const Partition& kappa, int n) {
    Partition k = kappa.without_ones();
    if (k.size() > n) fail(ErrorKind::SizeMismatch, "class " + k.str() + " does not fit in " + std::to_string(n));
    std::vector<std::vector<int>> cycles;
    int next = 0;
    for (int len : k.parts) {
        std::vector<int> c(len);
        std::iota(c.begin(), c.end(), next);
        next += len;
        cycles.push_back(std::move(c));
    }
    return Permutation::from_cycles(n, cycles);
}

std::int64_t class_size(const Partition& kappa, int n) {
    Partition full = kappa.without_ones().padded_to(n);
    std::map<int, int> mult;
    for (int x : full.parts) ++mult[x];
    std::int64_t z = 1;
    for (auto [len, m] : mult) {
        for (int i = 0; i < m; ++i) z *= len;
        z *= factorial(m);
    }
    return factorial(n) / z;
}

}  // namespace certikit
