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

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace certikit {

/// Nonincreasing sequence of positive integers.
struct Partition {
    std::vector<int> parts;

    Partition() = default;
    /// Sorts and drops zero parts; throws InvalidArgument on negatives.
    explicit Partition(std::vector<int> p);

    int size() const;  // sum of parts
    int length() const { return static_cast<int>(parts.size()); }
    bool empty() const { return parts.empty(); }
    int operator[](std::size_t i) const { return i < parts.size() ? parts[i] : 0; }
    /// Parts >= 2 only (the cycle type with fixed points dropped).
    Partition without_ones() const;
    /// Appends ones until the size is n.
    Partition padded_to(int n) const;
    /// JSON-style array text, e.g. "[3,1]".
    std::string str() const;

    auto operator<=>(const Partition&) const = default;
};

/// All partitions of n with at most `max_parts` parts, in reverse
/// lexicographic order: (n), (n-1,1), ...
std::vector<Partition> partitions_of(int n, int max_parts = -1);

/// Number of standard Young tableaux (hook-length formula), as a double.
double hook_dimension(const Partition& lambda);
/// Exact hook-length dimension; requires size <= 20.
std::int64_t hook_dimension_exact(const Partition& lambda);

std::int64_t factorial(int n);
double binomial(double n, int k);

/// Bijection on {0, ..., n-1}; images[j] is the image of j.
class Permutation {
   public:
    Permutation() = default;
    /// Throws InvalidArgument unless `images` is a bijection.
    explicit Permutation(std::vector<int> images);
    static Permutation identity(int n);
    /// Builds a permutation of size n from disjoint cycles given as 0-based
    /// index lists; each cycle maps c[0] -> c[1] -> ... -> c[0].
    static Permutation from_cycles(int n, const std::vector<std::vector<int>>& cycles);

    int size() const { return static_cast<int>(images_.size()); }
    int operator()(int j) const { return images_[j]; }
    const std::vector<int>& images() const { return images_; }

    /// (a * b)(j) = a(b(j)): apply b first.
    Permutation operator*(const Permutation& other) const;
    Permutation inverse() const;
    /// Disjoint cycles including fixed points; each cycle starts at its smallest element.
    std::vector<std::vector<int>> cycles() const;

    bool operator==(const Permutation&) const = default;

   private:
    std::vector<int> images_;
};

/// Sorted cycle lengths, fixed points included.
Partition cycle_type(const Permutation& p);

/// Calls f(const Permutation&) for every element of the symmetric group on n points.
template <typename F>
void for_each_permutation(int n, F&& f);

/// Representative of the class with cycle type kappa (fixed points implicit) in S_n:
/// consecutive cycles (0 1 ... k-1)(k ...).
Permutation class_representative(const Partition& kappa, int n);

/// Size of the conjugacy class with cycle type kappa (fixed points implicit) in S_n.
std::int64_t class_size(const Partition& kappa, int n);

}  // namespace certikit

#include <algorithm>
#include <numeric>

namespace certikit {

template <typename F>
void for_each_permutation(int n, F&& f) {
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 0);
    do {
        f(Permutation(img));
    } while (std::next_permutation(img.begin(), img.end()));
}

}  // namespace certikit
