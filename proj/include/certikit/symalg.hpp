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

// Symbolic class algebra of the symmetric group.
//
// Elements are exact rational combinations of class averages O_kappa (the
// uniform average of all permutations with cycle type kappa) or, for inputs of
// the form rho^{(x)m} (x) sigma^{(x)n}, of orbit averages O_s under conjugation
// by S_m x S_n. Fixed points are never written: [3] in S_5 means cycle type
// (3,1,1). Products are computed by brute-force enumeration, so they are
// limited to small ambient sizes.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "certikit/combinatorics.hpp"
#include "certikit/common.hpp"
#include "certikit/states.hpp"

namespace certikit {

inline constexpr int kDefaultEnumerationCap = 10;

/// Class average O_kappa in the group algebra of S_n.
struct ClassAvg {
    Partition kappa;  // fixed points dropped
    int n = 0;

    ClassAvg() = default;
    /// Throws SizeMismatch if kappa does not fit in n.
    ClassAvg(Partition k, int ambient);
};

/// Debug order for class keys: fewer moved points first, then larger parts first.
struct ClassKeyOrder {
    bool operator()(const Partition& a, const Partition& b) const;
};

class ClassElement {
   public:
    explicit ClassElement(int n = 0) : n_(n) {}
    static ClassElement basis(const ClassAvg& c);
    static ClassElement identity(int n);

    int ambient() const { return n_; }
    const std::map<Partition, Rational, ClassKeyOrder>& terms() const { return terms_; }
    Rational coefficient(const Partition& kappa) const;
    void add(const Partition& kappa, Rational c);

    ClassElement operator+(const ClassElement& other) const;
    ClassElement operator-(const ClassElement& other) const;
    ClassElement operator*(Rational s) const;
    bool operator==(const ClassElement& other) const;

    /// e.g. "1/6*[] + 2/3*[3] + 1/6*[2,2]".
    std::string str() const;

   private:
    int n_;
    std::map<Partition, Rational, ClassKeyOrder> terms_;
};

/// Orbit of S_{m+n} under conjugation by S_m x S_n. Each nontrivial cycle is
/// a word over {'r','s'} read along the cycle; indices 0..m-1 carry 'r'
/// (rho) and m..m+n-1 carry 's' (sigma). Words are rotated to their
/// lexicographically least rotation and cycles are sorted, so equal orbits
/// compare equal. Fixed points are dropped.
struct OrbitSignature {
    std::vector<std::string> cycles;

    OrbitSignature() = default;
    /// Canonicalizes; throws InvalidArgument on letters other than r/s or words of length < 2.
    explicit OrbitSignature(std::vector<std::string> words);
    /// Parses "(rs)(rrs)" or "[]" (identity).
    static OrbitSignature parse(const std::string& text);

    int rho_count() const;
    int sigma_count() const;
    Partition cycle_type() const;
    std::string str() const;

    bool operator==(const OrbitSignature&) const = default;
};

/// Debug order for orbit keys: cycle types compared lexicographically (so the
/// identity first), then words.
struct OrbitKeyOrder {
    bool operator()(const OrbitSignature& a, const OrbitSignature& b) const;
};

class OrbitElement {
   public:
    OrbitElement(int m = 0, int n = 0) : m_(m), n_(n) {}
    /// Throws SizeMismatch if the signature needs more letters than (m, n) provide.
    static OrbitElement basis(const OrbitSignature& s, int m, int n);
    static OrbitElement identity(int m, int n);

    int m() const { return m_; }
    int n() const { return n_; }
    const std::map<OrbitSignature, Rational, OrbitKeyOrder>& terms() const { return terms_; }
    Rational coefficient(const OrbitSignature& s) const;
    void add(const OrbitSignature& s, Rational c);

    OrbitElement operator+(const OrbitElement& other) const;
    OrbitElement operator-(const OrbitElement& other) const;
    OrbitElement operator*(Rational s) const;
    bool operator==(const OrbitElement& other) const;

    /// e.g. "1/4*[] + 1/4*(rs)(rs) + 1/4*(rrs) + 1/4*(rss)".
    std::string str() const;

   private:
    int m_, n_;
    std::map<OrbitSignature, Rational, OrbitKeyOrder> terms_;
};

/// Calls f(const Permutation&) for each member of the class kappa in S_n.
void for_each_in_class(const ClassAvg& c, const std::function<void(const Permutation&)>& f);
/// Calls f for each member of the orbit s in S_{m+n}.
void for_each_in_orbit(const OrbitSignature& s, int m, int n, const std::function<void(const Permutation&)>& f);

OrbitSignature orbit_of(const Permutation& p, int m, int n);
/// Canonical member of the orbit: letters assigned to indices in increasing order.
Permutation orbit_representative(const OrbitSignature& s, int m, int n);
std::int64_t orbit_size(const OrbitSignature& s, int m, int n);

/// Exact expansion of O_a * O_b, fixing one representative of a and enumerating b
/// (valid because class averages are central). Throws AmbientMismatch or TooLarge.
ClassElement class_product(const ClassAvg& a, const ClassAvg& b, int cap = kDefaultEnumerationCap);
ClassElement class_product(const ClassElement& a, const ClassElement& b, int cap = kDefaultEnumerationCap);

enum class OrbitScheme {
    /// Representative of each left orbit against the full right orbit.
    Representative,
    /// Full double sum over both orbits.
    Full,
};

OrbitElement orbit_product(const OrbitElement& a, const OrbitElement& b,
                           OrbitScheme scheme = OrbitScheme::Representative, int cap = kDefaultEnumerationCap);

/// sum_kappa a_kappa p_kappa(alpha).
double expect_class(const ClassElement& x, const Spectrum& alpha);

/// E[P(x)] on rho^{(x)m} (x) sigma^{(x)n}: each orbit contributes the product of
/// traces of its cycle words. The complex variant keeps the imaginary part
/// (nonzero only for chiral words of length >= 6).
Complex expect_orbit_complex(const OrbitElement& x, const DensityMatrix& rho, const DensityMatrix& sigma);
double expect_orbit(const OrbitElement& x, const DensityMatrix& rho, const DensityMatrix& sigma);

/// O_(rr) + O_(ss) - 2 O_(rs), the unbiased estimator of the squared HS distance.
OrbitElement hs_combination(int m, int n);

// Closed-form variances.

/// Variance of O_(2) on rho^{(x)n}; throws NTooSmall for n < 2.
double var_purity(const Spectrum& alpha, int n);
/// Variance of O_(rs) on rho^{(x)m} (x) sigma^{(x)n}.
double var_linear_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma, int m, int n);
/// Cov[O_(rr), O_(rs)] = (2/m)(tr(rho^2 sigma) - tr(rho^2) tr(rho sigma)).
double cov_rr_rs(const DensityMatrix& rho, const DensityMatrix& sigma, int m);
/// Cov[O_(ss), O_(rs)] = (2/n)(tr(rho sigma^2) - tr(sigma^2) tr(rho sigma)).
double cov_ss_rs(const DensityMatrix& rho, const DensityMatrix& sigma, int n);

/// Exact variance of the HS combination with m = n copies of each state.
double var_hs_exact(const DensityMatrix& rho, const DensityMatrix& sigma, int n);

/// Constant K1 in Var <= K1/n^2 + (4/n) tr((rho+sigma)(rho-sigma)^2).
///
/// Expanding the five terms exactly, the 1/n^2 remainder is
///   2/(n(n-1)) (2 - p2(rho)^2 - p2(sigma)^2)
///   - 4/(n(n-1)) (p3(rho) - p2(rho)^2 + p3(sigma) - p2(sigma)^2)
///   + (4 + 4 tr(rho sigma)^2 - 4 tr(rho^2 sigma) - 4 tr(rho sigma^2)) / n^2.
/// The middle term is <= 0 (p3 >= p2^2), the first is <= 4/(n(n-1)) <= 8/n^2
/// for n >= 2, and the last is <= 8/n^2, so K1 = 16.
inline constexpr double kHsVarianceK1 = 16.0;
double var_hs_bound(const DensityMatrix& rho, const DensityMatrix& sigma, int n);

}  // namespace certikit
