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

#include "certikit/symalg.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace certikit {

namespace {

std::string rational_str(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

template <typename Map, typename KeyStr>
std::string dump_terms(const Map& terms, KeyStr key_str) {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [key, c] : terms) {
        const bool negative = c.numerator() < 0;
        Rational mag = negative ? -c : c;
        if (first) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        out += rational_str(mag) + "*" + key_str(key);
        first = false;
    }
    return out;
}

std::string least_rotation(const std::string& w) {
    std::string best = w;
    for (std::size_t k = 1; k < w.size(); ++k) {
        std::string r = w.substr(k) + w.substr(0, k);
        if (r < best) best = r;
    }
    return best;
}

void require_cap(int size, int cap) {
    if (size > cap)
        fail(ErrorKind::TooLarge,
             "enumeration over " + std::to_string(size) + " points exceeds cap " + std::to_string(cap));
}

// All elements of S_m x S_n acting on {0..m+n-1}, as image vectors.
template <typename F>
void for_each_gamma(int m, int n, F&& f) {
    std::vector<int> a(m), b(n);
    std::iota(a.begin(), a.end(), 0);
    do {
        std::iota(b.begin(), b.end(), m);
        do {
            std::vector<int> g(a);
            g.insert(g.end(), b.begin(), b.end());
            f(g);
        } while (std::next_permutation(b.begin(), b.end()));
    } while (std::next_permutation(a.begin(), a.end()));
}

std::vector<std::vector<int>> orbit_members(const OrbitSignature& s, int m, int n) {
    Permutation rep = orbit_representative(s, m, n);
    const auto& p = rep.images();
    std::set<std::vector<int>> seen;
    for_each_gamma(m, n, [&](const std::vector<int>& g) {
        // g p g^{-1}: maps g(j) to g(p(j)).
        std::vector<int> img(p.size());
        for (std::size_t j = 0; j < p.size(); ++j) img[g[j]] = g[p[j]];
        seen.insert(std::move(img));
    });
    return {seen.begin(), seen.end()};
}

Complex word_trace(const std::string& word, const Matrix& rho, const Matrix& sigma) {
    // The permutation cycle c0 -> c1 -> ... contributes tr(A_{c0} A_{c_{l-1}} ... A_{c1}),
    // i.e. the word read backwards.
    Matrix acc = Matrix::Identity(rho.rows(), rho.cols());
    for (auto it = word.rbegin(); it != word.rend(); ++it) acc = acc * (*it == 'r' ? rho : sigma);
    return acc.trace();
}

}  // namespace

// ---------------------------------------------------------------------------
// Class averages.

ClassAvg::ClassAvg(Partition k, int ambient) : kappa(k.without_ones()), n(ambient) {
    if (kappa.size() > n)
        fail(ErrorKind::SizeMismatch, "class " + kappa.str() + " does not fit in S_" + std::to_string(n));
}

bool ClassKeyOrder::operator()(const Partition& a, const Partition& b) const {
    int sa = a.size(), sb = b.size();
    if (sa != sb) return sa < sb;
    return a.parts > b.parts;
}

ClassElement ClassElement::basis(const ClassAvg& c) {
    ClassElement e(c.n);
    e.add(c.kappa, Rational(1));
    return e;
}

ClassElement ClassElement::identity(int n) { return basis(ClassAvg(Partition{}, n)); }

Rational ClassElement::coefficient(const Partition& kappa) const {
    auto it = terms_.find(kappa.without_ones());
    return it == terms_.end() ? Rational(0) : it->second;
}

void ClassElement::add(const Partition& kappa, Rational c) {
    Partition k = kappa.without_ones();
    if (k.size() > n_) fail(ErrorKind::SizeMismatch, "class " + k.str() + " does not fit in S_" + std::to_string(n_));
    Rational& slot = terms_[k];
    slot += c;
    if (slot.numerator() == 0) terms_.erase(k);
}

ClassElement ClassElement::operator+(const ClassElement& other) const {
    if (other.n_ != n_) fail(ErrorKind::AmbientMismatch, "adding elements of different ambient size");
    ClassElement out = *this;
    for (const auto& [k, c] : other.terms_) out.add(k, c);
    return out;
}

ClassElement ClassElement::operator-(const ClassElement& other) const { return *this + other * Rational(-1); }

ClassElement ClassElement::operator*(Rational s) const {
    ClassElement out(n_);
    if (s.numerator() == 0) return out;
    for (const auto& [k, c] : terms_) out.terms_[k] = c * s;
    return out;
}

bool ClassElement::operator==(const ClassElement& other) const {
    return n_ == other.n_ && terms_ == other.terms_;
}

std::string ClassElement::str() const {
    return dump_terms(terms_, [](const Partition& p) { return p.str(); });
}

void for_each_in_class(const ClassAvg& c, const std::function<void(const Permutation&)>& f) {
    for_each_permutation(c.n, [&](const Permutation& p) {
        if (cycle_type(p).without_ones() == c.kappa) f(p);
    });
}

ClassElement class_product(const ClassAvg& a, const ClassAvg& b, int cap) {
    if (a.n != b.n) fail(ErrorKind::AmbientMismatch, "class averages live in different symmetric groups");
    require_cap(a.n, cap);
    Permutation rep = class_representative(a.kappa, a.n);
    std::map<Partition, std::int64_t> tally;
    std::int64_t total = 0;
    for_each_in_class(b, [&](const Permutation& q) {
        ++tally[cycle_type(rep * q).without_ones()];
        ++total;
    });
    ClassElement out(a.n);
    for (const auto& [k, count] : tally) out.add(k, Rational(count, total));
    return out;
}

ClassElement class_product(const ClassElement& a, const ClassElement& b, int cap) {
    if (a.ambient() != b.ambient()) fail(ErrorKind::AmbientMismatch, "class elements live in different symmetric groups");
    require_cap(a.ambient(), cap);
    ClassElement out(a.ambient());
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms())
            out = out + class_product(ClassAvg(ka, a.ambient()), ClassAvg(kb, b.ambient()), cap) * (ca * cb);
    return out;
}

double expect_class(const ClassElement& x, const Spectrum& alpha) {
    double total = 0.0;
    for (const auto& [kappa, c] : x.terms()) {
        double term = 1.0;
        for (int part : kappa.parts) term *= alpha.power_sum(part);
        total += boost::rational_cast<double>(c) * term;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Orbit averages.

OrbitSignature::OrbitSignature(std::vector<std::string> words) {
    for (auto& w : words) {
        if (w.size() < 2) fail(ErrorKind::InvalidArgument, "orbit cycles must have length >= 2");
        for (char ch : w)
            if (ch != 'r' && ch != 's') fail(ErrorKind::InvalidArgument, "orbit words use letters r and s");
        cycles.push_back(least_rotation(w));
    }
    std::sort(cycles.begin(), cycles.end(), [](const std::string& a, const std::string& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a < b;
    });
}

OrbitSignature OrbitSignature::parse(const std::string& text) {
    if (text == "[]" || text.empty()) return OrbitSignature{};
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '(') fail(ErrorKind::InvalidArgument, "malformed orbit signature '" + text + "'");
        std::size_t close = text.find(')', i);
        if (close == std::string::npos) fail(ErrorKind::InvalidArgument, "malformed orbit signature '" + text + "'");
        words.push_back(text.substr(i + 1, close - i - 1));
        i = close + 1;
    }
    return OrbitSignature(std::move(words));
}

int OrbitSignature::rho_count() const {
    int c = 0;
    for (const auto& w : cycles) c += static_cast<int>(std::count(w.begin(), w.end(), 'r'));
    return c;
}

int OrbitSignature::sigma_count() const {
    int c = 0;
    for (const auto& w : cycles) c += static_cast<int>(std::count(w.begin(), w.end(), 's'));
    return c;
}

Partition OrbitSignature::cycle_type() const {
    std::vector<int> lens;
    for (const auto& w : cycles) lens.push_back(static_cast<int>(w.size()));
    return Partition(std::move(lens));
}

std::string OrbitSignature::str() const {
    if (cycles.empty()) return "[]";
    std::string s;
    for (const auto& w : cycles) s += "(" + w + ")";
    return s;
}

bool OrbitKeyOrder::operator()(const OrbitSignature& a, const OrbitSignature& b) const {
    auto ta = a.cycle_type().parts, tb = b.cycle_type().parts;
    if (ta != tb) return ta < tb;
    return a.cycles < b.cycles;
}

OrbitElement OrbitElement::basis(const OrbitSignature& s, int m, int n) {
    OrbitElement e(m, n);
    e.add(s, Rational(1));
    return e;
}

OrbitElement OrbitElement::identity(int m, int n) { return basis(OrbitSignature{}, m, n); }

Rational OrbitElement::coefficient(const OrbitSignature& s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? Rational(0) : it->second;
}

void OrbitElement::add(const OrbitSignature& s, Rational c) {
    if (s.rho_count() > m_ || s.sigma_count() > n_)
        fail(ErrorKind::SizeMismatch, "orbit " + s.str() + " needs more copies than (m, n) = (" + std::to_string(m_) +
                                          ", " + std::to_string(n_) + ")");
    Rational& slot = terms_[s];
    slot += c;
    if (slot.numerator() == 0) terms_.erase(s);
}

OrbitElement OrbitElement::operator+(const OrbitElement& other) const {
    if (other.m_ != m_ || other.n_ != n_) fail(ErrorKind::AmbientMismatch, "adding orbit elements with different (m, n)");
    OrbitElement out = *this;
    for (const auto& [s, c] : other.terms_) out.add(s, c);
    return out;
}

OrbitElement OrbitElement::operator-(const OrbitElement& other) const { return *this + other * Rational(-1); }

OrbitElement OrbitElement::operator*(Rational s) const {
    OrbitElement out(m_, n_);
    if (s.numerator() == 0) return out;
    for (const auto& [k, c] : terms_) out.terms_[k] = c * s;
    return out;
}

bool OrbitElement::operator==(const OrbitElement& other) const {
    return m_ == other.m_ && n_ == other.n_ && terms_ == other.terms_;
}

std::string OrbitElement::str() const {
    return dump_terms(terms_, [](const OrbitSignature& s) { return s.str(); });
}

OrbitSignature orbit_of(const Permutation& p, int m, int n) {
    if (p.size() != m + n)
        fail(ErrorKind::SizeMismatch, "permutation of size " + std::to_string(p.size()) + " is not in S_(m+n)");
    std::vector<std::string> words;
    for (const auto& c : p.cycles()) {
        if (c.size() < 2) continue;
        std::string w;
        for (int j : c) w += j < m ? 'r' : 's';
        words.push_back(std::move(w));
    }
    return OrbitSignature(std::move(words));
}

Permutation orbit_representative(const OrbitSignature& s, int m, int n) {
    if (s.rho_count() > m || s.sigma_count() > n)
        fail(ErrorKind::SizeMismatch, "orbit " + s.str() + " does not fit in (m, n)");
    int next_r = 0, next_s = m;
    std::vector<std::vector<int>> cycles;
    for (const auto& w : s.cycles) {
        std::vector<int> c;
        for (char ch : w) c.push_back(ch == 'r' ? next_r++ : next_s++);
        cycles.push_back(std::move(c));
    }
    return Permutation::from_cycles(m + n, cycles);
}

std::int64_t orbit_size(const OrbitSignature& s, int m, int n) {
    return static_cast<std::int64_t>(orbit_members(s, m, n).size());
}

void for_each_in_orbit(const OrbitSignature& s, int m, int n, const std::function<void(const Permutation&)>& f) {
    for (auto& img : orbit_members(s, m, n)) f(Permutation(std::move(img)));
}

OrbitElement orbit_product(const OrbitElement& a, const OrbitElement& b, OrbitScheme scheme, int cap) {
    if (a.m() != b.m() || a.n() != b.n()) fail(ErrorKind::AmbientMismatch, "orbit elements with different (m, n)");
    const int m = a.m(), n = a.n();
    require_cap(m + n, cap);
    OrbitElement out(m, n);
    for (const auto& [sa, ca] : a.terms()) {
        std::vector<Permutation> lefts;
        if (scheme == OrbitScheme::Representative) {
            lefts.push_back(orbit_representative(sa, m, n));
        } else {
            for (auto& img : orbit_members(sa, m, n)) lefts.emplace_back(std::move(img));
        }
        for (const auto& [sb, cb] : b.terms()) {
            auto rights = orbit_members(sb, m, n);
            std::map<OrbitSignature, std::int64_t, OrbitKeyOrder> tally;
            for (const auto& l : lefts)
                for (const auto& r : rights) ++tally[orbit_of(l * Permutation(r), m, n)];
            const std::int64_t total = static_cast<std::int64_t>(lefts.size() * rights.size());
            for (const auto& [s, count] : tally) out.add(s, ca * cb * Rational(count, total));
        }
    }
    return out;
}

Complex expect_orbit_complex(const OrbitElement& x, const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) fail(ErrorKind::DimMismatch, "states have different dimensions");
    Complex total = 0.0;
    for (const auto& [s, c] : x.terms()) {
        Complex term = 1.0;
        for (const auto& w : s.cycles) term *= word_trace(w, rho.matrix(), sigma.matrix());
        total += boost::rational_cast<double>(c) * term;
    }
    return total;
}

double expect_orbit(const OrbitElement& x, const DensityMatrix& rho, const DensityMatrix& sigma) {
    return expect_orbit_complex(x, rho, sigma).real();
}

OrbitElement hs_combination(int m, int n) {
    return OrbitElement::basis(OrbitSignature({"rr"}), m, n) + OrbitElement::basis(OrbitSignature({"ss"}), m, n) -
           OrbitElement::basis(OrbitSignature({"rs"}), m, n) * Rational(2);
}

// ---------------------------------------------------------------------------
// Variances.

namespace {

struct MixedTraces {
    double t;      // tr(rho sigma)
    double a;      // tr(rho^2 sigma)
    double b;      // tr(rho sigma^2)
    double p2rho;  // tr(rho^2)
    double p2sig;  // tr(sigma^2)
};

MixedTraces mixed_traces(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) fail(ErrorKind::DimMismatch, "states have different dimensions");
    const Matrix& r = rho.matrix();
    const Matrix& s = sigma.matrix();
    Matrix rs = r * s;
    return {rs.trace().real(), (r * rs).trace().real(), (rs * s).trace().real(), (r * r).trace().real(),
            (s * s).trace().real()};
}

}  // namespace

double var_purity(const Spectrum& alpha, int n) {
    if (n < 2) fail(ErrorKind::NTooSmall, "purity observable needs n >= 2");
    const double c2 = binomial(n, 2);
    const double p2 = alpha.power_sum(2), p3 = alpha.power_sum(3);
    return (1.0 - p2 * p2) / c2 + 2.0 * (n - 2) / c2 * (p3 - p2 * p2);
}

double var_linear_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma, int m, int n) {
    if (m < 1 || n < 1) fail(ErrorKind::NTooSmall, "overlap observable needs m, n >= 1");
    MixedTraces x = mixed_traces(rho, sigma);
    const double mn = static_cast<double>(m) * n;
    return 1.0 / mn + (1.0 - m - n) / mn * x.t * x.t + (1.0 / n) * (1.0 - 1.0 / m) * x.a +
           (1.0 / m) * (1.0 - 1.0 / n) * x.b;
}

double cov_rr_rs(const DensityMatrix& rho, const DensityMatrix& sigma, int m) {
    MixedTraces x = mixed_traces(rho, sigma);
    return 2.0 / m * (x.a - x.p2rho * x.t);
}

double cov_ss_rs(const DensityMatrix& rho, const DensityMatrix& sigma, int n) {
    MixedTraces x = mixed_traces(rho, sigma);
    return 2.0 / n * (x.b - x.p2sig * x.t);
}

double var_hs_exact(const DensityMatrix& rho, const DensityMatrix& sigma, int n) {
    if (rho.dim() != sigma.dim()) fail(ErrorKind::DimMismatch, "states have different dimensions");
    if (n < 2) fail(ErrorKind::NTooSmall, "HS observable needs n >= 2");
    return var_purity(rho.spectrum(), n) + var_purity(sigma.spectrum(), n) +
           4.0 * var_linear_fidelity(rho, sigma, n, n) - 4.0 * cov_rr_rs(rho, sigma, n) -
           4.0 * cov_ss_rs(rho, sigma, n);
}

double var_hs_bound(const DensityMatrix& rho, const DensityMatrix& sigma, int n) {
    if (rho.dim() != sigma.dim()) fail(ErrorKind::DimMismatch, "states have different dimensions");
    if (n < 2) fail(ErrorKind::NTooSmall, "HS observable needs n >= 2");
    Matrix delta = rho.matrix() - sigma.matrix();
    double cubic = ((rho.matrix() + sigma.matrix()) * delta * delta).trace().real();
    return kHsVarianceK1 / (static_cast<double>(n) * n) + 4.0 / n * cubic;
}

}  // namespace certikit
