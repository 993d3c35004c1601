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

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <boost/rational.hpp>

namespace certikit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Rational = boost::rational<std::int64_t>;

enum class ErrorKind {
    NotHermitian,
    NotPSD,
    TraceNotOne,
    DimMismatch,
    SigmaSingular,
    SigmaIllConditioned,
    CountMismatch,
    EtaOutOfRange,
    OddDimension,
    EpsOutOfRange,
    RankOutOfRange,
    AmbientMismatch,
    SizeMismatch,
    TooLarge,
    NTooSmall,
    IncompleteFamily,
    BadTheta,
    BadGamma,
    BadProfile,
    BackendUnsupported,
    GridExhausted,
    SuiteUnknown,
    InvalidArgument,
};

const char* to_string(ErrorKind kind);

/// True for errors caused by the numerical content of an input (a matrix that
/// is not a state, a singular reference state) as opposed to a malformed request.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string& message);
    ErrorKind kind() const noexcept { return kind_; }

   private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

// ---------------------------------------------------------------------------
// Random streams.
//
// Every randomized routine takes an explicit Rng. Independent streams are
// derived from a (seed, stream) pair by two rounds of SplitMix64:
//   key = splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x9E3779B97F4A7C15))
// and the engine is an mt19937_64 seeded with `key`. Trial t of an experiment
// with seed s always uses make_stream(s, t).
// ---------------------------------------------------------------------------
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream);
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

/// Index drawn from an (unnormalized, nonnegative) weight vector by inversion.
std::size_t sample_discrete(std::span<const double> weights, Rng& rng);

}  // namespace certikit
