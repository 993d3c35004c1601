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

#include "certikit/common.hpp"

#include <numeric>

namespace certikit {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NotPSD: return "NotPSD";
        case ErrorKind::TraceNotOne: return "TraceNotOne";
        case ErrorKind::DimMismatch: return "DimMismatch";
        case ErrorKind::SigmaSingular: return "SigmaSingular";
        case ErrorKind::SigmaIllConditioned: return "SigmaIllConditioned";
        case ErrorKind::CountMismatch: return "CountMismatch";
        case ErrorKind::EtaOutOfRange: return "EtaOutOfRange";
        case ErrorKind::OddDimension: return "OddDimension";
        case ErrorKind::EpsOutOfRange: return "EpsOutOfRange";
        case ErrorKind::RankOutOfRange: return "RankOutOfRange";
        case ErrorKind::AmbientMismatch: return "AmbientMismatch";
        case ErrorKind::SizeMismatch: return "SizeMismatch";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::NTooSmall: return "NTooSmall";
        case ErrorKind::IncompleteFamily: return "IncompleteFamily";
        case ErrorKind::BadTheta: return "BadTheta";
        case ErrorKind::BadGamma: return "BadGamma";
        case ErrorKind::BadProfile: return "BadProfile";
        case ErrorKind::BackendUnsupported: return "BackendUnsupported";
        case ErrorKind::GridExhausted: return "GridExhausted";
        case ErrorKind::SuiteUnknown: return "SuiteUnknown";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

bool is_numerical(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotHermitian:
        case ErrorKind::NotPSD:
        case ErrorKind::TraceNotOne:
        case ErrorKind::SigmaSingular:
        case ErrorKind::SigmaIllConditioned:
        case ErrorKind::IncompleteFamily:
        case ErrorKind::GridExhausted:
            return true;
        default:
            return false;
    }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x9E3779B97F4A7C15ULL));
}

Rng make_stream(std::uint64_t seed, std::uint64_t stream) { return Rng(stream_key(seed, stream)); }

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t sample_discrete(std::span<const double> weights, Rng& rng) {
    double total = 0.0;
    for (double w : weights) total += w > 0 ? w : 0.0;
    if (!(total > 0.0)) fail(ErrorKind::InvalidArgument, "sample_discrete: weights sum to zero");
    double u = uniform01(rng) * total;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0) continue;
        last_positive = i;
        if (u < weights[i]) return i;
        u -= weights[i];
    }
    return last_positive;
}

}  // namespace certikit
