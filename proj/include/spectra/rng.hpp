// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <initializer_list>

namespace spectra {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Folds a list of keys into one 64-bit stream id.
std::uint64_t stream_key(std::initializer_list<std::uint64_t> keys);

/// Counter-based generator: the n-th draw of stream s under seed k is
/// mix64(mix64(k ^ mix64(s)) + n * 0x9E3779B97F4A7C15), so every value is
/// reproducible from (seed, stream, n) alone.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    /// Uniform in [0,1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi);
    /// Standard normal via Box-Muller (one value per two uniforms).
    double normal();
    double normal(double mean, double stddev);
    bool bernoulli(double p);
    /// Knuth's multiplicative method; intended for small means.
    int poisson(double mean);
    /// Uniform integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

}  // namespace spectra
