// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "spectra/rng.hpp"

#include <cmath>
#include <numbers>

namespace spectra {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t stream_key(std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = 0x5350454354524121ULL;
    for (auto k : keys) {
        h = mix64(h ^ (k + kGolden));
    }
    return h;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : base_(mix64(seed ^ mix64(stream))) {}

std::uint64_t CounterRng::next_u64() {
    ++counter_;
    return mix64(base_ + counter_ * kGolden);
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double CounterRng::normal() {
    const double u1 = 1.0 - uniform();  // (0,1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double CounterRng::normal(double mean, double stddev) { return mean + stddev * normal(); }

bool CounterRng::bernoulli(double p) { return uniform() < p; }

int CounterRng::poisson(double mean) {
    if (mean <= 0.0) {
        return 0;
    }
    const double limit = std::exp(-mean);
    int k = 0;
    double prod = uniform();
    while (prod > limit) {
        ++k;
        prod *= uniform();
    }
    return k;
}

std::int64_t CounterRng::uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
}

}  // namespace spectra
