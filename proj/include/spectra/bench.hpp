// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "spectra/config.hpp"
#include "spectra/synth.hpp"

namespace spectra {

struct BenchOptions {
    int objects = 5;
    int frames = 1000;
    int repetitions = 3;
    std::uint64_t seed = 7;
    /// Also run with twice the objects and report the direction-cost ratio.
    bool scaling = true;
};

struct StageStats {
    double mean_ms = 0.0;
    double p95_ms = 0.0;
};

struct BenchRun {
    int objects = 0;
    int frames = 0;
    StageStats fusion;
    StageStats tracking;
    StageStats direction;
    StageStats total;
    std::uint64_t flow_candidates = 0;
    std::size_t rows = 0;
};

struct BenchReport {
    BenchRun base;
    std::optional<BenchRun> doubled;
    /// doubled.direction.mean_ms / base.direction.mean_ms
    double direction_scaling = 0.0;
    /// Same ratio on flow candidates evaluated, independent of timer noise.
    double candidate_scaling = 0.0;
};

/// `objects` lanes of constant-velocity targets, each lane respawning a new
/// target whenever the previous one reaches the far edge, so the number of
/// live objects stays fixed for the whole run.
ScenarioSpec bench_scenario(int objects, int frames, std::uint64_t seed);

/// Times the post-detection stages over rendered synthetic frames. Frame
/// rendering happens outside the timed region. Each configuration runs
/// `repetitions` times and the fastest repetition is reported.
BenchReport run_bench(const PipelineConfig& cfg, const BenchOptions& opts);

BenchRun bench_once(const PipelineConfig& cfg, const ScenarioSpec& spec);

std::string bench_json(const BenchReport& r);

}  // namespace spectra
