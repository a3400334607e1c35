// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "spectra/bench.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "spectra/pipeline.hpp"

namespace spectra {

namespace {

StageStats stats(std::vector<double> v) {
    StageStats s;
    if (v.empty()) return s;
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean_ms = sum / static_cast<double>(v.size());
    std::sort(v.begin(), v.end());
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(v.size()))) - 1;
    s.p95_ms = v[std::min(rank, v.size() - 1)];
    return s;
}

nlohmann::json to_json(const StageStats& s) { return {{"mean_ms", s.mean_ms}, {"p95_ms", s.p95_ms}}; }

nlohmann::json to_json(const BenchRun& r) {
    return {{"objects", r.objects},
            {"frames", r.frames},
            {"fusion", to_json(r.fusion)},
            {"tracking", to_json(r.tracking)},
            {"direction", to_json(r.direction)},
            {"end_to_end", to_json(r.total)},
            {"flow_candidates", r.flow_candidates},
            {"rows", r.rows}};
}

}  // namespace

ScenarioSpec bench_scenario(int objects, int frames, std::uint64_t seed) {
    ScenarioSpec spec;
    spec.frame_count = frames;
    spec.seed = seed;
    spec.modalities = {true, true};
    const double side = 16.0;
    const double speed = 2.0;
    const double margin = 12.0;
    const double x_lo = margin + side / 2.0;
    const double x_hi = spec.dims.width - margin - side / 2.0;
    const int lifespan = static_cast<int>((x_hi - x_lo) / speed);
    const double lane_h = (spec.dims.height - 2.0 * margin) / std::max(1, objects);
    for (int k = 0; k < objects; ++k) {
        const double y = margin + (k + 0.5) * lane_h;
        const bool eastbound = k % 2 == 0;
        for (int start = 0; start < frames; start += lifespan) {
            ObjectSpec o;
            o.class_name = "drone";
            o.start = {eastbound ? x_lo : x_hi, y};
            o.velocity = {eastbound ? speed : -speed, 0.0};
            o.start_area = side * side;
            o.spawn = start;
            o.despawn = start + lifespan;
            spec.objects.push_back(o);
        }
    }
    return spec;
}

BenchRun bench_once(const PipelineConfig& cfg, const ScenarioSpec& spec) {
    const Scenario sc = generate(spec);
    Pipeline pipeline(cfg, spec.modalities);
    std::vector<double> fusion, tracking, direction, total;
    BenchRun run;
    run.frames = spec.frame_count;
    for (int f = 0; f < spec.frame_count; ++f) {
        const auto fi = static_cast<std::size_t>(f);
        GrayImage img = render_frame(sc.truth[fi], spec.dims, spec.seed);
        const FrameOutput out = pipeline.process(sc.detections[fi], std::move(img));
        fusion.push_back(out.times.fusion_ms);
        tracking.push_back(out.times.tracking_ms);
        direction.push_back(out.times.direction_ms);
        total.push_back(out.times.total_ms());
        run.rows += out.rows.size();
    }
    run.fusion = stats(std::move(fusion));
    run.tracking = stats(std::move(tracking));
    run.direction = stats(std::move(direction));
    run.total = stats(std::move(total));
    run.flow_candidates = pipeline.flow_candidates();
    return run;
}

BenchReport run_bench(const PipelineConfig& cfg, const BenchOptions& opts) {
    auto best_of = [&](int objects) {
        const ScenarioSpec spec = bench_scenario(objects, opts.frames, opts.seed);
        BenchRun best;
        for (int r = 0; r < std::max(1, opts.repetitions); ++r) {
            BenchRun run = bench_once(cfg, spec);
            if (r == 0 || run.total.mean_ms < best.total.mean_ms) best = run;
        }
        best.objects = objects;
        return best;
    };

    BenchReport report;
    report.base = best_of(opts.objects);
    if (opts.scaling) {
        report.doubled = best_of(2 * opts.objects);
        if (report.base.direction.mean_ms > 0.0) {
            report.direction_scaling = report.doubled->direction.mean_ms / report.base.direction.mean_ms;
        }
        if (report.base.flow_candidates > 0) {
            report.candidate_scaling = static_cast<double>(report.doubled->flow_candidates) /
                                       static_cast<double>(report.base.flow_candidates);
        }
    }
    return report;
}

std::string bench_json(const BenchReport& r) {
    nlohmann::json j;
    j["base"] = to_json(r.base);
    if (r.doubled) {
        j["doubled"] = to_json(*r.doubled);
        j["direction_scaling"] = r.direction_scaling;
        j["candidate_scaling"] = r.candidate_scaling;
    }
    return j.dump(2);
}

}  // namespace spectra
