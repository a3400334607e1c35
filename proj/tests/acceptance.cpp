// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

#include "oracles.hpp"
#include "spectra/bench.hpp"
#include "spectra/commands.hpp"
#include "spectra/fusion.hpp"
#include "spectra/log.hpp"
#include "spectra/modality.hpp"
#include "spectra/pipeline.hpp"
#include "spectra/synth.hpp"
#include "spectra/tracker.hpp"

using namespace spectra;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

fs::path work_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("spectra_accept_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

ObjectSpec object(Point start, Vec2 v, int spawn, int despawn) {
    ObjectSpec o;
    o.start = start;
    o.velocity = v;
    o.start_area = 400;
    o.spawn = spawn;
    o.despawn = despawn;
    return o;
}

// Ten objects in three time windows. Concurrent objects stay at least
// 12 px apart, and each window starts after the tracks of the previous
// one have been retired.
ScenarioSpec ten_objects() {
    ScenarioSpec spec;
    spec.frame_count = 300;
    spec.seed = 2025;
    spec.objects = {
        object({30, 40}, {2, 0}, 0, 90),       object({290, 200}, {-2, 0}, 0, 90),
        object({300, 20}, {0, 2}, 0, 90),      object({20, 230}, {0, -2}, 0, 90),
        object({40, 230}, {2, -2}, 106, 196),  object({300, 30}, {-2, 2}, 106, 196),
        object({20, 20}, {0, 2}, 106, 196),    object({30, 30}, {2, 2}, 212, 300),
        object({290, 230}, {-2, -2}, 212, 300), object({305, 20}, {0, 2}, 212, 300),
    };
    return spec;
}

std::vector<TrackingRow> run_full(const ScenarioSpec& spec, const std::string& name, const PipelineConfig& base = {}) {
    const auto dir = work_dir(name);
    const auto art = run_synth(spec, dir);
    PipelineConfig cfg = base;
    if (art.rgb_log) cfg.rgb_log = *art.rgb_log;
    if (art.ir_log) cfg.ir_log = *art.ir_log;
    if (art.frames_dir) cfg.frames_dir = *art.frames_dir;
    cfg.out_csv = dir / "tracks.csv";
    run_pipeline(cfg);
    std::ifstream in(cfg.out_csv);
    return parse_tracking_csv(in);
}

Outcome iou_oracle() {
    const auto t0 = Clock::now();
    std::mt19937 rng(1);
    std::uniform_int_distribution<int> coord(0, 64);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
        auto rand_box = [&] {
            int x1 = coord(rng), x2 = coord(rng), y1 = coord(rng), y2 = coord(rng);
            if (x1 == x2) x2 = x1 == 64 ? 63 : x1 + 1;
            if (y1 == y2) y2 = y1 == 64 ? 63 : y1 + 1;
            return BBox{double(std::min(x1, x2)), double(std::min(y1, y2)), double(std::max(x1, x2)),
                        double(std::max(y1, y2))};
        };
        const BBox a = rand_box(), b = rand_box();
        bad += std::abs(iou(a, b) - oracle::pixel_iou(a, b)) > 1e-9;
    }
    const double s = seconds_since(t0);
    return {bad == 0 && s < 1.0, fmt("%d/1000 mismatches, %.3f s", bad, s)};
}

Outcome nms_reference() {
    const auto t0 = Clock::now();
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> pos(0, 120), size(4, 50), conf(0, 1);
    const std::vector<std::string> classes{"drone", "bird", "harmful"};
    int mismatch = 0, not_idempotent = 0;
    for (int frame = 0; frame < 500; ++frame) {
        std::vector<DetectionRecord> d;
        const int n = static_cast<int>(rng() % 51);
        for (int i = 0; i < n; ++i) {
            const double x = pos(rng), y = pos(rng);
            const int c = static_cast<int>(rng() % classes.size());
            d.push_back({frame, Modality::RGB, c, classes[static_cast<std::size_t>(c)],
                         std::round(conf(rng) * 20) / 20, {x, y, x + size(rng), y + size(rng)}});
        }
        const auto kept = nms(d, 0.45);
        std::set<std::size_t> got;
        for (const auto& k : kept) {
            for (std::size_t i = 0; i < d.size(); ++i) {
                if (d[i] == k && !got.count(i)) {
                    got.insert(i);
                    break;
                }
            }
        }
        const auto ref = oracle::reference_nms(d, 0.45);
        mismatch += got != std::set<std::size_t>(ref.begin(), ref.end());
        not_idempotent += nms(kept, 0.45) != kept;
    }
    const double s = seconds_since(t0);
    return {mismatch == 0 && not_idempotent == 0 && s < 5.0,
            fmt("%d set mismatches, %d idempotence failures, %.3f s", mismatch, not_idempotent, s)};
}

// Track ids seen for a single object whose detections are removed for
// `gap` frames starting at frame 5.
std::set<int> ids_across_gap(int gap, const TrackerConfig& tcfg) {
    ScenarioSpec spec;
    spec.frame_count = 5 + gap + 10;
    spec.render_frames = false;
    spec.objects = {object({160, 128}, {0.1, 0}, 0, -1)};
    Scenario sc = generate(spec);
    for (int f = 5; f < 5 + gap; ++f) sc.detections[static_cast<std::size_t>(f)].rgb->clear();
    IouTracker t(tcfg);
    std::set<int> ids;
    for (const auto& fr : sc.detections) {
        std::vector<TrackInput> in;
        for (const auto& r : *fr.rgb) in.push_back({r.class_name, r.bbox, r.confidence});
        for (const auto& s : t.step(fr.frame_index, in).snapshots) ids.insert(s.track_id);
    }
    return ids;
}

Outcome gap_tolerance() {
    const TrackerConfig tcfg;
    const auto kept = ids_across_gap(12, tcfg);
    const auto broken = ids_across_gap(tcfg.max_gap + 1, tcfg);
    return {kept.size() == 1 && broken.size() == 2,
            fmt("12-frame gap: %zu id(s); %d-frame gap: %zu id(s)", kept.size(), tcfg.max_gap + 1, broken.size())};
}

Outcome end_to_end() {
    const auto t0 = Clock::now();
    const ScenarioSpec spec = ten_objects();
    const auto rows = run_full(spec, "e2e");
    const Scenario sc = generate(spec);
    const auto report = evaluate(to_eval_boxes(rows), to_eval_boxes(flatten(sc.truth)), {}, true);

    // Map each track to the object it covers, then score labels after the
    // smoothing warm-up of each track.
    const int warmup = DirectionConfig{}.smooth_window;
    std::map<int, int> first_frame;
    int total = 0, correct = 0, unmatched = 0;
    for (const auto& r : rows) {
        if (!first_frame.count(r.track_id)) first_frame[r.track_id] = static_cast<int>(r.frame_index);
        if (r.frame_index - first_frame[r.track_id] < warmup) continue;
        const auto& truth = sc.truth[static_cast<std::size_t>(r.frame_index)];
        const TruthObject* best = nullptr;
        double best_iou = 0.5;
        for (const auto& o : truth) {
            if (const double v = iou(o.bbox, r.bbox); v >= best_iou) {
                best_iou = v;
                best = &o;
            }
        }
        if (!best) {
            ++unmatched;
            continue;
        }
        ++total;
        const auto want = true_heading(spec.objects[static_cast<std::size_t>(best->object_id - 1)]);
        correct += r.direction.substr(0, r.direction.find('/')) == to_string(want);
    }
    const double frac = total ? double(correct) / total : 0.0;
    const double s = seconds_since(t0);
    const int switches = report.id_switches.value_or(-1);
    return {switches == 0 && unmatched == 0 && frac >= 0.95 && first_frame.size() == 10 && s < 10.0,
            fmt("%zu tracks, %d id switches, headings %.4f correct over %d frames, %.2f s", first_frame.size(),
                switches, frac, total, s)};
}

Outcome equivariance() {
    ScenarioSpec spec = ten_objects();
    spec.frame_count = 100;
    spec.objects.resize(4);
    spec.objects[1].area_growth = 0.005;
    spec.objects[3].area_growth = -0.003;
    const auto base = run_full(spec, "eq_base");
    const auto rot = run_full(rotate_quarter(spec), "eq_rot");
    const auto mir = run_full(mirror_horizontal(spec), "eq_mir");
    auto split = [](const std::string& s) {
        const auto slash = s.find('/');
        return std::pair{*parse_compass(s.substr(0, slash)), s.substr(slash + 1)};
    };
    int rot_bad = 0, mir_bad = 0;
    bool shape = base.size() == rot.size() && base.size() == mir.size() && !base.empty();
    for (std::size_t i = 0; shape && i < base.size(); ++i) {
        shape = base[i].frame_index == rot[i].frame_index && base[i].track_id == rot[i].track_id &&
                base[i].frame_index == mir[i].frame_index && base[i].track_id == mir[i].track_id;
        const auto [c0, r0] = split(base[i].direction);
        const auto [c1, r1] = split(rot[i].direction);
        const auto [c2, r2] = split(mir[i].direction);
        rot_bad += rotate_compass(c0, 1) != c1 || r0 != r1;
        mir_bad += mirror_compass(c0) != c2 || r0 != r2;
    }
    return {shape && rot_bad == 0 && mir_bad == 0,
            fmt("%zu rows, %d rotation mismatches, %d mirror mismatches", base.size(), rot_bad, mir_bad)};
}

Outcome flow_accuracy() {
    const auto t0 = Clock::now();
    std::mt19937 rng(6);
    std::uniform_int_distribution<int> shift(-7, 7), side(16, 40), level(0, 255);
    const DirectionConfig cfg;
    int exact = 0;
    for (int i = 0; i < 200; ++i) {
        const int w = side(rng);
        const double margin = w / 2.0 + cfg.block / 2 + cfg.search_radius + 8;
        std::uniform_real_distribution<double> cx(margin, 320 - margin), cy(margin, 256 - margin);
        const BBox b0 = box_around({std::round(cx(rng)), std::round(cy(rng))}, w, w);
        const Vec2 d{double(shift(rng)), double(shift(rng))};
        const BBox b1 = translated(b0, d.x, d.y);
        const std::uint64_t seed = rng();
        const GrayImage prev = render_frame(std::vector<TruthObject>{{1, "drone", b0}}, kNativeFrame, seed);
        const GrayImage cur = render_frame(std::vector<TruthObject>{{1, "drone", b1}}, kNativeFrame, seed);
        FlowStats st;
        const auto r = sparse_flow(prev, cur, b0, cfg, &st);
        exact += !r.abstained() && st.median == d;
    }
    int flat_abstain = 0;
    for (int i = 0; i < 50; ++i) {
        const GrayImage flat(320, 256, static_cast<std::uint8_t>(level(rng)));
        flat_abstain += sparse_flow(flat, flat, box_around({160, 128}, 20.0 + i, 20.0 + i), cfg).abstained();
    }
    const double s = seconds_since(t0);
    return {exact >= 198 && flat_abstain == 50 && s < 10.0,
            fmt("%d/200 exact displacements, %d/50 flat frames abstained, %.2f s", exact, flat_abstain, s)};
}

Outcome payload_or() {
    const FusionConfig cfg = FusionConfig::for_task(Task::payload_identification);
    int bad = 0;
    for (int mask = 0; mask < 8; ++mask) {
        const bool rgb_conf = mask & 1, ir_conf = mask & 2, weak = mask & 4;
        FrameDetections f;
        f.rgb.emplace();
        f.ir.emplace();
        if (rgb_conf) f.rgb->push_back({0, Modality::RGB, 1, "harmful", 0.8, {10, 10, 40, 40}});
        if (ir_conf) f.ir->push_back({0, Modality::IR, 1, "harmful", 0.9, {12, 10, 42, 40}});
        if (weak) f.ir->push_back({0, Modality::IR, 1, "harmful", 0.3, {200, 100, 230, 130}});
        f.rgb->push_back({0, Modality::RGB, 0, "normal", 0.95, {100, 150, 130, 180}});
        const auto fused = fuse_decision_layer(f, cfg);
        const auto flag = classify_payload_or(fused, cfg.harmful_conf_threshold);
        const auto want = (rgb_conf || ir_conf) ? PayloadFlag::harmful : PayloadFlag::normal;
        bad += flag != want;
    }
    return {bad == 0, fmt("%d/8 combinations disagree with OR-with-threshold", bad)};
}

Outcome surrogates() {
    std::mt19937 rng(8);
    int roundtrip_bad = 0;
    for (int i = 0; i < 100; ++i) {
        GrayImage g(1 + static_cast<int>(rng() % 64), 1 + static_cast<int>(rng() % 64));
        for (auto& p : g.pixels) p = static_cast<std::uint8_t>(rng());
        roundtrip_bad += rgb_to_gray_surrogate(replicate_gray_to_triplet(g)) != g;
    }
    const RGBImage white = white_placeholder(kNativeFrame);
    const bool all_white =
        white.data.size() == 3u * 320 * 256 && std::all_of(white.data.begin(), white.data.end(), [](auto v) { return v == 255; });
    using A = SurrogateAction;
    int policy_bad = 0;
    for (Task t : {Task::drone_detection, Task::payload_identification}) {
        for (ModalitySet m : {ModalitySet{true, true}, ModalitySet{true, false}, ModalitySet{false, true}}) {
            const auto p = resolve_policy(t, m);
            const A miss_rgb = t == Task::drone_detection ? A::white_placeholder : A::triplet_replicate;
            const A miss_ir = t == Task::drone_detection ? A::white_placeholder : A::gray_surrogate;
            policy_bad += p.rgb_action != (m.rgb ? A::none : miss_rgb);
            policy_bad += p.ir_action != (m.ir ? A::none : miss_ir);
        }
    }
    bool empty_rejected = false;
    try {
        resolve_policy(Task::drone_detection, {});
    } catch (const std::invalid_argument&) {
        empty_rejected = true;
    }
    return {roundtrip_bad == 0 && all_white && policy_bad == 0 && empty_rejected,
            fmt("%d round-trip failures, white=%s, %d policy mismatches over 6 cases", roundtrip_bad,
                all_white ? "yes" : "no", policy_bad)};
}

Outcome metric_sanity() {
    const auto t0 = Clock::now();
    ScenarioSpec spec;
    spec.frame_count = 500;
    spec.seed = 31;
    spec.render_frames = false;
    spec.noise.dropout = 0.3;
    for (int i = 0; i < 5; ++i) spec.objects.push_back(object({40.0 + 60 * i, 60.0 + 30 * i}, {0, 0}, 0, -1));
    const Scenario sc = generate(spec);
    const auto gts = to_eval_boxes(flatten(sc.truth));
    const auto r = evaluate(to_eval_boxes(sc.detections), gts, {}, false);
    auto perfect = gts;
    for (auto& p : perfect) p.confidence = 0.9;
    const auto p = evaluate(perfect, gts, {}, false);
    const bool perfect_ok = p.micro_prf.precision == 1.0 && p.micro_prf.recall == 1.0 && p.micro_prf.f1 == 1.0 &&
                            p.ap50 == 1.0 && p.map50_95 == 1.0;
    const double s = seconds_since(t0);
    return {gts.size() >= 2000 && std::abs(r.micro_prf.recall - 0.7) <= 0.05 && perfect_ok && s < 5.0,
            fmt("recall %.4f over %zu gt boxes at dropout 0.3; perfect preds all 1.0: %s, %.2f s", r.micro_prf.recall,
                gts.size(), perfect_ok ? "yes" : "no", s)};
}

Outcome throughput() {
    BenchOptions opts;
    const auto r = run_bench(PipelineConfig{}, opts);
    const double mean = r.base.total.mean_ms;
    return {mean < 33.0 && r.direction_scaling <= 2.2,
            fmt("%d objects x %d frames: mean %.3f ms/frame (p95 %.3f); direction cost x%.3f when doubled "
                "(flow candidates x%.3f)",
                r.base.objects, r.base.frames, mean, r.base.total.p95_ms, r.direction_scaling, r.candidate_scaling)};
}

}  // namespace

int main() {
    setenv("SPECTRA_LOG_LEVEL", "warn", 0);
    init_logging();
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 IoU oracle equivalence", iou_oracle},
        {"2 NMS reference equivalence", nms_reference},
        {"3 gap tolerance", gap_tolerance},
        {"4 zero-noise end-to-end oracle", end_to_end},
        {"5 direction equivariance", equivariance},
        {"6 sparse-flow accuracy", flow_accuracy},
        {"7 logical-OR payload truth table", payload_or},
        {"8 surrogate identities", surrogates},
        {"9 metric sanity", metric_sanity},
        {"10 throughput", throughput},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
