// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "spectra/detio.hpp"
#include "spectra/rng.hpp"
#include "spectra/synth.hpp"

using namespace spectra;

namespace {

ScenarioSpec single(int frames) {
    ScenarioSpec spec;
    spec.frame_count = frames;
    spec.seed = 21;
    ObjectSpec o;
    o.start = {60, 60};
    o.velocity = {3, 1};
    o.start_area = 256;
    spec.objects = {o};
    return spec;
}

std::string log_text(const Scenario& sc) {
    std::ostringstream out;
    write_detection_log(out, sc.detections);
    return out.str();
}

std::size_t detection_count(const Scenario& sc, Modality m) {
    std::size_t n = 0;
    for (const auto& f : sc.detections) {
        if (f.of(m)) n += f.of(m)->size();
    }
    return n;
}

}  // namespace

TEST(Rng, Reproducible) {
    CounterRng a(1, 2), b(1, 2), c(1, 3);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        differs |= x != c.next_u64();
    }
    EXPECT_TRUE(differs);
}

TEST(Rng, Moments) {
    CounterRng r(99);
    double s = 0, s2 = 0, p = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        const double z = r.normal();
        s += z;
        s2 += z * z;
        p += r.poisson(1.5);
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.02);
    EXPECT_NEAR(p / n, 1.5, 0.02);
    for (int i = 0; i < 1000; ++i) {
        const auto k = r.uniform_int(-3, 3);
        ASSERT_GE(k, -3);
        ASSERT_LE(k, 3);
    }
}

TEST(Generate, ZeroNoiseEqualsTruth) {
    const ScenarioSpec spec = single(10);
    const Scenario sc = generate(spec);
    ASSERT_EQ(sc.detections.size(), 10u);
    ASSERT_EQ(detection_count(sc, Modality::RGB), 10u);
    for (int f = 0; f < 10; ++f) {
        const auto& d = sc.detections[static_cast<std::size_t>(f)];
        EXPECT_EQ(d.frame_index, f);
        EXPECT_FALSE(d.ir.has_value());
        ASSERT_EQ(d.rgb->size(), 1u);
        EXPECT_EQ((*d.rgb)[0].bbox, sc.truth[static_cast<std::size_t>(f)][0].bbox);
        EXPECT_EQ((*d.rgb)[0].bbox, *true_box(spec, 0, f));
    }
    EXPECT_EQ(*true_box(spec, 0, 4), box_around({72, 64}, 16, 16));
}

TEST(Generate, FullDropoutKeepsTruth) {
    ScenarioSpec spec = single(10);
    spec.noise.dropout = 1.0;
    spec.modalities = {true, true};
    const Scenario sc = generate(spec);
    EXPECT_EQ(detection_count(sc, Modality::RGB), 0u);
    EXPECT_EQ(detection_count(sc, Modality::IR), 0u);
    EXPECT_EQ(flatten(sc.truth).size(), 10u);
}

TEST(Generate, Deterministic) {
    ScenarioSpec spec = single(50);
    spec.noise = {1.5, 0.1, 0.2, 0.5, 0.3, 0.9};
    spec.modalities = {true, true};
    const Scenario a = generate(spec);
    const Scenario b = generate(spec);
    EXPECT_EQ(log_text(a), log_text(b));
    EXPECT_EQ(a.truth, b.truth);
    spec.seed += 1;
    EXPECT_NE(log_text(generate(spec)), log_text(a));
}

TEST(Generate, NoiseStatistics) {
    ScenarioSpec spec;
    spec.frame_count = 2000;
    spec.seed = 3;
    spec.noise.dropout = 0.3;
    spec.noise.false_positive_rate = 0.5;
    ObjectSpec o;
    o.start = {160, 128};
    spec.objects = {o};
    const Scenario sc = generate(spec);
    std::size_t hits = 0, fps = 0;
    for (const auto& f : sc.detections) {
        for (const auto& r : *f.rgb) {
            ASSERT_GE(r.confidence, spec.noise.conf_min);
            ASSERT_LE(r.confidence, spec.noise.conf_max);
            ASSERT_TRUE(inside(r.bbox, spec.dims));
            if (r.bbox == box_around(o.start, 20, 20)) ++hits; else ++fps;
        }
    }
    EXPECT_NEAR(hits / 2000.0, 0.7, 0.03);
    EXPECT_NEAR(fps / 2000.0, 0.5, 0.05);
}

TEST(Generate, RejectsEscapingObject) {
    ScenarioSpec spec = single(200);
    EXPECT_THROW(generate(spec), std::invalid_argument);
    spec.objects[0].despawn = 50;
    EXPECT_NO_THROW(generate(spec));
}

TEST(Generate, SpawnWindows) {
    ScenarioSpec spec = single(20);
    spec.objects[0].spawn = 5;
    spec.objects[0].despawn = 8;
    const Scenario sc = generate(spec);
    for (int f = 0; f < 20; ++f) {
        EXPECT_EQ(sc.truth[static_cast<std::size_t>(f)].size(), (f >= 5 && f < 8) ? 1u : 0u) << f;
        EXPECT_TRUE(sc.detections[static_cast<std::size_t>(f)].rgb.has_value());
    }
}

TEST(Render, EmptySceneIsBackgroundPlusDither) {
    const GrayImage img = render_frame({}, kNativeFrame, 4);
    int lo = 255, hi = 0;
    for (auto p : img.pixels) {
        lo = std::min<int>(lo, p);
        hi = std::max<int>(hi, p);
    }
    EXPECT_GE(lo, 16 - 8);
    EXPECT_LE(hi, 16 + 8);
    EXPECT_GT(hi, lo);
    EXPECT_EQ(render_frame({}, kNativeFrame, 4), img);
}

TEST(Render, TwoBlobsPeakAtCentroids) {
    const std::vector<TruthObject> objs{{1, "drone", box_around({80, 70}, 24, 24)},
                                        {2, "drone", box_around({230, 180}, 32, 32)}};
    const GrayImage img = render_frame(objs, kNativeFrame, 8);
    for (const auto& o : objs) {
        const Point c = centroid(o.bbox);
        int best = -1, bx = 0, by = 0;
        for (int y = static_cast<int>(o.bbox.y1); y < static_cast<int>(o.bbox.y2); ++y) {
            for (int x = static_cast<int>(o.bbox.x1); x < static_cast<int>(o.bbox.x2); ++x) {
                if (img.at(x, y) > best) {
                    best = img.at(x, y);
                    bx = x;
                    by = y;
                }
            }
        }
        EXPECT_LE(std::abs(bx + 0.5 - c.x), 1.5) << bx;
        EXPECT_LE(std::abs(by + 0.5 - c.y), 1.5) << by;
        EXPECT_GE(best, 240 - 8);
    }
}

TEST(Transforms, RotateAndMirror) {
    ScenarioSpec spec = single(10);
    const ScenarioSpec r = rotate_quarter(spec);
    EXPECT_EQ(r.dims, (FrameDims{256, 320}));
    EXPECT_EQ(true_heading(r.objects[0]), rotate_compass(true_heading(spec.objects[0]), 1));
    const ScenarioSpec m = mirror_horizontal(spec);
    EXPECT_EQ(true_heading(m.objects[0]), mirror_compass(true_heading(spec.objects[0])));
    const ScenarioSpec back = rotate_quarter(rotate_quarter(rotate_quarter(rotate_quarter(spec))));
    for (int f = 0; f < 10; ++f) {
        const BBox a = *true_box(spec, 0, f);
        const BBox b = *true_box(back, 0, f);
        EXPECT_NEAR(a.x1, b.x1, 1e-9);
        EXPECT_NEAR(a.y2, b.y2, 1e-9);
    }
}

TEST(ScenarioJson, RoundTripAndErrors) {
    ScenarioSpec spec = single(10);
    spec.noise.dropout = 0.25;
    spec.modalities = {false, true};
    spec.objects[0].class_name = "bird";
    spec.objects[0].despawn = 9;
    const ScenarioSpec back = parse_scenario_json(scenario_to_json(spec));
    EXPECT_EQ(scenario_to_json(back), scenario_to_json(spec));
    EXPECT_EQ(back.objects[0].class_name, "bird");
    EXPECT_FALSE(back.modalities.rgb);

    const ScenarioSpec minimal = parse_scenario_json(R"({"frame_count": 3})");
    EXPECT_EQ(minimal.frame_count, 3);
    EXPECT_TRUE(minimal.objects.empty());
    EXPECT_THROW(parse_scenario_json(R"({"frame_count": 3, "colour": 1})"), std::exception);
    EXPECT_THROW(parse_scenario_json("{"), std::exception);
    EXPECT_THROW(parse_scenario_json(R"({"frame_count": -1})"), std::exception);
}
