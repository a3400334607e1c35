// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "spectra/detio.hpp"
#include "spectra/direction.hpp"
#include "spectra/geometry.hpp"
#include "spectra/image.hpp"
#include "spectra/modality.hpp"

namespace spectra {

/// One object moving at constant velocity with linearly growing area:
///   centre(t) = start + velocity * (t - spawn)
///   area(t)   = start_area * (1 + area_growth * (t - spawn))
struct ObjectSpec {
    std::string class_name = "drone";
    Point start;
    Vec2 velocity;
    double start_area = 400.0;
    double area_growth = 0.0;
    double aspect = 1.0;   // width / height
    int spawn = 0;         // first frame alive
    int despawn = -1;      // first frame gone, -1 = end of scenario
};

struct NoiseSpec {
    double center_jitter = 0.0;   // px, std of centre offset per axis
    double size_jitter = 0.0;     // std of relative size error
    double dropout = 0.0;         // per-detection miss probability
    double false_positive_rate = 0.0;  // Poisson mean per frame and modality
    double conf_min = 0.6;
    double conf_max = 0.95;
};

struct ScenarioSpec {
    int frame_count = 0;
    FrameDims dims = kNativeFrame;
    std::vector<ObjectSpec> objects;
    NoiseSpec noise;
    std::uint64_t seed = 0;
    ModalitySet modalities{true, false};
    bool render_frames = true;

    /// Throws std::invalid_argument, naming the object and frame when a
    /// trajectory leaves the frame.
    void validate() const;
};

struct TruthObject {
    int object_id = 0;
    std::string class_name;
    BBox bbox;

    friend bool operator==(const TruthObject&, const TruthObject&) = default;
};

/// truth[f] lists the objects alive in frame f.
using GroundTruth = std::vector<std::vector<TruthObject>>;

struct Scenario {
    GroundTruth truth;
    /// One entry per frame; lists are engaged for every enabled modality.
    std::vector<FrameDetections> detections;
};

/// True box of object i at frame f, or nullopt when not alive.
std::optional<BBox> true_box(const ScenarioSpec& spec, std::size_t i, int frame);

Scenario generate(const ScenarioSpec& spec);

std::vector<GroundTruthBox> flatten(const GroundTruth& truth);

/// Dark background (16) plus one Gaussian blob per object (peak 240,
/// sigma = width / 4) carrying a seeded surface texture that moves with the
/// object, over a faint fixed per-pixel dither.
GrayImage render_frame(std::span<const TruthObject> objects, FrameDims dims, std::uint64_t seed);

/// Rotates the scene a quarter turn clockwise: (x, y) -> (H - y, x).
ScenarioSpec rotate_quarter(const ScenarioSpec& spec);
/// Mirrors the scene horizontally: x -> W - x.
ScenarioSpec mirror_horizontal(const ScenarioSpec& spec);

/// Compass label of an object's true heading.
Compass true_heading(const ObjectSpec& obj);

ScenarioSpec parse_scenario_json(const std::string& text);
ScenarioSpec load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const ScenarioSpec& spec);

}  // namespace spectra
