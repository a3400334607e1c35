// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "spectra/geometry.hpp"
#include "spectra/image.hpp"
#include "spectra/ring_buffer.hpp"

namespace spectra {

/// Tunables for the multi-cue direction estimator. Image coordinates:
/// +x is east, +y is south.
struct DirectionConfig {
    int history_length = 16;       // samples kept per track
    int cue_window = 10;           // frames considered by the trend cues
    int smooth_window = 5;         // instantaneous estimates in the vote
    int grid = 4;                  // flow grid is grid x grid points
    int block = 9;                 // odd block side for SAD matching
    int search_radius = 7;         // +- pixels per axis
    double eps_area = 0.02;        // relative area slope per frame
    double eps_scale = 0.05;
    double eps_velocity = 0.5;     // px/frame
    double v_sat = 8.0;            // px/frame at which speed strength saturates
    double texture_floor = 4.0;    // block intensity std
    int min_valid_points = 4;
    double min_area = 64.0;        // px^2, smaller boxes skip motion analysis
    double flow_weight = 2.0;
    double centroid_weight = 1.0;

    void validate() const;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    double norm() const;
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

enum class Compass { N, NE, E, SE, S, SW, W, NW, none };
enum class Radial { approaching, receding, stationary };
enum class Cue { area_trend, centroid_velocity, scale_variation, sparse_flow };

std::string_view to_string(Compass c);
std::string_view to_string(Radial r);
std::string_view to_string(Cue c);
std::optional<Compass> parse_compass(std::string_view s);

/// Bearing in degrees, 0 = north (-y), clockwise, in [0,360).
double bearing_deg(Vec2 v);
Compass compass_for_bearing(double deg);
/// Label rotated clockwise by quarter turns. none stays none.
Compass rotate_compass(Compass c, int quarter_turns);
/// Horizontal mirror, E <-> W.
Compass mirror_compass(Compass c);

struct TrackSample {
    std::int64_t frame_index = 0;
    BBox bbox;
    double area = 0.0;
    Point centroid;
};

using TrackHistory = RingBuffer<TrackSample>;

TrackSample make_sample(std::int64_t frame_index, const BBox& b);

struct CueResult {
    Cue cue = Cue::area_trend;
    std::optional<Vec2> planar;     // unit vector
    std::optional<Radial> radial;
    double strength = 0.0;
    /// Raw measurement: relative slope, speed, scale ratio or flow vector
    /// length depending on the cue.
    double magnitude = 0.0;
    /// Set when the cue abstains.
    std::string diagnostic;

    bool abstained() const { return !diagnostic.empty(); }
};

CueResult area_trend(const TrackHistory& h, int window, const DirectionConfig& cfg);
CueResult centroid_velocity(const TrackHistory& h, int window, const DirectionConfig& cfg);
CueResult scale_variation(const TrackHistory& h, int window, const DirectionConfig& cfg);

/// Work counters for one sparse_flow call.
struct FlowStats {
    int points = 0;            // grid points placed
    int points_in_range = 0;   // search window fits the frame
    int points_textured = 0;   // passed the texture floor, then matched
    std::uint64_t candidates = 0;  // displacements evaluated
    Vec2 median;               // median displacement of matched points
};

/// Block-matching flow on a uniform grid inside box, from prev into cur.
CueResult sparse_flow(const GrayImage& prev, const GrayImage& cur, const BBox& box,
                      const DirectionConfig& cfg, FlowStats* stats = nullptr);

struct DirectionEstimate {
    Compass planar = Compass::none;
    Radial radial = Radial::stationary;
    std::optional<double> heading_deg;
    double confidence = 0.0;

    std::string label() const;
    friend bool operator==(const DirectionEstimate&, const DirectionEstimate&) = default;
};

/// Instantaneous estimate from one frame's cues.
DirectionEstimate fuse_cues(std::span<const CueResult> cues, double box_area,
                            const DirectionConfig& cfg);

/// Majority vote over recent instantaneous estimates; ties go to the most
/// recent of the tied labels.
DirectionEstimate smooth(const RingBuffer<DirectionEstimate>& recent);
DirectionEstimate smooth(std::span<const DirectionEstimate> recent);

/// Per-track estimator: owns the bounded sample history and the smoothing
/// window. One instance per track.
class DirectionEstimator {
public:
    explicit DirectionEstimator(const DirectionConfig& cfg);

    /// Adds the observation for frame_index and returns the smoothed
    /// estimate. prev/cur enable the flow cue when the previous sample is
    /// from frame_index - 1; either may be null.
    DirectionEstimate update(std::int64_t frame_index, const BBox& box,
                             const GrayImage* prev = nullptr, const GrayImage* cur = nullptr);

    const TrackHistory& history() const { return history_; }
    const DirectionEstimate& last_instantaneous() const { return recent_.back(); }
    /// Flow candidates evaluated over this estimator's lifetime.
    std::uint64_t flow_candidates() const { return flow_candidates_; }

private:
    DirectionConfig cfg_;
    TrackHistory history_;
    RingBuffer<DirectionEstimate> recent_;
    std::uint64_t flow_candidates_ = 0;
};

}  // namespace spectra
