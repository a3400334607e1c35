// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spectra/fusion.hpp"
#include "spectra/geometry.hpp"

namespace spectra {

enum class TrackState { tentative, active, lost };

std::string_view to_string(TrackState s);

struct TrackObservation {
    std::int64_t frame_index = 0;
    BBox bbox;
    double confidence = 0.0;
};

struct Track {
    int id = 0;
    std::string class_name;
    /// Most recent observations, oldest first, at most history_length.
    std::deque<TrackObservation> boxes;
    std::int64_t last_seen = 0;
    int misses = 0;
    /// Consecutive matched frames, for tentative -> active promotion.
    int hits = 0;
    TrackState state = TrackState::tentative;

    const TrackObservation& last() const { return boxes.back(); }
};

struct TrackerConfig {
    double iou_match_threshold = 0.3;
    /// Consecutive missed frames tolerated before a track is lost.
    int max_gap = 15;
    int min_hits = 1;
    int history_length = 32;

    void validate() const;
};

/// Candidate detection as seen by the tracker.
struct TrackInput {
    std::string class_name;
    BBox bbox;
    double confidence = 0.0;
};

std::vector<TrackInput> track_inputs(std::span<const FusedDetection> dets);

struct Association {
    /// (index into tracks, index into dets)
    std::vector<std::pair<std::size_t, std::size_t>> matches;
    std::vector<std::size_t> unmatched_tracks;
    std::vector<std::size_t> unmatched_dets;
};

/// Greedy same-class matching by descending IoU. Ties go to the lower
/// track id, then to the earlier detection.
Association associate(std::span<const Track> tracks, std::span<const TrackInput> dets,
                      double iou_match_threshold);

/// Per-frame view of a track that was observed this frame.
struct TrackSnapshot {
    std::int64_t frame_index = 0;
    int track_id = 0;
    std::string class_name;
    BBox bbox;
    double confidence = 0.0;
    TrackState state = TrackState::tentative;
    /// Frame of the previous observation, -1 for a newly spawned track.
    std::int64_t previous_frame = -1;
    BBox previous_bbox;
};

struct StepResult {
    std::vector<TrackSnapshot> snapshots;
    /// Ids of tracks that became lost during this step.
    std::vector<int> lost_ids;
};

/// IoU tracker with bounded gap tolerance. Frames must be stepped in
/// strictly increasing order by a single caller. Lost tracks are dropped
/// from memory; their ids are never reused.
class IouTracker {
public:
    explicit IouTracker(TrackerConfig cfg = {});

    StepResult step(std::int64_t frame_index, std::span<const TrackInput> dets);
    StepResult step(std::int64_t frame_index, std::span<const FusedDetection> dets);

    /// Active tracks sorted by id.
    std::vector<Track> active_tracks() const;
    /// Tentative and active tracks sorted by id.
    const std::vector<Track>& live_tracks() const { return tracks_; }

    int tracks_created() const { return next_id_ - 1; }
    int tracks_lost() const { return lost_count_; }
    const TrackerConfig& config() const { return cfg_; }

private:
    TrackerConfig cfg_;
    std::vector<Track> tracks_;
    int next_id_ = 1;
    int lost_count_ = 0;
    std::int64_t last_frame_ = -1;
    bool started_ = false;
};

}  // namespace spectra
