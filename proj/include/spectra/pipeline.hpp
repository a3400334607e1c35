// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spectra/config.hpp"
#include "spectra/detio.hpp"
#include "spectra/direction.hpp"
#include "spectra/fusion.hpp"
#include "spectra/image.hpp"
#include "spectra/modality.hpp"
#include "spectra/tracker.hpp"

namespace spectra {

struct StageTimes {
    double fusion_ms = 0.0;
    double tracking_ms = 0.0;
    double direction_ms = 0.0;

    double total_ms() const { return fusion_ms + tracking_ms + direction_ms; }
};

struct FrameOutput {
    std::int64_t frame_index = 0;
    std::vector<TrackingRow> rows;
    PayloadFlag payload = PayloadFlag::normal;
    StageTimes times;
};

/// A frame after the decision layer, ready for tracking.
struct FusedFrame {
    std::int64_t frame_index = 0;
    std::vector<FusedDetection> detections;
    std::optional<GrayImage> image;
    double fusion_ms = 0.0;
};

/// Post-detection core: decision layer, tracker and per-track direction
/// estimators. fuse() is stateless and may run ahead on another thread;
/// track() must see frames in increasing order from one caller.
class Pipeline {
public:
    Pipeline(const PipelineConfig& cfg, ModalitySet available);

    FusedFrame fuse(const FrameDetections& frame, std::optional<GrayImage> image) const;
    FrameOutput track(FusedFrame frame);
    FrameOutput process(const FrameDetections& frame, std::optional<GrayImage> image = std::nullopt);

    const SurrogatePolicy& policy() const { return policy_; }
    const FusionConfig& fusion_config() const { return fusion_; }
    const IouTracker& tracker() const { return tracker_; }
    std::size_t live_estimators() const { return estimators_.size(); }
    std::uint64_t flow_candidates() const { return flow_candidates_; }

private:
    PipelineConfig cfg_;
    SurrogatePolicy policy_;
    FusionConfig fusion_;
    IouTracker tracker_;
    std::map<int, DirectionEstimator> estimators_;
    std::optional<GrayImage> prev_image_;
    std::int64_t prev_image_frame_ = -2;
    std::uint64_t flow_candidates_ = 0;
};

struct PipelineSummary {
    std::int64_t frames = 0;
    int tracks_created = 0;
    std::size_t rows = 0;
    double mean_latency_ms = 0.0;
    bool flow_enabled = false;
    SurrogatePolicy policy;
    FusionConfig fusion;
    std::vector<std::int64_t> harmful_frames;
};

/// Reads the configured logs and frames, runs every frame through the
/// pipeline and writes the tracking CSV (and metrics JSON when set). The
/// CSV is written to a temporary file and renamed only on success.
PipelineSummary run_pipeline(const PipelineConfig& cfg);

/// Merges per-modality logs into one FrameDetections per frame in
/// [0, last_frame]. Lists are engaged exactly for the available modalities.
std::vector<FrameDetections> assemble_frames(std::span<const FrameDetections> logged,
                                             ModalitySet available, std::int64_t last_frame);

std::string summary_json(const PipelineSummary& s);

}  // namespace spectra
