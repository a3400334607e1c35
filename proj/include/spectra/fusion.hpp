// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "spectra/detio.hpp"
#include "spectra/modality.hpp"

namespace spectra {

enum class FusionMode { both, rgb_only, ir_only };

std::string_view to_string(FusionMode m);
std::optional<FusionMode> parse_fusion_mode(std::string_view s);

/// Mode implied by which modalities are present.
FusionMode mode_for(ModalitySet available);

struct FusionConfig {
    FusionMode mode = FusionMode::both;
    double conf_threshold_rgb = 0.25;
    double conf_threshold_ir = 0.25;
    double weight_rgb = 1.0;
    double weight_ir = 1.0;
    double nms_iou_threshold = 0.45;
    /// Pool both modalities into one NMS pass (payload) or keep them
    /// independent (drone).
    bool cross_modality_nms = false;
    /// NMS on IR-only output. Off by default: IR relies on confidence gating.
    bool ir_nms = false;
    double harmful_conf_threshold = 0.5;

    static FusionConfig for_task(Task task);

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
    double weight(Modality m) const { return m == Modality::RGB ? weight_rgb : weight_ir; }
    double threshold(Modality m) const {
        return m == Modality::RGB ? conf_threshold_rgb : conf_threshold_ir;
    }
};

enum class FusionSource { RGB, IR, merged };

std::string_view to_string(FusionSource s);

struct FusedDetection {
    DetectionRecord det;
    /// merged is reserved for records synthesized from both modalities;
    /// pooled NMS keeps the surviving record's own modality.
    FusionSource source = FusionSource::RGB;
    double effective_confidence = 0.0;
};

/// Records with confidence >= threshold, order preserved.
std::vector<DetectionRecord> confidence_gate(std::span<const DetectionRecord> dets, double threshold);

/// Class-aware greedy NMS over arbitrary scores. Returns indices into
/// boxes, ordered by score descending with ties broken by index.
std::vector<std::size_t> nms_indices(std::span<const BBox> boxes, std::span<const int> class_ids,
                                     std::span<const double> scores, double iou_threshold);

/// Greedy class-aware NMS on detector confidence. Output sorted by
/// confidence descending, ties in input order.
std::vector<DetectionRecord> nms(std::span<const DetectionRecord> dets, double iou_threshold);

/// The decision layer for one frame. A modality that is missing from the
/// frame is tolerated in mode both only when policy assigns it a surrogate.
std::vector<FusedDetection> fuse_decision_layer(const FrameDetections& frame,
                                                const FusionConfig& cfg,
                                                const SurrogatePolicy* policy = nullptr);

enum class PayloadFlag { normal, harmful };

std::string_view to_string(PayloadFlag f);

/// Logical OR across modalities: harmful when any "harmful" record reaches
/// the threshold on effective confidence.
PayloadFlag classify_payload_or(std::span<const FusedDetection> dets, double harmful_conf_threshold);

}  // namespace spectra
