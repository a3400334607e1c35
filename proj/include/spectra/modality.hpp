// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <string_view>

#include "spectra/detio.hpp"
#include "spectra/image.hpp"

namespace spectra {

enum class Task { drone_detection, payload_identification };

std::string_view to_string(Task t);
std::optional<Task> parse_task(std::string_view s);

enum class SurrogateAction { none, white_placeholder, gray_surrogate, triplet_replicate };

std::string_view to_string(SurrogateAction a);

struct ModalitySet {
    bool rgb = false;
    bool ir = false;

    bool has(Modality m) const { return m == Modality::RGB ? rgb : ir; }
    bool empty() const { return !rgb && !ir; }

    friend bool operator==(const ModalitySet&, const ModalitySet&) = default;
};

/// What to feed each detector backbone when its native modality is absent.
struct SurrogatePolicy {
    Task task = Task::drone_detection;
    ModalitySet available;
    SurrogateAction rgb_action = SurrogateAction::none;
    SurrogateAction ir_action = SurrogateAction::none;

    SurrogateAction action_for(Modality m) const {
        return m == Modality::RGB ? rgb_action : ir_action;
    }

    friend bool operator==(const SurrogatePolicy&, const SurrogatePolicy&) = default;
};

/// Drone detection fills the missing side with a white frame; payload
/// identification derives the missing side from the present one.
/// Throws std::invalid_argument when nothing is available.
SurrogatePolicy resolve_policy(Task task, ModalitySet available);

/// Every pixel (255,255,255).
RGBImage white_placeholder(FrameDims dims);

/// v -> (v,v,v).
RGBImage replicate_gray_to_triplet(const GrayImage& g);

/// BT.601 luma, 0.299 r + 0.587 g + 0.114 b, rounded half up.
GrayImage rgb_to_gray_surrogate(const RGBImage& img);

std::uint8_t luma(Rgb px);

}  // namespace spectra
