// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "spectra/modality.hpp"

#include <stdexcept>

namespace spectra {

std::string_view to_string(Task t) {
    return t == Task::drone_detection ? "drone_detection" : "payload_identification";
}

std::optional<Task> parse_task(std::string_view s) {
    if (s == "drone" || s == "drone_detection") return Task::drone_detection;
    if (s == "payload" || s == "payload_identification") return Task::payload_identification;
    return std::nullopt;
}

std::string_view to_string(SurrogateAction a) {
    switch (a) {
        case SurrogateAction::none: return "none";
        case SurrogateAction::white_placeholder: return "white_placeholder";
        case SurrogateAction::gray_surrogate: return "gray_surrogate";
        case SurrogateAction::triplet_replicate: return "triplet_replicate";
    }
    return "none";
}

SurrogatePolicy resolve_policy(Task task, ModalitySet available) {
    if (available.empty()) {
        throw std::invalid_argument("at least one modality must be available");
    }
    SurrogatePolicy p;
    p.task = task;
    p.available = available;
    if (task == Task::drone_detection) {
        if (!available.rgb) p.rgb_action = SurrogateAction::white_placeholder;
        if (!available.ir) p.ir_action = SurrogateAction::white_placeholder;
    } else {
        if (!available.rgb) p.rgb_action = SurrogateAction::triplet_replicate;
        if (!available.ir) p.ir_action = SurrogateAction::gray_surrogate;
    }
    return p;
}

RGBImage white_placeholder(FrameDims dims) {
    return RGBImage(dims.width, dims.height, Rgb{255, 255, 255});
}

RGBImage replicate_gray_to_triplet(const GrayImage& g) {
    RGBImage out(g.width, g.height);
    for (std::size_t i = 0; i < g.pixels.size(); ++i) {
        out.data[3 * i] = out.data[3 * i + 1] = out.data[3 * i + 2] = g.pixels[i];
    }
    return out;
}

std::uint8_t luma(Rgb px) {
    // Integer form of the weighted sum keeps half-up rounding exact.
    const int scaled = 299 * px.r + 587 * px.g + 114 * px.b;
    return static_cast<std::uint8_t>((scaled + 500) / 1000);
}

GrayImage rgb_to_gray_surrogate(const RGBImage& img) {
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < out.pixels.size(); ++i) {
        out.pixels[i] = luma({img.data[3 * i], img.data[3 * i + 1], img.data[3 * i + 2]});
    }
    return out;
}

}  // namespace spectra
