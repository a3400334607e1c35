// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "spectra/direction.hpp"
#include "spectra/fusion.hpp"
#include "spectra/modality.hpp"
#include "spectra/tracker.hpp"

namespace spectra {

/// Everything the pipeline needs. Every field has a default, so an empty
/// config file is valid.
struct PipelineConfig {
    Task task = Task::drone_detection;

    /// Unset means derived from the available modalities.
    std::optional<FusionMode> fusion_mode;
    /// Unset means derived from the task.
    std::optional<bool> cross_modality_nms;
    FusionConfig fusion;
    TrackerConfig tracker;
    DirectionConfig direction;

    std::filesystem::path rgb_log;
    std::filesystem::path ir_log;
    std::filesystem::path frames_dir;
    std::filesystem::path out_csv;
    std::filesystem::path metrics;

    /// Fused frames buffered ahead of the tracker.
    int queue_capacity = 8;
    /// Threads for per-track direction updates; 1 runs them inline.
    int workers = 1;

    ModalitySet available() const { return {!rgb_log.empty(), !ir_log.empty()}; }

    /// Fusion settings after applying task and availability defaults.
    FusionConfig effective_fusion(ModalitySet available) const;

    void validate() const;
};

/// Applies `key = value` lines to cfg. '#' starts a comment. Unknown keys
/// and malformed values raise ParseError with the line number.
void apply_config_text(const std::string& text, PipelineConfig& cfg);
PipelineConfig load_config(const std::filesystem::path& path);

/// The config keys with their current values, one `key = value` per line.
std::string dump_config(const PipelineConfig& cfg);

}  // namespace spectra
