// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spectra/evalm.hpp"
#include "spectra/synth.hpp"

namespace spectra {

struct SynthArtifacts {
    std::filesystem::path ground_truth;
    std::optional<std::filesystem::path> rgb_log;
    std::optional<std::filesystem::path> ir_log;
    std::optional<std::filesystem::path> frames_dir;
    std::size_t gt_boxes = 0;
    std::size_t detections = 0;
    std::size_t frames_written = 0;
};

/// Writes gt.tsv, rgb.log / ir.log and, when enabled, frames/frame_<i>.pgm
/// under out_dir.
SynthArtifacts run_synth(const ScenarioSpec& spec, const std::filesystem::path& out_dir);

struct EvalOptions {
    double iou_threshold = 0.5;
    double conf_threshold = 0.25;
};

struct EvalReport {
    MatchCounts micro;
    PrecisionRecall micro_prf;
    std::map<std::string, MatchCounts> per_class;
    std::map<std::string, PrecisionRecall> per_class_prf;
    double ap50 = 0.0;
    double map50_95 = 0.0;
    std::optional<int> id_switches;
    std::size_t predictions = 0;
    std::size_t ground_truth = 0;
};

std::vector<EvalBox> to_eval_boxes(std::span<const GroundTruthBox> gts);
std::vector<EvalBox> to_eval_boxes(std::span<const FrameDetections> frames);
std::vector<EvalBox> to_eval_boxes(std::span<const TrackingRow> rows);

EvalReport evaluate(std::span<const EvalBox> preds, std::span<const EvalBox> gts,
                    const EvalOptions& opts, bool with_tracks);

/// preds may be a detection log or a tracking CSV; track ids in the latter
/// enable the ID-switch count.
EvalReport run_eval(const std::filesystem::path& preds, const std::filesystem::path& gt,
                    const EvalOptions& opts);

std::string eval_json(const EvalReport& r);
std::string eval_csv(const EvalReport& r);
std::string eval_text(const EvalReport& r);

}  // namespace spectra
