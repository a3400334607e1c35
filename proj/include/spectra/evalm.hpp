// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "spectra/geometry.hpp"

namespace spectra {

struct MatchCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;

    MatchCounts& operator+=(const MatchCounts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
    friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

/// A scored prediction or a ground-truth box (confidence unused) in one
/// frame.
struct EvalBox {
    std::int64_t frame_index = 0;
    std::string class_name;
    BBox bbox;
    double confidence = 1.0;
    /// Track id for predictions, object id for ground truth; 0 when unknown.
    int id = 0;
};

/// Greedy matching for one frame and class. preds must be sorted by
/// confidence descending; each claims the best unmatched gt with
/// IoU >= iou_threshold.
MatchCounts match_detections(std::span<const BBox> preds, std::span<const BBox> gts,
                             double iou_threshold);

struct PrecisionRecall {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// 0/0 precision or recall counts as 1; f1 is 0 when p + r = 0.
PrecisionRecall precision_recall_f1(const MatchCounts& c);

/// Counts over all frames, matching per frame and class, keeping
/// predictions with confidence >= min_confidence.
MatchCounts count_matches(std::span<const EvalBox> preds, std::span<const EvalBox> gts,
                          double iou_threshold, double min_confidence = 0.0);
std::map<std::string, MatchCounts> count_matches_per_class(std::span<const EvalBox> preds,
                                                           std::span<const EvalBox> gts,
                                                           double iou_threshold,
                                                           double min_confidence = 0.0);

struct PRPoint {
    double confidence = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

/// Precision/recall after each prediction of class_name in confidence order.
std::vector<PRPoint> pr_curve(std::span<const EvalBox> preds, std::span<const EvalBox> gts,
                              const std::string& class_name, double iou_threshold);

/// All-point interpolated AP for one class: area under the monotone
/// precision envelope. Returns -1 when the class has no ground truth.
double average_precision_class(std::span<const EvalBox> preds, std::span<const EvalBox> gts,
                               const std::string& class_name, double iou_threshold);

/// Mean of per-class AP over classes that have ground truth; 0 when no
/// class qualifies.
double average_precision(std::span<const EvalBox> preds, std::span<const EvalBox> gts,
                         double iou_threshold);

/// IoU thresholds 0.50, 0.55, ..., 0.95.
std::array<double, 10> coco_iou_thresholds();

/// Mean of average_precision over the ten COCO thresholds.
double map_range(std::span<const EvalBox> preds, std::span<const EvalBox> gts);

/// For each gt object, the track with the best IoU (>= iou_threshold) in
/// every frame; a switch is a change from the previously matched id.
int id_switches(std::span<const EvalBox> tracks, std::span<const EvalBox> gts,
                double iou_threshold = 0.5);

}  // namespace spectra
