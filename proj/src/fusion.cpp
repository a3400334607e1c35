// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "spectra/fusion.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace spectra {

namespace {

// Dense integer key per class name so NMS compares ints.
template <typename Range, typename Proj>
std::vector<int> class_keys(const Range& items, Proj name_of) {
    std::unordered_map<std::string, int> ids;
    std::vector<int> keys;
    keys.reserve(std::size(items));
    for (const auto& item : items) {
        const auto [it, _] = ids.emplace(name_of(item), static_cast<int>(ids.size()));
        keys.push_back(it->second);
    }
    return keys;
}

FusionSource source_of(Modality m) { return m == Modality::RGB ? FusionSource::RGB : FusionSource::IR; }

FusedDetection tag(const DetectionRecord& rec, const FusionConfig& cfg) {
    return {rec, source_of(rec.modality), std::min(1.0, cfg.weight(rec.modality) * rec.confidence)};
}

std::vector<DetectionRecord> run_modality(const std::vector<DetectionRecord>& dets, Modality m,
                                          const FusionConfig& cfg, bool apply_nms) {
    auto gated = confidence_gate(dets, cfg.threshold(m));
    if (apply_nms) {
        return nms(gated, cfg.nms_iou_threshold);
    }
    return gated;
}

}  // namespace

std::string_view to_string(FusionMode m) {
    switch (m) {
        case FusionMode::both: return "both";
        case FusionMode::rgb_only: return "rgb_only";
        case FusionMode::ir_only: return "ir_only";
    }
    return "both";
}

std::optional<FusionMode> parse_fusion_mode(std::string_view s) {
    if (s == "both") return FusionMode::both;
    if (s == "rgb_only") return FusionMode::rgb_only;
    if (s == "ir_only") return FusionMode::ir_only;
    return std::nullopt;
}

FusionMode mode_for(ModalitySet available) {
    if (available.rgb && available.ir) return FusionMode::both;
    if (available.rgb) return FusionMode::rgb_only;
    if (available.ir) return FusionMode::ir_only;
    throw std::invalid_argument("no modality available");
}

std::string_view to_string(FusionSource s) {
    switch (s) {
        case FusionSource::RGB: return "RGB";
        case FusionSource::IR: return "IR";
        case FusionSource::merged: return "merged";
    }
    return "RGB";
}

std::string_view to_string(PayloadFlag f) { return f == PayloadFlag::harmful ? "harmful" : "normal"; }

FusionConfig FusionConfig::for_task(Task task) {
    FusionConfig cfg;
    cfg.cross_modality_nms = task == Task::payload_identification;
    return cfg;
}

void FusionConfig::validate() const {
    auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!unit(conf_threshold_rgb) || !unit(conf_threshold_ir)) {
        throw std::invalid_argument("fusion confidence thresholds must lie in [0,1]");
    }
    if (!unit(harmful_conf_threshold)) {
        throw std::invalid_argument("harmful_conf_threshold must lie in [0,1]");
    }
    if (!(weight_rgb >= 0.0) || !(weight_ir >= 0.0) || !(weight_rgb + weight_ir > 0.0)) {
        throw std::invalid_argument("modality weights must be non-negative with a positive sum");
    }
    if (!(nms_iou_threshold > 0.0 && nms_iou_threshold < 1.0)) {
        throw std::invalid_argument("nms_iou_threshold must lie in (0,1)");
    }
}

std::vector<DetectionRecord> confidence_gate(std::span<const DetectionRecord> dets, double threshold) {
    std::vector<DetectionRecord> out;
    std::copy_if(dets.begin(), dets.end(), std::back_inserter(out),
                 [threshold](const DetectionRecord& d) { return d.confidence >= threshold; });
    return out;
}

std::vector<std::size_t> nms_indices(std::span<const BBox> boxes, std::span<const int> class_ids,
                                     std::span<const double> scores, double iou_threshold) {
    const std::size_t n = boxes.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    std::vector<char> suppressed(n, 0);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t top = order[i];
        if (suppressed[top]) {
            continue;
        }
        keep.push_back(top);
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::size_t other = order[j];
            if (!suppressed[other] && class_ids[other] == class_ids[top] &&
                iou(boxes[top], boxes[other]) > iou_threshold) {
                suppressed[other] = 1;
            }
        }
    }
    return keep;
}

std::vector<DetectionRecord> nms(std::span<const DetectionRecord> dets, double iou_threshold) {
    std::vector<BBox> boxes;
    std::vector<double> scores;
    for (const auto& d : dets) {
        boxes.push_back(d.bbox);
        scores.push_back(d.confidence);
    }
    const auto keys = class_keys(dets, [](const DetectionRecord& d) { return d.class_name; });
    std::vector<DetectionRecord> out;
    for (std::size_t i : nms_indices(boxes, keys, scores, iou_threshold)) {
        out.push_back(dets[i]);
    }
    return out;
}

std::vector<FusedDetection> fuse_decision_layer(const FrameDetections& frame,
                                                const FusionConfig& cfg,
                                                const SurrogatePolicy* policy) {
    static const std::vector<DetectionRecord> kNone;

    auto list_for = [&](Modality m) -> const std::vector<DetectionRecord>& {
        const auto& list = frame.of(m);
        if (list) {
            return *list;
        }
        if (cfg.mode == FusionMode::both &&
            (policy == nullptr || policy->action_for(m) == SurrogateAction::none)) {
            throw std::invalid_argument("frame " + std::to_string(frame.frame_index) + " lacks " +
                                        std::string(to_string(m)) +
                                        " detections and no surrogate policy covers it");
        }
        return kNone;
    };

    std::vector<FusedDetection> out;
    switch (cfg.mode) {
        case FusionMode::rgb_only:
            for (const auto& d : run_modality(list_for(Modality::RGB), Modality::RGB, cfg, true)) {
                out.push_back(tag(d, cfg));
            }
            break;
        case FusionMode::ir_only:
            for (const auto& d : run_modality(list_for(Modality::IR), Modality::IR, cfg, cfg.ir_nms)) {
                out.push_back(tag(d, cfg));
            }
            break;
        case FusionMode::both: {
            const auto& rgb = list_for(Modality::RGB);
            const auto& ir = list_for(Modality::IR);
            if (!cfg.cross_modality_nms) {
                for (const auto& d : run_modality(rgb, Modality::RGB, cfg, true)) {
                    out.push_back(tag(d, cfg));
                }
                for (const auto& d : run_modality(ir, Modality::IR, cfg, cfg.ir_nms)) {
                    out.push_back(tag(d, cfg));
                }
                break;
            }
            std::vector<FusedDetection> pool;
            for (const auto& d : confidence_gate(rgb, cfg.conf_threshold_rgb)) {
                pool.push_back(tag(d, cfg));
            }
            for (const auto& d : confidence_gate(ir, cfg.conf_threshold_ir)) {
                pool.push_back(tag(d, cfg));
            }
            std::vector<BBox> boxes;
            std::vector<double> scores;
            for (const auto& f : pool) {
                boxes.push_back(f.det.bbox);
                scores.push_back(f.effective_confidence);
            }
            const auto keys = class_keys(pool, [](const FusedDetection& f) { return f.det.class_name; });
            for (std::size_t i : nms_indices(boxes, keys, scores, cfg.nms_iou_threshold)) {
                out.push_back(pool[i]);
            }
            break;
        }
    }
    return out;
}

PayloadFlag classify_payload_or(std::span<const FusedDetection> dets, double harmful_conf_threshold) {
    const bool any = std::any_of(dets.begin(), dets.end(), [&](const FusedDetection& f) {
        return f.det.class_name == "harmful" && f.effective_confidence >= harmful_conf_threshold;
    });
    return any ? PayloadFlag::harmful : PayloadFlag::normal;
}

}  // namespace spectra
