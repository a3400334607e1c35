// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "spectra/evalm.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>

namespace spectra {

namespace {

using FrameClass = std::pair<std::int64_t, std::string>;

// Indices grouped by (frame, class), each group in input order.
std::map<FrameClass, std::vector<std::size_t>> group(std::span<const EvalBox> boxes) {
    std::map<FrameClass, std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        out[{boxes[i].frame_index, boxes[i].class_name}].push_back(i);
    }
    return out;
}

std::vector<std::size_t> by_confidence(std::span<const EvalBox> preds, std::vector<std::size_t> idx) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return preds[a].confidence > preds[b].confidence;
    });
    return idx;
}

// Best unmatched gt for pred, or -1.
int best_gt(const BBox& pred, std::span<const BBox> gts, const std::vector<char>& used,
            double iou_threshold) {
    int best = -1;
    double best_iou = iou_threshold;
    for (std::size_t g = 0; g < gts.size(); ++g) {
        if (used[g]) continue;
        const double v = iou(pred, gts[g]);
        if (v >= best_iou && (best < 0 || v > best_iou)) {
            best = static_cast<int>(g);
            best_iou = v;
        }
    }
    return best;
}

}  // namespace

MatchCounts match_detections(std::span<const BBox> preds, std::span<const BBox> gts,
                             double iou_threshold) {
    MatchCounts c;
    std::vector<char> used(gts.size(), 0);
    for (const auto& p : preds) {
        const int g = best_gt(p, gts, used, iou_threshold);
        if (g >= 0) {
            used[static_cast<std::size_t>(g)] = 1;
            ++c.tp;
        } else {
            ++c.fp;
        }
    }
    c.fn = static_cast<std::int64_t>(gts.size()) - c.tp;
    return c;
}

PrecisionRecall precision_recall_f1(const MatchCounts& c) {
    PrecisionRecall r;
    r.precision = (c.tp + c.fp) == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    r.recall = (c.tp + c.fn) == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    const double s = r.precision + r.recall;
    r.f1 = s == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / s;
    return r;
}

std::map<std::string, MatchCounts> count_matches_per_class(std::span<const EvalBox> preds,
                                                           std::span<const EvalBox> gts,
                                                           double iou_threshold,
                                                           double min_confidence) {
    const auto pg = group(preds);
    const auto gg = group(gts);
    std::set<FrameClass> keys;
    for (const auto& [k, _] : pg) keys.insert(k);
    for (const auto& [k, _] : gg) keys.insert(k);

    std::map<std::string, MatchCounts> out;
    for (const auto& key : keys) {
        std::vector<BBox> p;
        std::vector<BBox> g;
        if (auto it = pg.find(key); it != pg.end()) {
            for (std::size_t i : by_confidence(preds, it->second)) {
                if (preds[i].confidence >= min_confidence) p.push_back(preds[i].bbox);
            }
        }
        if (auto it = gg.find(key); it != gg.end()) {
            for (std::size_t i : it->second) g.push_back(gts[i].bbox);
        }
        out[key.second] += match_detections(p, g, iou_threshold);
    }
    return out;
}

MatchCounts count_matches(std::span<const EvalBox> preds, std::span<const EvalBox> gts,
                          double iou_threshold, double min_confidence) {
    MatchCounts total;
    for (const auto& [_, c] : count_matches_per_class(preds, gts, iou_threshold, min_confidence)) {
        total += c;
    }
    return total;
}

std::vector<PRPoint> pr_curve(std::span<const EvalBox> preds, std::span<const EvalBox> gts,
                              const std::string& class_name, double iou_threshold) {
    std::map<std::int64_t, std::vector<BBox>> gt_by_frame;
    std::size_t gt_total = 0;
    for (const auto& g : gts) {
        if (g.class_name == class_name) {
            gt_by_frame[g.frame_index].push_back(g.bbox);
            ++gt_total;
        }
    }
    std::map<std::int64_t, std::vector<char>> used;
    for (const auto& [f, boxes] : gt_by_frame) used[f].assign(boxes.size(), 0);

    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i].class_name == class_name) idx.push_back(i);
    }
    idx = by_confidence(preds, std::move(idx));

    std::vector<PRPoint> curve;
    std::int64_t tp = 0;
    std::int64_t seen = 0;
    for (std::size_t i : idx) {
        ++seen;
        if (auto it = gt_by_frame.find(preds[i].frame_index); it != gt_by_frame.end()) {
            auto& u = used[preds[i].frame_index];
            const int g = best_gt(preds[i].bbox, it->second, u, iou_threshold);
            if (g >= 0) {
                u[static_cast<std::size_t>(g)] = 1;
                ++tp;
            }
        }
        curve.push_back({preds[i].confidence, static_cast<double>(tp) / static_cast<double>(seen),
                         gt_total == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(gt_total)});
    }
    return curve;
}

double average_precision_class(std::span<const EvalBox> preds, std::span<const EvalBox> gts,
                               const std::string& class_name, double iou_threshold) {
    const bool has_gt = std::any_of(gts.begin(), gts.end(),
                                    [&](const EvalBox& g) { return g.class_name == class_name; });
    if (!has_gt) {
        return -1.0;
    }
    const auto curve = pr_curve(preds, gts, class_name, iou_threshold);
    // Envelope: precision at position i becomes the max over positions >= i.
    std::vector<double> envelope(curve.size());
    double running = 0.0;
    for (std::size_t i = curve.size(); i-- > 0;) {
        running = std::max(running, curve[i].precision);
        envelope[i] = running;
    }
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        ap += (curve[i].recall - prev_recall) * envelope[i];
        prev_recall = curve[i].recall;
    }
    return ap;
}

double average_precision(std::span<const EvalBox> preds, std::span<const EvalBox> gts,
                         double iou_threshold) {
    std::set<std::string> classes;
    for (const auto& g : gts) classes.insert(g.class_name);
    if (classes.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const auto& c : classes) {
        sum += average_precision_class(preds, gts, c, iou_threshold);
    }
    return sum / static_cast<double>(classes.size());
}

std::array<double, 10> coco_iou_thresholds() {
    std::array<double, 10> t{};
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = 0.5 + 0.05 * static_cast<double>(i);
    }
    return t;
}

double map_range(std::span<const EvalBox> preds, std::span<const EvalBox> gts) {
    double sum = 0.0;
    for (double t : coco_iou_thresholds()) {
        sum += average_precision(preds, gts, t);
    }
    return sum / 10.0;
}

int id_switches(std::span<const EvalBox> tracks, std::span<const EvalBox> gts, double iou_threshold) {
    std::map<std::int64_t, std::vector<const EvalBox*>> tracks_by_frame;
    for (const auto& t : tracks) tracks_by_frame[t.frame_index].push_back(&t);

    std::vector<const EvalBox*> ordered;
    for (const auto& g : gts) ordered.push_back(&g);
    std::stable_sort(ordered.begin(), ordered.end(), [](const EvalBox* a, const EvalBox* b) {
        return a->frame_index < b->frame_index;
    });

    std::unordered_map<int, int> last_id;
    int switches = 0;
    for (const EvalBox* g : ordered) {
        auto it = tracks_by_frame.find(g->frame_index);
        if (it == tracks_by_frame.end()) continue;
        const EvalBox* best = nullptr;
        double best_iou = iou_threshold;
        for (const EvalBox* t : it->second) {
            const double v = iou(g->bbox, t->bbox);
            if (v >= best_iou && (best == nullptr || v > best_iou)) {
                best = t;
                best_iou = v;
            }
        }
        if (best == nullptr) continue;
        auto [pos, inserted] = last_id.emplace(g->id, best->id);
        if (!inserted && pos->second != best->id) {
            ++switches;
            pos->second = best->id;
        }
    }
    return switches;
}

}  // namespace spectra
