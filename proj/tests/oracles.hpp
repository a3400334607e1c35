// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

// Independent reference implementations used only by tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spectra/detio.hpp"
#include "spectra/evalm.hpp"
#include "spectra/geometry.hpp"

namespace spectra::oracle {

/// IoU by counting unit lattice cells covered by each integer box.
inline double pixel_iou(const BBox& a, const BBox& b) {
    const int lo_x = static_cast<int>(std::min(a.x1, b.x1));
    const int hi_x = static_cast<int>(std::max(a.x2, b.x2));
    const int lo_y = static_cast<int>(std::min(a.y1, b.y1));
    const int hi_y = static_cast<int>(std::max(a.y2, b.y2));
    auto covers = [](const BBox& r, int i, int j) { return r.x1 <= i && i < r.x2 && r.y1 <= j && j < r.y2; };
    long inter = 0;
    long uni = 0;
    for (int j = lo_y; j < hi_y; ++j) {
        for (int i = lo_x; i < hi_x; ++i) {
            const bool in_a = covers(a, i, j);
            const bool in_b = covers(b, i, j);
            inter += in_a && in_b;
            uni += in_a || in_b;
        }
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

/// NMS by repeated selection of the best remaining record, no sorting.
/// Returns input indices in selection order.
inline std::vector<std::size_t> reference_nms(const std::vector<DetectionRecord>& dets, double threshold) {
    std::vector<bool> alive(dets.size(), true);
    std::vector<std::size_t> kept;
    while (true) {
        std::size_t best = dets.size();
        for (std::size_t i = 0; i < dets.size(); ++i) {
            if (alive[i] && (best == dets.size() || dets[i].confidence > dets[best].confidence)) {
                best = i;
            }
        }
        if (best == dets.size()) break;
        kept.push_back(best);
        alive[best] = false;
        for (std::size_t i = 0; i < dets.size(); ++i) {
            if (alive[i] && dets[i].class_name == dets[best].class_name &&
                iou(dets[i].bbox, dets[best].bbox) > threshold) {
                alive[i] = false;
            }
        }
    }
    return kept;
}

/// AP for one class by recomputing precision/recall from scratch at every
/// confidence cut, then integrating max precision over recall steps.
inline double brute_force_ap(const std::vector<EvalBox>& preds, const std::vector<EvalBox>& gts,
                             const std::string& cls, double thr) {
    std::vector<EvalBox> p;
    for (const auto& x : preds) if (x.class_name == cls) p.push_back(x);
    std::vector<EvalBox> g;
    for (const auto& x : gts) if (x.class_name == cls) g.push_back(x);
    if (g.empty()) return -1.0;
    std::stable_sort(p.begin(), p.end(), [](const EvalBox& a, const EvalBox& b) { return a.confidence > b.confidence; });

    std::vector<std::pair<double, double>> pr;  // (recall, precision) per cut
    for (std::size_t k = 1; k <= p.size(); ++k) {
        std::map<std::int64_t, std::vector<bool>> used;
        long tp = 0;
        for (std::size_t i = 0; i < k; ++i) {
            int best = -1;
            double best_v = 0.0;
            for (std::size_t j = 0; j < g.size(); ++j) {
                if (g[j].frame_index != p[i].frame_index) continue;
                auto& u = used[g[j].frame_index];
                if (u.size() < g.size()) u.resize(g.size(), false);
                if (u[j]) continue;
                const double v = iou(p[i].bbox, g[j].bbox);
                if (v >= thr && v > best_v) {
                    best = static_cast<int>(j);
                    best_v = v;
                }
            }
            if (best >= 0) {
                used[p[i].frame_index][static_cast<std::size_t>(best)] = true;
                ++tp;
            }
        }
        pr.emplace_back(static_cast<double>(tp) / static_cast<double>(g.size()),
                        static_cast<double>(tp) / static_cast<double>(k));
    }
    // Integrate over distinct recall levels: for each level the best
    // precision achievable at recall >= level.
    std::vector<double> levels{0.0};
    for (const auto& [r, _] : pr) levels.push_back(r);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    double ap = 0.0;
    for (std::size_t i = 1; i < levels.size(); ++i) {
        double best_p = 0.0;
        for (const auto& [r, prec] : pr) {
            if (r >= levels[i]) best_p = std::max(best_p, prec);
        }
        ap += (levels[i] - levels[i - 1]) * best_p;
    }
    return ap;
}

inline double brute_force_map_range(const std::vector<EvalBox>& preds, const std::vector<EvalBox>& gts) {
    std::vector<std::string> classes;
    for (const auto& g : gts) {
        if (std::find(classes.begin(), classes.end(), g.class_name) == classes.end()) classes.push_back(g.class_name);
    }
    if (classes.empty()) return 0.0;
    double total = 0.0;
    for (int t = 0; t < 10; ++t) {
        const double thr = 0.5 + 0.05 * t;
        double s = 0.0;
        for (const auto& c : classes) s += brute_force_ap(preds, gts, c, thr);
        total += s / static_cast<double>(classes.size());
    }
    return total / 10.0;
}

}  // namespace spectra::oracle
