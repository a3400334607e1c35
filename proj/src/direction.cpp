// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "spectra/direction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace spectra {

namespace {

constexpr std::array<std::string_view, 9> kCompassNames{"N", "NE", "E", "SE", "S",
                                                        "SW", "W", "NW", "none"};

// Samples whose frame falls within the last `window` frames of the history.
std::vector<const TrackSample*> windowed(const TrackHistory& h, int window) {
    std::vector<const TrackSample*> out;
    if (h.empty()) {
        return out;
    }
    const std::int64_t newest = h.back().frame_index;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i].frame_index > newest - window) {
            out.push_back(&h[i]);
        }
    }
    return out;
}

CueResult abstain(Cue cue, std::string why) {
    CueResult r;
    r.cue = cue;
    r.diagnostic = std::move(why);
    return r;
}

Radial radial_from(double value, double eps) {
    if (value > eps) return Radial::approaching;
    if (value < -eps) return Radial::receding;
    return Radial::stationary;
}

double median_of(std::vector<double>& v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return (lower + upper) / 2.0;
}

}  // namespace

void DirectionConfig::validate() const {
    if (history_length < 2) throw std::invalid_argument("direction.history_length must be >= 2");
    if (cue_window < 2) throw std::invalid_argument("direction.cue_window must be >= 2");
    if (smooth_window < 1) throw std::invalid_argument("direction.smooth_window must be >= 1");
    if (grid < 1) throw std::invalid_argument("direction.grid must be >= 1");
    if (block < 1 || block % 2 == 0) throw std::invalid_argument("direction.block must be odd");
    if (search_radius < 0) throw std::invalid_argument("direction.search_radius must be >= 0");
    if (!(eps_area > 0) || !(eps_scale > 0) || !(eps_velocity > 0) || !(v_sat > 0)) {
        throw std::invalid_argument("direction thresholds must be positive");
    }
    if (min_valid_points < 1) throw std::invalid_argument("direction.min_valid_points must be >= 1");
    if (!(flow_weight >= 0) || !(centroid_weight >= 0)) {
        throw std::invalid_argument("direction cue weights must be non-negative");
    }
}

double Vec2::norm() const { return std::hypot(x, y); }

std::string_view to_string(Compass c) { return kCompassNames[static_cast<std::size_t>(c)]; }

std::optional<Compass> parse_compass(std::string_view s) {
    for (std::size_t i = 0; i < kCompassNames.size(); ++i) {
        if (kCompassNames[i] == s) return static_cast<Compass>(i);
    }
    return std::nullopt;
}

std::string_view to_string(Radial r) {
    switch (r) {
        case Radial::approaching: return "approaching";
        case Radial::receding: return "receding";
        case Radial::stationary: return "stationary";
    }
    return "stationary";
}

std::string_view to_string(Cue c) {
    switch (c) {
        case Cue::area_trend: return "area_trend";
        case Cue::centroid_velocity: return "centroid_velocity";
        case Cue::scale_variation: return "scale_variation";
        case Cue::sparse_flow: return "sparse_flow";
    }
    return "area_trend";
}

double bearing_deg(Vec2 v) {
    double deg = std::atan2(v.x, -v.y) * 180.0 / std::numbers::pi;
    if (deg < 0.0) deg += 360.0;
    if (deg >= 360.0) deg -= 360.0;
    return deg;
}

Compass compass_for_bearing(double deg) {
    const int k = static_cast<int>(std::floor(deg / 45.0 + 0.5)) % 8;
    return static_cast<Compass>((k + 8) % 8);
}

Compass rotate_compass(Compass c, int quarter_turns) {
    if (c == Compass::none) return c;
    const int k = static_cast<int>(c) + 2 * quarter_turns;
    return static_cast<Compass>(((k % 8) + 8) % 8);
}

Compass mirror_compass(Compass c) {
    if (c == Compass::none) return c;
    return static_cast<Compass>((8 - static_cast<int>(c)) % 8);
}

TrackSample make_sample(std::int64_t frame_index, const BBox& b) {
    return {frame_index, b, area(b), centroid(b)};
}

std::string DirectionEstimate::label() const {
    return std::string(to_string(planar)) + "/" + std::string(to_string(radial));
}

CueResult area_trend(const TrackHistory& h, int window, const DirectionConfig& cfg) {
    const auto s = windowed(h, window);
    if (s.size() < 3) {
        return abstain(Cue::area_trend, "area trend needs 3 samples");
    }
    const double n = static_cast<double>(s.size());
    double mean_t = 0.0;
    double mean_a = 0.0;
    for (const auto* p : s) {
        mean_t += static_cast<double>(p->frame_index);
        mean_a += p->area;
    }
    mean_t /= n;
    mean_a /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto* p : s) {
        const double dt = static_cast<double>(p->frame_index) - mean_t;
        sxy += dt * (p->area - mean_a);
        sxx += dt * dt;
    }
    const double relative = (sxy / sxx) / mean_a;

    CueResult r;
    r.cue = Cue::area_trend;
    r.magnitude = relative;
    r.radial = radial_from(relative, cfg.eps_area);
    r.strength = std::min(1.0, std::abs(relative) / (4.0 * cfg.eps_area));
    return r;
}

CueResult centroid_velocity(const TrackHistory& h, int window, const DirectionConfig& cfg) {
    const auto s = windowed(h, window);
    if (s.size() < 2) {
        return abstain(Cue::centroid_velocity, "centroid velocity needs 2 samples");
    }
    const TrackSample& first = *s.front();
    const TrackSample& last = *s.back();
    const double frames = static_cast<double>(last.frame_index - first.frame_index);
    const Vec2 v{(last.centroid.x - first.centroid.x) / frames,
                 (last.centroid.y - first.centroid.y) / frames};

    CueResult r;
    r.cue = Cue::centroid_velocity;
    r.magnitude = v.norm();
    if (r.magnitude >= cfg.eps_velocity) {
        r.planar = Vec2{v.x / r.magnitude, v.y / r.magnitude};
        r.strength = std::min(1.0, r.magnitude / cfg.v_sat);
    }
    return r;
}

CueResult scale_variation(const TrackHistory& h, int window, const DirectionConfig& cfg) {
    const auto s = windowed(h, window);
    if (s.size() < 2) {
        return abstain(Cue::scale_variation, "scale variation needs 2 samples");
    }
    const double ratio = std::sqrt(s.back()->area / s.front()->area);

    CueResult r;
    r.cue = Cue::scale_variation;
    r.magnitude = ratio;
    r.radial = radial_from(ratio - 1.0, cfg.eps_scale);
    r.strength = std::min(1.0, std::abs(ratio - 1.0) / (4.0 * cfg.eps_scale));
    return r;
}

CueResult sparse_flow(const GrayImage& prev, const GrayImage& cur, const BBox& box,
                      const DirectionConfig& cfg, FlowStats* stats) {
    FlowStats local;
    FlowStats& st = stats ? *stats : local;
    st = FlowStats{};

    if (prev.dims() != cur.dims()) {
        return abstain(Cue::sparse_flow, "frame dimensions differ");
    }
    if (!is_valid(box) || !inside(box, prev.dims())) {
        return abstain(Cue::sparse_flow, "box " + to_string(box) + " outside frame");
    }

    const int half = cfg.block / 2;
    const int radius = cfg.search_radius;
    const int reach = half + radius;
    const int width = prev.width;
    const int height = prev.height;
    const double block_px = static_cast<double>(cfg.block) * cfg.block;

    std::vector<double> dxs;
    std::vector<double> dys;
    for (int gy = 0; gy < cfg.grid; ++gy) {
        for (int gx = 0; gx < cfg.grid; ++gx) {
            ++st.points;
            const int px = static_cast<int>(std::floor(box.x1 + (gx + 0.5) * box.width() / cfg.grid));
            const int py = static_cast<int>(std::floor(box.y1 + (gy + 0.5) * box.height() / cfg.grid));
            if (px - reach < 0 || py - reach < 0 || px + reach >= width || py + reach >= height) {
                continue;
            }
            ++st.points_in_range;

            double sum = 0.0;
            double sum_sq = 0.0;
            for (int y = py - half; y <= py + half; ++y) {
                for (int x = px - half; x <= px + half; ++x) {
                    const double v = prev.at(x, y);
                    sum += v;
                    sum_sq += v * v;
                }
            }
            const double mean = sum / block_px;
            const double var = std::max(0.0, sum_sq / block_px - mean * mean);
            if (std::sqrt(var) < cfg.texture_floor) {
                continue;
            }
            ++st.points_textured;

            long best_sad = std::numeric_limits<long>::max();
            int best_dx = 0;
            int best_dy = 0;
            for (int dy = -radius; dy <= radius; ++dy) {
                for (int dx = -radius; dx <= radius; ++dx) {
                    ++st.candidates;
                    long sad = 0;
                    for (int y = -half; y <= half && sad <= best_sad; ++y) {
                        const std::uint8_t* a = &prev.pixels[static_cast<std::size_t>(py + y) * width + px - half];
                        const std::uint8_t* b =
                            &cur.pixels[static_cast<std::size_t>(py + y + dy) * width + px + dx - half];
                        for (int x = 0; x < cfg.block; ++x) {
                            sad += std::abs(static_cast<int>(a[x]) - static_cast<int>(b[x]));
                        }
                    }
                    if (sad > best_sad) {
                        continue;
                    }
                    const int mag = dx * dx + dy * dy;
                    const int best_mag = best_dx * best_dx + best_dy * best_dy;
                    const bool better =
                        sad < best_sad || mag < best_mag ||
                        (mag == best_mag && (dx < best_dx || (dx == best_dx && dy < best_dy)));
                    if (better) {
                        best_sad = sad;
                        best_dx = dx;
                        best_dy = dy;
                    }
                }
            }
            dxs.push_back(best_dx);
            dys.push_back(best_dy);
        }
    }

    if (static_cast<int>(dxs.size()) < cfg.min_valid_points) {
        return abstain(Cue::sparse_flow, std::to_string(dxs.size()) + " textured flow points, need " +
                                             std::to_string(cfg.min_valid_points));
    }

    const Vec2 flow{median_of(dxs), median_of(dys)};
    st.median = flow;

    CueResult r;
    r.cue = Cue::sparse_flow;
    r.magnitude = flow.norm();
    if (r.magnitude >= cfg.eps_velocity) {
        r.planar = Vec2{flow.x / r.magnitude, flow.y / r.magnitude};
        const double surviving = static_cast<double>(st.points_textured) / st.points;
        r.strength = surviving * std::min(1.0, r.magnitude / cfg.v_sat);
    }
    return r;
}

DirectionEstimate fuse_cues(std::span<const CueResult> cues, double box_area,
                            const DirectionConfig& cfg) {
    DirectionEstimate est;
    if (box_area < cfg.min_area) {
        return est;
    }

    Vec2 resultant;
    double planar_total = 0.0;
    std::array<double, 3> radial_weight{};
    double strength_sum = 0.0;
    int contributing = 0;

    for (const auto& c : cues) {
        if (c.strength <= 0.0) {
            continue;
        }
        strength_sum += c.strength;
        ++contributing;
        if (c.planar) {
            const double w = (c.cue == Cue::sparse_flow ? cfg.flow_weight : cfg.centroid_weight) * c.strength;
            resultant.x += w * c.planar->x;
            resultant.y += w * c.planar->y;
            planar_total += w;
        }
        if (c.radial) {
            radial_weight[static_cast<std::size_t>(*c.radial)] += c.strength;
        }
    }
    if (contributing == 0) {
        return est;
    }

    const double planar_win = resultant.norm();
    if (planar_win > 1e-12) {
        const double deg = bearing_deg(resultant);
        est.heading_deg = deg;
        est.planar = compass_for_bearing(deg);
    }

    const double radial_total = radial_weight[0] + radial_weight[1] + radial_weight[2];
    double radial_win = 0.0;
    if (radial_total > 0.0) {
        const auto best = std::max_element(radial_weight.begin(), radial_weight.end());
        radial_win = *best;
        // Approaching and receding in balance read as stationary.
        const bool tie = std::count(radial_weight.begin(), radial_weight.end(), *best) > 1;
        est.radial = tie ? Radial::stationary
                         : static_cast<Radial>(std::distance(radial_weight.begin(), best));
    }

    const double denom = planar_total + radial_total;
    const double fraction = denom > 0.0 ? (planar_win + radial_win) / denom : 0.0;
    est.confidence = std::clamp(fraction * (strength_sum / contributing), 0.0, 1.0);
    return est;
}

DirectionEstimate smooth(std::span<const DirectionEstimate> recent) {
    DirectionEstimate out;
    if (recent.empty()) {
        return out;
    }
    const std::size_t n = recent.size();

    // Majority with ties broken towards the label seen most recently.
    auto majority = [&](auto key, std::size_t buckets) {
        std::vector<std::size_t> count(buckets, 0);
        std::vector<std::size_t> latest(buckets, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(key(recent[i]));
            ++count[k];
            latest[k] = i;
        }
        std::size_t best = static_cast<std::size_t>(key(recent[n - 1]));
        for (std::size_t k = 0; k < buckets; ++k) {
            if (count[k] > count[best] || (count[k] == count[best] && latest[k] > latest[best])) {
                best = k;
            }
        }
        return std::pair{best, count[best]};
    };

    const auto [planar, planar_votes] = majority([](const DirectionEstimate& e) { return e.planar; }, 9);
    const auto [radial, radial_votes] = majority([](const DirectionEstimate& e) { return e.radial; }, 3);
    (void)radial_votes;
    out.planar = static_cast<Compass>(planar);
    out.radial = static_cast<Radial>(radial);

    double conf_sum = 0.0;
    double sin_sum = 0.0;
    double cos_sum = 0.0;
    for (const auto& e : recent) {
        if (e.planar != out.planar) {
            continue;
        }
        conf_sum += e.confidence;
        if (e.heading_deg) {
            const double rad = *e.heading_deg * std::numbers::pi / 180.0;
            sin_sum += std::sin(rad);
            cos_sum += std::cos(rad);
        }
    }
    const double fraction = static_cast<double>(planar_votes) / static_cast<double>(n);
    out.confidence = std::clamp(fraction * conf_sum / static_cast<double>(planar_votes), 0.0, 1.0);
    if (out.planar != Compass::none && (sin_sum != 0.0 || cos_sum != 0.0)) {
        double deg = std::atan2(sin_sum, cos_sum) * 180.0 / std::numbers::pi;
        if (deg < 0.0) deg += 360.0;
        if (deg >= 360.0) deg -= 360.0;
        out.heading_deg = deg;
    }
    return out;
}

DirectionEstimate smooth(const RingBuffer<DirectionEstimate>& recent) {
    std::vector<DirectionEstimate> v;
    v.reserve(recent.size());
    for (std::size_t i = 0; i < recent.size(); ++i) {
        v.push_back(recent[i]);
    }
    return smooth(std::span<const DirectionEstimate>(v));
}

DirectionEstimator::DirectionEstimator(const DirectionConfig& cfg)
    : cfg_(cfg),
      history_(static_cast<std::size_t>(cfg.history_length)),
      recent_(static_cast<std::size_t>(cfg.smooth_window)) {
    cfg_.validate();
}

DirectionEstimate DirectionEstimator::update(std::int64_t frame_index, const BBox& box,
                                             const GrayImage* prev, const GrayImage* cur) {
    const bool consecutive = !history_.empty() && history_.back().frame_index == frame_index - 1;
    const BBox prev_box = consecutive ? history_.back().bbox : box;
    history_.push(make_sample(frame_index, box));

    const double box_area = area(box);
    DirectionEstimate instant;
    if (box_area >= cfg_.min_area) {
        std::array<CueResult, 4> cues{
            area_trend(history_, cfg_.cue_window, cfg_),
            centroid_velocity(history_, cfg_.cue_window, cfg_),
            scale_variation(history_, cfg_.cue_window, cfg_),
            abstain(Cue::sparse_flow, "no frames"),
        };
        if (consecutive && prev != nullptr && cur != nullptr) {
            FlowStats st;
            cues[3] = sparse_flow(*prev, *cur, prev_box, cfg_, &st);
            flow_candidates_ += st.candidates;
        }
        instant = fuse_cues(cues, box_area, cfg_);
    }
    recent_.push(instant);
    return smooth(recent_);
}

}  // namespace spectra
