// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "spectra/tracker.hpp"

#include <algorithm>
#include <stdexcept>

namespace spectra {

std::string_view to_string(TrackState s) {
    switch (s) {
        case TrackState::tentative: return "tentative";
        case TrackState::active: return "active";
        case TrackState::lost: return "lost";
    }
    return "lost";
}

void TrackerConfig::validate() const {
    if (!(iou_match_threshold > 0.0 && iou_match_threshold < 1.0)) {
        throw std::invalid_argument("iou_match_threshold must lie in (0,1)");
    }
    if (max_gap < 1) throw std::invalid_argument("max_gap must be >= 1");
    if (min_hits < 1) throw std::invalid_argument("min_hits must be >= 1");
    if (history_length < 2) throw std::invalid_argument("history_length must be >= 2");
}

std::vector<TrackInput> track_inputs(std::span<const FusedDetection> dets) {
    std::vector<TrackInput> out;
    out.reserve(dets.size());
    for (const auto& d : dets) {
        out.push_back({d.det.class_name, d.det.bbox, d.effective_confidence});
    }
    return out;
}

Association associate(std::span<const Track> tracks, std::span<const TrackInput> dets,
                      double iou_match_threshold) {
    struct Candidate {
        double iou;
        std::size_t track;
        std::size_t det;
    };
    std::vector<Candidate> pairs;
    for (std::size_t t = 0; t < tracks.size(); ++t) {
        for (std::size_t d = 0; d < dets.size(); ++d) {
            if (tracks[t].class_name != dets[d].class_name) {
                continue;
            }
            const double v = iou(tracks[t].last().bbox, dets[d].bbox);
            if (v >= iou_match_threshold) {
                pairs.push_back({v, t, d});
            }
        }
    }
    std::sort(pairs.begin(), pairs.end(), [&](const Candidate& a, const Candidate& b) {
        if (a.iou != b.iou) return a.iou > b.iou;
        if (tracks[a.track].id != tracks[b.track].id) return tracks[a.track].id < tracks[b.track].id;
        return a.det < b.det;
    });

    Association out;
    std::vector<char> track_used(tracks.size(), 0);
    std::vector<char> det_used(dets.size(), 0);
    for (const auto& c : pairs) {
        if (track_used[c.track] || det_used[c.det]) {
            continue;
        }
        track_used[c.track] = det_used[c.det] = 1;
        out.matches.emplace_back(c.track, c.det);
    }
    for (std::size_t t = 0; t < tracks.size(); ++t) {
        if (!track_used[t]) out.unmatched_tracks.push_back(t);
    }
    for (std::size_t d = 0; d < dets.size(); ++d) {
        if (!det_used[d]) out.unmatched_dets.push_back(d);
    }
    return out;
}

IouTracker::IouTracker(TrackerConfig cfg) : cfg_(cfg) { cfg_.validate(); }

StepResult IouTracker::step(std::int64_t frame_index, std::span<const FusedDetection> dets) {
    const auto inputs = track_inputs(dets);
    return step(frame_index, inputs);
}

StepResult IouTracker::step(std::int64_t frame_index, std::span<const TrackInput> dets) {
    if (started_ && frame_index <= last_frame_) {
        throw std::invalid_argument("frame " + std::to_string(frame_index) +
                                    " is not after frame " + std::to_string(last_frame_));
    }
    started_ = true;
    last_frame_ = frame_index;

    StepResult result;
    auto retire = [&](Track& t) {
        t.state = TrackState::lost;
        result.lost_ids.push_back(t.id);
        ++lost_count_;
    };

    // Tracks that already exceeded the gap before this frame (skipped frame
    // indices) cannot be matched any more.
    for (auto& t : tracks_) {
        if (frame_index - 1 - t.last_seen > cfg_.max_gap) {
            retire(t);
        }
    }
    std::erase_if(tracks_, [](const Track& t) { return t.state == TrackState::lost; });

    const Association assoc = associate(tracks_, dets, cfg_.iou_match_threshold);

    for (const auto& [ti, di] : assoc.matches) {
        Track& t = tracks_[ti];
        const TrackObservation prev = t.last();
        t.boxes.push_back({frame_index, dets[di].bbox, dets[di].confidence});
        if (static_cast<int>(t.boxes.size()) > cfg_.history_length) {
            t.boxes.pop_front();
        }
        t.hits = (prev.frame_index == frame_index - 1) ? t.hits + 1 : 1;
        t.last_seen = frame_index;
        t.misses = 0;
        if (t.state == TrackState::tentative && t.hits >= cfg_.min_hits) {
            t.state = TrackState::active;
        }
        result.snapshots.push_back({frame_index, t.id, t.class_name, dets[di].bbox,
                                    dets[di].confidence, t.state, prev.frame_index, prev.bbox});
    }

    for (std::size_t ti : assoc.unmatched_tracks) {
        Track& t = tracks_[ti];
        t.misses = static_cast<int>(frame_index - t.last_seen);
        t.hits = 0;
        if (t.misses > cfg_.max_gap) {
            retire(t);
        }
    }
    std::erase_if(tracks_, [](const Track& t) { return t.state == TrackState::lost; });

    for (std::size_t di : assoc.unmatched_dets) {
        Track t;
        t.id = next_id_++;
        t.class_name = dets[di].class_name;
        t.boxes.push_back({frame_index, dets[di].bbox, dets[di].confidence});
        t.last_seen = frame_index;
        t.hits = 1;
        t.state = t.hits >= cfg_.min_hits ? TrackState::active : TrackState::tentative;
        result.snapshots.push_back({frame_index, t.id, t.class_name, dets[di].bbox,
                                    dets[di].confidence, t.state, -1, dets[di].bbox});
        tracks_.push_back(std::move(t));
    }

    // New ids are appended, so tracks_ stays sorted by id.
    std::sort(result.snapshots.begin(), result.snapshots.end(),
              [](const TrackSnapshot& a, const TrackSnapshot& b) { return a.track_id < b.track_id; });
    return result;
}

std::vector<Track> IouTracker::active_tracks() const {
    std::vector<Track> out;
    std::copy_if(tracks_.begin(), tracks_.end(), std::back_inserter(out),
                 [](const Track& t) { return t.state == TrackState::active; });
    return out;
}

}  // namespace spectra
