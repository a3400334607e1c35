// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "spectra/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <fstream>
#include <future>
#include <thread>

#include "json.hpp"
#include "spectra/bounded_queue.hpp"
#include "spectra/log.hpp"

namespace spectra {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

Pipeline::Pipeline(const PipelineConfig& cfg, ModalitySet available)
    : cfg_(cfg),
      policy_(resolve_policy(cfg.task, available)),
      fusion_(cfg.effective_fusion(available)),
      tracker_(cfg.tracker) {
    cfg_.validate();
    fusion_.validate();
}

FusedFrame Pipeline::fuse(const FrameDetections& frame, std::optional<GrayImage> image) const {
    const auto t0 = Clock::now();
    FusedFrame out;
    out.frame_index = frame.frame_index;
    out.detections = fuse_decision_layer(frame, fusion_, &policy_);
    out.image = std::move(image);
    out.fusion_ms = ms_since(t0);
    return out;
}

FrameOutput Pipeline::track(FusedFrame frame) {
    FrameOutput out;
    out.frame_index = frame.frame_index;
    out.times.fusion_ms = frame.fusion_ms;

    auto t0 = Clock::now();
    StepResult step = tracker_.step(frame.frame_index, std::span<const FusedDetection>(frame.detections));
    for (int id : step.lost_ids) {
        estimators_.erase(id);
    }
    out.times.tracking_ms = ms_since(t0);

    t0 = Clock::now();
    const GrayImage* cur = frame.image ? &*frame.image : nullptr;
    const GrayImage* prev =
        (prev_image_ && prev_image_frame_ == frame.frame_index - 1) ? &*prev_image_ : nullptr;

    const std::size_t n = step.snapshots.size();
    std::vector<DirectionEstimator*> est(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = estimators_.try_emplace(step.snapshots[i].track_id, cfg_.direction).first;
        est[i] = &it->second;
    }
    std::vector<DirectionEstimate> dirs(n);
    std::vector<std::uint64_t> work(n, 0);
    auto run = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::uint64_t before = est[i]->flow_candidates();
            dirs[i] = est[i]->update(frame.frame_index, step.snapshots[i].bbox, prev, cur);
            work[i] = est[i]->flow_candidates() - before;
        }
    };
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg_.workers), n);
    if (workers <= 1) {
        run(0, n);
    } else {
        // Each estimator is touched by exactly one task; results land in
        // snapshot order, so output does not depend on scheduling.
        std::vector<std::future<void>> tasks;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t begin = 0; begin < n; begin += chunk) {
            tasks.push_back(std::async(std::launch::async, run, begin, std::min(n, begin + chunk)));
        }
        for (auto& t : tasks) t.get();
    }
    for (std::uint64_t w : work) flow_candidates_ += w;
    out.times.direction_ms = ms_since(t0);

    out.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = step.snapshots[i];
        out.rows.push_back({s.frame_index, s.track_id, s.class_name, s.bbox, s.confidence,
                            dirs[i].label(), dirs[i].confidence});
    }
    if (cfg_.task == Task::payload_identification) {
        out.payload = classify_payload_or(frame.detections, fusion_.harmful_conf_threshold);
    }

    if (frame.image) {
        prev_image_ = std::move(frame.image);
        prev_image_frame_ = frame.frame_index;
    }
    return out;
}

FrameOutput Pipeline::process(const FrameDetections& frame, std::optional<GrayImage> image) {
    return track(fuse(frame, std::move(image)));
}

std::vector<FrameDetections> assemble_frames(std::span<const FrameDetections> logged,
                                             ModalitySet available, std::int64_t last_frame) {
    std::vector<FrameDetections> frames;
    frames.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, last_frame + 1)));
    for (std::int64_t f = 0; f <= last_frame; ++f) {
        FrameDetections fd;
        fd.frame_index = f;
        if (available.rgb) fd.rgb.emplace();
        if (available.ir) fd.ir.emplace();
        frames.push_back(std::move(fd));
    }
    for (const auto& src : logged) {
        if (src.frame_index > last_frame) continue;
        auto& dst = frames[static_cast<std::size_t>(src.frame_index)];
        for (Modality m : {Modality::RGB, Modality::IR}) {
            if (!src.of(m)) continue;
            if (!available.has(m)) {
                throw std::invalid_argument("frame " + std::to_string(src.frame_index) + " has " +
                                            std::string(to_string(m)) +
                                            " records but no log was given for that modality");
            }
            dst.of(m)->insert(dst.of(m)->end(), src.of(m)->begin(), src.of(m)->end());
        }
    }
    return frames;
}

std::string summary_json(const PipelineSummary& s) {
    nlohmann::json j;
    j["frames"] = s.frames;
    j["tracks_created"] = s.tracks_created;
    j["rows"] = s.rows;
    j["mean_latency_ms"] = s.mean_latency_ms;
    j["flow_enabled"] = s.flow_enabled;
    j["task"] = std::string(to_string(s.policy.task));
    j["available"] = {{"RGB", s.policy.available.rgb}, {"IR", s.policy.available.ir}};
    j["surrogate_policy"] = {{"RGB", std::string(to_string(s.policy.rgb_action))},
                             {"IR", std::string(to_string(s.policy.ir_action))}};
    j["fusion"] = {{"mode", std::string(to_string(s.fusion.mode))},
                   {"cross_modality_nms", s.fusion.cross_modality_nms},
                   {"ir_nms", s.fusion.ir_nms},
                   {"conf_threshold_rgb", s.fusion.conf_threshold_rgb},
                   {"conf_threshold_ir", s.fusion.conf_threshold_ir},
                   {"weight_rgb", s.fusion.weight_rgb},
                   {"weight_ir", s.fusion.weight_ir},
                   {"nms_iou_threshold", s.fusion.nms_iou_threshold}};
    if (s.policy.task == Task::payload_identification) {
        j["harmful_frames"] = s.harmful_frames;
    }
    return j.dump(2);
}

PipelineSummary run_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    const ModalitySet available = cfg.available();
    if (available.empty()) {
        throw std::invalid_argument("no detection log given; pass --rgb-log and/or --ir-log");
    }
    if (cfg.out_csv.empty()) {
        throw std::invalid_argument("no output CSV given; pass --out");
    }
    for (const auto* p : {&cfg.rgb_log, &cfg.ir_log}) {
        if (!p->empty() && !std::filesystem::is_regular_file(*p)) {
            throw std::runtime_error("input log not found: " + p->string());
        }
    }

    std::vector<FrameDetections> logged;
    auto merge = [&](const std::filesystem::path& path) {
        auto frames = read_detection_log(path);
        logged.insert(logged.end(), std::make_move_iterator(frames.begin()),
                      std::make_move_iterator(frames.end()));
    };
    if (!cfg.rgb_log.empty()) merge(cfg.rgb_log);
    if (!cfg.ir_log.empty() &&
        (cfg.rgb_log.empty() || !std::filesystem::equivalent(cfg.rgb_log, cfg.ir_log))) {
        merge(cfg.ir_log);
    }

    std::map<std::int64_t, std::filesystem::path> images;
    bool flow = false;
    if (!cfg.frames_dir.empty()) {
        if (std::filesystem::is_directory(cfg.frames_dir)) {
            images = index_frames(cfg.frames_dir);
            flow = true;
        } else {
            log_warn("frames directory " + cfg.frames_dir.string() +
                     " not found; sparse flow cue disabled");
        }
    }

    std::int64_t last_frame = -1;
    for (const auto& f : logged) last_frame = std::max(last_frame, f.frame_index);
    if (!images.empty()) last_frame = std::max(last_frame, images.rbegin()->first);
    const auto frames = assemble_frames(logged, available, last_frame);

    Pipeline pipeline(cfg, available);
    PipelineSummary summary;
    summary.policy = pipeline.policy();
    summary.fusion = pipeline.fusion_config();
    summary.flow_enabled = flow;
    log_info("task " + std::string(to_string(cfg.task)) + ", RGB " +
             std::string(to_string(summary.policy.rgb_action)) + ", IR " +
             std::string(to_string(summary.policy.ir_action)) + ", fusion " +
             std::string(to_string(summary.fusion.mode)));

    std::filesystem::path partial = cfg.out_csv;
    partial += ".partial";
    std::ofstream csv(partial);
    if (!csv) {
        throw std::runtime_error("cannot write " + partial.string());
    }
    write_tracking_csv_header(csv);

    BoundedQueue<FusedFrame> queue(static_cast<std::size_t>(cfg.queue_capacity));
    std::exception_ptr producer_error;
    std::thread producer([&] {
        try {
            for (const auto& fd : frames) {
                std::optional<GrayImage> img;
                if (auto it = images.find(fd.frame_index); it != images.end()) {
                    img = read_pgm(it->second);
                }
                if (!queue.push(pipeline.fuse(fd, std::move(img)))) break;
            }
        } catch (...) {
            producer_error = std::current_exception();
        }
        queue.close();
    });

    double latency_sum = 0.0;
    try {
        while (auto item = queue.pop()) {
            FrameOutput out = pipeline.track(std::move(*item));
            for (const auto& row : out.rows) write_tracking_row(csv, row);
            summary.rows += out.rows.size();
            latency_sum += out.times.total_ms();
            ++summary.frames;
            if (out.payload == PayloadFlag::harmful) summary.harmful_frames.push_back(out.frame_index);
        }
    } catch (...) {
        queue.close();
        producer.join();
        csv.close();
        std::filesystem::remove(partial);
        throw;
    }
    producer.join();
    if (producer_error) {
        csv.close();
        std::filesystem::remove(partial);
        std::rethrow_exception(producer_error);
    }
    csv.close();
    if (!csv) {
        std::filesystem::remove(partial);
        throw std::runtime_error("tracking CSV write failed");
    }
    std::filesystem::rename(partial, cfg.out_csv);

    summary.tracks_created = pipeline.tracker().tracks_created();
    summary.mean_latency_ms = summary.frames > 0 ? latency_sum / static_cast<double>(summary.frames) : 0.0;

    if (!cfg.metrics.empty()) {
        std::ofstream m(cfg.metrics);
        if (!m) throw std::runtime_error("cannot write " + cfg.metrics.string());
        m << summary_json(summary) << '\n';
    }
    return summary;
}

}  // namespace spectra
