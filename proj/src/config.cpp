// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "spectra/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "spectra/detio.hpp"

namespace spectra {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v) {
    double out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
        throw std::invalid_argument("expected a number, got '" + v + "'");
    }
    return out;
}

int to_int(const std::string& v) {
    int out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
        throw std::invalid_argument("expected an integer, got '" + v + "'");
    }
    return out;
}

bool to_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("expected true or false, got '" + v + "'");
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

struct Key {
    std::string name;
    std::function<void(PipelineConfig&, const std::string&)> set;
    std::function<std::string(const PipelineConfig&)> get;
};

#define SPECTRA_NUM_KEY(name, field)                                                       \
    Key {                                                                                  \
        name, [](PipelineConfig& c, const std::string& v) { c.field = to_double(v); },   \
            [](const PipelineConfig& c) { return format_exact(c.field); }                \
    }
#define SPECTRA_INT_KEY(name, field)                                                       \
    Key {                                                                                  \
        name, [](PipelineConfig& c, const std::string& v) { c.field = to_int(v); },      \
            [](const PipelineConfig& c) { return std::to_string(c.field); }              \
    }
#define SPECTRA_BOOL_KEY(name, field)                                                      \
    Key {                                                                                  \
        name, [](PipelineConfig& c, const std::string& v) { c.field = to_bool(v); },     \
            [](const PipelineConfig& c) { return fmt_bool(c.field); }                     \
    }
#define SPECTRA_PATH_KEY(name, field)                                                      \
    Key {                                                                                  \
        name, [](PipelineConfig& c, const std::string& v) { c.field = v; },              \
            [](const PipelineConfig& c) { return c.field.string(); }                      \
    }

const std::vector<Key>& keys() {
    static const std::vector<Key> table = {
        {"task",
         [](PipelineConfig& c, const std::string& v) {
             const auto t = parse_task(v);
             if (!t) throw std::invalid_argument("task must be drone or payload, got '" + v + "'");
             c.task = *t;
         },
         [](const PipelineConfig& c) { return std::string(to_string(c.task)); }},
        {"fusion.mode",
         [](PipelineConfig& c, const std::string& v) {
             if (v == "auto") {
                 c.fusion_mode.reset();
                 return;
             }
             const auto m = parse_fusion_mode(v);
             if (!m) throw std::invalid_argument("fusion.mode must be auto, both, rgb_only or ir_only");
             c.fusion_mode = *m;
         },
         [](const PipelineConfig& c) {
             return c.fusion_mode ? std::string(to_string(*c.fusion_mode)) : std::string("auto");
         }},
        {"fusion.cross_modality_nms",
         [](PipelineConfig& c, const std::string& v) {
             if (v == "auto") {
                 c.cross_modality_nms.reset();
             } else {
                 c.cross_modality_nms = to_bool(v);
             }
         },
         [](const PipelineConfig& c) {
             return c.cross_modality_nms ? fmt_bool(*c.cross_modality_nms) : std::string("auto");
         }},
        SPECTRA_NUM_KEY("fusion.conf_threshold_rgb", fusion.conf_threshold_rgb),
        SPECTRA_NUM_KEY("fusion.conf_threshold_ir", fusion.conf_threshold_ir),
        SPECTRA_NUM_KEY("fusion.weight_rgb", fusion.weight_rgb),
        SPECTRA_NUM_KEY("fusion.weight_ir", fusion.weight_ir),
        SPECTRA_NUM_KEY("fusion.nms_iou_threshold", fusion.nms_iou_threshold),
        SPECTRA_BOOL_KEY("fusion.ir_nms", fusion.ir_nms),
        SPECTRA_NUM_KEY("fusion.harmful_conf_threshold", fusion.harmful_conf_threshold),
        SPECTRA_NUM_KEY("tracker.iou_match_threshold", tracker.iou_match_threshold),
        SPECTRA_INT_KEY("tracker.max_gap", tracker.max_gap),
        SPECTRA_INT_KEY("tracker.min_hits", tracker.min_hits),
        SPECTRA_INT_KEY("tracker.history_length", tracker.history_length),
        SPECTRA_INT_KEY("direction.history_length", direction.history_length),
        SPECTRA_INT_KEY("direction.cue_window", direction.cue_window),
        SPECTRA_INT_KEY("direction.smooth_window", direction.smooth_window),
        SPECTRA_INT_KEY("direction.grid", direction.grid),
        SPECTRA_INT_KEY("direction.block", direction.block),
        SPECTRA_INT_KEY("direction.search_radius", direction.search_radius),
        SPECTRA_NUM_KEY("direction.eps_area", direction.eps_area),
        SPECTRA_NUM_KEY("direction.eps_scale", direction.eps_scale),
        SPECTRA_NUM_KEY("direction.eps_velocity", direction.eps_velocity),
        SPECTRA_NUM_KEY("direction.v_sat", direction.v_sat),
        SPECTRA_NUM_KEY("direction.texture_floor", direction.texture_floor),
        SPECTRA_INT_KEY("direction.min_valid_points", direction.min_valid_points),
        SPECTRA_NUM_KEY("direction.min_area", direction.min_area),
        SPECTRA_NUM_KEY("direction.flow_weight", direction.flow_weight),
        SPECTRA_NUM_KEY("direction.centroid_weight", direction.centroid_weight),
        SPECTRA_PATH_KEY("input.rgb_log", rgb_log),
        SPECTRA_PATH_KEY("input.ir_log", ir_log),
        SPECTRA_PATH_KEY("input.frames_dir", frames_dir),
        SPECTRA_PATH_KEY("output.csv", out_csv),
        SPECTRA_PATH_KEY("output.metrics", metrics),
        SPECTRA_INT_KEY("pipeline.queue_capacity", queue_capacity),
        SPECTRA_INT_KEY("pipeline.workers", workers),
    };
    return table;
}

#undef SPECTRA_NUM_KEY
#undef SPECTRA_INT_KEY
#undef SPECTRA_BOOL_KEY
#undef SPECTRA_PATH_KEY

}  // namespace

FusionConfig PipelineConfig::effective_fusion(ModalitySet available) const {
    FusionConfig f = fusion;
    f.mode = fusion_mode.value_or(mode_for(available));
    f.cross_modality_nms = cross_modality_nms.value_or(task == Task::payload_identification);
    return f;
}

void PipelineConfig::validate() const {
    fusion.validate();
    tracker.validate();
    direction.validate();
    if (queue_capacity < 1) throw std::invalid_argument("pipeline.queue_capacity must be >= 1");
    if (workers < 1) throw std::invalid_argument("pipeline.workers must be >= 1");
}

void apply_config_text(const std::string& text, PipelineConfig& cfg) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected 'key = value'", line_no);
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto& table = keys();
        const auto it = std::find_if(table.begin(), table.end(), [&](const Key& k) { return k.name == key; });
        if (it == table.end()) {
            throw ParseError("unknown config key '" + key + "'", line_no);
        }
        try {
            it->set(cfg, value);
        } catch (const std::invalid_argument& e) {
            throw ParseError(key + ": " + e.what(), line_no);
        }
    }
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    PipelineConfig cfg;
    apply_config_text(ss.str(), cfg);
    return cfg;
}

std::string dump_config(const PipelineConfig& cfg) {
    std::string out;
    for (const auto& k : keys()) {
        out += k.name + " = " + k.get(cfg) + "\n";
    }
    return out;
}

}  // namespace spectra
