// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "spectra/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "spectra/rng.hpp"

namespace spectra {

namespace {

constexpr double kBackground = 16.0;
constexpr double kPeak = 240.0;
constexpr int kDitherAmplitude = 2;
constexpr int kTextureAmplitude = 8;

int end_frame(const ScenarioSpec& spec, const ObjectSpec& o) {
    return o.despawn < 0 ? spec.frame_count : std::min(o.despawn, spec.frame_count);
}

std::vector<std::string> class_table(const ScenarioSpec& spec) {
    std::vector<std::string> names;
    for (const auto& o : spec.objects) {
        if (std::find(names.begin(), names.end(), o.class_name) == names.end()) {
            names.push_back(o.class_name);
        }
    }
    if (names.empty()) {
        names.push_back("drone");
    }
    return names;
}

int class_id(const std::vector<std::string>& table, const std::string& name) {
    return static_cast<int>(std::find(table.begin(), table.end(), name) - table.begin());
}

}  // namespace

void ScenarioSpec::validate() const {
    if (frame_count < 0) throw std::invalid_argument("frame_count must be >= 0");
    if (dims.width <= 0 || dims.height <= 0) throw std::invalid_argument("frame dims must be positive");
    if (modalities.empty()) throw std::invalid_argument("scenario needs at least one modality");
    const auto& n = noise;
    if (n.center_jitter < 0 || n.size_jitter < 0 || n.false_positive_rate < 0) {
        throw std::invalid_argument("noise rates must be >= 0");
    }
    if (n.dropout < 0 || n.dropout > 1) throw std::invalid_argument("dropout must lie in [0,1]");
    if (!(n.conf_min >= 0 && n.conf_min <= n.conf_max && n.conf_max <= 1)) {
        throw std::invalid_argument("confidence range must satisfy 0 <= min <= max <= 1");
    }
    for (std::size_t i = 0; i < objects.size(); ++i) {
        const auto& o = objects[i];
        if (o.class_name.empty() || o.class_name.find_first_of(",\t") != std::string::npos) {
            throw std::invalid_argument("object " + std::to_string(i) + " has an invalid class name");
        }
        if (!(o.start_area > 0) || !(o.aspect > 0) || o.area_growth < -1.0) {
            throw std::invalid_argument("object " + std::to_string(i) + " has invalid size parameters");
        }
        if (o.spawn < 0) throw std::invalid_argument("object " + std::to_string(i) + " spawns before frame 0");
        for (int f = o.spawn; f < end_frame(*this, o); ++f) {
            const auto box = true_box(*this, i, f);
            if (!box || !inside(*box, dims)) {
                throw std::invalid_argument("object " + std::to_string(i) + " leaves the frame at frame " +
                                            std::to_string(f));
            }
        }
    }
}

std::optional<BBox> true_box(const ScenarioSpec& spec, std::size_t i, int frame) {
    const auto& o = spec.objects.at(i);
    if (frame < o.spawn || frame >= end_frame(spec, o)) {
        return std::nullopt;
    }
    const double t = frame - o.spawn;
    const double a = o.start_area * (1.0 + o.area_growth * t);
    if (!(a > 0.0)) {
        return std::nullopt;
    }
    const double h = std::sqrt(a / o.aspect);
    const double w = a / h;
    const Point c{o.start.x + o.velocity.x * t, o.start.y + o.velocity.y * t};
    return BBox{c.x - w / 2.0, c.y - h / 2.0, c.x + w / 2.0, c.y + h / 2.0};
}

Scenario generate(const ScenarioSpec& spec) {
    spec.validate();
    const auto classes = class_table(spec);
    const auto& noise = spec.noise;

    Scenario out;
    out.truth.resize(static_cast<std::size_t>(spec.frame_count));
    out.detections.resize(static_cast<std::size_t>(spec.frame_count));

    for (int f = 0; f < spec.frame_count; ++f) {
        auto& truth = out.truth[static_cast<std::size_t>(f)];
        for (std::size_t i = 0; i < spec.objects.size(); ++i) {
            if (auto box = true_box(spec, i, f)) {
                truth.push_back({static_cast<int>(i) + 1, spec.objects[i].class_name, *box});
            }
        }

        auto& frame = out.detections[static_cast<std::size_t>(f)];
        frame.frame_index = f;
        for (Modality m : {Modality::RGB, Modality::IR}) {
            if (!spec.modalities.has(m)) {
                continue;
            }
            auto& list = frame.of(m).emplace();
            const auto mod_key = static_cast<std::uint64_t>(m);
            for (const auto& obj : truth) {
                CounterRng rng(spec.seed, stream_key({1, mod_key, static_cast<std::uint64_t>(f),
                                                      static_cast<std::uint64_t>(obj.object_id)}));
                if (rng.bernoulli(noise.dropout)) {
                    continue;
                }
                DetectionRecord rec;
                rec.frame_index = f;
                rec.modality = m;
                rec.class_name = obj.class_name;
                rec.class_id = class_id(classes, obj.class_name);
                rec.confidence = rng.uniform(noise.conf_min, noise.conf_max);
                rec.bbox = obj.bbox;
                if (noise.center_jitter > 0.0 || noise.size_jitter > 0.0) {
                    const Point c = centroid(obj.bbox);
                    const double dx = rng.normal(0.0, noise.center_jitter);
                    const double dy = rng.normal(0.0, noise.center_jitter);
                    const double s = std::max(0.1, 1.0 + rng.normal(0.0, noise.size_jitter));
                    rec.bbox = box_around({c.x + dx, c.y + dy}, obj.bbox.width() * s,
                                          obj.bbox.height() * s);
                }
                list.push_back(std::move(rec));
            }

            CounterRng fp(spec.seed, stream_key({2, mod_key, static_cast<std::uint64_t>(f)}));
            const int count = fp.poisson(noise.false_positive_rate);
            for (int k = 0; k < count; ++k) {
                DetectionRecord rec;
                rec.frame_index = f;
                rec.modality = m;
                rec.class_id = static_cast<int>(fp.uniform_int(0, static_cast<std::int64_t>(classes.size()) - 1));
                rec.class_name = classes[static_cast<std::size_t>(rec.class_id)];
                rec.confidence = fp.uniform(noise.conf_min, noise.conf_max);
                const double side = fp.uniform(8.0, 24.0);
                const double cx = fp.uniform(side / 2.0, spec.dims.width - side / 2.0);
                const double cy = fp.uniform(side / 2.0, spec.dims.height - side / 2.0);
                rec.bbox = box_around({cx, cy}, side, side);
                list.push_back(std::move(rec));
            }
        }
    }
    return out;
}

std::vector<GroundTruthBox> flatten(const GroundTruth& truth) {
    std::vector<GroundTruthBox> out;
    for (std::size_t f = 0; f < truth.size(); ++f) {
        for (const auto& o : truth[f]) {
            out.push_back({static_cast<std::int64_t>(f), o.object_id, o.class_name, o.bbox});
        }
    }
    return out;
}

namespace {

int hashed_offset(std::uint64_t h, int amplitude) {
    return static_cast<int>(h % static_cast<std::uint64_t>(2 * amplitude + 1)) - amplitude;
}

std::uint64_t cell_key(std::int64_t x, std::int64_t y) {
    return (static_cast<std::uint64_t>(y) << 32) ^ static_cast<std::uint32_t>(x);
}

}  // namespace

GrayImage render_frame(std::span<const TruthObject> objects, FrameDims dims, std::uint64_t seed) {
    std::vector<double> field(static_cast<std::size_t>(dims.width) * dims.height, kBackground);
    for (const auto& o : objects) {
        const Point c = centroid(o.bbox);
        const double sigma = o.bbox.width() / 4.0;
        const double reach = 4.0 * sigma;
        const int x0 = std::max(0, static_cast<int>(std::floor(c.x - reach)));
        const int x1 = std::min(dims.width - 1, static_cast<int>(std::ceil(c.x + reach)));
        const int y0 = std::max(0, static_cast<int>(std::floor(c.y - reach)));
        const int y1 = std::min(dims.height - 1, static_cast<int>(std::ceil(c.y + reach)));
        const double inv = 1.0 / (2.0 * sigma * sigma);
        // Surface texture is anchored to the box corner so it travels with
        // the object under integer translation.
        const auto ax = static_cast<std::int64_t>(std::floor(o.bbox.x1));
        const auto ay = static_cast<std::int64_t>(std::floor(o.bbox.y1));
        const std::uint64_t tex = mix64(seed ^ mix64(0x7E47ULL + static_cast<std::uint64_t>(o.object_id)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                // Pixel centres sit at half-integer coordinates.
                const double dx = x + 0.5 - c.x;
                const double dy = y + 0.5 - c.y;
                const double r2 = dx * dx + dy * dy;
                const int t = hashed_offset(mix64(tex + cell_key(x - ax, y - ay)), kTextureAmplitude);
                field[static_cast<std::size_t>(y) * dims.width + x] +=
                    (kPeak - kBackground) * std::exp(-r2 * inv) + t * std::exp(-r2 * inv / 4.0);
            }
        }
    }

    GrayImage img(dims.width, dims.height);
    const std::uint64_t base = mix64(seed ^ 0xD17E4ULL);
    for (int y = 0; y < dims.height; ++y) {
        for (int x = 0; x < dims.width; ++x) {
            const int dither = hashed_offset(mix64(base + cell_key(x, y)), kDitherAmplitude);
            const double v = field[static_cast<std::size_t>(y) * dims.width + x] + dither;
            img.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }
    return img;
}

ScenarioSpec rotate_quarter(const ScenarioSpec& spec) {
    ScenarioSpec out = spec;
    out.dims = {spec.dims.height, spec.dims.width};
    for (auto& o : out.objects) {
        o.start = {spec.dims.height - o.start.y, o.start.x};
        o.velocity = {-o.velocity.y, o.velocity.x};
        o.aspect = 1.0 / o.aspect;
    }
    return out;
}

ScenarioSpec mirror_horizontal(const ScenarioSpec& spec) {
    ScenarioSpec out = spec;
    for (auto& o : out.objects) {
        o.start.x = spec.dims.width - o.start.x;
        o.velocity.x = -o.velocity.x;
    }
    return out;
}

Compass true_heading(const ObjectSpec& obj) {
    if (obj.velocity.norm() == 0.0) {
        return Compass::none;
    }
    return compass_for_bearing(bearing_deg(obj.velocity));
}

// ---------------------------------------------------------------------------
// JSON schema

namespace {

using nlohmann::json;

template <typename T>
void read_opt(const json& j, const char* key, T& dst) {
    if (auto it = j.find(key); it != j.end()) {
        dst = it->get<T>();
    }
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& [key, _] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            throw std::invalid_argument("unknown key '" + key + "' in " + where);
        }
    }
}

}  // namespace

ScenarioSpec parse_scenario_json(const std::string& text) {
    ScenarioSpec spec;
    try {
        const json j = json::parse(text);
        check_keys(j, {"frame_count", "width", "height", "seed", "modalities", "render_frames", "noise", "objects"},
                   "scenario");
        read_opt(j, "frame_count", spec.frame_count);
        read_opt(j, "width", spec.dims.width);
        read_opt(j, "height", spec.dims.height);
        read_opt(j, "seed", spec.seed);
        read_opt(j, "render_frames", spec.render_frames);
        if (auto it = j.find("modalities"); it != j.end()) {
            spec.modalities = {};
            for (const auto& m : *it) {
                const auto mod = parse_modality(m.get<std::string>());
                if (!mod) throw std::invalid_argument("unknown modality " + m.dump());
                (*mod == Modality::RGB ? spec.modalities.rgb : spec.modalities.ir) = true;
            }
        }
        if (auto it = j.find("noise"); it != j.end()) {
            check_keys(*it, {"center_jitter", "size_jitter", "dropout", "false_positive_rate", "conf_min", "conf_max"},
                       "noise");
            read_opt(*it, "center_jitter", spec.noise.center_jitter);
            read_opt(*it, "size_jitter", spec.noise.size_jitter);
            read_opt(*it, "dropout", spec.noise.dropout);
            read_opt(*it, "false_positive_rate", spec.noise.false_positive_rate);
            read_opt(*it, "conf_min", spec.noise.conf_min);
            read_opt(*it, "conf_max", spec.noise.conf_max);
        }
        if (auto it = j.find("objects"); it != j.end()) {
            for (const auto& jo : *it) {
                check_keys(jo, {"class", "x", "y", "vx", "vy", "area", "growth", "aspect", "spawn", "despawn"},
                           "object");
                ObjectSpec o;
                read_opt(jo, "class", o.class_name);
                read_opt(jo, "x", o.start.x);
                read_opt(jo, "y", o.start.y);
                read_opt(jo, "vx", o.velocity.x);
                read_opt(jo, "vy", o.velocity.y);
                read_opt(jo, "area", o.start_area);
                read_opt(jo, "growth", o.area_growth);
                read_opt(jo, "aspect", o.aspect);
                read_opt(jo, "spawn", o.spawn);
                read_opt(jo, "despawn", o.despawn);
                spec.objects.push_back(std::move(o));
            }
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("scenario spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario_json(ss.str());
}

std::string scenario_to_json(const ScenarioSpec& spec) {
    json j;
    j["frame_count"] = spec.frame_count;
    j["width"] = spec.dims.width;
    j["height"] = spec.dims.height;
    j["seed"] = spec.seed;
    j["render_frames"] = spec.render_frames;
    j["modalities"] = json::array();
    if (spec.modalities.rgb) j["modalities"].push_back("RGB");
    if (spec.modalities.ir) j["modalities"].push_back("IR");
    j["noise"] = {{"center_jitter", spec.noise.center_jitter},
                  {"size_jitter", spec.noise.size_jitter},
                  {"dropout", spec.noise.dropout},
                  {"false_positive_rate", spec.noise.false_positive_rate},
                  {"conf_min", spec.noise.conf_min},
                  {"conf_max", spec.noise.conf_max}};
    j["objects"] = json::array();
    for (const auto& o : spec.objects) {
        j["objects"].push_back({{"class", o.class_name},
                                {"x", o.start.x},
                                {"y", o.start.y},
                                {"vx", o.velocity.x},
                                {"vy", o.velocity.y},
                                {"area", o.start_area},
                                {"growth", o.area_growth},
                                {"aspect", o.aspect},
                                {"spawn", o.spawn},
                                {"despawn", o.despawn}});
    }
    return j.dump(2);
}

}  // namespace spectra
