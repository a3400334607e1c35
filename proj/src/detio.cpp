// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "spectra/detio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>

namespace spectra {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view strip_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') {
        s.remove_suffix(1);
    }
    return s;
}

bool blank_or_comment(std::string_view s) {
    const auto first = std::find_if(s.begin(), s.end(),
                                    [](unsigned char c) { return !std::isspace(c); });
    return first == s.end() || *first == '#';
}

template <typename T>
T parse_number(std::string_view field, std::string_view name, std::size_t line_no) {
    T value{};
    const char* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc{} || ptr != end || field.empty()) {
        throw ParseError("bad " + std::string(name) + " '" + std::string(field) + "'", line_no);
    }
    return value;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

void check_name(std::string_view name, std::size_t line_no) {
    if (name.empty()) {
        throw ParseError("empty class name", line_no);
    }
    if (name.find(',') != std::string_view::npos) {
        throw ParseError("class name may not contain ','", line_no);
    }
}

std::string fixed3(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 3);
    if (ec != std::errc{}) {
        throw std::runtime_error("number formatting failed");
    }
    std::string s(buf, ptr);
    if (s == "-0.000") {
        s = "0.000";
    }
    return s;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

std::string_view to_string(Modality m) { return m == Modality::RGB ? "RGB" : "IR"; }

std::optional<Modality> parse_modality(std::string_view s) {
    if (s == "RGB") return Modality::RGB;
    if (s == "IR") return Modality::IR;
    return std::nullopt;
}

std::string format_exact(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buf, ptr);
}

void validate(const DetectionRecord& rec) {
    if (rec.frame_index < 0) {
        throw std::invalid_argument("negative frame index");
    }
    if (!(rec.confidence >= 0.0 && rec.confidence <= 1.0)) {
        throw std::invalid_argument("confidence outside [0,1]");
    }
    if (rec.class_name.empty()) {
        throw std::invalid_argument("empty class name");
    }
    if (!is_valid(rec.bbox)) {
        throw std::invalid_argument("invalid box " + to_string(rec.bbox));
    }
}

std::vector<FrameDetections> parse_detection_log(std::istream& in) {
    std::vector<FrameDetections> frames;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = strip_cr(raw);
        if (blank_or_comment(line)) {
            continue;
        }
        const auto f = split(line, '\t');
        if (f.size() != 9) {
            throw ParseError("expected 9 tab-separated fields, got " + std::to_string(f.size()),
                             line_no);
        }
        DetectionRecord rec;
        rec.frame_index = parse_number<std::int64_t>(f[0], "frame index", line_no);
        if (rec.frame_index < 0) {
            throw ParseError("negative frame index", line_no);
        }
        const auto mod = parse_modality(f[1]);
        if (!mod) {
            throw ParseError("unknown modality '" + std::string(f[1]) + "'", line_no);
        }
        rec.modality = *mod;
        rec.class_id = parse_number<int>(f[2], "class id", line_no);
        check_name(f[3], line_no);
        rec.class_name = std::string(f[3]);
        rec.confidence = parse_number<double>(f[4], "confidence", line_no);
        if (!(rec.confidence >= 0.0 && rec.confidence <= 1.0)) {
            throw ParseError("confidence " + std::string(f[4]) + " outside [0,1]", line_no);
        }
        rec.bbox = {parse_number<double>(f[5], "x1", line_no), parse_number<double>(f[6], "y1", line_no),
                    parse_number<double>(f[7], "x2", line_no), parse_number<double>(f[8], "y2", line_no)};
        if (!is_valid(rec.bbox)) {
            throw ParseError("invalid box " + to_string(rec.bbox), line_no);
        }

        if (frames.empty() || frames.back().frame_index < rec.frame_index) {
            frames.push_back(FrameDetections{rec.frame_index, std::nullopt, std::nullopt});
        } else if (frames.back().frame_index > rec.frame_index) {
            throw ParseError("frame index " + std::to_string(rec.frame_index) +
                                 " after frame " + std::to_string(frames.back().frame_index),
                             line_no);
        }
        auto& list = frames.back().of(rec.modality);
        if (!list) {
            list.emplace();
        }
        list->push_back(std::move(rec));
    }
    return frames;
}

std::vector<FrameDetections> read_detection_log(const std::filesystem::path& path) {
    auto in = open_in(path);
    return parse_detection_log(in);
}

void write_detection_log(std::ostream& out, std::span<const FrameDetections> frames) {
    for (const auto& frame : frames) {
        for (const auto* list : {&frame.rgb, &frame.ir}) {
            if (!*list) {
                continue;
            }
            for (const auto& r : **list) {
                out << r.frame_index << '\t' << to_string(r.modality) << '\t' << r.class_id << '\t'
                    << r.class_name << '\t' << format_exact(r.confidence) << '\t'
                    << format_exact(r.bbox.x1) << '\t' << format_exact(r.bbox.y1) << '\t'
                    << format_exact(r.bbox.x2) << '\t' << format_exact(r.bbox.y2) << '\n';
            }
        }
    }
    if (!out) {
        throw std::runtime_error("detection log write failed");
    }
}

void write_detection_log(const std::filesystem::path& path,
                         std::span<const FrameDetections> frames) {
    auto out = open_out(path);
    write_detection_log(out, frames);
}

// ---------------------------------------------------------------------------
// PGM

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string pgm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) {
                return tok;
            }
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

int pgm_int(std::istream& in, std::string_view what) {
    const std::string tok = pgm_token(in);
    if (tok.empty()) {
        throw ParseError("truncated PGM header");
    }
    return parse_number<int>(tok, what, 0);
}

}  // namespace

GrayImage read_pgm(std::istream& in) {
    const std::string magic = pgm_token(in);
    if (magic != "P5" && magic != "P2") {
        throw ParseError("unsupported image format '" + magic + "', expected P5 or P2");
    }
    const int width = pgm_int(in, "width");
    const int height = pgm_int(in, "height");
    const int maxval = pgm_int(in, "maxval");
    if (width <= 0 || height <= 0) {
        throw ParseError("PGM dimensions must be positive");
    }
    if (maxval != 255) {
        throw ParseError("PGM maxval must be 255, got " + std::to_string(maxval));
    }
    GrayImage img(width, height);
    const std::size_t count = img.pixels.size();
    if (magic == "P5") {
        // pgm_token consumed exactly one whitespace byte after maxval.
        in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(count));
        if (static_cast<std::size_t>(in.gcount()) != count) {
            throw ParseError("truncated PGM payload: expected " + std::to_string(count) +
                             " bytes, got " + std::to_string(in.gcount()));
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const std::string tok = pgm_token(in);
            if (tok.empty()) {
                throw ParseError("truncated PGM payload: expected " + std::to_string(count) +
                                 " values, got " + std::to_string(i));
            }
            const int v = parse_number<int>(tok, "pixel", 0);
            if (v < 0 || v > 255) {
                throw ParseError("pixel value " + tok + " outside [0,255]");
            }
            img.pixels[i] = static_cast<std::uint8_t>(v);
        }
        if (!pgm_token(in).empty()) {
            throw ParseError("PGM payload has more values than " + std::to_string(width) + "x" +
                             std::to_string(height));
        }
    }
    return img;
}

GrayImage read_pgm(const std::filesystem::path& path) {
    auto in = open_in(path, std::ios::in | std::ios::binary);
    return read_pgm(in);
}

void write_pgm(std::ostream& out, const GrayImage& img, bool binary) {
    out << (binary ? "P5" : "P2") << '\n' << img.width << ' ' << img.height << "\n255\n";
    if (binary) {
        out.write(reinterpret_cast<const char*>(img.pixels.data()),
                  static_cast<std::streamsize>(img.pixels.size()));
    } else {
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                out << static_cast<int>(img.at(x, y)) << (x + 1 < img.width ? ' ' : '\n');
            }
        }
    }
    if (!out) {
        throw std::runtime_error("PGM write failed");
    }
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img, bool binary) {
    auto out = open_out(path, std::ios::out | std::ios::binary);
    write_pgm(out, img, binary);
}

std::map<std::int64_t, std::filesystem::path> index_frames(const std::filesystem::path& dir) {
    static const std::regex pattern(R"((.+)_([0-9]+)\.pgm)");
    std::map<std::int64_t, std::filesystem::path> frames;
    std::string stem;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        const std::string name = entry.path().filename().string();
        std::smatch m;
        if (!std::regex_match(name, m, pattern)) {
            continue;
        }
        if (stem.empty()) {
            stem = m[1];
        } else if (stem != m[1]) {
            throw ParseError("frames directory mixes stems '" + stem + "' and '" +
                             std::string(m[1]) + "'");
        }
        const auto index = parse_number<std::int64_t>(std::string(m[2]), "frame index", 0);
        if (!frames.emplace(index, entry.path()).second) {
            throw ParseError("duplicate frame index " + std::to_string(index) + " in " +
                             dir.string());
        }
    }
    return frames;
}

std::filesystem::path frame_path(const std::filesystem::path& dir, std::string_view stem,
                                 std::int64_t frame_index) {
    return dir / (std::string(stem) + "_" + std::to_string(frame_index) + ".pgm");
}

// ---------------------------------------------------------------------------
// Tracking CSV

void write_tracking_csv_header(std::ostream& out) { out << kTrackingCsvHeader << '\n'; }

void write_tracking_row(std::ostream& out, const TrackingRow& r) {
    out << r.frame_index << ',' << r.track_id << ',' << r.class_name << ',' << fixed3(r.bbox.x1)
        << ',' << fixed3(r.bbox.y1) << ',' << fixed3(r.bbox.x2) << ',' << fixed3(r.bbox.y2) << ','
        << fixed3(r.confidence) << ',' << r.direction << ',' << fixed3(r.direction_confidence)
        << '\n';
}

void write_tracking_csv(std::ostream& out, std::span<const TrackingRow> rows) {
    write_tracking_csv_header(out);
    for (const auto& r : rows) {
        write_tracking_row(out, r);
    }
    if (!out) {
        throw std::runtime_error("tracking CSV write failed");
    }
}

std::vector<TrackingRow> parse_tracking_csv(std::istream& in) {
    std::vector<TrackingRow> rows;
    std::string raw;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = strip_cr(raw);
        if (blank_or_comment(line)) {
            continue;
        }
        if (!header_seen) {
            if (line != kTrackingCsvHeader) {
                throw ParseError("expected tracking CSV header '" + std::string(kTrackingCsvHeader) +
                                     "'",
                                 line_no);
            }
            header_seen = true;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 10) {
            throw ParseError("expected 10 comma-separated fields, got " + std::to_string(f.size()),
                             line_no);
        }
        TrackingRow r;
        r.frame_index = parse_number<std::int64_t>(f[0], "frame", line_no);
        r.track_id = parse_number<int>(f[1], "track id", line_no);
        check_name(f[2], line_no);
        r.class_name = std::string(f[2]);
        r.bbox = {parse_number<double>(f[3], "x1", line_no), parse_number<double>(f[4], "y1", line_no),
                  parse_number<double>(f[5], "x2", line_no), parse_number<double>(f[6], "y2", line_no)};
        if (!is_valid(r.bbox)) {
            throw ParseError("invalid box " + to_string(r.bbox), line_no);
        }
        r.confidence = parse_number<double>(f[7], "conf", line_no);
        r.direction = std::string(f[8]);
        r.direction_confidence = parse_number<double>(f[9], "dir_conf", line_no);
        rows.push_back(std::move(r));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Ground truth

std::vector<GroundTruthBox> parse_ground_truth(std::istream& in) {
    std::vector<GroundTruthBox> boxes;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = strip_cr(raw);
        if (blank_or_comment(line)) {
            continue;
        }
        const auto f = split(line, '\t');
        if (f.size() != 7) {
            throw ParseError("expected 7 tab-separated ground-truth fields, got " +
                                 std::to_string(f.size()),
                             line_no);
        }
        GroundTruthBox g;
        g.frame_index = parse_number<std::int64_t>(f[0], "frame index", line_no);
        g.object_id = parse_number<int>(f[1], "object id", line_no);
        check_name(f[2], line_no);
        g.class_name = std::string(f[2]);
        g.bbox = {parse_number<double>(f[3], "x1", line_no), parse_number<double>(f[4], "y1", line_no),
                  parse_number<double>(f[5], "x2", line_no), parse_number<double>(f[6], "y2", line_no)};
        if (!is_valid(g.bbox)) {
            throw ParseError("invalid box " + to_string(g.bbox), line_no);
        }
        boxes.push_back(std::move(g));
    }
    return boxes;
}

void write_ground_truth(std::ostream& out, std::span<const GroundTruthBox> boxes) {
    for (const auto& g : boxes) {
        out << g.frame_index << '\t' << g.object_id << '\t' << g.class_name << '\t'
            << format_exact(g.bbox.x1) << '\t' << format_exact(g.bbox.y1) << '\t'
            << format_exact(g.bbox.x2) << '\t' << format_exact(g.bbox.y2) << '\n';
    }
    if (!out) {
        throw std::runtime_error("ground truth write failed");
    }
}

}  // namespace spectra
