// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spectra/geometry.hpp"
#include "spectra/image.hpp"

namespace spectra {

enum class Modality { RGB, IR };

std::string_view to_string(Modality m);
std::optional<Modality> parse_modality(std::string_view s);

struct DetectionRecord {
    std::int64_t frame_index = 0;
    Modality modality = Modality::RGB;
    int class_id = 0;
    std::string class_name;
    double confidence = 0.0;
    BBox bbox;

    friend bool operator==(const DetectionRecord&, const DetectionRecord&) = default;
};

/// Detections of one frame, grouped by modality. A disengaged optional
/// means the modality was not observed at all for this frame; an engaged
/// empty list means it was observed and produced nothing.
struct FrameDetections {
    std::int64_t frame_index = 0;
    std::optional<std::vector<DetectionRecord>> rgb;
    std::optional<std::vector<DetectionRecord>> ir;

    const std::optional<std::vector<DetectionRecord>>& of(Modality m) const {
        return m == Modality::RGB ? rgb : ir;
    }
    std::optional<std::vector<DetectionRecord>>& of(Modality m) {
        return m == Modality::RGB ? rgb : ir;
    }

    friend bool operator==(const FrameDetections&, const FrameDetections&) = default;
};

/// Raised for malformed input files. line() is 1-based, 0 when the error
/// is not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Detection log: one TAB-separated record per line,
//   frame_index modality class_id class_name confidence x1 y1 x2 y2
// '#' starts a comment line. Frames must be non-decreasing.
std::vector<FrameDetections> parse_detection_log(std::istream& in);
std::vector<FrameDetections> read_detection_log(const std::filesystem::path& path);

/// Writes every record of every frame. Engaged-but-empty modality lists
/// have no textual form, so they read back as disengaged.
void write_detection_log(std::ostream& out, std::span<const FrameDetections> frames);
void write_detection_log(const std::filesystem::path& path,
                         std::span<const FrameDetections> frames);

/// Validates a single record against the DetectionRecord invariants.
void validate(const DetectionRecord& rec);

GrayImage read_pgm(std::istream& in);
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(std::ostream& out, const GrayImage& img, bool binary = true);
void write_pgm(const std::filesystem::path& path, const GrayImage& img, bool binary = true);

/// Maps frame index to file for every `<stem>_<index>.pgm` in dir.
/// Throws ParseError when more than one stem is present.
std::map<std::int64_t, std::filesystem::path> index_frames(const std::filesystem::path& dir);

std::filesystem::path frame_path(const std::filesystem::path& dir, std::string_view stem,
                                 std::int64_t frame_index);

struct TrackingRow {
    std::int64_t frame_index = 0;
    int track_id = 0;
    std::string class_name;
    BBox bbox;
    double confidence = 0.0;
    std::string direction;
    double direction_confidence = 0.0;
};

inline constexpr std::string_view kTrackingCsvHeader =
    "frame,track_id,class,x1,y1,x2,y2,conf,direction,dir_conf";

void write_tracking_csv_header(std::ostream& out);
void write_tracking_row(std::ostream& out, const TrackingRow& row);
void write_tracking_csv(std::ostream& out, std::span<const TrackingRow> rows);
std::vector<TrackingRow> parse_tracking_csv(std::istream& in);

/// One ground-truth box. File form is TAB-separated:
///   frame_index object_id class_name x1 y1 x2 y2
struct GroundTruthBox {
    std::int64_t frame_index = 0;
    int object_id = 0;
    std::string class_name;
    BBox bbox;

    friend bool operator==(const GroundTruthBox&, const GroundTruthBox&) = default;
};

std::vector<GroundTruthBox> parse_ground_truth(std::istream& in);
void write_ground_truth(std::ostream& out, std::span<const GroundTruthBox> boxes);

/// Shortest decimal form that parses back to the same double.
std::string format_exact(double v);

}  // namespace spectra
