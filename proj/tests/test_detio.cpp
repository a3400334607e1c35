// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "spectra/detio.hpp"

using namespace spectra;

namespace {

DetectionRecord rec(std::int64_t f, Modality m, double conf, BBox b, std::string cls = "drone") {
    return {f, m, 0, std::move(cls), conf, b};
}

std::vector<FrameDetections> parse(const std::string& text) {
    std::istringstream in(text);
    return parse_detection_log(in);
}

std::string write(const std::vector<FrameDetections>& frames) {
    std::ostringstream out;
    write_detection_log(out, frames);
    return out.str();
}

std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("spectra_detio_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST(DetectionLog, EmptyInput) {
    EXPECT_TRUE(parse("").empty());
    EXPECT_TRUE(parse("# only a comment\n\n").empty());
    EXPECT_EQ(write({}), "");
}

TEST(DetectionLog, TwoFramesOneRecordEach) {
    std::vector<FrameDetections> frames(2);
    frames[0].frame_index = 0;
    frames[0].rgb = std::vector{rec(0, Modality::RGB, 0.9, {1, 2, 11, 12})};
    frames[1].frame_index = 1;
    frames[1].rgb = std::vector{rec(1, Modality::RGB, 0.8, {3, 4, 13, 14})};
    const auto back = parse(write(frames));
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].rgb->size(), 1u);
    EXPECT_EQ(back[1].rgb->size(), 1u);
    EXPECT_FALSE(back[0].ir.has_value());
    EXPECT_EQ(back, frames);
}

TEST(DetectionLog, BothModalitiesShareFrameIndex) {
    FrameDetections f;
    f.frame_index = 7;
    f.rgb = std::vector{rec(7, Modality::RGB, 0.5, {0, 0, 4, 4})};
    f.ir = std::vector{rec(7, Modality::IR, 0.6, {0, 0, 5, 5})};
    const std::string text = write({f});
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
    EXPECT_EQ(text.substr(0, 2), "7\t");
    EXPECT_NE(text.find("\n7\tIR\t"), std::string::npos);
}

TEST(DetectionLog, ParsesDocumentedFormat) {
    const auto frames = parse(
        "# frame modality class_id class conf x1 y1 x2 y2\n"
        "0\tRGB\t0\tdrone\t0.91\t10\t20\t30\t40\r\n"
        "0\tIR\t1\tbird\t0.4\t1.5\t2.5\t3.5\t4.5\n"
        "0\tRGB\t1\tbird\t0.3\t50\t60\t70\t80\n"
        "3\tIR\t0\tdrone\t1\t0\t0\t1\t1\n");
    ASSERT_EQ(frames.size(), 2u);
    EXPECT_EQ(frames[0].rgb->size(), 2u);
    EXPECT_EQ(frames[0].ir->size(), 1u);
    EXPECT_EQ((*frames[0].ir)[0].class_name, "bird");
    EXPECT_EQ((*frames[0].ir)[0].bbox, (BBox{1.5, 2.5, 3.5, 4.5}));
    EXPECT_EQ(frames[1].frame_index, 3);
    EXPECT_FALSE(frames[1].rgb.has_value());
}

TEST(DetectionLog, RejectsInvalidLines) {
    auto line_of = [](const std::string& text) -> std::size_t {
        try {
            parse(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("0\tRGB\t0\tdrone\t0.5\t0\t0\t1\t1\n1\tRGB\t0\tdrone\t1.5\t0\t0\t1\t1\n"), 2u);
    EXPECT_EQ(line_of("0\tRGB\t0\tdrone\t0.5\t5\t0\t1\t1\n"), 1u);    // inverted box
    EXPECT_EQ(line_of("0\tRGB\t0\tdrone\t0.5\t0\t0\t0\t1\n"), 1u);    // zero width
    EXPECT_EQ(line_of("2\tRGB\t0\tdrone\t0.5\t0\t0\t1\t1\n1\tRGB\t0\tdrone\t0.5\t0\t0\t1\t1\n"), 2u);
    EXPECT_EQ(line_of("0\tUV\t0\tdrone\t0.5\t0\t0\t1\t1\n"), 1u);
    EXPECT_EQ(line_of("0\tRGB\t0\tdrone\t0.5\t0\t0\t1\n"), 1u);
    EXPECT_EQ(line_of("0\tRGB\t0\t\t0.5\t0\t0\t1\t1\n"), 1u);
    EXPECT_EQ(line_of("x\tRGB\t0\tdrone\t0.5\t0\t0\t1\t1\n"), 1u);
    EXPECT_EQ(line_of("0\tRGB\t0\tdrone\tnan\t0\t0\t1\t1\n"), 1u);
    try {
        parse("0\tRGB\t0\tdrone\t1.5\t0\t0\t1\t1\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
    }
}

TEST(DetectionLog, RoundTripProperty) {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_real_distribution<double> pos(-50.0, 400.0);
    std::uniform_real_distribution<double> size(0.01, 80.0);
    const std::vector<std::string> names{"drone", "bird", "harmful", "normal"};

    for (int trial = 0; trial < 20; ++trial) {
        std::vector<FrameDetections> frames;
        std::int64_t f = 0;
        for (int i = 0; i < 100; ++i) {
            f += 1 + static_cast<std::int64_t>(rng() % 3);
            FrameDetections fd;
            fd.frame_index = f;
            for (Modality m : {Modality::RGB, Modality::IR}) {
                const int n = static_cast<int>(rng() % 4);
                if (n == 0) continue;
                auto& list = fd.of(m).emplace();
                for (int k = 0; k < n; ++k) {
                    const double x = pos(rng), y = pos(rng);
                    const int cls = static_cast<int>(rng() % names.size());
                    list.push_back({f, m, cls, names[static_cast<std::size_t>(cls)], u(rng),
                                    {x, y, x + size(rng), y + size(rng)}});
                }
            }
            if (fd.rgb || fd.ir) frames.push_back(std::move(fd));
        }
        const auto back = parse(write(frames));
        ASSERT_EQ(back, frames);
        for (const auto& fr : back) {
            for (const auto* list : {&fr.rgb, &fr.ir}) {
                if (!*list) continue;
                for (const auto& r : **list) ASSERT_NO_THROW(validate(r));
            }
        }
    }
}

TEST(Pgm, ReadsBinaryFixture) {
    const std::string bytes = std::string("P5\n# comment\n2 2\n255\n") + '\x00' + '\x55' + '\xaa' + '\xff';
    std::istringstream in(bytes);
    const GrayImage img = read_pgm(in);
    EXPECT_EQ(img.width, 2);
    EXPECT_EQ(img.height, 2);
    EXPECT_EQ(img.pixels, (std::vector<std::uint8_t>{0, 85, 170, 255}));
}

TEST(Pgm, ReadsAsciiSinglePixel) {
    std::istringstream in("P2 1 1 255 0\n");
    const GrayImage img = read_pgm(in);
    EXPECT_EQ(img.width, 1);
    EXPECT_EQ(img.pixels, (std::vector<std::uint8_t>{0}));
}

TEST(Pgm, RejectsBadInput) {
    auto fails = [](const std::string& text) {
        std::istringstream in(text);
        EXPECT_THROW(read_pgm(in), ParseError) << text;
    };
    fails("P7\n2 2\n255\n");
    fails("P6\n2 2\n255\n");
    fails("P5\n2 2\n255\nab");           // truncated payload
    fails("P2\n2 2\n255\n1 2 3\n");      // too few values
    fails("P2\n2 1\n255\n1 2 3\n");      // too many values
    fails("P2\n1 1\n65535\n7\n");
    fails("P2\n0 1\n255\n");
    fails("P2\n1 1\n255\n300\n");
}

TEST(Pgm, BitExactRoundTrip) {
    std::mt19937 rng(5);
    GrayImage img(13, 7);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng());
    for (bool binary : {true, false}) {
        std::stringstream ss;
        write_pgm(ss, img, binary);
        const GrayImage back = read_pgm(ss);
        ASSERT_EQ(back, img);
        std::stringstream again;
        write_pgm(again, back, binary);
        EXPECT_EQ(again.str(), [&] { std::stringstream s; write_pgm(s, img, binary); return s.str(); }());
    }
}

TEST(Pgm, FrameIndexing) {
    const auto dir = temp_dir("frames");
    GrayImage img(2, 2, 9);
    write_pgm(frame_path(dir, "cam", 0), img);
    write_pgm(frame_path(dir, "cam", 12), img);
    std::ofstream(dir / "notes.txt") << "x";
    const auto idx = index_frames(dir);
    ASSERT_EQ(idx.size(), 2u);
    EXPECT_EQ(idx.begin()->first, 0);
    EXPECT_EQ(idx.rbegin()->first, 12);
    EXPECT_EQ(read_pgm(idx.at(12)), img);

    write_pgm(frame_path(dir, "other", 3), img);
    EXPECT_THROW(index_frames(dir), ParseError);
}

TEST(TrackingCsv, HeaderOnlyForNoRows) {
    std::ostringstream out;
    write_tracking_csv(out, {});
    EXPECT_EQ(out.str(), "frame,track_id,class,x1,y1,x2,y2,conf,direction,dir_conf\n");
}

TEST(TrackingCsv, OneRowTenFields) {
    const std::vector<TrackingRow> rows{{4, 2, "drone", {1, 2.5, 10.25, 20}, 0.87654, "E/approaching", 0.6}};
    std::ostringstream out;
    write_tracking_csv(out, rows);
    const std::string text = out.str();
    const std::string row = text.substr(text.find('\n') + 1);
    EXPECT_EQ(row, "4,2,drone,1.000,2.500,10.250,20.000,0.877,E/approaching,0.600\n");
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 9);

    std::istringstream in(text);
    const auto back = parse_tracking_csv(in);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0].track_id, 2);
    EXPECT_DOUBLE_EQ(back[0].direction_confidence, 0.6);
}

TEST(GroundTruthFile, RoundTrip) {
    const std::vector<GroundTruthBox> boxes{{0, 1, "drone", {1, 2, 3, 4}}, {5, 2, "bird", {0.25, 0.5, 9.75, 8}}};
    std::stringstream ss;
    write_ground_truth(ss, boxes);
    EXPECT_EQ(parse_ground_truth(ss), boxes);
    std::istringstream bad("0\t1\tdrone\t1\t2\t3\n");
    EXPECT_THROW(parse_ground_truth(bad), ParseError);
}
