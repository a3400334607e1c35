// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <vector>

#include "spectra/geometry.hpp"

namespace spectra {

/// 8-bit single channel image, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0);

    FrameDims dims() const { return {width, height}; }
    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit three channel image, interleaved r,g,b, row-major.
struct RGBImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    RGBImage() = default;
    RGBImage(int w, int h, Rgb fill = {});

    FrameDims dims() const { return {width, height}; }
    Rgb at(int x, int y) const;
    void set(int x, int y, Rgb v);

    friend bool operator==(const RGBImage&, const RGBImage&) = default;
};

}  // namespace spectra
