// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "spectra/image.hpp"

#include <stdexcept>

namespace spectra {

GrayImage::GrayImage(int w, int h, std::uint8_t fill) : width(w), height(h) {
    if (w <= 0 || h <= 0) {
        throw std::invalid_argument("image dimensions must be positive");
    }
    pixels.assign(static_cast<std::size_t>(w) * h, fill);
}

RGBImage::RGBImage(int w, int h, Rgb fill) : width(w), height(h) {
    if (w <= 0 || h <= 0) {
        throw std::invalid_argument("image dimensions must be positive");
    }
    data.resize(static_cast<std::size_t>(w) * h * 3);
    for (std::size_t i = 0; i < data.size(); i += 3) {
        data[i] = fill.r;
        data[i + 1] = fill.g;
        data[i + 2] = fill.b;
    }
}

Rgb RGBImage::at(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    return {data[i], data[i + 1], data[i + 2]};
}

void RGBImage::set(int x, int y, Rgb v) {
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    data[i] = v.r;
    data[i + 1] = v.g;
    data[i + 2] = v.b;
}

}  // namespace spectra
