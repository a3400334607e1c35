// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>

namespace spectra {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned box in native frame pixels, corner form.
///
/// A valid box has finite coordinates and strictly positive width and
/// height. Construction through make_box() enforces this; the aggregate
/// form is left open so hot loops can build boxes without checks.
struct BBox {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }

    friend bool operator==(const BBox&, const BBox&) = default;
};

bool is_valid(const BBox& b);

/// Throws std::invalid_argument on inverted, zero-area or non-finite input.
BBox make_box(double x1, double y1, double x2, double y2);

/// Box of the given size centred on c.
BBox box_around(Point c, double width, double height);

double area(const BBox& b);
Point centroid(const BBox& b);

/// Intersection over union. Touching edges give 0.
double iou(const BBox& a, const BBox& b);

BBox translated(const BBox& b, double dx, double dy);

struct FrameDims {
    int width = 0;
    int height = 0;

    friend bool operator==(const FrameDims&, const FrameDims&) = default;
};

inline constexpr FrameDims kNativeFrame{320, 256};
inline constexpr FrameDims kDetectorInput{320, 320};

/// True when the box lies within [0,width] x [0,height].
bool inside(const BBox& b, FrameDims dims);

/// Aspect-preserving scale followed by symmetric padding.
struct LetterboxTransform {
    double scale = 1.0;
    double pad_x = 0.0;
    double pad_y = 0.0;

    Point forward(Point p) const;
    Point inverse(Point p) const;
    BBox forward(const BBox& b) const;
    BBox inverse(const BBox& b) const;
};

LetterboxTransform letterbox_for(FrameDims src, FrameDims dst);

std::string to_string(const BBox& b);

}  // namespace spectra
