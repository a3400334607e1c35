// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "spectra/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spectra {

bool is_valid(const BBox& b) {
    return std::isfinite(b.x1) && std::isfinite(b.y1) && std::isfinite(b.x2) &&
           std::isfinite(b.y2) && b.x1 < b.x2 && b.y1 < b.y2;
}

BBox make_box(double x1, double y1, double x2, double y2) {
    BBox b{x1, y1, x2, y2};
    if (!is_valid(b)) {
        throw std::invalid_argument("invalid box " + to_string(b));
    }
    return b;
}

BBox box_around(Point c, double width, double height) {
    return make_box(c.x - width / 2.0, c.y - height / 2.0, c.x + width / 2.0,
                    c.y + height / 2.0);
}

double area(const BBox& b) { return b.width() * b.height(); }

Point centroid(const BBox& b) { return {(b.x1 + b.x2) / 2.0, (b.y1 + b.y2) / 2.0}; }

double iou(const BBox& a, const BBox& b) {
    const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    if (iw <= 0.0 || ih <= 0.0) {
        return 0.0;
    }
    const double inter = iw * ih;
    return inter / (area(a) + area(b) - inter);
}

BBox translated(const BBox& b, double dx, double dy) {
    return {b.x1 + dx, b.y1 + dy, b.x2 + dx, b.y2 + dy};
}

bool inside(const BBox& b, FrameDims dims) {
    return b.x1 >= 0.0 && b.y1 >= 0.0 && b.x2 <= dims.width && b.y2 <= dims.height;
}

Point LetterboxTransform::forward(Point p) const {
    return {p.x * scale + pad_x, p.y * scale + pad_y};
}

Point LetterboxTransform::inverse(Point p) const {
    return {(p.x - pad_x) / scale, (p.y - pad_y) / scale};
}

BBox LetterboxTransform::forward(const BBox& b) const {
    const Point lo = forward(Point{b.x1, b.y1});
    const Point hi = forward(Point{b.x2, b.y2});
    return {lo.x, lo.y, hi.x, hi.y};
}

BBox LetterboxTransform::inverse(const BBox& b) const {
    const Point lo = inverse(Point{b.x1, b.y1});
    const Point hi = inverse(Point{b.x2, b.y2});
    return {lo.x, lo.y, hi.x, hi.y};
}

LetterboxTransform letterbox_for(FrameDims src, FrameDims dst) {
    if (src.width <= 0 || src.height <= 0 || dst.width <= 0 || dst.height <= 0) {
        throw std::invalid_argument("letterbox dimensions must be positive");
    }
    LetterboxTransform t;
    t.scale = std::min(static_cast<double>(dst.width) / src.width,
                       static_cast<double>(dst.height) / src.height);
    t.pad_x = (dst.width - src.width * t.scale) / 2.0;
    t.pad_y = (dst.height - src.height * t.scale) / 2.0;
    return t;
}

std::string to_string(const BBox& b) {
    std::ostringstream os;
    os << "(" << b.x1 << ", " << b.y1 << ", " << b.x2 << ", " << b.y2 << ")";
    return os.str();
}

}  // namespace spectra
