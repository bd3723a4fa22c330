// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#include "tilecraft/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace tilecraft {

std::string_view to_string(Axis axis) { return axis == Axis::X ? "x" : "y"; }

std::optional<Axis> axis_from_string(std::string_view name) {
    if (name == "x" || name == "X") {
        return Axis::X;
    }
    if (name == "y" || name == "Y") {
        return Axis::Y;
    }
    return std::nullopt;
}

double ts_line(const PixelImage& i1, const PixelImage& i2, Axis axis, int position) {
    if (i1.height != i2.height || i1.width != i2.width) {
        throw Error(ErrorCode::DimMismatch, "tiling score needs images of equal size");
    }
    const int extent = axis == Axis::X ? i1.width : i1.height;
    const int length = axis == Axis::X ? i1.height : i1.width;
    const int first = extent - 1 + position;
    if (position <= -extent || position >= extent || length == 0) {
        throw Error(ErrorCode::InvalidArgument,
                    "line position " + std::to_string(position) + " outside the concatenation");
    }
    // Line index in the virtual concatenation -> (image, local line).
    auto value = [&](int line, int along) {
        const PixelImage& img = line < extent ? i1 : i2;
        const int local = line < extent ? line : line - extent;
        return axis == Axis::X ? img.gray(along, local) : img.gray(local, along);
    };
    double sum = 0.0;
    for (int y = 0; y < length; ++y) {
        sum += std::abs(value(first, y) - value(first + 1, y));
    }
    return sum / length;
}

ScoreReport tiling_score(const PixelImage& i1, const PixelImage& i2, Axis axis, int offset) {
    if (offset < 1) {
        throw Error(ErrorCode::InvalidArgument, "score offset must be >= 1");
    }
    ScoreReport r;
    r.axis = axis;
    r.offset = offset;
    r.at_connection = ts_line(i1, i2, axis, 0);
    r.minus_offset = ts_line(i1, i2, axis, -offset);
    r.plus_offset = ts_line(i1, i2, axis, offset);
    r.mean = (r.at_connection + r.minus_offset + r.plus_offset) / 3.0;
    return r;
}

PixelImage swap_halves(const PixelImage& image, Axis axis) {
    const int extent = axis == Axis::X ? image.width : image.height;
    if (extent % 2 != 0) {
        throw Error(ErrorCode::OddExtent, "cannot swap halves of an odd extent " + std::to_string(extent));
    }
    const int half = extent / 2;
    PixelImage out(image.height, image.width, image.channels);
    for (int r = 0; r < image.height; ++r) {
        for (int c = 0; c < image.width; ++c) {
            const int sr = axis == Axis::Y ? (r + half) % extent : r;
            const int sc = axis == Axis::X ? (c + half) % extent : c;
            for (int ch = 0; ch < image.channels; ++ch) {
                out.at(r, c, ch) = image.at(sr, sc, ch);
            }
        }
    }
    return out;
}

std::vector<SeamStats> seam_profile(const PixelImage& sheet, const std::vector<Seam>& seams, int band) {
    std::vector<SeamStats> out;
    out.reserve(seams.size());
    for (const Seam& seam : seams) {
        const bool x = seam.axis == Axis::X;
        const int extent = x ? sheet.width : sheet.height;
        const int length = x ? sheet.height : sheet.width;
        if (seam.position < 1 || seam.position >= extent) {
            throw Error(ErrorCode::InvalidArgument, "seam position outside the sheet");
        }
        // Mean |I(line) - I(line + 1)| along the seam direction.
        auto line_diff = [&](int line) {
            double sum = 0.0;
            for (int i = 0; i < length; ++i) {
                sum += x ? std::abs(sheet.gray(i, line) - sheet.gray(i, line + 1))
                         : std::abs(sheet.gray(line, i) - sheet.gray(line + 1, i));
            }
            return sum / length;
        };
        SeamStats s;
        s.seam = seam;
        s.cross = line_diff(seam.position - 1);
        double sum = 0.0;
        int count = 0;
        for (int line = std::max(0, seam.position - band); line <= seam.position - 2; ++line) {
            sum += line_diff(line);
            ++count;
        }
        for (int line = seam.position; line <= std::min(extent - 2, seam.position + band - 2); ++line) {
            sum += line_diff(line);
            ++count;
        }
        s.interior = count ? sum / count : 0.0;
        if (s.interior > 0.0) {
            s.ratio = s.cross / s.interior;
        } else {
            s.ratio = s.cross > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
        }
        out.push_back(s);
    }
    return out;
}

std::vector<Seam> layout_seams(const Layout& layout, int tile_height, int tile_width) {
    std::vector<Seam> seams;
    for (int c = 1; c < layout.cols; ++c) {
        seams.push_back({Axis::X, c * tile_width});
    }
    for (int r = 1; r < layout.rows; ++r) {
        seams.push_back({Axis::Y, r * tile_height});
    }
    return seams;
}

} // namespace tilecraft
