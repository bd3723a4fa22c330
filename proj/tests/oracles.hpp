// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Slow, obviously-correct reference implementations used by the tests. None of
// them call into the library code they check.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tilecraft/constraint.hpp"
#include "tilecraft/imaging.hpp"
#include "tilecraft/latent.hpp"

namespace oracle {

using tilecraft::LatentGrid;
using tilecraft::PixelImage;
using tilecraft::Side;

inline double gray(const PixelImage& img, int r, int c) {
    double s = 0.0;
    for (int ch = 0; ch < img.channels; ++ch) {
        s += img.data[(static_cast<std::size_t>(r) * img.width + c) * img.channels + ch];
    }
    return s / img.channels;
}

// Materialise the concatenation, then difference the two lines around the seam.
inline double ts_line(const PixelImage& a, const PixelImage& b, bool x_axis, int p) {
    const int H = x_axis ? a.height : 2 * a.height;
    const int W = x_axis ? 2 * a.width : a.width;
    std::vector<std::vector<double>> cat(H, std::vector<double>(W));
    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            if (x_axis) {
                cat[r][c] = c < a.width ? gray(a, r, c) : gray(b, r, c - a.width);
            } else {
                cat[r][c] = r < a.height ? gray(a, r, c) : gray(b, r - a.height, c);
            }
        }
    }
    const int line = (x_axis ? a.width : a.height) - 1 + p;
    double sum = 0.0;
    if (x_axis) {
        for (int r = 0; r < H; ++r) sum += std::fabs(cat[r][line] - cat[r][line + 1]);
        return sum / H;
    }
    for (int c = 0; c < W; ++c) sum += std::fabs(cat[line][c] - cat[line + 1][c]);
    return sum / W;
}

inline double tiling_score(const PixelImage& a, const PixelImage& b, bool x_axis, int k) {
    return (ts_line(a, b, x_axis, 0) + ts_line(a, b, x_axis, -k) + ts_line(a, b, x_axis, k)) / 3.0;
}

// Smooth, non-periodic test image: a handful of low-frequency plane waves.
inline PixelImage smooth_image(std::uint64_t seed, int h, int w) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> freq(0.03, 0.25), phase(0.0, 6.283185307179586),
        amp(0.04, 0.12), sign(-1.0, 1.0);
    struct Wave { double fx, fy, ph, a; };
    std::vector<Wave> waves;
    for (int i = 0; i < 4; ++i) {
        waves.push_back({freq(rng) * (sign(rng) < 0 ? -1 : 1), freq(rng) * (sign(rng) < 0 ? -1 : 1),
                         phase(rng), amp(rng)});
    }
    PixelImage img(h, w, 1);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double v = 0.5;
            for (const auto& wv : waves) v += wv.a * std::sin(wv.fx * c + wv.fy * r + wv.ph);
            img.data[static_cast<std::size_t>(r) * w + c] = v;
        }
    }
    return img;
}

inline PixelImage random_image(std::mt19937_64& rng, int h, int w, int channels) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PixelImage img(h, w, channels);
    for (double& v : img.data) v = u(rng);
    return img;
}

// Clockwise order Top, Right, Bottom, Left written out by hand.
inline int cw(Side s) {
    switch (s) {
    case Side::Top: return 0;
    case Side::Right: return 1;
    case Side::Bottom: return 2;
    case Side::Left: return 3;
    }
    return 0;
}

inline Side from_cw(int i) {
    static constexpr Side order[4] = {Side::Top, Side::Right, Side::Bottom, Side::Left};
    return order[((i % 4) + 4) % 4];
}

// Original side that points toward `facing` after k clockwise quarter turns.
inline Side original_side(Side facing, int k) { return from_cw(cw(facing) - k); }

inline bool licensed(const tilecraft::ConstraintSpec& spec, tilecraft::SideRef a, tilecraft::SideRef b) {
    auto in = [](const std::vector<tilecraft::SideRef>& set, const tilecraft::SideRef& r) {
        for (const auto& s : set) if (s.image == r.image && s.side == r.side) return true;
        return false;
    };
    for (const auto& c : spec.constraints) {
        if ((in(c.set_a, a) && in(c.set_b, b)) || (in(c.set_a, b) && in(c.set_b, a))) return true;
    }
    return false;
}

inline bool any_cross_axis(const tilecraft::ConstraintSpec& spec) {
    auto vert = [](Side s) { return s == Side::Left || s == Side::Right; };
    for (const auto& c : spec.constraints)
        for (const auto& a : c.set_a)
            for (const auto& b : c.set_b)
                if (vert(a.side) != vert(b.side)) return true;
    return false;
}

// Adjacency check of a full assignment; cells are (image, quarter turns), row-major.
inline bool layout_ok(const tilecraft::ConstraintSpec& spec, int rows, int cols,
                      const std::vector<std::pair<std::size_t, int>>& cells) {
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const auto& here = cells[r * cols + c];
            if (c + 1 < cols) {
                const auto& right = cells[r * cols + c + 1];
                if (!licensed(spec, {here.first, original_side(Side::Right, here.second)},
                              {right.first, original_side(Side::Left, right.second)}))
                    return false;
            }
            if (r + 1 < rows) {
                const auto& below = cells[(r + 1) * cols + c];
                if (!licensed(spec, {here.first, original_side(Side::Bottom, here.second)},
                              {below.first, original_side(Side::Top, below.second)}))
                    return false;
            }
        }
    }
    return true;
}

// Enumerate every assignment of (image, rotation) to every cell.
inline bool layout_feasible(const tilecraft::ConstraintSpec& spec, int rows, int cols) {
    const int n_cells = rows * cols;
    const int n_img = static_cast<int>(spec.images.size());
    const int n_rot = any_cross_axis(spec) ? 4 : 1;
    const int choices = n_img * n_rot;
    long total = 1;
    for (int i = 0; i < n_cells; ++i) total *= choices;
    std::vector<std::pair<std::size_t, int>> cells(n_cells);
    for (long code = 0; code < total; ++code) {
        long x = code;
        for (int i = 0; i < n_cells; ++i) {
            const int choice = static_cast<int>(x % choices);
            x /= choices;
            cells[i] = {static_cast<std::size_t>(choice / n_rot), choice % n_rot};
        }
        if (layout_ok(spec, rows, cols, cells)) return true;
    }
    return false;
}

} // namespace oracle
