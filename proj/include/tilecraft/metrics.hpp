// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "tilecraft/imaging.hpp"

namespace tilecraft {

/// X: i1 on the left, i2 on the right. Y: i1 on top, i2 below.
enum class Axis { X, Y };

std::string_view to_string(Axis axis);
std::optional<Axis> axis_from_string(std::string_view name);

inline constexpr int kDefaultScoreOffset = 8;

/// Mean absolute gray difference between the two adjacent lines at `position` in the
/// virtual concatenation of i1 and i2. Position 0 compares i1's last line with i2's
/// first; position -k compares the pair k lines back (inside i1), +k the pair k lines
/// forward (inside i2).
double ts_line(const PixelImage& i1, const PixelImage& i2, Axis axis, int position);

struct ScoreReport {
    Axis axis = Axis::X;
    int offset = kDefaultScoreOffset;
    double at_connection = 0.0;
    double minus_offset = 0.0;
    double plus_offset = 0.0;
    double mean = 0.0;
};

/// Tiling Score: mean of ts_line at the connection and at -k and +k.
ScoreReport tiling_score(const PixelImage& i1, const PixelImage& i2, Axis axis,
                         int offset = kDefaultScoreOffset);

/// Exchange the two halves along the axis ([A|B] -> [B|A] on X).
PixelImage swap_halves(const PixelImage& image, Axis axis);

struct Seam {
    Axis axis = Axis::X;
    int position = 0; ///< Index of the first column (X) or row (Y) after the seam.
};

struct SeamStats {
    Seam seam;
    double cross = 0.0;    ///< Mean |difference| across the seam.
    double interior = 0.0; ///< Mean |difference| of adjacent lines inside the band.
    double ratio = 0.0;    ///< cross / interior.
};

inline constexpr int kSeamBand = 16;

std::vector<SeamStats> seam_profile(const PixelImage& sheet, const std::vector<Seam>& seams,
                                    int band = kSeamBand);

/// Internal seams of a rows x cols sheet of tile_h x tile_w tiles.
std::vector<Seam> layout_seams(const Layout& layout, int tile_height, int tile_width);

} // namespace tilecraft
