// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <tuple>
#include <vector>

#include "tilecraft/constraint.hpp"

namespace tilecraft {

/// Row-major (row, col, channel) lattice of latent values.
struct LatentGrid {
    int height = 0;
    int width = 0;
    int depth = 0;
    std::vector<double> data;

    LatentGrid() = default;
    LatentGrid(int h, int w, int d, double fill = 0.0);

    double& at(int row, int col, int channel) {
        return data[(static_cast<std::size_t>(row) * width + col) * depth + channel];
    }
    double at(int row, int col, int channel) const {
        return data[(static_cast<std::size_t>(row) * width + col) * depth + channel];
    }

    bool same_shape(const LatentGrid& other) const {
        return height == other.height && width == other.width && depth == other.depth;
    }

    friend bool operator==(const LatentGrid&, const LatentGrid&) = default;
};

/// Rotate the lattice clockwise by `quarter_turns` * 90 degrees. Channels are untouched.
LatentGrid rotate_clockwise(const LatentGrid& grid, int quarter_turns);

/// Copy out the window [row, row+rows) x [col, col+cols).
LatentGrid crop(const LatentGrid& grid, int row, int col, int rows, int cols);

/// A padded latent: the interior H x W window sits at (pads.top, pads.left).
struct LatentCanvas {
    LatentGrid grid;
    Pads pads;

    LatentCanvas() = default;
    LatentCanvas(LatentDims interior, Pads pads, double fill = 0.0);

    int interior_height() const { return grid.height - pads.top - pads.bottom; }
    int interior_width() const { return grid.width - pads.left - pads.right; }

    LatentGrid interior() const;
    void set_interior(const LatentGrid& values);
};

enum class Region { Interior, Padding };

/// A band cut from one side of a canvas. `edge` is the strip's own side that lies on
/// the canvas boundary; for interior strips the inward direction points away from it.
struct Strip {
    LatentGrid cells;
    Side edge = Side::Left;

    bool tangent_vertical() const { return is_vertical(edge); }
};

Strip extract_strip(const LatentCanvas& canvas, Side side, int width, Region region);

/// Overwrite the band of `canvas` that extract_strip(canvas, side, width, region) reads.
void write_strip(LatentCanvas& canvas, Side side, Region region, const Strip& strip);

/// Clockwise quarter turns that carry the outward normal of `from` onto the inward
/// normal of `to`.
int orientation_turns(Side from, Side to);

/// Rotate a strip cut at `from` so it can sit in the padding of `to`, facing inward.
Strip orient_strip(const Strip& strip, Side from, Side to);

enum class Purpose : std::uint8_t { Tiling, Similarity };

struct RoundRobinKey {
    std::size_t constraint = 0;
    int set = 0;  ///< 0 = first set, 1 = second set.
    std::size_t slot = 0;
    Purpose purpose = Purpose::Tiling;

    friend auto operator<=>(const RoundRobinKey&, const RoundRobinKey&) = default;
};

struct RoundRobinState {
    std::map<RoundRobinKey, std::uint64_t> counters;

    std::uint64_t counter(const RoundRobinKey& key) const;
};

/// candidates[(counter + stable_offset) mod n]; bumps the counter for `key`.
SideRef round_robin_pick(RoundRobinState& state, const RoundRobinKey& key,
                         std::size_t stable_offset, std::span<const SideRef> candidates);

/// Fill the w-wide padding band of every side in the constraint from a round-robin
/// partner's interior. Only padding cells are written.
void apply_tiling_constraint(std::span<LatentCanvas> canvases, const Constraint& constraint,
                             std::size_t constraint_index, RoundRobinState& state);

inline constexpr int kSimilarityWidth = 5;

/// For each set with more than one member, copy a round-robin reference's interior band
/// onto the other members' interior bands. Only interior cells are written.
void apply_similarity_constraint(std::span<LatentCanvas> canvases, const Constraint& constraint,
                                 std::size_t constraint_index, RoundRobinState& state,
                                 int width = kSimilarityWidth);

struct ConstraintToggles {
    bool tiling = true;
    bool similarity = true;
    int similarity_width = kSimilarityWidth;
};

/// One constraint pass: every tiling constraint in spec order, then every similarity
/// constraint in spec order.
void apply_constraints(std::span<LatentCanvas> canvases, const ConstraintSpec& spec,
                       RoundRobinState& state, const ConstraintToggles& toggles = {});

} // namespace tilecraft
