// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#include "tilecraft/latent.hpp"

#include <string>

namespace tilecraft {

LatentGrid::LatentGrid(int h, int w, int d, double fill)
    : height(h), width(w), depth(d),
      data(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) * static_cast<std::size_t>(d),
           fill) {}

LatentGrid rotate_clockwise(const LatentGrid& grid, int quarter_turns) {
    const int k = ((quarter_turns % 4) + 4) % 4;
    if (k == 0) {
        return grid;
    }
    const int h = grid.height;
    const int w = grid.width;
    LatentGrid out = (k == 2) ? LatentGrid(h, w, grid.depth) : LatentGrid(w, h, grid.depth);
    for (int r = 0; r < out.height; ++r) {
        for (int c = 0; c < out.width; ++c) {
            int sr = 0;
            int sc = 0;
            switch (k) {
            case 1: sr = h - 1 - c; sc = r; break;
            case 2: sr = h - 1 - r; sc = w - 1 - c; break;
            default: sr = c; sc = w - 1 - r; break;
            }
            for (int d = 0; d < grid.depth; ++d) {
                out.at(r, c, d) = grid.at(sr, sc, d);
            }
        }
    }
    return out;
}

LatentGrid crop(const LatentGrid& grid, int row, int col, int rows, int cols) {
    if (row < 0 || col < 0 || rows < 0 || cols < 0 || row + rows > grid.height ||
        col + cols > grid.width) {
        throw Error(ErrorCode::WidthExceedsExtent, "crop window leaves the grid");
    }
    LatentGrid out(rows, cols, grid.depth);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            for (int d = 0; d < grid.depth; ++d) {
                out.at(r, c, d) = grid.at(row + r, col + c, d);
            }
        }
    }
    return out;
}

LatentCanvas::LatentCanvas(LatentDims interior, Pads p, double fill)
    : grid(interior.height + p.top + p.bottom, interior.width + p.left + p.right, interior.depth,
           fill),
      pads(p) {}

LatentGrid LatentCanvas::interior() const {
    return crop(grid, pads.top, pads.left, interior_height(), interior_width());
}

void LatentCanvas::set_interior(const LatentGrid& values) {
    if (values.height != interior_height() || values.width != interior_width() ||
        values.depth != grid.depth) {
        throw Error(ErrorCode::DimensionMismatch, "interior shape mismatch");
    }
    for (int r = 0; r < values.height; ++r) {
        for (int c = 0; c < values.width; ++c) {
            for (int d = 0; d < values.depth; ++d) {
                grid.at(pads.top + r, pads.left + c, d) = values.at(r, c, d);
            }
        }
    }
}

namespace {

struct Band {
    int row, col, rows, cols;
};

Band band_for(const LatentCanvas& canvas, Side side, int width, Region region) {
    const int h = canvas.interior_height();
    const int w = canvas.interior_width();
    const int top = canvas.pads.top;
    const int left = canvas.pads.left;
    const int limit = region == Region::Interior ? (is_vertical(side) ? w : h)
                                                 : canvas.pads.get(side);
    if (width < 0 || width > limit) {
        throw Error(ErrorCode::WidthExceedsExtent,
                    "band of width " + std::to_string(width) + " at side " +
                        std::string(to_string(side)) + " exceeds extent " + std::to_string(limit));
    }
    const bool inner = region == Region::Interior;
    switch (side) {
    case Side::Left: return {top, inner ? left : left - width, h, width};
    case Side::Right: return {top, inner ? left + w - width : left + w, h, width};
    case Side::Top: return {inner ? top : top - width, left, width, w};
    case Side::Bottom: return {inner ? top + h - width : top + h, left, width, w};
    }
    return {0, 0, 0, 0};
}

} // namespace

Strip extract_strip(const LatentCanvas& canvas, Side side, int width, Region region) {
    Band b = band_for(canvas, side, width, region);
    return Strip{crop(canvas.grid, b.row, b.col, b.rows, b.cols),
                 region == Region::Interior ? side : opposite(side)};
}

void write_strip(LatentCanvas& canvas, Side side, Region region, const Strip& strip) {
    const int width = is_vertical(side) ? strip.cells.width : strip.cells.height;
    Band b = band_for(canvas, side, width, region);
    if (strip.cells.height != b.rows || strip.cells.width != b.cols ||
        strip.cells.depth != canvas.grid.depth) {
        throw Error(ErrorCode::DimensionMismatch,
                    "strip of " + std::to_string(strip.cells.height) + "x" +
                        std::to_string(strip.cells.width) + " does not fit band " +
                        std::to_string(b.rows) + "x" + std::to_string(b.cols));
    }
    for (int r = 0; r < b.rows; ++r) {
        for (int c = 0; c < b.cols; ++c) {
            for (int d = 0; d < strip.cells.depth; ++d) {
                canvas.grid.at(b.row + r, b.col + c, d) = strip.cells.at(r, c, d);
            }
        }
    }
}

int orientation_turns(Side from, Side to) {
    // Inward normal of `to` is the outward normal of its opposite side.
    return ((clockwise_index(opposite(to)) - clockwise_index(from)) % 4 + 4) % 4;
}

Strip orient_strip(const Strip& strip, Side from, Side to) {
    const int k = orientation_turns(from, to);
    return Strip{rotate_clockwise(strip.cells, k),
                 side_at_clockwise_index(clockwise_index(strip.edge) + k)};
}

std::uint64_t RoundRobinState::counter(const RoundRobinKey& key) const {
    auto it = counters.find(key);
    return it == counters.end() ? 0 : it->second;
}

SideRef round_robin_pick(RoundRobinState& state, const RoundRobinKey& key,
                         std::size_t stable_offset, std::span<const SideRef> candidates) {
    if (candidates.empty()) {
        throw Error(ErrorCode::ConstraintFailure, "round-robin over an empty candidate list");
    }
    std::uint64_t& counter = state.counters[key];
    const std::size_t index = static_cast<std::size_t>((counter + stable_offset) % candidates.size());
    ++counter;
    return candidates[index];
}

namespace {

LatentCanvas& canvas_for(std::span<LatentCanvas> canvases, const SideRef& ref) {
    if (ref.image >= canvases.size()) {
        throw Error(ErrorCode::UnknownImage,
                    "side refers to image #" + std::to_string(ref.image) + " but only " +
                        std::to_string(canvases.size()) + " canvases exist");
    }
    return canvases[ref.image];
}

void fill_pads_from(std::span<LatentCanvas> canvases, const std::vector<SideRef>& targets,
                    const std::vector<SideRef>& sources, int target_set, int w,
                    std::size_t constraint_index, RoundRobinState& state) {
    for (std::size_t slot = 0; slot < targets.size(); ++slot) {
        const SideRef& target = targets[slot];
        LatentCanvas& dst = canvas_for(canvases, target);
        if (dst.pads.get(target.side) < w) {
            throw Error(ErrorCode::PadTooSmall,
                        "pad at side " + std::string(to_string(target.side)) + " of image #" +
                            std::to_string(target.image) + " is " +
                            std::to_string(dst.pads.get(target.side)) + " < w=" + std::to_string(w));
        }
        const SideRef source = round_robin_pick(
            state, RoundRobinKey{constraint_index, target_set, slot, Purpose::Tiling}, slot, sources);
        const Strip strip = extract_strip(canvas_for(canvases, source), source.side, w,
                                          Region::Interior);
        write_strip(dst, target.side, Region::Padding, orient_strip(strip, source.side, target.side));
    }
}

void unify_set(std::span<LatentCanvas> canvases, const std::vector<SideRef>& set, int set_index,
               int width, std::size_t constraint_index, RoundRobinState& state) {
    if (set.size() < 2) {
        return;
    }
    for (const SideRef& member : set) {
        const LatentCanvas& c = canvas_for(canvases, member);
        const int extent = is_vertical(member.side) ? c.interior_width() : c.interior_height();
        if (extent < width) {
            throw Error(ErrorCode::InteriorTooSmall,
                        "interior extent " + std::to_string(extent) +
                            " is smaller than the similarity width " + std::to_string(width));
        }
    }
    const SideRef reference = round_robin_pick(
        state, RoundRobinKey{constraint_index, set_index, 0, Purpose::Similarity}, 0, set);
    const Strip band = extract_strip(canvas_for(canvases, reference), reference.side, width,
                                     Region::Interior);
    for (const SideRef& member : set) {
        if (member == reference) {
            continue;
        }
        write_strip(canvas_for(canvases, member), member.side, Region::Interior,
                    orient_strip(band, reference.side, opposite(member.side)));
    }
}

} // namespace

void apply_tiling_constraint(std::span<LatentCanvas> canvases, const Constraint& constraint,
                             std::size_t constraint_index, RoundRobinState& state) {
    const int w = constraint.context_window;
    if (w == 0) {
        return;
    }
    // Both directions read interiors only, so the order between them does not matter.
    fill_pads_from(canvases, constraint.set_a, constraint.set_b, 0, w, constraint_index, state);
    fill_pads_from(canvases, constraint.set_b, constraint.set_a, 1, w, constraint_index, state);
}

void apply_similarity_constraint(std::span<LatentCanvas> canvases, const Constraint& constraint,
                                 std::size_t constraint_index, RoundRobinState& state, int width) {
    unify_set(canvases, constraint.set_a, 0, width, constraint_index, state);
    unify_set(canvases, constraint.set_b, 1, width, constraint_index, state);
}

void apply_constraints(std::span<LatentCanvas> canvases, const ConstraintSpec& spec,
                       RoundRobinState& state, const ConstraintToggles& toggles) {
    if (toggles.tiling) {
        for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
            apply_tiling_constraint(canvases, spec.constraints[i], i, state);
        }
    }
    if (toggles.similarity) {
        for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
            apply_similarity_constraint(canvases, spec.constraints[i], i, state,
                                        toggles.similarity_width);
        }
    }
}

} // namespace tilecraft
