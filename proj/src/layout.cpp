// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#include "tilecraft/imaging.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <sstream>

#include "tilecraft/schedule.hpp"

namespace tilecraft {

Side side_facing(Side facing, int quarter_turns) {
    return side_at_clockwise_index(clockwise_index(facing) - quarter_turns);
}

namespace {

class LayoutSearch {
public:
    LayoutSearch(const ConstraintSpec& spec, int rows, int cols, std::uint64_t seed)
        : spec_(spec), rows_(rows), cols_(cols), seed_(seed) {
        const int turns = has_cross_axis(spec) ? 4 : 1;
        for (std::size_t i = 0; i < spec.images.size(); ++i) {
            for (int k = 0; k < turns; ++k) {
                candidates_.push_back({i, k});
            }
        }
        layout_.rows = rows;
        layout_.cols = cols;
        layout_.cells.resize(static_cast<std::size_t>(rows) * cols);
    }

    bool run() { return place(0); }
    const Layout& layout() const { return layout_; }

private:
    bool fits(int r, int c, const LayoutCell& cell) const {
        if (c > 0) {
            const LayoutCell& left = layout_.at(r, c - 1);
            if (!licenses(spec_, {left.image, side_facing(Side::Right, left.quarter_turns)},
                          {cell.image, side_facing(Side::Left, cell.quarter_turns)})) {
                return false;
            }
        }
        if (r > 0) {
            const LayoutCell& up = layout_.at(r - 1, c);
            if (!licenses(spec_, {up.image, side_facing(Side::Bottom, up.quarter_turns)},
                          {cell.image, side_facing(Side::Top, cell.quarter_turns)})) {
                return false;
            }
        }
        return true;
    }

    bool place(std::size_t index) {
        if (index == layout_.cells.size()) {
            return true;
        }
        const int r = static_cast<int>(index) / cols_;
        const int c = static_cast<int>(index) % cols_;
        std::vector<LayoutCell> order = candidates_;
        std::mt19937_64 rng(mix_seed(seed_, index));
        std::shuffle(order.begin(), order.end(), rng);
        for (const LayoutCell& cell : order) {
            if (fits(r, c, cell)) {
                layout_.cells[index] = cell;
                if (place(index + 1)) {
                    return true;
                }
            }
        }
        return false;
    }

    const ConstraintSpec& spec_;
    int rows_;
    int cols_;
    std::uint64_t seed_;
    std::vector<LayoutCell> candidates_;
    Layout layout_;
};

} // namespace

Layout solve_layout(const ValidatedSpec& spec, int rows, int cols, std::uint64_t seed) {
    if (rows < 1 || cols < 1) {
        throw Error(ErrorCode::InvalidArgument, "layout needs at least one row and one column");
    }
    LayoutSearch search(spec.spec, rows, cols, seed);
    if (!search.run()) {
        throw Error(ErrorCode::NoValidLayout, "no " + std::to_string(rows) + "x" +
                                                  std::to_string(cols) +
                                                  " arrangement satisfies the constraints");
    }
    return search.layout();
}

bool audit_layout(const ConstraintSpec& spec, const Layout& layout) {
    if (layout.rows < 1 || layout.cols < 1 ||
        layout.cells.size() != static_cast<std::size_t>(layout.rows) * layout.cols) {
        return false;
    }
    // For each cell, which original side ended up at each compass position.
    auto placed = [&](const LayoutCell& cell) {
        std::array<Side, 4> at{};
        for (Side s : kAllSides) {
            at[static_cast<std::size_t>((clockwise_index(s) + cell.quarter_turns % 4 + 4) % 4)] = s;
        }
        return at;
    };
    constexpr std::size_t kRight = 1;
    constexpr std::size_t kBottom = 2;
    constexpr std::size_t kLeft = 3;
    constexpr std::size_t kTop = 0;
    for (int r = 0; r < layout.rows; ++r) {
        for (int c = 0; c < layout.cols; ++c) {
            const LayoutCell& here = layout.at(r, c);
            if (here.image >= spec.images.size()) {
                return false;
            }
            const auto sides = placed(here);
            if (c + 1 < layout.cols) {
                const LayoutCell& next = layout.at(r, c + 1);
                const auto other = placed(next);
                if (!licenses(spec, {here.image, sides[kRight]}, {next.image, other[kLeft]})) {
                    return false;
                }
            }
            if (r + 1 < layout.rows) {
                const LayoutCell& below = layout.at(r + 1, c);
                const auto other = placed(below);
                if (!licenses(spec, {here.image, sides[kBottom]}, {below.image, other[kTop]})) {
                    return false;
                }
            }
        }
    }
    return true;
}

PixelImage assemble(std::span<const PixelImage> images, const Layout& layout) {
    if (images.empty() || layout.cells.empty()) {
        throw Error(ErrorCode::DimMismatch, "nothing to assemble");
    }
    const PixelImage& first = images.front();
    for (const PixelImage& img : images) {
        if (img.height != first.height || img.width != first.width || img.channels != first.channels) {
            throw Error(ErrorCode::DimMismatch, "assembled images must share dimensions");
        }
    }
    std::vector<PixelImage> tiles;
    tiles.reserve(layout.cells.size());
    for (const LayoutCell& cell : layout.cells) {
        if (cell.image >= images.size()) {
            throw Error(ErrorCode::DimMismatch, "layout references a missing image");
        }
        tiles.push_back(rotate_clockwise(images[cell.image], cell.quarter_turns));
        if (tiles.back().height != first.height || tiles.back().width != first.width) {
            throw Error(ErrorCode::DimMismatch, "rotated tile does not fit a non-square cell");
        }
    }
    const int th = first.height;
    const int tw = first.width;
    PixelImage sheet(layout.rows * th, layout.cols * tw, first.channels);
    for (int r = 0; r < layout.rows; ++r) {
        for (int c = 0; c < layout.cols; ++c) {
            const PixelImage& tile = tiles[static_cast<std::size_t>(r) * layout.cols + c];
            for (int y = 0; y < th; ++y) {
                for (int x = 0; x < tw; ++x) {
                    for (int ch = 0; ch < first.channels; ++ch) {
                        sheet.at(r * th + y, c * tw + x, ch) = tile.at(y, x, ch);
                    }
                }
            }
        }
    }
    return sheet;
}

std::string layout_text(const ConstraintSpec& spec, const Layout& layout) {
    std::ostringstream out;
    for (int r = 0; r < layout.rows; ++r) {
        for (int c = 0; c < layout.cols; ++c) {
            const LayoutCell& cell = layout.at(r, c);
            out << (c ? " " : "")
                << (cell.image < spec.images.size() ? spec.images[cell.image].id : "?") << "@"
                << ((cell.quarter_turns % 4 + 4) % 4) * 90;
        }
        out << "\n";
    }
    return out.str();
}

} // namespace tilecraft
