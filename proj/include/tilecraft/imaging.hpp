// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tilecraft/constraint.hpp"
#include "tilecraft/latent.hpp"

namespace tilecraft {

/// Row-major (row, col, channel) pixels in [0, 1]; 1 (gray) or 3 (RGB) channels.
struct PixelImage {
    int height = 0;
    int width = 0;
    int channels = 1;
    std::vector<double> data;

    PixelImage() = default;
    PixelImage(int h, int w, int c, double fill = 0.0);

    double& at(int row, int col, int channel) {
        return data[(static_cast<std::size_t>(row) * width + col) * channels + channel];
    }
    double at(int row, int col, int channel) const {
        return data[(static_cast<std::size_t>(row) * width + col) * channels + channel];
    }
    /// Unweighted channel mean.
    double gray(int row, int col) const;

    friend bool operator==(const PixelImage&, const PixelImage&) = default;
};

PixelImage rotate_clockwise(const PixelImage& image, int quarter_turns);
PixelImage crop(const PixelImage& image, int row, int col, int rows, int cols);

struct Codec {
    enum class Kind { Identity, LinearUpsample };
    Kind kind = Kind::Identity;
    int factor = 1;

    static Codec identity() { return {}; }
    static Codec upsample(int f) { return {Kind::LinearUpsample, f}; }

    int scale() const { return kind == Kind::Identity ? 1 : factor; }
};

std::string codec_name(const Codec& codec);
/// "identity" or "upsampleN" (e.g. "upsample4").
std::optional<Codec> codec_from_string(std::string_view name);

/// Latent -> pixels. One channel maps to gray, three or more to RGB (first three
/// channels); two channels are averaged to gray. Values are clamped to [0, 1].
PixelImage decode(const LatentGrid& latent, const Codec& codec);

/// Pixels -> latent of the given depth (the img2img encoder). Gray fills every
/// channel; RGB fills the first three and zeroes the rest.
LatentGrid encode(const PixelImage& image, int depth, const Codec& codec);

/// Decode the whole padded canvas, then drop pad * scale pixels on every padded side.
PixelImage decode_and_crop(const LatentCanvas& canvas, const Codec& codec);

struct LayoutCell {
    std::size_t image = 0;
    int quarter_turns = 0; ///< Clockwise rotation in 90 degree units.

    friend bool operator==(const LayoutCell&, const LayoutCell&) = default;
};

struct Layout {
    int rows = 0;
    int cols = 0;
    std::vector<LayoutCell> cells; ///< Row-major.

    const LayoutCell& at(int r, int c) const {
        return cells[static_cast<std::size_t>(r) * cols + c];
    }
    friend bool operator==(const Layout&, const Layout&) = default;
};

/// The original side of an image that faces `facing` after rotating it clockwise.
Side side_facing(Side facing, int quarter_turns);

/// Backtracking search in row-major order with seed-shuffled candidates; throws
/// NoValidLayout when no assignment licenses every interior adjacency.
Layout solve_layout(const ValidatedSpec& spec, int rows, int cols, std::uint64_t seed);

/// Every touching pair of sides in the layout is licensed by some constraint.
bool audit_layout(const ConstraintSpec& spec, const Layout& layout);

/// Abut the (rotated) images cell by cell; no overlap and no blending.
PixelImage assemble(std::span<const PixelImage> images, const Layout& layout);

/// Layout sidecar text: one line per row, cells as "<image id>@<degrees>".
std::string layout_text(const ConstraintSpec& spec, const Layout& layout);

/// PGM (P5, maxval 255) or 8-bit PNG, chosen by content on read and by extension on write.
PixelImage read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const PixelImage& image);

std::vector<std::uint8_t> encode_pgm(const PixelImage& image);
std::vector<std::uint8_t> encode_png(const PixelImage& image);
PixelImage decode_image_bytes(std::span<const std::uint8_t> bytes);

} // namespace tilecraft
