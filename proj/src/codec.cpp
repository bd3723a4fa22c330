// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#include "tilecraft/imaging.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace tilecraft {

PixelImage::PixelImage(int h, int w, int c, double fill)
    : height(h), width(w), channels(c),
      data(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) * static_cast<std::size_t>(c),
           fill) {}

double PixelImage::gray(int row, int col) const {
    double sum = 0.0;
    for (int ch = 0; ch < channels; ++ch) {
        sum += at(row, col, ch);
    }
    return sum / channels;
}

PixelImage rotate_clockwise(const PixelImage& image, int quarter_turns) {
    // Reuse the lattice rotation; the value layout is identical.
    LatentGrid g;
    g.height = image.height;
    g.width = image.width;
    g.depth = image.channels;
    g.data = image.data;
    LatentGrid r = rotate_clockwise(g, quarter_turns);
    PixelImage out;
    out.height = r.height;
    out.width = r.width;
    out.channels = r.depth;
    out.data = std::move(r.data);
    return out;
}

PixelImage crop(const PixelImage& image, int row, int col, int rows, int cols) {
    if (row < 0 || col < 0 || rows < 0 || cols < 0 || row + rows > image.height ||
        col + cols > image.width) {
        throw Error(ErrorCode::DimMismatch, "crop window leaves the image");
    }
    PixelImage out(rows, cols, image.channels);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            for (int ch = 0; ch < image.channels; ++ch) {
                out.at(r, c, ch) = image.at(row + r, col + c, ch);
            }
        }
    }
    return out;
}

std::string codec_name(const Codec& codec) {
    return codec.kind == Codec::Kind::Identity ? "identity" : "upsample" + std::to_string(codec.factor);
}

std::optional<Codec> codec_from_string(std::string_view name) {
    if (name == "identity") {
        return Codec::identity();
    }
    constexpr std::string_view prefix = "upsample";
    if (name.substr(0, prefix.size()) == prefix) {
        int f = 0;
        const auto digits = name.substr(prefix.size());
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), f);
        if (ec == std::errc{} && ptr == digits.data() + digits.size() && f >= 1) {
            return Codec::upsample(f);
        }
    }
    return std::nullopt;
}

namespace {

double latent_to_pixel_channel(const LatentGrid& g, int r, int c, int out_channel, int out_channels) {
    if (out_channels == 3) {
        return g.at(r, c, out_channel);
    }
    if (g.depth == 1) {
        return g.at(r, c, 0);
    }
    return 0.5 * (g.at(r, c, 0) + g.at(r, c, 1));
}

} // namespace

PixelImage decode(const LatentGrid& latent, const Codec& codec) {
    const int channels = latent.depth >= 3 ? 3 : 1;
    const int f = codec.scale();
    if (f < 1) {
        throw Error(ErrorCode::InvalidArgument, "codec scale must be >= 1");
    }
    PixelImage out(latent.height * f, latent.width * f, channels);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            for (int ch = 0; ch < channels; ++ch) {
                double v = 0.0;
                if (f == 1) {
                    v = latent_to_pixel_channel(latent, y, x, ch, channels);
                } else {
                    // Bilinear sample at the pixel centre, edge-clamped.
                    const double u = (y + 0.5) / f - 0.5;
                    const double s = (x + 0.5) / f - 0.5;
                    const int r0 = static_cast<int>(std::floor(u));
                    const int c0 = static_cast<int>(std::floor(s));
                    const double fr = u - r0;
                    const double fc = s - c0;
                    auto sample = [&](int r, int c) {
                        r = std::clamp(r, 0, latent.height - 1);
                        c = std::clamp(c, 0, latent.width - 1);
                        return latent_to_pixel_channel(latent, r, c, ch, channels);
                    };
                    v = (1 - fr) * ((1 - fc) * sample(r0, c0) + fc * sample(r0, c0 + 1)) +
                        fr * ((1 - fc) * sample(r0 + 1, c0) + fc * sample(r0 + 1, c0 + 1));
                }
                out.at(y, x, ch) = std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
            }
        }
    }
    return out;
}

LatentGrid encode(const PixelImage& image, int depth, const Codec& codec) {
    const int f = codec.scale();
    if (image.height % f != 0 || image.width % f != 0) {
        throw Error(ErrorCode::DimMismatch, "image dims are not a multiple of the codec scale");
    }
    LatentGrid out(image.height / f, image.width / f, depth);
    for (int r = 0; r < out.height; ++r) {
        for (int c = 0; c < out.width; ++c) {
            for (int d = 0; d < depth; ++d) {
                double sum = 0.0;
                for (int dy = 0; dy < f; ++dy) {
                    for (int dx = 0; dx < f; ++dx) {
                        const int y = r * f + dy;
                        const int x = c * f + dx;
                        if (image.channels == 1) {
                            sum += image.at(y, x, 0);
                        } else if (d < 3) {
                            sum += image.at(y, x, d);
                        }
                    }
                }
                out.at(r, c, d) = sum / (f * f);
            }
        }
    }
    return out;
}

PixelImage decode_and_crop(const LatentCanvas& canvas, const Codec& codec) {
    const int f = codec.scale();
    const PixelImage full = decode(canvas.grid, codec);
    return crop(full, canvas.pads.top * f, canvas.pads.left * f, canvas.interior_height() * f,
                canvas.interior_width() * f);
}

} // namespace tilecraft
