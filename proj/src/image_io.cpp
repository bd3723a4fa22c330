// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#include "tilecraft/imaging.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace tilecraft {

namespace {

std::uint8_t quantize(double v) {
    if (!std::isfinite(v)) {
        v = 0.0;
    }
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

bool is_png(std::span<const std::uint8_t> bytes) {
    static constexpr std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
    return bytes.size() >= 8 && std::equal(sig, sig + 8, bytes.begin());
}

bool is_space(std::uint8_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

// Reads one ASCII header integer, skipping whitespace and '#' comments.
int pgm_header_int(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        if (is_space(bytes[pos])) {
            ++pos;
        } else if (bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') {
                ++pos;
            }
        } else {
            break;
        }
    }
    long value = 0;
    const std::size_t start = pos;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
        value = value * 10 + (bytes[pos] - '0');
        if (value > (1L << 24)) {
            throw Error(ErrorCode::CorruptFile, "PGM header value too large");
        }
        ++pos;
    }
    if (pos == start) {
        throw Error(ErrorCode::CorruptFile, "malformed PGM header");
    }
    return static_cast<int>(value);
}

PixelImage decode_pgm(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 2;
    const int width = pgm_header_int(bytes, pos);
    const int height = pgm_header_int(bytes, pos);
    const int maxval = pgm_header_int(bytes, pos);
    if (pos >= bytes.size() || !is_space(bytes[pos])) {
        throw Error(ErrorCode::CorruptFile, "malformed PGM header");
    }
    ++pos;
    if (width < 1 || height < 1 || maxval < 1 || maxval > 255) {
        throw Error(ErrorCode::UnsupportedFormat, "only 8-bit PGM with positive dims is supported");
    }
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() - pos < n) {
        throw Error(ErrorCode::CorruptFile, "PGM pixel data is truncated");
    }
    PixelImage image(height, width, 1);
    for (std::size_t i = 0; i < n; ++i) {
        image.data[i] = static_cast<double>(bytes[pos + i]) / maxval;
    }
    return image;
}

PixelImage decode_png(std::span<const std::uint8_t> bytes) {
    png_image img;
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
        throw Error(ErrorCode::CorruptFile, std::string("PNG header: ") + img.message);
    }
    const bool color = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
    img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    const int channels = color ? 3 : 1;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(img));
    if (!png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr)) {
        png_image_free(&img);
        throw Error(ErrorCode::CorruptFile, std::string("PNG data: ") + img.message);
    }
    PixelImage image(static_cast<int>(img.height), static_cast<int>(img.width), channels);
    for (std::size_t i = 0; i < image.data.size(); ++i) {
        image.data[i] = buffer[i] / 255.0;
    }
    return image;
}

} // namespace

std::vector<std::uint8_t> encode_pgm(const PixelImage& image) {
    if (image.channels != 1) {
        throw Error(ErrorCode::UnsupportedFormat, "PGM holds gray images only");
    }
    const std::string header =
        "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + image.data.size());
    for (double v : image.data) {
        out.push_back(quantize(v));
    }
    return out;
}

std::vector<std::uint8_t> encode_png(const PixelImage& image) {
    if (image.channels != 1 && image.channels != 3) {
        throw Error(ErrorCode::UnsupportedFormat, "PNG output needs 1 or 3 channels");
    }
    std::vector<std::uint8_t> pixels(image.data.size());
    std::transform(image.data.begin(), image.data.end(), pixels.begin(), quantize);

    png_image img;
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(image.width);
    img.height = static_cast<png_uint_32>(image.height);
    img.format = image.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&img, nullptr, &size, 0, pixels.data(), 0, nullptr)) {
        throw Error(ErrorCode::Io, std::string("PNG encode: ") + img.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&img, out.data(), &size, 0, pixels.data(), 0, nullptr)) {
        throw Error(ErrorCode::Io, std::string("PNG encode: ") + img.message);
    }
    out.resize(size);
    return out;
}

PixelImage decode_image_bytes(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
        return decode_pgm(bytes);
    }
    if (is_png(bytes)) {
        return decode_png(bytes);
    }
    throw Error(ErrorCode::UnsupportedFormat, "neither binary PGM nor PNG");
}

PixelImage read_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_image_bytes(bytes);
}

void write_image(const std::filesystem::path& path, const PixelImage& image) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::vector<std::uint8_t> bytes;
    if (ext == ".pgm") {
        bytes = encode_pgm(image);
    } else if (ext == ".png") {
        bytes = encode_png(image);
    } else {
        throw Error(ErrorCode::UnsupportedFormat, "unknown image extension '" + ext + "'");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

} // namespace tilecraft
