// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "tilecraft/imaging.hpp"
#include "tilecraft/tilespec.hpp"

using namespace tilecraft;

namespace {

ValidatedSpec spec_from(const std::string& text) {
    auto parsed = tilespec::parse(text);
    REQUIRE(parsed.ok());
    return validate_or_throw(*parsed.spec, LatentDims{4, 4, 1});
}

// Every assignment of two images to three cells, without rotation.
std::vector<std::vector<std::size_t>> all_rows_of_three() {
    std::vector<std::vector<std::size_t>> out;
    for (int code = 0; code < 8; ++code) out.push_back({std::size_t(code & 1), std::size_t((code >> 1) & 1), std::size_t((code >> 2) & 1)});
    return out;
}

} // namespace

TEST_CASE("codec names round-trip") {
    CHECK(codec_name(Codec::identity()) == "identity");
    CHECK(codec_name(Codec::upsample(4)) == "upsample4");
    CHECK(codec_from_string("upsample8")->scale() == 8);
    CHECK(codec_from_string("identity")->scale() == 1);
    CHECK_FALSE(codec_from_string("upsample0").has_value());
    CHECK_FALSE(codec_from_string("upsample").has_value());
    CHECK_FALSE(codec_from_string("jpeg").has_value());
}

TEST_CASE("identity decode maps channels and clamps") {
    LatentGrid g(1, 3, 1);
    g.data = {-0.5, 0.25, 1.5};
    const PixelImage p = decode(g, Codec::identity());
    CHECK(p.channels == 1);
    CHECK(p.data == std::vector<double>{0.0, 0.25, 1.0});

    LatentGrid two(1, 1, 2);
    two.data = {0.2, 0.6};
    CHECK(decode(two, Codec::identity()).data[0] == doctest::Approx(0.4));

    LatentGrid four(1, 1, 4);
    four.data = {0.1, 0.2, 0.3, 0.9};
    const PixelImage rgb = decode(four, Codec::identity());
    CHECK(rgb.channels == 3);
    CHECK(rgb.data == std::vector<double>{0.1, 0.2, 0.3});
}

TEST_CASE("upsampling is bilinear at pixel centres with clamped edges") {
    LatentGrid g(2, 2, 1);
    g.data = {0.0, 0.4, 0.8, 0.4};
    const PixelImage p = decode(g, Codec::upsample(2));
    REQUIRE(p.height == 4);
    // Pixel (y, x) samples latent coordinate ((y + .5) / 2 - .5, (x + .5) / 2 - .5).
    auto latent = [&](double r, double c) {
        r = std::clamp(r, 0.0, 1.0);
        c = std::clamp(c, 0.0, 1.0);
        const double top = (1 - c) * 0.0 + c * 0.4, bottom = (1 - c) * 0.8 + c * 0.4;
        return (1 - r) * top + r * bottom;
    };
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x)
            CHECK(p.at(y, x, 0) == doctest::Approx(latent((y + 0.5) / 2 - 0.5, (x + 0.5) / 2 - 0.5)));

    // Box-average encode of a constant-block image returns the blocks.
    PixelImage blocks(4, 4, 1);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) blocks.at(y, x, 0) = g.at(y / 2, x / 2, 0);
    CHECK(encode(blocks, 1, Codec::upsample(2)) == g);
    CHECK_THROWS_AS(encode(PixelImage(3, 4, 1), 1, Codec::upsample(2)), Error);
}

TEST_CASE("decode_and_crop drops pad times scale pixels per side") {
    LatentCanvas canvas(LatentDims{3, 4, 1}, Pads{1, 2, 0, 1}, 0.9);
    LatentGrid inner(3, 4, 1, 0.1);
    canvas.set_interior(inner);
    const PixelImage p = decode_and_crop(canvas, Codec::identity());
    CHECK(p.height == 3);
    CHECK(p.width == 4);
    for (double v : p.data) CHECK(v == doctest::Approx(0.1));
    const PixelImage up = decode_and_crop(canvas, Codec::upsample(4));
    CHECK(up.height == 12);
    CHECK(up.width == 16);
    // Interior pixels away from the crop border see only interior latents.
    CHECK(up.at(6, 8, 0) == doctest::Approx(0.1));
}

TEST_CASE("gray image encode fills every latent channel") {
    PixelImage img(2, 2, 1, 0.3);
    const LatentGrid g = encode(img, 4, Codec::identity());
    for (double v : g.data) CHECK(v == doctest::Approx(0.3));
    PixelImage rgb(1, 1, 3);
    rgb.data = {0.1, 0.2, 0.3};
    const LatentGrid g4 = encode(rgb, 4, Codec::identity());
    CHECK(g4.data == std::vector<double>{0.1, 0.2, 0.3, 0.0});
}

TEST_CASE("layout solver agrees with brute force on a 1x3 row of two images") {
    const ValidatedSpec spec = spec_from(
        "image A prompt \"a\"\nimage B prompt \"b\"\n"
        "tile C1: {A.right} ~ {B.left} w=1\ntile C2: {B.right} ~ {B.left} w=1\n");
    int feasible = 0;
    for (const auto& row : all_rows_of_three()) {
        feasible += oracle::layout_ok(spec.spec, 1, 3, {{row[0], 0}, {row[1], 0}, {row[2], 0}});
    }
    CHECK(feasible == 2); // A B B and B B B
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Layout l = solve_layout(spec, 1, 3, seed);
        CHECK(audit_layout(spec.spec, l));
        CHECK(l.at(0, 1).image == 1);
        CHECK(l.at(0, 2).image == 1);
    }
    CHECK_THROWS_AS(solve_layout(spec, 2, 1, 0), Error);
}

TEST_CASE("rotations are used only for cross-axis specs") {
    const ValidatedSpec cross = spec_from("image A prompt \"a\"\ntile C: {A.top} ~ {A.left} w=1\n");
    const Layout l = solve_layout(cross, 1, 2, 3);
    CHECK(audit_layout(cross.spec, l));
    CHECK(oracle::layout_ok(cross.spec, 1, 2, {{l.cells[0].image, l.cells[0].quarter_turns},
                                                {l.cells[1].image, l.cells[1].quarter_turns}}));
    for (Side s : kAllSides)
        for (int k = -4; k <= 4; ++k) CHECK(side_facing(s, k) == oracle::original_side(s, k));

    const ValidatedSpec straight = spec_from("image A prompt \"a\"\ntile C: {A.right} ~ {A.left} w=1\n");
    const Layout m = solve_layout(straight, 1, 3, 0);
    for (const auto& cell : m.cells) CHECK(cell.quarter_turns == 0);
    CHECK_THROWS_AS(solve_layout(straight, 2, 2, 0), Error); // nothing licenses top/bottom
}

TEST_CASE("audit catches unlicensed neighbours") {
    const ValidatedSpec spec = spec_from("image A prompt \"a\"\nimage B prompt \"b\"\ntile C: {A.right} ~ {B.left} w=1\n");
    CHECK(audit_layout(spec.spec, Layout{1, 2, {{0, 0}, {1, 0}}}));
    CHECK_FALSE(audit_layout(spec.spec, Layout{1, 2, {{1, 0}, {0, 0}}}));
    CHECK_FALSE(audit_layout(spec.spec, Layout{1, 2, {{0, 0}, {0, 0}}}));
    CHECK(layout_text(spec.spec, Layout{1, 2, {{0, 0}, {1, 0}}}) == "A@0 B@0\n");
}

TEST_CASE("assemble abuts rotated tiles") {
    PixelImage a(2, 2, 1), b(2, 2, 1);
    a.data = {0.1, 0.2, 0.3, 0.4};
    b.data = {0.5, 0.6, 0.7, 0.8};
    const std::vector<PixelImage> images{a, b};
    const PixelImage sheet = assemble(images, Layout{1, 2, {{0, 0}, {1, 1}}});
    REQUIRE(sheet.width == 4);
    CHECK(sheet.data == std::vector<double>{0.1, 0.2, 0.7, 0.5, 0.3, 0.4, 0.8, 0.6});
    CHECK_THROWS_AS(assemble(std::vector<PixelImage>{a, PixelImage(3, 2, 1)}, Layout{1, 2, {{0, 0}, {1, 0}}}),
                    Error);
    CHECK(layout_text(spec_from("image A prompt \"a\"\nimage B prompt \"b\"\ntile C: {A.top} ~ {B.left} w=1\n").spec,
                      Layout{2, 1, {{0, 0}, {1, 3}}}) == "A@0\nB@270\n");
}

TEST_CASE("PGM and PNG round trips at 8-bit precision") {
    std::mt19937_64 rng(9);
    const auto dir = std::filesystem::temp_directory_path();
    for (int channels : {1, 3}) {
        PixelImage img = oracle::random_image(rng, 5, 7, channels);
        for (double& v : img.data) v = std::round(v * 255.0) / 255.0;
        const PixelImage png = decode_image_bytes(encode_png(img));
        CHECK(png == img);
        write_image(dir / "tilecraft_rt.png", img);
        CHECK(read_image(dir / "tilecraft_rt.png") == img);
        if (channels == 1) {
            CHECK(decode_image_bytes(encode_pgm(img)) == img);
            write_image(dir / "tilecraft_rt.pgm", img);
            CHECK(read_image(dir / "tilecraft_rt.pgm") == img);
        } else {
            CHECK_THROWS_AS(encode_pgm(img), Error);
        }
    }
    std::filesystem::remove(dir / "tilecraft_rt.png");
    std::filesystem::remove(dir / "tilecraft_rt.pgm");
}

TEST_CASE("damaged files are reported by kind") {
    auto code_of = [](const std::vector<std::uint8_t>& bytes) {
        try {
            decode_image_bytes(bytes);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Io;
    };
    PixelImage img(8, 8, 1, 0.5);
    auto png = encode_png(img);
    png.resize(png.size() / 2);
    CHECK(code_of(png) == ErrorCode::CorruptFile);
    auto pgm = encode_pgm(img);
    pgm.resize(pgm.size() - 5);
    CHECK(code_of(pgm) == ErrorCode::CorruptFile);
    CHECK(code_of({'G', 'I', 'F', '8'}) == ErrorCode::UnsupportedFormat);
    const std::string p16 = "P5\n1 1\n65535\n\x01\x02";
    CHECK(code_of(std::vector<std::uint8_t>(p16.begin(), p16.end())) == ErrorCode::UnsupportedFormat);
    CHECK_THROWS_AS(write_image("x.bmp", img), Error);
    CHECK_THROWS_AS(read_image("/nonexistent/nope.png"), Error);
}
