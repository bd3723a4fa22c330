// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "tilecraft/tilespec.hpp"

using namespace tilecraft;

TEST_CASE("parse a full document") {
    const auto r = tilespec::parse(
        "# header comment\n"
        "set w = 12\n"
        "set height = 32\n"
        "image I1 prompt \"a \\\"quoted\\\" forest\" init \"forest.png\"\n"
        "image I2 prompt \"desert\"   # trailing comment\r\n"
        "tile C1: {I1.right, I2.right} ~ {I1.left, I2.left}\n"
        "tile C2: {I1.bottom} ~ {I2.top} w=4\n");
    REQUIRE(r.ok());
    const ConstraintSpec& s = *r.spec;
    REQUIRE(s.images.size() == 2);
    CHECK(s.images[0].prompt == "a \"quoted\" forest");
    CHECK(s.images[0].init_path == "forest.png");
    CHECK_FALSE(s.images[1].init_path.has_value());
    REQUIRE(s.constraints.size() == 2);
    CHECK(s.constraints[0].context_window == 12);
    CHECK(s.constraints[1].context_window == 4);
    CHECK(s.constraints[0].set_a == std::vector<SideRef>{{0, Side::Right}, {1, Side::Right}});
    CHECK(s.constraints[1].set_b == std::vector<SideRef>{{1, Side::Top}});
    const LatentDims dims = tilespec::latent_dims_from_settings(s);
    CHECK(dims == LatentDims{32, 64, 1});
}

TEST_CASE("default window is 16 without a setting") {
    const auto r = tilespec::parse("image A prompt \"x\"\ntile C: {A.right} ~ {A.left}\n");
    REQUIRE(r.ok());
    CHECK(r.spec->constraints[0].context_window == 16);
}

TEST_CASE("undeclared image points at the side reference") {
    const std::string text =
        "image I1 prompt \"x\"\n"
        "tile C1: {I1.right} ~ {I9.right}\n";
    const auto r = tilespec::parse(text);
    CHECK_FALSE(r.ok());
    REQUIRE(r.errors.size() == 1);
    const auto& e = r.errors[0];
    CHECK(e.kind == tilespec::ErrorKind::Reference);
    CHECK(e.span.line == 2);
    CHECK(e.span.column == 24);
    CHECK(e.span.length == 8); // "I9.right"
    CHECK(tilespec::format_error("a.tilespec", e).rfind("a.tilespec:2:24: reference error:", 0) == 0);
}

TEST_CASE("errors on several lines are all reported, in order") {
    const auto r = tilespec::parse(
        "image I1 prompt \"x\"\n"
        "tile C1 {I1.right} ~ {I1.left}\n" // missing ':'
        "image I2 prompt \"unterminated\n"
        "tile C2: {I1.up} ~ {I1.left}\n"   // bad side
        "tile C3: {I1.right} ~ {I1.left} w=4\n");
    CHECK_FALSE(r.ok());
    REQUIRE(r.errors.size() >= 3);
    CHECK(r.errors[0].span.line == 2);
    CHECK(r.errors[0].kind == tilespec::ErrorKind::Syntax);
    CHECK(r.errors[1].span.line == 3);
    CHECK(r.errors[1].kind == tilespec::ErrorKind::Lex);
    CHECK(r.errors[2].span.line == 4);
    for (std::size_t i = 1; i < r.errors.size(); ++i) {
        CHECK(r.errors[i - 1].span.line <= r.errors[i].span.line);
    }
}

TEST_CASE("columns count code points, not bytes") {
    const auto r = tilespec::parse("image I1 prompt \"éé\" ?\n");
    REQUIRE_FALSE(r.errors.empty());
    CHECK(r.errors[0].span.line == 1);
    CHECK(r.errors[0].span.column == 22);
}

TEST_CASE("duplicate declarations are reference errors") {
    const auto r = tilespec::parse(
        "image I1 prompt \"x\"\nimage I1 prompt \"y\"\n"
        "tile C: {I1.right} ~ {I1.left}\ntile C: {I1.top} ~ {I1.bottom}\n");
    REQUIRE(r.errors.size() == 2);
    CHECK(r.errors[0].kind == tilespec::ErrorKind::Reference);
    CHECK(r.errors[0].span.line == 2);
    CHECK(r.errors[1].span.line == 4);
}

TEST_CASE("serialize is canonical and parses back to the same spec") {
    std::mt19937_64 rng(2026);
    const char* prompts[] = {"plain", "with \"quotes\"", "tab\tand\\slash", "new\nline", ""};
    for (int trial = 0; trial < 200; ++trial) {
        ConstraintSpec s;
        const int n = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < n; ++i) {
            ImageSlot slot{"img" + std::to_string((i * 7 + trial) % 10) + "_" + std::to_string(i),
                           prompts[rng() % 5], std::nullopt};
            if (rng() % 3 == 0) slot.init_path = "in/" + std::to_string(i) + ".png";
            s.images.push_back(slot);
        }
        const int m = static_cast<int>(rng() % 4);
        for (int j = 0; j < m; ++j) {
            Constraint c;
            c.id = "C" + std::to_string(m - j);
            c.context_window = static_cast<int>(rng() % 33);
            for (auto* set : {&c.set_a, &c.set_b}) {
                const int k = 1 + static_cast<int>(rng() % 3);
                for (int q = 0; q < k; ++q) set->push_back({rng() % n, kAllSides[rng() % 4]});
            }
            s.constraints.push_back(c);
        }
        if (rng() % 2) s.settings["height"] = "48";
        if (rng() % 2) s.settings["note"] = "two words";

        const std::string text = tilespec::serialize(s);
        const auto back = tilespec::parse(text);
        REQUIRE_MESSAGE(back.ok(), text);
        CHECK(structurally_equal(s, *back.spec));
        CHECK(back.spec->settings == s.settings);
        CHECK(tilespec::serialize(*back.spec) == text);
    }
}
