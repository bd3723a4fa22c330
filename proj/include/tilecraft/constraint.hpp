// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tilecraft/error.hpp"

namespace tilecraft {

/// Default context window (latent cells) for constraints that do not state one.
inline constexpr int kDefaultContextWindow = 16;

enum class Side { Left, Right, Top, Bottom };

inline constexpr std::array<Side, 4> kAllSides = {Side::Left, Side::Right, Side::Top, Side::Bottom};

std::string_view to_string(Side side);
std::optional<Side> side_from_string(std::string_view name);

Side opposite(Side side);
bool is_vertical(Side side); ///< Left and Right edges run vertically.

/// Clockwise position of a side: Top=0, Right=1, Bottom=2, Left=3.
int clockwise_index(Side side);
Side side_at_clockwise_index(int index);

/// 1-based location in a text document.
struct SourceSpan {
    int line = 1;
    int column = 1;
    int length = 0;
};

struct SideRef {
    std::size_t image = 0;
    Side side = Side::Left;

    friend bool operator==(const SideRef&, const SideRef&) = default;
    friend auto operator<=>(const SideRef&, const SideRef&) = default;
};

/// C = {A, B}: every side of `set_a` may abut every side of `set_b`.
struct Constraint {
    std::string id;
    std::vector<SideRef> set_a;
    std::vector<SideRef> set_b;
    int context_window = kDefaultContextWindow;

    // Parser provenance; ignored by structural comparison.
    std::optional<SourceSpan> span;
    std::optional<SourceSpan> window_span;
};

bool structurally_equal(const Constraint& lhs, const Constraint& rhs);

struct ImageSlot {
    std::string id;
    std::string prompt;
    std::optional<std::string> init_path;

    friend bool operator==(const ImageSlot&, const ImageSlot&) = default;
};

struct ConstraintSpec {
    std::vector<ImageSlot> images;
    std::vector<Constraint> constraints;
    std::map<std::string, std::string> settings;

    std::optional<std::size_t> find_image(std::string_view id) const;
};

bool structurally_equal(const ConstraintSpec& lhs, const ConstraintSpec& rhs);

struct LatentDims {
    int height = 64;
    int width = 64;
    int depth = 1;

    friend bool operator==(const LatentDims&, const LatentDims&) = default;
};

enum class ScenarioKind { SelfTiling, OneToOne, ManyToMany };

std::string_view to_string(ScenarioKind kind);

struct Pads {
    int left = 0;
    int right = 0;
    int top = 0;
    int bottom = 0;

    int get(Side side) const;
    int& get(Side side);

    friend bool operator==(const Pads&, const Pads&) = default;
};

/// Per-image pad widths, indexed by image.
struct PaddingPlan {
    std::vector<Pads> pads;

    friend bool operator==(const PaddingPlan&, const PaddingPlan&) = default;
};

struct Violation {
    ErrorCode kind;
    std::string message;
    std::optional<std::size_t> constraint;
    std::optional<SourceSpan> span;
};

struct ValidatedSpec {
    ConstraintSpec spec;
    LatentDims dims;
    std::vector<ScenarioKind> kinds; ///< One per constraint.
    PaddingPlan padding;
};

struct ValidationResult {
    std::optional<ValidatedSpec> value;
    std::vector<Violation> violations;

    bool ok() const { return value.has_value(); }
};

ValidationResult validate(const ConstraintSpec& spec, const LatentDims& dims);

/// Like validate(), but throws an Error carrying the first violation.
ValidatedSpec validate_or_throw(const ConstraintSpec& spec, const LatentDims& dims);

ScenarioKind classify(const Constraint& constraint);

PaddingPlan padding_plan(const ConstraintSpec& spec);

/// True if the constraint lets side `a` abut side `b` (either orientation of the pair).
bool licenses(const Constraint& constraint, const SideRef& a, const SideRef& b);
bool licenses(const ConstraintSpec& spec, const SideRef& a, const SideRef& b);

/// True if some constraint pairs a vertical side with a horizontal one.
bool has_cross_axis(const ConstraintSpec& spec);

std::string format_side_ref(const ConstraintSpec& spec, const SideRef& ref);

} // namespace tilecraft
