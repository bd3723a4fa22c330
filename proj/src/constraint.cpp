// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#include "tilecraft/constraint.hpp"

#include <algorithm>
#include <set>

namespace tilecraft {

std::string_view to_string(Side side) {
    switch (side) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Top: return "top";
    case Side::Bottom: return "bottom";
    }
    return "?";
}

std::optional<Side> side_from_string(std::string_view name) {
    for (Side s : kAllSides) {
        if (to_string(s) == name) {
            return s;
        }
    }
    return std::nullopt;
}

Side opposite(Side side) {
    switch (side) {
    case Side::Left: return Side::Right;
    case Side::Right: return Side::Left;
    case Side::Top: return Side::Bottom;
    case Side::Bottom: return Side::Top;
    }
    return side;
}

bool is_vertical(Side side) { return side == Side::Left || side == Side::Right; }

int clockwise_index(Side side) {
    switch (side) {
    case Side::Top: return 0;
    case Side::Right: return 1;
    case Side::Bottom: return 2;
    case Side::Left: return 3;
    }
    return 0;
}

Side side_at_clockwise_index(int index) {
    static constexpr std::array<Side, 4> order = {Side::Top, Side::Right, Side::Bottom, Side::Left};
    return order[static_cast<std::size_t>(((index % 4) + 4) % 4)];
}

bool structurally_equal(const Constraint& lhs, const Constraint& rhs) {
    return lhs.id == rhs.id && lhs.set_a == rhs.set_a && lhs.set_b == rhs.set_b &&
           lhs.context_window == rhs.context_window;
}

std::optional<std::size_t> ConstraintSpec::find_image(std::string_view id) const {
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].id == id) {
            return i;
        }
    }
    return std::nullopt;
}

namespace {

using NamedRef = std::pair<std::string, Side>;

std::vector<NamedRef> named(const ConstraintSpec& spec, const std::vector<SideRef>& set) {
    std::vector<NamedRef> out;
    out.reserve(set.size());
    for (const auto& r : set) {
        out.emplace_back(r.image < spec.images.size() ? spec.images[r.image].id
                                                      : "#" + std::to_string(r.image),
                         r.side);
    }
    return out;
}

} // namespace

bool structurally_equal(const ConstraintSpec& lhs, const ConstraintSpec& rhs) {
    if (lhs.settings != rhs.settings || lhs.images.size() != rhs.images.size() ||
        lhs.constraints.size() != rhs.constraints.size()) {
        return false;
    }
    for (const auto& image : lhs.images) {
        auto other = rhs.find_image(image.id);
        if (!other || !(rhs.images[*other] == image)) {
            return false;
        }
    }
    for (const auto& c : lhs.constraints) {
        auto it = std::find_if(rhs.constraints.begin(), rhs.constraints.end(),
                               [&](const Constraint& o) { return o.id == c.id; });
        if (it == rhs.constraints.end() || it->context_window != c.context_window ||
            named(lhs, c.set_a) != named(rhs, it->set_a) ||
            named(lhs, c.set_b) != named(rhs, it->set_b)) {
            return false;
        }
    }
    return true;
}

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::SelfTiling: return "SelfTiling";
    case ScenarioKind::OneToOne: return "OneToOne";
    case ScenarioKind::ManyToMany: return "ManyToMany";
    }
    return "?";
}

int Pads::get(Side side) const {
    switch (side) {
    case Side::Left: return left;
    case Side::Right: return right;
    case Side::Top: return top;
    case Side::Bottom: return bottom;
    }
    return 0;
}

int& Pads::get(Side side) {
    switch (side) {
    case Side::Left: return left;
    case Side::Right: return right;
    case Side::Top: return top;
    case Side::Bottom: break;
    }
    return bottom;
}

namespace {

bool constraint_is_cross_axis(const Constraint& c) {
    for (const auto& a : c.set_a) {
        for (const auto& b : c.set_b) {
            if (is_vertical(a.side) != is_vertical(b.side)) {
                return true;
            }
        }
    }
    return false;
}

void check_set(const std::vector<SideRef>& set, std::string_view name, std::size_t index,
               const Constraint& c, std::size_t image_count, std::vector<Violation>& out) {
    if (set.empty()) {
        out.push_back({ErrorCode::EmptySet,
                       "constraint '" + c.id + "' has an empty " + std::string(name) + " set", index,
                       c.span});
        return;
    }
    std::set<SideRef> seen;
    for (const auto& ref : set) {
        if (ref.image >= image_count) {
            out.push_back({ErrorCode::UnknownImage,
                           "constraint '" + c.id + "' references image #" +
                               std::to_string(ref.image) + " but only " +
                               std::to_string(image_count) + " are declared",
                           index, c.span});
        }
        if (!seen.insert(ref).second) {
            out.push_back({ErrorCode::DuplicateSide,
                           "constraint '" + c.id + "' lists side #" + std::to_string(ref.image) +
                               "." + std::string(to_string(ref.side)) + " twice in its " +
                               std::string(name) + " set",
                           index, c.span});
        }
    }
}

} // namespace

ValidationResult validate(const ConstraintSpec& spec, const LatentDims& dims) {
    ValidationResult result;
    auto& out = result.violations;

    if (dims.height <= 0 || dims.width <= 0 || dims.depth <= 0) {
        out.push_back({ErrorCode::InvalidArgument, "latent dimensions must be positive",
                       std::nullopt, std::nullopt});
    }
    if (spec.images.empty()) {
        out.push_back({ErrorCode::ZeroImages, "spec declares no images", std::nullopt,
                       std::nullopt});
    }

    const int max_window = std::min(dims.height, dims.width) / 2;
    for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
        const Constraint& c = spec.constraints[i];
        check_set(c.set_a, "first", i, c, spec.images.size(), out);
        check_set(c.set_b, "second", i, c, spec.images.size(), out);
        if (c.context_window < 0 || c.context_window > max_window) {
            out.push_back({ErrorCode::WindowOutOfRange,
                           "constraint '" + c.id + "' has w=" + std::to_string(c.context_window) +
                               " outside [0, " + std::to_string(max_window) + "]",
                           i, c.window_span ? c.window_span : c.span});
        }
        if (dims.height != dims.width && constraint_is_cross_axis(c)) {
            out.push_back({ErrorCode::NonSquareCrossAxis,
                           "constraint '" + c.id +
                               "' connects a vertical and a horizontal side, which needs square "
                               "latents",
                           i, c.span});
        }
    }

    if (!out.empty()) {
        return result;
    }

    ValidatedSpec v;
    v.spec = spec;
    v.dims = dims;
    v.kinds.reserve(spec.constraints.size());
    for (const auto& c : spec.constraints) {
        v.kinds.push_back(classify(c));
    }
    v.padding = padding_plan(spec);
    result.value = std::move(v);
    return result;
}

ValidatedSpec validate_or_throw(const ConstraintSpec& spec, const LatentDims& dims) {
    auto result = validate(spec, dims);
    if (!result.ok()) {
        const auto& first = result.violations.front();
        throw Error(first.kind, first.message);
    }
    return std::move(*result.value);
}

ScenarioKind classify(const Constraint& constraint) {
    if (constraint.set_a.size() > 1 || constraint.set_b.size() > 1) {
        return ScenarioKind::ManyToMany;
    }
    if (!constraint.set_a.empty() && !constraint.set_b.empty() &&
        constraint.set_a.front().image == constraint.set_b.front().image) {
        return ScenarioKind::SelfTiling;
    }
    return ScenarioKind::OneToOne;
}

PaddingPlan padding_plan(const ConstraintSpec& spec) {
    PaddingPlan plan;
    plan.pads.resize(spec.images.size());
    auto widen = [&](const SideRef& ref, int w) {
        if (ref.image < plan.pads.size()) {
            int& pad = plan.pads[ref.image].get(ref.side);
            pad = std::max(pad, w);
        }
    };
    for (const auto& c : spec.constraints) {
        for (const auto& ref : c.set_a) {
            widen(ref, c.context_window);
        }
        for (const auto& ref : c.set_b) {
            widen(ref, c.context_window);
        }
    }
    return plan;
}

bool licenses(const Constraint& constraint, const SideRef& a, const SideRef& b) {
    auto in = [](const std::vector<SideRef>& set, const SideRef& r) {
        return std::find(set.begin(), set.end(), r) != set.end();
    };
    return (in(constraint.set_a, a) && in(constraint.set_b, b)) ||
           (in(constraint.set_b, a) && in(constraint.set_a, b));
}

bool licenses(const ConstraintSpec& spec, const SideRef& a, const SideRef& b) {
    return std::any_of(spec.constraints.begin(), spec.constraints.end(),
                       [&](const Constraint& c) { return licenses(c, a, b); });
}

bool has_cross_axis(const ConstraintSpec& spec) {
    return std::any_of(spec.constraints.begin(), spec.constraints.end(), constraint_is_cross_axis);
}

std::string format_side_ref(const ConstraintSpec& spec, const SideRef& ref) {
    std::string name = ref.image < spec.images.size() ? spec.images[ref.image].id
                                                      : "#" + std::to_string(ref.image);
    return name + "." + std::string(to_string(ref.side));
}

} // namespace tilecraft
