// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Reader and writer for `.tilespec` documents:
//
//   # comment
//   set w = 16
//   image I1 prompt "a forest" init "forest.png"
//   tile C1: {I1.right, I2.right} ~ {I1.left, I2.left} w=16
//
// The parser reports every error it can find; after an error it resumes at the
// next line that begins with `image`, `tile` or `set`.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tilecraft/constraint.hpp"

namespace tilecraft::tilespec {

enum class ErrorKind { Lex, Syntax, Reference };

std::string_view to_string(ErrorKind kind);

struct ParseError {
    SourceSpan span;
    ErrorKind kind = ErrorKind::Syntax;
    std::string message;
};

struct ParseResult {
    std::optional<ConstraintSpec> spec;
    std::vector<ParseError> errors;

    bool ok() const { return spec.has_value(); }
};

ParseResult parse(std::string_view text);

/// Canonical text: settings by key, then images and constraints sorted by id,
/// every constraint with an explicit `w=`. LF line endings.
std::string serialize(const ConstraintSpec& spec);

/// "file:line:col: kind error: message"
std::string format_error(std::string_view source_name, const ParseError& error);

/// Latent dims taken from `set height/width/depth` (defaults 64x64x1).
LatentDims latent_dims_from_settings(const ConstraintSpec& spec);

} // namespace tilecraft::tilespec
