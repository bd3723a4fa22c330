// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tilecraft {

enum class ErrorCode {
    // constraint model
    UnknownImage,
    EmptySet,
    DuplicateSide,
    WindowOutOfRange,
    ZeroImages,
    NonSquareCrossAxis,
    // text format
    Parse,
    // latent lattice
    WidthExceedsExtent,
    PadTooSmall,
    InteriorTooSmall,
    // engine
    BadStepCount,
    DimensionMismatch,
    DenoiserFailure,
    ConstraintFailure,
    // wire protocol
    Transport,
    Timeout,
    ProtocolVersionMismatch,
    ShapeMismatch,
    MalformedMessage,
    // imaging
    NoValidLayout,
    DimMismatch,
    UnsupportedFormat,
    CorruptFile,
    OddExtent,
    // general
    InvalidArgument,
    Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace tilecraft
