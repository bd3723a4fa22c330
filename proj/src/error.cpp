// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#include "tilecraft/error.hpp"

namespace tilecraft {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnknownImage: return "UnknownImage";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::DuplicateSide: return "DuplicateSide";
    case ErrorCode::WindowOutOfRange: return "WindowOutOfRange";
    case ErrorCode::ZeroImages: return "ZeroImages";
    case ErrorCode::NonSquareCrossAxis: return "NonSquareCrossAxis";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::WidthExceedsExtent: return "WidthExceedsExtent";
    case ErrorCode::PadTooSmall: return "PadTooSmall";
    case ErrorCode::InteriorTooSmall: return "InteriorTooSmall";
    case ErrorCode::BadStepCount: return "BadStepCount";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DenoiserFailure: return "DenoiserFailure";
    case ErrorCode::ConstraintFailure: return "ConstraintFailure";
    case ErrorCode::Transport: return "Transport";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::ProtocolVersionMismatch: return "ProtocolVersionMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::MalformedMessage: return "MalformedMessage";
    case ErrorCode::NoValidLayout: return "NoValidLayout";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::OddExtent: return "OddExtent";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

} // namespace tilecraft
