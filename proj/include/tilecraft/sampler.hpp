// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "tilecraft/constraint.hpp"
#include "tilecraft/denoiser.hpp"
#include "tilecraft/latent.hpp"
#include "tilecraft/schedule.hpp"

namespace tilecraft {

enum class SamplerKind { Deterministic, Ancestral };

/// When constraints run relative to the denoiser call inside a step.
enum class ConstraintTiming {
    BeforeEachStep, ///< Before every denoiser call, plus once on the final latent.
    AfterEachStep,  ///< After every update (ablation mode).
};

std::string_view to_string(SamplerKind kind);
std::optional<SamplerKind> sampler_kind_from_string(std::string_view name);

struct SamplerParams {
    ScheduleKind schedule = ScheduleKind::LinearBeta;
    int steps = 50;
    SamplerKind sampler = SamplerKind::Deterministic;
    std::uint64_t seed = 0;
    double strength = 0.8; ///< img2img only.
    ConstraintToggles constraints;
    ConstraintTiming timing = ConstraintTiming::BeforeEachStep;
};

/// Start step for img2img: round(strength * T).
int start_step(double strength, int steps);

/// Raised when the denoiser throws; carries the step index and the underlying code.
class DenoiserFailure : public Error {
public:
    DenoiserFailure(int step, ErrorCode cause, const std::string& what)
        : Error(ErrorCode::DenoiserFailure, "at step " + std::to_string(step) + ": " + what),
          step_(step), cause_(cause) {}

    int step() const noexcept { return step_; }
    ErrorCode cause() const noexcept { return cause_; }

private:
    int step_;
    ErrorCode cause_;
};

/// Run the constrained sampling loop and return the padded z0 canvases, one per image.
/// With `init`, each interior starts from the given latent noised to round(strength * T).
std::vector<LatentCanvas> sample(const ValidatedSpec& spec, Denoiser& denoiser,
                                 const SamplerParams& params,
                                 const std::optional<std::vector<LatentGrid>>& init = std::nullopt);

} // namespace tilecraft
