// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tilecraft/latent.hpp"

namespace tilecraft {

enum class ScheduleKind { LinearBeta };

inline constexpr double kBetaStart = 1e-4;
inline constexpr double kBetaEnd = 2e-2;

/// Per-step coefficients for t = 1..T, stored at index t-1.
struct NoiseSchedule {
    int steps = 0;
    std::vector<double> betas;
    std::vector<double> alphas;
    std::vector<double> alpha_bars;

    double alpha(int t) const { return alphas.at(static_cast<std::size_t>(t - 1)); }
    double beta(int t) const { return betas.at(static_cast<std::size_t>(t - 1)); }
    /// Cumulative product up to t; alpha_bar(0) is 1 (clean data).
    double alpha_bar(int t) const {
        return t == 0 ? 1.0 : alpha_bars.at(static_cast<std::size_t>(t - 1));
    }
};

NoiseSchedule make_schedule(int steps, ScheduleKind kind = ScheduleKind::LinearBeta);

/// Deterministic 64-bit mixer used to derive independent generator seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Fill `grid` with i.i.d. standard normal values from a generator seeded with `seed`.
void fill_standard_normal(LatentGrid& grid, std::uint64_t seed);

/// sqrt(abar_t) z0 + sqrt(1 - abar_t) eps, eps ~ N(0, I) drawn from `seed`. t = 0 returns z0.
LatentGrid noise_to(const LatentGrid& z0, int t, const NoiseSchedule& schedule, std::uint64_t seed);

} // namespace tilecraft
