// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#include "tilecraft/schedule.hpp"

#include <cmath>
#include <string>

namespace tilecraft {

NoiseSchedule make_schedule(int steps, ScheduleKind kind) {
    if (steps < 1) {
        throw Error(ErrorCode::BadStepCount, "step count must be >= 1, got " + std::to_string(steps));
    }
    NoiseSchedule s;
    s.steps = steps;
    s.betas.resize(static_cast<std::size_t>(steps));
    s.alphas.resize(s.betas.size());
    s.alpha_bars.resize(s.betas.size());
    switch (kind) {
    case ScheduleKind::LinearBeta:
        for (int i = 0; i < steps; ++i) {
            const double frac = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
            s.betas[static_cast<std::size_t>(i)] = kBetaStart + frac * (kBetaEnd - kBetaStart);
        }
        break;
    }
    double running = 1.0;
    for (std::size_t i = 0; i < s.betas.size(); ++i) {
        s.alphas[i] = 1.0 - s.betas[i];
        running *= s.alphas[i];
        s.alpha_bars[i] = running;
    }
    return s;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    // splitmix64 finalizer over a simple combination.
    auto mix = [](std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(seed) ^ a) ^ b);
}

void fill_standard_normal(LatentGrid& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : grid.data) {
        v = normal(rng);
    }
}

LatentGrid noise_to(const LatentGrid& z0, int t, const NoiseSchedule& schedule, std::uint64_t seed) {
    if (t < 0 || t > schedule.steps) {
        throw Error(ErrorCode::BadStepCount, "timestep " + std::to_string(t) + " outside [0, " +
                                                 std::to_string(schedule.steps) + "]");
    }
    if (t == 0) {
        return z0;
    }
    const double ab = schedule.alpha_bar(t);
    const double signal = std::sqrt(ab);
    const double noise = std::sqrt(1.0 - ab);
    LatentGrid eps(z0.height, z0.width, z0.depth);
    fill_standard_normal(eps, seed);
    LatentGrid out = z0;
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] = signal * z0.data[i] + noise * eps.data[i];
    }
    return out;
}

} // namespace tilecraft
