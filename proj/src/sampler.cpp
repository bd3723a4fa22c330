// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#include "tilecraft/sampler.hpp"

#include <cmath>

namespace tilecraft {

namespace {

// Stream tags for mix_seed so the different random draws never share a generator.
constexpr std::uint64_t kInitialNoise = 0;
constexpr std::uint64_t kImg2ImgNoise = 1;
constexpr std::uint64_t kAncestralNoise = 2;

void update_latent(LatentGrid& z, const LatentGrid& eps, const NoiseSchedule& schedule, int t,
                   SamplerKind kind, std::uint64_t noise_seed) {
    const double ab = schedule.alpha_bar(t);
    const double ab_prev = schedule.alpha_bar(t - 1);
    const double root_ab = std::sqrt(ab);
    const double sigma_t = std::sqrt(1.0 - ab);

    if (kind == SamplerKind::Deterministic) {
        const double a = std::sqrt(ab_prev);
        const double b = std::sqrt(1.0 - ab_prev);
        for (std::size_t i = 0; i < z.data.size(); ++i) {
            const double x0 = (z.data[i] - sigma_t * eps.data[i]) / root_ab;
            z.data[i] = a * x0 + b * eps.data[i];
        }
        return;
    }

    // Posterior q(z_{t-1} | z_t, x0) with x0 predicted from eps.
    const double beta = schedule.beta(t);
    const double c_x0 = std::sqrt(ab_prev) * beta / (1.0 - ab);
    const double c_zt = std::sqrt(schedule.alpha(t)) * (1.0 - ab_prev) / (1.0 - ab);
    const double sigma = std::sqrt(beta * (1.0 - ab_prev) / (1.0 - ab));
    LatentGrid noise(z.height, z.width, z.depth);
    if (t > 1) {
        fill_standard_normal(noise, noise_seed);
    }
    for (std::size_t i = 0; i < z.data.size(); ++i) {
        const double x0 = (z.data[i] - sigma_t * eps.data[i]) / root_ab;
        z.data[i] = c_x0 * x0 + c_zt * z.data[i] + sigma * noise.data[i];
    }
}

} // namespace

std::string_view to_string(SamplerKind kind) {
    return kind == SamplerKind::Deterministic ? "ddim" : "ancestral";
}

std::optional<SamplerKind> sampler_kind_from_string(std::string_view name) {
    if (name == "ddim" || name == "deterministic") {
        return SamplerKind::Deterministic;
    }
    if (name == "ancestral" || name == "ddpm") {
        return SamplerKind::Ancestral;
    }
    return std::nullopt;
}

int start_step(double strength, int steps) {
    if (!(strength >= 0.0 && strength <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "img2img strength must lie in [0, 1]");
    }
    const int t0 = static_cast<int>(std::lround(strength * steps));
    return (strength > 0.0 && t0 < 1) ? 1 : t0;
}

std::vector<LatentCanvas> sample(const ValidatedSpec& spec, Denoiser& denoiser,
                                 const SamplerParams& params,
                                 const std::optional<std::vector<LatentGrid>>& init) {
    const NoiseSchedule schedule = make_schedule(params.steps, params.schedule);
    const std::size_t n = spec.spec.images.size();

    std::vector<LatentCanvas> canvases;
    canvases.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        canvases.emplace_back(spec.dims, spec.padding.pads.at(i));
    }

    int t_start = params.steps;
    if (init) {
        if (init->size() != n) {
            throw Error(ErrorCode::DimensionMismatch, "img2img needs one initial latent per image");
        }
        t_start = start_step(params.strength, params.steps);
        for (std::size_t i = 0; i < n; ++i) {
            canvases[i].set_interior((*init)[i]);
            canvases[i].grid =
                noise_to(canvases[i].grid, t_start, schedule, mix_seed(params.seed, kImg2ImgNoise, i));
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            fill_standard_normal(canvases[i].grid, mix_seed(params.seed, kInitialNoise, i));
        }
    }

    std::vector<std::string> conditioning;
    conditioning.reserve(n);
    for (const auto& image : spec.spec.images) {
        conditioning.push_back(image.prompt);
    }

    RoundRobinState state;
    auto constrain = [&] {
        try {
            apply_constraints(canvases, spec.spec, state, params.constraints);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::ConstraintFailure) {
                throw;
            }
            throw Error(ErrorCode::ConstraintFailure, e.what());
        }
    };

    std::vector<LatentGrid> batch(n);
    for (int t = t_start; t >= 1; --t) {
        if (params.timing == ConstraintTiming::BeforeEachStep) {
            constrain();
        }
        for (std::size_t i = 0; i < n; ++i) {
            batch[i] = canvases[i].grid;
        }
        DenoiserRequest request;
        request.batch = batch;
        request.t = t;
        request.total_steps = params.steps;
        request.alpha_bar = schedule.alpha_bar(t);
        request.conditioning = conditioning;
        request.seed = params.seed;

        std::vector<LatentGrid> eps;
        try {
            eps = denoiser.predict_noise(request);
        } catch (const Error& e) {
            throw DenoiserFailure(t, e.code(), e.what());
        } catch (const std::exception& e) {
            throw DenoiserFailure(t, ErrorCode::Transport, e.what());
        }
        if (eps.size() != n) {
            throw DenoiserFailure(t, ErrorCode::ShapeMismatch,
                                  "denoiser returned " + std::to_string(eps.size()) +
                                      " predictions for a batch of " + std::to_string(n));
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!eps[i].same_shape(batch[i])) {
                throw DenoiserFailure(t, ErrorCode::ShapeMismatch,
                                      "prediction shape differs from the request");
            }
            update_latent(canvases[i].grid, eps[i], schedule, t, params.sampler,
                          mix_seed(params.seed, kAncestralNoise + static_cast<std::uint64_t>(t), i));
        }
        if (params.timing == ConstraintTiming::AfterEachStep) {
            constrain();
        }
    }
    if (params.timing == ConstraintTiming::BeforeEachStep || t_start == 0) {
        constrain();
    }
    return canvases;
}

} // namespace tilecraft
