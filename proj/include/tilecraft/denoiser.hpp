// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tilecraft/latent.hpp"

namespace tilecraft {

struct DenoiserRequest {
    std::span<const LatentGrid> batch; ///< Padded latents, all the same shape.
    int t = 1;
    int total_steps = 1;
    double alpha_bar = 1.0; ///< abar_t of the engine's schedule.
    std::vector<std::string> conditioning; ///< One entry per batch element.
    std::uint64_t seed = 0;
};

/// Predicts the noise component of every latent in a batch. Implementations must not
/// keep references into the request after returning.
class Denoiser {
public:
    virtual ~Denoiser() = default;
    virtual std::vector<LatentGrid> predict_noise(const DenoiserRequest& request) = 0;
};

/// Stationary Gaussian prior on a periodic lattice. The covariance is circulant, so it is
/// diagonal in the 2-D DFT basis with non-negative spectral weights
///     lambda(ky, kx) proportional to 1 / (1 + ky^2 + kx^2)^smoothness
/// on signed integer frequencies, scaled so the marginal variance is amplitude^2.
struct GaussianTexturePrior {
    std::vector<double> channel_means{0.5}; ///< One per channel; a single value broadcasts.
    double smoothness = 2.5;
    double amplitude = 0.1;

    /// Optional fixed spectrum for one lattice size (row-major over DFT indices).
    int fixed_height = 0;
    int fixed_width = 0;
    std::vector<double> fixed_weights;

    double mean(int channel) const;

    /// Spectral weights for an h x w lattice, indexed [ky * w + kx].
    std::vector<double> spectral_weights(int h, int w) const;
};

/// E[z0 | zt] under the prior, computed per channel in the DFT basis.
LatentGrid gaussian_posterior_mean(const LatentGrid& zt, double alpha_bar,
                                   const GaussianTexturePrior& prior);

/// Analytic posterior-mean denoiser for GaussianTexturePrior.
class GaussianDenoiser final : public Denoiser {
public:
    explicit GaussianDenoiser(GaussianTexturePrior prior) : prior_(std::move(prior)) {}

    std::vector<LatentGrid> predict_noise(const DenoiserRequest& request) override;

    const GaussianTexturePrior& prior() const { return prior_; }

private:
    GaussianTexturePrior prior_;
};

/// Degenerate prior z0 = mean everywhere: eps = (zt - sqrt(abar) mean) / sqrt(1 - abar).
class ConstantPriorDenoiser final : public Denoiser {
public:
    explicit ConstantPriorDenoiser(std::vector<double> channel_means = {0.5})
        : means_(std::move(channel_means)) {}

    std::vector<LatentGrid> predict_noise(const DenoiserRequest& request) override;

private:
    std::vector<double> means_;
};

/// Adapts any callable; used for test doubles and wiring.
class FunctionDenoiser final : public Denoiser {
public:
    using Fn = std::function<std::vector<LatentGrid>(const DenoiserRequest&)>;
    explicit FunctionDenoiser(Fn fn) : fn_(std::move(fn)) {}

    std::vector<LatentGrid> predict_noise(const DenoiserRequest& request) override {
        return fn_(request);
    }

private:
    Fn fn_;
};

/// eps from a clean-data estimate: (zt - sqrt(abar) x0) / sqrt(1 - abar).
LatentGrid noise_from_estimate(const LatentGrid& zt, const LatentGrid& x0, double alpha_bar);

} // namespace tilecraft
