// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "dense_oracle.hpp"
#include "tilecraft/denoiser.hpp"

using namespace tilecraft;

TEST_CASE("spectral posterior mean matches a dense 8x8 solve") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        GaussianTexturePrior prior;
        prior.channel_means = {nd(rng)};
        prior.fixed_height = 8;
        prior.fixed_width = 8;
        prior.fixed_weights = oracle::symmetric_spectrum(rng, 8, 8);
        LatentGrid z(8, 8, 1);
        for (double& v : z.data) v = nd(rng);
        const double ab = 0.05 + 0.9 * (trial / 19.0);
        const LatentGrid got = gaussian_posterior_mean(z, ab, prior);
        const LatentGrid want = oracle::dense_posterior_mean(z, ab, prior.channel_means[0], prior.fixed_weights);
        for (std::size_t i = 0; i < 64; ++i) CHECK(std::fabs(got.data[i] - want.data[i]) < 1e-8);
    }
}

TEST_CASE("default spectrum also matches the dense solve on odd, non-square grids") {
    GaussianTexturePrior prior;
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    LatentGrid z(5, 7, 1);
    for (double& v : z.data) v = nd(rng);
    const auto lam = prior.spectral_weights(5, 7);
    double mean_weight = 0.0;
    for (double v : lam) mean_weight += v;
    CHECK(mean_weight / lam.size() == doctest::Approx(prior.amplitude * prior.amplitude));
    const LatentGrid got = gaussian_posterior_mean(z, 0.3, prior);
    const LatentGrid want = oracle::dense_posterior_mean(z, 0.3, prior.mean(0), lam);
    for (std::size_t i = 0; i < z.data.size(); ++i) CHECK(std::fabs(got.data[i] - want.data[i]) < 1e-10);
}

TEST_CASE("channels are denoised independently with their own means") {
    GaussianTexturePrior prior;
    prior.channel_means = {0.2, 0.7};
    std::mt19937_64 rng(6);
    std::normal_distribution<double> nd;
    LatentGrid z(6, 6, 2);
    for (double& v : z.data) v = nd(rng);
    const LatentGrid both = gaussian_posterior_mean(z, 0.5, prior);
    for (int ch = 0; ch < 2; ++ch) {
        LatentGrid one(6, 6, 1);
        for (int i = 0; i < 36; ++i) one.data[i] = z.data[i * 2 + ch];
        GaussianTexturePrior single = prior;
        single.channel_means = {prior.channel_means[ch]};
        const LatentGrid sep = gaussian_posterior_mean(one, 0.5, single);
        for (int i = 0; i < 36; ++i) CHECK(both.data[i * 2 + ch] == doctest::Approx(sep.data[i]).epsilon(1e-12));
    }
}

TEST_CASE("posterior limits: clean input is returned, pure noise gives the mean") {
    GaussianTexturePrior prior;
    LatentGrid z(8, 8, 1);
    for (std::size_t i = 0; i < z.data.size(); ++i) z.data[i] = 0.5 + 0.01 * std::cos(double(i));
    const LatentGrid clean = gaussian_posterior_mean(z, 1.0, prior);
    for (std::size_t i = 0; i < z.data.size(); ++i) CHECK(clean.data[i] == doctest::Approx(z.data[i]));
    const LatentGrid noisy = gaussian_posterior_mean(z, 0.0, prior);
    for (double v : noisy.data) CHECK(v == doctest::Approx(0.5));
}

TEST_CASE("fixed spectrum with the wrong size is rejected") {
    GaussianTexturePrior prior;
    prior.fixed_height = 4;
    prior.fixed_width = 4;
    prior.fixed_weights.assign(16, 1.0);
    try {
        gaussian_posterior_mean(LatentGrid(8, 8, 1), 0.5, prior);
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
}

TEST_CASE("noise estimate inverts the forward mix") {
    LatentGrid x0(3, 3, 1, 0.25), eps(3, 3, 1);
    for (std::size_t i = 0; i < 9; ++i) eps.data[i] = double(i) - 4.0;
    const double ab = 0.36;
    LatentGrid zt = x0;
    for (std::size_t i = 0; i < 9; ++i) zt.data[i] = 0.6 * x0.data[i] + 0.8 * eps.data[i];
    const LatentGrid got = noise_from_estimate(zt, x0, ab);
    for (std::size_t i = 0; i < 9; ++i) CHECK(got.data[i] == doctest::Approx(eps.data[i]));

    ConstantPriorDenoiser constant({0.25});
    std::vector<LatentGrid> batch{zt};
    DenoiserRequest req{batch, 3, 10, ab, {"p"}, 0};
    const auto pred = constant.predict_noise(req);
    REQUIRE(pred.size() == 1);
    for (std::size_t i = 0; i < 9; ++i) CHECK(pred[0].data[i] == doctest::Approx(eps.data[i]));
}
