// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#include "tilecraft/denoiser.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>

namespace tilecraft {

namespace {

// The FFTW planner is not reentrant; plan execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int signed_frequency(int k, int n) { return k <= n / 2 ? k : k - n; }

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(p);
    }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

} // namespace

double GaussianTexturePrior::mean(int channel) const {
    if (channel_means.empty()) {
        return 0.0;
    }
    if (channel_means.size() == 1) {
        return channel_means.front();
    }
    return channel_means.at(static_cast<std::size_t>(channel));
}

std::vector<double> GaussianTexturePrior::spectral_weights(int h, int w) const {
    if (!fixed_weights.empty()) {
        if (fixed_height != h || fixed_width != w) {
            throw Error(ErrorCode::DimensionMismatch,
                        "prior spectrum is defined for " + std::to_string(fixed_height) + "x" +
                            std::to_string(fixed_width) + ", request is " + std::to_string(h) +
                            "x" + std::to_string(w));
        }
        return fixed_weights;
    }
    std::vector<double> weights(static_cast<std::size_t>(h) * static_cast<std::size_t>(w));
    for (int ky = 0; ky < h; ++ky) {
        const int fy = signed_frequency(ky, h);
        for (int kx = 0; kx < w; ++kx) {
            const int fx = signed_frequency(kx, w);
            const double r2 = static_cast<double>(fy * fy + fx * fx);
            weights[static_cast<std::size_t>(ky) * w + kx] = std::pow(1.0 + r2, -smoothness);
        }
    }
    const double avg = std::accumulate(weights.begin(), weights.end(), 0.0) /
                       static_cast<double>(weights.size());
    const double scale = amplitude * amplitude / avg;
    for (double& v : weights) {
        v *= scale;
    }
    return weights;
}

LatentGrid gaussian_posterior_mean(const LatentGrid& zt, double alpha_bar,
                                   const GaussianTexturePrior& prior) {
    const int h = zt.height;
    const int w = zt.width;
    const std::vector<double> lambda = prior.spectral_weights(h, w);
    const double root_ab = std::sqrt(alpha_bar);
    const int wc = w / 2 + 1;
    const std::size_t n_real = static_cast<std::size_t>(h) * w;
    const std::size_t n_cplx = static_cast<std::size_t>(h) * wc;

    std::unique_ptr<double, FftwFree> real(static_cast<double*>(fftw_malloc(sizeof(double) * n_real)));
    std::unique_ptr<fftw_complex, FftwFree> spec(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_cplx)));
    Plan forward;
    Plan backward;
    {
        std::lock_guard lock(planner_mutex());
        forward.reset(fftw_plan_dft_r2c_2d(h, w, real.get(), spec.get(), FFTW_ESTIMATE));
        backward.reset(fftw_plan_dft_c2r_2d(h, w, spec.get(), real.get(), FFTW_ESTIMATE));
    }

    LatentGrid out(h, w, zt.depth);
    const double norm = 1.0 / static_cast<double>(n_real);
    for (int d = 0; d < zt.depth; ++d) {
        const double mu = prior.mean(d);
        for (std::size_t i = 0; i < n_real; ++i) {
            real.get()[i] = zt.data[i * static_cast<std::size_t>(zt.depth) + static_cast<std::size_t>(d)] -
                            root_ab * mu;
        }
        fftw_execute(forward.get());
        for (int ky = 0; ky < h; ++ky) {
            for (int kx = 0; kx < wc; ++kx) {
                const double lam = lambda[static_cast<std::size_t>(ky) * w + kx];
                const double gain = root_ab * lam / (alpha_bar * lam + (1.0 - alpha_bar));
                fftw_complex& c = spec.get()[static_cast<std::size_t>(ky) * wc + kx];
                c[0] *= gain;
                c[1] *= gain;
            }
        }
        fftw_execute(backward.get());
        for (std::size_t i = 0; i < n_real; ++i) {
            out.data[i * static_cast<std::size_t>(zt.depth) + static_cast<std::size_t>(d)] =
                mu + real.get()[i] * norm;
        }
    }
    return out;
}

LatentGrid noise_from_estimate(const LatentGrid& zt, const LatentGrid& x0, double alpha_bar) {
    const double root_ab = std::sqrt(alpha_bar);
    const double inv_sigma = 1.0 / std::sqrt(1.0 - alpha_bar);
    LatentGrid eps = zt;
    for (std::size_t i = 0; i < eps.data.size(); ++i) {
        eps.data[i] = (zt.data[i] - root_ab * x0.data[i]) * inv_sigma;
    }
    return eps;
}

std::vector<LatentGrid> GaussianDenoiser::predict_noise(const DenoiserRequest& request) {
    std::vector<LatentGrid> out;
    out.reserve(request.batch.size());
    for (const LatentGrid& zt : request.batch) {
        out.push_back(noise_from_estimate(zt, gaussian_posterior_mean(zt, request.alpha_bar, prior_),
                                          request.alpha_bar));
    }
    return out;
}

std::vector<LatentGrid> ConstantPriorDenoiser::predict_noise(const DenoiserRequest& request) {
    std::vector<LatentGrid> out;
    out.reserve(request.batch.size());
    for (const LatentGrid& zt : request.batch) {
        LatentGrid x0(zt.height, zt.width, zt.depth);
        for (std::size_t i = 0; i < x0.data.size(); ++i) {
            const std::size_t channel = i % static_cast<std::size_t>(zt.depth);
            x0.data[i] = means_.empty() ? 0.0 : means_[means_.size() == 1 ? 0 : channel];
        }
        out.push_back(noise_from_estimate(zt, x0, request.alpha_bar));
    }
    return out;
}

} // namespace tilecraft
