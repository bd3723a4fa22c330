// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Dense-matrix reference for the Gaussian posterior mean.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "tilecraft/latent.hpp"

namespace oracle {

using tilecraft::LatentGrid;

// Posterior mean of x ~ N(mean, C) given z = sqrt(ab) x + sqrt(1 - ab) n, where C is the
// circulant covariance with eigenvalues lambda[ky * w + kx]; solved densely.
inline LatentGrid dense_posterior_mean(const LatentGrid& z, double ab, double mean,
                                       const std::vector<double>& lambda) {
    const int h = z.height, w = z.width, n = h * w;
    const double pi = 3.141592653589793238462643;
    Eigen::MatrixXd C(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int dy = i / w - j / w, dx = i % w - j % w;
            std::complex<double> s = 0.0;
            for (int ky = 0; ky < h; ++ky)
                for (int kx = 0; kx < w; ++kx)
                    s += lambda[ky * w + kx] *
                         std::exp(std::complex<double>(0.0, 2.0 * pi * (double(ky * dy) / h + double(kx * dx) / w)));
            C(i, j) = s.real() / n;
        }
    }
    Eigen::VectorXd zv(n);
    for (int i = 0; i < n; ++i) zv(i) = z.data[i] - std::sqrt(ab) * mean;
    const Eigen::MatrixXd A = ab * C + (1.0 - ab) * Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd x = std::sqrt(ab) * C * A.ldlt().solve(zv);
    LatentGrid out(h, w, 1);
    for (int i = 0; i < n; ++i) out.data[i] = mean + x(i);
    return out;
}

// Random spectrum symmetric under k -> -k, so the covariance is real.
inline std::vector<double> symmetric_spectrum(std::mt19937_64& rng, int h, int w) {
    std::uniform_real_distribution<double> u(0.01, 2.0);
    std::vector<double> lam(static_cast<std::size_t>(h) * w, -1.0);
    for (int ky = 0; ky < h; ++ky) {
        for (int kx = 0; kx < w; ++kx) {
            double& v = lam[ky * w + kx];
            if (v >= 0.0) continue;
            v = u(rng);
            lam[((h - ky) % h) * w + (w - kx) % w] = v;
        }
    }
    return lam;
}

} // namespace oracle
