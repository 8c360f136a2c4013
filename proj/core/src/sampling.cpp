// SPDX-License-Identifier: Apache-2.0
//
// scf3d: spatial correlation and mutual information of 3D MIMO channels
// Copyright (C) 2026 The scf3d authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "scf3d/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scf3d
{
    namespace
    {
        constexpr double pi = std::numbers::pi;

        double wrap(double phi)
        {
            double w = std::remainder(phi, 2.0 * pi);
            if (w <= -pi)
                w += 2.0 * pi;
            return w;
        }
    }

    AngleSampler::AngleSampler(const AngularDensity &density) : density_(density)
    {
        switch (density_.kind())
        {
        case DensityKind::von_mises:
        {
            const double k = density_.kappa();
            if (k > 1e-8)
            {
                const double tau = 1.0 + std::sqrt(1.0 + 4.0 * k * k);
                const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * k);
                vm_r_ = (1.0 + rho * rho) / (2.0 * rho);
            }
            break;
        }
        case DensityKind::laplacian_elevation:
        {
            scale_ = density_.sigma() / std::numbers::sqrt2;
            // -expm1(-span / scale) is the branch mass in units of scale.
            left_span_ = -std::expm1(-density_.theta0() / scale_);
            right_span_ = -std::expm1(-(pi - density_.theta0()) / scale_);
            left_mass_ = left_span_;
            right_mass_ = right_span_;
            break;
        }
        case DensityKind::tabulated:
        {
            const auto &x = density_.table_angles();
            const auto &f = density_.table_values();
            cdf_.assign(x.size(), 0.0);
            for (std::size_t i = 1; i < x.size(); ++i)
                cdf_[i] = cdf_[i - 1] + 0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1]);
            break;
        }
        case DensityKind::uniform:
            break;
        }
    }

    double AngleSampler::operator()(RandomStream &rng) const
    {
        switch (density_.kind())
        {
        case DensityKind::von_mises:
            return von_mises(rng);
        case DensityKind::laplacian_elevation:
            return laplacian(rng);
        case DensityKind::tabulated:
            return tabulated(rng);
        case DensityKind::uniform:
            if (density_.is_point_mass())
                return density_.lower();
            return density_.lower() + (density_.upper() - density_.lower()) * rng.uniform();
        }
        return 0.0;
    }

    double AngleSampler::von_mises(RandomStream &rng) const
    {
        const double mu = density_.mu(), k = density_.kappa();
        if (vm_r_ == 0.0)
            return wrap(mu + pi * (2.0 * rng.uniform() - 1.0));
        for (long attempt = 0; attempt < max_rejection_attempts; ++attempt)
        {
            const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
            const double z = std::cos(pi * u1);
            const double f = (1.0 + vm_r_ * z) / (vm_r_ + z);
            const double c = k * (vm_r_ - f);
            if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0)
            {
                const double t = std::acos(std::clamp(f, -1.0, 1.0));
                return wrap(u3 > 0.5 ? mu + t : mu - t);
            }
        }
        throw std::runtime_error("von Mises sampler: rejection limit reached");
    }

    double AngleSampler::laplacian(RandomStream &rng) const
    {
        const double theta0 = density_.theta0();
        const double total = left_mass_ + right_mass_;
        for (long attempt = 0; attempt < max_rejection_attempts; ++attempt)
        {
            const double branch = rng.uniform() * total;
            const double v = rng.uniform();
            double theta;
            if (branch < left_mass_)
                theta = theta0 + scale_ * std::log1p(-v * left_span_);
            else
                theta = theta0 - scale_ * std::log1p(-v * right_span_);
            theta = std::clamp(theta, 0.0, pi);
            if (rng.uniform() < std::sin(theta))
                return theta;
        }
        throw std::runtime_error("Laplacian elevation sampler: rejection limit reached");
    }

    double AngleSampler::tabulated(RandomStream &rng) const
    {
        const auto &x = density_.table_angles();
        const auto &f = density_.table_values();
        const double target = rng.uniform() * cdf_.back();
        std::size_t i = std::size_t(std::upper_bound(cdf_.begin(), cdf_.end(), target) - cdf_.begin());
        i = std::clamp<std::size_t>(i, 1, cdf_.size() - 1) - 1;
        const double h = x[i + 1] - x[i];
        const double r = (target - cdf_[i]) / h; // solve f0 t + (f1 - f0) t^2 / 2 = r for t in [0, 1]
        const double f0 = f[i], slope = f[i + 1] - f[i];
        double t;
        if (std::abs(slope) < 1e-14 * std::max(f0, 1e-300))
            t = f0 > 0.0 ? r / f0 : 0.5;
        else
        {
            const double disc = std::max(0.0, f0 * f0 + 2.0 * slope * r);
            t = 2.0 * r / (f0 + std::sqrt(disc));
        }
        return x[i] + h * std::clamp(t, 0.0, 1.0);
    }

    double sample_angle(const AngularDensity &density, RandomStream &rng) { return AngleSampler(density)(rng); }
}
