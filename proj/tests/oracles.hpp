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

// Independent reference implementations used by the tests. Nothing here calls the series,
// the FS machinery or the library quadrature.

#ifndef SCF3D_TESTS_ORACLES_HPP
#define SCF3D_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle
{
    inline constexpr double pi = std::numbers::pi;

    inline double deg(double d) { return d * pi / 180.0; }

    struct Rule
    {
        std::vector<double> x, w;
    };

    // Gauss-Legendre on [-1, 1] by Newton iteration on P_n.
    inline Rule gauss_legendre(int n)
    {
        Rule r;
        r.x.resize(n);
        r.w.resize(n);
        for (int i = 0; i < (n + 1) / 2; ++i)
        {
            double z = std::cos(pi * (i + 0.75) / (n + 0.5)), dp = 0.0;
            for (int it = 0; it < 100; ++it)
            {
                double p0 = 1.0, p1 = z;
                for (int k = 2; k <= n; ++k)
                {
                    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (z * p1 - p0) / (z * z - 1.0);
                const double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16)
                    break;
            }
            r.x[i] = -z;
            r.x[n - 1 - i] = z;
            r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        return r;
    }

    // Composite rule over the given sorted breakpoints, `panels` equal sub-panels between each pair.
    inline std::vector<std::pair<double, double>> composite(std::vector<double> breaks, int order = 40, int panels = 8)
    {
        std::sort(breaks.begin(), breaks.end());
        const Rule r = gauss_legendre(order);
        std::vector<std::pair<double, double>> nodes;
        for (std::size_t b = 0; b + 1 < breaks.size(); ++b)
        {
            const double h = (breaks[b + 1] - breaks[b]) / panels;
            if (h <= 0.0)
                continue;
            for (int p = 0; p < panels; ++p)
            {
                const double lo = breaks[b] + p * h;
                for (int i = 0; i < order; ++i)
                    nodes.emplace_back(lo + 0.5 * h * (r.x[i] + 1.0), 0.5 * h * r.w[i]);
            }
        }
        return nodes;
    }

    inline double integrate(const std::function<double(double)> &f, const std::vector<double> &breaks, int order = 40,
                            int panels = 8)
    {
        double s = 0.0;
        for (const auto &[x, w] : composite(breaks, order, panels))
            s += w * f(x);
        return s;
    }

    inline double von_mises(double phi, double mu, double kappa)
    {
        return std::exp(kappa * (std::cos(phi - mu) - 1.0)) / (2.0 * pi * std::cyl_bessel_i(0.0, kappa) * std::exp(-kappa));
    }

    // Normalizer of exp(-sqrt2 |theta - theta0| / sigma) sin(theta) on [0, pi], in closed form.
    inline double laplacian_a(double theta0, double sigma)
    {
        const double r2 = std::sqrt(2.0);
        return (2.0 + sigma * sigma) /
               (2.0 * r2 * sigma * std::sin(theta0) +
                2.0 * sigma * sigma * std::exp(-pi / (r2 * sigma)) * std::cosh(r2 * (pi / 2.0 - theta0) / sigma));
    }

    inline double laplacian(double theta, double theta0, double sigma)
    {
        if (theta < 0.0 || theta > pi)
            return 0.0;
        return laplacian_a(theta0, sigma) * std::exp(-std::sqrt(2.0) * std::abs(theta - theta0) / sigma) *
               std::sin(theta);
    }

    // -12 (x / x3dB)^2 dB as a linear gain.
    inline double sector(double x, double x3db) { return std::pow(10.0, -1.2 * (x / x3db) * (x / x3db)); }

    struct Side
    {
        double mu, kappa;          // azimuth
        double phi3db;             // <= 0: omnidirectional
        double theta0, sigma;      // elevation
        double tilt, theta3db;     // theta3db <= 0: unit vertical gain
        double gain = 1.0;         // linear peak gain
        double spacing;            // d / lambda
    };

    inline double azimuth_weight(const Side &s, double phi)
    {
        return von_mises(phi, s.mu, s.kappa) * (s.phi3db > 0.0 ? sector(phi, s.phi3db) : 1.0);
    }

    inline double elevation_weight(const Side &s, double theta)
    {
        return laplacian(theta, s.theta0, s.sigma) * (s.theta3db > 0.0 ? sector(theta - s.tilt, s.theta3db) : 1.0);
    }

    // E[g exp(i beta l sin phi sin theta)] by a tensor-product Gauss-Legendre rule.
    inline std::complex<double> rho(const Side &s, int lag, int order = 40, int panels = 8)
    {
        const double x = 2.0 * pi * s.spacing * lag;
        std::vector<double> az_breaks{-pi, pi, 0.0};
        const double mu = std::remainder(s.mu, 2.0 * pi);
        az_breaks.push_back(mu);
        std::vector<double> el_breaks{0.0, pi, s.theta0};
        if (s.theta3db > 0.0 && s.tilt > 0.0 && s.tilt < pi)
            el_breaks.push_back(s.tilt);
        const auto az = composite(az_breaks, order, panels), el = composite(el_breaks, order, panels);
        std::vector<double> ew(el.size()), es(el.size());
        for (std::size_t j = 0; j < el.size(); ++j)
        {
            ew[j] = el[j].second * elevation_weight(s, el[j].first);
            es[j] = std::sin(el[j].first);
        }
        std::complex<double> acc = 0.0;
        for (const auto &[phi, wphi] : az)
        {
            const double w = wphi * azimuth_weight(s, phi), sp = std::sin(phi);
            std::complex<double> inner = 0.0;
            for (std::size_t j = 0; j < el.size(); ++j)
                inner += ew[j] * std::polar(1.0, x * sp * es[j]);
            acc += w * inner;
        }
        return s.gain * acc;
    }

    // Series for j_n(x) from its power expansion, accurate for x below about n.
    inline double sph_bessel_series(int n, double x)
    {
        double lead = 1.0;
        for (int k = 1; k <= n; ++k)
            lead *= x / (2.0 * k + 1.0);
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 200; ++k)
        {
            term *= -0.5 * x * x / (k * (2.0 * n + 2.0 * k + 1.0));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum))
                break;
        }
        return lead * sum;
    }
}

#endif
