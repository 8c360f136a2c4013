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

#include "scf3d/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace scf3d
{
    namespace
    {
        constexpr int max_bessel_order = 400;
        constexpr double rescale_threshold = 1.0e250;
        constexpr double rescale_factor = 1.0e-250;
        // The spherical normalization sums squares.
        constexpr double square_rescale_threshold = 1.0e100;
        constexpr double square_rescale_factor = 1.0e-100;

        void check_bessel_args(int n, double x, const char *who)
        {
            if (n < 0)
                throw std::invalid_argument(std::string(who) + ": negative order");
            if (!(x >= 0.0) || !std::isfinite(x))
                throw std::invalid_argument(std::string(who) + ": argument must be finite and non-negative");
            if (n > max_bessel_order)
                throw std::domain_error(std::string(who) + ": order above " + std::to_string(max_bessel_order));
        }

        // Ascending series, used for x <= 1 where it converges in a handful of terms.
        double sph_bessel_series(int n, double x)
        {
            double prefactor = 1.0;
            for (int i = 1; i <= n; ++i)
                prefactor *= x / double(2 * i + 1);
            if (prefactor == 0.0)
                return 0.0;
            const double y = -0.5 * x * x;
            double term = 1.0, sum = 1.0;
            for (int k = 1; k < 60; ++k)
            {
                term *= y / (double(k) * double(2 * n + 2 * k + 1));
                sum += term;
                if (std::abs(term) < 1e-17 * std::abs(sum))
                    break;
            }
            return prefactor * sum;
        }

        int miller_start(int n_max, double x)
        {
            const double top = std::max(double(n_max), x);
            return int(top) + 25 + int(std::sqrt(50.0 * top));
        }

        // Downward recurrence normalized with sum_k (2k+1) j_k(x)^2 = 1.
        void sph_bessel_miller(int n_max, double x, double *out)
        {
            const int start = miller_start(n_max, x);
            double jp1 = 0.0, j = 1.0, norm = 0.0;
            for (int k = start; k >= 0; --k)
            {
                if (k <= n_max)
                    out[k] = j;
                norm += double(2 * k + 1) * j * j;
                const double jm1 = double(2 * k + 1) / x * j - jp1;
                jp1 = j;
                j = jm1;
                if (std::abs(j) > square_rescale_threshold)
                {
                    j *= square_rescale_factor;
                    jp1 *= square_rescale_factor;
                    norm *= square_rescale_factor * square_rescale_factor;
                    for (int i = std::min(k, n_max + 1); i <= n_max; ++i)
                        out[i] *= square_rescale_factor;
                }
            }
            const double scale = 1.0 / std::sqrt(norm);
            for (int i = 0; i <= n_max; ++i)
                out[i] *= scale;
        }

        void sph_bessel_upward(int n_max, double x, double *out)
        {
            const double s = std::sin(x), c = std::cos(x);
            out[0] = s / x;
            if (n_max >= 1)
                out[1] = s / (x * x) - c / x;
            for (int k = 1; k < n_max; ++k)
                out[k + 1] = double(2 * k + 1) / x * out[k] - out[k - 1];
        }
    }

    std::vector<double> spherical_bessel_j_all(int n_max, double x)
    {
        check_bessel_args(n_max, x, "spherical_bessel_j_all");
        std::vector<double> out(n_max + 1, 0.0);
        if (x == 0.0)
            out[0] = 1.0;
        else if (x <= 1.0)
            for (int k = 0; k <= n_max; ++k)
                out[k] = sph_bessel_series(k, x);
        else if (x >= double(n_max))
            sph_bessel_upward(n_max, x, out.data());
        else
            sph_bessel_miller(n_max, x, out.data());
        return out;
    }

    double spherical_bessel_j(int n, double x)
    {
        check_bessel_args(n, x, "spherical_bessel_j");
        if (x == 0.0)
            return n == 0 ? 1.0 : 0.0;
        if (x <= 1.0)
            return sph_bessel_series(n, x);
        std::vector<double> out(n + 1);
        if (x >= double(n))
            sph_bessel_upward(n, x, out.data());
        else
            sph_bessel_miller(n, x, out.data());
        return out[n];
    }

    double legendre_p(int n, double x)
    {
        if (n < 0)
            throw std::invalid_argument("legendre_p: negative degree");
        if (!(std::abs(x) <= 1.0))
            throw std::invalid_argument("legendre_p: |x| > 1");
        double p0 = 1.0, p1 = x;
        if (n == 0)
            return p0;
        for (int k = 1; k < n; ++k)
        {
            const double p2 = (double(2 * k + 1) * x * p1 - double(k) * p0) / double(k + 1);
            p0 = p1;
            p1 = p2;
        }
        return p1;
    }

    void assoc_legendre_pbar_column(int m, int n_max, double x, double s, double *out)
    {
        // Seed Pbar_0^0 = sqrt(1/2), then climb the diagonal with the normalization folded in.
        double pmm = std::sqrt(0.5);
        for (int k = 1; k <= m; ++k)
            pmm *= s * std::sqrt(double(2 * k + 1) / double(2 * k));
        if (n_max < m)
            return;
        out[0] = pmm;
        if (n_max == m)
            return;
        out[1] = x * std::sqrt(double(2 * m + 3)) * pmm;
        const double mm = double(m) * double(m);
        for (int n = m + 2; n <= n_max; ++n)
        {
            const double nn = double(n) * double(n), n1 = double(n - 1) * double(n - 1);
            const double a = std::sqrt((4.0 * nn - 1.0) / (nn - mm));
            const double b = std::sqrt((n1 - mm) / (4.0 * n1 - 1.0));
            out[n - m] = a * (x * out[n - m - 1] - b * out[n - m - 2]);
        }
    }

    double assoc_legendre_pbar(int n, int m, double x)
    {
        if (n < 0 || m < 0)
            throw std::invalid_argument("assoc_legendre_pbar: negative degree or order");
        if (m > n)
            throw std::invalid_argument("assoc_legendre_pbar: order exceeds degree");
        if (!(std::abs(x) <= 1.0))
            throw std::invalid_argument("assoc_legendre_pbar: |x| > 1");
        std::vector<double> col(n - m + 1);
        assoc_legendre_pbar_column(m, n, x, std::sqrt((1.0 - x) * (1.0 + x)), col.data());
        return col[n - m];
    }

    double modified_bessel_i_scaled(int n, double x)
    {
        check_bessel_args(n, x, "modified_bessel_i_scaled");
        if (x == 0.0)
            return n == 0 ? 1.0 : 0.0;
        if (x < 1.0)
        {
            const double q = 0.25 * x * x;
            double term = 1.0, sum = 1.0;
            for (int k = 1; term > 1e-17 * sum; ++k)
            {
                term *= q / (double(k) * double(k + n));
                sum += term;
            }
            return std::exp(double(n) * std::log(0.5 * x) - std::lgamma(double(n) + 1.0) - x) * sum;
        }
        // Miller recurrence normalized by exp(-x) (I_0 + 2 sum_k I_k) = 1.
        const int start = std::max(n, int(std::sqrt(80.0 * x))) + 30 + int(std::sqrt(40.0 * std::max(n, 1)));
        double ip1 = 0.0, i = 1.0e-300, sum = 0.0, value = 0.0;
        for (int k = start; k >= 1; --k)
        {
            const double im1 = 2.0 * double(k) / x * i + ip1;
            if (k == n)
                value = i;
            sum += 2.0 * i;
            ip1 = i;
            i = im1;
            if (i > rescale_threshold)
            {
                i *= rescale_factor;
                ip1 *= rescale_factor;
                sum *= rescale_factor;
                value *= rescale_factor;
            }
        }
        if (n == 0)
            value = i;
        sum += i;
        return value / sum;
    }

    double modified_bessel_i(int n, double x)
    {
        if (x > 700.0)
            throw std::domain_error("modified_bessel_i: argument above 700 overflows; use the scaled form");
        return modified_bessel_i_scaled(n, x) * std::exp(x);
    }

    double modified_bessel_i_ratio(int n, double x)
    {
        if (n == 0)
            return 1.0;
        if (x == 0.0)
            return 0.0;
        return modified_bessel_i_scaled(n, x) / modified_bessel_i_scaled(0, x);
    }
}
