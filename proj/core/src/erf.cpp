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

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scf3d
{
    namespace
    {
        using cld = std::complex<long double>;

        constexpr long double sqrt_pi = 1.772453850905516027298167483341145183L;
        constexpr double envelope = 30.0;
        constexpr long double series_limit = 3.0L;

        // Maclaurin series; well conditioned for |Re z| <= 3 in long double.
        cld erf_series(cld z)
        {
            const cld z2 = -z * z;
            const long double r2 = std::norm(z);
            cld power = 1.0L, sum = z;
            for (int k = 1; k < 4000; ++k)
            {
                power *= z2 / (long double)(k);
                const cld term = power * z / (long double)(2 * k + 1);
                sum += term;
                if ((long double)(k) > r2 && std::abs(term) <= 1e-21L * std::abs(sum))
                    break;
            }
            return sum * (2.0L / sqrt_pi);
        }

        // Laplace continued fraction exp(z^2) erfc(z) = 1 / (sqrt(pi) (z + 1/2 / (z + 1 / (z + 3/2 / ...)))),
        // evaluated with the modified Lentz method. Intended for Re z > 3.
        cld erfcx_fraction(cld z)
        {
            const long double tiny = 1e-4000L;
            cld f = z, c = z, d = 0.0L;
            for (int n = 1; n < 20000; ++n)
            {
                const long double a = 0.5L * (long double)(n);
                d = z + a * d;
                if (std::abs(d) == 0.0L)
                    d = tiny;
                c = z + a / c;
                if (std::abs(c) == 0.0L)
                    c = tiny;
                d = 1.0L / d;
                const cld delta = c * d;
                f *= delta;
                if (std::abs(delta - 1.0L) < 1e-19L)
                    return 1.0L / (sqrt_pi * f);
            }
            throw std::range_error("erfcx: continued fraction did not converge");
        }

        void check_envelope(long double re, long double im, const char *who)
        {
            if (!std::isfinite(re) || !std::isfinite(im))
                throw std::range_error(std::string(who) + ": non-finite argument");
            if (std::abs(re) > envelope || std::abs(im) > envelope)
                throw std::range_error(std::string(who) + ": argument outside |Re|, |Im| <= 30");
        }

        // erf for Re z >= 0, Im z >= 0.
        cld erf_first_quadrant(cld z)
        {
            if (z.real() <= series_limit)
                return erf_series(z);
            return 1.0L - std::exp(-z * z) * erfcx_fraction(z);
        }
    }

    std::complex<double> erf_complex(std::complex<double> z)
    {
        check_envelope(z.real(), z.imag(), "erf_complex");
        cld w(z.real(), z.imag());
        const bool negate = w.real() < 0.0L;
        if (negate)
            w = -w;
        const bool conjugate = w.imag() < 0.0L;
        if (conjugate)
            w = std::conj(w);
        cld r = erf_first_quadrant(w);
        if (conjugate)
            r = std::conj(r);
        if (negate)
            r = -r;
        const std::complex<double> out(double(r.real()), double(r.imag()));
        if (!std::isfinite(out.real()) || !std::isfinite(out.imag()))
            throw std::range_error("erf_complex: result overflows double precision");
        return out;
    }

    std::complex<long double> erfcx_complex(std::complex<long double> z)
    {
        check_envelope(z.real(), z.imag(), "erfcx_complex");
        if (z.real() < 0.0L)
            throw std::invalid_argument("erfcx_complex: requires Re z >= 0");
        // 1 - erf(z) cancels once erf(z) is close to 1, so the fraction takes over earlier here.
        if (z.real() > series_limit || (z.real() >= 2.0L && std::norm(z) >= 6.25L))
            return erfcx_fraction(z);
        return std::exp(z * z) * (1.0L - erf_series(z));
    }

    std::complex<long double> exp_erf_difference(std::complex<long double> p,
                                                 std::complex<long double> z1,
                                                 std::complex<long double> z2)
    {
        // erfc(z) = exp(-z^2) erfcx(z) for Re z >= 0 and erf(z) = -1 + erfc(-z) for Re z < 0.
        auto tail = [&](cld z) { return std::exp(p - z * z) * erfcx_complex(z); };
        const bool r1 = z1.real() >= 0.0L, r2 = z2.real() >= 0.0L;
        if (r1 && r2)
            return tail(z2) - tail(z1);
        if (!r1 && !r2)
            return tail(-z1) - tail(-z2);
        if (r1)
            return 2.0L * std::exp(p) - tail(z1) - tail(-z2);
        return -2.0L * std::exp(p) + tail(-z1) + tail(z2);
    }
}
