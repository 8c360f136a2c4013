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

#ifndef SCF3D_SPECFUN_HPP
#define SCF3D_SPECFUN_HPP

#include <complex>
#include <vector>

namespace scf3d
{
    // Spherical Bessel function of the first kind j_n(x), x >= 0, n <= 400.
    double spherical_bessel_j(int n, double x);

    // All orders j_0(x) ... j_{n_max}(x) in one pass.
    std::vector<double> spherical_bessel_j_all(int n_max, double x);

    // Legendre polynomial P_n(x), |x| <= 1.
    double legendre_p(int n, double x);

    // Normalized associated Legendre function
    //   Pbar_n^m(x) = sqrt((n + 1/2) (n-m)! / (n+m)!) P_n^m(x)
    // without the Condon-Shortley phase. Throws std::invalid_argument for m > n.
    double assoc_legendre_pbar(int n, int m, double x);

    // Values Pbar_m^m(x) ... Pbar_{n_max}^m(x) for one order m. The factor (1-x^2)^{m/2}
    // is taken as s^m with the supplied signed s, which lets callers evaluate
    // Pbar_n^m(cos t) with s = sin t over a full period.
    void assoc_legendre_pbar_column(int m, int n_max, double x, double s, double *out);

    // Trigonometric expansions of Legendre functions of cos(x):
    //   even_legendre   (n):    P_{2n}(cos x)          = sum_{k=0..n} c_k cos(2kx)
    //   even_associated (n, m): Pbar_{2n}^{2m}(cos x)   = sum_{k=0..n} c_k cos(2kx),     m <= n
    //   odd_associated  (n, m): Pbar_{2n-1}^{2m-1}(cos x) = sum_{k=1..n} d_k sin((2k-1)x), 1 <= m <= n
    // For even_legendre, c_0 = p_n^2 and c_k = 2 p_{n-k} p_{n+k}.
    enum class TrigKind
    {
        even_legendre,
        even_associated,
        odd_associated
    };

    struct TrigExpansion
    {
        TrigKind kind;
        int n;
        int m;
        std::vector<double> coefficients; // index k (even kinds) or k-1 (odd kind)

        // Harmonic multiplying coefficients[i]: 2i for the even kinds, 2i+1 for the odd kind.
        int harmonic(std::size_t i) const;

        // Evaluates the expansion at x.
        double operator()(double x) const;
    };

    // Cached, thread-safe. Coefficients are obtained by projecting the polynomial onto each
    // harmonic with the trapezoid rule on a uniform 2048-point grid over [0, 2pi), which is
    // exact for trigonometric polynomials of this degree. Valid for n <= 511.
    const TrigExpansion &trig_expansion(TrigKind kind, int n, int m = 0);

    // Fills the cache for all kinds and orders with n <= n_max in one batched sweep.
    void trig_expansion_prefill(int n_max);

    // p_n of the even Legendre expansion, read back from the projected coefficients.
    double legendre_trig_p(int n);

    // Error function of complex argument, |Re z| <= 30 and |Im z| <= 30.
    // Throws std::range_error outside that envelope.
    std::complex<double> erf_complex(std::complex<double> z);

    // Scaled complementary error function exp(z^2) erfc(z) for Re z >= 0, |z| components <= 30.
    std::complex<long double> erfcx_complex(std::complex<long double> z);

    // exp(p) * (erf(z1) - erf(z2)) evaluated without overflow or cancellation when
    // z1 and z2 share a half plane.
    std::complex<long double> exp_erf_difference(std::complex<long double> p,
                                                 std::complex<long double> z1,
                                                 std::complex<long double> z2);

    // Modified Bessel function of the first kind I_n(x), 0 <= x <= 700, n <= 400.
    double modified_bessel_i(int n, double x);

    // exp(-x) I_n(x) for x >= 0, no upper bound on x apart from cost.
    double modified_bessel_i_scaled(int n, double x);

    // Ratio I_n(x) / I_0(x), accurate for all x >= 0.
    double modified_bessel_i_ratio(int n, double x);
}

#endif
