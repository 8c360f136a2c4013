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

#include "scf3d/scf.hpp"
#include "scf3d/specfun.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace scf3d
{
    namespace
    {
        constexpr double pi = std::numbers::pi;
        constexpr int max_truncation = 200;

        double sign_pow(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

        void check_truncation(int n0)
        {
            if (n0 < 1 || n0 > max_truncation)
                throw std::invalid_argument("truncation order must lie in 1.." + std::to_string(max_truncation));
        }

        // Highest FS harmonic the series of order n0 reads.
        int checked_harmonics(int n0)
        {
            check_truncation(n0);
            return 2 * n0 + 1;
        }

        void check_harmonics(const FsCoefficients &c, int needed, const char *axis)
        {
            if (c.max_harmonic() < needed || int(c.b.size()) != int(c.a.size()))
                throw std::invalid_argument(std::string("insufficient ") + axis + " FS harmonics: need " +
                                            std::to_string(needed) + ", have " + std::to_string(c.max_harmonic()));
        }

        // Spectrum-independent factors of the series for one truncation order: the Legendre
        // values at 0 with their signs and the trig expansions, laid out by (n, m).
        struct Kernel
        {
            int n0 = 0;
            std::vector<double> lead;          // (-1)^n (4n+1) P_2n(0), n = 1..N0
            std::vector<double> even, odd;     // 4 (-1)^(n+m) Pbar(0), packed by (n, m)
            std::vector<double> even_sq, odd_sq; // Pbar(0)^2 for the planar series
            std::vector<const std::vector<double> *> lead_c, even_c, odd_c;

            static std::size_t at(int n, int m) { return std::size_t(n) * std::size_t(n - 1) / 2 + std::size_t(m - 1); }
        };

        const Kernel &kernel(int n0)
        {
            static std::mutex mutex;
            static std::map<int, std::unique_ptr<Kernel>> kernels;
            std::lock_guard lock(mutex);
            auto &slot = kernels[n0];
            if (slot)
                return *slot;
            trig_expansion_prefill(n0);
            auto k = std::make_unique<Kernel>();
            k->n0 = n0;
            const int deg = 2 * n0;
            // pbar[q][n - q] = Pbar_n^q(0)
            std::vector<std::vector<double>> pbar(deg + 1);
            for (int q = 0; q <= deg; ++q)
            {
                pbar[q].resize(deg - q + 1);
                assoc_legendre_pbar_column(q, deg, 0.0, 1.0, pbar[q].data());
            }
            const std::size_t pairs = Kernel::at(n0 + 1, 1);
            k->even.resize(pairs);
            k->odd.resize(pairs);
            k->even_sq.resize(pairs);
            k->odd_sq.resize(pairs);
            k->even_c.resize(pairs);
            k->odd_c.resize(pairs);
            for (int n = 1; n <= n0; ++n)
            {
                k->lead.push_back(sign_pow(n) * (4.0 * n + 1.0) * legendre_p(2 * n, 0.0));
                k->lead_c.push_back(&trig_expansion(TrigKind::even_legendre, n).coefficients);
                for (int m = 1; m <= n; ++m)
                {
                    const std::size_t i = Kernel::at(n, m);
                    const double pe = pbar[2 * m][2 * n - 2 * m], po = pbar[2 * m - 1][2 * n - 2 * m];
                    k->even[i] = 4.0 * sign_pow(n + m) * pe;
                    k->odd[i] = 4.0 * sign_pow(n + m) * po;
                    k->even_sq[i] = pe * pe;
                    k->odd_sq[i] = po * po;
                    k->even_c[i] = &trig_expansion(TrigKind::even_associated, n, m).coefficients;
                    k->odd_c[i] = &trig_expansion(TrigKind::odd_associated, n, m).coefficients;
                }
            }
            slot = std::move(k);
            return *slot;
        }

        double dot(const std::vector<double> &c, const std::vector<double> &v)
        {
            double s = 0.0;
            for (std::size_t i = 0; i < c.size(); ++i)
                s += c[i] * v[i];
            return s;
        }

        std::complex<double> sum_series(double beta, double gain, double c0, const std::vector<double> &even,
                                        const std::vector<double> &odd, int lag)
        {
            const int n0 = int(even.size());
            const double x = beta * double(std::abs(lag));
            const std::vector<double> j = spherical_bessel_j_all(2 * n0, x);
            double re = c0 * j[0], im = 0.0;
            for (int n = 1; n <= n0; ++n)
            {
                re += even[n - 1] * j[2 * n];
                im += odd[n - 1] * j[2 * n - 1];
            }
            const std::complex<double> r(gain * re, gain * im);
            return lag < 0 ? std::conj(r) : r;
        }
    }

    double ScfConfig::beta() const { return 2.0 * pi * spacing_over_lambda; }

    ScfSeries::ScfSeries(const ScfConfig &config)
        : ScfSeries(fs_coefficients(config.azimuth, checked_harmonics(config.truncation)),
                    fs_coefficients(config.elevation, checked_harmonics(config.truncation)), config.spacing_over_lambda,
                    config.truncation, config.gain_scale)
    {
        if (config.azimuth.axis() != Axis::azimuth || config.elevation.axis() != Axis::elevation)
            throw std::invalid_argument("ScfConfig: spectra attached to the wrong axes");
    }

    ScfSeries::ScfSeries(const FsCoefficients &az, const FsCoefficients &el, double spacing_over_lambda,
                         int truncation, double gain_scale)
    {
        check_truncation(truncation);
        if (!(spacing_over_lambda > 0.0))
            throw std::invalid_argument("spacing must be positive");
        if (!(gain_scale > 0.0))
            throw std::invalid_argument("gain scale must be positive");
        check_harmonics(az, 2 * truncation, "azimuth");
        check_harmonics(el, 2 * truncation + 1, "elevation");
        beta_ = 2.0 * pi * spacing_over_lambda;
        gain_ = gain_scale;
        const double pi2 = pi * pi;
        c0_ = pi2 * az.a_at(0) * el.b_at(1);
        const Kernel &k = kernel(truncation);
        // Elevation sums: sum_k c_k (b(2k+1) - b(2k-1)) / 2 and sum_k d_k (a(2k-2) - a(2k)) / 2.
        std::vector<double> db(truncation + 1), da(truncation);
        for (int i = 0; i <= truncation; ++i)
            db[i] = 0.5 * (el.b_at(2 * i + 1) - el.b_at(2 * i - 1));
        for (int i = 1; i <= truncation; ++i)
            da[i - 1] = 0.5 * (el.a_at(2 * i - 2) - el.a_at(2 * i));
        even_.resize(truncation);
        odd_.resize(truncation);
        for (int n = 1; n <= truncation; ++n)
        {
            double e = k.lead[n - 1] * az.a_at(0) * dot(*k.lead_c[n - 1], db);
            double o = 0.0;
            for (int m = 1; m <= n; ++m)
            {
                const std::size_t i = Kernel::at(n, m);
                e += k.even[i] * az.a_at(2 * m) * dot(*k.even_c[i], db);
                o += k.odd[i] * az.b_at(2 * m - 1) * dot(*k.odd_c[i], da);
            }
            even_[n - 1] = pi2 * e;
            odd_[n - 1] = pi2 * o;
        }
    }

    std::complex<double> ScfSeries::operator()(int lag) const
    {
        return sum_series(beta_, gain_, c0_, even_, odd_, lag);
    }

    Scf2dSeries::Scf2dSeries(const AngularSpectrum &azimuth, double spacing_over_lambda, int truncation,
                             double gain_scale)
        : Scf2dSeries((check_truncation(truncation), fs_coefficients(azimuth, 2 * truncation)), spacing_over_lambda,
                      truncation, gain_scale)
    {
        if (azimuth.axis() != Axis::azimuth)
            throw std::invalid_argument("rho_2d needs an azimuth spectrum");
    }

    Scf2dSeries::Scf2dSeries(const FsCoefficients &az, double spacing_over_lambda, int truncation,
                             double gain_scale)
    {
        check_truncation(truncation);
        if (!(spacing_over_lambda > 0.0))
            throw std::invalid_argument("spacing must be positive");
        if (!(gain_scale > 0.0))
            throw std::invalid_argument("gain scale must be positive");
        check_harmonics(az, 2 * truncation, "azimuth");
        beta_ = 2.0 * pi * spacing_over_lambda;
        gain_ = gain_scale;
        c0_ = pi * az.a_at(0);
        const Kernel &k = kernel(truncation);
        even_.resize(truncation);
        odd_.resize(truncation);
        for (int n = 1; n <= truncation; ++n)
        {
            const double p = legendre_p(2 * n, 0.0);
            double e = sign_pow(n) * (4.0 * n + 1.0) * p * p * az.a_at(0);
            double o = 0.0;
            for (int m = 1; m <= n; ++m)
            {
                const std::size_t i = Kernel::at(n, m);
                const double s = 4.0 * sign_pow(n + m);
                e += s * k.even_sq[i] * az.a_at(2 * m);
                o += s * k.odd_sq[i] * az.b_at(2 * m - 1);
            }
            even_[n - 1] = pi * e;
            odd_[n - 1] = pi * o;
        }
    }

    std::complex<double> Scf2dSeries::operator()(int lag) const
    {
        return sum_series(beta_, gain_, c0_, even_, odd_, lag);
    }

    std::complex<double> rho(const ScfConfig &config, int lag)
    {
        if (std::abs(lag) >= config.port_count)
            throw std::invalid_argument("rho: |lag| must be below the port count");
        return ScfSeries(config)(lag);
    }

    std::complex<double> rho_2d(const AngularSpectrum &azimuth, double spacing_over_lambda, int lag, int truncation,
                                double gain_scale)
    {
        return Scf2dSeries(azimuth, spacing_over_lambda, truncation, gain_scale)(lag);
    }

    double truncation_bound(double gain_scale, double spacing_over_lambda, int truncation, int lag)
    {
        const double beta = 2.0 * pi * spacing_over_lambda;
        const double reach = std::ceil(std::numbers::e * beta * double(std::abs(lag)) / 2.0);
        const double delta = double(truncation) - reach;
        if (delta < 0.0)
            throw std::domain_error("truncation bound does not apply: N0 below ceil(e beta |lag| / 2)");
        return gain_scale * truncation_eta * std::exp(-delta);
    }

    double truncation_bound(const ScfConfig &config, int lag)
    {
        return truncation_bound(config.gain_scale, config.spacing_over_lambda, config.truncation, lag);
    }

    int select_truncation(double spacing_over_lambda, int max_lag, double gain_scale, double tol)
    {
        if (!(tol > 0.0) || !(spacing_over_lambda > 0.0) || max_lag < 0)
            throw std::invalid_argument("select_truncation: bad arguments");
        const double beta = 2.0 * pi * spacing_over_lambda;
        const double reach = std::ceil(std::numbers::e * beta * double(max_lag) / 2.0);
        const double margin = std::max(0.0, std::log(gain_scale * truncation_eta / tol));
        const int n0 = std::max(1, int(std::ceil((reach + margin) / 2.0)));
        if (n0 > max_truncation)
            throw std::domain_error("select_truncation: required order exceeds " + std::to_string(max_truncation));
        return n0;
    }

    std::optional<std::string> truncation_warning(const ScfConfig &config)
    {
        const double reach = std::ceil(std::numbers::e * config.beta() * double(config.port_count - 1) / 2.0);
        if (double(config.truncation) >= reach)
            return std::nullopt;
        char buf[200];
        std::snprintf(buf, sizeof buf, "N0 = %d is below ceil(e beta (N - 1) / 2) = %.0f; far lags may be inaccurate",
                      config.truncation, reach);
        return std::string(buf);
    }

    CorrelationMatrix::CorrelationMatrix(std::vector<std::complex<double>> first_row) : first_row_(std::move(first_row))
    {
        const int n = int(first_row_.size());
        if (n < 1)
            throw std::invalid_argument("correlation matrix needs at least one entry");
        const double r0 = first_row_[0].real();
        if (!(r0 > 0.0) || !std::isfinite(r0))
            throw std::invalid_argument("rho(0) must be real and positive");
        first_row_[0] = r0;
        for (int k = 1; k < n; ++k)
        {
            if (!std::isfinite(first_row_[k].real()) || !std::isfinite(first_row_[k].imag()))
                throw std::invalid_argument("correlation entries must be finite");
            if (std::abs(first_row_[k]) > r0 * (1.0 + 1e-9))
                throw std::runtime_error("|rho(" + std::to_string(k) + ")| exceeds rho(0); truncation too coarse?");
        }
        dense_.resize(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                dense_(i, j) = (*this)(i, j);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("eigendecomposition failed");
        eigenvalues_ = es.eigenvalues();
        eigenvectors_ = es.eigenvectors();
        const double tol = 1e-9 * r0;
        if (eigenvalues_.minCoeff() < -tol)
            throw std::runtime_error("correlation matrix indefinite beyond tolerance (min eigenvalue " +
                                     std::to_string(eigenvalues_.minCoeff()) + "); truncation too coarse?");
        if (eigenvalues_.minCoeff() < 0.0)
        {
            clipped_ = true;
            eigenvalues_ = eigenvalues_.cwiseMax(0.0);
            dense_ = eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.adjoint();
            dense_ = (0.5 * (dense_ + dense_.adjoint())).eval();
        }
    }

    CorrelationMatrix CorrelationMatrix::identity(int order)
    {
        if (order < 1)
            throw std::invalid_argument("identity: order must be positive");
        std::vector<std::complex<double>> row(order, 0.0);
        row[0] = 1.0;
        return CorrelationMatrix(std::move(row));
    }

    Eigen::MatrixXcd CorrelationMatrix::sqrt() const
    {
        return eigenvectors_ * eigenvalues_.cwiseSqrt().asDiagonal() * eigenvectors_.adjoint();
    }

    std::complex<double> CorrelationMatrix::operator()(int i, int j) const
    {
        const int k = i - j;
        return k >= 0 ? first_row_[k] : std::conj(first_row_[-k]);
    }

    void CorrelationMatrix::write_csv(std::ostream &out) const
    {
        char buf[64];
        for (int i = 0; i < dense_.rows(); ++i)
        {
            for (int j = 0; j < dense_.cols(); ++j)
            {
                std::snprintf(buf, sizeof buf, "%s%.17g,%.17g", j ? "," : "", dense_(i, j).real(), dense_(i, j).imag());
                out << buf;
            }
            out << '\n';
        }
    }

    CorrelationMatrix correlation_matrix(const ScfConfig &config)
    {
        if (config.port_count < 1)
            throw std::invalid_argument("port_count must be positive");
        const ScfSeries series(config);
        std::vector<std::complex<double>> row(config.port_count);
        for (int k = 0; k < config.port_count; ++k)
            row[k] = series(k);
        return CorrelationMatrix(std::move(row));
    }

    CorrelationMatrix correlation_matrix_2d(const AngularSpectrum &azimuth, double spacing_over_lambda, int port_count,
                                            int truncation, double gain_scale)
    {
        if (port_count < 1)
            throw std::invalid_argument("port_count must be positive");
        const Scf2dSeries series(azimuth, spacing_over_lambda, truncation, gain_scale);
        std::vector<std::complex<double>> row(port_count);
        for (int k = 0; k < port_count; ++k)
            row[k] = series(k);
        return CorrelationMatrix(std::move(row));
    }
}
