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

#ifndef SCF3D_SCF_HPP
#define SCF3D_SCF_HPP

#include "scf3d/spectra.hpp"

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace scf3d
{
    // Constant of the truncation bound.
    inline constexpr double truncation_eta = 0.678481234;

    // One side of the link: uniform linear array along y with spacing d / lambda.
    struct ScfConfig
    {
        double spacing_over_lambda;
        int port_count;
        int truncation; // N0
        AngularSpectrum azimuth;
        AngularSpectrum elevation;
        double gain_scale = 1.0; // linear peak gain

        double beta() const; // 2 pi d / lambda
    };

    // Lag-independent part of the series. Building it costs the FS coefficients and the
    // trig expansions; each lag is then a short sum over spherical Bessel values.
    class ScfSeries
    {
    public:
        explicit ScfSeries(const ScfConfig &config);
        // Needs harmonics 0 .. 2 N0 + 1 on both axes; throws std::invalid_argument otherwise.
        ScfSeries(const FsCoefficients &azimuth, const FsCoefficients &elevation, double spacing_over_lambda,
                  int truncation, double gain_scale = 1.0);

        std::complex<double> operator()(int lag) const;

        int truncation() const { return int(even_.size()); }
        double beta() const { return beta_; }

    private:
        double beta_ = 0.0;
        double gain_ = 1.0;
        double c0_ = 0.0;
        std::vector<double> even_; // multiplies j_{2n}, n = 1 .. N0
        std::vector<double> odd_;  // multiplies i j_{2n-1}
    };

    // Elevation fixed at pi / 2 and unit vertical gain.
    class Scf2dSeries
    {
    public:
        Scf2dSeries(const AngularSpectrum &azimuth, double spacing_over_lambda, int truncation,
                    double gain_scale = 1.0);
        Scf2dSeries(const FsCoefficients &azimuth, double spacing_over_lambda, int truncation,
                    double gain_scale = 1.0);

        std::complex<double> operator()(int lag) const;

        int truncation() const { return int(even_.size()); }

    private:
        double beta_ = 0.0;
        double gain_ = 1.0;
        double c0_ = 0.0;
        std::vector<double> even_;
        std::vector<double> odd_;
    };

    // Requires |lag| < port_count.
    std::complex<double> rho(const ScfConfig &config, int lag);

    std::complex<double> rho_2d(const AngularSpectrum &azimuth, double spacing_over_lambda, int lag,
                                int truncation = 15, double gain_scale = 1.0);

    // G eta exp(-delta), delta = N0 - ceil(e beta |lag| / 2). Throws std::domain_error if delta < 0.
    double truncation_bound(const ScfConfig &config, int lag);
    double truncation_bound(double gain_scale, double spacing_over_lambda, int truncation, int lag);

    // Smallest N0 whose series index 2 N0 clears ceil(e beta max_lag / 2) + ln(G eta / tol).
    int select_truncation(double spacing_over_lambda, int max_lag, double gain_scale = 1.0, double tol = 1e-12);

    // Message when N0 < ceil(e beta (port_count - 1) / 2), empty otherwise.
    std::optional<std::string> truncation_warning(const ScfConfig &config);

    // Hermitian Toeplitz matrix with entry (i, j) = rho(i - j).
    class CorrelationMatrix
    {
    public:
        // Validates rho(0) > 0 and |rho(k)| <= rho(0); eigenvalues in [-1e-9 rho(0), 0) are clipped,
        // larger negative ones throw std::runtime_error.
        explicit CorrelationMatrix(std::vector<std::complex<double>> first_row);

        static CorrelationMatrix identity(int order);

        int order() const { return int(first_row_.size()); }
        const std::vector<std::complex<double>> &first_row() const { return first_row_; }
        std::complex<double> operator()(int i, int j) const;
        // Dense matrix after any clipping.
        const Eigen::MatrixXcd &dense() const { return dense_; }
        const Eigen::VectorXd &eigenvalues() const { return eigenvalues_; }
        const Eigen::MatrixXcd &eigenvectors() const { return eigenvectors_; }
        bool clipped() const { return clipped_; }
        double trace() const { return double(order()) * first_row_[0].real(); }
        // Hermitian PSD square root from the stored decomposition.
        Eigen::MatrixXcd sqrt() const;

        // Row-major, each entry as "re,im".
        void write_csv(std::ostream &out) const;

    private:
        std::vector<std::complex<double>> first_row_;
        Eigen::MatrixXcd dense_;
        Eigen::VectorXd eigenvalues_;
        Eigen::MatrixXcd eigenvectors_;
        bool clipped_ = false;
    };

    CorrelationMatrix correlation_matrix(const ScfConfig &config);
    CorrelationMatrix correlation_matrix_2d(const AngularSpectrum &azimuth, double spacing_over_lambda,
                                            int port_count, int truncation = 15, double gain_scale = 1.0);
}

#endif
