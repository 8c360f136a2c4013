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

#ifndef SCF3D_SPECTRA_HPP
#define SCF3D_SPECTRA_HPP

#include <string>
#include <vector>

namespace scf3d
{
    enum class Axis
    {
        azimuth,   // angle in [-pi, pi]
        elevation  // angle in [0, pi], measured from the array's vertical axis
    };

    enum class DensityKind
    {
        von_mises,
        laplacian_elevation,
        uniform,
        tabulated
    };

    // Probability density of one angle. For elevation densities the stored function is f_theta;
    // the power density entering the spectrum is p_theta = f_theta / sin(theta).
    class AngularDensity
    {
    public:
        static AngularDensity von_mises(double mu, double kappa);
        static AngularDensity laplacian_elevation(double theta0, double sigma);
        // lo == hi gives a point mass, useful for deterministic geometries.
        static AngularDensity uniform(Axis axis, double lo, double hi);
        // Samples on a uniform grid; linear interpolation, renormalized on construction.
        static AngularDensity tabulated(Axis axis, std::vector<double> angles, std::vector<double> values);
        // Two-column text file (angle_rad density) with a "# axis=azimuth|elevation" header line.
        static AngularDensity load_tabulated(const std::string &path);

        DensityKind kind() const { return kind_; }
        Axis axis() const { return axis_; }

        double mu() const { return mu_; }
        double kappa() const { return kappa_; }
        double theta0() const { return theta0_; }
        double sigma() const { return sigma_; }
        double normalizer() const { return normalizer_; }
        double lower() const { return lo_; }
        double upper() const { return hi_; }
        bool is_point_mass() const { return kind_ == DensityKind::uniform && lo_ == hi_; }
        const std::vector<double> &table_angles() const { return angles_; }
        const std::vector<double> &table_values() const { return values_; }

        double pdf(double angle) const;            // f
        double power_density(double angle) const;  // f for azimuth, f / sin for elevation
        std::vector<double> breakpoints() const;   // kinks inside the support, for quadrature splits
        double support_lower() const;
        double support_upper() const;

    private:
        AngularDensity() = default;
        DensityKind kind_ = DensityKind::uniform;
        Axis axis_ = Axis::azimuth;
        double mu_ = 0.0, kappa_ = 0.0;
        double theta0_ = 0.0, sigma_ = 0.0, normalizer_ = 1.0;
        double lo_ = 0.0, hi_ = 0.0;
        std::vector<double> angles_, values_;
    };

    enum class PatternKind
    {
        unit_gain,
        horizontal, // -12 (phi / phi_3dB)^2 dB
        vertical    // -12 ((theta - theta_tilt) / theta_3dB)^2 dB
    };

    // Antenna power pattern with 0 dB peak. The peak gain is carried separately as a scale.
    struct AntennaPattern
    {
        PatternKind kind = PatternKind::unit_gain;
        double tilt = 0.0;     // theta_tilt, rad
        double theta_3db = 0.0; // rad
        double phi_3db = 0.0;   // rad
        bool floor_20db = false; // clamp attenuation at 20 dB (quadrature path only)

        static AntennaPattern unit();
        static AntennaPattern horizontal(double phi_3db, bool floor_20db = false);
        static AntennaPattern vertical(double tilt, double theta_3db, bool floor_20db = false);

        double gain_db(double angle) const;
        double gain(double angle) const;
    };

    double pattern_gain(const AntennaPattern &pattern, double angle);

    enum class CoefficientPath
    {
        automatic,   // closed form when available, quadrature otherwise
        closed_form,
        quadrature
    };

    enum class Trig
    {
        cos,
        sin
    };

    // PAS (azimuth) or PES (elevation): density times pattern gain.
    class AngularSpectrum
    {
    public:
        AngularSpectrum(AngularDensity density, AntennaPattern pattern,
                        CoefficientPath path = CoefficientPath::automatic);

        Axis axis() const { return density_.axis(); }
        const AngularDensity &density() const { return density_; }
        const AntennaPattern &pattern() const { return pattern_; }
        CoefficientPath path() const { return path_; }
        bool has_closed_form() const;

        double value(double angle) const;

    private:
        AngularDensity density_;
        AntennaPattern pattern_;
        CoefficientPath path_;
    };

    // Fourier-series coefficients a(m), b(m) for m = 0 .. max_harmonic.
    // Negative harmonics follow a(-m) = a(m), b(-m) = -b(m).
    struct FsCoefficients
    {
        std::vector<double> a;
        std::vector<double> b;

        int max_harmonic() const { return int(a.size()) - 1; }
        double a_at(int m) const;
        double b_at(int m) const;
        FsCoefficients scaled(double factor) const;
    };

    // a(m) = (1/pi) int PAS cos(m phi) over [-pi, pi] or (1/pi) int PES cos(m theta) over [0, pi];
    // b(m) likewise with sin.
    double fs_coefficient(const AngularSpectrum &spectrum, Trig trig, int m);
    FsCoefficients fs_coefficients(const AngularSpectrum &spectrum, int max_harmonic);

    // Same integrals by adaptive quadrature regardless of the configured path.
    double fs_coefficient_quadrature(const AngularSpectrum &spectrum, Trig trig, int m);

    // Normalizer A of the truncated Laplacian elevation density.
    double laplacian_normalizer(double theta0, double sigma);

    // Von Mises concentration matching a wrapped Gaussian of standard deviation sigma_wg.
    double von_mises_from_wrapped_gaussian(double sigma_wg);
    double wrapped_gaussian_from_von_mises(double kappa);
}

#endif
