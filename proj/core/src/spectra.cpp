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

#include "scf3d/spectra.hpp"
#include "scf3d/specfun.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace scf3d
{
    namespace
    {
        constexpr double pi = std::numbers::pi;
        constexpr double sqrt2 = std::numbers::sqrt2;
        const double ln10 = std::log(10.0);
        constexpr double floor_db = 20.0;

        double wrap_pi(double phi)
        {
            double w = std::remainder(phi, 2.0 * pi);
            if (w <= -pi)
                w += 2.0 * pi;
            return w;
        }

        void check_axis_range(Axis axis, double lo, double hi)
        {
            const double eps = 1e-12;
            if (axis == Axis::azimuth && (lo < -pi - eps || hi > pi + eps))
                throw std::invalid_argument("azimuth support must lie in [-pi, pi]");
            if (axis == Axis::elevation && (lo < -eps || hi > pi + eps))
                throw std::invalid_argument("elevation support must lie in [0, pi]");
        }
    }

    // ---------------------------------------------------------------- densities

    AngularDensity AngularDensity::von_mises(double mu, double kappa)
    {
        if (!std::isfinite(mu) || !(kappa >= 0.0) || !std::isfinite(kappa))
            throw std::invalid_argument("von_mises: need finite mu and kappa >= 0");
        AngularDensity d;
        d.kind_ = DensityKind::von_mises;
        d.axis_ = Axis::azimuth;
        d.mu_ = wrap_pi(mu);
        d.kappa_ = kappa;
        d.lo_ = -pi;
        d.hi_ = pi;
        return d;
    }

    AngularDensity AngularDensity::laplacian_elevation(double theta0, double sigma)
    {
        if (!(theta0 > 0.0 && theta0 < pi))
            throw std::invalid_argument("laplacian_elevation: theta0 must lie in (0, pi)");
        if (!(sigma > 0.0) || !std::isfinite(sigma))
            throw std::invalid_argument("laplacian_elevation: sigma must be positive");
        AngularDensity d;
        d.kind_ = DensityKind::laplacian_elevation;
        d.axis_ = Axis::elevation;
        d.theta0_ = theta0;
        d.sigma_ = sigma;
        d.normalizer_ = laplacian_normalizer(theta0, sigma);
        d.lo_ = 0.0;
        d.hi_ = pi;
        return d;
    }

    AngularDensity AngularDensity::uniform(Axis axis, double lo, double hi)
    {
        if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
            throw std::invalid_argument("uniform: need lo <= hi");
        check_axis_range(axis, lo, hi);
        AngularDensity d;
        d.kind_ = DensityKind::uniform;
        d.axis_ = axis;
        d.lo_ = lo;
        d.hi_ = hi;
        return d;
    }

    AngularDensity AngularDensity::tabulated(Axis axis, std::vector<double> angles, std::vector<double> values)
    {
        if (angles.size() != values.size() || angles.size() < 2)
            throw std::invalid_argument("tabulated: need at least two (angle, density) pairs");
        const double step = (angles.back() - angles.front()) / double(angles.size() - 1);
        if (!(step > 0.0))
            throw std::invalid_argument("tabulated: angles must increase");
        for (std::size_t i = 0; i < angles.size(); ++i)
        {
            if (std::abs(angles[i] - (angles.front() + double(i) * step)) > 1e-3 * step)
                throw std::invalid_argument("tabulated: angles must form a uniform grid");
            if (!(values[i] >= 0.0) || !std::isfinite(values[i]))
                throw std::invalid_argument("tabulated: densities must be finite and non-negative");
        }
        check_axis_range(axis, angles.front(), angles.back());
        double mass = 0.0;
        for (std::size_t i = 0; i + 1 < values.size(); ++i)
            mass += 0.5 * step * (values[i] + values[i + 1]);
        if (!(mass > 0.0))
            throw std::invalid_argument("tabulated: density has zero mass");
        for (double &v : values)
            v /= mass;
        AngularDensity d;
        d.kind_ = DensityKind::tabulated;
        d.axis_ = axis;
        d.lo_ = angles.front();
        d.hi_ = angles.back();
        d.angles_ = std::move(angles);
        d.values_ = std::move(values);
        return d;
    }

    AngularDensity AngularDensity::load_tabulated(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open density table " + path);
        std::string line;
        bool have_axis = false;
        Axis axis = Axis::azimuth;
        std::vector<double> angles, values;
        while (std::getline(in, line))
        {
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos)
                continue;
            if (line[first] == '#')
            {
                const auto pos = line.find("axis=");
                if (pos != std::string::npos)
                {
                    std::string name = line.substr(pos + 5);
                    name.erase(name.find_last_not_of(" \t\r") + 1);
                    if (name == "azimuth")
                        axis = Axis::azimuth;
                    else if (name == "elevation")
                        axis = Axis::elevation;
                    else
                        throw std::invalid_argument("density table: unknown axis '" + name + "'");
                    have_axis = true;
                }
                continue;
            }
            std::istringstream row(line);
            double a = 0.0, v = 0.0;
            if (!(row >> a >> v))
                throw std::invalid_argument("density table: malformed line '" + line + "'");
            angles.push_back(a);
            values.push_back(v);
        }
        if (!have_axis)
            throw std::invalid_argument("density table: missing '# axis=' header");
        return tabulated(axis, std::move(angles), std::move(values));
    }

    double AngularDensity::pdf(double angle) const
    {
        switch (kind_)
        {
        case DensityKind::von_mises:
            return std::exp(kappa_ * (std::cos(angle - mu_) - 1.0)) /
                   (2.0 * pi * modified_bessel_i_scaled(0, kappa_));
        case DensityKind::laplacian_elevation:
            if (angle < 0.0 || angle > pi)
                return 0.0;
            return normalizer_ * std::exp(-sqrt2 * std::abs(angle - theta0_) / sigma_) * std::sin(angle);
        case DensityKind::uniform:
            if (angle < lo_ || angle > hi_ || lo_ == hi_)
                return 0.0;
            return 1.0 / (hi_ - lo_);
        case DensityKind::tabulated:
        {
            if (angle < lo_ || angle > hi_)
                return 0.0;
            const double step = (hi_ - lo_) / double(angles_.size() - 1);
            const double pos = (angle - lo_) / step;
            const std::size_t i = std::min(std::size_t(pos), angles_.size() - 2);
            const double t = pos - double(i);
            return (1.0 - t) * values_[i] + t * values_[i + 1];
        }
        }
        return 0.0;
    }

    double AngularDensity::power_density(double angle) const
    {
        if (axis_ == Axis::azimuth)
            return pdf(angle);
        if (kind_ == DensityKind::laplacian_elevation)
        {
            if (angle < 0.0 || angle > pi)
                return 0.0;
            return normalizer_ * std::exp(-sqrt2 * std::abs(angle - theta0_) / sigma_);
        }
        const double f = pdf(angle);
        return f == 0.0 ? 0.0 : f / std::sin(angle);
    }

    std::vector<double> AngularDensity::breakpoints() const
    {
        switch (kind_)
        {
        case DensityKind::laplacian_elevation:
            return {theta0_};
        case DensityKind::von_mises:
            return {mu_};
        case DensityKind::tabulated:
            return {angles_.begin() + 1, angles_.end() - 1};
        case DensityKind::uniform:
            return {};
        }
        return {};
    }

    double AngularDensity::support_lower() const { return lo_; }
    double AngularDensity::support_upper() const { return hi_; }

    // ---------------------------------------------------------------- patterns

    AntennaPattern AntennaPattern::unit() { return {}; }

    AntennaPattern AntennaPattern::horizontal(double phi_3db, bool floor_20db)
    {
        if (!(phi_3db > 0.0))
            throw std::invalid_argument("horizontal pattern: phi_3dB must be positive");
        AntennaPattern p;
        p.kind = PatternKind::horizontal;
        p.phi_3db = phi_3db;
        p.floor_20db = floor_20db;
        return p;
    }

    AntennaPattern AntennaPattern::vertical(double tilt, double theta_3db, bool floor_20db)
    {
        if (!(theta_3db > 0.0))
            throw std::invalid_argument("vertical pattern: theta_3dB must be positive");
        if (!(tilt >= 0.0 && tilt <= pi))
            throw std::invalid_argument("vertical pattern: tilt must lie in [0, pi]");
        AntennaPattern p;
        p.kind = PatternKind::vertical;
        p.tilt = tilt;
        p.theta_3db = theta_3db;
        p.floor_20db = floor_20db;
        return p;
    }

    double AntennaPattern::gain_db(double angle) const
    {
        double att = 0.0;
        switch (kind)
        {
        case PatternKind::unit_gain:
            return 0.0;
        case PatternKind::horizontal:
        {
            const double r = wrap_pi(angle) / phi_3db;
            att = 12.0 * r * r;
            break;
        }
        case PatternKind::vertical:
        {
            const double r = (angle - tilt) / theta_3db;
            att = 12.0 * r * r;
            break;
        }
        }
        if (floor_20db)
            att = std::min(att, floor_db);
        return -att;
    }

    double AntennaPattern::gain(double angle) const
    {
        if (kind == PatternKind::unit_gain)
            return 1.0;
        return std::exp(gain_db(angle) * 0.1 * ln10);
    }

    double pattern_gain(const AntennaPattern &pattern, double angle) { return pattern.gain(angle); }

    // ---------------------------------------------------------------- spectra

    AngularSpectrum::AngularSpectrum(AngularDensity density, AntennaPattern pattern, CoefficientPath path)
        : density_(std::move(density)), pattern_(pattern), path_(path)
    {
        if (pattern_.kind == PatternKind::horizontal && density_.axis() != Axis::azimuth)
            throw std::invalid_argument("horizontal pattern applies to azimuth spectra");
        if (pattern_.kind == PatternKind::vertical && density_.axis() != Axis::elevation)
            throw std::invalid_argument("vertical pattern applies to elevation spectra");
        if (path_ == CoefficientPath::closed_form && !has_closed_form())
            throw std::invalid_argument("no closed form for this density and pattern pair");
    }

    bool AngularSpectrum::has_closed_form() const
    {
        if (pattern_.floor_20db)
            return false;
        switch (density_.kind())
        {
        case DensityKind::von_mises:
            return pattern_.kind == PatternKind::unit_gain;
        case DensityKind::laplacian_elevation:
            return pattern_.kind == PatternKind::unit_gain || pattern_.kind == PatternKind::vertical;
        default:
            return false;
        }
    }

    double AngularSpectrum::value(double angle) const
    {
        return density_.power_density(angle) * pattern_.gain(angle);
    }

    double FsCoefficients::a_at(int m) const
    {
        const int k = std::abs(m);
        if (k >= int(a.size()))
            throw std::out_of_range("FS coefficient a(" + std::to_string(m) + ") not available");
        return a[k];
    }

    double FsCoefficients::b_at(int m) const
    {
        const int k = std::abs(m);
        if (k >= int(b.size()))
            throw std::out_of_range("FS coefficient b(" + std::to_string(m) + ") not available");
        return m < 0 ? -b[k] : b[k];
    }

    FsCoefficients FsCoefficients::scaled(double factor) const
    {
        FsCoefficients out = *this;
        for (double &v : out.a)
            v *= factor;
        for (double &v : out.b)
            v *= factor;
        return out;
    }

    double laplacian_normalizer(double theta0, double sigma)
    {
        if (!(theta0 > 0.0 && theta0 < pi) || !(sigma > 0.0))
            throw std::invalid_argument("laplacian_normalizer: need 0 < theta0 < pi and sigma > 0");
        const double num = 2.0 + sigma * sigma;
        const double den = 2.0 * sqrt2 * sigma * std::sin(theta0) +
                           2.0 * sigma * sigma * std::exp(-pi / (sqrt2 * sigma)) *
                               std::cosh(sqrt2 * (pi / 2.0 - theta0) / sigma);
        return num / den;
    }

    namespace
    {
        using cld = std::complex<long double>;

        // Closed form for the Laplacian elevation density weighted by the quadratic vertical pattern.
        // Each piece is exp(p) [erf(z1) - erf(z2)] with the shift u = pi/2 - theta; the piece whose
        // linear coefficient carries +sqrt(2)/sigma integrates theta in [0, theta0], the other one
        // theta in [theta0, pi]. Returns a(m) + i b(m).
        std::complex<double> laplacian_vertical_closed_form(const AngularDensity &d, const AntennaPattern &p, int m)
        {
            const long double a = 1.2L * std::log(10.0L) / ((long double)p.theta_3db * p.theta_3db);
            const long double shift = std::numbers::pi_v<long double> / 2.0L - (long double)p.tilt;
            const long double s = std::sqrt(2.0L) / (long double)d.sigma();
            const long double u0 = std::numbers::pi_v<long double> / 2.0L - (long double)d.theta0();
            const long double half_pi = std::numbers::pi_v<long double> / 2.0L;
            const long double lead = std::log((long double)d.normalizer() / (2.0L * std::sqrt(a * std::numbers::pi_v<long double>)));
            const long double sa = 2.0L * std::sqrt(a);
            const cld jm(0.0L, (long double)m);

            auto piece = [&](long double b, long double c, long double upper, long double lower) {
                const cld p_exp = lead - c + (2.0L * std::numbers::pi_v<long double> * a * jm + b * b + 2.0L * b * jm -
                                             (long double)m * (long double)m) / (4.0L * a);
                const cld z1 = (2.0L * a * upper + b + jm) / sa;
                const cld z2 = (2.0L * a * lower + b + jm) / sa;
                return exp_erf_difference(p_exp, z1, z2);
            };

            const long double b_common = -2.4L * shift * std::log(10.0L) / ((long double)p.theta_3db * p.theta_3db);
            const long double c_common = 1.2L * shift * shift * std::log(10.0L) / ((long double)p.theta_3db * p.theta_3db);
            // theta in [0, theta0]
            const cld below = piece(b_common + s, c_common - s * u0, half_pi, u0);
            // theta in [theta0, pi]
            const cld above = piece(b_common - s, c_common + s * u0, u0, -half_pi);
            const cld total = below + above;
            return {double(total.real()), double(total.imag())};
        }

        std::complex<double> laplacian_unit_closed_form(const AngularDensity &d, int m)
        {
            const double sigma = d.sigma(), theta0 = d.theta0(), A = d.normalizer();
            const double md = double(m);
            const double pre = A * sigma * sigma / (pi * (2.0 + md * md * sigma * sigma));
            const double e = std::exp(-pi / (sqrt2 * sigma));
            const double u = sqrt2 * (pi / 2.0 - theta0) / sigma;
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            const double ep = std::exp(u), em = std::exp(-u);
            const double a = pre * (2.0 * sqrt2 / sigma * std::cos(md * theta0) - sqrt2 / sigma * e * (ep + sign * em));
            const double b = pre * (2.0 * sqrt2 / sigma * std::sin(md * theta0) + md * e * (ep - sign * em));
            return {a, b};
        }

        std::complex<double> von_mises_closed_form(const AngularDensity &d, int m)
        {
            const double r = modified_bessel_i_ratio(m, d.kappa()) / pi;
            return {r * std::cos(double(m) * d.mu()), r * std::sin(double(m) * d.mu())};
        }

        std::complex<double> closed_form(const AngularSpectrum &s, int m)
        {
            const AngularDensity &d = s.density();
            if (d.kind() == DensityKind::von_mises)
                return von_mises_closed_form(d, m);
            if (s.pattern().kind == PatternKind::unit_gain)
                return laplacian_unit_closed_form(d, m);
            return laplacian_vertical_closed_form(d, s.pattern(), m);
        }

        std::vector<double> split_points(const AngularSpectrum &s)
        {
            const AngularDensity &d = s.density();
            const double lo = d.support_lower(), hi = d.support_upper();
            std::vector<double> pts{lo, hi};
            for (double b : d.breakpoints())
                pts.push_back(b);
            const AntennaPattern &p = s.pattern();
            const double reach = std::sqrt(floor_db / 12.0);
            if (p.kind == PatternKind::horizontal)
            {
                pts.push_back(0.0);
                if (p.floor_20db)
                {
                    pts.push_back(-reach * p.phi_3db);
                    pts.push_back(reach * p.phi_3db);
                }
            }
            if (p.kind == PatternKind::vertical)
            {
                pts.push_back(p.tilt);
                if (p.floor_20db)
                {
                    pts.push_back(p.tilt - reach * p.theta_3db);
                    pts.push_back(p.tilt + reach * p.theta_3db);
                }
            }
            std::vector<double> kept;
            for (double x : pts)
                if (x >= lo && x <= hi)
                    kept.push_back(x);
            std::sort(kept.begin(), kept.end());
            kept.erase(std::unique(kept.begin(), kept.end(), [](double x, double y) { return std::abs(x - y) < 1e-14; }),
                       kept.end());
            return kept;
        }

        std::complex<double> point_mass(const AngularSpectrum &s, int m)
        {
            const double x = s.density().lower();
            double w = s.pattern().gain(x) / pi;
            if (s.axis() == Axis::elevation)
            {
                const double sn = std::sin(x);
                if (std::abs(sn) < 1e-300)
                    throw std::invalid_argument("elevation point mass at a pole has no spectrum");
                w /= sn;
            }
            return {w * std::cos(double(m) * x), w * std::sin(double(m) * x)};
        }

        void check_integrable(const AngularSpectrum &s)
        {
            const AngularDensity &d = s.density();
            if (s.axis() != Axis::elevation || d.kind() == DensityKind::laplacian_elevation)
                return;
            const double eps = 1e-12;
            if ((d.support_lower() < eps && d.pdf(d.support_lower()) > 0.0) ||
                (d.support_upper() > pi - eps && d.pdf(d.support_upper()) > 0.0))
                throw std::invalid_argument("elevation density must vanish at 0 and pi for its spectrum to be integrable");
        }

        double quadrature(const AngularSpectrum &s, Trig trig, int m)
        {
            if (s.density().is_point_mass())
            {
                const auto c = point_mass(s, m);
                return trig == Trig::cos ? c.real() : c.imag();
            }
            check_integrable(s);
            const auto pts = split_points(s);
            const double md = double(m);
            auto f = [&](double x) {
                const double v = s.value(x);
                return v * (trig == Trig::cos ? std::cos(md * x) : std::sin(md * x));
            };
            double total = 0.0;
            for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            {
                const unsigned depth = s.density().kind() == DensityKind::tabulated ? 6 : 12;
                total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, pts[i], pts[i + 1], depth, 1e-13);
            }
            return total / pi;
        }
    }

    double fs_coefficient_quadrature(const AngularSpectrum &spectrum, Trig trig, int m)
    {
        if (m < 0)
            throw std::invalid_argument("fs_coefficient: negative harmonic; use parity");
        return quadrature(spectrum, trig, m);
    }

    double fs_coefficient(const AngularSpectrum &spectrum, Trig trig, int m)
    {
        if (m < 0)
            throw std::invalid_argument("fs_coefficient: negative harmonic; use parity");
        const bool closed = spectrum.path() == CoefficientPath::closed_form ||
                            (spectrum.path() == CoefficientPath::automatic && spectrum.has_closed_form());
        if (closed)
        {
            const auto c = closed_form(spectrum, m);
            return trig == Trig::cos ? c.real() : c.imag();
        }
        return quadrature(spectrum, trig, m);
    }

    FsCoefficients fs_coefficients(const AngularSpectrum &spectrum, int max_harmonic)
    {
        if (max_harmonic < 0)
            throw std::invalid_argument("fs_coefficients: negative harmonic count");
        FsCoefficients out;
        out.a.resize(max_harmonic + 1);
        out.b.resize(max_harmonic + 1);
        const bool closed = spectrum.path() == CoefficientPath::closed_form ||
                            (spectrum.path() == CoefficientPath::automatic && spectrum.has_closed_form());
        for (int m = 0; m <= max_harmonic; ++m)
        {
            if (closed)
            {
                const auto c = closed_form(spectrum, m);
                out.a[m] = c.real();
                out.b[m] = c.imag();
            }
            else
            {
                out.a[m] = quadrature(spectrum, Trig::cos, m);
                out.b[m] = quadrature(spectrum, Trig::sin, m);
            }
        }
        return out;
    }

    double wrapped_gaussian_from_von_mises(double kappa)
    {
        if (!(kappa > 0.0) || !std::isfinite(kappa))
            throw std::invalid_argument("wrapped_gaussian_from_von_mises: kappa must be positive");
        return std::sqrt(-2.0 * std::log(modified_bessel_i_ratio(1, kappa)));
    }

    double von_mises_from_wrapped_gaussian(double sigma_wg)
    {
        if (!(sigma_wg > 0.0) || !std::isfinite(sigma_wg))
            throw std::invalid_argument("von_mises_from_wrapped_gaussian: sigma must be positive");
        const double target = sigma_wg * sigma_wg;
        auto g = [&](double t) { return -2.0 * std::log(modified_bessel_i_ratio(1, std::exp(t))) - target; };
        const double t_lo = std::log(1e-100), t_hi = std::log(1e7);
        if (g(t_lo) < 0.0)
            throw std::range_error("von_mises_from_wrapped_gaussian: spread too large for any kappa > 0");
        if (g(t_hi) > 0.0)
            throw std::range_error("von_mises_from_wrapped_gaussian: spread too small, kappa above 1e7");
        std::uintmax_t iters = 200;
        const auto r = boost::math::tools::toms748_solve(g, t_lo, t_hi, boost::math::tools::eps_tolerance<double>(50), iters);
        return std::exp(0.5 * (r.first + r.second));
    }
}
