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

#include "scf3d/validation.hpp"
#include "scf3d/channel.hpp"
#include "scf3d/infotheory.hpp"
#include "scf3d/rng.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

namespace scf3d
{
    namespace
    {
        constexpr double pi = std::numbers::pi;
        double deg(double d) { return d * pi / 180.0; }

        using gk = boost::math::quadrature::gauss_kronrod<double, 61>;

        std::vector<double> panels(const AngularSpectrum &s)
        {
            std::vector<double> pts{s.density().support_lower(), s.density().support_upper()};
            for (double b : s.density().breakpoints())
                pts.push_back(b);
            const AntennaPattern &pat = s.pattern();
            if (pat.kind == PatternKind::vertical)
                pts.push_back(pat.tilt);
            else if (pat.kind == PatternKind::horizontal)
                pts.push_back(0.0);
            std::sort(pts.begin(), pts.end());
            std::vector<double> out;
            for (double p : pts)
                if (p >= pts.front() && p <= pts.back() && (out.empty() || p > out.back() + 1e-12))
                    out.push_back(p);
            return out;
        }

        template <class F>
        double integrate(F &&f, const std::vector<double> &pts)
        {
            double total = 0.0;
            for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                total += gk::integrate(f, pts[i], pts[i + 1], 10, 1e-12);
            return total;
        }

        Check make(std::string name, double measured, double tol, std::string detail = "")
        {
            return Check{std::move(name), measured, tol, measured <= tol, std::move(detail)};
        }

        ScfConfig tx_setup(double spacing, int ports, int truncation, double gain_dbi)
        {
            return ScfConfig{spacing,
                             ports,
                             truncation,
                             AngularSpectrum(AngularDensity::von_mises(2.0 * pi / 3.0, 5.0), AntennaPattern::unit()),
                             AngularSpectrum(AngularDensity::laplacian_elevation(deg(90.0), deg(7.0)),
                                             AntennaPattern::vertical(deg(95.0), deg(15.0))),
                             std::pow(10.0, gain_dbi / 10.0)};
        }
    }

    bool ValidationReport::passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.passed; });
    }

    void ValidationReport::write(std::ostream &out) const
    {
        char buf[64];
        for (const auto &c : checks)
        {
            out << (c.passed ? "PASS  " : "FAIL  ") << c.name;
            std::snprintf(buf, sizeof buf, ": measured %.3e, tolerance %.3e", c.measured, c.threshold);
            out << buf;
            if (!c.detail.empty())
                out << " (" << c.detail << ")";
            out << '\n';
        }
        out << (passed() ? "all checks passed" : "validation failed") << '\n';
    }

    std::complex<double> rho_quadrature(const ScfConfig &config, int lag)
    {
        const double x = config.beta() * double(lag);
        const AngularSpectrum &az = config.azimuth, &el = config.elevation;
        const std::vector<double> az_pts = panels(az), el_pts = panels(el);
        auto part = [&](bool imaginary) {
            auto outer = [&](double phi) {
                const double w = az.density().pdf(phi) * pattern_gain(az.pattern(), phi);
                if (w == 0.0)
                    return 0.0;
                const double s = std::sin(phi);
                auto inner = [&](double theta) {
                    const double arg = x * s * std::sin(theta);
                    return el.density().pdf(theta) * pattern_gain(el.pattern(), theta) *
                           (imaginary ? std::sin(arg) : std::cos(arg));
                };
                return w * integrate(inner, el_pts);
            };
            return integrate(outer, az_pts);
        };
        return config.gain_scale * std::complex<double>(part(false), lag == 0 ? 0.0 : part(true));
    }

    Check check_series_vs_quadrature(std::uint64_t seed, int configurations, int truncation)
    {
        RandomStream rng(seed, 0x5346u);
        auto between = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
        double worst = 0.0;
        for (int c = 0; c < configurations; ++c)
        {
            const AngularDensity az = AngularDensity::von_mises(between(-pi, pi), between(0.5, 20.0));
            const AntennaPattern hp =
                rng.uniform() < 0.5 ? AntennaPattern::unit() : AntennaPattern::horizontal(deg(between(50.0, 90.0)));
            const AngularDensity el = AngularDensity::laplacian_elevation(deg(between(60.0, 120.0)),
                                                                          deg(between(3.0, 20.0)));
            const AntennaPattern vp = rng.uniform() < 0.3 ? AntennaPattern::unit()
                                                          : AntennaPattern::vertical(deg(between(85.0, 105.0)),
                                                                                     deg(between(10.0, 20.0)));
            const ScfConfig cfg{between(0.1, 0.25), 10,       truncation, AngularSpectrum(az, hp),
                                AngularSpectrum(el, vp), between(1.0, 3.0)};
            const ScfSeries series(cfg);
            for (int l = 0; l < cfg.port_count; ++l)
                worst = std::max(worst, std::abs(series(l) - rho_quadrature(cfg, l)));
        }
        return make("series vs quadrature, " + std::to_string(configurations) + " random configurations", worst,
                    1e-5, "N0 = " + std::to_string(truncation) + ", lags 0..9, d in [0.1, 0.25] lambda");
    }

    Check check_closed_forms(int max_harmonic)
    {
        std::vector<AngularSpectrum> cases;
        for (double mu : {2.0 * pi / 3.0, 0.0})
            for (double kappa : {1.0, 2.0, 5.0, 10.0, 20.0})
                cases.emplace_back(AngularDensity::von_mises(mu, kappa), AntennaPattern::unit(),
                                   CoefficientPath::closed_form);
        for (double theta0 : {90.0, 110.0, 95.37, 103.2})
            for (double sigma : {3.0, 5.0, 7.0, 10.0, 15.0, 20.0})
            {
                const AngularDensity el = AngularDensity::laplacian_elevation(deg(theta0), deg(sigma));
                cases.emplace_back(el, AntennaPattern::unit(), CoefficientPath::closed_form);
                for (double tilt : {92.0, 95.0, 97.0, 102.0})
                    cases.emplace_back(el, AntennaPattern::vertical(deg(tilt), deg(15.0)),
                                       CoefficientPath::closed_form);
            }
        double worst = 0.0;
        for (const auto &s : cases)
            for (int m = 0; m <= max_harmonic; ++m)
                for (Trig t : {Trig::cos, Trig::sin})
                    worst = std::max(worst, std::abs(fs_coefficient(s, t, m) - fs_coefficient_quadrature(s, t, m)));
        return make("closed-form FS coefficients vs quadrature, m <= " + std::to_string(max_harmonic), worst, 1e-7,
                    std::to_string(cases.size()) + " spectra");
    }

    std::vector<Check> check_truncation_bound()
    {
        const ScfConfig low = tx_setup(0.5, 10, 14, 17.0), ref = tx_setup(0.5, 10, 30, 17.0);
        const ScfSeries a(low), b(ref);
        double worst = -1e300;
        int lags = 0;
        for (int l = 0; l < low.port_count; ++l)
        {
            double bound;
            try
            {
                bound = truncation_bound(low, l);
            }
            catch (const std::domain_error &)
            {
                break;
            }
            worst = std::max(worst, std::abs(a(l) - b(l)) - bound);
            ++lags;
        }
        const double ratio = truncation_bound(low, 2) / low.gain_scale;
        return {make("truncation error N0 = 14 vs 30 minus bound", worst, 0.0,
                     "lags 0.." + std::to_string(lags - 1) + ", d = 0.5 lambda, G = 17 dBi"),
                Check{"truncation bound / G at lag 2", ratio, 0.005, std::abs(ratio - 0.005) <= 0.001,
                      "expected about 0.5%"}};
    }

    Check check_identity_fixed_point()
    {
        const CorrelationMatrix i20 = CorrelationMatrix::identity(20);
        const FixedPointSolution s = deterministic_mi(i20, i20, 1.0);
        const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
        return make("identity correlation fixed point vs (sqrt 5 - 1) / 2",
                    std::max(std::abs(s.kappa - golden), std::abs(s.kappa_bar - golden)), 1e-10);
    }

    Check check_philox_vectors()
    {
        using A4 = std::array<std::uint32_t, 4>;
        struct Case
        {
            A4 ctr;
            std::array<std::uint32_t, 2> key;
            A4 expect;
        };
        const Case cases[] = {
            {{0, 0, 0, 0}, {0, 0}, {0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}},
            {{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
             {0xffffffff, 0xffffffff},
             {0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}},
            {{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
             {0xa4093822, 0x299f31d0},
             {0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}},
        };
        int bad = 0;
        for (const auto &c : cases)
            bad += philox4x32(c.ctr, c.key) != c.expect;
        return make("Philox4x32-10 known-answer vectors, mismatches", bad, 0.0);
    }

    Check check_planar_uniform()
    {
        const AngularSpectrum u(AngularDensity::uniform(Axis::azimuth, -pi, pi), AntennaPattern::unit());
        double worst = 0.0;
        for (int l = 0; l < 10; ++l)
            worst = std::max(worst, std::abs(rho_2d(u, 0.5, l, 30) - std::cyl_bessel_j(0.0, pi * l)));
        return make("planar uniform azimuth vs J0", worst, 1e-10, "d = 0.5 lambda, lags 0..9");
    }

    Check check_hermitian_symmetry()
    {
        const ScfSeries s(tx_setup(0.5, 10, 15, 0.0));
        double worst = 0.0;
        for (int l = 1; l < 10; ++l)
            worst = std::max(worst, std::abs(s(-l) - std::conj(s(l))));
        return make("rho(-l) - conj rho(l)", worst, 1e-14);
    }

    Check check_correlation_psd()
    {
        double worst = 0.0;
        auto track = [&](const CorrelationMatrix &r) {
            const double r0 = r.first_row()[0].real();
            worst = std::max(worst, -r.eigenvalues().minCoeff() / r0);
            for (int i = 0; i < r.order(); ++i)
                for (int j = 0; j < r.order(); ++j)
                    worst = std::max(worst, std::abs(r(i, j) - std::conj(r(j, i))) / r0);
        };
        for (const char *name : {"det-mi-verify", "mi-vs-kappa"})
        {
            const Params p = experiment_defaults(name);
            track(correlation_matrix(side_scf_config(p, "tx_", 0)));
            track(correlation_matrix(side_scf_config(p, "rx_", 0)));
        }
        for (double d : {0.2, 0.5, 1.0})
            track(correlation_matrix(tx_setup(d, 20, select_truncation(d, 19), 0.0)));
        return make("correlation matrices: -min eigenvalue and Hermitian defect, relative to rho(0)", worst, 1e-9);
    }

    Check check_thread_invariance(std::uint64_t seed)
    {
        int differences = 0;
        for (const char *name : {"scf-tx", "det-mi-verify"})
        {
            std::string first;
            for (unsigned threads : {1u, 3u, 1u})
            {
                ExperimentSpec spec{name, {}, 64, seed, threads};
                if (std::string(name) == "det-mi-verify")
                    spec.overrides["snr_db_list"] = "0,10";
                const std::string csv = run_experiment(spec).to_csv();
                if (first.empty())
                    first = csv;
                else
                    differences += csv != first;
            }
        }
        return make("CSV differences across runs and thread counts", differences, 0.0, "1, 3, 1 threads");
    }

    ValidationReport validate(const ValidationOptions &o)
    {
        ValidationReport r;
        r.checks.push_back(check_philox_vectors());
        r.checks.push_back(check_closed_forms());
        r.checks.push_back(check_series_vs_quadrature(o.seed));
        for (auto &c : check_truncation_bound())
            r.checks.push_back(std::move(c));
        r.checks.push_back(check_planar_uniform());
        r.checks.push_back(check_hermitian_symmetry());
        r.checks.push_back(check_correlation_psd());
        r.checks.push_back(check_identity_fixed_point());

        const double scale = std::max(1.0, std::sqrt(2000.0 / double(o.draws)));
        for (const char *name : {"scf-tx", "scf-rx"})
        {
            const ResultTable t = run_experiment(ExperimentSpec{name, {}, o.draws, o.seed, o.threads});
            const int col = t.column("abs_err");
            double worst = 0.0;
            for (const auto &row : t.rows)
                worst = std::max(worst, row[col]);
            r.checks.push_back(make(std::string(name) + " max |theory - Monte-Carlo|", worst, 0.02 * scale,
                                    std::to_string(o.draws) + " draws"));
        }
        {
            ExperimentSpec spec{"det-mi-verify", {{"snr_db_list", "0"}}, o.draws, o.seed, o.threads};
            const ResultTable t = run_experiment(spec);
            r.checks.push_back(make("deterministic MI vs Kronecker Monte-Carlo at 0 dB, relative",
                                    t.rows.at(0)[t.column("rel_err")], 0.02 * scale,
                                    std::to_string(o.draws) + " draws"));
        }
        r.checks.push_back(check_thread_invariance(o.seed));
        return r;
    }
}
