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

#include "scf3d/experiments.hpp"
#include "scf3d/infotheory.hpp"
#include "scf3d/parallel.hpp"
#include "scf3d/rng.hpp"

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
        constexpr int validation_truncation = 15;

        double deg(double d) { return d * pi / 180.0; }

        std::string num(double v)
        {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.10g", v);
            return buf;
        }

        const char *validation = "validation-setup";
        const char *mi_setup = "mi-setup";
        const char *multiuser_setup = "multiuser-setup";
        const char *convention = "convention";
        const char *assumption = "assumption";

        SideDefaults validation_tx()
        {
            SideDefaults d;
            d.kappa = 5.0;
            d.mu_deg = 120.0;
            d.sigma_deg = 7.0;
            d.theta0_deg = 90.0;
            d.v_pattern = "sector";
            d.tilt_deg = 95.0;
            d.theta3db_deg = 15.0;
            d.phi3db_deg = 70.0;
            d.spacing = 0.2;
            d.ports = 10;
            return d;
        }

        SideDefaults validation_rx()
        {
            SideDefaults d;
            d.kappa = 5.0;
            d.mu_deg = 120.0;
            d.sigma_deg = 10.0;
            d.theta0_deg = 90.0;
            d.spacing = 0.2;
            d.ports = 10;
            return d;
        }

        SideDefaults mi_tx()
        {
            SideDefaults d;
            d.kappa = 5.0;
            d.mu_deg = 0.0;
            d.sigma_deg = 3.0;
            d.theta0_deg = 90.0;
            d.v_pattern = "sector";
            d.tilt_deg = 95.0;
            d.theta3db_deg = 15.0;
            d.phi3db_deg = 70.0;
            d.spacing = 0.5;
            d.ports = 20;
            return d;
        }

        SideDefaults mi_rx()
        {
            SideDefaults d;
            d.kappa = 5.0;
            d.mu_deg = 0.0;
            d.sigma_deg = 10.0;
            d.theta0_deg = 90.0;
            d.spacing = 0.5;
            d.ports = 20;
            return d;
        }

        void header(ResultTable &t, const ExperimentSpec &spec, const Params &p)
        {
            t.name = spec.name;
            t.metadata.push_back("# experiment = " + spec.name);
            t.metadata.push_back("# seed = " + std::to_string(spec.seed));
            t.metadata.push_back("# draws = " + std::to_string(spec.draws));
            for (const auto &line : p.metadata())
                t.metadata.push_back(line);
        }

        void add_check(ResultTable &t, std::string name, double measured, double threshold, bool passed,
                       std::string detail = "")
        {
            t.checks.push_back({std::move(name), measured, threshold, passed, std::move(detail)});
        }

        // Tolerances are stated for 2000 draws and widen as 1 / sqrt(draws) below that.
        double draw_scale(int draws) { return std::max(1.0, std::sqrt(2000.0 / double(draws))); }

        int resolve_truncation(long requested, double spacing, int ports, double gain)
        {
            if (requested > 0)
                return int(requested);
            return std::max(validation_truncation, select_truncation(spacing, std::max(0, ports - 1), gain));
        }

        double gain_of(const Params &p, const std::string &prefix)
        {
            return std::pow(10.0, p.real(prefix + "gain_dbi") / 10.0);
        }

        int ports_of(const Params &p, const std::string &prefix)
        {
            const long n = p.integer(prefix + "ports");
            if (n < 1 || n > 4096)
                throw ConfigError(prefix + "ports must lie in 1..4096");
            return int(n);
        }

        int positive_int(const Params &p, const std::string &key)
        {
            const long n = p.integer(key);
            if (n < 1)
                throw ConfigError(key + " must be positive");
            return int(n);
        }

        constexpr const char *nats_line = "# information_units = nats";

        void information(ResultTable &t, std::vector<std::string> cols)
        {
            t.information_columns = std::move(cols);
            t.metadata.push_back(nats_line);
        }

        // Sample correlation between ports at lag l on one side, averaged over all port pairs
        // at that lag and over the ports of the other side.
        struct McCorrelation
        {
            std::vector<std::complex<double>> mean;
            std::vector<double> std_error;
        };

        McCorrelation mc_correlation(const ParametricConfig &cfg, bool transmit, double norm, std::uint64_t seed,
                                     int draws, unsigned threads)
        {
            const int lags = transmit ? cfg.transmit.port_count : cfg.receive.port_count;
            std::vector<std::vector<std::complex<double>>> per_draw(draws);
            parallel_for(std::size_t(draws), threads, [&](std::size_t i) {
                const ChannelRealization r = draw_parametric(cfg, seed, i);
                const Eigen::MatrixXcd h = transmit ? Eigen::MatrixXcd(r.h) : Eigen::MatrixXcd(r.h.transpose());
                std::vector<std::complex<double>> est(lags);
                for (int l = 0; l < lags; ++l)
                {
                    std::complex<double> s = 0.0;
                    for (int c = 0; c + l < h.cols(); ++c)
                        s += h.col(c + l).dot(h.col(c)) ; // sum_u conj(h(u,c+l)) h(u,c)
                    est[l] = std::conj(s) / (double(h.rows()) * double(h.cols() - l) * norm);
                }
                per_draw[i] = std::move(est);
            });
            McCorrelation out;
            out.mean.assign(lags, 0.0);
            out.std_error.assign(lags, 0.0);
            for (const auto &e : per_draw)
                for (int l = 0; l < lags; ++l)
                    out.mean[l] += e[l];
            for (auto &m : out.mean)
                m /= double(draws);
            for (const auto &e : per_draw)
                for (int l = 0; l < lags; ++l)
                    out.std_error[l] += std::norm(e[l] - out.mean[l]);
            for (auto &s : out.std_error)
                s = draws > 1 ? std::sqrt(s / double(draws - 1) / double(draws)) : 0.0;
            return out;
        }

        // ------------------------------------------------------------ correlation experiments

        Params scf_validation_defaults(const std::string &name)
        {
            Params p;
            const bool tx_side = name != "scf-rx";
            SideDefaults tx = validation_tx(), rx = validation_rx();
            if (name == "scf-uniform")
            {
                tx.az_density = "uniform";
                tx.h_pattern = "sector";
            }
            // The side under test has 10 ports at 0.2 lambda; the other side only averages.
            (tx_side ? rx : tx).ports = 32;
            (tx_side ? rx : tx).spacing = 0.5;
            add_side_params(p, "tx_", tx, validation);
            add_side_params(p, "rx_", rx, validation);
            p.add("paths", "50", assumption, "paths per draw; not stated for the correlation figures");
            p.add("truncation", std::to_string(validation_truncation), validation);
            p.add("tolerance", "0.02", validation, "max |theory - Monte-Carlo|");
            return p;
        }

        ResultTable run_scf_mc(const ExperimentSpec &spec, const Params &p)
        {
            ResultTable t;
            header(t, spec, p);
            const bool tx_side = spec.name != "scf-rx";
            const std::string side = tx_side ? "tx_" : "rx_", other = tx_side ? "rx_" : "tx_";
            const ScfConfig cfg = side_scf_config(p, side, int(p.integer("truncation")));
            const ScfSeries series(cfg);
            const ScfSeries other_series(side_scf_config(p, other, validation_truncation));
            const double norm = other_series(0).real();
            if (auto w = truncation_warning(cfg))
                t.metadata.push_back("# warning: " + *w);

            ParametricConfig pc{positive_int(p, "paths"), side_link_end(p, "tx_"), side_link_end(p, "rx_"), false};
            const McCorrelation mc = mc_correlation(pc, tx_side, norm, spec.seed, spec.draws, spec.threads);
            t.metadata.push_back("# convention: Monte-Carlo estimate averages H(u,s+l) conj H(u,s) over port pairs "
                                 "and divides by the other side's rho(0)");
            t.columns = {"lag", "d_over_lambda", "re_theory", "im_theory", "re_mc", "im_mc", "abs_err", "mc_std_error"};
            double worst = 0.0, worst_im = 0.0;
            for (int l = 0; l < cfg.port_count; ++l)
            {
                const auto th = series(l);
                const double err = std::abs(th - mc.mean[l]);
                worst = std::max(worst, err);
                worst_im = std::max(worst_im, std::abs(th.imag()));
                t.rows.push_back({double(l), l * cfg.spacing_over_lambda, th.real(), th.imag(), mc.mean[l].real(),
                                  mc.mean[l].imag(), err, mc.std_error[l]});
            }
            const double tol = p.real("tolerance") * draw_scale(spec.draws);
            add_check(t, "max |theory - mc|", worst, tol, worst <= tol);
            if (spec.name == "scf-uniform")
                add_check(t, "max |Im rho| (symmetric spectra)", worst_im, 1e-10, worst_im <= 1e-10);
            return t;
        }

        Params scf_2d3d_defaults()
        {
            Params p;
            SideDefaults tx = validation_tx();
            tx.spacing = 0.5;
            tx.ports = 7;
            add_side_params(p, "", tx, validation);
            p.add("truncation", "0", convention, "0 selects the order from the array aperture");
            return p;
        }

        ResultTable run_scf_2d3d(const ExperimentSpec &spec, const Params &p)
        {
            ResultTable t;
            header(t, spec, p);
            const ScfConfig cfg = side_scf_config(p, "", int(p.integer("truncation")));
            const ScfSeries s3(cfg);
            const Scf2dSeries s2(cfg.azimuth, cfg.spacing_over_lambda, cfg.truncation, cfg.gain_scale);
            t.metadata.push_back("# truncation_used = " + std::to_string(cfg.truncation));
            t.columns = {"lag", "d_over_lambda", "re_3d", "im_3d", "abs_3d", "re_2d", "im_2d", "abs_2d"};
            double margin = 1e300;
            for (int l = 0; l < cfg.port_count; ++l)
            {
                const auto a = s3(l), b = s2(l);
                t.rows.push_back({double(l), l * cfg.spacing_over_lambda, a.real(), a.imag(), std::abs(a), b.real(),
                                  b.imag(), std::abs(b)});
                if (l > 0)
                    margin = std::min(margin, std::abs(b) - std::abs(a));
            }
            if (cfg.port_count > 1)
                add_check(t, "min over lags >= 1 of |rho_2d| - |rho_3d|", margin, 0.0, margin > 0.0);
            return t;
        }

        // ------------------------------------------------------------ mutual information experiments

        void add_mi_sides(Params &p, const SideDefaults &tx, const SideDefaults &rx)
        {
            add_side_params(p, "tx_", tx, mi_setup);
            add_side_params(p, "rx_", rx, mi_setup);
            p.add("truncation", "0", convention, "0 selects the order from the array aperture");
        }

        CorrelationMatrix side_matrix(const Params &p, const std::string &prefix, bool planar = false)
        {
            const ScfConfig cfg = side_scf_config(p, prefix, int(p.integer("truncation")));
            if (planar)
                return correlation_matrix_2d(cfg.azimuth, cfg.spacing_over_lambda, cfg.port_count, cfg.truncation,
                                             cfg.gain_scale);
            return correlation_matrix(cfg);
        }

        struct MeanSe
        {
            double mean = 0.0, se = 0.0;
        };

        MeanSe mean_se(const std::vector<double> &v)
        {
            MeanSe r;
            for (double x : v)
                r.mean += x;
            r.mean /= double(v.size());
            double ss = 0.0;
            for (double x : v)
                ss += (x - r.mean) * (x - r.mean);
            r.se = v.size() > 1 ? std::sqrt(ss / double(v.size() - 1) / double(v.size())) : 0.0;
            return r;
        }

        Params pinhole_defaults()
        {
            Params p;
            add_mi_sides(p, mi_tx(), mi_rx());
            p.add("snr_db", "0", mi_setup);
            p.add("paths_list", "5,10,20,40", mi_setup);
            p.add("separation_se", "3", validation, "required gap between N = first and N = last in standard errors");
            return p;
        }

        ResultTable run_pinhole(const ExperimentSpec &spec, const Params &p)
        {
            ResultTable t;
            header(t, spec, p);
            const double s2 = std::pow(10.0, -p.real("snr_db") / 10.0);
            const KroneckerGenerator kron(side_matrix(p, "rx_"), side_matrix(p, "tx_"));
            std::vector<double> mk(spec.draws);
            parallel_for(std::size_t(spec.draws), spec.threads,
                         [&](std::size_t i) { mk[i] = mutual_information(kron(spec.seed, i), s2); });
            const MeanSe k = mean_se(mk);
            t.columns = {"paths", "mi_parametric", "se_parametric", "mi_kronecker", "se_kronecker"};
            information(t, {"mi_parametric", "se_parametric", "mi_kronecker", "se_kronecker"});
            std::vector<MeanSe> par;
            for (long n : p.integers("paths_list"))
            {
                if (n < 1)
                    throw ConfigError("paths_list entries must be positive");
                ParametricConfig pc{int(n), side_link_end(p, "tx_"), side_link_end(p, "rx_"), false};
                std::vector<double> mp(spec.draws);
                parallel_for(std::size_t(spec.draws), spec.threads,
                             [&](std::size_t i) { mp[i] = mutual_information(draw_parametric(pc, spec.seed, i), s2); });
                par.push_back(mean_se(mp));
                t.rows.push_back({double(n), par.back().mean, par.back().se, k.mean, k.se});
            }
            bool increasing = true;
            for (std::size_t i = 1; i < par.size(); ++i)
                increasing = increasing && par[i].mean > par[i - 1].mean;
            const double gap = (par.back().mean - par.front().mean) /
                               std::sqrt(par.back().se * par.back().se + par.front().se * par.front().se);
            add_check(t, "parametric MI gap first->last paths (standard errors)", gap, p.real("separation_se"),
                      gap >= p.real("separation_se"));
            add_check(t, "parametric MI strictly increasing in paths", increasing ? 1.0 : 0.0, 1.0, increasing);
            return t;
        }

        Params det_mi_defaults()
        {
            Params p;
            add_mi_sides(p, mi_tx(), mi_rx());
            p.add("snr_db_list", "-10,-5,0,5,10,15,20", mi_setup);
            p.add("generator", "kronecker", convention, "kronecker | parametric");
            p.add("paths", "40", mi_setup, "parametric generator only");
            p.add("tolerance", "0.02", validation, "relative |V - mean MI / N_BS| at 0 dB");
            return p;
        }

        ResultTable run_det_mi(const ExperimentSpec &spec, const Params &p)
        {
            ResultTable t;
            header(t, spec, p);
            const CorrelationMatrix r_bs = side_matrix(p, "tx_"), r_ms = side_matrix(p, "rx_");
            const std::vector<double> snrs = p.reals("snr_db_list");
            const std::string gen = p.str("generator");
            if (gen != "kronecker" && gen != "parametric")
                throw ConfigError("generator must be kronecker or parametric");
            const KroneckerGenerator kron(r_ms, r_bs);
            const ParametricConfig pc{positive_int(p, "paths"), side_link_end(p, "tx_"), side_link_end(p, "rx_"), false};
            const double nbs = double(r_bs.order());
            std::vector<std::vector<double>> mi(snrs.size(), std::vector<double>(spec.draws));
            parallel_for(std::size_t(spec.draws), spec.threads, [&](std::size_t i) {
                const ChannelRealization h = gen == "kronecker" ? kron(spec.seed, i) : draw_parametric(pc, spec.seed, i);
                for (std::size_t j = 0; j < snrs.size(); ++j)
                    mi[j][i] = mutual_information(h, std::pow(10.0, -snrs[j] / 10.0)) / nbs;
            });
            t.columns = {"snr_db", "v_deterministic", "mi_mc_per_nbs", "mc_std_error", "rel_err", "kappa", "kappa_bar",
                         "iterations"};
            information(t, {"v_deterministic", "mi_mc_per_nbs", "mc_std_error"});
            const double tol = p.real("tolerance") * draw_scale(spec.draws);
            for (std::size_t j = 0; j < snrs.size(); ++j)
            {
                const FixedPointSolution de = deterministic_mi(r_bs, r_ms, std::pow(10.0, -snrs[j] / 10.0));
                const MeanSe m = mean_se(mi[j]);
                const double rel = std::abs(de.v - m.mean) / std::abs(m.mean);
                t.rows.push_back({snrs[j], de.v, m.mean, m.se, rel, de.kappa, de.kappa_bar, double(de.iterations)});
                if (snrs[j] == 0.0)
                    add_check(t, "relative |V - mean MI| at 0 dB", rel, tol, rel <= tol);
            }
            return t;
        }

        Params mi_kappa_defaults()
        {
            Params p;
            add_mi_sides(p, mi_tx(), mi_rx());
            p.add("snr_db", "0", mi_setup);
            p.add("kappa_list", "3,5,7,10,20", assumption, "applied to both link ends; V peaks near kappa = 2.5 at this geometry");
            p.add("antennas_list", "10,20,40", mi_setup, "N_BS = N_MS");
            return p;
        }

        ResultTable run_mi_kappa(const ExperimentSpec &spec, const Params &base)
        {
            ResultTable t;
            header(t, spec, base);
            const double s2 = std::pow(10.0, -base.real("snr_db") / 10.0);
            t.columns = {"antennas", "kappa", "v_deterministic", "abs_rho_t1"};
            information(t, {"v_deterministic"});
            bool all = true;
            for (long n : base.integers("antennas_list"))
            {
                double prev = 1e300;
                for (double kappa : base.reals("kappa_list"))
                {
                    Params p = base;
                    p.override_one("tx_kappa", num(kappa), "sweep");
                    p.override_one("rx_kappa", num(kappa), "sweep");
                    p.override_one("tx_ports", std::to_string(n), "sweep");
                    p.override_one("rx_ports", std::to_string(n), "sweep");
                    const CorrelationMatrix r_bs = side_matrix(p, "tx_"), r_ms = side_matrix(p, "rx_");
                    const double v = deterministic_mi(r_bs, r_ms, s2).v;
                    t.rows.push_back({double(n), kappa, v, n > 1 ? std::abs(r_bs.first_row()[1]) : 0.0});
                    all = all && v < prev;
                    prev = v;
                }
            }
            add_check(t, "V strictly decreasing in kappa for every array size", all ? 1.0 : 0.0, 1.0, all);
            return t;
        }

        Params mi_sigma_defaults(bool bad_user)
        {
            Params p;
            add_mi_sides(p, mi_tx(), mi_rx());
            if (bad_user)
                p.redefine("tx_theta0_deg", "130", mi_setup, "user far from the boresight elevation");
            p.add("snr_db", "0", mi_setup);
            p.add("sigma_list", "3,5,7,10,15,20", mi_setup, "transmit elevation spread, deg");
            p.add("check_lags", bad_user ? "1" : "1,2,3,4", convention, "lags at which correlation is tracked");
            return p;
        }

        ResultTable run_mi_sigma(const ExperimentSpec &spec, const Params &base, bool bad_user)
        {
            ResultTable t;
            header(t, spec, base);
            const double s2 = std::pow(10.0, -base.real("snr_db") / 10.0);
            const std::vector<long> lags = base.integers("check_lags");
            t.columns = {"sigma_deg", "rho_t0"};
            for (long l : lags)
                t.columns.push_back("abs_rho_t" + std::to_string(l));
            t.columns.push_back("v_deterministic");
            information(t, {"v_deterministic"});
            std::vector<std::vector<double>> track(lags.size());
            for (double sigma : base.reals("sigma_list"))
            {
                Params p = base;
                p.override_one("tx_sigma_deg", num(sigma), "sweep");
                const CorrelationMatrix r_bs = side_matrix(p, "tx_"), r_ms = side_matrix(p, "rx_");
                std::vector<double> row{sigma, r_bs.first_row()[0].real()};
                for (std::size_t i = 0; i < lags.size(); ++i)
                {
                    if (lags[i] < 1 || lags[i] >= r_bs.order())
                        throw ConfigError("check_lags entries must lie in 1..tx_ports-1");
                    const double a = std::abs(r_bs.first_row()[lags[i]]);
                    row.push_back(a);
                    track[i].push_back(a);
                }
                row.push_back(deterministic_mi(r_bs, r_ms, s2).v);
                t.rows.push_back(row);
            }
            if (!bad_user)
                for (std::size_t i = 0; i < lags.size(); ++i)
                {
                    bool dec = true;
                    for (std::size_t j = 1; j < track[i].size(); ++j)
                        dec = dec && track[i][j] < track[i][j - 1];
                    add_check(t, "|rho_t(" + std::to_string(lags[i]) + ")| strictly decreasing in sigma",
                              dec ? 1.0 : 0.0, 1.0, dec);
                }
            else
            {
                const int v = t.column("v_deterministic");
                bool inc = true;
                for (std::size_t j = 1; j < t.rows.size(); ++j)
                    inc = inc && t.rows[j][v] > t.rows[j - 1][v];
                add_check(t, "V strictly increasing in sigma", inc ? 1.0 : 0.0, 1.0, inc);
            }
            return t;
        }

        Params mi_2d3d_defaults()
        {
            Params p;
            add_mi_sides(p, mi_tx(), mi_rx());
            p.add("snr_db_list", "-10,-5,0,5,10,15,20", mi_setup);
            return p;
        }

        ResultTable run_mi_2d3d(const ExperimentSpec &spec, const Params &p)
        {
            ResultTable t;
            header(t, spec, p);
            const CorrelationMatrix b3 = side_matrix(p, "tx_"), m3 = side_matrix(p, "rx_");
            const CorrelationMatrix b2 = side_matrix(p, "tx_", true), m2 = side_matrix(p, "rx_", true);
            t.columns = {"snr_db", "v_3d", "v_2d"};
            information(t, {"v_3d", "v_2d"});
            bool below = true;
            for (double snr : p.reals("snr_db_list"))
            {
                const double s2 = std::pow(10.0, -snr / 10.0);
                const double v3 = deterministic_mi(b3, m3, s2).v, v2 = deterministic_mi(b2, m2, s2).v;
                t.rows.push_back({snr, v3, v2});
                below = below && v3 < v2;
            }
            add_check(t, "3D deterministic MI below 2D at every SNR", below ? 1.0 : 0.0, 1.0, below);
            return t;
        }

        // ------------------------------------------------------------ multi-user downtilt sweep

        Params multiuser_defaults()
        {
            Params p;
            p.add("users", "40", multiuser_setup);
            p.add("bs_ports", "60", multiuser_setup);
            p.add("spacing", "0.5", assumption, "d / lambda at the base station");
            p.add("tilt_list", "92,93,94,95,96,97,98,99,100,101,102", multiuser_setup, "deg");
            p.add("theta3db_deg", "15", mi_setup);
            p.add("phi3db_deg", "70", mi_setup);
            p.add("h_pattern", "omni", mi_setup);
            p.add("kappa", "5", assumption, "von Mises concentration about each user's azimuth");
            p.add("sigma_deg", "3", mi_setup, "elevation spread about each user's line of sight");
            p.add("height_difference_m", "23.5", assumption, "gives line-of-sight elevations 95.37..103.2 deg");
            p.add("radius_min_m", "100", multiuser_setup);
            p.add("radius_max_m", "250", multiuser_setup);
            p.add("sector_deg", "120", assumption, "users uniform in area within this sector");
            p.add("drops", "25", convention, "user placements; draws are split evenly across drops");
            p.add("tx_power_w", "40", assumption);
            p.add("antenna_gain_dbi", "17", multiuser_setup);
            p.add("shadow_fading_db", "6", multiuser_setup);
            p.add("noise_w", "1.13e-13", multiuser_setup);
            p.add("zeta", "0", convention, "0 selects 1 / (K mean rho)");
            p.add("power", "1", convention, "normalized; transmit power enters through rho");
            p.add("truncation", "0", convention, "0 selects the order from the array aperture");
            p.add("argmax_lo_deg", "95", validation);
            p.add("argmax_hi_deg", "98", validation);
            return p;
        }

        struct UserDrop
        {
            std::vector<double> distance, azimuth, theta_los, large_scale;
        };

        ResultTable run_multiuser(const ExperimentSpec &spec, const Params &p)
        {
            ResultTable t;
            header(t, spec, p);
            const int k_users = positive_int(p, "users"), n_bs = positive_int(p, "bs_ports");
            if (n_bs < k_users)
                throw ConfigError("bs_ports must be at least users");
            const int drops = std::min(positive_int(p, "drops"), spec.draws);
            const double spacing = p.real("spacing");
            const double rmin = p.real("radius_min_m"), rmax = p.real("radius_max_m");
            if (!(rmin > 0.0 && rmax >= rmin))
                throw ConfigError("need 0 < radius_min_m <= radius_max_m");
            const double sector = deg(p.real("sector_deg")), dh = p.real("height_difference_m");
            LinkBudget budget{p.real("tx_power_w"), p.real("antenna_gain_dbi"), p.real("shadow_fading_db"),
                              p.real("noise_w")};
            const int n0 = resolve_truncation(p.integer("truncation"), spacing, n_bs, 1.0);
            const AntennaPattern hp = p.str("h_pattern") == "sector" ? AntennaPattern::horizontal(deg(p.real("phi3db_deg")))
                                                                     : AntennaPattern::unit();
            if (p.str("h_pattern") != "sector" && p.str("h_pattern") != "omni")
                throw ConfigError("h_pattern must be omni or sector");
            t.metadata.push_back("# truncation_used = " + std::to_string(n0));

            // User placements, one stream per drop in a range disjoint from the draw streams.
            std::vector<UserDrop> placements(drops);
            double los_lo = 1e9, los_hi = -1e9;
            for (int d = 0; d < drops; ++d)
            {
                RandomStream rng(spec.seed, (std::uint64_t(1) << 63) | std::uint64_t(d));
                UserDrop &u = placements[d];
                for (int k = 0; k < k_users; ++k)
                {
                    const double r = std::sqrt(rmin * rmin + rng.uniform() * (rmax * rmax - rmin * rmin));
                    const double az = sector * (rng.uniform() - 0.5);
                    u.distance.push_back(r);
                    u.azimuth.push_back(az);
                    u.theta_los.push_back(elevation_los(dh, r));
                    u.large_scale.push_back(large_scale_factor(std::hypot(r, dh), budget));
                    los_lo = std::min(los_lo, u.theta_los.back());
                    los_hi = std::max(los_hi, u.theta_los.back());
                }
            }
            t.metadata.push_back("# theta_los_range_deg = " + num(los_lo * 180.0 / pi) + " .. " +
                                 num(los_hi * 180.0 / pi));

            // Azimuth coefficients do not depend on the tilt.
            std::vector<std::vector<FsCoefficients>> az(drops, std::vector<FsCoefficients>(k_users));
            parallel_for(std::size_t(drops) * k_users, spec.threads, [&](std::size_t i) {
                const int d = int(i / k_users), k = int(i % k_users);
                az[d][k] = fs_coefficients(
                    AngularSpectrum(AngularDensity::von_mises(placements[d].azimuth[k], p.real("kappa")), hp),
                    2 * n0 + 1);
            });

            t.columns = {"tilt_deg", "mean_rate_per_user", "std_error"};
            information(t, {"mean_rate_per_user", "std_error"});
            double best = -1e300, best_tilt = 0.0;
            for (double tilt : p.reals("tilt_list"))
            {
                std::vector<double> rates;
                rates.reserve(spec.draws);
                for (int d = 0; d < drops; ++d)
                {
                    const std::uint64_t first = std::uint64_t(d) * std::uint64_t(spec.draws) / std::uint64_t(drops);
                    const std::uint64_t last = std::uint64_t(d + 1) * std::uint64_t(spec.draws) / std::uint64_t(drops);
                    MultiUserConfig mu;
                    mu.users = k_users;
                    mu.bs_ports = n_bs;
                    mu.large_scale = placements[d].large_scale;
                    mu.theta_los = placements[d].theta_los;
                    mu.zeta = p.real("zeta");
                    mu.power = p.real("power");
                    mu.correlation_sqrt.resize(k_users);
                    parallel_for(std::size_t(k_users), spec.threads, [&](std::size_t k) {
                        const AngularSpectrum el(
                            AngularDensity::laplacian_elevation(placements[d].theta_los[k], deg(p.real("sigma_deg"))),
                            AntennaPattern::vertical(deg(tilt), deg(p.real("theta3db_deg"))));
                        const ScfSeries series(az[d][k], fs_coefficients(el, 2 * n0 + 1), spacing, n0, 1.0);
                        std::vector<std::complex<double>> row(n_bs);
                        for (int l = 0; l < n_bs; ++l)
                            row[l] = series(l);
                        mu.correlation_sqrt[k] = CorrelationMatrix(std::move(row)).sqrt();
                    });
                    const MultiUserResult r = simulate_multiuser(mu, spec.seed, int(last - first), spec.threads, first);
                    rates.insert(rates.end(), r.per_draw.begin(), r.per_draw.end());
                }
                const MeanSe m = mean_se(rates);
                t.rows.push_back({tilt, m.mean, m.se});
                if (m.mean > best)
                {
                    best = m.mean;
                    best_tilt = tilt;
                }
            }
            const double lo = p.real("argmax_lo_deg"), hi = p.real("argmax_hi_deg");
            add_check(t, "argmax tilt (deg) within window", best_tilt, hi, best_tilt >= lo && best_tilt <= hi,
                      "window " + num(lo) + ".." + num(hi));
            return t;
        }
    }

    // ---------------------------------------------------------------- side parameters

    void add_side_params(Params &p, const std::string &x, const SideDefaults &d, const std::string &tag)
    {
        p.add(x + "az_density", d.az_density, tag);
        p.add(x + "kappa", num(d.kappa), tag);
        p.add(x + "mu_deg", num(d.mu_deg), tag);
        p.add(x + "az_lo_deg", num(d.az_lo_deg), tag);
        p.add(x + "az_hi_deg", num(d.az_hi_deg), tag);
        p.add(x + "az_table", "", tag);
        p.add(x + "el_density", d.el_density, tag);
        p.add(x + "theta0_deg", num(d.theta0_deg), tag);
        p.add(x + "sigma_deg", num(d.sigma_deg), tag);
        p.add(x + "el_lo_deg", num(d.el_lo_deg), tag);
        p.add(x + "el_hi_deg", num(d.el_hi_deg), tag);
        p.add(x + "el_table", "", tag);
        p.add(x + "h_pattern", d.h_pattern, tag);
        p.add(x + "phi3db_deg", num(d.phi3db_deg), tag);
        p.add(x + "v_pattern", d.v_pattern, tag);
        p.add(x + "tilt_deg", num(d.tilt_deg), tag);
        p.add(x + "theta3db_deg", num(d.theta3db_deg), tag);
        p.add(x + "pattern_floor", "false", tag);
        p.add(x + "gain_dbi", num(d.gain_dbi), tag);
        p.add(x + "spacing", num(d.spacing), tag, "d / lambda");
        p.add(x + "ports", std::to_string(d.ports), tag);
        p.add(x + "fs_path", "auto", convention, "auto | closed | quadrature");
    }

    namespace
    {
        CoefficientPath path_of(const Params &p, const std::string &x)
        {
            const std::string s = p.str(x + "fs_path");
            if (s == "auto")
                return CoefficientPath::automatic;
            if (s == "closed")
                return CoefficientPath::closed_form;
            if (s == "quadrature")
                return CoefficientPath::quadrature;
            throw ConfigError(x + "fs_path must be auto, closed or quadrature");
        }

        template <class F>
        auto as_config_error(const std::string &what, F &&f)
        {
            try
            {
                return f();
            }
            catch (const ConfigError &)
            {
                throw;
            }
            catch (const std::invalid_argument &e)
            {
                throw ConfigError(what + ": " + e.what());
            }
        }
    }

    AngularSpectrum side_azimuth(const Params &p, const std::string &x)
    {
        return as_config_error(x + "azimuth", [&] {
            const std::string kind = p.str(x + "az_density");
            AngularDensity density = [&] {
                if (kind == "von_mises")
                    return AngularDensity::von_mises(deg(p.real(x + "mu_deg")), p.real(x + "kappa"));
                if (kind == "uniform")
                    return AngularDensity::uniform(Axis::azimuth, deg(p.real(x + "az_lo_deg")),
                                                   deg(p.real(x + "az_hi_deg")));
                if (kind == "tabulated")
                {
                    AngularDensity d = AngularDensity::load_tabulated(p.str(x + "az_table"));
                    if (d.axis() != Axis::azimuth)
                        throw ConfigError(x + "az_table is not an azimuth table");
                    return d;
                }
                throw ConfigError(x + "az_density must be von_mises, uniform or tabulated");
            }();
            const std::string hp = p.str(x + "h_pattern");
            AntennaPattern pattern;
            if (hp == "sector")
                pattern = AntennaPattern::horizontal(deg(p.real(x + "phi3db_deg")), p.flag(x + "pattern_floor"));
            else if (hp != "omni")
                throw ConfigError(x + "h_pattern must be omni or sector");
            return AngularSpectrum(density, pattern, path_of(p, x));
        });
    }

    AngularSpectrum side_elevation(const Params &p, const std::string &x)
    {
        return as_config_error(x + "elevation", [&] {
            const std::string kind = p.str(x + "el_density");
            AngularDensity density = [&] {
                if (kind == "laplacian")
                    return AngularDensity::laplacian_elevation(deg(p.real(x + "theta0_deg")),
                                                               deg(p.real(x + "sigma_deg")));
                if (kind == "uniform")
                    return AngularDensity::uniform(Axis::elevation, deg(p.real(x + "el_lo_deg")),
                                                   deg(p.real(x + "el_hi_deg")));
                if (kind == "tabulated")
                {
                    AngularDensity d = AngularDensity::load_tabulated(p.str(x + "el_table"));
                    if (d.axis() != Axis::elevation)
                        throw ConfigError(x + "el_table is not an elevation table");
                    return d;
                }
                throw ConfigError(x + "el_density must be laplacian, uniform or tabulated");
            }();
            const std::string vp = p.str(x + "v_pattern");
            AntennaPattern pattern;
            if (vp == "sector")
                pattern = AntennaPattern::vertical(deg(p.real(x + "tilt_deg")), deg(p.real(x + "theta3db_deg")),
                                                   p.flag(x + "pattern_floor"));
            else if (vp != "omni")
                throw ConfigError(x + "v_pattern must be omni or sector");
            return AngularSpectrum(density, pattern, path_of(p, x));
        });
    }

    LinkEnd side_link_end(const Params &p, const std::string &x)
    {
        const AngularSpectrum az = side_azimuth(p, x), el = side_elevation(p, x);
        const double spacing = p.real(x + "spacing");
        if (!(spacing > 0.0))
            throw ConfigError(x + "spacing must be positive");
        return LinkEnd{az.density(), el.density(), az.pattern(), el.pattern(), spacing, ports_of(p, x),
                       gain_of(p, x)};
    }

    ScfConfig side_scf_config(const Params &p, const std::string &x, int truncation)
    {
        const double spacing = p.real(x + "spacing");
        if (!(spacing > 0.0))
            throw ConfigError(x + "spacing must be positive");
        const int ports = ports_of(p, x);
        const double gain = gain_of(p, x);
        return ScfConfig{spacing, ports, resolve_truncation(truncation, spacing, ports, gain), side_azimuth(p, x),
                         side_elevation(p, x), gain};
    }

    // ---------------------------------------------------------------- tables

    bool ResultTable::passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.passed; });
    }

    void ResultTable::convert_to_bits()
    {
        const auto units = std::find(metadata.begin(), metadata.end(), nats_line);
        if (units == metadata.end())
            return;
        *units = "# information_units = bits";
        for (const auto &c : information_columns)
        {
            const int j = column(c);
            for (auto &row : rows)
                row[j] /= std::numbers::ln2;
        }
    }

    int ResultTable::column(const std::string &n) const
    {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == n)
                return int(i);
        throw std::out_of_range("no column " + n);
    }

    void ResultTable::write_csv(std::ostream &out) const
    {
        for (const auto &m : metadata)
            out << m << '\n';
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << (i ? "," : "") << columns[i];
        out << '\n';
        char buf[40];
        for (const auto &row : rows)
        {
            for (std::size_t i = 0; i < row.size(); ++i)
            {
                std::snprintf(buf, sizeof buf, "%s%.12g", i ? "," : "", row[i]);
                out << buf;
            }
            out << '\n';
        }
        for (const auto &c : checks)
        {
            std::snprintf(buf, sizeof buf, "%.6g", c.measured);
            out << "# check " << (c.passed ? "pass" : "FAIL") << ": " << c.name << " = " << buf;
            std::snprintf(buf, sizeof buf, "%.6g", c.threshold);
            out << " (threshold " << buf << (c.detail.empty() ? "" : ", " + c.detail) << ")\n";
        }
    }

    std::string ResultTable::to_csv() const
    {
        std::ostringstream s;
        write_csv(s);
        return s.str();
    }

    // ---------------------------------------------------------------- registry

    std::vector<std::string> experiment_names()
    {
        return {"scf-tx",      "scf-rx",       "scf-2d-vs-3d",         "scf-uniform", "pinhole", "det-mi-verify",
                "mi-vs-kappa", "mi-vs-sigma",  "mi-vs-sigma-bad-user", "mi-2d-vs-3d", "multiuser-tilt-sweep"};
    }

    Params experiment_defaults(const std::string &name)
    {
        if (name == "scf-tx" || name == "scf-rx" || name == "scf-uniform")
            return scf_validation_defaults(name);
        if (name == "scf-2d-vs-3d")
            return scf_2d3d_defaults();
        if (name == "pinhole")
            return pinhole_defaults();
        if (name == "det-mi-verify")
            return det_mi_defaults();
        if (name == "mi-vs-kappa")
            return mi_kappa_defaults();
        if (name == "mi-vs-sigma")
            return mi_sigma_defaults(false);
        if (name == "mi-vs-sigma-bad-user")
            return mi_sigma_defaults(true);
        if (name == "mi-2d-vs-3d")
            return mi_2d3d_defaults();
        if (name == "multiuser-tilt-sweep")
            return multiuser_defaults();
        throw ConfigError("unknown experiment '" + name + "'");
    }

    ResultTable run_experiment(const ExperimentSpec &spec)
    {
        Params p = experiment_defaults(spec.name);
        p.override_with(spec.overrides, "[" + spec.name + "]");
        if (spec.draws < 1)
            throw ConfigError("draws must be positive");
        const std::string &n = spec.name;
        if (n == "scf-tx" || n == "scf-rx" || n == "scf-uniform")
            return run_scf_mc(spec, p);
        if (n == "scf-2d-vs-3d")
            return run_scf_2d3d(spec, p);
        if (n == "pinhole")
            return run_pinhole(spec, p);
        if (n == "det-mi-verify")
            return run_det_mi(spec, p);
        if (n == "mi-vs-kappa")
            return run_mi_kappa(spec, p);
        if (n == "mi-vs-sigma")
            return run_mi_sigma(spec, p, false);
        if (n == "mi-vs-sigma-bad-user")
            return run_mi_sigma(spec, p, true);
        if (n == "mi-2d-vs-3d")
            return run_mi_2d3d(spec, p);
        return run_multiuser(spec, p);
    }

    // ---------------------------------------------------------------- CLI helpers

    Params scf_defaults()
    {
        Params p;
        SideDefaults d = validation_tx();
        add_side_params(p, "", d, validation);
        p.add("truncation", std::to_string(validation_truncation), validation, "0 selects from the aperture");
        p.add("planar", "false", convention, "elevation fixed at 90 deg");
        return p;
    }

    ResultTable run_scf(const Params &p)
    {
        ResultTable t;
        t.name = "scf";
        t.metadata.push_back("# command = scf");
        for (const auto &line : p.metadata())
            t.metadata.push_back(line);
        const ScfConfig cfg = side_scf_config(p, "", int(p.integer("truncation")));
        // An automatically selected order already meets its own accuracy target.
        if (auto w = truncation_warning(cfg); w && p.integer("truncation") > 0)
            t.metadata.push_back("# warning: " + *w);
        t.metadata.push_back("# truncation_used = " + std::to_string(cfg.truncation));
        const CorrelationMatrix r = p.flag("planar") ? correlation_matrix_2d(cfg.azimuth, cfg.spacing_over_lambda,
                                                                             cfg.port_count, cfg.truncation,
                                                                             cfg.gain_scale)
                                                     : correlation_matrix(cfg);
        if (r.clipped())
            t.metadata.push_back("# note: negative eigenvalues within tolerance were clipped");
        t.columns = {"lag", "d_over_lambda", "re", "im", "abs", "normalized_abs"};
        const double r0 = r.first_row()[0].real();
        for (int l = 0; l < r.order(); ++l)
        {
            const auto v = r.first_row()[l];
            t.rows.push_back({double(l), l * cfg.spacing_over_lambda, v.real(), v.imag(), std::abs(v), std::abs(v) / r0});
        }
        return t;
    }

    Params channel_defaults()
    {
        Params p;
        add_side_params(p, "tx_", mi_tx(), mi_setup);
        add_side_params(p, "rx_", mi_rx(), mi_setup);
        p.add("generator", "parametric", convention, "parametric | planar | kronecker");
        p.add("paths", "40", mi_setup);
        p.add("truncation", "0", convention, "kronecker only; 0 selects from the aperture");
        return p;
    }

    std::vector<ChannelRealization> run_channel_gen(const Params &p, std::uint64_t seed, int count, unsigned threads)
    {
        if (count < 1)
            throw ConfigError("count must be positive");
        const std::string gen = p.str("generator");
        std::vector<ChannelRealization> out(count);
        if (gen == "kronecker")
        {
            const long n0 = p.integer("truncation");
            const KroneckerGenerator kron(correlation_matrix(side_scf_config(p, "rx_", int(n0))),
                                          correlation_matrix(side_scf_config(p, "tx_", int(n0))));
            parallel_for(std::size_t(count), threads, [&](std::size_t i) { out[i] = kron(seed, i); });
            return out;
        }
        if (gen != "parametric" && gen != "planar")
            throw ConfigError("generator must be parametric, planar or kronecker");
        const ParametricConfig pc{positive_int(p, "paths"), side_link_end(p, "tx_"), side_link_end(p, "rx_"),
                                  gen == "planar"};
        parallel_for(std::size_t(count), threads, [&](std::size_t i) { out[i] = draw_parametric(pc, seed, i); });
        return out;
    }
}
