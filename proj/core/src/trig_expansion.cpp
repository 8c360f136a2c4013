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
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>

namespace scf3d
{
    namespace
    {
        // Half of the 2048-point period grid. The even kinds have period pi and the odd kind is
        // anti-periodic with period pi, so the products with their harmonics repeat on [pi, 2pi).
        constexpr int half_grid = 1024;
        constexpr int max_degree_n = 511;

        using Key = std::tuple<int, int, int>;

        struct Cache
        {
            std::shared_mutex mutex;
            std::map<Key, std::unique_ptr<TrigExpansion>> entries;
        };

        Cache &cache()
        {
            static Cache c;
            return c;
        }

        struct Grid
        {
            std::vector<double> cos_table; // cos(pi q / half_grid), q in [0, 2 half_grid)
            std::vector<double> sin_table;
            Grid() : cos_table(2 * half_grid), sin_table(2 * half_grid)
            {
                for (int q = 0; q < 2 * half_grid; ++q)
                {
                    const double t = std::numbers::pi * double(q) / double(half_grid);
                    cos_table[q] = std::cos(t);
                    sin_table[q] = std::sin(t);
                }
            }
        };

        const Grid &grid()
        {
            static const Grid g;
            return g;
        }

        Key key_of(TrigKind kind, int n, int m)
        {
            return {int(kind), n, kind == TrigKind::even_legendre ? 0 : m};
        }

        void check_orders(TrigKind kind, int n, int m)
        {
            if (n < 0 || m < 0)
                throw std::invalid_argument("trig_expansion: negative degree or order");
            if (n > max_degree_n)
                throw std::domain_error("trig_expansion: degree index above 511");
            switch (kind)
            {
            case TrigKind::even_legendre:
                if (m != 0)
                    throw std::invalid_argument("trig_expansion: even_legendre takes no order");
                break;
            case TrigKind::even_associated:
                if (m > n)
                    throw std::invalid_argument("trig_expansion: even_associated needs m <= n");
                break;
            case TrigKind::odd_associated:
                if (m < 1 || m > n)
                    throw std::invalid_argument("trig_expansion: odd_associated needs 1 <= m <= n");
                break;
            }
        }

        // Projects samples f(t_j), t_j = pi j / half_grid, onto the harmonics of the kind.
        std::vector<double> project(TrigKind kind, int n, const double *f)
        {
            const Grid &g = grid();
            const int period = 2 * half_grid;
            const double w = 2.0 / double(half_grid);
            if (kind == TrigKind::odd_associated)
            {
                std::vector<double> d(n);
                for (int k = 1; k <= n; ++k)
                {
                    const int h = 2 * k - 1;
                    double acc = 0.0;
                    for (int j = 0, q = 0; j < half_grid; ++j)
                    {
                        acc += f[j] * g.sin_table[q];
                        if ((q += h) >= period)
                            q -= period;
                    }
                    d[k - 1] = w * acc;
                }
                return d;
            }
            std::vector<double> c(n + 1);
            for (int k = 0; k <= n; ++k)
            {
                const int h = 2 * k;
                double acc = 0.0;
                for (int j = 0, q = 0; j < half_grid; ++j)
                {
                    acc += f[j] * g.cos_table[q];
                    if ((q += h) >= period)
                        q -= period;
                }
                c[k] = (k == 0 ? 0.5 * w : w) * acc;
            }
            return c;
        }

        void insert(Cache &c, std::vector<std::unique_ptr<TrigExpansion>> &fresh)
        {
            std::unique_lock lock(c.mutex);
            for (auto &e : fresh)
                c.entries.try_emplace(key_of(e->kind, e->n, e->m), std::move(e));
        }

        // Computes every missing expansion of one (kind, m) column up to n_max.
        void fill_column(TrigKind kind, int m, int n_max)
        {
            Cache &c = cache();
            int n_lo = kind == TrigKind::odd_associated ? std::max(m, 1) : m;
            std::vector<int> missing;
            {
                std::shared_lock lock(c.mutex);
                for (int n = n_lo; n <= n_max; ++n)
                    if (!c.entries.count(key_of(kind, n, m)))
                        missing.push_back(n);
            }
            if (missing.empty())
                return;

            // Degree and order of the underlying Legendre function.
            const int order = kind == TrigKind::odd_associated ? 2 * m - 1 : 2 * m;
            const int deg_max = kind == TrigKind::odd_associated ? 2 * n_max - 1 : 2 * n_max;
            const Grid &g = grid();
            const int rows = deg_max - order + 1;
            std::vector<double> table(std::size_t(rows) * half_grid);
            std::vector<double> col(rows);
            for (int j = 0; j < half_grid; ++j)
            {
                assoc_legendre_pbar_column(order, deg_max, g.cos_table[j], g.sin_table[j], col.data());
                for (int r = 0; r < rows; ++r)
                    table[std::size_t(r) * half_grid + j] = col[r];
            }

            std::vector<std::unique_ptr<TrigExpansion>> fresh;
            for (int n : missing)
            {
                const int degree = kind == TrigKind::odd_associated ? 2 * n - 1 : 2 * n;
                std::vector<double> f(table.begin() + std::ptrdiff_t(degree - order) * half_grid,
                                      table.begin() + std::ptrdiff_t(degree - order + 1) * half_grid);
                if (kind == TrigKind::even_legendre)
                {
                    const double unnormalize = 1.0 / std::sqrt(double(degree) + 0.5);
                    for (double &v : f)
                        v *= unnormalize;
                }
                auto e = std::make_unique<TrigExpansion>();
                e->kind = kind;
                e->n = n;
                e->m = kind == TrigKind::even_legendre ? 0 : m;
                e->coefficients = project(kind, n, f.data());
                fresh.push_back(std::move(e));
            }
            insert(c, fresh);
        }
    }

    int TrigExpansion::harmonic(std::size_t i) const
    {
        return kind == TrigKind::odd_associated ? int(2 * i + 1) : int(2 * i);
    }

    double TrigExpansion::operator()(double x) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < coefficients.size(); ++i)
        {
            const double h = double(harmonic(i)) * x;
            sum += coefficients[i] * (kind == TrigKind::odd_associated ? std::sin(h) : std::cos(h));
        }
        return sum;
    }

    const TrigExpansion &trig_expansion(TrigKind kind, int n, int m)
    {
        check_orders(kind, n, m);
        Cache &c = cache();
        const Key key = key_of(kind, n, m);
        {
            std::shared_lock lock(c.mutex);
            auto it = c.entries.find(key);
            if (it != c.entries.end())
                return *it->second;
        }
        fill_column(kind, m, n);
        std::shared_lock lock(c.mutex);
        return *c.entries.at(key);
    }

    void trig_expansion_prefill(int n_max)
    {
        if (n_max < 0)
            throw std::invalid_argument("trig_expansion_prefill: negative degree");
        if (n_max > max_degree_n)
            throw std::domain_error("trig_expansion_prefill: degree index above 511");
        fill_column(TrigKind::even_legendre, 0, n_max);
        for (int m = 0; m <= n_max; ++m)
            fill_column(TrigKind::even_associated, m, n_max);
        for (int m = 1; m <= n_max; ++m)
            fill_column(TrigKind::odd_associated, m, n_max);
    }

    double legendre_trig_p(int n)
    {
        return std::sqrt(trig_expansion(TrigKind::even_legendre, n).coefficients[0]);
    }
}
