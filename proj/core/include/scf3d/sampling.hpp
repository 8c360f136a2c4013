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

#ifndef SCF3D_SAMPLING_HPP
#define SCF3D_SAMPLING_HPP

#include "scf3d/rng.hpp"
#include "scf3d/spectra.hpp"

#include <vector>

namespace scf3d
{
    inline constexpr long max_rejection_attempts = 1000000;

    // Draws angles from an AngularDensity. Construction precomputes branch weights or the
    // cumulative table; sampling is const and thread-safe given distinct streams.
    // Von Mises uses Best-Fisher rejection from a wrapped Cauchy envelope, wrapped to (-pi, pi].
    // The Laplacian elevation density (with its sin factor) is sampled by the two-branch
    // inverse CDF of the truncated Laplacian followed by rejection against sin(theta).
    class AngleSampler
    {
    public:
        explicit AngleSampler(const AngularDensity &density);

        double operator()(RandomStream &rng) const;

    private:
        double von_mises(RandomStream &rng) const;
        double laplacian(RandomStream &rng) const;
        double tabulated(RandomStream &rng) const;

        AngularDensity density_;
        // von Mises
        double vm_r_ = 0.0;
        // Laplacian
        double scale_ = 0.0, left_mass_ = 0.0, right_mass_ = 0.0, left_span_ = 0.0, right_span_ = 0.0;
        // tabulated
        std::vector<double> cdf_;
    };

    double sample_angle(const AngularDensity &density, RandomStream &rng);
}

#endif
