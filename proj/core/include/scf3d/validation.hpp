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

#ifndef SCF3D_VALIDATION_HPP
#define SCF3D_VALIDATION_HPP

#include "scf3d/experiments.hpp"
#include "scf3d/scf.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace scf3d
{
    struct ValidationOptions
    {
        std::uint64_t seed = 1;
        int draws = 2000;
        unsigned threads = 1;
    };

    struct ValidationReport
    {
        std::vector<Check> checks;

        bool passed() const;
        // One line per check: status, name, measured value and tolerance.
        void write(std::ostream &out) const;
    };

    // rho(lag) by direct two-dimensional adaptive quadrature of the defining expectation.
    std::complex<double> rho_quadrature(const ScfConfig &config, int lag);

    // Individual checks, also used by the acceptance runner.
    Check check_series_vs_quadrature(std::uint64_t seed, int configurations = 20, int truncation = 15);
    Check check_closed_forms(int max_harmonic = 31);
    std::vector<Check> check_truncation_bound();
    Check check_identity_fixed_point();
    Check check_philox_vectors();
    Check check_planar_uniform();
    Check check_hermitian_symmetry();
    Check check_correlation_psd();
    Check check_thread_invariance(std::uint64_t seed);

    // Runs every check plus the Monte-Carlo protocols (scf-tx, scf-rx, det-mi-verify at 0 dB).
    ValidationReport validate(const ValidationOptions &options = {});
}

#endif
