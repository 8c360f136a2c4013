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

#ifndef SCF3D_RNG_HPP
#define SCF3D_RNG_HPP

#include <array>
#include <complex>
#include <cstdint>

namespace scf3d
{
    // Philox4x32-10 block function.
    std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

    // Counter-based stream. The key is the 64-bit seed, the counter is (block lo, block hi,
    // stream lo, stream hi). Distinct stream ids give independent sequences, so a Monte-Carlo
    // draw with index i uses stream i and its result does not depend on which thread ran it.
    class RandomStream
    {
    public:
        RandomStream(std::uint64_t seed, std::uint64_t stream);

        std::uint32_t next_u32();
        std::uint64_t next_u64();
        // Uniform on the open interval (0, 1) with 53-bit resolution.
        double uniform();
        // Standard normal via Box-Muller.
        double normal();
        // Circularly symmetric complex Gaussian with E|z|^2 = 1.
        std::complex<double> complex_normal();

        std::uint64_t seed() const { return seed_; }
        std::uint64_t stream() const { return stream_; }

    private:
        void refill();

        std::uint64_t seed_;
        std::uint64_t stream_;
        std::uint64_t block_ = 0;
        std::array<std::uint32_t, 4> buffer_{};
        int used_ = 4;
        bool have_normal_ = false;
        double cached_normal_ = 0.0;
    };
}

#endif
