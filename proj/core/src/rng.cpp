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

#include "scf3d/rng.hpp"

#include <cmath>
#include <numbers>

namespace scf3d
{
    namespace
    {
        constexpr std::uint32_t philox_m0 = 0xD2511F53u;
        constexpr std::uint32_t philox_m1 = 0xCD9E8D57u;
        constexpr std::uint32_t philox_w0 = 0x9E3779B9u;
        constexpr std::uint32_t philox_w1 = 0xBB67AE85u;

        inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t &hi, std::uint32_t &lo)
        {
            const std::uint64_t p = std::uint64_t(a) * std::uint64_t(b);
            hi = std::uint32_t(p >> 32);
            lo = std::uint32_t(p);
        }
    }

    std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k)
    {
        for (int round = 0; round < 10; ++round)
        {
            if (round > 0)
            {
                k[0] += philox_w0;
                k[1] += philox_w1;
            }
            std::uint32_t hi0, lo0, hi1, lo1;
            mulhilo(philox_m0, c[0], hi0, lo0);
            mulhilo(philox_m1, c[2], hi1, lo1);
            c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        }
        return c;
    }

    RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    void RandomStream::refill()
    {
        buffer_ = philox4x32({std::uint32_t(block_), std::uint32_t(block_ >> 32), std::uint32_t(stream_),
                              std::uint32_t(stream_ >> 32)},
                             {std::uint32_t(seed_), std::uint32_t(seed_ >> 32)});
        ++block_;
        used_ = 0;
    }

    std::uint32_t RandomStream::next_u32()
    {
        if (used_ == 4)
            refill();
        return buffer_[used_++];
    }

    std::uint64_t RandomStream::next_u64()
    {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    double RandomStream::uniform()
    {
        // (k + 0.5) / 2^53 never hits 0 or 1.
        const std::uint64_t k = next_u64() >> 11;
        return (double(k) + 0.5) * 0x1.0p-53;
    }

    double RandomStream::normal()
    {
        if (have_normal_)
        {
            have_normal_ = false;
            return cached_normal_;
        }
        const double u1 = uniform(), u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        cached_normal_ = r * std::sin(t);
        have_normal_ = true;
        return r * std::cos(t);
    }

    std::complex<double> RandomStream::complex_normal()
    {
        const double re = normal();
        const double im = normal();
        return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }
}
