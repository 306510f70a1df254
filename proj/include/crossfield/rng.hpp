// SPDX-License-Identifier: Apache-2.0
//
// crossfield - spherical-wave channel synthesis and cross-field path loss
// modelling for uniform planar arrays
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

#ifndef CROSSFIELD_RNG_HPP
#define CROSSFIELD_RNG_HPP

#include <cmath>
#include <cstdint>

#include "crossfield/common.hpp"

namespace crossfield
{
    // splitmix64. Self-contained so that seeded outputs do not depend on the
    // standard library implementation; every draw is a pure function of the
    // stream key and draw index.
    class splitmix64
    {
      public:
        explicit splitmix64(std::uint64_t seed) : state_(seed) {}

        std::uint64_t next_u64()
        {
            std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        }

        // Uniform draw in (0, 1].
        double next_unit()
        {
            return 1.0 - static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        }

      private:
        std::uint64_t state_;
    };

    // Combine a seed with a stream index (element number, restart number, ...)
    // into an independent stream key.
    inline std::uint64_t mix_stream(std::uint64_t seed, std::uint64_t stream)
    {
        splitmix64 g(seed ^ (0x2545f4914f6cdd1dULL * (stream + 1)));
        return g.next_u64();
    }

    // Standard normal draws via Box-Muller on the splitmix64 stream.
    class gaussian_stream
    {
      public:
        explicit gaussian_stream(std::uint64_t key) : gen_(key) {}

        double next()
        {
            if (have_spare_)
            {
                have_spare_ = false;
                return spare_;
            }
            const double u1 = gen_.next_unit();
            const double u2 = gen_.next_unit();
            const double r = std::sqrt(-2.0 * std::log(u1));
            spare_ = r * std::sin(two_pi * u2);
            have_spare_ = true;
            return r * std::cos(two_pi * u2);
        }

      private:
        splitmix64 gen_;
        double spare_ = 0.0;
        bool have_spare_ = false;
    };

} // namespace crossfield

#endif
