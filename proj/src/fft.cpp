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

#include "crossfield/fft.hpp"

#include <cmath>
#include <stdexcept>

#include "crossfield/common.hpp"

namespace crossfield
{

    void fft_radix2(std::complex<double> *data, std::size_t n, int sign)
    {
        if (n == 0 || (n & (n - 1)) != 0)
            throw std::invalid_argument("fft_radix2 length must be a power of two");

        // Bit-reversal permutation.
        for (std::size_t i = 1, j = 0; i < n; ++i)
        {
            std::size_t bit = n >> 1;
            for (; j & bit; bit >>= 1)
                j ^= bit;
            j ^= bit;
            if (i < j)
                std::swap(data[i], data[j]);
        }

        for (std::size_t len = 2; len <= n; len <<= 1)
        {
            const double angle = static_cast<double>(sign) * two_pi / static_cast<double>(len);
            const std::complex<double> w_len(std::cos(angle), std::sin(angle));
            for (std::size_t i = 0; i < n; i += len)
            {
                std::complex<double> w(1.0, 0.0);
                for (std::size_t k = 0; k < len / 2; ++k)
                {
                    const std::complex<double> u = data[i + k];
                    const std::complex<double> v = data[i + k + len / 2] * w;
                    data[i + k] = u + v;
                    data[i + k + len / 2] = u - v;
                    w *= w_len;
                }
            }
        }
    }

    dft_plan::dft_plan(std::size_t n, int sign) : n_(n), sign_(sign)
    {
        if (n == 0)
            throw std::invalid_argument("dft length must be positive");
        if (sign != 1 && sign != -1)
            throw std::invalid_argument("dft sign must be +1 or -1");

        m_ = 1;
        while (m_ < 2 * n_ - 1)
            m_ <<= 1;

        // chirp_[k] = exp(sign j pi k^2 / n). k^2 is reduced mod 2n in exact
        // integer arithmetic so the angle stays small even for large k.
        chirp_.resize(n_);
        for (std::size_t k = 0; k < n_; ++k)
        {
            const std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) % (2 * n_);
            const double angle =
                static_cast<double>(sign_) * pi * static_cast<double>(k2) / static_cast<double>(n_);
            chirp_[k] = {std::cos(angle), std::sin(angle)};
        }

        // Spectrum of the wrapped conjugate chirp b, with b[k] = conj(chirp[k])
        // for k in (-n, n) stored circularly in a length-m buffer.
        std::vector<std::complex<double>> b(m_, {0.0, 0.0});
        for (std::size_t k = 0; k < n_; ++k)
        {
            const std::complex<double> v = std::conj(chirp_[k]);
            b[k] = v;
            if (k != 0)
                b[m_ - k] = v;
        }
        fft_radix2(b.data(), m_, -1);
        chirp_spec_ = std::move(b);
    }

    void dft_plan::execute(const std::complex<double> *in, std::complex<double> *out,
                           scratch &s) const
    {
        // X_k = chirp_k * conv(x_n chirp_n, conj(chirp))_k, done circularly at
        // length m via two forward transforms and one inverse.
        s.a.assign(m_, {0.0, 0.0});
        for (std::size_t k = 0; k < n_; ++k)
            s.a[k] = in[k] * chirp_[k];

        fft_radix2(s.a.data(), m_, -1);
        for (std::size_t k = 0; k < m_; ++k)
            s.a[k] *= chirp_spec_[k];
        fft_radix2(s.a.data(), m_, 1);

        const double inv_m = 1.0 / static_cast<double>(m_);
        for (std::size_t k = 0; k < n_; ++k)
            out[k] = s.a[k] * inv_m * chirp_[k];
    }

} // namespace crossfield
