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

#ifndef CROSSFIELD_FFT_HPP
#define CROSSFIELD_FFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace crossfield
{
    // In-place radix-2 transform, n must be a power of two.
    // sign = -1: X_k = sum_n x_n exp(-j 2 pi n k / n)
    // sign = +1: the conjugate kernel. No normalization either way.
    void fft_radix2(std::complex<double> *data, std::size_t n, int sign);

    // Arbitrary-length DFT via the Bluestein chirp-z decomposition. The plan
    // precomputes the chirp and its spectrum once; execute() is safe to call
    // concurrently from multiple threads with distinct scratch buffers.
    class dft_plan
    {
      public:
        dft_plan(std::size_t n, int sign);

        std::size_t size() const { return n_; }

        struct scratch
        {
            std::vector<std::complex<double>> a;
        };

        void execute(const std::complex<double> *in, std::complex<double> *out, scratch &s) const;

      private:
        std::size_t n_;
        int sign_;
        std::size_t m_; // padded power-of-two length
        std::vector<std::complex<double>> chirp_;      // exp(sign j pi k^2 / n)
        std::vector<std::complex<double>> chirp_spec_; // FFT of the wrapped conjugate chirp
    };

} // namespace crossfield

#endif
