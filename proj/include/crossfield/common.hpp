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

#ifndef CROSSFIELD_COMMON_HPP
#define CROSSFIELD_COMMON_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace crossfield
{
    inline constexpr double speed_of_light = 299792458.0; // m/s
    inline constexpr double pi = 3.14159265358979323846;
    inline constexpr double two_pi = 2.0 * pi;

    // Domain errors that cross module boundaries. Precondition violations
    // throw std::invalid_argument; file problems throw io_error.
    struct no_path_found : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct degenerate_grid : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct io_error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    inline void check_finite(double value, const char *name)
    {
        if (!std::isfinite(value))
            throw std::invalid_argument(std::string(name) + " must be finite");
    }

    inline void check_positive(double value, const char *name)
    {
        check_finite(value, name);
        if (value <= 0.0)
            throw std::invalid_argument(std::string(name) + " must be positive");
    }

    inline void check_non_negative(double value, const char *name)
    {
        check_finite(value, name);
        if (value < 0.0)
            throw std::invalid_argument(std::string(name) + " must be non-negative");
    }

    inline double db_from_power(double p) { return 10.0 * std::log10(p); }
    inline double db_from_amplitude(double a) { return 20.0 * std::log10(a); }
    inline double power_from_db(double db) { return std::pow(10.0, db / 10.0); }
    inline double amplitude_from_db(double db) { return std::pow(10.0, db / 20.0); }

    // Wrap an angle to [-pi, pi).
    inline double wrap_phase(double x)
    {
        double y = std::remainder(x, two_pi);
        if (y >= pi)
            y -= two_pi;
        if (y < -pi)
            y += two_pi;
        return y;
    }

    // Neumaier compensated accumulator. Keeps large sums stable enough that
    // the evaluation order cannot move the result by more than ~1e-12 relative.
    class compensated_sum
    {
      public:
        void add(double x)
        {
            double t = sum_ + x;
            if (std::abs(sum_) >= std::abs(x))
                comp_ += (sum_ - t) + x;
            else
                comp_ += (x - t) + sum_;
            sum_ = t;
        }

        double value() const { return sum_ + comp_; }

      private:
        double sum_ = 0.0;
        double comp_ = 0.0;
    };

} // namespace crossfield

#endif
