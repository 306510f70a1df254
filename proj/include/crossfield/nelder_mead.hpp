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

#ifndef CROSSFIELD_NELDER_MEAD_HPP
#define CROSSFIELD_NELDER_MEAD_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace crossfield
{
    struct nelder_mead_options
    {
        std::size_t max_iterations = 1000;
        double f_tolerance = 1e-12; // stop when the simplex f-spread drops below
        double initial_step = 0.25; // per-coordinate offset of the start simplex
    };

    struct nelder_mead_result
    {
        std::vector<double> x;
        double fx = 0.0;
        std::size_t iterations = 0;
        bool converged = false;
    };

    // Downhill simplex with the standard reflection/expansion/contraction/
    // shrink moves (1, 2, 0.5, 0.5). Deterministic for a given start point.
    template <typename F>
    nelder_mead_result nelder_mead(F &&f, std::span<const double> x0,
                                   const nelder_mead_options &opt = {})
    {
        const std::size_t dim = x0.size();
        const std::size_t n_vert = dim + 1;

        std::vector<std::vector<double>> points(n_vert, std::vector<double>(x0.begin(), x0.end()));
        for (std::size_t i = 0; i < dim; ++i)
            points[i + 1][i] += opt.initial_step;

        std::vector<double> values(n_vert);
        for (std::size_t v = 0; v < n_vert; ++v)
            values[v] = f(std::span<const double>(points[v]));

        std::vector<std::size_t> order(n_vert);
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto sort_order = [&]()
        {
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        };

        nelder_mead_result result;
        std::size_t iter = 0;
        std::vector<double> centroid(dim), candidate(dim);
        for (; iter < opt.max_iterations; ++iter)
        {
            sort_order();
            const std::size_t best = order.front();
            const std::size_t worst = order.back();
            const std::size_t second_worst = order[n_vert - 2];

            if (values[worst] - values[best] <= opt.f_tolerance)
            {
                result.converged = true;
                break;
            }

            std::fill(centroid.begin(), centroid.end(), 0.0);
            for (std::size_t v = 0; v < n_vert; ++v)
            {
                if (v == worst)
                    continue;
                for (std::size_t i = 0; i < dim; ++i)
                    centroid[i] += points[v][i];
            }
            for (double &c : centroid)
                c /= static_cast<double>(dim);

            auto blend = [&](double coeff)
            {
                for (std::size_t i = 0; i < dim; ++i)
                    candidate[i] = centroid[i] + coeff * (centroid[i] - points[worst][i]);
            };

            blend(1.0); // reflection
            const double f_reflect = f(std::span<const double>(candidate));
            if (f_reflect < values[best])
            {
                std::vector<double> reflected = candidate;
                blend(2.0); // expansion
                const double f_expand = f(std::span<const double>(candidate));
                if (f_expand < f_reflect)
                {
                    points[worst] = candidate;
                    values[worst] = f_expand;
                }
                else
                {
                    points[worst] = std::move(reflected);
                    values[worst] = f_reflect;
                }
                continue;
            }
            if (f_reflect < values[second_worst])
            {
                points[worst] = candidate;
                values[worst] = f_reflect;
                continue;
            }

            const bool outside = f_reflect < values[worst];
            std::vector<double> reflected = candidate;
            if (outside)
            {
                for (std::size_t i = 0; i < dim; ++i)
                    candidate[i] = centroid[i] + 0.5 * (reflected[i] - centroid[i]);
            }
            else
            {
                for (std::size_t i = 0; i < dim; ++i)
                    candidate[i] = centroid[i] + 0.5 * (points[worst][i] - centroid[i]);
            }
            const double f_contract = f(std::span<const double>(candidate));
            if (f_contract < (outside ? f_reflect : values[worst]))
            {
                points[worst] = candidate;
                values[worst] = f_contract;
                continue;
            }

            // Shrink toward the best vertex.
            for (std::size_t v = 0; v < n_vert; ++v)
            {
                if (v == best)
                    continue;
                for (std::size_t i = 0; i < dim; ++i)
                    points[v][i] = points[best][i] + 0.5 * (points[v][i] - points[best][i]);
                values[v] = f(std::span<const double>(points[v]));
            }
        }

        sort_order();
        result.x = points[order.front()];
        result.fx = values[order.front()];
        result.iterations = iter;
        return result;
    }

} // namespace crossfield

#endif
