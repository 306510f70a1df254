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

#ifndef CROSSFIELD_PARALLEL_HPP
#define CROSSFIELD_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace crossfield
{
    // Run fn(i) for i in [0, n). Work items must be independent; results must
    // not depend on the worker count. threads == 0 selects the hardware count.
    template <typename Fn>
    void parallel_for(std::size_t n, unsigned threads, Fn &&fn)
    {
        if (n == 0)
            return;

        unsigned workers = threads != 0 ? threads : std::thread::hardware_concurrency();
        if (workers == 0)
            workers = 1;
        if (static_cast<std::size_t>(workers) > n)
            workers = static_cast<unsigned>(n);

        if (workers == 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                fn(i);
            return;
        }

        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);

        const std::size_t chunk = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w)
        {
            const std::size_t begin = static_cast<std::size_t>(w) * chunk;
            const std::size_t end = begin + chunk < n ? begin + chunk : n;
            if (begin >= end)
                break;
            pool.emplace_back(
                [&, begin, end]()
                {
                    try
                    {
                        for (std::size_t i = begin; i < end; ++i)
                            fn(i);
                    }
                    catch (...)
                    {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error)
                            first_error = std::current_exception();
                    }
                });
        }
        for (auto &t : pool)
            t.join();
        if (first_error)
            std::rethrow_exception(first_error);
    }

} // namespace crossfield

#endif
