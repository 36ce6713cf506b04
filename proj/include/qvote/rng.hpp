// Copyright 2026 The qvote Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <random>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

namespace qvote {

using Rng = std::mt19937_64;

/// Independent generator for one Monte-Carlo trial. The stream depends only on
/// (seed, stream), so results do not depend on how trials are scheduled.
inline Rng stream_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed),
        static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream),
        static_cast<std::uint32_t>(stream >> 32),
        0x71766f74u};
    return Rng(seq);
}

inline bool coin(Rng &rng) {
    return (rng() >> 63) != 0;
}

inline std::size_t uniform_index(Rng &rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double uniform01(Rng &rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Runs `fn(trial_index, rng)` for every trial, each with its own stream, on up
/// to `jobs` threads. Results are returned in trial order.
template <typename Fn>
auto run_trials(std::size_t trials, std::uint64_t seed, unsigned jobs, Fn fn)
    -> std::vector<decltype(fn(std::size_t{}, std::declval<Rng &>()))> {
    using Result = decltype(fn(std::size_t{}, std::declval<Rng &>()));
    // std::vector<bool> packs bits, so concurrent slot writes would race.
    static_assert(!std::is_same_v<Result, bool>, "return a non-bool type from trial functions");
    std::vector<Result> results(trials);
    auto work = [&](std::size_t begin, std::size_t step) {
        for (std::size_t t = begin; t < trials; t += step) {
            Rng rng = stream_rng(seed, t);
            results[t] = fn(t, rng);
        }
    };
    unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(trials, 1))));
    if (workers == 1) {
        work(0, 1);
        return results;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; w++) {
        pool.emplace_back([&, w] {
            try {
                work(w, workers);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return results;
}

}  // namespace qvote
