// SPDX-License-Identifier: Apache-2.0
//
// urq: universal rate-efficient scalar quantization
// Copyright (C) 2026 The urq authors
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

#pragma once

#include "rng.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace urq::detail
{

struct Block
{
    unsigned index;
    std::uint64_t begin; // first global trial index
    std::uint64_t count;
};

inline std::vector<Block> split_trials(std::uint64_t trials, unsigned partitions)
{
    std::vector<Block> blocks;
    const std::uint64_t base = trials / partitions;
    const std::uint64_t extra = trials % partitions;
    std::uint64_t begin = 0;
    for (unsigned p = 0; p < partitions; ++p)
    {
        const std::uint64_t n = base + (p < extra ? 1 : 0);
        blocks.push_back({p, begin, n});
        begin += n;
    }
    return blocks;
}

/*
Runs body(block, result_slot) for every block on up to `threads` workers.
Results land in a vector indexed by block, so the caller merges them in a
fixed order regardless of scheduling.
*/
template <class Result, class Body>
std::vector<Result> run_blocks(std::uint64_t trials, unsigned partitions, unsigned threads, Body body)
{
    if (partitions == 0)
        partitions = 1;
    const auto blocks = split_trials(trials, partitions);
    std::vector<Result> results(blocks.size());

    unsigned workers = threads;
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(blocks.size()));

    if (workers <= 1)
    {
        for (const auto &b : blocks)
            body(b, results[b.index]);
        return results;
    }

    std::atomic<unsigned> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try
            {
                for (unsigned i = next++; i < blocks.size(); i = next++)
                    body(blocks[i], results[blocks[i].index]);
            }
            catch (...)
            {
                errors[w] = std::current_exception();
            }
        });
    for (auto &t : pool)
        t.join();
    for (auto &e : errors)
        if (e)
            std::rethrow_exception(e);
    return results;
}

} // namespace urq::detail
