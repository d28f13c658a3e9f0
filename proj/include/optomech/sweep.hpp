#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

#include "optomech/config.hpp"
#include "optomech/evaluate.hpp"
#include "optomech/result_table.hpp"

namespace optomech {

// f(i) for i in [0, n) on up to `jobs` threads; results in index order.
// The exception of the lowest failing index is rethrown.
template <typename F>
auto parallel_map(std::size_t n, int jobs, F f) -> std::vector<decltype(f(std::size_t{}))> {
    using R = decltype(f(std::size_t{}));
    std::vector<R> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min<std::size_t>(std::max(jobs, 1), std::max<std::size_t>(n, 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

// Used when a config has no `outputs` line.
std::vector<Quantity> default_sweep_outputs();

// One row per grid point; the first axis varies slowest. Axis columns carry
// the axis unit. Throws StabilityError when no point is stable.
ResultTable run_sweep(const ScenarioConfig& config, int jobs = 1);

// SI base unit of a config key ("rad/s", "m", "kg", "W" or "").
std::string si_unit(std::string_view key);

}  // namespace optomech
