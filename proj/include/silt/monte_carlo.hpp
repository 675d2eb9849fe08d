#pragma once

#include "silt/errors.hpp"
#include "silt/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace silt {

struct RunningMoments {
    std::size_t count = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
    double max = -std::numeric_limits<double>::infinity();

    void add(double x) {
        ++count;
        sum += x;
        sum_sq += x * x;
        max = std::max(max, x);
    }
    void merge(const RunningMoments& o) {
        count += o.count;
        sum += o.sum;
        sum_sq += o.sum_sq;
        max = std::max(max, o.max);
    }
    [[nodiscard]] double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
    [[nodiscard]] double variance() const {
        if (count < 2) return 0.0;
        const double n = static_cast<double>(count);
        const double m = sum / n;
        return std::max(0.0, (sum_sq - n * m * m) / (n - 1.0));
    }
    [[nodiscard]] double std_error() const {
        return count ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
    }
};

// How a Monte Carlo run is cut into reproducible shards. The shard layout
// depends only on (n_samples, shard_size), never on the worker count, and
// shard i always draws from RngStream(seed, i).
struct ShardPlan {
    std::uint64_t seed = 0;
    std::size_t shard_size = 2048;

    [[nodiscard]] std::size_t shard_count(std::size_t n_samples) const {
        return (n_samples + shard_size - 1) / shard_size;
    }
    [[nodiscard]] std::vector<std::uint64_t> shard_seeds(std::size_t n_samples) const {
        std::vector<std::uint64_t> ids(shard_count(n_samples));
        for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
        return ids;
    }
};

// Workers used for shard fan-out; SILT_WORKERS overrides the hardware count.
inline unsigned worker_count() {
    if (const char* env = std::getenv("SILT_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs `per_sample(rng, out)` n_samples times, where `out` receives
// n_observables values per sample, and returns moments per observable.
// `make_state()` builds per-shard scratch passed as a third argument.
// Reduction runs in shard-index order so results are bit-identical for any
// worker count.
template <class MakeState, class PerSample>
std::vector<RunningMoments> sharded_moments(std::size_t n_samples, std::size_t n_observables,
                                            const ShardPlan& plan, MakeState make_state,
                                            PerSample per_sample) {
    if (n_samples == 0) throw InputError("sharded_moments: n_samples must be positive");
    if (plan.shard_size == 0) throw InputError("sharded_moments: shard_size must be positive");

    const std::size_t shards = plan.shard_count(n_samples);
    std::vector<std::vector<RunningMoments>> partial(shards,
                                                     std::vector<RunningMoments>(n_observables));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        try {
            auto state = make_state();
            std::vector<double> out(n_observables);
            for (std::size_t s = next++; s < shards; s = next++) {
                RngStream rng(plan.seed, s);
                const std::size_t begin = s * plan.shard_size;
                const std::size_t end = std::min(n_samples, begin + plan.shard_size);
                for (std::size_t i = begin; i < end; ++i) {
                    per_sample(rng, std::span<double>(out), state);
                    for (std::size_t k = 0; k < n_observables; ++k) partial[s][k].add(out[k]);
                }
            }
        } catch (...) {
            next = shards;
            const std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), shards));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<RunningMoments> total(n_observables);
    for (const auto& shard : partial)
        for (std::size_t k = 0; k < n_observables; ++k) total[k].merge(shard[k]);
    return total;
}

}  // namespace silt
