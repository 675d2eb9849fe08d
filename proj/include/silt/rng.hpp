#pragma once

#include <cstdint>
#include <random>

namespace silt {

// Seeded random stream addressed by (seed, shard). Two streams with the same
// address produce identical draws; distinct shards are decorrelated through
// std::seed_seq mixing, so Monte Carlo shards can run in any order.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t shard = 0)
        : seed_(seed), shard_(shard) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(shard), static_cast<std::uint32_t>(shard >> 32),
                          0x5117u};
        engine_.seed(seq);
    }

    [[nodiscard]] double normal() { return normal_(engine_); }
    [[nodiscard]] double uniform() { return uniform_(engine_); }

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t shard() const noexcept { return shard_; }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::uint64_t seed_;
    std::uint64_t shard_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace silt
