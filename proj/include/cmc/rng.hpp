#pragma once

#include <cstdint>

namespace cmc {

/// Philox4x32-10 counter-based generator (Salmon et al., SC 2011). Each
/// stream is keyed by (seed, stream id); streams are statistically
/// independent and a path's draws never depend on how work is scheduled
/// across threads.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    /// Uniform on [0, 1).
    double uniform();

    /// Uniform on (0, 1]; safe as an argument to log.
    double uniform_positive();

    /// Exponential with the given rate (> 0).
    double exponential(double rate);

private:
    void refill();

    std::uint32_t key_[2];
    std::uint32_t counter_[4];
    std::uint32_t block_[4];
    int cursor_;
};

}  // namespace cmc
