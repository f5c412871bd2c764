#pragma once

#include <cstdint>
#include <random>

namespace dimerwave {

/// Seeded generator for every randomized check in the library.  All sweeps
/// derive their streams from a config seed so runs are reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen_);
    }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen_);
    }

    /// Independent substream; keeps criteria decoupled from evaluation order.
    Rng fork(std::uint64_t tag) {
        return Rng(gen_() ^ (0x9e3779b97f4a7c15ULL * (tag + 1)));
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace dimerwave
