#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace levy {

std::uint64_t splitmix64(std::uint64_t x);
// Mixes a base seed with a list of keys into a stream seed.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys);

// mt19937_64 with distribution code of our own, so draws are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    // Uniform on the open interval (0, 1).
    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
    double exponential(double rate);
    // Uniform integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace levy
