#include "levy/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace levy {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = splitmix64(base);
    for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
    return h;
}

double Rng::exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential rate must be > 0");
    return -std::log(uniform()) / rate;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    // Lemire's multiply-shift with rejection
    unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * span;
    auto low = static_cast<std::uint64_t>(m);
    if (low < span) {
        const std::uint64_t threshold = -span % span;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(engine_()) * span;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return lo + static_cast<std::int64_t>(m >> 64);
}

}  // namespace levy
