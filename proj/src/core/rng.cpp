#include "psg/core/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace psg {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Seed Seed::derive(std::string_view label, std::uint64_t index) const {
    const std::uint64_t mixed = splitmix64(value_ ^ splitmix64(fnv1a64(label) + index));
    std::string child = path_;
    child += '/';
    child += label;
    child += std::to_string(index);
    return Seed(mixed, std::move(child));
}

int uniform_int(Rng& rng, int lo, int hi) {
    if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    // Rejection sampling keeps the draw exactly uniform.
    const std::uint64_t limit = Rng::max() - (Rng::max() % span);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return lo + static_cast<int>(x % span);
}

double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(Rng& rng) {
    double u1;
    do {
        u1 = uniform01(rng);
    } while (u1 <= 0.0);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace psg
