#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace psg {

using Rng = std::mt19937_64;

// A node in the hierarchical seed tree. Every subsystem derives its own
// stream from a labelled path (group -> selector -> round), so adding draws
// in one stream never shifts another.
class Seed {
public:
    Seed() = default;
    explicit Seed(std::uint64_t root) : value_(root), path_(std::to_string(root)) {}

    Seed derive(std::string_view label, std::uint64_t index = 0) const;

    std::uint64_t value() const noexcept { return value_; }
    const std::string& path() const noexcept { return path_; }
    Rng engine() const { return Rng(value_); }

private:
    Seed(std::uint64_t value, std::string path) : value_(value), path_(std::move(path)) {}

    std::uint64_t value_ = 0;
    std::string path_ = "0";
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Stable 64-bit FNV-1a; used for seed derivation and never for security.
std::uint64_t fnv1a64(std::string_view text) noexcept;

// Uniform integer in [lo, hi] that does not depend on the standard
// library's distribution implementation.
int uniform_int(Rng& rng, int lo, int hi);

// Uniform double in [0, 1).
double uniform01(Rng& rng);

// Standard normal draw via Box-Muller (portable across standard libraries).
double standard_normal(Rng& rng);

}  // namespace psg
