#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace tvmerge {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Derive an independent stream seed from a base seed and a label.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
    std::uint64_t h = splitmix64(base);
    for (char c : label) {
        h = splitmix64(h ^ static_cast<std::uint8_t>(c));
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t index) {
    return splitmix64(derive_seed(base, label) ^ splitmix64(index));
}

// Deterministic RNG with transforms pinned here rather than taken from
// <random> distributions, whose output is implementation-defined. The
// mt19937_64 engine itself is fully specified by the standard, so streams
// reproduce bit-exactly across compilers and platforms.
class rng {
public:
    explicit rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform index in [0, n). n must be nonzero.
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Standard normal via Box-Muller; draws two words per call.
    double gaussian() {
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace tvmerge
