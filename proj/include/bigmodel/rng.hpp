#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace bigmodel {

/// 64-bit FNV-1a; stable across platforms and runs, unlike std::hash.
constexpr std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Random stream owned by one city. Keyed only by (seed, city id), so a
/// city's draws do not depend on which worker runs it or in what order.
class CityStream {
public:
    CityStream(std::uint64_t seed, std::string_view city_id)
        : engine_(splitmix64(seed ^ splitmix64(fnv1a64(city_id)))) {}

    /// Uniform on [0, 1) from the top 53 bits; avoids the
    /// implementation-defined behavior of std::uniform_real_distribution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [-1, 1).
    double uniform_symmetric() { return 2.0 * uniform01() - 1.0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace bigmodel
