#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace astopo {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Seeded random stream with named, counter-keyed sub-streams.
///
/// `stream(name, index)` depends only on this stream's key, never on how many
/// values were drawn, so components can be scheduled in any order and still
/// see the same numbers. Conversions to doubles and bounded integers are done
/// here rather than through <random> distributions, whose outputs differ
/// between standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(splitmix64(seed)), engine_(key_) {}

    Rng stream(std::string_view name, std::uint64_t index = 0) const {
        std::uint64_t k = splitmix64(key_ ^ fnv1a64(name));
        k = splitmix64(k + splitmix64(index ^ 0x5851f42d4c957f2dULL));
        return Rng(k, raw_tag{});
    }

    std::uint64_t key() const { return key_; }

    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) {
        // Lemire's nearly-divisionless method
        unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(engine_()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

private:
    struct raw_tag {};
    Rng(std::uint64_t key, raw_tag) : key_(key), engine_(key) {}

    std::uint64_t key_;
    std::mt19937_64 engine_;
};

}  // namespace astopo
