#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace p3pc {

/// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Folds a list of coordinates into a seed. derive_seed(s, {a, b}) gives the
/// stream for pair (a, b) under base seed s, independent of visiting order.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> coords) noexcept {
    std::uint64_t h = mix64(base);
    for (auto c : coords) {
        h = mix64(h ^ mix64(c + 0x632be59bd9b4e019ULL));
    }
    return h;
}

/// mt19937_64 with distribution code pinned here instead of in <random>,
/// whose distributions are implementation-defined. Every draw below consumes
/// a fixed, documented number of engine outputs so runs replay bit-exactly
/// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) from the top 53 bits of one engine output.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// One engine output. p = 0 never fires, p = 1 always fires.
    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform integer in [0, bound) by rejection on the largest multiple of bound.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace p3pc
