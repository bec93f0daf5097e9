#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace p3pc {

/// Calls f(subset) for every size-k subset of items in lexicographic order of
/// positions, e.g. {0,1}, {0,2}, {1,2} for three items and k = 2. f returns
/// false to stop. Returns false iff f stopped the iteration.
template <class T, class F>
bool for_each_combination(std::span<const T> items, std::size_t k, F&& f) {
    const std::size_t m = items.size();
    if (k > m) return true;
    std::vector<std::size_t> pos(k);
    for (std::size_t i = 0; i < k; ++i) pos[i] = i;
    std::vector<T> subset(k);
    while (true) {
        for (std::size_t i = 0; i < k; ++i) subset[i] = items[pos[i]];
        if (!f(static_cast<const std::vector<T>&>(subset))) return false;
        // Advance the rightmost position that still has room.
        std::size_t i = k;
        while (i > 0 && pos[i - 1] == m - k + (i - 1)) --i;
        if (i == 0) return true;
        ++pos[i - 1];
        for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
    }
}

/// Binomial coefficient; exact while the result fits in 64 bits.
constexpr std::uint64_t choose(std::uint64_t n, std::uint64_t k) noexcept {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace p3pc
