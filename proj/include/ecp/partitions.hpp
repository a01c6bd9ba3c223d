#pragma once

#include <functional>
#include <vector>

namespace ecp {

/// Enumerates set partitions of {0..n-1} into at most max_blocks blocks, in
/// restricted-growth-string order (block ids appear in first-use order).
/// The callback receives (block_of, block_count); return false to stop.
inline void enumerate_set_partitions(int n, int max_blocks,
                                     const std::function<bool(const std::vector<int>&, int)>& visit) {
    std::vector<int> block_of(n, 0);
    bool stop = false;
    std::function<void(int, int)> rec = [&](int i, int used) {
        if (stop) return;
        if (i == n) {
            if (!visit(block_of, used)) stop = true;
            return;
        }
        int limit = std::min(used + 1, max_blocks);
        for (int b = 0; b < limit && !stop; ++b) {
            block_of[i] = b;
            rec(i + 1, std::max(used, b + 1));
        }
    };
    if (n == 0) {
        visit(block_of, 0);
        return;
    }
    rec(0, 0);
}

/// Enumerates all subsets of `universe` (as index vectors), in ascending
/// bitmask order. Intended for small universes.
inline void enumerate_subsets(int universe, const std::function<bool(unsigned)>& visit) {
    for (unsigned mask = 0; mask < (1u << universe); ++mask)
        if (!visit(mask)) return;
}

}  // namespace ecp
