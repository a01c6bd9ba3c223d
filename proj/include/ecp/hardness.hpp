#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecp/graph.hpp"

namespace ecp {

/// Unary Bin Packing: pack the items of A into k bins, each summing to
/// exactly b. Requires sum(A) = b * k.
struct BinPackingInstance {
    std::vector<int> items;
    int bins = 1;
    int capacity = 1;

    void validate() const;  // throws on malformed data
};

/// Input format: `u ubp <k> <b> <|A|>` then the items, whitespace-separated.
BinPackingInstance parse_binpacking_text(const std::string& text);
std::string serialize_binpacking(const BinPackingInstance& ubp);

/// Star reduction: one star item-gadget per item (the centre is the hub), k
/// single-vertex bin-gadgets, every bin-gadget adjacent to every hub, p = k.
/// Vertex numbering: bins first, then gadgets in item order, centre before
/// leaves.
Instance reduce_binpacking(const BinPackingInstance& ubp);

/// Exhaustive search over bin assignments with equal-bin symmetry pruning.
/// Returns item -> bin, or empty when no packing exists.
std::optional<std::vector<int>> solve_binpacking_bruteforce(const BinPackingInstance& ubp);

// ---------------------------------------------------------------------------
// Seeded random instances

enum class RandomKind {
    kTree,
    kGrid,
    kCycleWithChords,
    kCograph,
    kClusterPlusModulator,
    kCliquePlusModulator,
};

std::optional<RandomKind> random_kind_from_name(const std::string& name);
const char* random_kind_name(RandomKind kind);

struct RandomSpec {
    RandomKind kind = RandomKind::kTree;
    std::uint64_t seed = 0;
    int n = 0;
    int parts = 1;
    int rows = 0, cols = 0;  // grid only; derived from n when zero
    int chords = -1;         // cycle-with-chords; default n/5 + 1
    int modulator = -1;      // *-plus-modulator; default max(1, n/6)
};

/// Deterministic generator: the same spec reproduces the instance
/// bit-exactly. Generated graphs are connected and satisfy the family
/// guarantee of their kind.
Instance gen_random_instance(const RandomSpec& spec);

/// Provenance comment lines prepended to the serialized instance.
std::string serialize_generated(const Instance& instance, const std::string& provenance);

/// Deterministic xorshift-style generator (independent of the standard
/// library distributions, which are not portable).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform value in [0, bound).
    std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : next() % bound; }

    int range(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

private:
    std::uint64_t state_;
};

}  // namespace ecp
