#include "ecp/hardness.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ecp {

void BinPackingInstance::validate() const {
    if (bins < 1) throw std::invalid_argument("bin count must be positive");
    if (capacity < 1) throw std::invalid_argument("bin capacity must be positive");
    long long total = 0;
    for (int a : items) {
        if (a < 1) throw std::invalid_argument("items must be positive");
        total += a;
    }
    if (total != static_cast<long long>(bins) * capacity)
        throw std::invalid_argument("item total must equal bins * capacity");
}

BinPackingInstance parse_binpacking_text(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    BinPackingInstance ubp;
    int count = -1;
    bool have_header = false;
    while (in >> tok) {
        if (tok == "c") {
            std::string line;
            std::getline(in, line);
            continue;
        }
        if (tok == "u") {
            std::string kind;
            if (!(in >> kind) || kind != "ubp") throw std::runtime_error("malformed ubp header");
            if (!(in >> ubp.bins >> ubp.capacity >> count)) throw std::runtime_error("malformed ubp header");
            have_header = true;
            continue;
        }
        if (!have_header) throw std::runtime_error("item before ubp header");
        ubp.items.push_back(std::stoi(tok));
    }
    if (!have_header) throw std::runtime_error("missing ubp header");
    if (count != static_cast<int>(ubp.items.size()))
        throw std::runtime_error("ubp item count mismatch");
    ubp.validate();
    return ubp;
}

std::string serialize_binpacking(const BinPackingInstance& ubp) {
    std::ostringstream out;
    out << "u ubp " << ubp.bins << ' ' << ubp.capacity << ' ' << ubp.items.size() << '\n';
    for (std::size_t i = 0; i < ubp.items.size(); ++i) out << ubp.items[i] << (i + 1 < ubp.items.size() ? ' ' : '\n');
    return out.str();
}

Instance reduce_binpacking(const BinPackingInstance& ubp) {
    ubp.validate();
    const int k = ubp.bins;
    int n = k;
    for (int a : ubp.items) n += a;
    Graph g(n);
    int next = k;
    for (int a : ubp.items) {
        const int hub = next++;
        for (int leaf = 0; leaf < a - 1; ++leaf) g.add_edge(hub, next++);
        for (int bin = 0; bin < k; ++bin) g.add_edge(bin, hub);
    }
    return Instance{std::move(g), k};
}

std::optional<std::vector<int>> solve_binpacking_bruteforce(const BinPackingInstance& ubp) {
    ubp.validate();
    const int k = ubp.bins;
    const int m = static_cast<int>(ubp.items.size());
    std::vector<int> load(k, 0), assignment(m, -1);
    std::optional<std::vector<int>> result;

    // Bins are interchangeable a priori: item i may only open bin
    // (max used so far) + 1.
    std::function<bool(int, int)> rec = [&](int i, int used) -> bool {
        if (i == m) {
            for (int b = 0; b < k; ++b)
                if (load[b] != ubp.capacity) return false;
            result = assignment;
            return true;
        }
        const int limit = std::min(k - 1, used);
        for (int b = 0; b <= limit; ++b) {
            if (load[b] + ubp.items[i] > ubp.capacity) continue;
            load[b] += ubp.items[i];
            assignment[i] = b;
            if (rec(i + 1, std::max(used, b + 1))) return true;
            load[b] -= ubp.items[i];
            assignment[i] = -1;
        }
        return false;
    };
    rec(0, 0);
    return result;
}

// ---------------------------------------------------------------------------
// Random families

std::optional<RandomKind> random_kind_from_name(const std::string& name) {
    if (name == "tree") return RandomKind::kTree;
    if (name == "grid") return RandomKind::kGrid;
    if (name == "cycle-with-chords") return RandomKind::kCycleWithChords;
    if (name == "cograph") return RandomKind::kCograph;
    if (name == "cluster-plus-modulator") return RandomKind::kClusterPlusModulator;
    if (name == "clique-plus-modulator") return RandomKind::kCliquePlusModulator;
    return std::nullopt;
}

const char* random_kind_name(RandomKind kind) {
    switch (kind) {
        case RandomKind::kTree: return "tree";
        case RandomKind::kGrid: return "grid";
        case RandomKind::kCycleWithChords: return "cycle-with-chords";
        case RandomKind::kCograph: return "cograph";
        case RandomKind::kClusterPlusModulator: return "cluster-plus-modulator";
        case RandomKind::kCliquePlusModulator: return "clique-plus-modulator";
    }
    return "?";
}

namespace {

Graph random_tree(int n, SplitMix64& rng) {
    Graph g(n);
    if (n == 1) return g;
    if (n == 2) {
        g.add_edge(0, 1);
        return g;
    }
    // Pruefer decoding.
    std::vector<int> seq(n - 2);
    for (auto& s : seq) s = static_cast<int>(rng.below(n));
    std::vector<int> degree(n, 1);
    for (int s : seq) ++degree[s];
    std::vector<char> used(n, 0);
    for (int s : seq) {
        int leaf = -1;
        for (int v = 0; v < n; ++v)
            if (degree[v] == 1 && !used[v]) {
                leaf = v;
                break;
            }
        g.add_edge(leaf, s);
        used[leaf] = 1;
        --degree[s];
    }
    std::vector<int> last;
    for (int v = 0; v < n; ++v)
        if (degree[v] == 1 && !used[v]) last.push_back(v);
    g.add_edge(last[0], last[1]);
    return g;
}

Graph grid_graph(int rows, int cols) {
    Graph g(rows * cols);
    auto at = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) g.add_edge(at(r, c), at(r, c + 1));
            if (r + 1 < rows) g.add_edge(at(r, c), at(r + 1, c));
        }
    return g;
}

Graph cycle_with_chords(int n, int chords, SplitMix64& rng) {
    Graph g(n);
    for (int v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
    int added = 0, attempts = 0;
    while (added < chords && attempts < 50 * (chords + 1)) {
        ++attempts;
        int u = static_cast<int>(rng.below(n));
        int v = static_cast<int>(rng.below(n));
        if (u == v || g.has_edge(u, v)) continue;
        g.add_edge(u, v);
        ++added;
    }
    return g;
}

// Random binary co-tree with a join at the root (connected result).
Graph random_cograph(int n, SplitMix64& rng) {
    Graph g(n);
    std::function<void(std::vector<int>, bool, bool)> build = [&](std::vector<int> vertices, bool join,
                                                                  bool root) {
        if (vertices.size() <= 1) return;
        const int split = 1 + static_cast<int>(rng.below(vertices.size() - 1));
        std::vector<int> left(vertices.begin(), vertices.begin() + split);
        std::vector<int> right(vertices.begin() + split, vertices.end());
        if (join)
            for (int u : left)
                for (int v : right) g.add_edge(u, v);
        bool left_join = rng.below(2) == 0;
        bool right_join = rng.below(2) == 0;
        (void)root;
        build(left, left_join, false);
        build(right, right_join, false);
    };
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    build(all, true, true);
    return g;
}

Graph cluster_plus_modulator(int n, int modulator, SplitMix64& rng, bool single_clique) {
    if (modulator >= n) modulator = n - 1;
    if (modulator == 0) single_clique = true;  // nothing else could keep it connected
    const int rest = n - modulator;
    Graph g(n);
    // Cliques occupy vertices modulator..n-1.
    std::vector<std::pair<int, int>> cliques;  // [begin, end)
    int at = modulator;
    while (at < n) {
        int size = single_clique ? rest : std::min(rest, 1 + static_cast<int>(rng.below(4)));
        size = std::min(size, n - at);
        cliques.emplace_back(at, at + size);
        for (int u = at; u < at + size; ++u)
            for (int v = u + 1; v < at + size; ++v) g.add_edge(u, v);
        at += size;
    }
    if (modulator == 0) return g;
    // Modulator vertex 0 touches every clique (connectivity); the rest
    // attach to random vertices.
    for (const auto& [begin, end] : cliques) {
        int target = begin + static_cast<int>(rng.below(end - begin));
        g.add_edge(0, target);
    }
    for (int m = 1; m < modulator; ++m) {
        int tries = 1 + static_cast<int>(rng.below(3));
        for (int t = 0; t < tries; ++t) {
            int v = modulator + static_cast<int>(rng.below(rest));
            if (!g.has_edge(m, v)) g.add_edge(m, v);
        }
        if (!g.has_edge(m, 0)) g.add_edge(m, 0);
    }
    return g;
}

}  // namespace

Instance gen_random_instance(const RandomSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("generator needs n >= 1");
    SplitMix64 rng(spec.seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(spec.kind) + 1);
    Graph g;
    switch (spec.kind) {
        case RandomKind::kTree: g = random_tree(spec.n, rng); break;
        case RandomKind::kGrid: {
            int rows = spec.rows, cols = spec.cols;
            if (rows <= 0 || cols <= 0) {
                rows = 1;
                for (int r = 1; r * r <= spec.n; ++r)
                    if (spec.n % r == 0) rows = r;
                cols = spec.n / rows;
            }
            g = grid_graph(rows, cols);
            break;
        }
        case RandomKind::kCycleWithChords: {
            if (spec.n < 3) throw std::invalid_argument("cycle needs n >= 3");
            int chords = spec.chords >= 0 ? spec.chords : spec.n / 5 + 1;
            g = cycle_with_chords(spec.n, chords, rng);
            break;
        }
        case RandomKind::kCograph: g = random_cograph(spec.n, rng); break;
        case RandomKind::kClusterPlusModulator: {
            int mod = spec.modulator >= 0 ? spec.modulator : std::max(1, spec.n / 6);
            g = cluster_plus_modulator(spec.n, mod, rng, false);
            break;
        }
        case RandomKind::kCliquePlusModulator: {
            int mod = spec.modulator >= 0 ? spec.modulator : std::max(1, spec.n / 6);
            g = cluster_plus_modulator(spec.n, mod, rng, true);
            break;
        }
    }
    if (spec.parts < 1 || spec.parts > g.vertex_count())
        throw std::invalid_argument("generator part count out of range");
    if (!g.is_connected()) throw std::logic_error("generator produced a disconnected graph");
    return Instance{std::move(g), spec.parts};
}

std::string serialize_generated(const Instance& instance, const std::string& provenance) {
    return "c " + provenance + "\n" + serialize_instance(instance);
}

}  // namespace ecp
