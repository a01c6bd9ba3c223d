#include "ecp/dp_solvers.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "ecp/matching.hpp"
#include "ecp/partitions.hpp"

namespace ecp {

// ---------------------------------------------------------------------------
// Cliques

Partition solve_clique(const Instance& instance) {
    if (!instance.graph.is_clique()) throw std::invalid_argument("solve_clique: graph is not a clique");
    const SizeBounds b = instance.bounds();
    Partition partition;
    partition.assignment.resize(instance.graph.vertex_count());
    int v = 0;
    for (int part = 0; part < instance.parts; ++part) {
        int size = part < b.num_large ? b.large : b.small;
        for (int i = 0; i < size; ++i) partition.assignment[v++] = part;
    }
    return partition;
}

// ---------------------------------------------------------------------------
// Bipartite feasibility table

std::size_t BipartiteFeasibilityTable::index(int k, int l, int g) const {
    return (static_cast<std::size_t>(k) * (n_ + 1) + l) * (max_g_ + 1) + g;
}

BipartiteFeasibilityTable::BipartiteFeasibilityTable(int n, const SizeBounds& bounds)
    : n_(n), max_g_(bounds.num_large), bounds_(bounds) {
    if (bounds.small < 2) throw std::invalid_argument("bipartite table requires small >= 2");
    table_.assign(static_cast<std::size_t>(n + 1) * (n + 1) * (max_g_ + 1), 0);
    table_[index(0, 0, 0)] = 1;
    for (int k = 0; k <= n; ++k)
        for (int l = 0; l <= n; ++l) {
            if (k + l == 0) continue;
            for (int g = 0; g <= max_g_; ++g) {
                bool value = false;
                for (int size_idx = 0; size_idx < 2 && !value; ++size_idx) {
                    const int size = size_idx == 0 ? bounds_.small : bounds_.large;
                    if (size_idx == 1 && bounds_.large == bounds_.small) break;
                    const bool is_large = size == bounds_.large && bounds_.large != bounds_.small;
                    if (is_large && g == 0) continue;
                    for (int a = 1; a < size && !value; ++a) {
                        const int b = size - a;
                        if (a > k || b < 1 || b > l) continue;
                        if (table_[index(k - a, l - b, g - (is_large ? 1 : 0))]) value = true;
                    }
                }
                table_[index(k, l, g)] = value;
            }
        }
}

bool BipartiteFeasibilityTable::feasible(int k, int l, int g) const {
    if (k < 0 || l < 0 || g < 0 || k > n_ || l > n_ || g > max_g_) return false;
    return table_[index(k, l, g)] != 0;
}

std::vector<std::tuple<int, int, bool>> BipartiteFeasibilityTable::decompose(int k, int l, int g) const {
    if (!feasible(k, l, g)) throw std::invalid_argument("decompose on infeasible cell");
    std::vector<std::tuple<int, int, bool>> chunks;
    while (k + l > 0) {
        bool advanced = false;
        for (int size_idx = 0; size_idx < 2 && !advanced; ++size_idx) {
            const int size = size_idx == 0 ? bounds_.small : bounds_.large;
            if (size_idx == 1 && bounds_.large == bounds_.small) break;
            const bool is_large = size == bounds_.large && bounds_.large != bounds_.small;
            if (is_large && g == 0) continue;
            for (int a = 1; a < size && !advanced; ++a) {
                const int b = size - a;
                if (a > k || b < 1 || b > l) continue;
                if (feasible(k - a, l - b, g - (is_large ? 1 : 0))) {
                    chunks.emplace_back(a, b, is_large);
                    k -= a;
                    l -= b;
                    if (is_large) --g;
                    advanced = true;
                }
            }
        }
        if (!advanced) throw std::logic_error("bipartite table decompose stuck");
    }
    return chunks;
}

// ---------------------------------------------------------------------------
// Co-graph DP

namespace {

// Matching route for large <= 2: n - p parts of size two plus singletons.
std::optional<Partition> solve_by_matching(const Instance& instance) {
    const int n = instance.graph.vertex_count();
    const int pairs_needed = n - instance.parts;
    auto mate = general_max_matching(instance.graph);
    if (matching_size(mate) < pairs_needed) return std::nullopt;
    Partition partition;
    partition.assignment.assign(n, -1);
    int part = 0, pairs = 0;
    for (int v = 0; v < n && pairs < pairs_needed; ++v) {
        if (mate[v] > v && partition.assignment[v] == -1) {
            partition.assignment[v] = partition.assignment[mate[v]] = part++;
            ++pairs;
        }
    }
    for (int v = 0; v < n; ++v)
        if (partition.assignment[v] == -1) partition.assignment[v] = part++;
    return partition;
}

struct CographChoice {
    // Union node: (left_uncovered, left_g). Join node adds the K-cover data.
    int ua = 0, ga = 0;
    int ub = 0, gb = 0;
    int k = 0, l = 0, gk = 0;
};

struct CographTables {
    // Per co-tree node: (uncovered, g) -> reachable + choice.
    std::vector<std::vector<std::vector<char>>> reach;
    std::vector<std::vector<std::vector<CographChoice>>> choice;
};

struct CographWitness {
    std::vector<std::vector<int>> parts;
    std::vector<int> uncovered;  // ascending
};

CographWitness realize_cograph(const CoTree& tree, const CographTables& tables,
                               const BipartiteFeasibilityTable& ktable, int node, int uncovered, int g) {
    const CoTreeNode& tn = tree.nodes[node];
    if (tn.kind == CoTreeKind::kLeaf) return {{}, {tn.vertex}};

    const CographChoice& ch = tables.choice[node][uncovered][g];
    CographWitness left = realize_cograph(tree, tables, ktable, tn.left, ch.ua, ch.ga);
    CographWitness right = realize_cograph(tree, tables, ktable, tn.right, ch.ub, ch.gb);
    CographWitness out;
    out.parts = std::move(left.parts);
    out.parts.insert(out.parts.end(), right.parts.begin(), right.parts.end());

    if (tn.kind == CoTreeKind::kUnion) {
        out.uncovered = std::move(left.uncovered);
        out.uncovered.insert(out.uncovered.end(), right.uncovered.begin(), right.uncovered.end());
        std::sort(out.uncovered.begin(), out.uncovered.end());
        return out;
    }

    // Join: the first k left / l right uncovered vertices (ascending) are
    // grouped into cross parts following the K-table decomposition; any
    // choice works because all cross pairs are adjacent.
    std::sort(left.uncovered.begin(), left.uncovered.end());
    std::sort(right.uncovered.begin(), right.uncovered.end());
    std::size_t li = 0, ri = 0;
    for (const auto& [a, b, is_large] : ktable.decompose(ch.k, ch.l, ch.gk)) {
        (void)is_large;
        std::vector<int> part;
        for (int i = 0; i < a; ++i) part.push_back(left.uncovered[li++]);
        for (int i = 0; i < b; ++i) part.push_back(right.uncovered[ri++]);
        std::sort(part.begin(), part.end());
        out.parts.push_back(std::move(part));
    }
    for (; li < left.uncovered.size(); ++li) out.uncovered.push_back(left.uncovered[li]);
    for (; ri < right.uncovered.size(); ++ri) out.uncovered.push_back(right.uncovered[ri]);
    std::sort(out.uncovered.begin(), out.uncovered.end());
    return out;
}

}  // namespace

std::optional<Partition> solve_cograph(const Instance& instance, const CoTree& cotree, SolveStats* stats) {
    const Graph& graph = instance.graph;
    const int n = graph.vertex_count();
    if (!(cotree.evaluate(n) == graph)) throw std::invalid_argument("co-tree does not evaluate to the graph");

    const SizeBounds bounds = instance.bounds();
    if (bounds.large <= 2) return solve_by_matching(instance);

    const int nl = bounds.num_large;
    BipartiteFeasibilityTable ktable(n, bounds);

    CographTables tables;
    tables.reach.resize(cotree.nodes.size());
    tables.choice.resize(cotree.nodes.size());

    // Children precede parents in the node array by construction.
    for (int idx = 0; idx < static_cast<int>(cotree.nodes.size()); ++idx) {
        const CoTreeNode& node = cotree.nodes[idx];
        const int size = static_cast<int>(node.vertices.size());
        tables.reach[idx].assign(size + 1, std::vector<char>(nl + 1, 0));
        tables.choice[idx].assign(size + 1, std::vector<CographChoice>(nl + 1));
        if (node.kind == CoTreeKind::kLeaf) {
            tables.reach[idx][1][0] = 1;
            continue;
        }
        const auto& ra = tables.reach[node.left];
        const auto& rb = tables.reach[node.right];
        const int sa = static_cast<int>(cotree.nodes[node.left].vertices.size());
        const int sb = static_cast<int>(cotree.nodes[node.right].vertices.size());
        for (int ua = 0; ua <= sa; ++ua)
            for (int ga = 0; ga <= nl; ++ga) {
                if (!ra[ua][ga]) continue;
                for (int ub = 0; ub <= sb; ++ub)
                    for (int gb = 0; ga + gb <= nl; ++gb) {
                        if (!rb[ub][gb]) continue;
                        if (node.kind == CoTreeKind::kUnion) {
                            if (!tables.reach[idx][ua + ub][ga + gb]) {
                                tables.reach[idx][ua + ub][ga + gb] = 1;
                                tables.choice[idx][ua + ub][ga + gb] = {ua, ga, ub, gb, 0, 0, 0};
                            }
                            continue;
                        }
                        // Join: cover k left and l right uncovered vertices now.
                        for (int k = 0; k <= ua; ++k)
                            for (int l = 0; l <= ub; ++l) {
                                if ((k == 0) != (l == 0)) continue;
                                for (int gk = 0; ga + gb + gk <= nl; ++gk) {
                                    if (!(k == 0 && l == 0 && gk == 0) && !ktable.feasible(k, l, gk)) continue;
                                    const int u = ua - k + ub - l;
                                    const int g = ga + gb + gk;
                                    if (!tables.reach[idx][u][g]) {
                                        tables.reach[idx][u][g] = 1;
                                        tables.choice[idx][u][g] = {ua, ga, ub, gb, k, l, gk};
                                    }
                                    if (k == 0 && l == 0) break;  // only gk == 0 applies
                                }
                            }
                    }
            }
        if (stats) {
            for (int u = 0; u <= size; ++u)
                for (int g = 0; g <= nl; ++g) stats->dp_states += tables.reach[idx][u][g] != 0;
        }
    }

    if (!tables.reach[cotree.root][0][nl]) return std::nullopt;

    CographWitness witness = realize_cograph(cotree, tables, ktable, cotree.root, 0, nl);
    Partition partition;
    partition.assignment.assign(n, -1);
    for (std::size_t part = 0; part < witness.parts.size(); ++part)
        for (int v : witness.parts[part]) partition.assignment[v] = static_cast<int>(part);
    return partition;
}

// ---------------------------------------------------------------------------
// Tree-width DP

namespace {

struct TwState {
    std::vector<int> block_of;  // per bag position, first-occurrence numbering
    std::vector<int> sigma;     // past vertices per block
    int g = 0;

    bool operator==(const TwState& other) const {
        return g == other.g && block_of == other.block_of && sigma == other.sigma;
    }
};

struct TwStateHash {
    std::size_t operator()(const TwState& s) const {
        std::size_t h = 1469598103934665603ull;
        auto mix = [&h](std::size_t x) {
            h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        };
        mix(s.g);
        for (int b : s.block_of) mix(b);
        mix(0xffff);
        for (int v : s.sigma) mix(v);
        return h;
    }
};

struct TwBackRef {
    int child_state = -1;       // introduce/forget
    int left_state = -1;        // join
    int right_state = -1;
    bool closed_large = false;  // forget-close bookkeeping (diagnostics only)
};

struct TwTable {
    std::unordered_map<TwState, int, TwStateHash> index;
    std::vector<TwState> states;
    std::vector<TwBackRef> back;

    int insert(const TwState& s, const TwBackRef& ref) {
        auto [it, fresh] = index.emplace(s, static_cast<int>(states.size()));
        if (fresh) {
            states.push_back(s);
            back.push_back(ref);
        }
        return it->second;
    }
};

// Renumbers blocks into first-occurrence order and drops empty blocks.
TwState canonicalize(const std::vector<int>& raw_block_of, const std::vector<int>& raw_sigma, int g) {
    TwState s;
    s.g = g;
    s.block_of.assign(raw_block_of.size(), -1);
    std::vector<int> remap(raw_sigma.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < raw_block_of.size(); ++i) {
        int b = raw_block_of[i];
        if (remap[b] == -1) {
            remap[b] = next++;
            s.sigma.push_back(raw_sigma[b]);
        }
        s.block_of[i] = remap[b];
    }
    return s;
}

class TreewidthSolver {
public:
    TreewidthSolver(const Instance& instance, const NiceTreeDecomposition& decomposition,
                    const SearchLimits& limits, SolveStats* stats)
        : graph_(instance.graph),
          decomposition_(decomposition),
          bounds_(instance.bounds()),
          guard_(limits),
          stats_(stats) {}

    std::optional<Partition> run() {
        const auto order = decomposition_.topological_order();
        tables_.resize(decomposition_.nodes.size());
        for (int x : order) process(x);

        const TwTable& root = tables_[decomposition_.root];
        TwState accept;
        accept.g = bounds_.num_large;
        auto it = root.index.find(accept);
        if (it == root.index.end()) return std::nullopt;

        assignment_.assign(graph_.vertex_count(), -1);
        next_part_ = 0;
        reconstruct(decomposition_.root, it->second, {});
        Partition partition{assignment_};
        return partition;
    }

private:
    void process(int x) {
        const DecompositionNode& node = decomposition_.nodes[x];
        TwTable& table = tables_[x];
        switch (node.kind) {
            case NodeKind::kLeaf: {
                table.insert(TwState{}, TwBackRef{});
                break;
            }
            case NodeKind::kIntroduce: process_introduce(x); break;
            case NodeKind::kForget: process_forget(x); break;
            case NodeKind::kJoin: process_join(x); break;
        }
        if (stats_) {
            stats_->dp_states += table.states.size();
            stats_->dp_states_peak = std::max<std::uint64_t>(stats_->dp_states_peak, table.states.size());
        }
    }

    void process_introduce(int x) {
        const DecompositionNode& node = decomposition_.nodes[x];
        const int child = node.children[0];
        const auto& child_bag = decomposition_.nodes[child].bag;
        const int v = node.vertex;
        const int pos_v =
            static_cast<int>(std::lower_bound(node.bag.begin(), node.bag.end(), v) - node.bag.begin());

        // Bag positions in the parent for each child position.
        std::vector<int> child_to_parent(child_bag.size());
        for (std::size_t i = 0; i < child_bag.size(); ++i)
            child_to_parent[i] = static_cast<int>(
                std::lower_bound(node.bag.begin(), node.bag.end(), child_bag[i]) - node.bag.begin());

        std::vector<char> neighbor(child_bag.size(), 0);
        for (std::size_t i = 0; i < child_bag.size(); ++i)
            if (graph_.has_edge(v, child_bag[i])) neighbor[i] = 1;

        TwTable& table = tables_[x];
        const TwTable& ctable = tables_[child];
        for (int ci = 0; ci < static_cast<int>(ctable.states.size()); ++ci) {
            guard_.tick();
            const TwState& cs = ctable.states[ci];
            const int blocks = static_cast<int>(cs.sigma.size());

            // Blocks eligible for merging through v: those with a bag
            // neighbour of v.
            std::vector<int> eligible;
            std::vector<char> is_eligible(blocks, 0);
            for (std::size_t i = 0; i < child_bag.size(); ++i)
                if (neighbor[i] && !is_eligible[cs.block_of[i]]) {
                    is_eligible[cs.block_of[i]] = 1;
                    eligible.push_back(cs.block_of[i]);
                }

            std::vector<int> block_sizes(blocks, 0);
            for (std::size_t i = 0; i < child_bag.size(); ++i) ++block_sizes[cs.block_of[i]];

            for (unsigned mask = 0; mask < (1u << eligible.size()); ++mask) {
                int new_size = 1, new_sigma = 0;
                for (std::size_t e = 0; e < eligible.size(); ++e)
                    if (mask & (1u << e)) {
                        new_size += block_sizes[eligible[e]];
                        new_sigma += cs.sigma[eligible[e]];
                    }
                if (new_size + new_sigma > bounds_.large) continue;

                std::vector<int> raw_block(node.bag.size());
                std::vector<int> raw_sigma = cs.sigma;
                const int merged_id = blocks;  // temporary id for the merged block
                raw_sigma.push_back(new_sigma);
                std::vector<char> merged(blocks, 0);
                for (std::size_t e = 0; e < eligible.size(); ++e)
                    if (mask & (1u << e)) merged[eligible[e]] = 1;
                for (std::size_t i = 0; i < child_bag.size(); ++i) {
                    int b = cs.block_of[i];
                    raw_block[child_to_parent[i]] = merged[b] ? merged_id : b;
                }
                raw_block[pos_v] = merged_id;
                table.insert(canonicalize(raw_block, raw_sigma, cs.g), TwBackRef{ci, -1, -1, false});
            }
        }
    }

    void process_forget(int x) {
        const DecompositionNode& node = decomposition_.nodes[x];
        const int child = node.children[0];
        const auto& child_bag = decomposition_.nodes[child].bag;
        const int v = node.vertex;
        const int pos_v =
            static_cast<int>(std::lower_bound(child_bag.begin(), child_bag.end(), v) - child_bag.begin());

        TwTable& table = tables_[x];
        const TwTable& ctable = tables_[child];
        for (int ci = 0; ci < static_cast<int>(ctable.states.size()); ++ci) {
            guard_.tick();
            const TwState& cs = ctable.states[ci];
            const int vb = cs.block_of[pos_v];
            int block_size = 0;
            for (int b : cs.block_of)
                if (b == vb) ++block_size;

            if (block_size > 1) {
                // Keep the part opened; v becomes a past vertex.
                std::vector<int> raw_block;
                raw_block.reserve(child_bag.size() - 1);
                for (std::size_t i = 0; i < child_bag.size(); ++i)
                    if (static_cast<int>(i) != pos_v) raw_block.push_back(cs.block_of[i]);
                std::vector<int> raw_sigma = cs.sigma;
                raw_sigma[vb] += 1;
                table.insert(canonicalize(raw_block, raw_sigma, cs.g), TwBackRef{ci, -1, -1, false});
            } else {
                // v is the last bag vertex of its part: close it.
                const int size = cs.sigma[vb] + 1;
                const bool is_large = size == bounds_.large && bounds_.large != bounds_.small;
                if (size != bounds_.small && size != bounds_.large) continue;
                if (is_large && cs.g + 1 > bounds_.num_large) continue;
                std::vector<int> raw_block;
                std::vector<int> raw_sigma;
                std::vector<int> remap(cs.sigma.size(), -1);
                for (std::size_t i = 0; i < child_bag.size(); ++i) {
                    if (static_cast<int>(i) == pos_v) continue;
                    int b = cs.block_of[i];
                    if (remap[b] == -1) {
                        remap[b] = static_cast<int>(raw_sigma.size());
                        raw_sigma.push_back(cs.sigma[b]);
                    }
                    raw_block.push_back(remap[b]);
                }
                table.insert(canonicalize(raw_block, raw_sigma, cs.g + (is_large ? 1 : 0)),
                             TwBackRef{ci, -1, -1, is_large});
            }
        }
    }

    void process_join(int x) {
        const DecompositionNode& node = decomposition_.nodes[x];
        const int left = node.children[0], right = node.children[1];
        const auto& bag = node.bag;
        TwTable& table = tables_[x];
        const TwTable& lt = tables_[left];
        const TwTable& rt = tables_[right];

        for (int li = 0; li < static_cast<int>(lt.states.size()); ++li) {
            const TwState& ls = lt.states[li];
            for (int ri = 0; ri < static_cast<int>(rt.states.size()); ++ri) {
                guard_.tick();
                const TwState& rs = rt.states[ri];
                if (ls.g + rs.g > bounds_.num_large) continue;

                // Merge the two bag partitions: blocks overlap on shared
                // vertices, so take connected components of the union.
                const int nl_blocks = static_cast<int>(ls.sigma.size());
                const int nr_blocks = static_cast<int>(rs.sigma.size());
                std::vector<int> uf(nl_blocks + nr_blocks);
                std::iota(uf.begin(), uf.end(), 0);
                std::function<int(int)> find = [&](int a) {
                    while (uf[a] != a) a = uf[a] = uf[uf[a]];
                    return a;
                };
                for (std::size_t i = 0; i < bag.size(); ++i) {
                    int a = find(ls.block_of[i]);
                    int b = find(nl_blocks + rs.block_of[i]);
                    if (a != b) uf[a] = b;
                }
                std::vector<int> sigma_sum(nl_blocks + nr_blocks, 0);
                std::vector<int> size_sum(nl_blocks + nr_blocks, 0);
                for (int b = 0; b < nl_blocks; ++b) sigma_sum[find(b)] += ls.sigma[b];
                for (int b = 0; b < nr_blocks; ++b) sigma_sum[find(nl_blocks + b)] += rs.sigma[b];
                for (std::size_t i = 0; i < bag.size(); ++i) ++size_sum[find(ls.block_of[i])];

                bool ok = true;
                for (int b = 0; b < nl_blocks + nr_blocks && ok; ++b)
                    if (find(b) == b && size_sum[b] + sigma_sum[b] > bounds_.large && size_sum[b] > 0) ok = false;
                if (!ok) continue;

                std::vector<int> raw_block(bag.size());
                std::vector<int> root_to_id(nl_blocks + nr_blocks, -1);
                std::vector<int> raw_sigma;
                for (std::size_t i = 0; i < bag.size(); ++i) {
                    int r = find(ls.block_of[i]);
                    if (root_to_id[r] == -1) {
                        root_to_id[r] = static_cast<int>(raw_sigma.size());
                        raw_sigma.push_back(sigma_sum[r]);
                    }
                    raw_block[i] = root_to_id[r];
                }
                table.insert(canonicalize(raw_block, raw_sigma, ls.g + rs.g), TwBackRef{-1, li, ri, false});
            }
        }
    }

    // Maps each child block to the parent part id through a shared vertex.
    std::vector<int> map_child_pids(const std::vector<int>& child_bag, const TwState& cs,
                                    const std::vector<int>& parent_bag, const TwState& ps,
                                    const std::vector<int>& parent_pids, int skip_vertex) {
        std::vector<int> child_pids(cs.sigma.size(), -1);
        for (std::size_t i = 0; i < child_bag.size(); ++i) {
            if (child_bag[i] == skip_vertex) continue;
            int pos = static_cast<int>(
                std::lower_bound(parent_bag.begin(), parent_bag.end(), child_bag[i]) - parent_bag.begin());
            child_pids[cs.block_of[i]] = parent_pids[ps.block_of[pos]];
        }
        return child_pids;
    }

    void reconstruct(int x, int state_idx, const std::vector<int>& pids) {
        const DecompositionNode& node = decomposition_.nodes[x];
        const TwTable& table = tables_[x];
        const TwState& s = table.states[state_idx];
        const TwBackRef& ref = table.back[state_idx];
        switch (node.kind) {
            case NodeKind::kLeaf: return;
            case NodeKind::kIntroduce: {
                const int child = node.children[0];
                const auto& child_bag = decomposition_.nodes[child].bag;
                const TwState& cs = tables_[child].states[ref.child_state];
                auto child_pids = map_child_pids(child_bag, cs, node.bag, s, pids, -1);
                reconstruct(child, ref.child_state, child_pids);
                return;
            }
            case NodeKind::kForget: {
                const int child = node.children[0];
                const auto& child_bag = decomposition_.nodes[child].bag;
                const TwState& cs = tables_[child].states[ref.child_state];
                const int pos_v = static_cast<int>(
                    std::lower_bound(child_bag.begin(), child_bag.end(), node.vertex) - child_bag.begin());
                const int vb = cs.block_of[pos_v];
                auto child_pids = map_child_pids(child_bag, cs, node.bag, s, pids, node.vertex);
                if (child_pids[vb] == -1) child_pids[vb] = next_part_++;  // part closes here
                assignment_[node.vertex] = child_pids[vb];
                reconstruct(child, ref.child_state, child_pids);
                return;
            }
            case NodeKind::kJoin: {
                for (int side = 0; side < 2; ++side) {
                    const int child = node.children[side];
                    const int cstate = side == 0 ? ref.left_state : ref.right_state;
                    const auto& child_bag = decomposition_.nodes[child].bag;
                    const TwState& cs = tables_[child].states[cstate];
                    auto child_pids = map_child_pids(child_bag, cs, node.bag, s, pids, -1);
                    reconstruct(child, cstate, child_pids);
                }
                return;
            }
        }
    }

    const Graph& graph_;
    const NiceTreeDecomposition& decomposition_;
    SizeBounds bounds_;
    BudgetGuard guard_;
    SolveStats* stats_;

    std::vector<TwTable> tables_;
    std::vector<int> assignment_;
    int next_part_ = 0;
};

}  // namespace

std::optional<Partition> solve_treewidth(const Instance& instance, const NiceTreeDecomposition& decomposition,
                                         const SearchLimits& limits, SolveStats* stats) {
    if (auto problem = decomposition.validate(instance.graph))
        throw std::invalid_argument("invalid decomposition: " + *problem);
    TreewidthSolver solver(instance, decomposition, limits, stats);
    return solver.run();
}

// ---------------------------------------------------------------------------
// Distance to clique

namespace {

struct SiblingGroup {
    std::vector<int> label;     // neighbourhood inside the modulator (sorted)
    std::vector<int> vertices;  // clique vertices carrying that label
};

}  // namespace

std::optional<Partition> solve_distance_to_clique(const Instance& instance, const std::vector<int>& modulator,
                                                  const SearchLimits& limits, SolveStats* stats) {
    const Graph& graph = instance.graph;
    const int n = graph.vertex_count();
    if (!family_member(graph, ModulatorFamily::kToClique, modulator))
        throw std::invalid_argument("modulator does not leave a clique");
    const SizeBounds bounds = instance.bounds();
    const int p = instance.parts;
    const int k = static_cast<int>(modulator.size());
    BudgetGuard guard(limits);

    std::vector<char> in_mod(n, 0);
    for (int v : modulator) in_mod[v] = 1;
    std::vector<int> clique;
    for (int v = 0; v < n; ++v)
        if (!in_mod[v]) clique.push_back(v);

    // Group clique vertices by their modulator neighbourhood; members of a
    // group are mutual siblings and interchangeable.
    std::map<std::vector<int>, std::vector<int>> by_label;
    for (int v : clique) {
        std::vector<int> label;
        for (int w : graph.neighbors(v))
            if (in_mod[w]) label.push_back(w);
        by_label[label].push_back(v);
    }
    std::vector<SiblingGroup> groups;
    for (auto& [label, vertices] : by_label) groups.push_back({label, vertices});

    std::optional<Partition> result;

    auto try_partition = [&](const std::vector<int>& block_of, int q) -> bool {
        guard.tick();
        if (q > p) return true;  // more modulator parts than parts overall
        std::vector<std::vector<int>> blocks(q);
        for (int i = 0; i < k; ++i) blocks[block_of[i]].push_back(modulator[i]);
        for (const auto& b : blocks)
            if (static_cast<int>(b.size()) > bounds.large) return true;

        // Components of each block inside the modulator.
        std::vector<std::vector<std::vector<int>>> comps(q);
        for (int i = 0; i < q; ++i) comps[i] = graph.components_within(blocks[i]);

        const int max_large_blocks = std::min(q, bounds.num_large);
        for (int large_mask = 0; large_mask < (1 << q); ++large_mask) {
            guard.tick();
            int q_large = std::popcount(static_cast<unsigned>(large_mask));
            if (bounds.num_large == 0 && large_mask != 0) break;
            if (q_large > max_large_blocks) continue;
            if (q - q_large > p - bounds.num_large) continue;

            std::vector<int> need(q);
            bool viable = true;
            long long total_need = 0;
            for (int i = 0; i < q && viable; ++i) {
                int target = (large_mask >> i) & 1 ? bounds.large : bounds.small;
                need[i] = target - static_cast<int>(blocks[i].size());
                if (need[i] < 0) viable = false;
                if (need[i] == 0 && comps[i].size() != 1) viable = false;
                total_need += need[i];
            }
            if (!viable || total_need > static_cast<long long>(clique.size())) continue;

            // Resolve the connection demands: every modulator component of a
            // block needs a chosen sibling-group vertex adjacent to it;
            // chosen groups supply one vertex each and fillers are free.
            std::vector<int> stock(groups.size());
            for (std::size_t g = 0; g < groups.size(); ++g) stock[g] = static_cast<int>(groups[g].vertices.size());
            std::vector<std::vector<int>> chosen(q);  // group indices per block

            std::function<bool(int, int)> cover_block;
            std::function<bool(int)> cover_all = [&](int block) -> bool {
                if (block == q) return true;
                if (need[block] == 0) return cover_all(block + 1);
                return cover_block(block, 0);
            };
            cover_block = [&](int block, int comp_idx) -> bool {
                guard.tick();
                if (comp_idx == static_cast<int>(comps[block].size())) return cover_all(block + 1);
                const auto& comp = comps[block][comp_idx];
                auto covers = [&](int g) {
                    for (int u : groups[g].label)
                        if (std::binary_search(comp.begin(), comp.end(), u)) return true;
                    return false;
                };
                for (int g : chosen[block])
                    if (covers(g)) return cover_block(block, comp_idx + 1);
                if (static_cast<int>(chosen[block].size()) == need[block]) return false;
                for (int g = 0; g < static_cast<int>(groups.size()); ++g) {
                    if (stock[g] == 0 || !covers(g)) continue;
                    bool already = std::find(chosen[block].begin(), chosen[block].end(), g) != chosen[block].end();
                    if (already) continue;
                    chosen[block].push_back(g);
                    --stock[g];
                    if (cover_block(block, comp_idx + 1)) return true;
                    ++stock[g];
                    chosen[block].pop_back();
                }
                return false;
            };
            if (!cover_all(0)) continue;

            // Materialize: first reserve one representative per chosen group
            // for every block, then ascending fillers, then the leftover
            // clique split by index order.
            Partition partition;
            partition.assignment.assign(n, -1);
            std::vector<std::vector<int>> group_avail;
            for (const auto& g : groups) group_avail.push_back(g.vertices);
            std::vector<int> taken(q, 0);
            for (int i = 0; i < q; ++i) {
                for (int v : blocks[i]) partition.assignment[v] = i;
                for (int g : chosen[i]) {
                    int v = group_avail[g].front();
                    group_avail[g].erase(group_avail[g].begin());
                    partition.assignment[v] = i;
                    ++taken[i];
                }
            }
            for (int i = 0; i < q; ++i) {
                for (int v : clique) {
                    if (taken[i] == need[i]) break;
                    if (partition.assignment[v] != -1) continue;
                    partition.assignment[v] = i;
                    ++taken[i];
                }
            }
            // Remaining clique vertices form the pure-clique parts.
            int part = q;
            int rem_large = bounds.num_large - q_large;
            std::vector<int> rest;
            for (int v : clique)
                if (partition.assignment[v] == -1) rest.push_back(v);
            std::size_t at = 0;
            while (at < rest.size()) {
                int size = rem_large > 0 ? bounds.large : bounds.small;
                if (rem_large > 0) --rem_large;
                for (int i = 0; i < size; ++i) partition.assignment[rest[at++]] = part;
                ++part;
            }
            if (part != p) continue;  // arithmetic mismatch; try next labeling

            result = partition;
            return false;  // stop enumeration
        }
        return true;
    };

    enumerate_set_partitions(k, std::min(k, p), try_partition);
    if (stats) stats->search_nodes += guard.nodes();
    if (result && !verify_partition(instance, *result).valid)
        throw std::logic_error("distance-to-clique produced an invalid partition");
    return result;
}

// ---------------------------------------------------------------------------
// Distance to cluster

namespace {

struct CliqueClass {
    int clique = 0;
    std::vector<int> label;     // modulator neighbourhood
    std::vector<int> vertices;  // ascending
};

struct ClusterContext {
    const Graph* graph;
    SizeBounds bounds;
    int p = 0, q = 0, n = 0;
    std::vector<std::vector<int>> blocks;       // modulator vertex sets
    std::vector<std::vector<int>> cliques;      // vertex sets
    std::vector<CliqueClass> classes;           // twin classes across cliques
    std::vector<std::vector<int>> class_of_clique;  // clique -> class indices
};

struct ClusterDpKey {
    std::vector<int> sizes;
    int g = 0;
    bool operator==(const ClusterDpKey& o) const { return g == o.g && sizes == o.sizes; }
};
struct ClusterDpKeyHash {
    std::size_t operator()(const ClusterDpKey& k) const {
        std::size_t h = 14695981039346656037ull;
        for (int s : k.sizes) h = (h ^ s) * 1099511628211ull;
        return (h ^ k.g) * 1099511628211ull;
    }
};

struct ClusterMove {
    std::vector<int> donations;          // per block
    std::vector<int> matched_class;      // per block, -1 when not matched
    int internal_large = 0, internal_small = 0;
    int prev_index = -1;
};

}  // namespace

std::optional<Partition> solve_cluster_modulator(const Instance& instance, const std::vector<int>& modulator,
                                                 const SearchLimits& limits, SolveStats* stats) {
    const Graph& graph = instance.graph;
    const int n = graph.vertex_count();
    if (!family_member(graph, ModulatorFamily::kToCluster, modulator))
        throw std::invalid_argument("modulator does not leave a cluster graph");
    const SizeBounds bounds = instance.bounds();
    const int p = instance.parts;
    const int k = static_cast<int>(modulator.size());
    BudgetGuard guard(limits);

    std::vector<char> in_mod(n, 0);
    for (int v : modulator) in_mod[v] = 1;
    std::vector<int> rest;
    for (int v = 0; v < n; ++v)
        if (!in_mod[v]) rest.push_back(v);

    ClusterContext ctx;
    ctx.graph = &graph;
    ctx.bounds = bounds;
    ctx.p = p;
    ctx.n = n;
    ctx.cliques = graph.components_within(rest);
    const int r = static_cast<int>(ctx.cliques.size());

    // Twin classes inside each clique, keyed by modulator neighbourhood.
    ctx.class_of_clique.resize(r);
    for (int c = 0; c < r; ++c) {
        std::map<std::vector<int>, std::vector<int>> by_label;
        for (int v : ctx.cliques[c]) {
            std::vector<int> label;
            for (int w : graph.neighbors(v))
                if (in_mod[w]) label.push_back(w);
            by_label[label].push_back(v);
        }
        for (auto& [label, vertices] : by_label) {
            ctx.class_of_clique[c].push_back(static_cast<int>(ctx.classes.size()));
            ctx.classes.push_back({c, label, vertices});
        }
    }

    if (k == 0) {
        // Pure cluster graph: connected instances are single cliques.
        if (r == 1) return solve_clique(instance);
    }

    std::optional<Partition> result;

    // The DP over cliques for a fixed block structure. base_sizes include
    // bridge vertices; presence marks blocks with a bridge vertex per clique.
    auto run_dp = [&](const std::vector<int>& base_sizes, const std::vector<std::vector<char>>& presence,
                      const std::vector<int>& class_used, const std::vector<std::vector<int>>& bridge_vertices)
        -> bool {
        const int q = ctx.q;
        std::vector<std::unordered_map<ClusterDpKey, int, ClusterDpKeyHash>> layer_index(r + 1);
        std::vector<std::vector<std::pair<ClusterDpKey, ClusterMove>>> layers(r + 1);

        ClusterDpKey start{base_sizes, 0};
        layer_index[0].emplace(start, 0);
        layers[0].push_back({start, ClusterMove{}});

        for (int c = 0; c < r; ++c) {
            // Remaining vertices of clique c per class after bridges.
            std::vector<int> class_remaining;
            int remaining_total = 0;
            for (int cls : ctx.class_of_clique[c]) {
                int left = static_cast<int>(ctx.classes[cls].vertices.size()) - class_used[cls];
                class_remaining.push_back(left);
                remaining_total += left;
            }

            for (int si = 0; si < static_cast<int>(layers[c].size()); ++si) {
                guard.tick();
                const ClusterDpKey key = layers[c][si].first;

                // Enumerate donations per block with total <= remaining.
                std::vector<int> donation(q, 0);
                std::function<void(int, int)> enumerate = [&](int block, int used) {
                    guard.tick();
                    if (block == q) {
                        const int leftover = remaining_total - used;
                        // Internal parts cover the leftover exactly.
                        for (int y = 0;; ++y) {
                            long long rem = leftover - static_cast<long long>(y) * bounds.large;
                            if (rem < 0) break;
                            if (bounds.large == bounds.small && y > 0) break;
                            if (key.g + y > bounds.num_large) break;
                            if (rem % bounds.small != 0) continue;
                            const int x = static_cast<int>(rem / bounds.small);

                            // Attachment: blocks donating without presence in
                            // this clique need a matching into their
                            // neighbour classes.
                            std::vector<int> needy;
                            for (int b = 0; b < q; ++b)
                                if (donation[b] > 0 && !presence[b][c]) needy.push_back(b);
                            std::vector<int> matched_class(q, -1);
                            if (!needy.empty()) {
                                // Kuhn matching blocks -> classes with stock.
                                std::vector<int> stock = class_remaining;
                                const auto& cls_ids = ctx.class_of_clique[c];
                                std::vector<std::vector<int>> options(needy.size());
                                for (std::size_t i = 0; i < needy.size(); ++i) {
                                    for (std::size_t j = 0; j < cls_ids.size(); ++j) {
                                        const auto& label = ctx.classes[cls_ids[j]].label;
                                        bool adj = false;
                                        for (int u : ctx.blocks[needy[i]])
                                            if (std::binary_search(label.begin(), label.end(), u)) {
                                                adj = true;
                                                break;
                                            }
                                        if (adj) options[i].push_back(static_cast<int>(j));
                                    }
                                }
                                // Capacity-aware greedy augmenting search.
                                std::vector<int> use_count(cls_ids.size(), 0);
                                std::function<bool(std::size_t, std::vector<char>&)> augment =
                                    [&](std::size_t i, std::vector<char>& visited) -> bool {
                                    for (int j : options[i]) {
                                        if (visited[j]) continue;
                                        visited[j] = 1;
                                        if (use_count[j] < stock[j]) {
                                            ++use_count[j];
                                            matched_class[needy[i]] = j;
                                            return true;
                                        }
                                    }
                                    // All candidate classes saturated: try to
                                    // re-route one of their users.
                                    for (int j : options[i]) {
                                        for (std::size_t i2 = 0; i2 < needy.size(); ++i2) {
                                            if (matched_class[needy[i2]] != j) continue;
                                            matched_class[needy[i2]] = -1;
                                            --use_count[j];
                                            if (augment(i2, visited)) {
                                                ++use_count[j];
                                                matched_class[needy[i]] = j;
                                                return true;
                                            }
                                            ++use_count[j];
                                            matched_class[needy[i2]] = j;
                                        }
                                    }
                                    return false;
                                };
                                bool ok = true;
                                for (std::size_t i = 0; i < needy.size() && ok; ++i) {
                                    std::vector<char> visited(cls_ids.size(), 0);
                                    ok = augment(i, visited);
                                }
                                if (!ok) continue;
                            }

                            ClusterDpKey next = key;
                            bool fits = true;
                            for (int b = 0; b < q; ++b) {
                                next.sizes[b] += donation[b];
                                if (next.sizes[b] > bounds.large) fits = false;
                            }
                            next.g = key.g + y;
                            if (!fits) continue;
                            if (layer_index[c + 1].count(next)) continue;
                            ClusterMove move;
                            move.donations = donation;
                            move.matched_class = matched_class;
                            move.internal_large = y;
                            move.internal_small = x;
                            move.prev_index = si;
                            layer_index[c + 1].emplace(next, static_cast<int>(layers[c + 1].size()));
                            layers[c + 1].push_back({next, move});
                        }
                        return;
                    }
                    for (int d = 0; used + d <= remaining_total; ++d) {
                        if (key.sizes[block] + d > bounds.large) break;
                        donation[block] = d;
                        enumerate(block + 1, used + d);
                    }
                    donation[block] = 0;
                };
                enumerate(0, 0);
            }
            if (stats) stats->dp_states += layers[c + 1].size();
        }

        // Accepting states: all block sizes in {small, large}, large counts add up.
        for (const auto& [key, move] : layers[r]) {
            (void)move;
            int large_blocks = 0;
            bool ok = true;
            for (int s : key.sizes) {
                if (s == bounds.large && bounds.large != bounds.small)
                    ++large_blocks;
                else if (s != bounds.small)
                    ok = false;
            }
            if (!ok) continue;
            if (large_blocks + key.g != bounds.num_large) continue;
            long long covered = 0;
            for (int s : key.sizes) covered += s;
            const long long internal = ctx.n - covered;  // clique vertices in pure-clique parts
            long long internal_small = internal - static_cast<long long>(key.g) * bounds.large;
            if (internal_small % bounds.small != 0) continue;
            internal_small /= bounds.small;
            if (internal_small != (ctx.p - bounds.num_large) - (ctx.q - large_blocks)) continue;

            // Walk back through the layers and materialize.
            std::vector<const ClusterMove*> moves(r);
            {
                auto it = layer_index[r].find(key);
                int idx = it->second;
                for (int c = r; c >= 1; --c) {
                    moves[c - 1] = &layers[c][idx].second;
                    idx = moves[c - 1]->prev_index;
                }
            }
            Partition partition;
            partition.assignment.assign(n, -1);
            for (int b = 0; b < ctx.q; ++b) {
                for (int v : ctx.blocks[b]) partition.assignment[v] = b;
                for (int v : bridge_vertices[b]) partition.assignment[v] = b;
            }
            int next_part = ctx.q;
            for (int c = 0; c < r; ++c) {
                const ClusterMove& mv = *moves[c];
                std::vector<int> avail;
                for (int v : ctx.cliques[c])
                    if (partition.assignment[v] == -1) avail.push_back(v);
                // Matched attachment vertices first (smallest of the class).
                for (int b = 0; b < ctx.q; ++b) {
                    int need = mv.donations[b];
                    if (need == 0) continue;
                    if (mv.matched_class[b] >= 0) {
                        int cls = ctx.class_of_clique[c][mv.matched_class[b]];
                        for (int v : ctx.classes[cls].vertices)
                            if (partition.assignment[v] == -1) {
                                partition.assignment[v] = b;
                                avail.erase(std::find(avail.begin(), avail.end(), v));
                                --need;
                                break;
                            }
                    }
                    while (need > 0) {
                        int v = avail.front();
                        avail.erase(avail.begin());
                        partition.assignment[v] = b;
                        --need;
                    }
                }
                for (int i = 0; i < mv.internal_large; ++i) {
                    for (int j = 0; j < bounds.large; ++j) {
                        partition.assignment[avail.front()] = next_part;
                        avail.erase(avail.begin());
                    }
                    ++next_part;
                }
                for (int i = 0; i < mv.internal_small; ++i) {
                    for (int j = 0; j < bounds.small; ++j) {
                        partition.assignment[avail.front()] = next_part;
                        avail.erase(avail.begin());
                    }
                    ++next_part;
                }
            }
            if (next_part != ctx.p) continue;
            if (!verify_partition(instance, partition).valid) continue;
            result = partition;
            return true;
        }
        return false;
    };

    // Bridge enumeration: connect the modulator components of each block
    // through at most two clique vertices per merge (single vertex seeing
    // both sides, or an adjacent pair inside one clique).
    auto try_blocks = [&](const std::vector<int>& block_of, int q) -> bool {
        guard.tick();
        if (q > p) return true;
        ctx.q = q;
        ctx.blocks.assign(q, {});
        for (int i = 0; i < k; ++i) ctx.blocks[block_of[i]].push_back(modulator[i]);
        for (const auto& b : ctx.blocks)
            if (static_cast<int>(b.size()) > bounds.large) return true;

        std::vector<int> class_used(ctx.classes.size(), 0);
        std::vector<std::vector<char>> presence(q, std::vector<char>(r, 0));
        std::vector<std::vector<int>> bridge_vertices(q);
        std::vector<int> base_sizes(q);
        for (int b = 0; b < q; ++b) base_sizes[b] = static_cast<int>(ctx.blocks[b].size());

        // Per block: super-components over modulator components, merged by
        // chosen bridges.
        std::function<bool(int)> solve_block;
        auto adjacency_supers = [&](const std::vector<std::vector<int>>& supers, int cls) {
            std::vector<int> touched;
            const auto& label = ctx.classes[cls].label;
            for (std::size_t s = 0; s < supers.size(); ++s)
                for (int u : supers[s])
                    if (std::binary_search(label.begin(), label.end(), u)) {
                        touched.push_back(static_cast<int>(s));
                        break;
                    }
            return touched;
        };

        std::function<bool(int, std::vector<std::vector<int>>&)> connect_block =
            [&](int b, std::vector<std::vector<int>>& supers) -> bool {
            guard.tick();
            if (supers.size() <= 1) return solve_block(b + 1);
            if (base_sizes[b] >= bounds.large) return false;  // no room for a bridge vertex

            // Merge the super-component containing the smallest vertex with
            // some other, via one vertex or an intra-clique pair.
            int target = 0;
            for (std::size_t s = 1; s < supers.size(); ++s)
                if (supers[s][0] < supers[target][0]) target = static_cast<int>(s);

            auto apply = [&](const std::vector<int>& cls_picks) -> bool {
                // Collect merged supers: target plus everything any pick sees.
                std::vector<char> gone(supers.size(), 0);
                std::vector<int> merged = supers[target];
                gone[target] = 1;
                bool hits_other = false;
                for (int cls : cls_picks)
                    for (int s : adjacency_supers(supers, cls))
                        if (!gone[s]) {
                            gone[s] = 1;
                            hits_other = true;
                            for (int u : supers[s]) merged.push_back(u);
                        }
                if (!hits_other) return false;
                std::sort(merged.begin(), merged.end());
                std::vector<std::vector<int>> next;
                next.push_back(std::move(merged));
                for (std::size_t s = 0; s < supers.size(); ++s)
                    if (!gone[s]) next.push_back(supers[s]);

                for (int cls : cls_picks) {
                    ++class_used[cls];
                    int v = ctx.classes[cls].vertices[static_cast<std::size_t>(class_used[cls]) - 1];
                    bridge_vertices[b].push_back(v);
                }
                base_sizes[b] += static_cast<int>(cls_picks.size());
                bool done = base_sizes[b] <= bounds.large && connect_block(b, next);
                for (int cls : cls_picks) {
                    --class_used[cls];
                    bridge_vertices[b].pop_back();
                }
                base_sizes[b] -= static_cast<int>(cls_picks.size());
                return done;
            };

            // Option (a): one vertex adjacent to the target super and another.
            for (int cls = 0; cls < static_cast<int>(ctx.classes.size()); ++cls) {
                if (class_used[cls] >= static_cast<int>(ctx.classes[cls].vertices.size())) continue;
                auto touched = adjacency_supers(supers, cls);
                if (touched.size() < 2) continue;
                if (std::find(touched.begin(), touched.end(), target) == touched.end()) continue;
                if (apply({cls})) return true;
            }
            // Option (b): a pair inside one clique, one side seeing the
            // target, the other a different super.
            if (base_sizes[b] + 2 <= bounds.large) {
                for (int c = 0; c < r; ++c) {
                    for (int cls1 : ctx.class_of_clique[c]) {
                        if (class_used[cls1] >= static_cast<int>(ctx.classes[cls1].vertices.size())) continue;
                        auto t1 = adjacency_supers(supers, cls1);
                        if (std::find(t1.begin(), t1.end(), target) == t1.end()) continue;
                        for (int cls2 : ctx.class_of_clique[c]) {
                            ++class_used[cls1];
                            bool room = class_used[cls2] < static_cast<int>(ctx.classes[cls2].vertices.size());
                            --class_used[cls1];
                            if (!room) continue;
                            auto t2 = adjacency_supers(supers, cls2);
                            bool other = false;
                            for (int s : t2)
                                if (s != target) other = true;
                            if (!other) continue;
                            if (apply({cls1, cls2})) return true;
                        }
                    }
                }
            }
            return false;
        };

        solve_block = [&](int b) -> bool {
            if (b == q) {
                // Recompute presence from bridge vertices (merges may have
                // stacked several cliques).
                for (int i = 0; i < q; ++i) {
                    std::fill(presence[i].begin(), presence[i].end(), 0);
                    for (int v : bridge_vertices[i])
                        for (int c = 0; c < r; ++c)
                            if (std::binary_search(ctx.cliques[c].begin(), ctx.cliques[c].end(), v))
                                presence[i][c] = 1;
                }
                return run_dp(base_sizes, presence, class_used, bridge_vertices);
            }
            auto supers = graph.components_within(ctx.blocks[b]);
            return connect_block(b, supers);
        };

        if (q == 0) {
            // No modulator: only pure-clique parts.
            return !run_dp(base_sizes, presence, class_used, bridge_vertices);
        }
        if (solve_block(0)) return false;  // found, stop enumeration
        return true;
    };

    enumerate_set_partitions(k, std::min(k, p), try_blocks);
    if (stats) stats->search_nodes += guard.nodes();
    return result;
}

}  // namespace ecp
