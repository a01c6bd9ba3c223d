#include "ecp/analyzers.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ecp {

// ---------------------------------------------------------------------------
// Neighbourhood diversity

TypePartition neighbourhood_diversity(const Graph& graph) {
    const int n = graph.vertex_count();
    TypePartition tp;
    tp.class_of.assign(n, -1);

    auto same_type = [&](int u, int v) {
        // N(u) \ {v} == N(v) \ {u}
        std::vector<int> nu, nv;
        for (int w : graph.neighbors(u))
            if (w != v) nu.push_back(w);
        for (int w : graph.neighbors(v))
            if (w != u) nv.push_back(w);
        return nu == nv;
    };

    for (int v = 0; v < n; ++v) {
        if (tp.class_of[v] != -1) continue;
        int id = static_cast<int>(tp.classes.size());
        tp.classes.push_back({v});
        tp.class_of[v] = id;
        for (int w = v + 1; w < n; ++w)
            if (tp.class_of[w] == -1 && same_type(v, w)) {
                tp.classes[id].push_back(w);
                tp.class_of[w] = id;
            }
    }

    const int d = tp.diversity();
    tp.kinds.resize(d);
    for (int i = 0; i < d; ++i) {
        const auto& cls = tp.classes[i];
        tp.kinds[i] = cls.size() >= 2 && graph.has_edge(cls[0], cls[1]) ? ClassKind::kClique
                      : cls.size() >= 2                                 ? ClassKind::kIndependent
                                                                        : ClassKind::kClique;
    }
    tp.type_adj.assign(d, std::vector<char>(d, 0));
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (graph.has_edge(tp.classes[i][0], tp.classes[j][0])) tp.type_adj[i][j] = tp.type_adj[j][i] = 1;
    return tp;
}

// ---------------------------------------------------------------------------
// Co-trees

Graph CoTree::evaluate(int n) const {
    Graph g(n);
    // Joins add all cross edges between the child vertex sets.
    for (const auto& node : nodes) {
        if (node.kind != CoTreeKind::kJoin) continue;
        for (int u : nodes[node.left].vertices)
            for (int v : nodes[node.right].vertices) g.add_edge(u, v);
    }
    return g;
}

namespace {

int build_cotree_rec(const Graph& graph, const std::vector<int>& vertices, CoTree& tree, bool& ok) {
    if (!ok) return -1;
    if (vertices.size() == 1) {
        tree.nodes.push_back({CoTreeKind::kLeaf, vertices[0], -1, -1, vertices});
        return static_cast<int>(tree.nodes.size()) - 1;
    }

    auto comps = graph.components_within(vertices);
    CoTreeKind kind;
    std::vector<std::vector<int>> groups;
    if (comps.size() >= 2) {
        kind = CoTreeKind::kUnion;
        groups = std::move(comps);
    } else {
        // Connected: split along co-components (components of the complement).
        Graph local = graph.induced(vertices);
        Graph co = local.complement();
        std::vector<int> all(vertices.size());
        std::iota(all.begin(), all.end(), 0);
        auto co_comps = co.components_within(all);
        if (co_comps.size() < 2) {
            ok = false;  // connected and co-connected on >= 2 vertices: not a co-graph
            return -1;
        }
        kind = CoTreeKind::kJoin;
        for (const auto& comp : co_comps) {
            std::vector<int> orig;
            for (int idx : comp) orig.push_back(vertices[idx]);
            std::sort(orig.begin(), orig.end());
            groups.push_back(std::move(orig));
        }
        std::sort(groups.begin(), groups.end());
    }

    // Right-fold the multi-way split into binary nodes.
    int right = build_cotree_rec(graph, groups.back(), tree, ok);
    for (int i = static_cast<int>(groups.size()) - 2; i >= 0; --i) {
        if (!ok) return -1;
        int left = build_cotree_rec(graph, groups[i], tree, ok);
        if (!ok) return -1;
        CoTreeNode node;
        node.kind = kind;
        node.left = left;
        node.right = right;
        node.vertices = tree.nodes[left].vertices;
        node.vertices.insert(node.vertices.end(), tree.nodes[right].vertices.begin(),
                             tree.nodes[right].vertices.end());
        std::sort(node.vertices.begin(), node.vertices.end());
        tree.nodes.push_back(std::move(node));
        right = static_cast<int>(tree.nodes.size()) - 1;
    }
    return right;
}

}  // namespace

std::optional<CoTree> build_cotree(const Graph& graph) {
    if (graph.vertex_count() == 0) return std::nullopt;
    std::vector<int> all(graph.vertex_count());
    std::iota(all.begin(), all.end(), 0);
    CoTree tree;
    bool ok = true;
    tree.root = build_cotree_rec(graph, all, tree, ok);
    if (!ok) return std::nullopt;
    return tree;
}

// ---------------------------------------------------------------------------
// Tree decompositions

std::vector<int> NiceTreeDecomposition::topological_order() const {
    std::vector<int> order;
    order.reserve(nodes.size());
    std::vector<int> stack = {root}, post;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        post.push_back(x);
        for (int c : nodes[x].children) stack.push_back(c);
    }
    std::reverse(post.begin(), post.end());
    return post;
}

std::optional<std::string> NiceTreeDecomposition::validate(const Graph& graph) const {
    const int n = graph.vertex_count();
    if (root < 0 || root >= static_cast<int>(nodes.size())) return "bad root";
    if (!nodes[root].bag.empty()) return "root bag not empty";

    std::vector<std::vector<int>> occurrences(n);
    for (int x = 0; x < static_cast<int>(nodes.size()); ++x) {
        const auto& node = nodes[x];
        if (!std::is_sorted(node.bag.begin(), node.bag.end())) return "bag not sorted";
        for (int v : node.bag)
            if (v < 0 || v >= n) return "bag vertex out of range";
        for (int v : node.bag) occurrences[v].push_back(x);
        switch (node.kind) {
            case NodeKind::kLeaf:
                if (!node.children.empty()) return "leaf with children";
                if (!node.bag.empty()) return "leaf bag not empty";
                break;
            case NodeKind::kIntroduce: {
                if (node.children.size() != 1) return "introduce without single child";
                const auto& child = nodes[node.children[0]].bag;
                std::vector<int> diff;
                std::set_difference(node.bag.begin(), node.bag.end(), child.begin(), child.end(),
                                    std::back_inserter(diff));
                if (diff != std::vector<int>{node.vertex}) return "introduce does not add exactly its vertex";
                if (child.size() + 1 != node.bag.size()) return "introduce bag size mismatch";
                break;
            }
            case NodeKind::kForget: {
                if (node.children.size() != 1) return "forget without single child";
                const auto& child = nodes[node.children[0]].bag;
                std::vector<int> diff;
                std::set_difference(child.begin(), child.end(), node.bag.begin(), node.bag.end(),
                                    std::back_inserter(diff));
                if (diff != std::vector<int>{node.vertex}) return "forget does not drop exactly its vertex";
                if (node.bag.size() + 1 != child.size()) return "forget bag size mismatch";
                break;
            }
            case NodeKind::kJoin: {
                if (node.children.size() != 2) return "join without two children";
                if (nodes[node.children[0]].bag != node.bag || nodes[node.children[1]].bag != node.bag)
                    return "join children bags differ";
                break;
            }
        }
    }

    // Condition 1: every vertex occurs; condition 3: occurrences connected.
    std::vector<int> parent(nodes.size(), -1);
    for (int x = 0; x < static_cast<int>(nodes.size()); ++x)
        for (int c : nodes[x].children) parent[c] = x;
    for (int v = 0; v < n; ++v) {
        if (occurrences[v].empty()) return "vertex " + std::to_string(v) + " in no bag";
        std::set<int> occ(occurrences[v].begin(), occurrences[v].end());
        // The occurrence set is connected iff exactly one occurrence node has
        // its parent outside the set.
        int roots = 0;
        for (int x : occ)
            if (parent[x] == -1 || !occ.count(parent[x])) ++roots;
        if (roots != 1) return "occurrences of vertex " + std::to_string(v) + " not connected";
    }
    // Condition 2: every edge covered by some bag.
    for (const auto& [u, v] : graph.edges()) {
        bool covered = false;
        for (int x : occurrences[u]) {
            const auto& bag = nodes[x].bag;
            if (std::binary_search(bag.begin(), bag.end(), v)) {
                covered = true;
                break;
            }
        }
        if (!covered) return "edge not covered";
    }
    // Width bookkeeping.
    int w = 0;
    for (const auto& node : nodes) w = std::max(w, static_cast<int>(node.bag.size()) - 1);
    if (w != width) return "recorded width mismatch";
    return std::nullopt;
}

namespace {

// Number of not-yet-eliminated vertices (other than v) reachable from v via
// paths internal to `eliminated` -- the bag size of v minus one when v is
// eliminated right after `eliminated`.
int reachable_count(const std::vector<std::uint32_t>& adj_mask, std::uint32_t eliminated, int v) {
    std::uint32_t comp = 1u << v;
    std::uint32_t frontier = 1u << v;
    std::uint32_t outside = 0;
    while (frontier) {
        std::uint32_t nbrs = 0;
        std::uint32_t f = frontier;
        while (f) {
            int x = std::countr_zero(f);
            f &= f - 1;
            nbrs |= adj_mask[x];
        }
        nbrs &= ~comp;
        outside |= nbrs & ~eliminated;
        frontier = nbrs & eliminated;
        comp |= frontier;
    }
    return std::popcount(outside & ~(1u << v));
}

// Exact treewidth DP over subsets (n <= 20), returning an optimal
// elimination order.
std::vector<int> exact_elimination_order(const Graph& graph, int& width) {
    const int n = graph.vertex_count();
    std::vector<std::uint32_t> adj_mask(n, 0);
    for (int v = 0; v < n; ++v)
        for (int w : graph.neighbors(v)) adj_mask[v] |= 1u << w;
    const std::uint32_t full = (1u << n) - 1;
    std::vector<std::uint8_t> f(static_cast<std::size_t>(full) + 1, 255);
    f[0] = 0;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        std::uint8_t best = 255;
        for (int v = 0; v < n; ++v) {
            if (!(mask & (1u << v))) continue;
            std::uint32_t rest = mask ^ (1u << v);
            if (f[rest] >= best) continue;
            std::uint8_t cost =
                std::max<std::uint8_t>(f[rest], static_cast<std::uint8_t>(reachable_count(adj_mask, rest, v)));
            best = std::min(best, cost);
        }
        f[mask] = best;
    }
    width = f[full];

    std::vector<int> order;
    std::uint32_t mask = full;
    while (mask) {
        for (int v = 0; v < n; ++v) {
            if (!(mask & (1u << v))) continue;
            std::uint32_t rest = mask ^ (1u << v);
            std::uint8_t cost =
                std::max<std::uint8_t>(f[rest], static_cast<std::uint8_t>(reachable_count(adj_mask, rest, v)));
            if (cost == f[mask]) {
                order.push_back(v);
                mask = rest;
                break;
            }
        }
    }
    std::reverse(order.begin(), order.end());
    return order;
}

// Min-fill greedy elimination order for larger graphs.
std::vector<int> min_fill_order(const Graph& graph) {
    const int n = graph.vertex_count();
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (const auto& [u, v] : graph.edges()) adj[u][v] = adj[v][u] = 1;
    std::vector<char> gone(n, 0);
    std::vector<int> order;
    for (int step = 0; step < n; ++step) {
        int best = -1;
        long best_fill = -1;
        for (int v = 0; v < n; ++v) {
            if (gone[v]) continue;
            std::vector<int> nb;
            for (int w = 0; w < n; ++w)
                if (!gone[w] && adj[v][w]) nb.push_back(w);
            long fill = 0;
            for (std::size_t i = 0; i < nb.size(); ++i)
                for (std::size_t j = i + 1; j < nb.size(); ++j)
                    if (!adj[nb[i]][nb[j]]) ++fill;
            if (best == -1 || fill < best_fill) {
                best = v;
                best_fill = fill;
            }
        }
        std::vector<int> nb;
        for (int w = 0; w < n; ++w)
            if (!gone[w] && adj[best][w]) nb.push_back(w);
        for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j) adj[nb[i]][nb[j]] = adj[nb[j]][nb[i]] = 1;
        gone[best] = 1;
        order.push_back(best);
    }
    return order;
}

struct RawDecomposition {
    std::vector<std::vector<int>> bags;
    std::vector<int> parent;  // -1 for the root bag
    int width = 0;
};

// Standard bag construction along an elimination order on the fill-in graph.
RawDecomposition decomposition_from_order(const Graph& graph, const std::vector<int>& order) {
    const int n = graph.vertex_count();
    std::vector<int> position(n);
    for (int i = 0; i < n; ++i) position[order[i]] = i;
    std::vector<std::set<int>> later(n);  // fill-in neighbours eliminated later
    for (const auto& [u, v] : graph.edges()) {
        if (position[u] < position[v])
            later[u].insert(v);
        else
            later[v].insert(u);
    }
    for (int i = 0; i < n; ++i) {
        int v = order[i];
        std::vector<int> nb(later[v].begin(), later[v].end());
        for (std::size_t a = 0; a < nb.size(); ++a)
            for (std::size_t b = a + 1; b < nb.size(); ++b) {
                int x = nb[a], y = nb[b];
                if (position[x] < position[y])
                    later[x].insert(y);
                else
                    later[y].insert(x);
            }
    }

    RawDecomposition raw;
    raw.bags.resize(n);
    raw.parent.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        int v = order[i];
        raw.bags[i].push_back(v);
        for (int w : later[v]) raw.bags[i].push_back(w);
        std::sort(raw.bags[i].begin(), raw.bags[i].end());
        raw.width = std::max(raw.width, static_cast<int>(raw.bags[i].size()) - 1);
        if (!later[v].empty()) {
            int first = n;
            for (int w : later[v]) first = std::min(first, position[w]);
            raw.parent[i] = first;
        } else if (i + 1 < n) {
            raw.parent[i] = i + 1;  // keep the bag tree connected
        }
    }
    return raw;
}

class Nicifier {
public:
    Nicifier(const RawDecomposition& raw, int root_bag) : raw_(raw) {
        children_.resize(raw.bags.size());
        for (int i = 0; i < static_cast<int>(raw.bags.size()); ++i)
            if (raw.parent[i] != -1) children_[raw.parent[i]].push_back(i);
        int top = build_subtree(root_bag);
        // Forget everything remaining above the root bag, ending in an empty bag.
        std::vector<int> bag = raw_.bags[root_bag];
        while (!bag.empty()) {
            int v = bag.back();
            bag.pop_back();
            top = add_node(NodeKind::kForget, v, bag, {top});
        }
        result_.root = top;
        for (const auto& node : result_.nodes)
            result_.width = std::max(result_.width, static_cast<int>(node.bag.size()) - 1);
    }

    NiceTreeDecomposition take() { return std::move(result_); }

private:
    int add_node(NodeKind kind, int vertex, std::vector<int> bag, std::vector<int> children) {
        DecompositionNode node;
        node.kind = kind;
        node.vertex = vertex;
        std::sort(bag.begin(), bag.end());
        node.bag = std::move(bag);
        node.children = std::move(children);
        result_.nodes.push_back(std::move(node));
        return static_cast<int>(result_.nodes.size()) - 1;
    }

    // Introduce-chain from the empty bag up to `target`.
    int build_leaf_chain(const std::vector<int>& target) {
        int cur = add_node(NodeKind::kLeaf, -1, {}, {});
        std::vector<int> bag;
        for (int v : target) {
            bag.push_back(v);
            cur = add_node(NodeKind::kIntroduce, v, bag, {cur});
        }
        return cur;
    }

    // Bridge from a subtree whose top bag is `from` to bag `to`:
    // forget from\to, then introduce to\from.
    int bridge(int node, const std::vector<int>& from, const std::vector<int>& to) {
        std::vector<int> bag = from;
        for (int v : from)
            if (!std::binary_search(to.begin(), to.end(), v)) {
                bag.erase(std::find(bag.begin(), bag.end(), v));
                node = add_node(NodeKind::kForget, v, bag, {node});
            }
        for (int v : to)
            if (!std::binary_search(from.begin(), from.end(), v)) {
                bag.push_back(v);
                std::sort(bag.begin(), bag.end());
                node = add_node(NodeKind::kIntroduce, v, bag, {node});
            }
        return node;
    }

    // Returns a nice subtree whose top node carries exactly raw bag `i`.
    int build_subtree(int i) {
        const std::vector<int>& bag = raw_.bags[i];
        std::vector<int> tops;
        for (int c : children_[i]) tops.push_back(bridge(build_subtree(c), raw_.bags[c], bag));
        if (tops.empty()) return build_leaf_chain(bag);
        while (tops.size() >= 2) {
            int a = tops.back();
            tops.pop_back();
            int b = tops.back();
            tops.pop_back();
            tops.push_back(add_node(NodeKind::kJoin, -1, bag, {a, b}));
        }
        return tops[0];
    }

    const RawDecomposition& raw_;
    std::vector<std::vector<int>> children_;
    NiceTreeDecomposition result_;
};

}  // namespace

std::optional<NiceTreeDecomposition> compute_nice_tree_decomposition(const Graph& graph, int width_budget) {
    if (width_budget < 1) throw std::invalid_argument("width budget must be >= 1");
    const int n = graph.vertex_count();
    if (n == 0) return std::nullopt;
    if (n == 1) {
        NiceTreeDecomposition d;
        int leaf = 0;
        d.nodes.push_back({NodeKind::kLeaf, -1, {}, {}});
        d.nodes.push_back({NodeKind::kIntroduce, 0, {0}, {leaf}});
        d.nodes.push_back({NodeKind::kForget, 0, {}, {1}});
        d.root = 2;
        d.width = 0;
        return d;
    }

    int width = 0;
    std::vector<int> order;
    if (n <= 20) {
        order = exact_elimination_order(graph, width);
    } else {
        order = min_fill_order(graph);
    }
    RawDecomposition raw = decomposition_from_order(graph, order);
    if (raw.width > width_budget) return std::nullopt;
    Nicifier nicifier(raw, n - 1);
    NiceTreeDecomposition result = nicifier.take();
    return result;
}

int treewidth_upper_bound(const Graph& graph) {
    const int n = graph.vertex_count();
    if (n <= 1) return 0;
    if (n <= 20) {
        int width = 0;
        exact_elimination_order(graph, width);
        return width;
    }
    return decomposition_from_order(graph, min_fill_order(graph)).width;
}

// ---------------------------------------------------------------------------
// Modulators

const char* family_name(ModulatorFamily family) {
    switch (family) {
        case ModulatorFamily::kVertexCover: return "vertex-cover";
        case ModulatorFamily::kThreePathCover: return "3-path-cover";
        case ModulatorFamily::kFourPathCover: return "4-path-cover";
        case ModulatorFamily::kToClique: return "to-clique";
        case ModulatorFamily::kToCluster: return "to-cluster";
        case ModulatorFamily::kToDisjointPaths: return "to-disjoint-paths";
    }
    return "?";
}

namespace {

// Finds a violating witness in graph minus `removed`, or empty when the
// remainder is in the family. Witness choice is deterministic.
std::vector<int> find_witness(const Graph& graph, ModulatorFamily family, const std::vector<char>& removed) {
    const int n = graph.vertex_count();
    auto alive = [&](int v) { return !removed[v]; };

    switch (family) {
        case ModulatorFamily::kVertexCover: {
            for (int u = 0; u < n; ++u) {
                if (!alive(u)) continue;
                for (int v : graph.neighbors(u))
                    if (v > u && alive(v)) return {u, v};
            }
            return {};
        }
        case ModulatorFamily::kThreePathCover: {
            for (int v = 0; v < n; ++v) {
                if (!alive(v)) continue;
                std::vector<int> nb;
                for (int w : graph.neighbors(v))
                    if (alive(w)) nb.push_back(w);
                if (nb.size() >= 2) return {nb[0], v, nb[1]};
            }
            return {};
        }
        case ModulatorFamily::kFourPathCover: {
            // A 4-vertex path x-a-b-y as a sub-graph.
            for (int a = 0; a < n; ++a) {
                if (!alive(a)) continue;
                for (int b : graph.neighbors(a)) {
                    if (b < a || !alive(b)) continue;
                    for (int x : graph.neighbors(a)) {
                        if (!alive(x) || x == b) continue;
                        for (int y : graph.neighbors(b)) {
                            if (!alive(y) || y == a || y == x) continue;
                            return {x, a, b, y};
                        }
                    }
                }
            }
            return {};
        }
        case ModulatorFamily::kToClique: {
            for (int u = 0; u < n; ++u) {
                if (!alive(u)) continue;
                for (int v = u + 1; v < n; ++v)
                    if (alive(v) && !graph.has_edge(u, v)) return {u, v};
            }
            return {};
        }
        case ModulatorFamily::kToCluster: {
            // Induced P3: u-v-w with u,w non-adjacent.
            for (int v = 0; v < n; ++v) {
                if (!alive(v)) continue;
                const auto& nb = graph.neighbors(v);
                for (std::size_t i = 0; i < nb.size(); ++i) {
                    if (!alive(nb[i])) continue;
                    for (std::size_t j = i + 1; j < nb.size(); ++j) {
                        if (!alive(nb[j])) continue;
                        if (!graph.has_edge(nb[i], nb[j])) return {nb[i], v, nb[j]};
                    }
                }
            }
            return {};
        }
        case ModulatorFamily::kToDisjointPaths: {
            for (int v = 0; v < n; ++v) {
                if (!alive(v)) continue;
                std::vector<int> nb;
                for (int w : graph.neighbors(v))
                    if (alive(w)) nb.push_back(w);
                if (nb.size() >= 3) return {v, nb[0], nb[1], nb[2]};
            }
            // Max degree <= 2: any cycle is a witness; branching must hit it.
            std::vector<int> color(n, 0), parent(n, -1);
            for (int s = 0; s < n; ++s) {
                if (!alive(s) || color[s]) continue;
                std::vector<int> stack = {s};
                color[s] = 1;
                while (!stack.empty()) {
                    int v = stack.back();
                    stack.pop_back();
                    for (int w : graph.neighbors(v)) {
                        if (!alive(w) || w == parent[v]) continue;
                        if (color[w]) {
                            // Recover the cycle through parent pointers.
                            std::vector<int> path_v = {v};
                            for (int x = v; parent[x] != -1; x = parent[x]) path_v.push_back(parent[x]);
                            std::vector<int> path_w = {w};
                            for (int x = w; parent[x] != -1; x = parent[x]) path_w.push_back(parent[x]);
                            std::vector<char> on_v(n, 0);
                            for (int x : path_v) on_v[x] = 1;
                            int meet = -1;
                            for (int x : path_w)
                                if (on_v[x]) {
                                    meet = x;
                                    break;
                                }
                            std::vector<int> cycle;
                            for (int x : path_v) {
                                cycle.push_back(x);
                                if (x == meet) break;
                            }
                            for (int x : path_w) {
                                if (x == meet) break;
                                cycle.push_back(x);
                            }
                            std::sort(cycle.begin(), cycle.end());
                            return cycle;
                        }
                        color[w] = 1;
                        parent[w] = v;
                        stack.push_back(w);
                    }
                }
            }
            return {};
        }
    }
    return {};
}

bool modulator_search(const Graph& graph, ModulatorFamily family, int depth_left, std::vector<char>& removed,
                      std::vector<int>& chosen, std::set<std::vector<int>>& visited) {
    auto witness = find_witness(graph, family, removed);
    if (witness.empty()) return true;
    if (depth_left == 0) return false;
    std::vector<int> key = chosen;
    std::sort(key.begin(), key.end());
    if (!visited.insert(key).second) return false;
    for (int v : witness) {
        removed[v] = 1;
        chosen.push_back(v);
        if (modulator_search(graph, family, depth_left - 1, removed, chosen, visited)) return true;
        chosen.pop_back();
        removed[v] = 0;
    }
    return false;
}

}  // namespace

bool family_member(const Graph& graph, ModulatorFamily family, const std::vector<int>& removed) {
    std::vector<char> gone(graph.vertex_count(), 0);
    for (int v : removed) gone[v] = 1;
    return find_witness(graph, family, gone).empty();
}

std::optional<ModulatorReport> find_modulator(const Graph& graph, ModulatorFamily family, int budget) {
    if (budget < 0 || budget > graph.vertex_count()) throw std::invalid_argument("modulator budget out of range");
    for (int size = 0; size <= budget; ++size) {
        std::vector<char> removed(graph.vertex_count(), 0);
        std::vector<int> chosen;
        std::set<std::vector<int>> visited;
        if (modulator_search(graph, family, size, removed, chosen, visited)) {
            std::sort(chosen.begin(), chosen.end());
            return ModulatorReport{family, chosen, static_cast<int>(chosen.size())};
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Vertex integrity

namespace {

bool vi_search(const Graph& graph, int k, std::vector<char>& removed, int removed_count,
               std::vector<int>& chosen, std::set<std::vector<int>>& visited) {
    std::vector<int> alive;
    for (int v = 0; v < graph.vertex_count(); ++v)
        if (!removed[v]) alive.push_back(v);
    std::vector<int> oversized;
    for (const auto& comp : graph.components_within(alive))
        if (static_cast<int>(comp.size()) > k) {
            oversized = comp;
            break;
        }
    if (oversized.empty()) return true;
    if (removed_count == k) return false;
    std::vector<int> key = chosen;
    std::sort(key.begin(), key.end());
    if (!visited.insert(key).second) return false;
    // Any witness X must delete a vertex of every oversized component.
    for (int v : oversized) {
        removed[v] = 1;
        chosen.push_back(v);
        if (vi_search(graph, k, removed, removed_count + 1, chosen, visited)) return true;
        chosen.pop_back();
        removed[v] = 0;
    }
    return false;
}

}  // namespace

std::optional<VertexIntegrity> vertex_integrity(const Graph& graph, int budget) {
    if (budget < 1 || budget > graph.vertex_count()) throw std::invalid_argument("vi budget out of range");
    for (int k = 1; k <= budget; ++k) {
        std::vector<char> removed(graph.vertex_count(), 0);
        std::vector<int> chosen;
        std::set<std::vector<int>> visited;
        if (vi_search(graph, k, removed, 0, chosen, visited)) {
            std::sort(chosen.begin(), chosen.end());
            return VertexIntegrity{chosen, k};
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Parameter report

namespace {

ParameterValue modulator_value(const Graph& graph, ModulatorFamily family, int budget) {
    auto report = find_modulator(graph, family, std::min(budget, graph.vertex_count()));
    if (!report) return {true, 0};
    return {false, report->size};
}

}  // namespace

ParameterReport parameter_report(const Graph& graph, const ParameterBudgets& budgets) {
    ParameterReport report;
    report.vertex_cover = modulator_value(graph, ModulatorFamily::kVertexCover, budgets.vertex_cover);
    report.three_path_cover = modulator_value(graph, ModulatorFamily::kThreePathCover, budgets.three_path_cover);
    report.four_path_cover = modulator_value(graph, ModulatorFamily::kFourPathCover, budgets.four_path_cover);
    report.dist_to_clique = modulator_value(graph, ModulatorFamily::kToClique, budgets.dist_to_clique);
    report.dist_to_cluster = modulator_value(graph, ModulatorFamily::kToCluster, budgets.dist_to_cluster);
    auto vi = vertex_integrity(graph, std::min(budgets.vertex_integrity, graph.vertex_count()));
    report.vertex_integrity_k = vi ? ParameterValue{false, vi->k} : ParameterValue{true, 0};
    int tw = treewidth_upper_bound(graph);
    report.treewidth = tw <= budgets.treewidth ? ParameterValue{false, tw} : ParameterValue{true, 0};
    report.neighbourhood_diversity = neighbourhood_diversity(graph).diversity();
    report.feedback_edge_set = graph.edge_count() - graph.vertex_count() + 1;
    report.is_cograph = build_cotree(graph).has_value();
    report.is_clique = graph.is_clique();
    return report;
}

std::vector<std::pair<std::string, std::string>> ParameterReport::entries() const {
    auto fmt = [](const ParameterValue& v) { return v.exceeded ? std::string("exceeded") : std::to_string(v.value); };
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("vertex-cover", fmt(vertex_cover));
    out.emplace_back("3-path-cover", fmt(three_path_cover));
    out.emplace_back("4-path-cover", fmt(four_path_cover));
    out.emplace_back("distance-to-clique", fmt(dist_to_clique));
    out.emplace_back("distance-to-cluster", fmt(dist_to_cluster));
    out.emplace_back("neighbourhood-diversity", std::to_string(neighbourhood_diversity));
    out.emplace_back("vertex-integrity", fmt(vertex_integrity_k));
    out.emplace_back("treewidth-upper", fmt(treewidth));
    out.emplace_back("feedback-edge-set", std::to_string(feedback_edge_set));
    out.emplace_back("cograph", is_cograph ? "1" : "0");
    out.emplace_back("clique", is_clique ? "1" : "0");
    return out;
}

std::string ParameterReport::to_text() const {
    std::ostringstream out;
    for (const auto& [name, value] : entries()) out << "param " << name << ' ' << value << '\n';
    return out.str();
}

}  // namespace ecp
