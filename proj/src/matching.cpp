#include "ecp/matching.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

namespace ecp {

namespace {
constexpr int kInf = std::numeric_limits<int>::max();
}

std::vector<std::pair<int, int>> bipartite_max_matching(int n_left, int n_right,
                                                        const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(n_left);
    for (const auto& [l, r] : edges) {
        if (l < 0 || l >= n_left || r < 0 || r >= n_right)
            throw std::invalid_argument("matching edge endpoint out of range");
        adj[l].push_back(r);
    }
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }

    std::vector<int> mate_left(n_left, -1), mate_right(n_right, -1), level(n_left);

    auto bfs = [&]() {
        std::queue<int> q;
        for (int u = 0; u < n_left; ++u) {
            if (mate_left[u] == -1) {
                level[u] = 0;
                q.push(u);
            } else {
                level[u] = kInf;
            }
        }
        bool found = false;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : adj[u]) {
                int w = mate_right[v];
                if (w == -1) {
                    found = true;
                } else if (level[w] == kInf) {
                    level[w] = level[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    };

    std::function<bool(int)> dfs = [&](int u) -> bool {
        for (int v : adj[u]) {
            int w = mate_right[v];
            if (w == -1 || (level[w] == level[u] + 1 && dfs(w))) {
                mate_left[u] = v;
                mate_right[v] = u;
                return true;
            }
        }
        level[u] = kInf;
        return false;
    };

    while (bfs())
        for (int u = 0; u < n_left; ++u)
            if (mate_left[u] == -1) dfs(u);

    std::vector<std::pair<int, int>> result;
    for (int u = 0; u < n_left; ++u)
        if (mate_left[u] != -1) result.emplace_back(u, mate_left[u]);
    return result;
}

std::vector<int> general_max_matching(const Graph& graph) {
    const int n = graph.vertex_count();
    std::vector<int> mate(n, -1), parent(n), base(n), queue;
    std::vector<char> used(n), blossom(n);

    auto mark_path = [&](int v, int b, int child) {
        while (base[v] != b) {
            blossom[base[v]] = 1;
            blossom[base[mate[v]]] = 1;
            parent[v] = child;
            child = mate[v];
            v = parent[mate[v]];
        }
    };

    auto lca = [&](int a, int b) {
        std::vector<char> seen(n, 0);
        for (;;) {
            a = base[a];
            seen[a] = 1;
            if (mate[a] == -1) break;
            a = parent[mate[a]];
        }
        for (;;) {
            b = base[b];
            if (seen[b]) return b;
            b = parent[mate[b]];
        }
    };

    auto find_augmenting = [&](int root) -> int {
        std::fill(used.begin(), used.end(), 0);
        std::fill(parent.begin(), parent.end(), -1);
        for (int i = 0; i < n; ++i) base[i] = i;
        queue.clear();
        queue.push_back(root);
        used[root] = 1;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            int v = queue[head];
            for (int to : graph.neighbors(v)) {
                if (base[v] == base[to] || mate[v] == to) continue;
                if (to == root || (mate[to] != -1 && parent[mate[to]] != -1)) {
                    // Odd cycle: contract the blossom.
                    int cur = lca(v, to);
                    std::fill(blossom.begin(), blossom.end(), 0);
                    mark_path(v, cur, to);
                    mark_path(to, cur, v);
                    for (int i = 0; i < n; ++i)
                        if (blossom[base[i]]) {
                            base[i] = cur;
                            if (!used[i]) {
                                used[i] = 1;
                                queue.push_back(i);
                            }
                        }
                } else if (parent[to] == -1) {
                    parent[to] = v;
                    if (mate[to] == -1) return to;
                    used[mate[to]] = 1;
                    queue.push_back(mate[to]);
                }
            }
        }
        return -1;
    };

    for (int v = 0; v < n; ++v) {
        if (mate[v] != -1) continue;
        int u = find_augmenting(v);
        while (u != -1) {
            int pv = parent[u], ppv = mate[pv];
            mate[u] = pv;
            mate[pv] = u;
            u = ppv;
        }
    }
    return mate;
}

int matching_size(const std::vector<int>& mate) {
    int count = 0;
    for (std::size_t v = 0; v < mate.size(); ++v)
        if (mate[v] >= 0 && mate[v] > static_cast<int>(v)) ++count;
    return count;
}

}  // namespace ecp
