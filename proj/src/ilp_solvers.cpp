#include "ecp/ilp_solvers.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ecp/matching.hpp"
#include "ecp/partitions.hpp"

namespace ecp {

// ---------------------------------------------------------------------------
// Patterns over the type graph

std::vector<std::vector<int>> enumerate_connected_type_subgraphs(const TypePartition& types) {
    const int d = types.diversity();
    std::vector<std::vector<int>> result;
    for (unsigned mask = 1; mask < (1u << d); ++mask) {
        std::vector<int> members;
        for (int t = 0; t < d; ++t)
            if (mask & (1u << t)) members.push_back(t);
        // Connectivity of the induced type sub-graph.
        std::vector<char> seen(members.size(), 0);
        std::vector<int> stack = {0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < members.size(); ++j)
                if (!seen[j] && types.type_adj[members[i]][members[j]]) {
                    seen[j] = 1;
                    ++count;
                    stack.push_back(static_cast<int>(j));
                }
        }
        if (count == static_cast<int>(members.size())) result.push_back(std::move(members));
    }
    return result;
}

// ---------------------------------------------------------------------------
// The neighbourhood-diversity program, shared with the modular-width solver.

namespace {

struct NdPattern {
    std::vector<int> classes;
    bool large_allowed = true;  // singleton independent classes only take small copies
};

// Patterns usable for parts of size small/large: a copy needs one vertex of
// every member class, and a copy inside a single independent class can only
// be a singleton.
std::vector<NdPattern> usable_patterns(const TypePartition& types, const SizeBounds& bounds) {
    std::vector<NdPattern> out;
    for (auto& classes : enumerate_connected_type_subgraphs(types)) {
        if (static_cast<int>(classes.size()) > bounds.large) continue;
        NdPattern pattern{classes, true};
        if (classes.size() == 1 && types.kinds[classes[0]] == ClassKind::kIndependent) {
            if (bounds.small > 1) continue;  // connected parts of size >= 2 need edges
            pattern.large_allowed = false;
        }
        out.push_back(std::move(pattern));
    }
    return out;
}

struct PatternCounts {
    int copies = 0;
    int larges = 0;                  // copies of the large size
    std::vector<int> per_class;      // parallel to pattern.classes
};

// Greedy realization: one vertex of every member class per copy, fill every
// copy to the small size, then hand the leftovers (one per copy) out in copy
// order. Classes are consumed ascending.
std::vector<std::vector<int>> realize_patterns(const TypePartition& types, const std::vector<NdPattern>& patterns,
                                               const std::vector<PatternCounts>& counts, const SizeBounds& bounds) {
    std::vector<std::size_t> next_vertex(types.classes.size(), 0);
    auto draw = [&](int cls) {
        return types.classes[cls][next_vertex[cls]++];
    };

    std::vector<std::vector<int>> parts;
    for (std::size_t h = 0; h < patterns.size(); ++h) {
        const auto& pattern = patterns[h];
        const auto& count = counts[h];
        if (count.copies == 0) continue;
        std::vector<std::vector<int>> copies(count.copies);
        std::vector<int> remaining = count.per_class;
        // One vertex of each member class per copy.
        for (std::size_t ci = 0; ci < pattern.classes.size(); ++ci)
            for (int c = 0; c < count.copies; ++c) {
                copies[c].push_back(draw(pattern.classes[ci]));
                --remaining[ci];
            }
        // Fill to the small size, ascending classes.
        std::size_t ci = 0;
        for (int c = 0; c < count.copies; ++c) {
            while (static_cast<int>(copies[c].size()) < bounds.small) {
                while (remaining[ci] == 0) ++ci;
                copies[c].push_back(draw(pattern.classes[ci]));
                --remaining[ci];
            }
        }
        // Leftovers: one per copy.
        for (int c = 0; c < count.copies; ++c) {
            bool any = false;
            for (std::size_t j = 0; j < remaining.size(); ++j)
                if (remaining[j] > 0) {
                    any = true;
                    break;
                }
            if (!any) break;
            while (remaining[ci] == 0) ++ci;
            copies[c].push_back(draw(pattern.classes[ci]));
            --remaining[ci];
        }
        for (auto& copy : copies) {
            std::sort(copy.begin(), copy.end());
            parts.push_back(std::move(copy));
        }
    }
    return parts;
}

// Solves the pattern program for a graph that must be fully covered by
// `parts` parts of the given sizes. Exact.
std::optional<std::vector<std::vector<int>>> nd_program(const Graph& graph, const TypePartition& types, int parts,
                                                        const SizeBounds& bounds, const SearchLimits& limits,
                                                        SolveStats* stats) {
    const auto patterns = usable_patterns(types, bounds);
    const int d = types.diversity();
    const int xi = bounds.large > bounds.small ? 1 : 0;

    IntegerProgram program;
    std::vector<int> var_copies(patterns.size());
    std::vector<std::vector<int>> var_alloc(patterns.size());
    for (std::size_t h = 0; h < patterns.size(); ++h) {
        var_copies[h] = program.add_var(0, parts);
        for (int cls : patterns[h].classes)
            var_alloc[h].push_back(program.add_var(0, static_cast<int>(types.classes[cls].size())));
    }

    for (std::size_t h = 0; h < patterns.size(); ++h) {
        const int xi_h = patterns[h].large_allowed ? xi : 0;
        std::vector<LinTerm> total;
        for (int v : var_alloc[h]) total.push_back({v, 1});
        std::vector<LinTerm> lower = total, upper = total;
        lower.push_back({var_copies[h], -static_cast<long long>(bounds.small)});
        upper.push_back({var_copies[h], -static_cast<long long>(bounds.small + xi_h)});
        program.add_constraint(std::move(lower), Relation::kGreaterEq, 0);
        program.add_constraint(std::move(upper), Relation::kLessEq, 0);
        for (int v : var_alloc[h])
            program.add_constraint({{var_copies[h], 1}, {v, -1}}, Relation::kLessEq, 0);
    }
    for (int t = 0; t < d; ++t) {
        std::vector<LinTerm> row;
        for (std::size_t h = 0; h < patterns.size(); ++h)
            for (std::size_t i = 0; i < patterns[h].classes.size(); ++i)
                if (patterns[h].classes[i] == t) row.push_back({var_alloc[h][i], 1});
        program.add_constraint(std::move(row), Relation::kEqual, static_cast<int>(types.classes[t].size()));
    }
    {
        std::vector<LinTerm> row;
        for (std::size_t h = 0; h < patterns.size(); ++h) row.push_back({var_copies[h], 1});
        program.add_constraint(std::move(row), Relation::kEqual, parts);
    }

    if (stats) stats->program_vars += program.vars.size();
    IpResult result = solve_integer_program(program, limits);
    if (result.status == IpStatus::kBudgetExceeded) throw BudgetExceeded{};
    if (result.status == IpStatus::kInfeasible) return std::nullopt;

    std::vector<PatternCounts> counts(patterns.size());
    for (std::size_t h = 0; h < patterns.size(); ++h) {
        counts[h].copies = static_cast<int>(result.assignment[var_copies[h]]);
        int total = 0;
        for (int v : var_alloc[h]) {
            counts[h].per_class.push_back(static_cast<int>(result.assignment[v]));
            total += static_cast<int>(result.assignment[v]);
        }
        counts[h].larges = total - bounds.small * counts[h].copies;
    }
    auto realized = realize_patterns(types, patterns, counts, bounds);
    (void)graph;
    return realized;
}

}  // namespace

std::optional<Partition> solve_neighbourhood_diversity(const Instance& instance, const TypePartition& types,
                                                       const SearchLimits& limits, SolveStats* stats) {
    const Graph& graph = instance.graph;
    // Reject a type partition that does not belong to this graph.
    const TypePartition fresh = neighbourhood_diversity(graph);
    if (fresh.classes != types.classes) throw std::invalid_argument("type partition does not match the graph");

    auto parts = nd_program(graph, types, instance.parts, instance.bounds(), limits, stats);
    if (!parts) return std::nullopt;
    Partition partition;
    partition.assignment.assign(graph.vertex_count(), -1);
    for (std::size_t i = 0; i < parts->size(); ++i)
        for (int v : (*parts)[i]) partition.assignment[v] = static_cast<int>(i);
    Verdict verdict = verify_partition(instance, partition);
    if (!verdict.valid) throw std::logic_error("neighbourhood-diversity realization failed verification");
    return partition;
}

// ---------------------------------------------------------------------------
// Modular width

namespace {

// Smallest non-trivial module that carries at least one internal edge, via
// pair closures; empty when none exists.
std::optional<std::vector<int>> smallest_edged_module(const Graph& g) {
    const int n = g.vertex_count();
    std::optional<std::vector<int>> best;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            std::vector<char> in(n, 0);
            std::vector<int> members = {u, v};
            in[u] = in[v] = 1;
            bool changed = true;
            while (changed && static_cast<int>(members.size()) < n) {
                changed = false;
                for (int w = 0; w < n; ++w) {
                    if (in[w]) continue;
                    int adj = 0;
                    for (int x : members)
                        if (g.has_edge(w, x)) ++adj;
                    if (adj > 0 && adj < static_cast<int>(members.size())) {
                        in[w] = 1;
                        members.push_back(w);
                        changed = true;
                    }
                }
            }
            if (static_cast<int>(members.size()) == n) continue;
            if (best && members.size() >= best->size()) continue;
            bool has_edge = false;
            for (std::size_t i = 0; i < members.size() && !has_edge; ++i)
                for (std::size_t j = i + 1; j < members.size() && !has_edge; ++j)
                    if (g.has_edge(members[i], members[j])) has_edge = true;
            if (!has_edge) continue;
            std::sort(members.begin(), members.end());
            best = members;
        }
    return best;
}

// Leaf program of the modular-width solver: cover exactly `a` small and
// `lam` large parts inside the module sub-graph, leaving the rest untouched.
std::optional<std::vector<std::vector<int>>> module_cover_program(const Graph& module_graph, int a, int lam,
                                                                 const SizeBounds& bounds,
                                                                 const SearchLimits& limits, SolveStats* stats) {
    const TypePartition types = neighbourhood_diversity(module_graph);
    const auto patterns = usable_patterns(types, bounds);

    IntegerProgram program;
    std::vector<int> var_copies(patterns.size()), var_large(patterns.size());
    std::vector<std::vector<int>> var_alloc(patterns.size());
    for (std::size_t h = 0; h < patterns.size(); ++h) {
        var_copies[h] = program.add_var(0, a + lam);
        var_large[h] = program.add_var(0, patterns[h].large_allowed && bounds.large > bounds.small ? lam : 0);
        for (int cls : patterns[h].classes)
            var_alloc[h].push_back(program.add_var(0, static_cast<int>(types.classes[cls].size())));
    }
    for (std::size_t h = 0; h < patterns.size(); ++h) {
        // Total allocation = small * copies + larges; each class used at
        // least once per copy.
        std::vector<LinTerm> row;
        for (int v : var_alloc[h]) row.push_back({v, 1});
        row.push_back({var_copies[h], -static_cast<long long>(bounds.small)});
        row.push_back({var_large[h], -1});
        program.add_constraint(std::move(row), Relation::kEqual, 0);
        program.add_constraint({{var_large[h], 1}, {var_copies[h], -1}}, Relation::kLessEq, 0);
        for (int v : var_alloc[h])
            program.add_constraint({{var_copies[h], 1}, {v, -1}}, Relation::kLessEq, 0);
    }
    for (int t = 0; t < types.diversity(); ++t) {
        std::vector<LinTerm> row;
        for (std::size_t h = 0; h < patterns.size(); ++h)
            for (std::size_t i = 0; i < patterns[h].classes.size(); ++i)
                if (patterns[h].classes[i] == t) row.push_back({var_alloc[h][i], 1});
        if (row.empty()) continue;
        program.add_constraint(std::move(row), Relation::kLessEq, static_cast<int>(types.classes[t].size()));
    }
    {
        std::vector<LinTerm> copies_row, larges_row;
        for (std::size_t h = 0; h < patterns.size(); ++h) {
            copies_row.push_back({var_copies[h], 1});
            larges_row.push_back({var_large[h], 1});
        }
        program.add_constraint(std::move(copies_row), Relation::kEqual, a + lam);
        program.add_constraint(std::move(larges_row), Relation::kEqual, lam);
    }

    if (stats) stats->program_vars += program.vars.size();
    IpResult result = solve_integer_program(program, limits);
    if (result.status == IpStatus::kBudgetExceeded) throw BudgetExceeded{};
    if (result.status == IpStatus::kInfeasible) return std::nullopt;

    std::vector<PatternCounts> counts(patterns.size());
    for (std::size_t h = 0; h < patterns.size(); ++h) {
        counts[h].copies = static_cast<int>(result.assignment[var_copies[h]]);
        counts[h].larges = static_cast<int>(result.assignment[var_large[h]]);
        for (int v : var_alloc[h]) counts[h].per_class.push_back(static_cast<int>(result.assignment[v]));
    }
    return realize_patterns(types, patterns, counts, bounds);
}

struct MwContext {
    const SearchLimits* limits;
    SolveStats* stats;
    BudgetGuard* guard;
};

// Recursive solver over (current graph, labels into the original instance).
bool mw_recurse(const Graph& g, const std::vector<int>& labels, int parts, MwContext& ctx,
                std::vector<std::vector<int>>& out_parts) {
    ctx.guard->tick();
    const int n = g.vertex_count();
    if (parts == 0) return n == 0;
    if (n < parts) return false;
    const SizeBounds bounds = SizeBounds::from(n, parts);

    auto module = smallest_edged_module(g);
    if (!module) {
        // Module-free (up to edgeless modules): solve the pattern program on
        // the whole graph.
        const TypePartition types = neighbourhood_diversity(g);
        auto local = nd_program(g, types, parts, bounds, *ctx.limits, ctx.stats);
        if (!local) return false;
        for (const auto& part : *local) {
            std::vector<int> mapped;
            for (int v : part) mapped.push_back(labels[v]);
            std::sort(mapped.begin(), mapped.end());
            out_parts.push_back(std::move(mapped));
        }
        return true;
    }

    std::vector<int> module_map;  // module-local -> g vertex
    Graph module_graph = g.induced(*module);
    module_map = *module;

    // Candidate (small, large) extraction counts, largest coverage first.
    struct Candidate {
        int a, lam, coverage;
    };
    std::vector<Candidate> candidates;
    const int max_a = parts - bounds.num_large;
    const int max_lam = bounds.num_large;
    for (int a = 0; a <= max_a; ++a)
        for (int lam = 0; lam <= max_lam; ++lam) {
            int coverage = a * bounds.small + lam * bounds.large;
            if (coverage > static_cast<int>(module->size())) continue;
            candidates.push_back({a, lam, coverage});
        }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
        if (x.coverage != y.coverage) return x.coverage > y.coverage;
        if (x.lam != y.lam) return x.lam < y.lam;
        return x.a < y.a;
    });

    for (const auto& cand : candidates) {
        ctx.guard->tick();
        auto covered_parts = module_cover_program(module_graph, cand.a, cand.lam, bounds, *ctx.limits, ctx.stats);
        if (!covered_parts) continue;

        std::vector<char> covered(n, 0);
        for (const auto& part : *covered_parts)
            for (int v : part) covered[module_map[v]] = 1;
        std::vector<char> in_module(n, 0);
        for (int v : *module) in_module[v] = 1;

        // Reduced graph: drop covered vertices, erase in-module edges.
        std::vector<int> keep;
        for (int v = 0; v < n; ++v)
            if (!covered[v]) keep.push_back(v);
        std::vector<int> new_labels;
        Graph reduced(static_cast<int>(keep.size()));
        std::vector<int> position(n, -1);
        for (std::size_t i = 0; i < keep.size(); ++i) {
            position[keep[i]] = static_cast<int>(i);
            new_labels.push_back(labels[keep[i]]);
        }
        for (const auto& [x, y] : g.edges()) {
            if (covered[x] || covered[y]) continue;
            if (in_module[x] && in_module[y]) continue;
            reduced.add_edge(position[x], position[y]);
        }

        std::vector<std::vector<int>> sub_parts;
        if (mw_recurse(reduced, new_labels, parts - cand.a - cand.lam, ctx, sub_parts)) {
            for (const auto& part : *covered_parts) {
                std::vector<int> mapped;
                for (int v : part) mapped.push_back(labels[module_map[v]]);
                std::sort(mapped.begin(), mapped.end());
                out_parts.push_back(std::move(mapped));
            }
            for (auto& part : sub_parts) out_parts.push_back(std::move(part));
            return true;
        }
    }
    return false;
}

}  // namespace

MwResult solve_modular_width(const Instance& instance, const SearchLimits& limits, SolveStats* stats) {
    BudgetGuard guard(limits);
    MwContext ctx{&limits, stats, &guard};
    std::vector<int> labels(instance.graph.vertex_count());
    std::iota(labels.begin(), labels.end(), 0);
    std::vector<std::vector<int>> parts;
    const bool yes = mw_recurse(instance.graph, labels, instance.parts, ctx, parts);
    if (stats) stats->search_nodes += guard.nodes();
    if (!yes) return {MwStatus::kNo, std::nullopt};

    Partition partition;
    partition.assignment.assign(instance.graph.vertex_count(), -1);
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (int v : parts[i]) partition.assignment[v] = static_cast<int>(i);
    for (int v : partition.assignment)
        if (v == -1) return {MwStatus::kInconclusive, std::nullopt};
    if (!verify_partition(instance, partition).valid) return {MwStatus::kInconclusive, std::nullopt};
    return {MwStatus::kYes, partition};
}

// ---------------------------------------------------------------------------
// Piece configurations (vertex integrity)

std::vector<PieceConfiguration> build_piece_configurations(const std::vector<int>& piece, const Graph& graph,
                                                           const std::vector<std::vector<int>>& modulator_parts) {
    const int p = static_cast<int>(modulator_parts.size());
    const int z = static_cast<int>(piece.size());
    std::vector<PieceConfiguration> configs;
    std::set<std::pair<std::vector<int>, std::vector<std::pair<int, int>>>> seen;

    std::vector<int> assignment(z, 0);
    std::function<void(int)> rec = [&](int idx) {
        if (idx < z) {
            for (int part = 0; part < p; ++part) {
                assignment[idx] = part;
                rec(idx + 1);
            }
            return;
        }
        PieceConfiguration config;
        config.assignment = assignment;
        config.part_sizes.assign(p, 0);
        std::set<std::pair<int, int>> pairs;
        for (int part = 0; part < p; ++part) {
            std::vector<int> chunk;
            for (int i = 0; i < z; ++i)
                if (assignment[i] == part) chunk.push_back(piece[i]);
            config.part_sizes[part] = static_cast<int>(chunk.size());
            if (chunk.empty()) continue;
            auto comps = graph.components_within(chunk);
            if (modulator_parts[part].empty()) {
                // A chunk seeding an empty part must be the whole part.
                if (comps.size() != 1) return;
                continue;
            }
            for (const auto& comp : comps) {
                bool attached = false;
                std::vector<int> adjacent_members;
                for (int u : modulator_parts[part]) {
                    bool adj = false;
                    for (int w : comp)
                        if (graph.has_edge(u, w)) {
                            adj = true;
                            break;
                        }
                    if (adj) {
                        attached = true;
                        adjacent_members.push_back(u);
                    }
                }
                if (!attached) return;  // chunk component with no edge to its part
                for (std::size_t i = 0; i < adjacent_members.size(); ++i)
                    for (std::size_t j = i + 1; j < adjacent_members.size(); ++j)
                        pairs.emplace(adjacent_members[i], adjacent_members[j]);
            }
        }
        config.connections.assign(pairs.begin(), pairs.end());
        if (seen.emplace(config.part_sizes, config.connections).second) configs.push_back(std::move(config));
    };
    rec(0);
    return configs;
}

// ---------------------------------------------------------------------------
// Vertex integrity

namespace {

// Enumerates, per part, the subsets of non-adjacent in-part pairs whose
// addition makes the part connected.
std::vector<std::vector<std::vector<std::pair<int, int>>>> connection_guesses(
    const Graph& graph, const std::vector<std::vector<int>>& parts) {
    std::vector<std::vector<std::vector<std::pair<int, int>>>> result(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto& part = parts[i];
        std::vector<std::pair<int, int>> missing;
        for (std::size_t a = 0; a < part.size(); ++a)
            for (std::size_t b = a + 1; b < part.size(); ++b)
                if (!graph.has_edge(part[a], part[b])) missing.emplace_back(part[a], part[b]);
        for (unsigned mask = 0; mask < (1u << missing.size()); ++mask) {
            // Connectivity of (part, real edges + chosen pairs).
            std::vector<int> comp(part.size());
            std::iota(comp.begin(), comp.end(), 0);
            std::function<int(int)> find = [&](int x) {
                while (comp[x] != x) x = comp[x] = comp[comp[x]];
                return x;
            };
            auto unite = [&](int a, int b) { comp[find(a)] = find(b); };
            for (std::size_t a = 0; a < part.size(); ++a)
                for (std::size_t b = a + 1; b < part.size(); ++b)
                    if (graph.has_edge(part[a], part[b])) unite(static_cast<int>(a), static_cast<int>(b));
            std::vector<std::pair<int, int>> chosen;
            for (std::size_t e = 0; e < missing.size(); ++e)
                if (mask & (1u << e)) {
                    chosen.push_back(missing[e]);
                    int a = static_cast<int>(std::find(part.begin(), part.end(), missing[e].first) - part.begin());
                    int b = static_cast<int>(std::find(part.begin(), part.end(), missing[e].second) - part.begin());
                    unite(a, b);
                }
            bool connected = true;
            for (std::size_t x = 1; x < part.size(); ++x)
                if (find(static_cast<int>(x)) != find(0)) connected = false;
            if (connected) result[i].push_back(std::move(chosen));
        }
        if (part.empty()) result[i].push_back({});
    }
    return result;
}

}  // namespace

ViResult solve_vertex_integrity(const Instance& instance, const VertexIntegrity& witness,
                                const SearchLimits& limits, SolveStats* stats) {
    const Graph& graph = instance.graph;
    const int n = graph.vertex_count();
    const int p = instance.parts;
    const int k = witness.k;
    if (p > k) return {ViStatus::kDelegated, std::nullopt};
    const SizeBounds bounds = instance.bounds();

    std::vector<char> in_x(n, 0);
    for (int v : witness.modulator) in_x[v] = 1;
    std::vector<int> rest;
    for (int v = 0; v < n; ++v)
        if (!in_x[v]) rest.push_back(v);
    auto pieces = graph.components_within(rest);
    for (const auto& piece : pieces)
        if (static_cast<int>(piece.size()) > k)
            throw std::invalid_argument("witness component larger than k");

    const int kx = static_cast<int>(witness.modulator.size());
    BudgetGuard guard(limits);
    std::optional<Partition> found;

    try {
        enumerate_set_partitions(kx, p, [&](const std::vector<int>& block_of, int q) {
            guard.tick();
            // Blocks become parts 0..q-1; parts q..p-1 have no modulator vertex.
            std::vector<std::vector<int>> parts(p);
            for (int i = 0; i < kx; ++i) parts[block_of[i]].push_back(witness.modulator[i]);
            for (int i = 0; i < q; ++i)
                if (static_cast<int>(parts[i].size()) > bounds.large) return true;

            std::vector<std::vector<PieceConfiguration>> configs;
            configs.reserve(pieces.size());
            for (const auto& piece : pieces) configs.push_back(build_piece_configurations(piece, graph, parts));

            const auto guesses = connection_guesses(graph, parts);
            std::vector<std::size_t> pick(p, 0);
            std::function<bool(int)> per_part = [&](int i) -> bool {
                if (i == p) {
                    guard.tick();
                    // Assemble and solve the configuration program.
                    IntegerProgram program;
                    std::vector<std::vector<int>> config_vars(pieces.size());
                    for (std::size_t z = 0; z < pieces.size(); ++z) {
                        for (std::size_t c = 0; c < configs[z].size(); ++c)
                            config_vars[z].push_back(program.add_var(0, 1));
                        std::vector<LinTerm> one;
                        for (int v : config_vars[z]) one.push_back({v, 1});
                        program.add_constraint(std::move(one), Relation::kEqual, 1);
                    }
                    std::vector<int> slack(p);
                    for (int i2 = 0; i2 < p; ++i2) slack[i2] = program.add_var(0, 1);
                    for (int i2 = 0; i2 < p; ++i2) {
                        std::vector<LinTerm> row;
                        for (std::size_t z = 0; z < pieces.size(); ++z)
                            for (std::size_t c = 0; c < configs[z].size(); ++c)
                                if (configs[z][c].part_sizes[i2] != 0)
                                    row.push_back({config_vars[z][c], configs[z][c].part_sizes[i2]});
                        row.push_back({slack[i2], 1});
                        program.add_constraint(std::move(row), Relation::kEqual,
                                               bounds.large - static_cast<int>(parts[i2].size()));
                    }
                    {
                        std::vector<LinTerm> row;
                        for (int i2 = 0; i2 < p; ++i2) row.push_back({slack[i2], 1});
                        program.add_constraint(std::move(row), Relation::kEqual,
                                               bounds.large > bounds.small ? p - bounds.num_large : 0);
                    }
                    for (int i2 = 0; i2 < p; ++i2) {
                        for (const auto& pair : guesses[i2][pick[i2]]) {
                            std::vector<LinTerm> row;
                            for (std::size_t z = 0; z < pieces.size(); ++z)
                                for (std::size_t c = 0; c < configs[z].size(); ++c)
                                    if (std::find(configs[z][c].connections.begin(), configs[z][c].connections.end(),
                                                  pair) != configs[z][c].connections.end())
                                        row.push_back({config_vars[z][c], 1});
                            if (row.empty()) return false;  // pair cannot be realized at all
                            program.add_constraint(std::move(row), Relation::kGreaterEq, 1);
                        }
                        if (parts[i2].empty()) {
                            std::vector<LinTerm> row;
                            for (std::size_t z = 0; z < pieces.size(); ++z)
                                for (std::size_t c = 0; c < configs[z].size(); ++c)
                                    if (configs[z][c].part_sizes[i2] != 0) row.push_back({config_vars[z][c], 1});
                            program.add_constraint(std::move(row), Relation::kEqual, 1);
                        }
                    }

                    if (stats) stats->program_vars += program.vars.size();
                    IpResult result = solve_integer_program(program, limits);
                    if (result.status == IpStatus::kBudgetExceeded) throw BudgetExceeded{};
                    if (result.status == IpStatus::kInfeasible) return false;

                    Partition partition;
                    partition.assignment.assign(n, -1);
                    for (int i2 = 0; i2 < p; ++i2)
                        for (int v : parts[i2]) partition.assignment[v] = i2;
                    for (std::size_t z = 0; z < pieces.size(); ++z)
                        for (std::size_t c = 0; c < configs[z].size(); ++c)
                            if (result.assignment[config_vars[z][c]] == 1)
                                for (int i3 = 0; i3 < static_cast<int>(pieces[z].size()); ++i3)
                                    partition.assignment[pieces[z][i3]] = configs[z][c].assignment[i3];
                    if (!verify_partition(instance, partition).valid) return false;  // reject this guess
                    found = partition;
                    return true;
                }
                for (pick[i] = 0; pick[i] < guesses[i].size(); ++pick[i])
                    if (per_part(i + 1)) return true;
                return false;
            };
            if (per_part(0)) return false;  // stop enumeration
            return true;
        });
    } catch (const BudgetExceeded&) {
        if (stats) stats->search_nodes += guard.nodes();
        return {ViStatus::kBudgetExceeded, std::nullopt};
    }
    if (stats) stats->search_nodes += guard.nodes();
    if (found) return {ViStatus::kPartition, found};
    return {ViStatus::kNoSolution, std::nullopt};
}

// ---------------------------------------------------------------------------
// 3-path vertex cover

namespace {

// Configuration program shared by both 3pvc branches: piece vertices are
// assigned to blocks (with validity against the block bases) or marked as
// standing alone; stand-alone chunk components become their own parts of
// size small or large.
struct BlockProgramInput {
    const Instance* instance;
    std::vector<std::vector<int>> bases;   // block skeleton incl. grafted vertices
    std::vector<std::vector<int>> pieces;  // remaining pieces
    std::vector<int> base_assignment;      // partial assignment for bases
};

constexpr int kOwnPart = -2;

std::optional<Partition> solve_block_program(const BlockProgramInput& input, const SearchLimits& limits,
                                             SolveStats* stats) {
    const Instance& instance = *input.instance;
    const Graph& graph = instance.graph;
    const SizeBounds bounds = instance.bounds();
    const int q = static_cast<int>(input.bases.size());
    const int p = instance.parts;
    const int n = graph.vertex_count();

    struct Config {
        std::vector<int> assignment;  // per piece vertex: 0..q-1 or kOwnPart
        std::vector<int> sizes;       // contribution per block
        int own_small = 0, own_large = 0;
    };
    std::vector<std::vector<Config>> configs(input.pieces.size());
    for (std::size_t z = 0; z < input.pieces.size(); ++z) {
        const auto& piece = input.pieces[z];
        const int m = static_cast<int>(piece.size());
        std::vector<int> assignment(m, 0);
        std::set<std::tuple<std::vector<int>, int, int>> seen;
        std::function<void(int)> rec = [&](int idx) {
            if (idx < m) {
                for (int b = 0; b < q; ++b) {
                    assignment[idx] = b;
                    rec(idx + 1);
                }
                assignment[idx] = kOwnPart;
                rec(idx + 1);
                return;
            }
            Config config;
            config.assignment = assignment;
            config.sizes.assign(q, 0);
            for (int b = 0; b < q; ++b) {
                std::vector<int> chunk;
                for (int i = 0; i < m; ++i)
                    if (assignment[i] == b) chunk.push_back(piece[i]);
                config.sizes[b] = static_cast<int>(chunk.size());
                if (chunk.empty()) continue;
                for (const auto& comp : graph.components_within(chunk)) {
                    bool attached = false;
                    for (int u : input.bases[b]) {
                        for (int w : comp)
                            if (graph.has_edge(u, w)) {
                                attached = true;
                                break;
                            }
                        if (attached) break;
                    }
                    if (!attached) return;
                }
            }
            std::vector<int> own_chunk;
            for (int i = 0; i < m; ++i)
                if (assignment[i] == kOwnPart) own_chunk.push_back(piece[i]);
            if (!own_chunk.empty()) {
                for (const auto& comp : graph.components_within(own_chunk)) {
                    const int size = static_cast<int>(comp.size());
                    if (size == bounds.large && bounds.large != bounds.small)
                        ++config.own_large;
                    else if (size == bounds.small)
                        ++config.own_small;
                    else
                        return;  // a stand-alone part of the wrong size
                }
            }
            if (seen.emplace(config.sizes, config.own_small, config.own_large).second)
                configs[z].push_back(std::move(config));
        };
        rec(0);
    }
    for (std::size_t z = 0; z < input.pieces.size(); ++z)
        if (configs[z].empty()) return std::nullopt;  // some piece cannot go anywhere

    IntegerProgram program;
    std::vector<std::vector<int>> config_vars(input.pieces.size());
    for (std::size_t z = 0; z < input.pieces.size(); ++z) {
        for (std::size_t c = 0; c < configs[z].size(); ++c) config_vars[z].push_back(program.add_var(0, 1));
        std::vector<LinTerm> one;
        for (int v : config_vars[z]) one.push_back({v, 1});
        program.add_constraint(std::move(one), Relation::kEqual, 1);
    }
    std::vector<int> slack(q);
    for (int b = 0; b < q; ++b) slack[b] = program.add_var(0, bounds.large > bounds.small ? 1 : 0);
    for (int b = 0; b < q; ++b) {
        std::vector<LinTerm> row;
        for (std::size_t z = 0; z < input.pieces.size(); ++z)
            for (std::size_t c = 0; c < configs[z].size(); ++c)
                if (configs[z][c].sizes[b] != 0) row.push_back({config_vars[z][c], configs[z][c].sizes[b]});
        row.push_back({slack[b], 1});
        program.add_constraint(std::move(row), Relation::kEqual,
                               bounds.large - static_cast<int>(input.bases[b].size()));
    }
    {
        // Part count: blocks plus stand-alone parts add up to p.
        std::vector<LinTerm> row;
        for (std::size_t z = 0; z < input.pieces.size(); ++z)
            for (std::size_t c = 0; c < configs[z].size(); ++c) {
                int count = configs[z][c].own_small + configs[z][c].own_large;
                if (count != 0) row.push_back({config_vars[z][c], count});
            }
        if (row.empty()) {
            if (p != q) return std::nullopt;
        } else {
            program.add_constraint(std::move(row), Relation::kEqual, p - q);
        }
    }
    if (bounds.large > bounds.small) {
        // Large parts: blocks without slack plus large stand-alone parts.
        std::vector<LinTerm> row;
        for (int b = 0; b < q; ++b) row.push_back({slack[b], -1});
        for (std::size_t z = 0; z < input.pieces.size(); ++z)
            for (std::size_t c = 0; c < configs[z].size(); ++c)
                if (configs[z][c].own_large != 0) row.push_back({config_vars[z][c], configs[z][c].own_large});
        program.add_constraint(std::move(row), Relation::kEqual, bounds.num_large - q);
    }

    if (stats) stats->program_vars += program.vars.size();
    IpResult result = solve_integer_program(program, limits);
    if (result.status == IpStatus::kBudgetExceeded) throw BudgetExceeded{};
    if (result.status == IpStatus::kInfeasible) return std::nullopt;

    Partition partition;
    partition.assignment = input.base_assignment;
    int next_part = q;
    for (std::size_t z = 0; z < input.pieces.size(); ++z)
        for (std::size_t c = 0; c < configs[z].size(); ++c)
            if (result.assignment[config_vars[z][c]] == 1) {
                const auto& config = configs[z][c];
                std::vector<int> own_chunk;
                for (int i = 0; i < static_cast<int>(input.pieces[z].size()); ++i) {
                    if (config.assignment[i] == kOwnPart)
                        own_chunk.push_back(input.pieces[z][i]);
                    else
                        partition.assignment[input.pieces[z][i]] = config.assignment[i];
                }
                if (!own_chunk.empty())
                    for (const auto& comp : graph.components_within(own_chunk)) {
                        for (int v : comp) partition.assignment[v] = next_part;
                        ++next_part;
                    }
            }
    if (next_part != p) return std::nullopt;
    for (int v = 0; v < n; ++v)
        if (partition.assignment[v] == -1) return std::nullopt;
    if (!verify_partition(instance, partition).valid) return std::nullopt;
    return partition;
}

// p > k, small == 2: modulator blocks, single-vertex bridges for
// non-adjacent pairs, leftover edges stand alone.
std::optional<Partition> three_pvc_small_two(const Instance& instance, const std::vector<int>& modulator,
                                             const SearchLimits& limits, SolveStats* stats) {
    const Graph& graph = instance.graph;
    const int n = graph.vertex_count();
    const int p = instance.parts;
    const int k = static_cast<int>(modulator.size());
    const SizeBounds bounds = instance.bounds();
    if (bounds.num_large > k) return std::nullopt;  // every large part needs a modulator vertex

    std::vector<char> in_mod(n, 0);
    for (int v : modulator) in_mod[v] = 1;
    std::vector<int> rest;
    for (int v = 0; v < n; ++v)
        if (!in_mod[v]) rest.push_back(v);
    auto pieces = graph.components_within(rest);
    int isolated = 0;
    for (const auto& piece : pieces)
        if (piece.size() == 1) ++isolated;
    if (isolated > 2 * k) return std::nullopt;

    BudgetGuard guard(limits);
    std::optional<Partition> found;

    enumerate_set_partitions(k, std::min(k, p), [&](const std::vector<int>& block_of, int q) {
        guard.tick();
        std::vector<std::vector<int>> blocks(q);
        for (int i = 0; i < k; ++i) blocks[block_of[i]].push_back(modulator[i]);
        for (const auto& b : blocks)
            if (static_cast<int>(b.size()) > bounds.large) return true;

        // Blocks whose modulator part is disconnected need a bridge vertex;
        // with sizes <= 3 only two-vertex blocks bridged by one common
        // neighbour are possible.
        std::vector<int> needy;
        for (int b = 0; b < q; ++b) {
            auto comps = graph.components_within(blocks[b]);
            if (comps.size() == 1) continue;
            if (blocks[b].size() != 2 || comps.size() != 2 || bounds.large < 3) return true;
            needy.push_back(b);
        }

        std::vector<char> used(n, 0);
        std::vector<std::vector<int>> bridge(q);
        std::function<bool(std::size_t)> assign_bridges = [&](std::size_t i) -> bool {
            guard.tick();
            if (i == needy.size()) {
                // Assemble the block program over what is left.
                BlockProgramInput input;
                input.instance = &instance;
                input.bases.resize(q);
                input.base_assignment.assign(n, -1);
                for (int b = 0; b < q; ++b) {
                    input.bases[b] = blocks[b];
                    for (int v : bridge[b]) input.bases[b].push_back(v);
                    for (int v : input.bases[b]) input.base_assignment[v] = b;
                }
                for (const auto& piece : pieces) {
                    std::vector<int> remaining;
                    for (int v : piece)
                        if (!used[v]) remaining.push_back(v);
                    if (!remaining.empty()) input.pieces.push_back(remaining);
                }
                auto result = solve_block_program(input, limits, stats);
                if (result) {
                    found = result;
                    return true;
                }
                return false;
            }
            const int b = needy[i];
            const int u = blocks[b][0], w = blocks[b][1];
            for (int v = 0; v < n; ++v) {
                if (in_mod[v] || used[v]) continue;
                if (!graph.has_edge(u, v) || !graph.has_edge(w, v)) continue;
                used[v] = 1;
                bridge[b].push_back(v);
                if (assign_bridges(i + 1)) return true;
                bridge[b].pop_back();
                used[v] = 0;
            }
            return false;
        };
        if (assign_bridges(0)) return false;
        return true;
    });
    if (stats) stats->search_nodes += guard.nodes();
    return found;
}

// p <= k: guess the partition of the modulator into blocks and up to k-1
// connecting chunks grafted onto them, then solve the size-only program;
// parts avoiding the modulator come out of the program as stand-alone parts.
std::optional<Partition> three_pvc_few_parts(const Instance& instance, const std::vector<int>& modulator,
                                             const SearchLimits& limits, SolveStats* stats) {
    const Graph& graph = instance.graph;
    const int n = graph.vertex_count();
    const int p = instance.parts;
    const int k = static_cast<int>(modulator.size());
    const SizeBounds bounds = instance.bounds();

    std::vector<char> in_mod(n, 0);
    for (int v : modulator) in_mod[v] = 1;
    std::vector<int> rest;
    for (int v = 0; v < n; ++v)
        if (!in_mod[v]) rest.push_back(v);
    auto pieces = graph.components_within(rest);

    BudgetGuard guard(limits);
    std::optional<Partition> found;

    enumerate_set_partitions(k, std::min(k, p), [&](const std::vector<int>& block_of, int q) {
        guard.tick();
        std::vector<std::vector<int>> bases(q);
        for (int i = 0; i < k; ++i) bases[block_of[i]].push_back(modulator[i]);
        for (const auto& b : bases)
            if (static_cast<int>(b.size()) > bounds.large) return true;

        std::vector<char> used(n, 0);
        int grafts_left = k - 1;

        // Recursively connect every base by grafting chunks of pieces
        // (single vertices or whole two-vertex pieces).
        std::function<bool()> connect = [&]() -> bool {
            guard.tick();
            int target = -1;
            for (int b = 0; b < q; ++b)
                if (graph.components_within(bases[b]).size() > 1) {
                    target = b;
                    break;
                }
            if (target == -1) {
                BlockProgramInput input;
                input.instance = &instance;
                input.bases = bases;
                input.base_assignment.assign(n, -1);
                for (int b = 0; b < q; ++b)
                    for (int v : bases[b]) input.base_assignment[v] = b;
                for (const auto& piece : pieces) {
                    std::vector<int> remaining;
                    for (int v : piece)
                        if (!used[v]) remaining.push_back(v);
                    if (!remaining.empty()) input.pieces.push_back(remaining);
                }
                auto result = solve_block_program(input, limits, stats);
                if (result) {
                    found = result;
                    return true;
                }
                return false;
            }
            if (grafts_left == 0) return false;
            if (static_cast<int>(bases[target].size()) >= bounds.large) return false;

            auto comps = graph.components_within(bases[target]);
            // Candidate chunks: a single free piece vertex or a whole free
            // two-vertex piece that touches at least two components.
            auto touches = [&](const std::vector<int>& chunk) {
                int count = 0;
                for (const auto& comp : comps) {
                    bool adj = false;
                    for (int u : comp) {
                        for (int w : chunk)
                            if (graph.has_edge(u, w)) {
                                adj = true;
                                break;
                            }
                        if (adj) break;
                    }
                    if (adj) ++count;
                }
                return count;
            };
            for (const auto& piece : pieces) {
                std::vector<int> free_vertices;
                for (int v : piece)
                    if (!used[v]) free_vertices.push_back(v);
                std::vector<std::vector<int>> chunks;
                for (int v : free_vertices) chunks.push_back({v});
                if (free_vertices.size() == 2) chunks.push_back(free_vertices);
                for (const auto& chunk : chunks) {
                    if (static_cast<int>(bases[target].size() + chunk.size()) > bounds.large) continue;
                    if (touches(chunk) < 2) continue;
                    for (int v : chunk) {
                        used[v] = 1;
                        bases[target].push_back(v);
                    }
                    --grafts_left;
                    if (connect()) return true;
                    ++grafts_left;
                    for (int v : chunk) {
                        used[v] = 0;
                        bases[target].pop_back();
                    }
                }
            }
            return false;
        };
        if (connect()) return false;
        return true;
    });
    if (stats) stats->search_nodes += guard.nodes();
    return found;
}

}  // namespace

std::optional<Partition> solve_three_pvc(const Instance& instance, const std::vector<int>& modulator,
                                         const SearchLimits& limits, SolveStats* stats) {
    const Graph& graph = instance.graph;
    if (!family_member(graph, ModulatorFamily::kThreePathCover, modulator))
        throw std::invalid_argument("modulator does not cover all 3-vertex paths");
    const int k = static_cast<int>(modulator.size());
    const int p = instance.parts;
    const SizeBounds bounds = instance.bounds();

    if (p > k) {
        if (bounds.small >= 3) return std::nullopt;  // some part would avoid the modulator
        if (bounds.small == 1) {
            // Parts of size one or two: maximum matching decides.
            const int pairs_needed = graph.vertex_count() - p;
            auto mate = general_max_matching(graph);
            if (matching_size(mate) < pairs_needed) return std::nullopt;
            Partition partition;
            partition.assignment.assign(graph.vertex_count(), -1);
            int part = 0, pairs = 0;
            for (int v = 0; v < graph.vertex_count() && pairs < pairs_needed; ++v)
                if (mate[v] > v && partition.assignment[v] == -1) {
                    partition.assignment[v] = partition.assignment[mate[v]] = part++;
                    ++pairs;
                }
            for (int v = 0; v < graph.vertex_count(); ++v)
                if (partition.assignment[v] == -1) partition.assignment[v] = part++;
            if (!verify_partition(instance, partition).valid)
                throw std::logic_error("matching route produced an invalid partition");
            return partition;
        }
        return three_pvc_small_two(instance, modulator, limits, stats);
    }
    return three_pvc_few_parts(instance, modulator, limits, stats);
}

}  // namespace ecp
