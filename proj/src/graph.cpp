#include "ecp/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace ecp {

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
    Graph g(n);
    for (const auto& [u, v] : edges) g.add_edge(u, v);
    return g;
}

bool Graph::has_edge(int u, int v) const {
    const auto& a = adj_[u];
    return std::binary_search(a.begin(), a.end(), v);
}

void Graph::add_edge(int u, int v) {
    const int n = vertex_count();
    if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop");
    if (has_edge(u, v)) throw std::invalid_argument("duplicate edge");
    adj_[u].insert(std::lower_bound(adj_[u].begin(), adj_[u].end(), v), v);
    adj_[v].insert(std::lower_bound(adj_[v].begin(), adj_[v].end(), u), u);
    ++m_;
}

bool Graph::is_connected() const {
    const int n = vertex_count();
    if (n == 0) return false;
    std::vector<char> seen(n, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj_[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
    }
    return count == n;
}

bool Graph::is_clique() const {
    const int n = vertex_count();
    for (int v = 0; v < n; ++v)
        if (degree(v) != n - 1) return false;
    return true;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(m_);
    for (int u = 0; u < vertex_count(); ++u)
        for (int v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

Graph Graph::induced(const std::vector<int>& keep, std::vector<int>* old_to_new) const {
    std::vector<int> sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> map(vertex_count(), -1);
    for (std::size_t i = 0; i < sorted.size(); ++i) map[sorted[i]] = static_cast<int>(i);
    Graph g(static_cast<int>(sorted.size()));
    for (int u : sorted)
        for (int v : adj_[u])
            if (map[v] >= 0 && u < v) g.add_edge(map[u], map[v]);
    if (old_to_new) *old_to_new = std::move(map);
    return g;
}

std::vector<std::vector<int>> Graph::components() const {
    std::vector<int> all(vertex_count());
    for (int i = 0; i < vertex_count(); ++i) all[i] = i;
    return components_within(all);
}

std::vector<std::vector<int>> Graph::components_within(const std::vector<int>& subset) const {
    std::vector<char> in(vertex_count(), 0), seen(vertex_count(), 0);
    for (int v : subset) in[v] = 1;
    std::vector<int> order = subset;
    std::sort(order.begin(), order.end());
    std::vector<std::vector<int>> comps;
    for (int s : order) {
        if (seen[s]) continue;
        std::vector<int> comp, stack = {s};
        seen[s] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (int w : adj_[v])
                if (in[w] && !seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

Graph Graph::complement() const {
    const int n = vertex_count();
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (!has_edge(u, v)) g.add_edge(u, v);
    return g;
}

SizeBounds SizeBounds::from(int n, int p) {
    if (p <= 0) throw std::invalid_argument("part count must be positive");
    if (p > n) throw std::invalid_argument("part count exceeds vertex count");
    SizeBounds b;
    b.small = n / p;
    b.large = (n + p - 1) / p;
    b.num_large = n % p;
    return b;
}

std::vector<std::vector<int>> Partition::parts(int p) const {
    std::vector<std::vector<int>> out(p);
    for (std::size_t v = 0; v < assignment.size(); ++v) {
        int id = assignment[v];
        if (id < 0 || id >= p) throw std::invalid_argument("part id out of range");
        out[id].push_back(static_cast<int>(v));
    }
    return out;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

int parse_int(const std::string& tok, int line_no, const char* what) {
    try {
        std::size_t pos = 0;
        long value = std::stol(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("trailing garbage");
        if (value < -1000000000L || value > 1000000000L) throw std::out_of_range("magnitude");
        return static_cast<int>(value);
    } catch (const std::exception&) {
        throw ParseError(line_no, std::string("expected integer for ") + what + ", got '" + tok + "'");
    }
}

}  // namespace

Instance parse_instance(std::istream& in) {
    std::string line;
    int line_no = 0;
    bool have_header = false;
    int n = 0, m = 0, p = 0, edges_seen = 0;
    Graph g;

    while (std::getline(in, line)) {
        ++line_no;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] == "c") continue;
        if (toks[0] == "p") {
            if (have_header) throw ParseError(line_no, "duplicate problem line");
            if (toks.size() != 5 || toks[1] != "ecp")
                throw ParseError(line_no, "malformed problem line, expected 'p ecp <n> <m> <p>'");
            n = parse_int(toks[2], line_no, "n");
            m = parse_int(toks[3], line_no, "m");
            p = parse_int(toks[4], line_no, "p");
            if (n <= 0) throw ParseError(line_no, "vertex count must be positive");
            if (m < 0) throw ParseError(line_no, "edge count must be non-negative");
            if (p < 1 || p > n)
                throw ParseError(line_no, "p out of range: need 1 <= p <= n, got p=" + std::to_string(p) +
                                              ", n=" + std::to_string(n));
            g = Graph(n);
            have_header = true;
            continue;
        }
        if (toks[0] == "e") {
            if (!have_header) throw ParseError(line_no, "edge before problem line");
            if (toks.size() != 3) throw ParseError(line_no, "malformed edge line, expected 'e <u> <v>'");
            int u = parse_int(toks[1], line_no, "u");
            int v = parse_int(toks[2], line_no, "v");
            if (u < 1 || u > n || v < 1 || v > n) throw ParseError(line_no, "vertex index out of range");
            if (u == v) throw ParseError(line_no, "self-loop");
            if (g.has_edge(u - 1, v - 1)) throw ParseError(line_no, "duplicate edge");
            g.add_edge(u - 1, v - 1);
            ++edges_seen;
            continue;
        }
        throw ParseError(line_no, "unknown directive '" + toks[0] + "'");
    }
    if (!have_header) throw ParseError(line_no + 1, "missing problem line");
    if (edges_seen != m)
        throw ParseError(line_no + 1, "edge count mismatch: header says " + std::to_string(m) + ", found " +
                                          std::to_string(edges_seen));
    if (!g.is_connected()) throw ParseError(line_no + 1, "graph is disconnected");
    return Instance{std::move(g), p};
}

Instance parse_instance_text(const std::string& text) {
    std::istringstream ss(text);
    return parse_instance(ss);
}

Instance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    return parse_instance(in);
}

std::string serialize_instance(const Instance& instance) {
    std::ostringstream out;
    const Graph& g = instance.graph;
    out << "p ecp " << g.vertex_count() << ' ' << g.edge_count() << ' ' << instance.parts << '\n';
    for (const auto& [u, v] : g.edges()) out << "e " << u + 1 << ' ' << v + 1 << '\n';
    return out.str();
}

std::string instance_digest(const Instance& instance) {
    const std::string text = serialize_instance(instance);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string hex(16, '0');
    for (int i = 15; i >= 0; --i) {
        hex[i] = digits[h & 0xf];
        h >>= 4;
    }
    return hex;
}

std::string serialize_solution(const Instance& instance, const std::optional<Partition>& partition) {
    std::ostringstream out;
    if (!partition) {
        out << "s no\n";
        return out.str();
    }
    out << "s yes\n";
    for (int v = 0; v < instance.graph.vertex_count(); ++v)
        out << "a " << v + 1 << ' ' << partition->assignment[v] + 1 << '\n';
    return out.str();
}

std::optional<Partition> parse_solution_text(const std::string& text, int n) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_status = false, yes = false;
    Partition part;
    part.assignment.assign(n, -1);
    while (std::getline(in, line)) {
        ++line_no;
        auto toks = tokenize(line);
        if (toks.empty() || toks[0] == "c") continue;
        if (toks[0] == "s") {
            if (have_status) throw ParseError(line_no, "duplicate status line");
            if (toks.size() != 2 || (toks[1] != "yes" && toks[1] != "no"))
                throw ParseError(line_no, "malformed status line, expected 's yes' or 's no'");
            yes = toks[1] == "yes";
            have_status = true;
            continue;
        }
        if (toks[0] == "a") {
            if (!have_status || !yes) throw ParseError(line_no, "assignment outside a yes solution");
            if (toks.size() != 3) throw ParseError(line_no, "malformed assignment line");
            int v = parse_int(toks[1], line_no, "vertex");
            int id = parse_int(toks[2], line_no, "part");
            if (v < 1 || v > n) throw ParseError(line_no, "vertex index out of range");
            if (id < 1) throw ParseError(line_no, "part id must be positive");
            if (part.assignment[v - 1] != -1) throw ParseError(line_no, "vertex assigned twice");
            part.assignment[v - 1] = id - 1;
            continue;
        }
        throw ParseError(line_no, "unknown directive '" + toks[0] + "'");
    }
    if (!have_status) throw ParseError(line_no + 1, "missing status line");
    if (!yes) return std::nullopt;
    for (int v = 0; v < n; ++v)
        if (part.assignment[v] == -1)
            throw ParseError(line_no + 1, "vertex " + std::to_string(v + 1) + " unassigned");
    return part;
}

bool is_connected_subset(const Graph& graph, const std::vector<int>& subset) {
    if (subset.empty()) throw std::invalid_argument("empty subset");
    return graph.components_within(subset).size() == 1;
}

Verdict verify_partition(const Instance& instance, const Partition& partition) {
    const Graph& g = instance.graph;
    const int n = g.vertex_count();
    const int p = instance.parts;
    if (static_cast<int>(partition.assignment.size()) != n)
        throw std::invalid_argument("assignment does not cover every vertex");
    auto parts = partition.parts(p);  // throws on part id >= p

    Verdict verdict;
    const SizeBounds b = instance.bounds();
    int larges = 0;
    for (int i = 0; i < p; ++i) {
        const auto& part = parts[i];
        if (part.empty()) {
            verdict.violations.push_back("part " + std::to_string(i) + " is empty");
            continue;
        }
        if (!is_connected_subset(g, part))
            verdict.violations.push_back("part " + std::to_string(i) + " is disconnected");
        int size = static_cast<int>(part.size());
        if (size != b.small && size != b.large)
            verdict.violations.push_back("part " + std::to_string(i) + " has size " + std::to_string(size) +
                                         ", expected " + std::to_string(b.small) + " or " +
                                         std::to_string(b.large));
        else if (size == b.large && b.large != b.small)
            ++larges;
    }
    if (b.large != b.small && larges != b.num_large)
        verdict.violations.push_back("expected exactly " + std::to_string(b.num_large) + " parts of size " +
                                     std::to_string(b.large) + ", found " + std::to_string(larges));
    verdict.valid = verdict.violations.empty();
    return verdict;
}

}  // namespace ecp
