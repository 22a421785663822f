#include "qgrid/network.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <stdexcept>

namespace qgrid {

void validate_grid(const GridSpec& spec) {
    if (spec.size < 2) throw std::domain_error("grid size must be >= 2");
    const int n = spec.size * spec.size;
    for (int c : spec.consumers)
        if (c < 0 || c >= n) throw std::domain_error("consumer node off-grid");
    if (spec.consumers[0] == spec.consumers[1])
        throw std::domain_error("consumers must be distinct nodes");
}

int manhattan(Coord a, Coord b) {
    return std::abs(a.row - b.row) + std::abs(a.col - b.col);
}

std::vector<Link> grid_links(int size) {
    std::vector<Link> links;
    links.reserve(2 * size * (size - 1));
    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            int v = node_index({r, c}, size);
            if (c + 1 < size) {
                int u = node_index({r, c + 1}, size);
                links.push_back({v, u, memory_id(v, Dir::Right),
                                 memory_id(u, Dir::Left)});
            }
            if (r + 1 < size) {
                int u = node_index({r + 1, c}, size);
                links.push_back({v, u, memory_id(v, Dir::Down),
                                 memory_id(u, Dir::Up)});
            }
        }
    }
    return links;
}

std::vector<bool> select_region(const GridSpec& spec, int level) {
    validate_grid(spec);
    const int n = spec.size * spec.size;
    std::vector<bool> active(n, true);
    if (level < 0) return active;
    Coord a = coord_of(spec.consumers[0], spec.size);
    Coord b = coord_of(spec.consumers[1], spec.size);
    const int budget = manhattan(a, b) + 2 * level;
    for (int v = 0; v < n; ++v) {
        Coord c = coord_of(v, spec.size);
        active[v] = manhattan(c, a) + manhattan(c, b) <= budget;
    }
    return active;
}

Grid build_grid(const GridSpec& spec, int region_level) {
    Grid grid;
    grid.spec = spec;
    grid.region_level = region_level;
    grid.active = select_region(spec, region_level);
    for (const Link& l : grid_links(spec.size))
        if (grid.active[l.node_a] && grid.active[l.node_b])
            grid.active_links.push_back(l);
    return grid;
}

HeraldedGraph::HeraldedGraph(const GridSpec& spec, std::vector<Link> edges)
    : spec_(spec), edges_(std::move(edges)),
      adj_(static_cast<std::size_t>(spec.size) * spec.size) {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        adj_[edges_[e].node_a].push_back(static_cast<int>(e));
        adj_[edges_[e].node_b].push_back(static_cast<int>(e));
    }
}

int HeraldedGraph::edge_between(int u, int v) const {
    for (int e : adj_[u]) {
        const Link& l = edges_[e];
        if (l.node_a + l.node_b - u == v) return e;
    }
    return -1;
}

HeraldedGraph herald_links(const Grid& grid, double p, Rng& rng) {
    if (p < 0.0 || p > 1.0)
        throw std::domain_error("link probability outside [0, 1]");
    std::vector<Link> up;
    for (const Link& l : grid.active_links)
        if (rng.bernoulli(p)) up.push_back(l);
    return HeraldedGraph(grid.spec, std::move(up));
}

namespace {

// Canonical simple-cycle DFS: cycles are rooted at their smallest node and
// traversed with second node < last node, so each cycle appears once.
struct CycleSearch {
    const HeraldedGraph& g;
    int max_len;           // only record cycles up to this length (<0: all)
    int min_len;           // only record cycles strictly longer than this
    bool skip_consumers;   // ignore consumer nodes entirely
    bool stop_on_found;    // early exit once any cycle is recorded
    std::vector<Cycle>* out;
    bool found = false;

    std::vector<int> path;
    std::vector<bool> on_path;

    bool usable(int v) const {
        return !(skip_consumers && g.is_consumer(v));
    }

    void run() {
        const int n = g.grid_size() * g.grid_size();
        on_path.assign(n, false);
        for (int s = 0; s < n && !(stop_on_found && found); ++s) {
            if (!usable(s)) continue;
            path = {s};
            on_path[s] = true;
            dfs(s);
            on_path[s] = false;
        }
    }

    void dfs(int v) {
        if (stop_on_found && found) return;
        const int root = path.front();
        for (int e : g.adjacency(v)) {
            const Link& l = g.edges()[e];
            int u = l.node_a + l.node_b - v;
            if (u == root && path.size() >= 3 && path[1] < path.back()) {
                const int len = static_cast<int>(path.size());
                if ((max_len < 0 || len <= max_len) && len > min_len) {
                    found = true;
                    if (out) out->push_back(Cycle{path});
                    if (stop_on_found) return;
                }
                continue;
            }
            if (u <= root || on_path[u] || !usable(u)) continue;
            if (max_len >= 0 && static_cast<int>(path.size()) >= max_len)
                continue;
            path.push_back(u);
            on_path[u] = true;
            dfs(u);
            on_path[u] = false;
            path.pop_back();
            if (stop_on_found && found) return;
        }
    }
};

} // namespace

CycleReport enumerate_cycles(const HeraldedGraph& graph, int max_len) {
    CycleReport report;
    CycleSearch small{graph, max_len, 0, false, false, &report.cycles};
    small.run();

    // Oversized check: any consumer-free simple cycle longer than max_len.
    CycleSearch big{graph, -1, max_len, true, true, nullptr};
    big.run();
    report.oversized_present = big.found;
    return report;
}

int bottom_right_memory(const Cycle& cycle, int grid_size) {
    (void)grid_size; // node indices are row-major, so max = bottom-right
    int best = *std::max_element(cycle.nodes.begin(), cycle.nodes.end());
    return memory_id(best, Dir::Left);
}

void dump_graph(std::ostream& os, const HeraldedGraph& graph) {
    for (const Link& l : graph.edges())
        os << l.mem_a << ' ' << l.mem_b << '\n';
}

} // namespace qgrid
