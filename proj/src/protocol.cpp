#include "qgrid/protocol.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace qgrid {

namespace {

// Shortest-path length from `from` to `to` over heralded edges, restricted
// to nodes with index < bound; -1 if unreachable.
int bounded_bfs(const HeraldedGraph& g, int from, int to, int bound,
                int max_len) {
    if (from >= bound || to >= bound) return -1;
    std::vector<int> dist(static_cast<std::size_t>(g.grid_size()) *
                              g.grid_size(),
                          -1);
    std::deque<int> queue{from};
    dist[from] = 0;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        if (v == to) return dist[v];
        if (max_len >= 0 && dist[v] >= max_len) continue;
        for (int e : g.adjacency(v)) {
            const Link& l = g.edges()[e];
            int u = l.node_a + l.node_b - v;
            if (u >= bound || dist[u] >= 0) continue;
            dist[u] = dist[v] + 1;
            queue.push_back(u);
        }
    }
    return -1;
}

// Does the subgraph on non-consumer nodes, minus edges with a marked
// memory, contain a cycle? (Component-wise edge count >= node count.)
bool helper_cycle_remains(const HeraldedGraph& g, const std::set<int>& marked) {
    const int n = g.grid_size() * g.grid_size();
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const Link& l : g.edges()) {
        if (g.is_consumer(l.node_a) || g.is_consumer(l.node_b)) continue;
        if (marked.count(l.mem_a) || marked.count(l.mem_b)) continue;
        int a = find(l.node_a), b = find(l.node_b);
        if (a == b) return true;
        parent[a] = b;
    }
    return false;
}

} // namespace

XRuleResult apply_x_rules(const HeraldedGraph& graph, int k_hop) {
    XRuleResult res;
    const int size = graph.grid_size();

    // Polygon rule: a helper whose up and left links are both heralded is
    // the bottom-right corner of a short cycle iff the up and left
    // neighbours connect through earlier (row-major smaller) nodes. The
    // cycle has length (path + 2), so the budget is 2 * k_hop.
    for (int v = 0; v < size * size; ++v) {
        if (graph.is_consumer(v)) continue;
        Coord c = coord_of(v, size);
        if (c.row == 0 || c.col == 0) continue;
        int up = v - size, left = v - 1;
        if (graph.edge_between(v, up) < 0 || graph.edge_between(v, left) < 0)
            continue;
        int limit = k_hop < 0 ? -1 : 2 * k_hop;
        if (bounded_bfs(graph, up, left, v, limit) >= 0)
            res.marked.insert(memory_id(v, Dir::Left));
    }

    // Any cycle the bounded rule could not break forces an abort.
    if (k_hop >= 0)
        res.abort_oversized = helper_cycle_remains(graph, res.marked);

    // Leaf rule: a helper left with a single usable memory measures it out.
    for (int v = 0; v < size * size; ++v) {
        if (graph.is_consumer(v)) continue;
        int last_mem = -1, usable = 0;
        for (int e : graph.adjacency(v)) {
            const Link& l = graph.edges()[e];
            int mem = l.node_a == v ? l.mem_a : l.mem_b;
            if (res.marked.count(mem)) continue;
            ++usable;
            last_mem = mem;
        }
        if (usable == 1) res.marked.insert(last_mem);
    }
    return res;
}

namespace {

struct Topology {
    const HeraldedGraph& g;
    const std::set<int>& marked;
    std::set<int> pruned; // edge indices removed at the consumers

    int my_mem(int edge, int node) const {
        const Link& l = g.edges()[edge];
        return l.node_a == node ? l.mem_a : l.mem_b;
    }
    int other(int edge, int node) const {
        const Link& l = g.edges()[edge];
        return l.node_a + l.node_b - node;
    }
    // Usable for entanglement routing: no marked memory, not pruned.
    bool routable(int edge) const {
        const Link& l = g.edges()[edge];
        return !pruned.count(edge) && !marked.count(l.mem_a) &&
               !marked.count(l.mem_b);
    }
    // Connected component over routable edges, optionally avoiding a node.
    std::vector<bool> component(int start, int avoid = -1) const {
        std::vector<bool> seen(static_cast<std::size_t>(g.grid_size()) *
                                   g.grid_size(),
                               false);
        if (start == avoid) return seen;
        std::deque<int> queue{start};
        seen[start] = true;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int e : g.adjacency(v)) {
                if (!routable(e)) continue;
                int u = other(e, v);
                if (u == avoid || seen[u]) continue;
                seen[u] = true;
                queue.push_back(u);
            }
        }
        return seen;
    }
};

// Drops all but one of a consumer's routable edges: the kept edge is the
// first, in memory-direction order, whose far end still reaches the other
// consumer without passing through this one. Returns the kept memory.
int prune_consumer(Topology& topo, int consumer, int other_consumer) {
    std::vector<int> edges(4, -1);
    for (int e : topo.g.adjacency(consumer)) {
        if (!topo.routable(e)) continue;
        edges[topo.my_mem(e, consumer) % 4] = e;
    }
    int kept = -1;
    for (int d = 0; d < 4 && kept < 0; ++d) {
        int e = edges[d];
        if (e < 0) continue;
        int far = topo.other(e, consumer);
        if (far == other_consumer ||
            topo.component(far, consumer)[other_consumer])
            kept = e;
    }
    if (kept < 0) throw std::logic_error("pruning lost the consumer path");
    for (int d = 0; d < 4; ++d)
        if (edges[d] >= 0 && edges[d] != kept) topo.pruned.insert(edges[d]);
    return topo.my_mem(kept, consumer);
}

} // namespace

RoundPlan plan_round(const ProtocolConfig& config, std::uint64_t seed,
                     const FidelityDistribution* link_dist) {
    validate_grid(config.grid);
    if (config.link_prob < 0.0 || config.link_prob > 1.0)
        throw std::domain_error("link probability outside [0, 1]");
    (void)werner_from_fidelity(config.link_fidelity);
    if (config.distill_rounds < 1)
        throw std::domain_error("distillation attempts must be >= 1");

    Grid grid = build_grid(config.grid, config.region_level);
    for (int c : config.grid.consumers)
        if (!grid.active[c])
            throw std::domain_error("consumer outside the selected region");

    RoundPlan plan;
    plan.grid_size = config.grid.size;

    Rng rng(seed);
    std::vector<Link> up;
    std::vector<double> weights;
    FidelityDistribution local;
    if (config.distill_rounds > 1 && !link_dist) {
        local = ladder_distribution({config.distill_rounds, config.link_prob,
                                     config.link_fidelity});
        link_dist = &local;
    }
    for (const Link& l : grid.active_links) {
        if (link_dist) {
            LinkOutcome o = sample_link(*link_dist, rng);
            if (!o.present) continue;
            up.push_back(l);
            weights.push_back(werner_from_fidelity(o.fidelity).weight);
        } else {
            if (!rng.bernoulli(config.link_prob)) continue;
            up.push_back(l);
            weights.push_back(werner_from_fidelity(config.link_fidelity).weight);
        }
    }
    HeraldedGraph graph(config.grid, std::move(up));
    plan.heralded_edges = static_cast<int>(graph.edges().size());

    XRuleResult rules = apply_x_rules(graph, config.k_hop);
    if (rules.abort_oversized) {
        plan.aborted = true;
        plan.reason = AbortReason::OversizedCycle;
        return plan;
    }

    Topology topo{graph, rules.marked, {}};
    const int ca = config.grid.consumers[0], cb = config.grid.consumers[1];
    if (!topo.component(ca)[cb]) {
        plan.aborted = true;
        plan.reason = AbortReason::ConsumersDisconnected;
        return plan;
    }

    plan.consumer_mem_a = prune_consumer(topo, ca, cb);
    plan.consumer_mem_b = prune_consumer(topo, cb, ca);
    plan.x_marked = rules.marked;

    // The component the consumers live in after pruning.
    std::vector<bool> core = topo.component(ca);

    // A helper left with one usable memory by the pruning measures it out
    // instead of swapping (same rule as the leaf pass, re-checked here).
    const int n = config.grid.size * config.grid.size;
    std::vector<int> swap_count(n, 0);
    std::vector<int> lone_mem(n, -1);
    auto recount = [&]() {
        for (int v = 0; v < n; ++v) {
            swap_count[v] = 0;
            lone_mem[v] = -1;
            if (graph.is_consumer(v)) continue;
            for (int e : graph.adjacency(v)) {
                if (topo.pruned.count(e)) continue;
                int mem = topo.my_mem(e, v);
                if (plan.x_marked.count(mem)) continue;
                ++swap_count[v];
                lone_mem[v] = mem;
            }
        }
    };
    recount();
    for (int v = 0; v < n; ++v)
        if (swap_count[v] == 1) plan.x_marked.insert(lone_mem[v]);
    recount();

    std::vector<bool> scheduled(n, false);
    for (int v = 0; v < n; ++v)
        scheduled[v] = core[v] && !graph.is_consumer(v) && swap_count[v] >= 2;

    // Participating links: every pair that ends up inside the final merge
    // lineage, including marked memories that are measured out after their
    // partner swaps them in.
    std::vector<std::vector<std::pair<int, int>>> part_adj(n); // (node, edge#)
    for (std::size_t e = 0; e < graph.edges().size(); ++e) {
        if (topo.pruned.count(static_cast<int>(e))) continue;
        const Link& l = graph.edges()[e];
        bool ma = plan.x_marked.count(l.mem_a) > 0;
        bool mb = plan.x_marked.count(l.mem_b) > 0;
        bool take = false;
        if (!ma && !mb)
            take = core[l.node_a] && core[l.node_b];
        else if (ma != mb)
            take = scheduled[ma ? l.node_b : l.node_a];
        if (!take) continue;
        plan.links.push_back({l.mem_a, l.mem_b, weights[e]});
        part_adj[l.node_a].push_back({l.node_b, static_cast<int>(e)});
        part_adj[l.node_b].push_back({l.node_a, static_cast<int>(e)});
    }

    // Visit order. Linear sweep: row-major. Consumer-greedy: repeatedly
    // take the smallest-index unvisited helper already holding a qubit of
    // the consumer-side state.
    std::vector<int> order;
    for (int v = 0; v < n; ++v)
        if (scheduled[v]) order.push_back(v);
    if (config.scheduler == SchedulerKind::ConsumerGreedy) {
        // A helper holds a qubit of the consumer-side state once a link of
        // its own, unmarked on both ends, was swapped in by the far node
        // (or is Alice's kept link).
        std::vector<bool> in_main(n, false);
        in_main[ca] = true;
        auto holds_main = [&](int v) {
            for (auto [u, e] : part_adj[v]) {
                if (!in_main[u]) continue;
                const Link& l = graph.edges()[e];
                if (plan.x_marked.count(l.mem_a) ||
                    plan.x_marked.count(l.mem_b))
                    continue;
                return true;
            }
            return false;
        };
        std::vector<bool> visited(n, false);
        std::vector<int> greedy;
        while (greedy.size() < order.size()) {
            int pick = -1;
            for (int v : order) {
                if (!visited[v] && holds_main(v)) {
                    pick = v;
                    break;
                }
            }
            if (pick < 0)
                throw std::logic_error("greedy schedule cannot progress");
            visited[pick] = true;
            in_main[pick] = true;
            greedy.push_back(pick);
        }
        order = std::move(greedy);
    }
    plan.schedule.nodes = std::move(order);
    return plan;
}

RoundOutcome execute_round(const ProtocolConfig& config, std::uint64_t seed,
                           const FidelityDistribution* link_dist,
                           std::ostream* trace) {
    RoundPlan plan = plan_round(config, seed, link_dist);
    DiagonalBackend backend;
    return run_plan(plan, backend, trace);
}

} // namespace qgrid
