#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "qgrid/rng.hpp"

namespace qgrid {

// Directions index a node's four memories: memory id = node * 4 + dir.
enum class Dir : int { Up = 0, Left = 1, Down = 2, Right = 3 };

struct Coord {
    int row;
    int col;
    friend bool operator==(const Coord&, const Coord&) = default;
};

struct GridSpec {
    int size = 0;                    // size x size nodes
    std::array<int, 2> consumers{};  // node indices of Alice, Bob
};

inline int node_index(Coord c, int size) { return c.row * size + c.col; }
inline Coord coord_of(int node, int size) { return {node / size, node % size}; }
inline int memory_id(int node, Dir d) { return node * 4 + static_cast<int>(d); }
inline int memory_node(int mem) { return mem / 4; }
inline Dir memory_dir(int mem) { return static_cast<Dir>(mem % 4); }

void validate_grid(const GridSpec& spec);

int manhattan(Coord a, Coord b);

// A physical link connecting the facing memories of adjacent nodes; a is
// the top/left endpoint.
struct Link {
    int node_a, node_b;
    int mem_a, mem_b;
};

// All links of a full size x size grid, ordered row-major: for each node,
// its right link then its down link.
std::vector<Link> grid_links(int size);

// Nodes v with dist(v,A)+dist(v,B) <= dist(A,B) + 2*level (Manhattan),
// clipped to the grid; level < 0 means the whole grid.
std::vector<bool> select_region(const GridSpec& spec, int level);

struct Grid {
    GridSpec spec;
    int region_level = -1;
    std::vector<bool> active;      // nodes inside the region
    std::vector<Link> active_links; // links with both endpoints active
};

Grid build_grid(const GridSpec& spec, int region_level);

// Outcome of one heralding round: the subset of active links that
// succeeded, with node adjacency for graph work.
class HeraldedGraph {
public:
    HeraldedGraph(const GridSpec& spec, std::vector<Link> edges);

    int grid_size() const { return spec_.size; }
    const GridSpec& spec() const { return spec_; }
    const std::vector<Link>& edges() const { return edges_; }
    const std::vector<int>& adjacency(int node) const { return adj_[node]; }
    int degree(int node) const { return static_cast<int>(adj_[node].size()); }
    // Edge index between two nodes, or -1.
    int edge_between(int u, int v) const;
    bool is_consumer(int node) const {
        return node == spec_.consumers[0] || node == spec_.consumers[1];
    }

private:
    GridSpec spec_;
    std::vector<Link> edges_;
    std::vector<std::vector<int>> adj_; // node -> edge indices
};

// Each active link succeeds independently with probability p.
HeraldedGraph herald_links(const Grid& grid, double p, Rng& rng);

struct Cycle {
    std::vector<int> nodes; // in cycle order, starting at the smallest node
};

struct CycleReport {
    std::vector<Cycle> cycles; // all simple cycles of length <= max_len
    bool oversized_present = false; // a longer consumer-free cycle exists
};

// Enumerates simple cycles up to max_len and flags whether any strictly
// longer simple cycle avoiding the consumer nodes exists.
CycleReport enumerate_cycles(const HeraldedGraph& graph, int max_len);

// The memory scheduled for X by the polygon rule: the left-direction memory
// of the cycle's bottom-right (row-major maximal) node.
int bottom_right_memory(const Cycle& cycle, int grid_size);

// One line per heralded edge: "<mem_a> <mem_b>\n", edge order.
void dump_graph(std::ostream& os, const HeraldedGraph& graph);

} // namespace qgrid
