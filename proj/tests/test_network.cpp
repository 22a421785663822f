#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "qgrid/network.hpp"

using namespace qgrid;

TEST_CASE("grid links and memory ids") {
    auto links = grid_links(3);
    CHECK(links.size() == 12);
    // First link: node 0 -> node 1, right memory to left memory.
    CHECK(links[0].node_a == 0);
    CHECK(links[0].node_b == 1);
    CHECK(links[0].mem_a == memory_id(0, Dir::Right));
    CHECK(links[0].mem_b == memory_id(1, Dir::Left));
    // Second link: node 0 -> node 3, down to up.
    CHECK(links[1].node_b == 3);
    CHECK(links[1].mem_a == memory_id(0, Dir::Down));
    CHECK(links[1].mem_b == memory_id(3, Dir::Up));
    CHECK(memory_node(17) == 4);
    CHECK(memory_dir(17) == Dir::Left);
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(validate_grid({1, {0, 0}}), std::domain_error);
    CHECK_THROWS_AS(validate_grid({3, {0, 9}}), std::domain_error);
    CHECK_THROWS_AS(validate_grid({3, {4, 4}}), std::domain_error);
    validate_grid({3, {0, 8}});
}

TEST_CASE("region selection") {
    GridSpec spec{4, {node_index({1, 1}, 4), node_index({1, 3}, 4)}};
    auto level0 = select_region(spec, 0);
    int count0 = 0;
    for (bool b : level0) count0 += b;
    CHECK(count0 == 3); // straight line between the consumers
    CHECK(level0[node_index({1, 2}, 4)]);
    CHECK_FALSE(level0[node_index({0, 0}, 4)]);

    auto level1 = select_region(spec, 1);
    auto all = select_region(spec, -1);
    int count1 = 0, countAll = 0;
    for (bool b : level1) count1 += b;
    for (bool b : all) countAll += b;
    CHECK(count1 > count0);
    CHECK(countAll == 16);
    // Consumers are always inside every region.
    for (int lvl : {0, 1, 2}) {
        auto region = select_region(spec, lvl);
        CHECK(region[spec.consumers[0]]);
        CHECK(region[spec.consumers[1]]);
    }
}

TEST_CASE("heralding extremes") {
    Grid grid = build_grid({3, {0, 8}}, -1);
    Rng rng(7);
    CHECK(herald_links(grid, 1.0, rng).edges().size() == 12);
    CHECK(herald_links(grid, 0.0, rng).edges().size() == 0);
    CHECK_THROWS_AS(herald_links(grid, 1.5, rng), std::domain_error);
}

TEST_CASE("region restricts the heralded links") {
    GridSpec spec{4, {node_index({1, 1}, 4), node_index({1, 3}, 4)}};
    Grid grid = build_grid(spec, 0);
    // Only the two links along the consumer row survive.
    CHECK(grid.active_links.size() == 2);
}

namespace {
HeraldedGraph graph_from_pairs(const GridSpec& spec,
                               const std::vector<std::pair<int, int>>& pairs) {
    std::vector<Link> edges;
    for (const Link& l : grid_links(spec.size))
        for (auto [a, b] : pairs)
            if ((l.node_a == a && l.node_b == b) ||
                (l.node_a == b && l.node_b == a))
                edges.push_back(l);
    return HeraldedGraph(spec, edges);
}
} // namespace

TEST_CASE("cycle enumeration on a unit square") {
    GridSpec spec{3, {7, 8}};
    auto g = graph_from_pairs(spec, {{0, 1}, {0, 3}, {1, 4}, {3, 4}});
    auto report = enumerate_cycles(g, 4);
    REQUIRE(report.cycles.size() == 1);
    CHECK(report.cycles[0].nodes.size() == 4);
    CHECK(report.cycles[0].nodes[0] == 0);
    CHECK_FALSE(report.oversized_present);
    CHECK(bottom_right_memory(report.cycles[0], 3) == memory_id(4, Dir::Left));
}

TEST_CASE("oversized cycle flag ignores consumers") {
    GridSpec spec{3, {7, 8}};
    // 6-ring through nodes 0,1,2,5,4,3 with no chords.
    auto ring = graph_from_pairs(
        spec, {{0, 1}, {1, 2}, {2, 5}, {4, 5}, {3, 4}, {0, 3}});
    auto report = enumerate_cycles(ring, 4);
    CHECK(report.cycles.empty());
    CHECK(report.oversized_present);

    // The same ring through a consumer does not count.
    GridSpec spec2{3, {4, 8}};
    auto ring2 = graph_from_pairs(
        spec2, {{0, 1}, {1, 2}, {2, 5}, {4, 5}, {3, 4}, {0, 3}});
    CHECK_FALSE(enumerate_cycles(ring2, 4).oversized_present);
}

TEST_CASE("edge queries and dump format") {
    GridSpec spec{3, {7, 8}};
    auto g = graph_from_pairs(spec, {{0, 1}, {1, 4}});
    CHECK(g.edge_between(0, 1) >= 0);
    CHECK(g.edge_between(0, 3) < 0);
    CHECK(g.degree(1) == 2);
    std::ostringstream os;
    dump_graph(os, g);
    CHECK(os.str() == "3 5\n6 16\n");
}
