#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qgrid/montecarlo.hpp"

using namespace qgrid;

TEST_CASE("aggregation is deterministic regardless of thread scheduling") {
    SimulationSpec spec;
    spec.config.grid = {3, {2, 3}};
    spec.config.link_prob = 0.8;
    spec.config.link_fidelity = 0.92;
    spec.trials = 2000;
    spec.master_seed = 31337;
    AggregateStats a = run_trials(spec);
    AggregateStats b = run_trials(spec);
    CHECK(a.mean_rate == b.mean_rate);
    CHECK(a.std_error == b.std_error);
    CHECK(a.abort_fraction == b.abort_fraction);
    CHECK(a.mean_fidelity == b.mean_fidelity);
}

TEST_CASE("perfect links, perfect fidelity gives unit rate") {
    SimulationSpec spec;
    spec.config.grid = {2, {0, 3}};
    spec.config.link_prob = 1.0;
    spec.config.link_fidelity = 1.0;
    spec.config.k_hop = -1;
    spec.trials = 50;
    spec.master_seed = 1;
    AggregateStats stats = run_trials(spec);
    CHECK(stats.mean_rate == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(stats.std_error == doctest::Approx(0.0));
    CHECK(stats.abort_fraction == 0.0);
    CHECK(stats.mean_fidelity == doctest::Approx(1.0));
}

TEST_CASE("no links means every round aborts") {
    SimulationSpec spec;
    spec.config.grid = {3, {0, 8}};
    spec.config.link_prob = 0.0;
    spec.trials = 20;
    spec.master_seed = 5;
    AggregateStats stats = run_trials(spec);
    CHECK(stats.abort_fraction == 1.0);
    CHECK(stats.mean_rate == 0.0);
}

TEST_CASE("sweep covers the axis grid and tracks the best region") {
    SimulationSpec base;
    base.config.grid = {3, {2, 3}};
    base.config.k_hop = -1;
    base.trials = 200;
    base.master_seed = 777;
    SweepAxes axes;
    axes.fidelities = {0.9, 1.0};
    axes.link_probs = {0.7, 0.9};
    axes.region_levels = {0, -1};
    SweepResult result = envelope_sweep(base, axes);
    CHECK(result.points.size() == 8);
    CHECK(result.envelope.size() == 4);
    for (const SweepPoint& env : result.envelope) {
        for (const SweepPoint& pt : result.points) {
            if (pt.fidelity == env.fidelity && pt.link_prob == env.link_prob)
                CHECK(env.stats.mean_rate >= pt.stats.mean_rate);
        }
    }
}

TEST_CASE("cycle fractions at the extremes") {
    auto rows = cycle_fraction_study({3}, {0.0, 1.0}, {4, 6}, 50, 2024);
    REQUIRE(rows.size() == 4);
    // p = 0: no edges at all.
    CHECK(rows[0].fraction_pre == 0.0);
    CHECK(rows[0].fraction_post == 0.0);
    // p = 1: every square is present, and the X rule clears them all.
    for (const auto& r : rows) {
        if (r.link_prob == 1.0 && r.cycle_len == 4) {
            CHECK(r.fraction_pre == 1.0);
            CHECK(r.fraction_post == 0.0);
        }
        if (r.link_prob == 1.0 && r.cycle_len == 6)
            CHECK(r.fraction_pre == 1.0);
    }
}

TEST_CASE("invalid monte carlo inputs are rejected") {
    SimulationSpec spec;
    spec.config.grid = {3, {2, 3}};
    spec.trials = 0;
    CHECK_THROWS_AS(run_trials(spec), std::domain_error);
    CHECK_THROWS_AS(cycle_fraction_study({3}, {0.5}, {}, 10, 1),
                    std::domain_error);
}
