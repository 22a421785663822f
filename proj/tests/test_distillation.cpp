#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qgrid/distillation.hpp"
#include "qgrid/validation/suites.hpp"

using namespace qgrid;

TEST_CASE("bbpssw map") {
    auto r = bbpssw(0.8);
    CHECK(r.fidelity == doctest::Approx(0.838150289017341).epsilon(1e-14));
    CHECK(r.success_prob == doctest::Approx(0.7688888888888889).epsilon(1e-14));
    CHECK_THROWS_AS(bbpssw(0.2), std::domain_error);
}

TEST_CASE("bbpssw fixed points") {
    auto top = bbpssw(1.0);
    CHECK(top.fidelity == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(top.success_prob == doctest::Approx(1.0).epsilon(1e-15));
    auto bottom = bbpssw(0.25);
    CHECK(bottom.fidelity == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(bottom.success_prob == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("bbpssw improves fidelity above one half") {
    for (double f : {0.6, 0.7, 0.85, 0.99})
        CHECK(bbpssw(f).fidelity > f);
}

TEST_CASE("single attempt distribution") {
    auto dist = ladder_distribution({1, 0.3, 0.9});
    REQUIRE(dist.outcomes.size() == 2);
    CHECK(dist.outcomes[0].fidelity.value() == doctest::Approx(0.9));
    CHECK(dist.outcomes[0].prob == doctest::Approx(0.3));
    CHECK(dist.no_link_prob() == doctest::Approx(0.7));
}

TEST_CASE("two attempt distribution") {
    const double p = 0.6, f = 0.85;
    auto r = bbpssw(f);
    auto dist = ladder_distribution({2, p, f});
    double total = 0.0;
    for (const auto& e : dist.outcomes) total += e.prob;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // Both links up: one distillation attempt decides everything.
    double p_f2 = p * p * r.success_prob;
    double p_f0 = 2 * p * (1 - p);
    double p_none = (1 - p) * (1 - p) + p * p * (1 - r.success_prob);
    CHECK(dist.no_link_prob() == doctest::Approx(p_none).epsilon(1e-12));
    for (const auto& e : dist.outcomes) {
        if (!e.fidelity) continue;
        if (std::abs(*e.fidelity - f) < 1e-12)
            CHECK(e.prob == doctest::Approx(p_f0).epsilon(1e-12));
        else
            CHECK(e.prob == doctest::Approx(p_f2).epsilon(1e-12));
    }
}

TEST_CASE("distributions are normalized for larger attempt counts") {
    for (int t : {3, 4, 5, 6, 7, 8}) {
        auto dist = ladder_distribution({t, 0.55, 0.8});
        double total = 0.0;
        for (const auto& e : dist.outcomes) {
            CHECK(e.prob >= 0.0);
            total += e.prob;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("sampling follows the distribution") {
    auto dist = ladder_distribution({4, 0.7, 0.85});
    Rng rng(99);
    const long samples = 100000;
    std::vector<long> counts(dist.outcomes.size(), 0);
    for (long i = 0; i < samples; ++i) {
        LinkOutcome o = sample_link(dist, rng);
        for (std::size_t k = 0; k < dist.outcomes.size(); ++k) {
            const auto& e = dist.outcomes[k];
            bool match = e.fidelity
                             ? (o.present &&
                                std::abs(o.fidelity - *e.fidelity) < 1e-12)
                             : !o.present;
            if (match) {
                ++counts[k];
                break;
            }
        }
    }
    for (std::size_t k = 0; k < dist.outcomes.size(); ++k) {
        double freq = static_cast<double>(counts[k]) / samples;
        CHECK(freq == doctest::Approx(dist.outcomes[k].prob).epsilon(0.15));
    }
}

TEST_CASE("invalid configurations are rejected") {
    CHECK_THROWS_AS(ladder_distribution({0, 0.5, 0.9}), std::domain_error);
    CHECK_THROWS_AS(ladder_distribution({2, 1.5, 0.9}), std::domain_error);
    CHECK_THROWS_AS(ladder_distribution({2, 0.5, 0.1}), std::domain_error);
}

TEST_CASE("distillation suite") {
    auto results = validation::suite_distillation(4242);
    for (const auto& r : results) {
        INFO(r.name, " max_err=", r.max_err, " ", r.detail);
        if (!r.informational) CHECK(r.pass);
    }
}
