#pragma once

#include <optional>
#include <vector>

#include "qgrid/rng.hpp"

namespace qgrid {

struct BbpsswResult {
    double fidelity;     // output fidelity on success
    double success_prob;
};

// One BBPSSW purification round on two equal-fidelity Werner pairs.
BbpsswResult bbpssw(double fidelity);

struct DistillationConfig {
    int attempts = 1;        // raw heralding attempts per link slot
    double link_prob = 1.0;  // per-attempt heralding probability
    double fidelity = 1.0;   // raw pair fidelity
};

// Terminal distribution of a link slot after pairwise ladder distillation:
// at most one pair survives, at the tier it reached; nullopt = no link.
struct FidelityDistribution {
    struct Entry {
        std::optional<double> fidelity;
        double prob;
    };
    std::vector<Entry> outcomes;

    double no_link_prob() const;
    double mean_success_fidelity() const; // conditional on a link
};

// Exact enumeration: Binomial(attempts, link_prob) raw pairs at tier 0,
// then repeatedly purify the two lowest-tier equal pairs (success moves
// one pair up a tier, failure consumes both) until no tier has two.
FidelityDistribution ladder_distribution(const DistillationConfig& config);

struct LinkOutcome {
    bool present = false;
    double fidelity = 0.0;
};

LinkOutcome sample_link(const FidelityDistribution& dist, Rng& rng);

} // namespace qgrid
