#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qgrid/protocol.hpp"

namespace qgrid {

struct SimulationSpec {
    ProtocolConfig config;
    long trials = 0;
    std::uint64_t master_seed = 0;
};

struct AggregateStats {
    long trials = 0;
    double mean_rate = 0.0;      // mean of max(0, I_c) / attempts
    double std_error = 0.0;      // standard error of the mean rate
    double abort_fraction = 0.0;
    double mean_swaps = 0.0;     // over non-aborted rounds
    double mean_max_qubits = 0.0; // over non-aborted rounds
    double mean_fidelity = 0.0;  // final-state Phi+ weight, non-aborted
};

// Runs trials in parallel with per-trial derived seeds, reduced in trial
// order so results do not depend on thread count.
AggregateStats run_trials(const SimulationSpec& spec);

struct SweepPoint {
    double fidelity;
    double link_prob;
    int grid_size;
    int region_level;
    int k_hop;
    int distill_rounds;
    AggregateStats stats;
};

struct SweepAxes {
    std::vector<double> fidelities;
    std::vector<double> link_probs;
    std::vector<int> region_levels; // -1 = all
};

struct SweepResult {
    std::vector<SweepPoint> points;
    // Per (fidelity, link_prob): the point with the best mean rate across
    // region levels.
    std::vector<SweepPoint> envelope;
};

SweepResult envelope_sweep(const SimulationSpec& base, const SweepAxes& axes);

struct CycleFractionRow {
    int grid_size;
    double link_prob;
    int cycle_len;
    double fraction_pre;  // rounds with >= 1 cycle of this exact length
    double fraction_post; // rounds where any cycle survives once every
                          // polygon up to this length is broken by the X rule
};

// Pure graph statistics; no quantum state is simulated.
std::vector<CycleFractionRow> cycle_fraction_study(
    const std::vector<int>& grid_sizes, const std::vector<double>& link_probs,
    const std::vector<int>& cycle_lens, long trials, std::uint64_t master_seed);

} // namespace qgrid
