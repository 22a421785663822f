#include "qgrid/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

namespace qgrid {

namespace {

struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

struct TrialRecord {
    bool aborted;
    double rate;
    double fidelity;
    int swaps;
    int max_qubits;
};

void parallel_for(long count, const std::function<void(long)>& body) {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    unsigned workers = static_cast<unsigned>(
        std::min<long>(count, static_cast<long>(hw)));
    if (workers <= 1) {
        for (long i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<long> next{0};
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (long i = next.fetch_add(64); i < count;
                 i = next.fetch_add(64)) {
                long end = std::min(count, i + 64);
                for (long j = i; j < end; ++j) body(j);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace

AggregateStats run_trials(const SimulationSpec& spec) {
    if (spec.trials < 1) throw std::domain_error("trials must be >= 1");
    FidelityDistribution dist;
    const FidelityDistribution* dist_ptr = nullptr;
    if (spec.config.distill_rounds > 1) {
        dist = ladder_distribution({spec.config.distill_rounds,
                                    spec.config.link_prob,
                                    spec.config.link_fidelity});
        dist_ptr = &dist;
    }
    const double attempts = spec.config.distill_rounds;

    std::vector<TrialRecord> records(spec.trials);
    parallel_for(spec.trials, [&](long i) {
        RoundOutcome out = execute_round(
            spec.config, derive_seed(spec.master_seed, i), dist_ptr);
        TrialRecord& r = records[i];
        r.aborted = out.aborted;
        if (out.aborted) {
            r.rate = 0.0;
            r.fidelity = 0.0;
            r.swaps = 0;
            r.max_qubits = 0;
        } else {
            double ic = coherent_information(*out.final_state);
            r.rate = std::max(0.0, ic) / attempts;
            r.fidelity = out.final_state->coeff(0, 0);
            r.swaps = out.swaps_performed;
            r.max_qubits = out.max_state_qubits;
        }
    });

    Kahan rate, rate_sq, fid, swaps, maxq;
    long aborted = 0;
    for (const TrialRecord& r : records) {
        rate.add(r.rate);
        rate_sq.add(r.rate * r.rate);
        if (r.aborted) {
            ++aborted;
        } else {
            fid.add(r.fidelity);
            swaps.add(r.swaps);
            maxq.add(r.max_qubits);
        }
    }
    AggregateStats stats;
    stats.trials = spec.trials;
    const double n = static_cast<double>(spec.trials);
    stats.mean_rate = rate.sum / n;
    double var = std::max(0.0, rate_sq.sum / n - stats.mean_rate * stats.mean_rate);
    stats.std_error = spec.trials > 1 ? std::sqrt(var / (n - 1)) : 0.0;
    stats.abort_fraction = static_cast<double>(aborted) / n;
    const long ok = spec.trials - aborted;
    stats.mean_fidelity = ok > 0 ? fid.sum / ok : 0.0;
    stats.mean_swaps = ok > 0 ? swaps.sum / ok : 0.0;
    stats.mean_max_qubits = ok > 0 ? maxq.sum / ok : 0.0;
    return stats;
}

SweepResult envelope_sweep(const SimulationSpec& base, const SweepAxes& axes) {
    if (axes.fidelities.empty() || axes.link_probs.empty() ||
        axes.region_levels.empty())
        throw std::domain_error("sweep axes must be non-empty");
    SweepResult result;
    std::uint64_t point_index = 0;
    for (double f : axes.fidelities) {
        for (double p : axes.link_probs) {
            const SweepPoint* best = nullptr;
            std::size_t first = result.points.size();
            for (int level : axes.region_levels) {
                SimulationSpec spec = base;
                spec.config.link_fidelity = f;
                spec.config.link_prob = p;
                spec.config.region_level = level;
                spec.master_seed = derive_seed(base.master_seed, point_index++);
                SweepPoint pt{f,
                              p,
                              spec.config.grid.size,
                              level,
                              spec.config.k_hop,
                              spec.config.distill_rounds,
                              run_trials(spec)};
                result.points.push_back(pt);
            }
            for (std::size_t i = first; i < result.points.size(); ++i)
                if (!best ||
                    result.points[i].stats.mean_rate > best->stats.mean_rate)
                    best = &result.points[i];
            result.envelope.push_back(*best);
        }
    }
    return result;
}

std::vector<CycleFractionRow> cycle_fraction_study(
    const std::vector<int>& grid_sizes, const std::vector<double>& link_probs,
    const std::vector<int>& cycle_lens, long trials,
    std::uint64_t master_seed) {
    if (trials < 1) throw std::domain_error("trials must be >= 1");
    if (cycle_lens.empty()) throw std::domain_error("no cycle lengths given");
    const int max_len = *std::max_element(cycle_lens.begin(), cycle_lens.end());

    std::vector<CycleFractionRow> rows;
    std::uint64_t stream = 0;
    for (int size : grid_sizes) {
        // The study treats every node as a helper: park the consumers in a
        // corner and ignore them in the counts (the rules below only use
        // cycle geometry, not consumer placement).
        GridSpec spec{size, {0, 1}};
        Grid grid = build_grid(spec, -1);
        for (double p : link_probs) {
            std::vector<long> pre(cycle_lens.size(), 0);
            std::vector<long> post(cycle_lens.size(), 0);
            Rng rng(derive_seed(master_seed, stream++));
            for (long t = 0; t < trials; ++t) {
                HeraldedGraph graph = herald_links(grid, p, rng);
                CycleReport report = enumerate_cycles(graph, max_len);

                // Does any cycle survive once the given memories are measured
                // out?  Union-find over the surviving edges.
                auto cycle_remains = [&](const std::set<int>& marked) {
                    std::vector<int> parent(size * size);
                    std::iota(parent.begin(), parent.end(), 0);
                    std::function<int(int)> find = [&](int v) {
                        while (parent[v] != v) v = parent[v] = parent[parent[v]];
                        return v;
                    };
                    for (const Link& l : graph.edges()) {
                        if (marked.count(l.mem_a) || marked.count(l.mem_b))
                            continue;
                        int a = find(l.node_a), b = find(l.node_b);
                        if (a == b) return true;
                        parent[a] = b;
                    }
                    return false;
                };

                for (std::size_t i = 0; i < cycle_lens.size(); ++i) {
                    const int len = cycle_lens[i];
                    // pre: a polygon of exactly this length was observed.
                    bool seen = false;
                    // post: apply the matching k-hop rule -- break every
                    // polygon up to this length -- and ask whether any
                    // (necessarily longer) cycle survives.
                    std::set<int> marked;
                    for (const Cycle& c : report.cycles) {
                        const int cl = static_cast<int>(c.nodes.size());
                        seen = seen || cl == len;
                        if (cl <= len)
                            marked.insert(bottom_right_memory(c, size));
                    }
                    if (seen) ++pre[i];
                    if (cycle_remains(marked)) ++post[i];
                }
            }
            for (std::size_t i = 0; i < cycle_lens.size(); ++i)
                rows.push_back({size, p, cycle_lens[i],
                                static_cast<double>(pre[i]) / trials,
                                static_cast<double>(post[i]) / trials});
        }
    }
    return rows;
}

} // namespace qgrid
