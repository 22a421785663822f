#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <vector>

#include "qgrid/distillation.hpp"
#include "qgrid/network.hpp"
#include "qgrid/state_algebra.hpp"

namespace qgrid {

enum class SchedulerKind { ConsumerGreedy, LinearSweep };

struct ProtocolConfig {
    GridSpec grid;
    double link_prob = 1.0;
    double link_fidelity = 1.0;
    int k_hop = -1;        // polygon rule reach; -1 = unbounded ("global")
    int region_level = -1; // -1 = whole grid
    SchedulerKind scheduler = SchedulerKind::ConsumerGreedy;
    int distill_rounds = 1; // heralding attempts per link slot
};

enum class AbortReason { None, ConsumersDisconnected, OversizedCycle };

// X-rule marks over a heralded graph: memories scheduled for X measurement
// and whether an over-reach cycle forces an abort.
struct XRuleResult {
    std::set<int> marked;       // memory ids
    bool abort_oversized = false;
};

XRuleResult apply_x_rules(const HeraldedGraph& graph, int k_hop);

// Everything decided before any quantum state is touched. Deterministic in
// (config, seed); the same plan can be replayed by any state backend.
struct PlannedLink {
    int mem_a, mem_b;
    double weight; // Werner weight of this heralded pair
};

struct SwapSchedule {
    std::vector<int> nodes; // helper visit order; each performs one swap
};

struct RoundPlan {
    bool aborted = false;
    AbortReason reason = AbortReason::None;
    int grid_size = 0;
    int consumer_mem_a = -1; // Alice's kept memory
    int consumer_mem_b = -1;
    std::vector<PlannedLink> links; // participating links only
    std::set<int> x_marked;         // memories measured out in X
    SwapSchedule schedule;
    int heralded_edges = 0;
};

RoundPlan plan_round(const ProtocolConfig& config, std::uint64_t seed,
                     const FidelityDistribution* link_dist = nullptr);

struct RoundOutcome {
    bool aborted = false;
    AbortReason reason = AbortReason::None;
    std::optional<GHZDiagonalState> final_state; // on consumer memories
    int swaps_performed = 0;
    int max_state_qubits = 0;
};

// Replays a plan against a state backend. The backend supplies the state
// type and four operations; the fast GHZ-diagonal backend is the default.
template <typename Backend>
RoundOutcome run_plan(const RoundPlan& plan, Backend& backend,
                      std::ostream* trace = nullptr) {
    using State = typename Backend::State;
    RoundOutcome outcome;
    if (plan.aborted) {
        outcome.aborted = true;
        outcome.reason = plan.reason;
        return outcome;
    }

    std::vector<State> fragments;
    fragments.reserve(plan.links.size());
    std::vector<int> frag_of; // memory id -> fragment index
    frag_of.assign(static_cast<std::size_t>(plan.grid_size) *
                       plan.grid_size * 4,
                   -1);
    for (const PlannedLink& l : plan.links) {
        frag_of[l.mem_a] = frag_of[l.mem_b] =
            static_cast<int>(fragments.size());
        fragments.push_back(backend.make_link(l));
    }
    outcome.max_state_qubits = plan.links.empty() ? 0 : 2;

    auto resolve_marks = [&](int frag) {
        while (backend.size(fragments[frag]) >= 3) {
            int pos = -1;
            const auto& ids = backend.qubits(fragments[frag]);
            for (std::size_t i = 0; i < ids.size(); ++i) {
                if (plan.x_marked.count(ids[i])) {
                    pos = static_cast<int>(i);
                    break;
                }
            }
            if (pos < 0) break;
            State next = backend.x_measure(fragments[frag], pos);
            fragments[frag] = std::move(next);
        }
    };

    for (int node : plan.schedule.nodes) {
        std::vector<int> members; // fragment index per arm
        std::vector<int> positions;
        for (int d = 0; d < 4; ++d) {
            int mem = node * 4 + d;
            int f = frag_of[mem];
            if (f < 0 || plan.x_marked.count(mem)) continue;
            // Follow fragment merges.
            for (int prev : members)
                if (prev == f)
                    throw std::logic_error(
                        "two memories of one node in the same fragment");
            members.push_back(f);
            positions.push_back(backend.position_of(fragments[f], mem));
        }
        if (members.size() < 2 || members.size() > 4)
            throw std::logic_error("swap arity outside [2, 4]");
        std::vector<const State*> parts;
        for (int f : members) parts.push_back(&fragments[f]);
        State merged = backend.fuse(parts, positions);
        int slot = members[0];
        fragments[slot] = std::move(merged);
        for (int id : backend.qubits(fragments[slot])) frag_of[id] = slot;
        ++outcome.swaps_performed;
        resolve_marks(slot);
        int sz = backend.size(fragments[slot]);
        if (sz > outcome.max_state_qubits) outcome.max_state_qubits = sz;
        if (trace) {
            Coord c = coord_of(node, plan.grid_size);
            *trace << "node=(" << c.row << ',' << c.col << ") action=ghz("
                   << members.size() << ") state_qubits=" << sz << '\n';
        }
    }

    int final_frag = frag_of[plan.consumer_mem_a];
    if (final_frag < 0) throw std::logic_error("consumer memory unentangled");
    const auto& ids = backend.qubits(fragments[final_frag]);
    if (ids.size() != 2 ||
        frag_of[plan.consumer_mem_b] != final_frag)
        throw std::logic_error("final state is not the consumer pair");
    outcome.final_state = backend.finish(fragments[final_frag]);
    return outcome;
}

// Fast backend over GHZ-diagonal states.
struct DiagonalBackend {
    using State = GHZDiagonalState;
    State make_link(const PlannedLink& l) {
        return bell_from_werner(werner_from_weight(l.weight), l.mem_a,
                                l.mem_b);
    }
    State fuse(const std::vector<const State*>& parts,
               const std::vector<int>& positions) {
        return qgrid::fuse(parts, positions);
    }
    State x_measure(const State& s, int pos) {
        return qgrid::x_measure(s, pos, 0);
    }
    int size(const State& s) const { return s.num_qubits(); }
    const std::vector<int>& qubits(const State& s) const {
        return s.qubit_ids();
    }
    int position_of(const State& s, int mem) const {
        return s.position_of(mem);
    }
    GHZDiagonalState finish(const State& s) const { return s; }
};

RoundOutcome execute_round(const ProtocolConfig& config, std::uint64_t seed,
                           const FidelityDistribution* link_dist = nullptr,
                           std::ostream* trace = nullptr);

} // namespace qgrid
