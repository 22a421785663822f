#include "qgrid/validation/suites.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qgrid/distillation.hpp"
#include "qgrid/montecarlo.hpp"
#include "qgrid/protocol.hpp"
#include "qgrid/rng.hpp"
#include "qgrid/state_algebra.hpp"
#include "qgrid/validation/oracle.hpp"

namespace qgrid::validation {

namespace {

DenseState dense_from_diag(const GHZDiagonalState& state) {
    const int n = state.num_qubits();
    const Eigen::Index dim = Eigen::Index{1} << n;
    DenseState out{state.qubit_ids(),
                   Eigen::MatrixXcd::Zero(dim, dim)};
    for (std::size_t idx = 0; idx < state.coeffs().size(); ++idx) {
        if (state.coeffs()[idx] == 0.0) continue;
        int z = static_cast<int>(idx >> (n - 1));
        std::uint32_t x =
            static_cast<std::uint32_t>(idx) & ((1u << (n - 1)) - 1);
        Eigen::VectorXcd v = ghz_basis_vector(n, z, x);
        out.rho += state.coeffs()[idx] * (v * v.adjoint());
    }
    return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

CheckResult make_check(std::string name, double err, double tol,
                       std::string detail = {}) {
    return {std::move(name), err <= tol, err, std::move(detail), false};
}

// Dense model of an n-arm swap over given link weights: n Werner pairs
// meeting at one node, node-side qubits projected onto GHZ(n).
std::vector<double> dense_swap_coeffs(const std::vector<double>& weights) {
    const int n = static_cast<int>(weights.size());
    DenseState combined;
    std::vector<int> measured;
    for (int i = 0; i < n; ++i) {
        double f = werner_from_weight(weights[i]).fidelity;
        DenseState link = werner_dense(f, i, 100 + i);
        combined = i == 0 ? link : tensor(combined, link);
        measured.push_back(2 * i + 1);
    }
    auto [post, prob] = project(combined, measured, ghz_basis_vector(n, 0, 0));
    (void)prob;
    return ghz_diag_coeffs(post);
}

} // namespace

std::vector<CheckResult> suite_state_algebra(std::uint64_t seed) {
    std::vector<CheckResult> results;
    Rng rng(seed);

    // Closed-form equal-weight swap against the dense model.
    {
        double worst = 0.0;
        for (int n = 2; n <= 5; ++n) {
            for (double w : {0.55, 0.8, 1.0}) {
                auto fast = ghz_swap_equal(n, w);
                auto dense = dense_swap_coeffs(std::vector<double>(n, w));
                worst = std::max(worst, max_abs_diff(fast.coeffs(), dense));
            }
        }
        results.push_back(make_check("equal-weight swap vs dense", worst, 1e-12));
    }

    // Mixed-weight swap against the dense model.
    {
        double worst = 0.0;
        for (int n = 2; n <= 4; ++n) {
            for (int rep = 0; rep < 4; ++rep) {
                std::vector<double> ws(n);
                for (double& w : ws) w = 0.4 + 0.6 * rng.next_double();
                auto fast = ghz_swap_mixed(ws);
                worst = std::max(worst,
                                 max_abs_diff(fast.coeffs(), dense_swap_coeffs(ws)));
            }
        }
        results.push_back(make_check("mixed-weight swap vs dense", worst, 1e-12));
    }

    // X measurement at every position, both outcomes.
    {
        double worst = 0.0;
        GHZDiagonalState base = ghz_swap_equal(4, 0.85);
        DenseState dense_base = dense_from_diag(base);
        DenseBackend oracle;
        for (int pos = 0; pos < 4; ++pos) {
            auto fast = x_measure(base, pos, 0);
            auto dense = oracle.x_measure(dense_base, pos);
            worst = std::max(worst,
                             max_abs_diff(fast.coeffs(), ghz_diag_coeffs(dense)));

            // Minus outcome: projected dense state vs frame-folded fast one.
            Eigen::VectorXcd minus(2);
            minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
            auto [dminus, prob] = project(dense_base, {pos}, minus);
            worst = std::max(worst, std::abs(prob - 0.5));
            auto fast1 = x_measure(base, pos, 1).with_frame_applied();
            worst = std::max(worst,
                             max_abs_diff(fast1.coeffs(), ghz_diag_coeffs(dminus)));
        }
        results.push_back(make_check("x_measure vs dense", worst, 1e-12));
    }

    // General fusion: chains, fragment + link, three-way merges.
    {
        double worst = 0.0;
        DenseBackend oracle;
        auto compare = [&](const std::vector<const GHZDiagonalState*>& parts,
                           const std::vector<int>& positions) {
            std::vector<DenseState> dense;
            std::vector<const DenseState*> dense_ptrs;
            dense.reserve(parts.size());
            for (const auto* p : parts) dense.push_back(dense_from_diag(*p));
            for (const auto& d : dense) dense_ptrs.push_back(&d);
            auto fast = fuse(parts, positions);
            auto ref = oracle.fuse(dense_ptrs, positions);
            worst = std::max(worst,
                             max_abs_diff(fast.coeffs(), ghz_diag_coeffs(ref)));
        };

        auto link = [&](double w, int a, int b) {
            return bell_from_werner(werner_from_weight(w), a, b);
        };
        GHZDiagonalState l1 = link(0.9, 0, 1), l2 = link(0.7, 1, 2);
        compare({&l1, &l2}, {1, 0});

        GHZDiagonalState frag = ghz_swap_equal(3, 0.8, {10, 11, 12});
        GHZDiagonalState l3 = link(0.85, 12, 13);
        compare({&frag, &l3}, {2, 0}); // link joins at a non-anchor qubit
        compare({&frag, &l3}, {0, 0}); // swap consumes the fragment anchor

        GHZDiagonalState fragB = ghz_swap_mixed({0.9, 0.6}, {13, 14});
        GHZDiagonalState l4 = link(0.75, 15, 11);
        compare({&frag, &fragB, &l4}, {1, 0, 1}); // three-way merge
        results.push_back(make_check("fuse vs dense", worst, 1e-10));
    }

    // Coherent information is frame-invariant.
    {
        double worst = 0.0;
        GHZDiagonalState s = ghz_swap_equal(4, 0.8);
        s.pauli_frame()[1] = {true, false};
        s.pauli_frame()[0] = {true, true};
        s.pauli_frame()[3] = {false, true};
        worst = std::abs(coherent_information(s) -
                         coherent_information(s.with_frame_applied()));
        results.push_back(make_check("frame-invariant I_c", worst, 1e-12));
    }
    return results;
}

std::vector<CheckResult> suite_protocol(std::uint64_t seed) {
    std::vector<CheckResult> results;

    // Full rounds replayed on the dense model.
    {
        double worst = 0.0;
        int compared = 0, skipped = 0, aborted = 0;
        ProtocolConfig config;
        config.grid = {3, {2, 3}};
        for (double p : {0.6, 0.9}) {
            for (int k : {1, -1}) {
                config.link_prob = p;
                config.link_fidelity = 0.92;
                config.k_hop = k;
                for (int s = 0; s < 40; ++s) {
                    std::uint64_t round_seed = derive_seed(seed, s);
                    RoundPlan plan = plan_round(config, round_seed);
                    DiagonalBackend fast;
                    RoundOutcome out = run_plan(plan, fast);
                    if (out.aborted) {
                        ++aborted;
                        continue;
                    }
                    try {
                        DenseBackend oracle;
                        RoundOutcome ref = run_plan(plan, oracle);
                        worst = std::max(
                            worst, max_abs_diff(out.final_state->coeffs(),
                                                ref.final_state->coeffs()));
                        ++compared;
                    } catch (const std::domain_error&) {
                        ++skipped; // intermediate state beyond the dense cap
                    }
                }
            }
        }
        std::ostringstream detail;
        detail << compared << " rounds compared, " << aborted << " aborted, "
               << skipped << " beyond dense cap";
        auto check = make_check("round replay vs dense", worst, 1e-9,
                                detail.str());
        if (compared < 20) check.pass = false;
        results.push_back(std::move(check));
    }

    // Scheduler equivalence: both orders give the same final state.
    {
        double worst = 0.0;
        ProtocolConfig config;
        config.grid = {4, {5, 11}};
        config.link_fidelity = 0.9;
        for (double p : {0.7, 1.0}) {
            for (int s = 0; s < 60; ++s) {
                config.link_prob = p;
                config.scheduler = SchedulerKind::ConsumerGreedy;
                RoundOutcome a = execute_round(config, derive_seed(seed, 1000 + s));
                config.scheduler = SchedulerKind::LinearSweep;
                RoundOutcome b = execute_round(config, derive_seed(seed, 1000 + s));
                if (a.aborted != b.aborted) worst = 1.0;
                if (!a.aborted && !b.aborted)
                    worst = std::max(worst,
                                     max_abs_diff(a.final_state->coeffs(),
                                                  b.final_state->coeffs()));
            }
        }
        results.push_back(make_check("scheduler order equivalence", worst, 1e-10));
    }
    return results;
}

std::vector<CheckResult> suite_distillation(std::uint64_t seed) {
    std::vector<CheckResult> results;

    // Exact ladder enumeration against a direct Monte Carlo of the process.
    {
        double worst = 0.0;
        Rng rng(seed);
        for (int t : {2, 4, 6}) {
            DistillationConfig config{t, 0.7, 0.85};
            FidelityDistribution dist = ladder_distribution(config);
            const long samples = 200000;
            std::vector<long> counts(dist.outcomes.size(), 0);
            std::vector<double> succ;
            std::vector<double> tier_f{config.fidelity};
            while ((1 << (tier_f.size() - 1)) < t)
                tier_f.push_back(bbpssw(tier_f.back()).fidelity);
            for (double f : tier_f) succ.push_back(bbpssw(f).success_prob);
            for (long i = 0; i < samples; ++i) {
                std::vector<int> tiers(tier_f.size() + 1, 0);
                for (int a = 0; a < t; ++a)
                    if (rng.bernoulli(config.link_prob)) ++tiers[0];
                bool progressed = true;
                while (progressed) {
                    progressed = false;
                    for (std::size_t tier = 0; tier < tier_f.size(); ++tier) {
                        if (tiers[tier] >= 2) {
                            tiers[tier] -= 2;
                            if (rng.bernoulli(succ[tier])) ++tiers[tier + 1];
                            progressed = true;
                            break;
                        }
                    }
                }
                int high = -1;
                for (std::size_t tier = 0; tier < tiers.size(); ++tier)
                    if (tiers[tier] > 0) high = static_cast<int>(tier);
                // Map the terminal tier onto the distribution entry.
                for (std::size_t o = 0; o < dist.outcomes.size(); ++o) {
                    const auto& e = dist.outcomes[o];
                    if (high < 0 && !e.fidelity) {
                        ++counts[o];
                        break;
                    }
                    if (high >= 0 && e.fidelity &&
                        std::abs(*e.fidelity - tier_f[high]) < 1e-12) {
                        ++counts[o];
                        break;
                    }
                }
            }
            for (std::size_t o = 0; o < dist.outcomes.size(); ++o) {
                double freq = static_cast<double>(counts[o]) / samples;
                worst = std::max(worst, std::abs(freq - dist.outcomes[o].prob));
            }
        }
        results.push_back(make_check("ladder enumeration vs sampling", worst, 5e-3));
    }

    // Hand-expanded six-attempt distribution; reported for reference only
    // (the published expansion drops one failure branch for five raw pairs).
    {
        const double p = 0.7, f0 = 0.85;
        auto r0 = bbpssw(f0);
        auto r2 = bbpssw(r0.fidelity);
        const double P0 = r0.success_prob, P2 = r2.success_prob;
        auto C = [](int n, int k) {
            double c = 1.0;
            for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
            return c;
        };
        auto pw = [&](int k) {
            return C(6, k) * std::pow(p, k) * std::pow(1 - p, 6 - k);
        };
        double p_no = pw(0) + pw(2) * (1 - P0) +
                      pw(4) * ((1 - P0) * (1 - P0) + P0 * P0 * (1 - P2)) +
                      pw(6) * (std::pow(1 - P0, 3) +
                               3 * (1 - P0) * P0 * P0 * (1 - P2));
        double p_f0 = pw(1) + pw(3) * (1 - P0) + pw(5) * (1 - P0) * (1 - P0);
        double p_f2 = pw(2) * P0 + pw(4) * 2 * P0 * (1 - P0) +
                      pw(6) * (3 * (1 - P0) * (1 - P0) * P0 +
                               P0 * P0 * P0 * (1 - P2)) +
                      pw(5) * 2 * P0 * (1 - P0) + pw(3) * P0;
        double p_f4 = pw(4) * P0 * P0 * P2 + pw(5) * P0 * P0 * P2 +
                      pw(6) * (3 * (1 - P0) * P0 * P0 * P2 +
                               P0 * P0 * P0 * P2);

        FidelityDistribution dist = ladder_distribution({6, p, f0});
        auto prob_of = [&](double f) {
            for (const auto& e : dist.outcomes)
                if (e.fidelity && std::abs(*e.fidelity - f) < 1e-12)
                    return e.prob;
            return 0.0;
        };
        double worst = std::abs(dist.no_link_prob() - p_no);
        worst = std::max(worst, std::abs(prob_of(f0) - p_f0));
        worst = std::max(worst, std::abs(prob_of(r0.fidelity) - p_f2));
        worst = std::max(worst, std::abs(prob_of(r2.fidelity) - p_f4));
        std::ostringstream detail;
        detail << "max deviation from hand expansion " << worst
               << " (expansion total " << p_no + p_f0 + p_f2 + p_f4 << ")";
        CheckResult check{"six-attempt hand expansion", true, worst,
                          detail.str(), true};
        results.push_back(std::move(check));
    }
    return results;
}

std::vector<CheckResult> run_all_suites(std::uint64_t seed) {
    std::vector<CheckResult> all;
    for (auto&& part : {suite_state_algebra(seed), suite_protocol(seed),
                        suite_distillation(seed)})
        all.insert(all.end(), part.begin(), part.end());
    return all;
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const auto& r) {
        return r.pass || r.informational;
    });
}

} // namespace qgrid::validation
