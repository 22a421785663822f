#include "qgrid/distillation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qgrid {

BbpsswResult bbpssw(double fidelity) {
    if (fidelity < 0.25 || fidelity > 1.0)
        throw std::domain_error("bbpssw fidelity outside [1/4, 1]");
    const double f = fidelity;
    const double r = (1.0 - f) / 3.0;
    const double den = f * f + 2.0 * f * r + 5.0 * r * r;
    return {(f * f + r * r) / den, den};
}

double FidelityDistribution::no_link_prob() const {
    double p = 0.0;
    for (const auto& e : outcomes)
        if (!e.fidelity) p += e.prob;
    return p;
}

double FidelityDistribution::mean_success_fidelity() const {
    double p = 0.0, fp = 0.0;
    for (const auto& e : outcomes) {
        if (e.fidelity) {
            p += e.prob;
            fp += e.prob * *e.fidelity;
        }
    }
    return p > 0.0 ? fp / p : 0.0;
}

namespace {

double binom_pmf(int n, int k, double p) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return c * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

// Terminal tier distribution starting from `count` pairs at tier 0.
// Key: pair counts per tier; value: probability. Tiers index the fidelity
// ladder f[0], f[1] = bbpssw(f[0]).fidelity, ...
struct Ladder {
    std::vector<double> succ; // success prob at each tier
    std::map<std::vector<int>, std::vector<double>> memo;

    // Returns P(terminal tier = t) indexed by tier; last slot = no link.
    std::vector<double> solve(std::vector<int> counts) {
        while (!counts.empty() && counts.back() == 0) counts.pop_back();
        int low = -1;
        for (std::size_t t = 0; t < counts.size(); ++t)
            if (counts[t] >= 2) { low = static_cast<int>(t); break; }
        const std::size_t slots = succ.size() + 2;
        if (low < 0) {
            std::vector<double> term(slots, 0.0);
            int high = -1;
            for (std::size_t t = 0; t < counts.size(); ++t)
                if (counts[t] > 0) high = static_cast<int>(t);
            if (high < 0)
                term.back() = 1.0; // no link
            else
                term[high] = 1.0;
            return term;
        }
        if (auto it = memo.find(counts); it != memo.end()) return it->second;
        std::vector<int> ok = counts, fail = counts;
        ok[low] -= 2;
        if (static_cast<std::size_t>(low + 1) >= ok.size()) ok.resize(low + 2, 0);
        ok[low + 1] += 1;
        fail[low] -= 2;
        const double p = succ[low];
        auto a = solve(std::move(ok));
        auto b = solve(std::move(fail));
        std::vector<double> term(slots, 0.0);
        for (std::size_t i = 0; i < slots; ++i)
            term[i] = p * a[i] + (1.0 - p) * b[i];
        memo[counts] = term;
        return term;
    }
};

} // namespace

FidelityDistribution ladder_distribution(const DistillationConfig& config) {
    if (config.attempts < 1)
        throw std::domain_error("distillation attempts must be >= 1");
    if (config.link_prob < 0.0 || config.link_prob > 1.0)
        throw std::domain_error("link probability outside [0, 1]");
    const int t = config.attempts;

    // Tier fidelities: enough tiers for t pairs (ceil(log2 t) + 1).
    std::vector<double> tier_f{config.fidelity};
    while ((1 << (tier_f.size() - 1)) < t)
        tier_f.push_back(bbpssw(tier_f.back()).fidelity);
    Ladder ladder;
    for (std::size_t i = 0; i + 1 < tier_f.size(); ++i)
        ladder.succ.push_back(bbpssw(tier_f[i]).success_prob);
    ladder.succ.push_back(0.0); // never used: top tier has at most one pair

    const std::size_t slots = ladder.succ.size() + 2;
    std::vector<double> total(slots, 0.0);
    for (int k = 0; k <= t; ++k) {
        const double pk = binom_pmf(t, k, config.link_prob);
        auto term = ladder.solve(std::vector<int>{k});
        for (std::size_t i = 0; i < slots; ++i) total[i] += pk * term[i];
    }

    FidelityDistribution dist;
    for (std::size_t i = 0; i + 1 < slots; ++i) {
        if (total[i] <= 0.0) continue;
        double f = i < tier_f.size() ? tier_f[i] : bbpssw(tier_f.back()).fidelity;
        dist.outcomes.push_back({f, total[i]});
    }
    if (total.back() > 0.0) dist.outcomes.push_back({std::nullopt, total.back()});
    return dist;
}

LinkOutcome sample_link(const FidelityDistribution& dist, Rng& rng) {
    double u = rng.next_double();
    double acc = 0.0;
    for (const auto& e : dist.outcomes) {
        acc += e.prob;
        if (u < acc) {
            if (!e.fidelity) return {false, 0.0};
            return {true, *e.fidelity};
        }
    }
    // Floating-point slack: fall back to the last outcome.
    const auto& e = dist.outcomes.back();
    return {e.fidelity.has_value(), e.fidelity.value_or(0.0)};
}

} // namespace qgrid
