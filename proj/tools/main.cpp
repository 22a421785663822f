#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "qgrid/montecarlo.hpp"
#include "qgrid/validation/suites.hpp"

using nlohmann::json;
using namespace qgrid;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");
    return j;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
}

const json& require(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("missing required key \"" + key + "\"");
    return j.at(key);
}

int parse_consumer(const json& v, int grid_size) {
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_array() && v.size() == 2)
        return node_index({v[0].get<int>(), v[1].get<int>()}, grid_size);
    throw ConfigError("consumer must be a node index or [row, col]");
}

int parse_k_hop(const json& v) {
    if (v.is_string()) {
        if (v.get<std::string>() == "global") return -1;
        throw ConfigError("k_hop must be an integer >= 1 or \"global\"");
    }
    int k = v.get<int>();
    if (k < 1) throw ConfigError("k_hop must be an integer >= 1 or \"global\"");
    return k;
}

int parse_region(const json& v) {
    if (v.is_string()) {
        if (v.get<std::string>() == "all") return -1;
        throw ConfigError("region_level must be an integer >= 0 or \"all\"");
    }
    int r = v.get<int>();
    if (r < 0) throw ConfigError("region_level must be an integer >= 0 or \"all\"");
    return r;
}

SimulationSpec parse_simulation(const json& j) {
    reject_unknown(j, {"grid_size", "consumers", "link_prob", "link_fidelity",
                       "k_hop", "region_level", "scheduler", "distill_rounds",
                       "trials", "master_seed", "axes"},
                   "config");
    SimulationSpec spec;
    spec.config.grid.size = require(j, "grid_size").get<int>();
    const json& cons = require(j, "consumers");
    if (!cons.is_array() || cons.size() != 2)
        throw ConfigError("consumers must be an array of two nodes");
    spec.config.grid.consumers = {parse_consumer(cons[0], spec.config.grid.size),
                                  parse_consumer(cons[1], spec.config.grid.size)};
    spec.config.link_prob = require(j, "link_prob").get<double>();
    spec.config.link_fidelity = require(j, "link_fidelity").get<double>();
    spec.trials = require(j, "trials").get<long>();
    spec.master_seed = require(j, "master_seed").get<std::uint64_t>();
    if (j.contains("k_hop")) spec.config.k_hop = parse_k_hop(j.at("k_hop"));
    if (j.contains("region_level"))
        spec.config.region_level = parse_region(j.at("region_level"));
    if (j.contains("scheduler")) {
        std::string s = j.at("scheduler").get<std::string>();
        if (s == "consumer-greedy")
            spec.config.scheduler = SchedulerKind::ConsumerGreedy;
        else if (s == "linear-sweep")
            spec.config.scheduler = SchedulerKind::LinearSweep;
        else
            throw ConfigError("scheduler must be consumer-greedy or linear-sweep");
    }
    if (j.contains("distill_rounds")) {
        spec.config.distill_rounds = j.at("distill_rounds").get<int>();
        if (spec.config.distill_rounds < 1)
            throw ConfigError("distill_rounds must be >= 1");
    }
    if (spec.trials < 1) throw ConfigError("trials must be >= 1");
    try {
        validate_grid(spec.config.grid);
        (void)werner_from_fidelity(spec.config.link_fidelity);
        if (spec.config.link_prob < 0.0 || spec.config.link_prob > 1.0)
            throw std::domain_error("link_prob outside [0, 1]");
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    return spec;
}

SweepAxes parse_axes(const json& j) {
    const json& a = require(j, "axes");
    reject_unknown(a, {"fidelities", "link_probs", "region_levels"}, "axes");
    SweepAxes axes;
    axes.fidelities = require(a, "fidelities").get<std::vector<double>>();
    axes.link_probs = require(a, "link_probs").get<std::vector<double>>();
    for (const json& r : require(a, "region_levels"))
        axes.region_levels.push_back(parse_region(r));
    if (axes.fidelities.empty() || axes.link_probs.empty() ||
        axes.region_levels.empty())
        throw ConfigError("sweep axes must be non-empty");
    return axes;
}

std::string region_label(int level) {
    return level < 0 ? "all" : std::to_string(level);
}

std::string k_label(int k) { return k < 0 ? "global" : std::to_string(k); }

std::ostream& num(std::ostream& os) {
    os << std::setprecision(12);
    return os;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points) {
    os << "fidelity,link_prob,grid,region,k,mean_rate,std_err,abort_frac\n";
    for (const SweepPoint& pt : points) {
        num(os) << pt.fidelity << ',' << pt.link_prob << ',' << pt.grid_size
                << ',' << region_label(pt.region_level) << ','
                << k_label(pt.k_hop) << ',' << pt.stats.mean_rate << ','
                << pt.stats.std_error << ',' << pt.stats.abort_fraction
                << '\n';
    }
}

void write_cycles_csv(std::ostream& os,
                      const std::vector<CycleFractionRow>& rows) {
    os << "n,p,cycle_len,fraction_pre,fraction_post\n";
    for (const CycleFractionRow& r : rows) {
        num(os) << r.grid_size << ',' << r.link_prob << ',' << r.cycle_len
                << ',' << r.fraction_pre << ',' << r.fraction_post << '\n';
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

int cmd_simulate(const std::string& config_path,
                 std::optional<long> trials_override,
                 std::optional<std::uint64_t> seed_override,
                 const std::string& out_path, bool as_json, bool trace) {
    SimulationSpec spec = parse_simulation(load_json(config_path));
    if (trials_override) spec.trials = *trials_override;
    if (seed_override) spec.master_seed = *seed_override;
    if (spec.trials < 1) throw ConfigError("trials must be >= 1");

    if (trace) {
        std::cout << "# trace of trial 0\n";
        RoundOutcome out = execute_round(
            spec.config, derive_seed(spec.master_seed, 0), nullptr, &std::cout);
        if (out.aborted)
            std::cout << "# round aborted\n";
    }

    AggregateStats stats = run_trials(spec);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file = open_out(out_path);
        os = &file;
    }
    if (as_json) {
        json j{{"trials", stats.trials},
               {"mean_rate", stats.mean_rate},
               {"std_error", stats.std_error},
               {"abort_fraction", stats.abort_fraction},
               {"mean_swaps", stats.mean_swaps},
               {"mean_max_qubits", stats.mean_max_qubits},
               {"mean_fidelity", stats.mean_fidelity}};
        *os << j.dump(2) << '\n';
    } else {
        num(*os) << "trials          " << stats.trials << '\n'
                 << "mean_rate       " << stats.mean_rate << '\n'
                 << "std_error       " << stats.std_error << '\n'
                 << "abort_fraction  " << stats.abort_fraction << '\n'
                 << "mean_swaps      " << stats.mean_swaps << '\n'
                 << "mean_max_qubits " << stats.mean_max_qubits << '\n'
                 << "mean_fidelity   " << stats.mean_fidelity << '\n';
    }
    return 0;
}

int cmd_sweep(const std::string& config_path,
              std::optional<long> trials_override,
              std::optional<std::uint64_t> seed_override,
              const std::string& out_path) {
    json j = load_json(config_path);
    SimulationSpec spec = parse_simulation(j);
    SweepAxes axes = parse_axes(j);
    if (trials_override) spec.trials = *trials_override;
    if (seed_override) spec.master_seed = *seed_override;
    SweepResult result = envelope_sweep(spec, axes);
    if (out_path.empty()) {
        write_sweep_csv(std::cout, result.points);
    } else {
        auto file = open_out(out_path);
        write_sweep_csv(file, result.points);
    }
    return 0;
}

int cmd_cycles(const std::string& config_path,
               std::optional<long> trials_override,
               std::optional<std::uint64_t> seed_override,
               const std::string& out_path) {
    json j = load_json(config_path);
    reject_unknown(j, {"grid_sizes", "link_probs", "cycle_lengths", "trials",
                       "master_seed"},
                   "config");
    auto sizes = require(j, "grid_sizes").get<std::vector<int>>();
    auto probs = require(j, "link_probs").get<std::vector<double>>();
    auto lens = require(j, "cycle_lengths").get<std::vector<int>>();
    long trials = require(j, "trials").get<long>();
    std::uint64_t seed = require(j, "master_seed").get<std::uint64_t>();
    if (trials_override) trials = *trials_override;
    if (seed_override) seed = *seed_override;
    for (int s : sizes)
        if (s < 2) throw ConfigError("grid sizes must be >= 2");
    for (double p : probs)
        if (p < 0.0 || p > 1.0) throw ConfigError("link_probs outside [0, 1]");
    for (int l : lens)
        if (l < 3) throw ConfigError("cycle lengths must be >= 3");
    if (trials < 1) throw ConfigError("trials must be >= 1");

    auto rows = cycle_fraction_study(sizes, probs, lens, trials, seed);
    if (out_path.empty()) {
        write_cycles_csv(std::cout, rows);
    } else {
        auto file = open_out(out_path);
        write_cycles_csv(file, rows);
    }
    return 0;
}

int cmd_validate(std::uint64_t seed, bool as_json) {
    auto results = validation::run_all_suites(seed);
    if (as_json) {
        json arr = json::array();
        for (const auto& r : results)
            arr.push_back({{"name", r.name},
                           {"pass", r.pass},
                           {"max_err", r.max_err},
                           {"informational", r.informational},
                           {"detail", r.detail}});
        std::cout << arr.dump(2) << '\n';
    } else {
        for (const auto& r : results) {
            std::cout << (r.informational ? "info" : (r.pass ? "pass" : "FAIL"))
                      << "  " << r.name << "  max_err=" << r.max_err;
            if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
            std::cout << '\n';
        }
    }
    return validation::all_passed(results) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo simulator for entanglement distribution on a "
                 "2D grid repeater network"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    std::optional<long> trials;
    std::optional<std::uint64_t> seed;
    bool as_json = false, trace = false;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* opt = cmd->add_option("--config", config_path,
                                    "JSON experiment file");
        if (needs_config) opt->required();
        cmd->add_option("--trials", trials, "override trial count");
        cmd->add_option("--seed", seed, "override master seed");
        cmd->add_option("--out", out_path, "write results to this file");
    };

    auto* simulate = app.add_subcommand("simulate", "run one configuration");
    add_common(simulate, true);
    simulate->add_flag("--json", as_json, "emit JSON instead of text");
    simulate->add_flag("--trace", trace, "print per-node actions of trial 0");

    auto* sweep = app.add_subcommand("sweep", "sweep fidelity/probability/region");
    add_common(sweep, true);

    auto* cycles = app.add_subcommand("cycles", "cycle-fraction statistics");
    add_common(cycles, true);

    auto* validate = app.add_subcommand("validate",
                                        "cross-check against the dense oracle");
    validate->add_option("--seed", seed, "suite seed");
    validate->add_flag("--json", as_json, "emit JSON instead of text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed())
            return cmd_simulate(config_path, trials, seed, out_path, as_json,
                                trace);
        if (sweep->parsed())
            return cmd_sweep(config_path, trials, seed, out_path);
        if (cycles->parsed())
            return cmd_cycles(config_path, trials, seed, out_path);
        if (validate->parsed())
            return cmd_validate(seed.value_or(20240901ULL), as_json);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
