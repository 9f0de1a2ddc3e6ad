#include "sfcmfg/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "sfcmfg/csv.hpp"
#include "sfcmfg/delay.hpp"
#include "sfcmfg/ga.hpp"
#include "sfcmfg/mdp.hpp"
#include "sfcmfg/mfg.hpp"
#include "sfcmfg/oracle.hpp"

namespace sfcmfg::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kEngines = {"mfg", "rl", "ga", "oracle"};

struct EngineConfigs {
    rl::RlConfig rl;
    ga::GaConfig ga;
    mfg::SolveOptions mfg;
};

void apply_kernel_overrides(const json& j, const std::string& where, mfg::KernelParams& params) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = it.key();
        if (key == "congestion")
            params.congestion = it->get<bool>();
        else if (key == "congestion_lambda")
            params.congestion_lambda = it->get<double>();
        else
            throw ScenarioError(where + ": unknown field '" + key + "'");
    }
}

// Overrides file: {"rl": {...}, "ga": {...}, "mfg": {...}}; unknown keys are
// rejected so typos cannot silently fall back to defaults.
EngineConfigs load_configs(const RunOptions& options) {
    EngineConfigs configs;
    configs.rl.kernel.beta_ref = options.beta_ref;
    configs.ga.beta_grid = {options.beta_ref};
    configs.mfg.kernel.beta_ref = options.beta_ref;
    configs.rl.seed = options.seed;
    configs.ga.seed = options.seed;
    if (options.episodes) configs.rl.episodes = *options.episodes;

    if (options.config_path.empty()) return configs;
    std::ifstream in(options.config_path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + options.config_path);
    json root;
    try {
        in >> root;
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("config parse error: ") + e.what());
    }
    if (!root.is_object()) throw ScenarioError("config: expected an object");

    for (auto section = root.begin(); section != root.end(); ++section) {
        const std::string name = section.key();
        if (name == "rl") {
            for (auto it = section->begin(); it != section->end(); ++it) {
                const std::string key = it.key();
                if (key == "episodes") {
                    if (!options.episodes) configs.rl.episodes = it->get<int>();
                } else if (key == "actor_lr")
                    configs.rl.actor_lr = it->get<double>();
                else if (key == "critic_lr")
                    configs.rl.critic_lr = it->get<double>();
                else if (key == "temperature_start")
                    configs.rl.temperature_start = it->get<double>();
                else if (key == "temperature_end")
                    configs.rl.temperature_end = it->get<double>();
                else if (key == "value_bound")
                    configs.rl.value_bound = it->get<double>();
                else if (key == "kernel")
                    apply_kernel_overrides(*it, "config.rl.kernel", configs.rl.kernel);
                else
                    throw ScenarioError("config.rl: unknown field '" + key + "'");
            }
        } else if (name == "ga") {
            for (auto it = section->begin(); it != section->end(); ++it) {
                const std::string key = it.key();
                if (key == "population_size")
                    configs.ga.population_size = it->get<int>();
                else if (key == "generations")
                    configs.ga.generations = it->get<int>();
                else if (key == "crossover_rate")
                    configs.ga.crossover_rate = it->get<double>();
                else if (key == "mutation_rate")
                    configs.ga.mutation_rate = it->get<double>();
                else if (key == "tournament_size")
                    configs.ga.tournament_size = it->get<int>();
                else if (key == "infeasibility_penalty")
                    configs.ga.infeasibility_penalty = it->get<double>();
                else
                    throw ScenarioError("config.ga: unknown field '" + key + "'");
            }
        } else if (name == "mfg") {
            for (auto it = section->begin(); it != section->end(); ++it) {
                const std::string key = it.key();
                if (key == "tol")
                    configs.mfg.tol = it->get<double>();
                else if (key == "max_iters")
                    configs.mfg.max_iters = it->get<int>();
                else if (key == "damping")
                    configs.mfg.damping = it->get<double>();
                else if (key == "horizon")
                    configs.mfg.horizon = it->get<int>();
                else if (key == "uniform_tie_break")
                    configs.mfg.tie = it->get<bool>() ? mfg::TieBreak::UniformArgmax
                                                      : mfg::TieBreak::LowestIndex;
                else if (key == "kernel")
                    apply_kernel_overrides(*it, "config.mfg.kernel", configs.mfg.kernel);
                else
                    throw ScenarioError("config.mfg: unknown field '" + key + "'");
            }
        } else {
            throw ScenarioError("config: unknown section '" + name + "'");
        }
    }
    return configs;
}

void require_valid(const Scenario& scenario) {
    ValidationReport report = validate_topology(scenario.topology);
    const auto wl = validate_workload(scenario.workload);
    report.violations.insert(report.violations.end(), wl.violations.begin(), wl.violations.end());
    if (!report.ok())
        throw ScenarioError("scenario '" + scenario.name + "' is invalid:\n" + report.to_string());
}

void write_placement_csv(const std::string& path, const Scenario& scenario,
                         const PlacementMatrix& placement) {
    CsvWriter csv(path, {"chain", "position", "vnf", "node"});
    const Topology& topo = scenario.topology;
    for (std::size_t k = 0; k < topo.chains.size(); ++k) {
        for (std::size_t p = 0; p < topo.chains[k].length(); ++p) {
            const int node = placement.node_of(k, p);
            csv.field(topo.chains[k].id)
                .field(static_cast<std::int64_t>(p))
                .field(topo.chains[k].vnf_sequence[p])
                .field(node < 0 ? std::string("-") : topo.nodes[static_cast<std::size_t>(node)].id);
            csv.end_row();
        }
    }
}

// Placement produced by one engine, without any artifact writes (used by the
// sweep); seeds and beta_ref come resolved from the caller.
PlacementMatrix engine_placement(const Scenario& scenario, const std::string& engine,
                                 const EngineConfigs& configs) {
    if (engine == "oracle") {
        return oracle::optimal_placement(scenario, configs.ga.beta_grid).placement;
    }
    const auto spaces = mfg::build_state_spaces(scenario);
    if (engine == "rl") {
        auto trained = rl::train(scenario, spaces, configs.rl);
        return rl::extract_placement(scenario, spaces, trained.policy, configs.rl);
    }
    if (engine == "ga") {
        const auto result = ga::evolve(scenario, configs.ga);
        return ga::decode(result.best, scenario.topology);
    }
    if (engine == "mfg") {
        const auto solution = mfg::solve_mfg(scenario, spaces, configs.mfg);
        return rl::decode_mfg_solution(scenario, spaces, solution, configs.mfg.kernel);
    }
    throw UnsupportedError("unknown engine: " + engine);
}

}  // namespace

RunResult cmd_run(const Scenario& scenario, const std::string& engine, const RunOptions& options,
                  const std::string& out_dir) {
    if (!kEngines.count(engine)) throw UnsupportedError("unknown engine: " + engine);
    require_valid(scenario);
    fs::create_directories(out_dir);

    const EngineConfigs configs = load_configs(options);
    const std::vector<double> beta_grid = {options.beta_ref};
    const auto t0 = std::chrono::steady_clock::now();

    RunResult result;
    result.engine = engine;
    result.seed = options.seed;

    std::ofstream log((fs::path(out_dir) / "run.log").string(), std::ios::binary);
    log << "engine=" << engine << " scenario=" << scenario.name << " seed=" << options.seed
        << " beta_ref=" << format_double(options.beta_ref) << "\n";

    if (engine == "oracle") {
        const auto opt = oracle::optimal_placement(scenario, beta_grid);
        result.placement = opt.placement;
        log << "oracle: enumerated " << opt.enumerated << " feasible placements\n";
    } else if (engine == "rl") {
        const auto spaces = mfg::build_state_spaces(scenario);
        if (!options.policy_in.empty()) {
            const auto policy = rl::load_policy(options.policy_in, spaces);
            result.placement = rl::extract_placement(scenario, spaces, policy, configs.rl);
            log << "rl: decode-only from " << options.policy_in << "\n";
        } else {
            const auto trained = rl::train(scenario, spaces, configs.rl);
            rl::write_training_csv((fs::path(out_dir) / "rl_training.csv").string(), trained.log);
            rl::write_vnf_rewards_csv((fs::path(out_dir) / "rl_vnf_rewards.csv").string(), scenario,
                                      trained.log);
            const std::string policy_path = options.policy_out.empty()
                                                ? (fs::path(out_dir) / "policy.txt").string()
                                                : options.policy_out;
            rl::save_policy(policy_path, spaces, trained.policy);
            result.placement = rl::extract_placement(scenario, spaces, trained.policy, configs.rl);
            log << "rl: episodes=" << configs.rl.episodes << " actor_lr=" << configs.rl.actor_lr
                << " critic_lr=" << configs.rl.critic_lr
                << " temperature=" << configs.rl.temperature_start << ".."
                << configs.rl.temperature_end
                << " congestion=" << (configs.rl.kernel.congestion ? 1 : 0) << "\n";
        }
    } else if (engine == "ga") {
        const auto ga_result = ga::evolve(scenario, configs.ga);
        ga::write_fitness_csv((fs::path(out_dir) / "ga_fitness.csv").string(), ga_result);
        result.placement = ga::decode(ga_result.best, scenario.topology);
        log << "ga: population=" << configs.ga.population_size
            << " generations=" << configs.ga.generations
            << " crossover=" << format_double(configs.ga.crossover_rate)
            << " mutation=" << format_double(configs.ga.mutation_rate)
            << " tournament=" << configs.ga.tournament_size
            << " penalty=" << format_double(ga::resolve_penalty(scenario, configs.ga)) << "\n";
    } else {  // mfg
        const auto spaces = mfg::build_state_spaces(scenario);
        const auto solution = mfg::solve_mfg(scenario, spaces, configs.mfg);
        mfg::write_solution_csvs(out_dir, scenario, spaces, solution, solution.trace);
        result.placement = engine_placement(scenario, "mfg", configs);
        log << "mfg: converged=" << (solution.converged ? 1 : 0)
            << " iterations=" << solution.iterations
            << " residual=" << format_double(solution.residual) << "\n";
        if (!solution.converged)
            log << "mfg: warning: returned last iterate without convergence\n";
    }

    write_placement_csv((fs::path(out_dir) / "placement.csv").string(), scenario, result.placement);
    result.objective_ms = grid_objective(scenario.topology, result.placement, beta_grid);

    // Workload artifacts on the final placement.
    const auto requests = generate_requests(scenario.workload);
    write_requests_csv((fs::path(out_dir) / "requests.csv").string(), requests);
    write_delays_csv((fs::path(out_dir) / "delays.csv").string(), scenario.topology,
                     result.placement, requests);
    std::size_t timeouts = 0;
    for (const auto& r : requests)
        if (request_delay(scenario.topology, result.placement, r).total_ms > r.timeout_ms)
            ++timeouts;
    log << "workload: requests=" << requests.size() << " timed_out=" << timeouts << "\n";

    {
        CsvWriter csv((fs::path(out_dir) / "summary.csv").string(),
                      {"engine", "seed", "objective_ms"});
        csv.field(engine).field(result.seed).field(result.objective_ms);
        csv.end_row();
    }

    const auto t1 = std::chrono::steady_clock::now();
    result.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    log << "objective_ms=" << format_double(result.objective_ms)
        << " wall_time_ms=" << format_double(result.wall_time_ms) << "\n";
    return result;
}

std::vector<SweepCell> cmd_sweep(const Scenario& scenario, const SweepOptions& options,
                                 const std::string& out_dir) {
    if (options.engines.empty()) throw std::invalid_argument("sweep: need at least one engine");
    for (const auto& engine : options.engines)
        if (!kEngines.count(engine)) throw UnsupportedError("unknown engine: " + engine);
    if (options.beta_min > options.beta_max)
        throw std::invalid_argument("sweep: beta_min must be <= beta_max");
    if (options.steps < 1) throw std::invalid_argument("sweep: steps must be >= 1");
    if (options.seeds.empty()) throw std::invalid_argument("sweep: need at least one seed");
    require_valid(scenario);
    fs::create_directories(out_dir);

    std::vector<double> betas;
    for (int i = 0; i < options.steps; ++i) {
        betas.push_back(options.steps == 1 ? options.beta_min
                                           : options.beta_min + (options.beta_max - options.beta_min) *
                                                 i / (options.steps - 1));
    }

    const Topology& topo = scenario.topology;
    // delays[engine][beta][chain][seed]
    std::vector<std::vector<std::vector<std::vector<double>>>> delays(
        options.engines.size(),
        std::vector<std::vector<std::vector<double>>>(
            betas.size(), std::vector<std::vector<double>>(topo.chains.size())));

    for (std::size_t e = 0; e < options.engines.size(); ++e) {
        for (const auto seed : options.seeds) {
            RunOptions run = options.run;
            run.seed = seed;
            if (!options.retrain_per_beta) {
                const EngineConfigs configs = load_configs(run);
                const auto placement = engine_placement(scenario, options.engines[e], configs);
                for (std::size_t b = 0; b < betas.size(); ++b)
                    for (std::size_t k = 0; k < topo.chains.size(); ++k)
                        delays[e][b][k].push_back(
                            chain_delay(topo, placement, k, betas[b]).total_ms);
            } else {
                for (std::size_t b = 0; b < betas.size(); ++b) {
                    RunOptions cell = run;
                    cell.beta_ref = betas[b];
                    const EngineConfigs configs = load_configs(cell);
                    const auto placement = engine_placement(scenario, options.engines[e], configs);
                    for (std::size_t k = 0; k < topo.chains.size(); ++k)
                        delays[e][b][k].push_back(
                            chain_delay(topo, placement, k, betas[b]).total_ms);
                }
            }
        }
    }

    std::vector<SweepCell> cells;
    CsvWriter csv((fs::path(out_dir) / "sweep.csv").string(),
                  {"chain", "beta_bytes", "engine", "mean_delay_ms", "stddev_ms"});
    for (std::size_t k = 0; k < topo.chains.size(); ++k) {
        for (std::size_t b = 0; b < betas.size(); ++b) {
            for (std::size_t e = 0; e < options.engines.size(); ++e) {
                const auto& samples = delays[e][b][k];
                double mean = 0.0;
                for (double d : samples) mean += d;
                mean /= static_cast<double>(samples.size());
                double var = 0.0;
                for (double d : samples) var += (d - mean) * (d - mean);
                var /= static_cast<double>(samples.size());
                SweepCell cell{topo.chains[k].id, betas[b], options.engines[e], mean,
                               std::sqrt(var)};
                csv.field(cell.chain_id)
                    .field(cell.beta)
                    .field(cell.engine)
                    .field(cell.mean_delay_ms)
                    .field(cell.stddev_ms);
                csv.end_row();
                cells.push_back(std::move(cell));
            }
        }
    }
    return cells;
}

void cmd_scenario_gen(const std::string& template_name, const std::string& out_path) {
    const Scenario scenario = make_template_scenario(template_name);
    save_scenario(scenario, out_path);
}

}  // namespace sfcmfg::harness
