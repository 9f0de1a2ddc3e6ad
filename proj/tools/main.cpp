// sfcmfg command-line interface. Links only the public C API.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sfcmfg/sfcmfg.h"

namespace {

int report_failure(sfc_status status) {
    std::fprintf(stderr, "error: %s\n", sfc_last_error());
    return status == SFC_ERR_UNSUPPORTED ? 2 : 1;
}

std::string default_out_dir() {
    const char* env = std::getenv("SFCMFG_OUT");
    return env && *env ? env : "./out";
}

struct ScenarioHandle {
    sfc_scenario* ptr = nullptr;
    ~ScenarioHandle() { sfc_scenario_free(ptr); }
};

std::vector<uint64_t> parse_seed_list(const std::string& text) {
    std::vector<uint64_t> seeds;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string token =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!token.empty()) seeds.push_back(std::stoull(token));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return seeds;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Service-chain placement simulator: mean-field, actor-critic, genetic and "
                 "brute-force engines over MEC scenarios"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string engine;
    std::string out_dir = default_out_dir();
    std::string config_path;
    std::string policy_in;
    std::string policy_out;
    std::uint64_t seed = 0;
    int episodes = -1;
    double beta_ref = 1.0e6;

    auto* run = app.add_subcommand("run", "Run one engine on a scenario");
    run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("--engine", engine, "Engine: mfg, rl, ga or oracle")->required();
    run->add_option("--seed", seed, "Engine seed (default 0)");
    run->add_option("--episodes", episodes, "Training episodes (rl engine)");
    run->add_option("--beta-ref", beta_ref, "Reference packet size in bytes (default 1e6)");
    run->add_option("--out", out_dir, "Output directory (default $SFCMFG_OUT or ./out)");
    run->add_option("--config", config_path, "JSON overrides file for engine parameters");
    run->add_option("--policy-in", policy_in, "Decode-only from a policy snapshot (rl)");
    run->add_option("--policy-out", policy_out, "Policy snapshot destination (rl)");

    std::string engines = "rl,ga";
    double beta_min = 1.0e5;
    double beta_max = 2.0e6;
    int beta_steps = 5;
    std::string seeds_text = "1";
    bool retrain_per_beta = false;

    auto* sweep = app.add_subcommand("sweep", "Delay-vs-packet-size sweep over engines");
    sweep->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    sweep->add_option("--engines", engines, "Comma-separated engine list (default rl,ga)");
    sweep->add_option("--beta-min", beta_min, "Smallest packet size in bytes");
    sweep->add_option("--beta-max", beta_max, "Largest packet size in bytes");
    sweep->add_option("--beta-steps", beta_steps, "Number of grid points");
    sweep->add_option("--seeds", seeds_text, "Comma-separated seeds (default 1)");
    sweep->add_option("--seed", seed, "Single seed shorthand");
    sweep->add_flag("--retrain-per-beta", retrain_per_beta,
                    "Retrain engines at every grid point instead of at --beta-ref");
    sweep->add_option("--beta-ref", beta_ref, "Training packet size when not retraining");
    sweep->add_option("--episodes", episodes, "Training episodes (rl engine)");
    sweep->add_option("--out", out_dir, "Output directory (default $SFCMFG_OUT or ./out)");
    sweep->add_option("--config", config_path, "JSON overrides file for engine parameters");

    std::string template_name = "paper";
    std::string gen_out;
    auto* gen = app.add_subcommand("scenario-gen", "Write a bundled scenario template");
    gen->add_option("--template", template_name, "Template name (default paper)");
    gen->add_option("out_path", gen_out, "Destination file")->required();

    auto* validate = app.add_subcommand("validate", "Validate a scenario file");
    validate->add_option("--scenario", scenario_path, "Scenario JSON file")->required();

    auto* version = app.add_subcommand("version", "Print the library version");

    CLI11_PARSE(app, argc, argv);

    if (version->parsed()) {
        std::printf("sfcmfg %s\n", sfc_version());
        return 0;
    }

    if (gen->parsed()) {
        const sfc_status status = sfc_scenario_generate(template_name.c_str(), gen_out.c_str());
        if (status != SFC_OK) return report_failure(status);
        std::printf("wrote %s\n", gen_out.c_str());
        return 0;
    }

    ScenarioHandle scenario;
    {
        const sfc_status status = sfc_scenario_load(scenario_path.c_str(), &scenario.ptr);
        if (status != SFC_OK) return report_failure(status);
    }

    if (validate->parsed()) {
        char report[8192];
        int violations = 0;
        const sfc_status status =
            sfc_scenario_validate(scenario.ptr, report, sizeof(report), &violations);
        if (status != SFC_OK) return report_failure(status);
        if (violations == 0) {
            std::printf("scenario is valid\n");
            return 0;
        }
        std::fprintf(stderr, "%d violation(s):\n%s", violations, report);
        return 1;
    }

    sfc_run_options options;
    sfc_run_options_init(&options);
    options.seed = seed;
    options.episodes = episodes;
    options.beta_ref = beta_ref;
    if (!config_path.empty()) options.config_path = config_path.c_str();
    if (!policy_in.empty()) options.policy_in = policy_in.c_str();
    if (!policy_out.empty()) options.policy_out = policy_out.c_str();

    if (run->parsed()) {
        double objective = 0.0;
        const sfc_status status =
            sfc_run(scenario.ptr, engine.c_str(), &options, out_dir.c_str(), &objective);
        if (status != SFC_OK) return report_failure(status);
        std::printf("engine=%s seed=%llu objective_ms=%.6f out=%s\n", engine.c_str(),
                    static_cast<unsigned long long>(seed), objective, out_dir.c_str());
        return 0;
    }

    // sweep
    const auto seeds = sweep->count("--seeds") || !sweep->count("--seed")
                           ? parse_seed_list(seeds_text)
                           : std::vector<uint64_t>{seed};
    if (seeds.empty()) {
        std::fprintf(stderr, "error: no seeds given\n");
        return 2;
    }
    sfc_sweep_options sweep_options;
    sfc_sweep_options_init(&sweep_options);
    sweep_options.engines = engines.c_str();
    sweep_options.beta_min = beta_min;
    sweep_options.beta_max = beta_max;
    sweep_options.steps = beta_steps;
    sweep_options.seeds = seeds.data();
    sweep_options.num_seeds = seeds.size();
    sweep_options.retrain_per_beta = retrain_per_beta ? 1 : 0;
    sweep_options.run = options;

    const sfc_status status = sfc_sweep(scenario.ptr, &sweep_options, out_dir.c_str());
    if (status != SFC_OK) return report_failure(status);
    std::printf("sweep written to %s/sweep.csv\n", out_dir.c_str());
    return 0;
}
