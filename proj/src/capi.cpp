#include "sfcmfg/sfcmfg.h"

#include <cstring>
#include <new>
#include <string>

#include "sfcmfg/harness.hpp"
#include "sfcmfg/scenario.hpp"

using namespace sfcmfg;

struct sfc_scenario {
    Scenario scenario;
};

namespace {

thread_local std::string g_last_error;

sfc_status fail(sfc_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

// Uniform exception -> status mapping for every entry point.
template <typename Fn>
sfc_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        return fn();
    } catch (const IoError& e) {
        return fail(SFC_ERR_IO, e.what());
    } catch (const UnsupportedError& e) {
        return fail(SFC_ERR_UNSUPPORTED, e.what());
    } catch (const ScenarioError& e) {
        return fail(SFC_ERR_PARSE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(SFC_ERR_INVALID, e.what());
    } catch (const std::out_of_range& e) {
        return fail(SFC_ERR_INVALID, e.what());
    } catch (const std::bad_alloc&) {
        return fail(SFC_ERR_RUNTIME, "out of memory");
    } catch (const std::exception& e) {
        return fail(SFC_ERR_RUNTIME, e.what());
    }
}

void copy_out(const std::string& s, char* buf, size_t buf_len) {
    if (!buf || buf_len == 0) return;
    const size_t n = std::min(buf_len - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
}

harness::RunOptions to_run_options(const sfc_run_options* options) {
    harness::RunOptions run;
    if (!options) return run;
    run.seed = options->seed;
    if (options->episodes >= 0) run.episodes = options->episodes;
    if (options->beta_ref > 0.0) run.beta_ref = options->beta_ref;
    if (options->config_path) run.config_path = options->config_path;
    if (options->policy_in) run.policy_in = options->policy_in;
    if (options->policy_out) run.policy_out = options->policy_out;
    return run;
}

}  // namespace

extern "C" {

const char* sfc_version(void) { return "0.1.0"; }

const char* sfc_last_error(void) { return g_last_error.c_str(); }

sfc_status sfc_scenario_load(const char* path, sfc_scenario** out) {
    return guarded([&]() -> sfc_status {
        if (!path || !out) return fail(SFC_ERR_INVALID, "null argument");
        auto handle = new sfc_scenario{load_scenario(path)};
        *out = handle;
        return SFC_OK;
    });
}

sfc_status sfc_scenario_from_json(const char* json_text, sfc_scenario** out) {
    return guarded([&]() -> sfc_status {
        if (!json_text || !out) return fail(SFC_ERR_INVALID, "null argument");
        auto handle = new sfc_scenario{parse_scenario(json_text)};
        *out = handle;
        return SFC_OK;
    });
}

void sfc_scenario_free(sfc_scenario* scenario) { delete scenario; }

sfc_status sfc_scenario_generate(const char* template_name, const char* out_path) {
    return guarded([&]() -> sfc_status {
        if (!template_name || !out_path) return fail(SFC_ERR_INVALID, "null argument");
        harness::cmd_scenario_gen(template_name, out_path);
        return SFC_OK;
    });
}

sfc_status sfc_scenario_validate(const sfc_scenario* scenario, char* buf, size_t buf_len,
                                 int* violations) {
    return guarded([&]() -> sfc_status {
        if (!scenario || !violations) return fail(SFC_ERR_INVALID, "null argument");
        ValidationReport report = validate_topology(scenario->scenario.topology);
        const auto wl = validate_workload(scenario->scenario.workload);
        report.violations.insert(report.violations.end(), wl.violations.begin(),
                                 wl.violations.end());
        *violations = static_cast<int>(report.violations.size());
        copy_out(report.to_string(), buf, buf_len);
        return SFC_OK;
    });
}

sfc_status sfc_scenario_name(const sfc_scenario* scenario, char* buf, size_t buf_len) {
    return guarded([&]() -> sfc_status {
        if (!scenario || !buf) return fail(SFC_ERR_INVALID, "null argument");
        copy_out(scenario->scenario.name, buf, buf_len);
        return SFC_OK;
    });
}

sfc_status sfc_scenario_hash(const sfc_scenario* scenario, uint64_t* out) {
    return guarded([&]() -> sfc_status {
        if (!scenario || !out) return fail(SFC_ERR_INVALID, "null argument");
        *out = scenario_hash(scenario->scenario);
        return SFC_OK;
    });
}

void sfc_run_options_init(sfc_run_options* options) {
    if (!options) return;
    options->seed = 0;
    options->episodes = -1;
    options->beta_ref = 1.0e6;
    options->config_path = nullptr;
    options->policy_in = nullptr;
    options->policy_out = nullptr;
}

sfc_status sfc_run(const sfc_scenario* scenario, const char* engine,
                   const sfc_run_options* options, const char* out_dir,
                   double* final_objective_ms) {
    return guarded([&]() -> sfc_status {
        if (!scenario || !engine || !out_dir) return fail(SFC_ERR_INVALID, "null argument");
        const auto result =
            harness::cmd_run(scenario->scenario, engine, to_run_options(options), out_dir);
        if (final_objective_ms) *final_objective_ms = result.objective_ms;
        return SFC_OK;
    });
}

void sfc_sweep_options_init(sfc_sweep_options* options) {
    if (!options) return;
    options->engines = nullptr;
    options->beta_min = 1.0e5;
    options->beta_max = 2.0e6;
    options->steps = 5;
    options->seeds = nullptr;
    options->num_seeds = 0;
    options->retrain_per_beta = 0;
    sfc_run_options_init(&options->run);
}

sfc_status sfc_sweep(const sfc_scenario* scenario, const sfc_sweep_options* options,
                     const char* out_dir) {
    return guarded([&]() -> sfc_status {
        if (!scenario || !options || !out_dir) return fail(SFC_ERR_INVALID, "null argument");
        if (!options->engines || !options->seeds || options->num_seeds == 0)
            return fail(SFC_ERR_INVALID, "sweep needs engines and at least one seed");

        harness::SweepOptions sweep;
        std::string engines = options->engines;
        std::size_t pos = 0;
        while (pos <= engines.size()) {
            const auto comma = engines.find(',', pos);
            const std::string token =
                engines.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (!token.empty()) sweep.engines.push_back(token);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        sweep.beta_min = options->beta_min;
        sweep.beta_max = options->beta_max;
        sweep.steps = options->steps;
        sweep.seeds.assign(options->seeds, options->seeds + options->num_seeds);
        sweep.retrain_per_beta = options->retrain_per_beta != 0;
        sweep.run = to_run_options(&options->run);
        harness::cmd_sweep(scenario->scenario, sweep, out_dir);
        return SFC_OK;
    });
}

}  // extern "C"
