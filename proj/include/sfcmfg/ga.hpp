#ifndef SFCMFG_GA_HPP
#define SFCMFG_GA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sfcmfg/delay.hpp"
#include "sfcmfg/scenario.hpp"

namespace sfcmfg::ga {

// One gene per (chain, position) slot, ordered lexicographically; the value
// is the hosting node index, so every chromosome decodes to a complete
// placement.
struct Chromosome {
    std::vector<int> genes;

    friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

struct GaConfig {
    int population_size = 50;
    int generations = 200;
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;
    int tournament_size = 3;
    // <= 0 selects 10x an upper bound of the scenario objective, which makes
    // any infeasible chromosome rank below every feasible one.
    double infeasibility_penalty = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> beta_grid = {1.0e6};  // evaluation packet sizes
};

PlacementMatrix decode(const Chromosome& chromosome, const Topology& topo);

double resolve_penalty(const Scenario& scenario, const GaConfig& config);

// Negative grid objective for feasible decodes; infeasible decodes score
// -(objective) - penalty * (1 + relative capacity violation).
double fitness(const Chromosome& chromosome, const Scenario& scenario, const GaConfig& config);

struct GenerationStats {
    int generation = 0;
    double best_fitness = 0.0;  // best-ever, monotone nondecreasing
    double mean_fitness = 0.0;  // population mean of this generation
};

struct GaResult {
    Chromosome best;
    double best_fitness = 0.0;
    std::vector<GenerationStats> history;
};

// Tournament selection, single-point crossover, per-gene uniform mutation,
// elitism of one. Deterministic under the config seed.
GaResult evolve(const Scenario& scenario, const GaConfig& config);

// generation,best_fitness,mean_fitness
void write_fitness_csv(const std::string& path, const GaResult& result);

}  // namespace sfcmfg::ga

#endif
