#include "sfcmfg/ga.hpp"

#include <algorithm>
#include <cmath>

#include "sfcmfg/csv.hpp"
#include "sfcmfg/mfg.hpp"
#include "sfcmfg/rng.hpp"

namespace sfcmfg::ga {

PlacementMatrix decode(const Chromosome& chromosome, const Topology& topo) {
    PlacementMatrix placement = PlacementMatrix::empty_for(topo);
    std::size_t g = 0;
    for (std::size_t k = 0; k < topo.chains.size(); ++k) {
        for (std::size_t p = 0; p < topo.chains[k].length(); ++p) {
            if (g >= chromosome.genes.size())
                throw std::out_of_range("chromosome shorter than the slot count");
            const int node = chromosome.genes[g++];
            if (node < 0 || node >= static_cast<int>(topo.nodes.size()))
                throw std::out_of_range("gene is not a valid node index");
            placement.place(k, p, node);
        }
    }
    if (g != chromosome.genes.size())
        throw std::out_of_range("chromosome longer than the slot count");
    return placement;
}

double resolve_penalty(const Scenario& scenario, const GaConfig& config) {
    if (config.infeasibility_penalty > 0.0) return config.infeasibility_penalty;
    // Upper bound of the grid objective: per chain, worst-case processing
    // plus worst-case configured hop rate for every hop.
    const Topology& topo = scenario.topology;
    double min_alpha = std::numeric_limits<double>::infinity();
    for (const auto& n : topo.nodes) min_alpha = std::min(min_alpha, n.processing_capacity);
    double bound = 0.0;
    for (double beta : config.beta_grid) {
        for (std::size_t k = 0; k < topo.chains.size(); ++k) {
            const auto vnf_idx = topo.chain_vnf_indices(k);
            for (std::size_t p = 0; p < vnf_idx.size(); ++p)
                bound += topo.vnfs[vnf_idx[p]].demand.compute * beta / min_alpha;
            for (std::size_t p = 0; p + 1 < vnf_idx.size(); ++p) {
                double worst_hop = 0.0;
                for (std::size_t i = 0; i < topo.nodes.size(); ++i)
                    for (std::size_t i2 = 0; i2 < topo.nodes.size(); ++i2) {
                        if (i == i2) continue;
                        const auto rate = topo.allocation(i, i2, vnf_idx[p], vnf_idx[p + 1]);
                        if (!rate) continue;
                        worst_hop = std::max(
                            worst_hop, topo.vnfs[vnf_idx[p]].demand.transmission * beta / *rate);
                    }
                bound += worst_hop;
            }
        }
    }
    return 10.0 * std::max(bound, 1.0);
}

double fitness(const Chromosome& chromosome, const Scenario& scenario, const GaConfig& config) {
    const Topology& topo = scenario.topology;
    const PlacementMatrix placement = decode(chromosome, topo);
    const double penalty = resolve_penalty(scenario, config);

    double objective_ms;
    try {
        objective_ms = grid_objective(topo, placement, config.beta_grid);
    } catch (const EvaluationError&) {
        // A hop with no configured allocation cannot be priced; rank below
        // everything that can.
        return -2.0 * penalty * (1.0 + static_cast<double>(topo.total_slots()));
    }

    const auto loads = placement_loads(placement, topo);
    double violation = 0.0;
    for (std::size_t i = 0; i < loads.size(); ++i)
        violation += mfg::node_overload(loads[i], topo.nodes[i].capacity);

    if (violation == 0.0) return -objective_ms;
    return -objective_ms - penalty * (1.0 + violation);
}

GaResult evolve(const Scenario& scenario, const GaConfig& config) {
    if (config.population_size < 1) throw std::invalid_argument("population_size must be >= 1");
    if (config.generations < 0) throw std::invalid_argument("generations must be >= 0");
    if (config.tournament_size < 1) throw std::invalid_argument("tournament_size must be >= 1");
    if (config.crossover_rate < 0.0 || config.crossover_rate > 1.0 || config.mutation_rate < 0.0 ||
        config.mutation_rate > 1.0)
        throw std::invalid_argument("rates must lie in [0, 1]");

    const Topology& topo = scenario.topology;
    const std::size_t genes = topo.total_slots();
    const std::size_t nodes = topo.nodes.size();
    if (nodes == 0 || genes == 0) throw ScenarioError("GA needs nodes and chain slots");

    Rng rng(config.seed);
    const std::size_t pop_size = static_cast<std::size_t>(config.population_size);

    std::vector<Chromosome> population(pop_size);
    std::vector<double> scores(pop_size);
    for (auto& chromosome : population) {
        chromosome.genes.resize(genes);
        for (auto& gene : chromosome.genes)
            gene = static_cast<int>(rng.uniform_index(nodes));
    }
    for (std::size_t i = 0; i < pop_size; ++i) scores[i] = fitness(population[i], scenario, config);

    GaResult result;
    std::size_t best_idx = 0;
    for (std::size_t i = 1; i < pop_size; ++i)
        if (scores[i] > scores[best_idx]) best_idx = i;
    result.best = population[best_idx];
    result.best_fitness = scores[best_idx];

    auto record = [&](int generation) {
        double mean = 0.0;
        for (double f : scores) mean += f;
        mean /= static_cast<double>(pop_size);
        result.history.push_back({generation, result.best_fitness, mean});
    };
    record(0);

    auto tournament = [&]() -> const Chromosome& {
        std::size_t winner = rng.uniform_index(pop_size);
        for (int t = 1; t < config.tournament_size; ++t) {
            const std::size_t challenger = rng.uniform_index(pop_size);
            if (scores[challenger] > scores[winner]) winner = challenger;
        }
        return population[winner];
    };

    for (int gen = 1; gen <= config.generations; ++gen) {
        std::vector<Chromosome> next;
        next.reserve(pop_size);
        next.push_back(result.best);  // elitism of one
        while (next.size() < pop_size) {
            Chromosome child = tournament();
            if (rng.uniform() < config.crossover_rate && genes >= 2) {
                const Chromosome& other = tournament();
                const std::size_t cut = 1 + rng.uniform_index(genes - 1);
                for (std::size_t g = cut; g < genes; ++g) child.genes[g] = other.genes[g];
            }
            for (auto& gene : child.genes)
                if (rng.uniform() < config.mutation_rate)
                    gene = static_cast<int>(rng.uniform_index(nodes));
            next.push_back(std::move(child));
        }
        population = std::move(next);
        for (std::size_t i = 0; i < pop_size; ++i)
            scores[i] = fitness(population[i], scenario, config);
        for (std::size_t i = 0; i < pop_size; ++i) {
            if (scores[i] > result.best_fitness) {
                result.best_fitness = scores[i];
                result.best = population[i];
            }
        }
        record(gen);
    }
    return result;
}

void write_fitness_csv(const std::string& path, const GaResult& result) {
    CsvWriter csv(path, {"generation", "best_fitness", "mean_fitness"});
    for (const auto& g : result.history) {
        csv.field(static_cast<std::int64_t>(g.generation)).field(g.best_fitness).field(g.mean_fitness);
        csv.end_row();
    }
}

}  // namespace sfcmfg::ga
