#pragma once

// Problem-agnostic generational GA with tournament selection.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gasa/errors.hpp"
#include "gasa/rng.hpp"

namespace gasa {

struct GAConfig {
    std::size_t population_size = 200;
    std::size_t tournament_size = 7;
    std::size_t max_generations = 500;
    double crossover_rate = 0.60;
    double mutation_rate = 0.40;
    std::uint64_t seed = 1;

    void validate() const {
        if (population_size == 0) throw ContractError("GAConfig: population size must be positive");
        if (tournament_size == 0) throw ContractError("GAConfig: tournament size must be positive");
        if (tournament_size > population_size)
            throw ContractError("GAConfig: tournament size exceeds population size");
        if (crossover_rate < 0.0 || crossover_rate > 1.0 || mutation_rate < 0.0 || mutation_rate > 1.0)
            throw ContractError("GAConfig: rates must be probabilities");
        if (std::abs(crossover_rate + mutation_rate - 1.0) > 1e-9)
            throw ContractError("GAConfig: crossover rate + mutation rate must equal 1");
    }
};

template <class Genome>
struct EvaluatedIndividual {
    Genome genome;
    std::size_t fitness = 0;
};

struct RunStats {
    std::size_t generations_executed = 0;
    /// Best-ever fitness after generation 0, 1, ..., generations_executed.
    std::vector<std::size_t> best_fitness_per_generation;
    bool terminated_early = false;
};

template <class Genome>
struct RunResult {
    EvaluatedIndividual<Genome> best;
    RunStats stats;
};

/// What run_ga needs from a problem. `max_fitness()` returns the attainable
/// optimum when one is known; reaching it stops the run.
template <class P>
concept GeneticProblem = requires(const P& problem, const typename P::Genome& genome, Rng& rng) {
    typename P::Genome;
    { problem.random_genome(rng) } -> std::same_as<typename P::Genome>;
    { problem.fitness(genome) } -> std::convertible_to<std::size_t>;
    { problem.mutate(genome, rng) } -> std::same_as<typename P::Genome>;
    { problem.crossover(genome, genome, rng) } -> std::same_as<std::pair<typename P::Genome, typename P::Genome>>;
    { problem.max_fitness() } -> std::convertible_to<std::optional<std::size_t>>;
};

/// k population indices drawn uniformly with replacement.
inline std::vector<std::size_t> draw_tournament(std::size_t population_size, std::size_t k, Rng& rng) {
    std::vector<std::size_t> drawn(k);
    for (auto& d : drawn) d = rng.index(population_size);
    return drawn;
}

/// Index of a maximal-fitness member among `drawn`. Ties are broken uniformly
/// over the tied draws (reservoir style, one draw per tie encountered).
template <class Genome>
std::size_t best_of(std::span<const EvaluatedIndividual<Genome>> population, std::span<const std::size_t> drawn,
                    Rng& rng) {
    if (drawn.empty()) throw ContractError("best_of: no candidates");
    std::size_t best = drawn[0];
    std::size_t ties = 1;
    for (std::size_t i = 1; i < drawn.size(); ++i) {
        const auto f = population[drawn[i]].fitness, bf = population[best].fitness;
        if (f > bf) {
            best = drawn[i];
            ties = 1;
        } else if (f == bf) {
            ++ties;
            if (rng.index(ties) == 0) best = drawn[i];
        }
    }
    return best;
}

template <class Genome>
std::size_t tournament_select_index(std::span<const EvaluatedIndividual<Genome>> population, std::size_t k,
                                    Rng& rng) {
    if (population.empty()) throw ContractError("tournament_select: empty population");
    if (k == 0) throw ContractError("tournament_select: tournament size must be positive");
    const auto drawn = draw_tournament(population.size(), k, rng);
    return best_of(population, std::span<const std::size_t>(drawn), rng);
}

template <class Genome>
const EvaluatedIndividual<Genome>& tournament_select(std::span<const EvaluatedIndividual<Genome>> population,
                                                     std::size_t k, Rng& rng) {
    return population[tournament_select_index(population, k, rng)];
}

template <class Genome>
const EvaluatedIndividual<Genome>& tournament_select(const std::vector<EvaluatedIndividual<Genome>>& population,
                                                     std::size_t k, Rng& rng) {
    return tournament_select(std::span<const EvaluatedIndividual<Genome>>(population), k, rng);
}

/// Generational GA without elitism; returns the best individual ever seen.
///
/// Draw order per run: population_size initial genomes, then per offspring
/// step the crossover/mutation coin, the tournament(s), and the operator's
/// own draws. Fitness is never given the Rng, so evaluation order cannot
/// change results.
template <GeneticProblem Problem>
RunResult<typename Problem::Genome> run_ga(const Problem& problem, const GAConfig& config) {
    using Genome = typename Problem::Genome;
    using Individual = EvaluatedIndividual<Genome>;
    config.validate();

    Rng rng(config.seed);
    const std::optional<std::size_t> optimum = problem.max_fitness();

    std::vector<Individual> population;
    population.reserve(config.population_size);
    for (std::size_t i = 0; i < config.population_size; ++i) population.push_back({problem.random_genome(rng), 0});
    for (auto& ind : population) ind.fitness = problem.fitness(ind.genome);

    RunResult<Genome> result;
    bool have_best = false;
    auto track_best = [&] {
        for (const auto& ind : population)
            if (!have_best || ind.fitness > result.best.fitness) {
                result.best = ind;
                have_best = true;
            }
        result.stats.best_fitness_per_generation.push_back(result.best.fitness);
    };
    auto solved = [&] { return optimum && result.best.fitness >= *optimum; };

    track_best();
    if (solved()) {
        result.stats.terminated_early = true;
        return result;
    }

    std::vector<Individual> offspring;
    offspring.reserve(config.population_size);
    for (std::size_t gen = 1; gen <= config.max_generations; ++gen) {
        offspring.clear();
        const std::span<const Individual> parents(population);
        while (offspring.size() < config.population_size) {
            if (rng.bernoulli(config.crossover_rate)) {
                const auto& a = parents[tournament_select_index(parents, config.tournament_size, rng)];
                const auto& b = parents[tournament_select_index(parents, config.tournament_size, rng)];
                auto [c1, c2] = problem.crossover(a.genome, b.genome, rng);
                offspring.push_back({std::move(c1), 0});
                if (offspring.size() < config.population_size) offspring.push_back({std::move(c2), 0});
            } else {
                const auto& p = parents[tournament_select_index(parents, config.tournament_size, rng)];
                offspring.push_back({problem.mutate(p.genome, rng), 0});
            }
        }
        for (auto& ind : offspring) ind.fitness = problem.fitness(ind.genome);
        population.swap(offspring);

        result.stats.generations_executed = gen;
        track_best();
        if (solved()) {
            result.stats.terminated_early = true;
            break;
        }
    }
    return result;
}

}  // namespace gasa
