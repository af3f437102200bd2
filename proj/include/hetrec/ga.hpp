#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "hetrec/errors.hpp"
#include "hetrec/parallel.hpp"

namespace hetrec {

/// Candidate weight vector: one gene per edge type in canonical registry
/// order (one per interaction in undirected mode), all within the gene range.
using Genome = std::vector<double>;

struct GaConfig {
  int population_size = 10;
  int parents_mating = 4;
  double mutation_gene_fraction = 0.10;   // share of genes perturbed per offspring
  double mutation_low = -0.3;
  double mutation_high = 0.3;
  double gene_min = 0.01;
  double gene_max = 2.0;
  int max_generations = 200;
  int patience = 20;  // generations without best-fitness improvement before stopping
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (parents_mating < 2) throw ConfigError("parents_mating must be >= 2");
    if (population_size < parents_mating)
      throw ConfigError("population_size must be >= parents_mating");
    if (!(mutation_gene_fraction > 0.0 && mutation_gene_fraction <= 1.0))
      throw ConfigError("mutation_gene_fraction must lie in (0,1]");
    if (mutation_low > mutation_high) throw ConfigError("invalid mutation range");
    if (!(gene_min > 0.0) || gene_min > gene_max)
      throw ConfigError("gene range must satisfy 0 < min <= max");
    if (max_generations < 1) throw ConfigError("max_generations must be >= 1");
    if (patience < 0) throw ConfigError("patience must be >= 0");
  }
};

namespace detail {

// splitmix64; used to derive independent per-offspring RNG streams from the
// master seed so parallel and sequential runs agree.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t generation, std::uint64_t slot) {
  return mix64(mix64(master ^ mix64(generation + 1)) ^ mix64(slot + 0x51ed2701));
}

}  // namespace detail

/// Component 1: population of genomes with genes i.i.d. uniform on the gene range.
inline std::vector<Genome> init_population(const GaConfig& config, int gene_count) {
  config.validate();
  if (gene_count < 1) throw ConfigError("gene_count must be >= 1");
  std::mt19937_64 rng(config.rng_seed);
  std::uniform_real_distribution<double> dist(config.gene_min, config.gene_max);
  std::vector<Genome> population(static_cast<std::size_t>(config.population_size));
  for (auto& genome : population) {
    genome.resize(static_cast<std::size_t>(gene_count));
    for (double& g : genome) g = dist(rng);
  }
  return population;
}

/// Component 3: indices of the parents_mating fittest genomes, descending
/// fitness, ties by genome index.
inline std::vector<std::size_t> select_parent_indices(std::span<const double> fitness,
                                                      int parents_mating) {
  if (parents_mating < 1 || static_cast<std::size_t>(parents_mating) > fitness.size())
    throw ConfigError("parents_mating out of range");
  std::vector<std::size_t> order(fitness.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });
  order.resize(static_cast<std::size_t>(parents_mating));
  return order;
}

inline std::vector<Genome> select_parents(const std::vector<Genome>& population,
                                          std::span<const double> fitness, const GaConfig& config) {
  config.validate();
  std::vector<Genome> parents;
  for (std::size_t i : select_parent_indices(fitness, config.parents_mating))
    parents.push_back(population[i]);
  return parents;
}

/// Component 4: uniform crossover; each gene copied from either parent with
/// probability 1/2.
inline Genome crossover_uniform(const Genome& a, const Genome& b, std::mt19937_64& rng) {
  if (a.size() != b.size()) throw ConfigError("crossover: parent length mismatch");
  Genome child(a.size());
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < child.size(); ++i) child[i] = coin(rng) ? a[i] : b[i];
  return child;
}

/// Component 5: exactly round(fraction * gene_count) genes, chosen uniformly
/// without replacement, perturbed additively within the mutation range and
/// clamped back into the gene range.
inline Genome mutate(Genome genome, const GaConfig& config, std::mt19937_64& rng) {
  config.validate();
  const auto count = static_cast<std::size_t>(std::llround(
      config.mutation_gene_fraction * static_cast<double>(genome.size())));
  if (count == 0) return genome;
  std::vector<std::size_t> idx(genome.size());
  std::iota(idx.begin(), idx.end(), 0);
  // Partial Fisher-Yates: the first `count` slots become the mutation targets.
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  std::uniform_real_distribution<double> delta(config.mutation_low, config.mutation_high);
  for (std::size_t i = 0; i < count; ++i) {
    double v = genome[idx[i]] + delta(rng);
    genome[idx[i]] = std::clamp(v, config.gene_min, config.gene_max);
  }
  return genome;
}

struct GenerationStats {
  int generation = 0;  // 1-based
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
};

struct GaResult {
  Genome best;
  double best_fitness = -std::numeric_limits<double>::infinity();
  std::vector<GenerationStats> history;
  int generations_run = 0;
};

/// Observer invoked after each generation's evaluation, before breeding.
using GaObserver =
    std::function<void(int generation, const std::vector<Genome>&, std::span<const double>)>;

/// The full loop: evaluate, select, uniform-crossover, mutate offspring.
/// Parents survive unchanged (elitism), so best fitness is non-decreasing.
/// Stops after `patience` generations without best-fitness improvement, or at
/// max_generations. Fitness evaluations run in parallel; results are
/// bit-identical to sequential execution.
template <typename FitnessFn>
GaResult evolve(FitnessFn&& fitness_fn, const GaConfig& config, int gene_count,
                const GaObserver& observer = {}) {
  config.validate();
  std::vector<Genome> population = init_population(config, gene_count);
  std::vector<double> fitness(population.size());
  std::vector<std::uint8_t> known(population.size(), 0);

  GaResult result;
  int stale = 0;
  const std::size_t offspring_count =
      static_cast<std::size_t>(config.population_size - config.parents_mating);

  for (int gen = 1; gen <= config.max_generations; ++gen) {
    parallel_for(population.size(), [&](std::size_t i) {
      if (!known[i]) fitness[i] = fitness_fn(std::as_const(population[i]));
    });
    std::fill(known.begin(), known.end(), 1);

    const auto ranked = select_parent_indices(fitness, config.parents_mating);
    const std::size_t best_idx =
        static_cast<std::size_t>(std::max_element(fitness.begin(), fitness.end()) - fitness.begin());
    const double gen_best = fitness[best_idx];
    const double gen_mean =
        std::accumulate(fitness.begin(), fitness.end(), 0.0) / static_cast<double>(fitness.size());
    result.history.push_back({gen, gen_best, gen_mean});
    result.generations_run = gen;
    if (observer) observer(gen, population, fitness);

    if (gen_best > result.best_fitness) {
      result.best_fitness = gen_best;
      result.best = population[best_idx];
      stale = 0;
    } else {
      ++stale;
    }
    if (stale >= config.patience || gen == config.max_generations) break;

    // Next population: parents in fitness order, then their offspring.
    std::vector<Genome> next;
    std::vector<double> next_fitness;
    std::vector<std::uint8_t> next_known;
    next.reserve(population.size());
    for (std::size_t i : ranked) {
      next.push_back(population[i]);
      next_fitness.push_back(fitness[i]);
      next_known.push_back(1);
    }
    for (std::size_t o = 0; o < offspring_count; ++o) {
      const Genome& pa = next[o % ranked.size()];
      const Genome& pb = next[(o + 1) % ranked.size()];
      std::mt19937_64 rng(detail::derive_seed(config.rng_seed, static_cast<std::uint64_t>(gen), o));
      Genome child = mutate(crossover_uniform(pa, pb, rng), config, rng);
      next.push_back(std::move(child));
      next_fitness.push_back(0.0);
      next_known.push_back(0);
    }
    population = std::move(next);
    fitness = std::move(next_fitness);
    known = std::move(next_known);
  }
  return result;
}

}  // namespace hetrec
