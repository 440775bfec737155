#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "grom/errors.hpp"

namespace grom {

/// Real-coded GA hyperparameters. Fitness is maximized.
struct GaConfig {
  std::size_t population_size = 40;
  std::size_t generations = 60;
  double crossover_rate = 0.9;
  double mutation_rate = 0.1;
  double mutation_sigma = 0.1;  // fraction of each gene's range
  std::size_t elitism_count = 1;
  std::size_t tournament_size = 3;
  double blx_alpha = 0.5;
  std::size_t stagnation_generations = 0;  // 0 disables the stagnation stop
  std::vector<std::pair<double, double>> bounds;  // per-gene (low, high)
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (population_size == 0) throw config_error("ga: population_size must be positive");
    if (generations == 0) throw config_error("ga: generations must be positive");
    if (crossover_rate < 0.0 || crossover_rate > 1.0)
      throw config_error("ga: crossover_rate must lie in [0,1]");
    if (mutation_rate < 0.0 || mutation_rate > 1.0)
      throw config_error("ga: mutation_rate must lie in [0,1]");
    if (!(mutation_sigma > 0.0)) throw config_error("ga: mutation_sigma must be positive");
    if (elitism_count >= population_size)
      throw config_error("ga: elitism_count must be below population_size");
    if (tournament_size < 2) throw config_error("ga: tournament_size must be at least 2");
    if (bounds.empty()) throw config_error("ga: bounds are required");
    for (const auto& [lo, hi] : bounds)
      if (!(lo < hi)) throw config_error("ga: each bound must satisfy low < high");
  }
};

struct Individual {
  std::vector<double> genes;
  std::optional<double> fitness;
};

/// Per-generation history. best_fitness is non-decreasing when elitism >= 1.
struct GaTrace {
  std::vector<double> best_fitness;
  std::vector<double> mean_fitness;
  std::vector<std::vector<double>> best_genes;
};

/// Fittest of `size` individuals drawn uniformly with replacement.
inline const Individual& select_tournament(const std::vector<Individual>& population,
                                           std::size_t size, std::mt19937_64& rng) {
  if (population.empty()) throw config_error("ga: empty population");
  std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);
  const Individual* best = nullptr;
  for (std::size_t i = 0; i < size; ++i) {
    const Individual& cand = population[pick(rng)];
    if (!best || cand.fitness.value() > best->fitness.value()) best = &cand;
  }
  return *best;
}

namespace detail {

inline void clip_to_bounds(std::vector<double>& genes,
                           const std::vector<std::pair<double, double>>& bounds) {
  for (std::size_t k = 0; k < genes.size(); ++k)
    genes[k] = std::clamp(genes[k], bounds[k].first, bounds[k].second);
}

}  // namespace detail

/// BLX-alpha blend crossover: each child gene is uniform on the parents'
/// interval extended by alpha times its width, then clipped to bounds.
inline std::pair<Individual, Individual> crossover_blend(
    const Individual& a, const Individual& b, double alpha,
    const std::vector<std::pair<double, double>>& bounds, std::mt19937_64& rng) {
  if (a.genes.size() != b.genes.size() || a.genes.size() != bounds.size())
    throw config_error("ga: crossover dimension mismatch");
  Individual c1, c2;
  c1.genes.resize(a.genes.size());
  c2.genes.resize(a.genes.size());
  for (std::size_t k = 0; k < a.genes.size(); ++k) {
    const double lo = std::min(a.genes[k], b.genes[k]);
    const double hi = std::max(a.genes[k], b.genes[k]);
    const double ext = alpha * (hi - lo);
    std::uniform_real_distribution<double> u(lo - ext, hi + ext);
    c1.genes[k] = (hi - lo + ext > 0.0) ? u(rng) : lo;
    c2.genes[k] = (hi - lo + ext > 0.0) ? u(rng) : lo;
  }
  detail::clip_to_bounds(c1.genes, bounds);
  detail::clip_to_bounds(c2.genes, bounds);
  return {std::move(c1), std::move(c2)};
}

/// Gaussian mutation: each gene independently perturbed with probability
/// `rate` by a normal step of std sigma * (high - low), clipped to bounds.
inline Individual mutate_gaussian(const Individual& x, double rate, double sigma,
                                  const std::vector<std::pair<double, double>>& bounds,
                                  std::mt19937_64& rng) {
  Individual out;
  out.genes = x.genes;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t k = 0; k < out.genes.size(); ++k) {
    if (u(rng) < rate) {
      std::normal_distribution<double> step(0.0, sigma * (bounds[k].second - bounds[k].first));
      out.genes[k] += step(rng);
    }
  }
  detail::clip_to_bounds(out.genes, bounds);
  return out;
}

/// Canonical real-coded GA: tournament selection, BLX-alpha crossover,
/// Gaussian mutation, elitism. Deterministic for a fixed seed; the RNG is
/// consumed only here, never inside fitness.
inline std::pair<Individual, GaTrace> run_ga(
    const GaConfig& config, const std::function<double(const std::vector<double>&)>& fitness) {
  config.validate();
  std::mt19937_64 rng(config.rng_seed);
  const std::size_t d = config.bounds.size();

  auto evaluate = [&](Individual& ind) {
    if (ind.fitness) return;
    const double f = fitness(ind.genes);
    if (std::isnan(f)) {
      std::ostringstream os;
      os << "ga: fitness returned NaN at genes (";
      for (std::size_t k = 0; k < ind.genes.size(); ++k)
        os << (k ? ", " : "") << ind.genes[k];
      os << ")";
      throw numerical_error(os.str());
    }
    ind.fitness = f;
  };

  std::vector<Individual> pop(config.population_size);
  for (Individual& ind : pop) {
    ind.genes.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
      std::uniform_real_distribution<double> u(config.bounds[k].first, config.bounds[k].second);
      ind.genes[k] = u(rng);
    }
  }
  for (Individual& ind : pop) evaluate(ind);

  GaTrace trace;
  Individual best;
  std::size_t stagnant = 0;

  for (std::size_t gen = 0; gen < config.generations; ++gen) {
    std::vector<std::size_t> order(pop.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pop[a].fitness.value() > pop[b].fitness.value();
    });

    const Individual& gen_best = pop[order.front()];
    double mean = 0.0;
    for (const Individual& ind : pop) mean += ind.fitness.value();
    mean /= static_cast<double>(pop.size());

    const bool improved = !best.fitness || gen_best.fitness.value() > best.fitness.value() + 1e-12;
    if (!best.fitness || gen_best.fitness.value() > best.fitness.value()) best = gen_best;
    trace.best_fitness.push_back(best.fitness.value());
    trace.mean_fitness.push_back(mean);
    trace.best_genes.push_back(best.genes);

    stagnant = improved ? 0 : stagnant + 1;
    if (config.stagnation_generations > 0 && stagnant >= config.stagnation_generations) break;
    if (gen + 1 == config.generations) break;

    std::vector<Individual> next;
    next.reserve(pop.size());
    for (std::size_t e = 0; e < config.elitism_count; ++e) next.push_back(pop[order[e]]);

    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (next.size() < pop.size()) {
      const Individual& p1 = select_tournament(pop, config.tournament_size, rng);
      const Individual& p2 = select_tournament(pop, config.tournament_size, rng);
      Individual c1 = p1, c2 = p2;
      if (u(rng) < config.crossover_rate) {
        auto [a, b] = crossover_blend(p1, p2, config.blx_alpha, config.bounds, rng);
        c1 = std::move(a);
        c2 = std::move(b);
      }
      c1 = mutate_gaussian(c1, config.mutation_rate, config.mutation_sigma, config.bounds, rng);
      c1.fitness.reset();
      next.push_back(std::move(c1));
      if (next.size() < pop.size()) {
        c2 = mutate_gaussian(c2, config.mutation_rate, config.mutation_sigma, config.bounds, rng);
        c2.fitness.reset();
        next.push_back(std::move(c2));
      }
    }
    pop = std::move(next);
    for (Individual& ind : pop) evaluate(ind);
  }
  return {std::move(best), std::move(trace)};
}

}  // namespace grom
