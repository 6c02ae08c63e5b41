#pragma once

#include "evocode/code.hpp"
#include "evocode/gf2.hpp"
#include "evocode/operators.hpp"
#include "evocode/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace evocode {

enum class Replacement { comma, plus };

inline const char* replacement_name(Replacement r) {
  return r == Replacement::comma ? "comma" : "plus";
}

struct EsConfig {
  ProblemInstance instance;
  int lambda = 0;
  int mu = 0;
  double p_mut = 0.0;
  Replacement variant = Replacement::comma;
  bool use_crossover = false;
  std::int64_t max_generations = 0;
  std::uint64_t seed = 0;
};

// Standard parameters: lambda = n, mu = floor(n/3) (raised to 1 for n < 3,
// where the floor would leave an empty pool), p_mut = 1/n, 20000 generations.
inline EsConfig default_config(const ProblemInstance& inst, Replacement variant,
                               bool use_crossover, std::uint64_t seed) {
  EsConfig cfg;
  cfg.instance = inst;
  cfg.lambda = inst.n;
  cfg.mu = std::max(1, inst.n / 3);
  cfg.p_mut = 1.0 / inst.n;
  cfg.variant = variant;
  cfg.use_crossover = use_crossover;
  cfg.max_generations = 20000;
  cfg.seed = seed;
  return cfg;
}

inline std::optional<std::string> validate_config(const EsConfig& cfg) {
  if (auto bad = validate_instance(cfg.instance)) return bad;
  if (cfg.mu < 1 || cfg.mu > cfg.lambda)
    return "pool size mu = " + std::to_string(cfg.mu) +
           " violates 1 <= mu <= lambda = " + std::to_string(cfg.lambda);
  if (cfg.variant == Replacement::plus && cfg.lambda <= cfg.mu)
    return "plus variant needs lambda > mu, got lambda = " +
           std::to_string(cfg.lambda) + ", mu = " + std::to_string(cfg.mu);
  if (!(cfg.p_mut > 0.0) || cfg.p_mut > 1.0)
    return "p_mut = " + std::to_string(cfg.p_mut) + " violates 0 < p_mut <= 1";
  if (cfg.max_generations < 0) return "max_generations must be >= 0";
  return std::nullopt;
}

struct Individual {
  GeneratorMatrix genotype;
  std::int64_t fitness = 0;
  // Ordinal of the fitness evaluation that scored this genotype, counting
  // from 1 across the whole run including initialization.
  std::int64_t birth_evaluation = 0;
};

struct EsState {
  std::int64_t generation = 0;
  std::vector<Individual> population;
  std::int64_t evaluations = 0;
  Individual best;
};

struct DiversityPoint {
  std::int64_t generation = 0;
  std::int64_t best_fitness = 0;
  double avg_fitness = 0.0;
  double avg_pairwise_distance = 0.0;
  std::int64_t evaluations = 0;
};

struct RunResult {
  bool success = false;
  std::optional<std::int64_t> evaluations_to_success;
  std::int64_t generations_used = 0;
  std::int64_t evaluations = 0;
  Individual best;
  std::vector<DiversityPoint> diversity_trace;
};

struct TraceOptions {
  bool enabled = false;
  std::int64_t every = 40;
};

// The mu best individuals, in rank order. Individuals strictly above the
// cutoff fitness always make it; the remaining slots go to a uniformly
// random subset of those exactly at the cutoff, to avoid positional bias.
inline std::vector<Individual> select_truncation(
    const std::vector<Individual>& pop, int mu, Rng& rng) {
  if (mu < 1 || mu > static_cast<int>(pop.size()))
    throw std::invalid_argument("select_truncation: mu out of range");
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pop[a].fitness > pop[b].fitness;
  });
  const std::int64_t cutoff = pop[order[static_cast<std::size_t>(mu) - 1]].fitness;

  std::vector<std::size_t> chosen;
  std::vector<std::size_t> at_cutoff;
  chosen.reserve(static_cast<std::size_t>(mu));
  for (std::size_t idx : order) {
    if (pop[idx].fitness > cutoff)
      chosen.push_back(idx);
    else if (pop[idx].fitness == cutoff)
      at_cutoff.push_back(idx);
  }
  shuffle_in_place(rng, at_cutoff);
  for (std::size_t i = 0; chosen.size() < static_cast<std::size_t>(mu); ++i)
    chosen.push_back(at_cutoff[i]);

  std::vector<Individual> out;
  out.reserve(static_cast<std::size_t>(mu));
  for (std::size_t idx : chosen) out.push_back(pop[idx]);
  return out;
}

// Offspring counts per selected parent, rank order. The comma variant fills
// the whole next population (lambda offspring), the plus variant only the
// complement of the retained pool (lambda - mu). Whatever does not divide
// evenly goes one-each to the best-ranked parents.
inline std::vector<int> offspring_quota(int lambda, int mu, Replacement variant) {
  if (mu < 1 || mu > lambda)
    throw std::invalid_argument("offspring_quota: need 1 <= mu <= lambda");
  const int total = variant == Replacement::comma ? lambda : lambda - mu;
  if (total <= 0)
    throw std::invalid_argument(
        "offspring_quota: plus variant with lambda = mu produces no offspring");
  std::vector<int> quota(static_cast<std::size_t>(mu), total / mu);
  for (int i = 0; i < total % mu; ++i) ++quota[static_cast<std::size_t>(i)];
  return quota;
}

// Lambda uniform full-rank genotypes, each scored once. The best individual
// is only replaced on strictly greater fitness, so best.birth_evaluation is
// always the ordinal of the first evaluation that reached that fitness.
inline EsState init_state(const EsConfig& cfg, FitnessEvaluator& evaluator,
                          Rng& rng) {
  EsState state;
  state.population.reserve(static_cast<std::size_t>(cfg.lambda));
  for (int i = 0; i < cfg.lambda; ++i) {
    Individual ind;
    ind.genotype = random_full_rank(cfg.instance.k, cfg.instance.n, rng);
    ind.fitness = evaluator.evaluate(ind.genotype);
    ind.birth_evaluation = ++state.evaluations;
    if (state.population.empty() || ind.fitness > state.best.fitness)
      state.best = ind;
    state.population.push_back(std::move(ind));
  }
  return state;
}

inline EsState step(const EsState& state, const EsConfig& cfg,
                    FitnessEvaluator& evaluator, Rng& rng) {
  const std::vector<Individual> pool =
      select_truncation(state.population, cfg.mu, rng);
  const std::vector<int> quota =
      offspring_quota(cfg.lambda, cfg.mu, cfg.variant);

  EsState next;
  next.generation = state.generation + 1;
  next.evaluations = state.evaluations;
  next.best = state.best;
  next.population.reserve(static_cast<std::size_t>(cfg.lambda));

  for (std::size_t pi = 0; pi < pool.size(); ++pi) {
    for (int c = 0; c < quota[pi]; ++c) {
      GeneratorMatrix child = pool[pi].genotype;
      if (cfg.use_crossover) {
        std::size_t mi = pi;
        if (cfg.mu > 1) {
          mi = static_cast<std::size_t>(
              uniform_below(rng, static_cast<std::uint64_t>(cfg.mu) - 1));
          if (mi >= pi) ++mi;
        }
        child = crossover(child, pool[mi].genotype, rng);
      }
      child = mutate(child, cfg.p_mut, rng);

      Individual ind{std::move(child), 0, ++next.evaluations};
      ind.fitness = evaluator.evaluate(ind.genotype);
      if (ind.fitness > next.best.fitness) next.best = ind;
      next.population.push_back(std::move(ind));
    }
  }
  if (cfg.variant == Replacement::plus)
    next.population.insert(next.population.end(), pool.begin(), pool.end());
  return next;
}

// Mean fitness over the population.
inline double average_fitness(const std::vector<Individual>& pop) {
  if (pop.empty()) throw std::invalid_argument("average_fitness: empty population");
  double sum = 0.0;
  for (const Individual& ind : pop) sum += static_cast<double>(ind.fitness);
  return sum / static_cast<double>(pop.size());
}

// Mean subspace distance over all unordered pairs.
inline double average_pairwise_distance(const std::vector<Individual>& pop) {
  if (pop.size() < 2)
    throw std::invalid_argument(
        "average_pairwise_distance: need at least two individuals");
  double sum = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i)
    for (std::size_t j = i + 1; j < pop.size(); ++j)
      sum += static_cast<double>(
          subspace_distance(pop[i].genotype, pop[j].genotype));
  const auto pairs = static_cast<double>(pop.size() * (pop.size() - 1) / 2);
  return sum / pairs;
}

inline DiversityPoint diversity_snapshot(const EsState& state) {
  DiversityPoint p;
  p.generation = state.generation;
  p.best_fitness = state.best.fitness;
  p.avg_fitness = average_fitness(state.population);
  p.avg_pairwise_distance = average_pairwise_distance(state.population);
  p.evaluations = state.evaluations;
  return p;
}

// Full run: random initialization (lambda evaluations), then generations
// until the optimum is scored or the budget runs out. With tracing enabled
// the run always exhausts the budget, snapshotting every `every`
// generations, so traces of successful and failed runs stay comparable.
inline RunResult run(const EsConfig& cfg, const TraceOptions& trace = {}) {
  if (auto bad = validate_config(cfg))
    throw std::invalid_argument("run: invalid config: " + *bad);
  if (trace.enabled && trace.every < 1)
    throw std::invalid_argument("run: trace interval must be >= 1");

  const std::int64_t optimum = optimal_fitness(cfg.instance);
  FitnessEvaluator evaluator(cfg.instance);
  Rng rng(cfg.seed);

  EsState state = init_state(cfg, evaluator, rng);
  RunResult result;
  if (trace.enabled) result.diversity_trace.push_back(diversity_snapshot(state));

  while (state.generation < cfg.max_generations) {
    if (state.best.fitness == optimum && !trace.enabled) break;
    state = step(state, cfg, evaluator, rng);
    if (trace.enabled && state.generation % trace.every == 0)
      result.diversity_trace.push_back(diversity_snapshot(state));
  }

  result.success = state.best.fitness == optimum;
  if (result.success) result.evaluations_to_success = state.best.birth_evaluation;
  result.generations_used = state.generation;
  result.evaluations = state.evaluations;
  result.best = state.best;
  return result;
}

// CSV run log, one row per snapshot.
inline void write_trace_csv(std::ostream& out,
                            const std::vector<DiversityPoint>& trace) {
  out << "generation,best_fitness,avg_fitness,avg_pairwise_distance,evaluations\n";
  for (const DiversityPoint& p : trace)
    out << p.generation << ',' << p.best_fitness << ',' << p.avg_fitness << ','
        << p.avg_pairwise_distance << ',' << p.evaluations << '\n';
}

}  // namespace evocode
