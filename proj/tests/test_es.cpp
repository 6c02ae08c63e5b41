#include "evocode/es.hpp"
#include "evocode/code.hpp"
#include "evocode/gf2.hpp"
#include "evocode/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <sstream>

using namespace evocode;

namespace {

Individual make_ind(const GeneratorMatrix& g, std::int64_t fit) {
  return Individual{g, fit, 0};
}

}  // namespace

TEST_CASE("default_config follows the standard parameters", "[es]") {
  const EsConfig cfg = default_config({16, 8, 5}, Replacement::plus, true, 42);
  CHECK(cfg.lambda == 16);
  CHECK(cfg.mu == 5);
  CHECK(cfg.p_mut == Catch::Approx(1.0 / 16));
  CHECK(cfg.variant == Replacement::plus);
  CHECK(cfg.use_crossover);
  CHECK(cfg.max_generations == 20000);
  CHECK(cfg.seed == 42);
  CHECK_FALSE(validate_config(cfg));

  CHECK(default_config({12, 6, 4}, Replacement::comma, false, 0).mu == 4);
}

TEST_CASE("validate_config reports each violation", "[es]") {
  EsConfig cfg = default_config({12, 6, 4}, Replacement::comma, false, 1);
  CHECK_FALSE(validate_config(cfg));

  EsConfig bad = cfg;
  bad.instance = {10, 5, 7};
  CHECK(validate_config(bad).has_value());

  bad = cfg;
  bad.mu = 0;
  CHECK(validate_config(bad).has_value());
  bad.mu = 13;
  CHECK(validate_config(bad).has_value());

  bad = cfg;
  bad.variant = Replacement::plus;
  bad.mu = bad.lambda;
  CHECK(validate_config(bad).has_value());

  bad = cfg;
  bad.p_mut = 0.0;
  CHECK(validate_config(bad).has_value());
  bad.p_mut = 1.25;
  CHECK(validate_config(bad).has_value());

  bad = cfg;
  bad.max_generations = -1;
  CHECK(validate_config(bad).has_value());
}

TEST_CASE("select_truncation keeps the mu best", "[es]") {
  Rng rng(151);
  const GeneratorMatrix g = random_full_rank(2, 4, rng);
  std::vector<Individual> pop;
  for (std::int64_t fit : {5, 9, 1, 7, 3}) pop.push_back(make_ind(g, fit));

  const auto picked = select_truncation(pop, 3, rng);
  REQUIRE(picked.size() == 3);
  CHECK(picked[0].fitness == 9);
  CHECK(picked[1].fitness == 7);
  CHECK(picked[2].fitness == 5);

  const auto all = select_truncation(pop, 5, rng);
  CHECK(all.size() == 5);
  CHECK(all[0].fitness == 9);
  CHECK(all[4].fitness == 1);

  CHECK_THROWS_AS(select_truncation(pop, 0, rng), std::invalid_argument);
  CHECK_THROWS_AS(select_truncation(pop, 6, rng), std::invalid_argument);
}

TEST_CASE("select_truncation breaks cutoff ties uniformly", "[es]") {
  Rng rng(157);
  const GeneratorMatrix g = random_full_rank(2, 4, rng);
  // One clear winner, four tied at the cutoff competing for two slots.
  std::vector<Individual> pop;
  pop.push_back(make_ind(g, 9));
  for (int i = 0; i < 4; ++i) {
    Individual ind = make_ind(g, 4);
    ind.birth_evaluation = i;
    pop.push_back(ind);
  }

  std::map<std::int64_t, int> picks;
  const int trials = 10000;
  for (int trial = 0; trial < trials; ++trial) {
    const auto picked = select_truncation(pop, 3, rng);
    REQUIRE(picked.size() == 3);
    CHECK(picked[0].fitness == 9);
    for (std::size_t i = 1; i < picked.size(); ++i) {
      CHECK(picked[i].fitness == 4);
      ++picks[picked[i].birth_evaluation];
    }
  }
  for (int i = 0; i < 4; ++i) {
    const double freq = static_cast<double>(picks[i]) / (2.0 * trials);
    CHECK(freq == Catch::Approx(0.25).margin(0.02));
  }
}

TEST_CASE("offspring_quota splits the brood by rank", "[es]") {
  CHECK(offspring_quota(12, 4, Replacement::comma) ==
        std::vector<int>{3, 3, 3, 3});
  CHECK(offspring_quota(13, 4, Replacement::comma) ==
        std::vector<int>{4, 3, 3, 3});
  CHECK(offspring_quota(12, 4, Replacement::plus) ==
        std::vector<int>{2, 2, 2, 2});
  CHECK(offspring_quota(16, 5, Replacement::plus) ==
        std::vector<int>{3, 2, 2, 2, 2});
  CHECK(offspring_quota(3, 1, Replacement::comma) == std::vector<int>{3});

  CHECK_THROWS_AS(offspring_quota(4, 4, Replacement::plus),
                  std::invalid_argument);
  CHECK_THROWS_AS(offspring_quota(4, 0, Replacement::comma),
                  std::invalid_argument);
  CHECK_THROWS_AS(offspring_quota(4, 5, Replacement::comma),
                  std::invalid_argument);
}

TEST_CASE("step keeps the population shape and the evaluation count", "[es]") {
  for (const Replacement variant : {Replacement::comma, Replacement::plus}) {
    for (const bool xo : {false, true}) {
      EsConfig cfg = default_config({10, 5, 4}, variant, xo, 7);
      FitnessEvaluator evaluator(cfg.instance);
      Rng rng(cfg.seed);

      EsState state = init_state(cfg, evaluator, rng);
      CHECK(state.generation == 0);
      CHECK(state.population.size() == 10);
      CHECK(state.evaluations == 10);

      const int per_gen =
          variant == Replacement::comma ? cfg.lambda : cfg.lambda - cfg.mu;
      for (int gen = 1; gen <= 5; ++gen) {
        const std::int64_t prev_best = state.best.fitness;
        state = step(state, cfg, evaluator, rng);
        CHECK(state.generation == gen);
        CHECK(state.population.size() ==
              static_cast<std::size_t>(cfg.lambda));
        CHECK(state.evaluations == 10 + std::int64_t{gen} * per_gen);
        CHECK(state.best.fitness >= prev_best);
        for (const Individual& ind : state.population) {
          CHECK(evocode::rank(ind.genotype.mat) == 5);
          CHECK(ind.fitness == evaluator.evaluate(ind.genotype));
        }
      }
    }
  }
}

TEST_CASE("plus replacement never loses the best individual", "[es]") {
  EsConfig cfg = default_config({12, 6, 4}, Replacement::plus, false, 11);
  FitnessEvaluator evaluator(cfg.instance);
  Rng rng(cfg.seed);

  EsState state = init_state(cfg, evaluator, rng);
  for (int gen = 0; gen < 30; ++gen) {
    const std::int64_t prev_best = state.best.fitness;
    state = step(state, cfg, evaluator, rng);
    std::int64_t in_pop = state.population.front().fitness;
    for (const Individual& ind : state.population)
      in_pop = std::max(in_pop, ind.fitness);
    CHECK(in_pop >= prev_best);
    CHECK(state.best.fitness == in_pop);
  }
}

TEST_CASE("run solves a trivial instance and reports the witness", "[es]") {
  EsConfig cfg = default_config({3, 1, 3}, Replacement::comma, false, 5);
  const RunResult result = run(cfg);
  REQUIRE(result.success);
  CHECK(result.best.fitness == optimal_fitness({3, 1, 3}));
  CHECK(span(result.best.genotype).words ==
        std::vector<std::uint32_t>{0b000, 0b111});
  REQUIRE(result.evaluations_to_success.has_value());
  CHECK(*result.evaluations_to_success <= result.evaluations);
  CHECK(*result.evaluations_to_success >= 1);
  CHECK(result.diversity_trace.empty());
}

TEST_CASE("run is deterministic in the seed", "[es]") {
  EsConfig cfg = default_config({8, 4, 3}, Replacement::plus, true, 1234);
  cfg.max_generations = 60;

  const RunResult a = run(cfg);
  const RunResult b = run(cfg);
  CHECK(a.success == b.success);
  CHECK(a.evaluations == b.evaluations);
  CHECK(a.generations_used == b.generations_used);
  CHECK(a.best.fitness == b.best.fitness);
  CHECK(a.best.genotype.mat.rows == b.best.genotype.mat.rows);
  CHECK(a.evaluations_to_success == b.evaluations_to_success);

  EsConfig other = cfg;
  other.seed = 1235;
  const RunResult c = run(other);
  CHECK(c.best.genotype.mat.rows != a.best.genotype.mat.rows);
}

TEST_CASE("run with a zero budget only initializes", "[es]") {
  EsConfig cfg = default_config({8, 4, 3}, Replacement::comma, false, 3);
  cfg.max_generations = 0;
  const RunResult result = run(cfg);
  CHECK(result.generations_used == 0);
  CHECK(result.evaluations == cfg.lambda);
}

TEST_CASE("tracing snapshots on schedule and exhausts the budget", "[es]") {
  EsConfig cfg = default_config({3, 1, 3}, Replacement::comma, false, 5);
  cfg.max_generations = 120;
  TraceOptions trace;
  trace.enabled = true;
  trace.every = 40;

  const RunResult result = run(cfg, trace);
  CHECK(result.success);
  CHECK(result.generations_used == 120);
  REQUIRE(result.diversity_trace.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    const DiversityPoint& p = result.diversity_trace[i];
    CHECK(p.generation == static_cast<std::int64_t>(40 * i));
    CHECK(p.best_fitness <= optimal_fitness(cfg.instance));
    CHECK(p.avg_fitness <= static_cast<double>(p.best_fitness));
    CHECK(p.avg_pairwise_distance >= 0.0);
  }
  CHECK(result.diversity_trace.back().evaluations == result.evaluations);

  trace.every = 0;
  CHECK_THROWS_AS(run(cfg, trace), std::invalid_argument);

  EsConfig bad = cfg;
  bad.mu = 0;
  CHECK_THROWS_AS(run(bad), std::invalid_argument);
}

TEST_CASE("diversity_snapshot aggregates the population", "[es]") {
  const GeneratorMatrix a(make_matrix(3, {0b100}));
  const GeneratorMatrix b(make_matrix(3, {0b010}));
  const GeneratorMatrix c(make_matrix(3, {0b110}));

  EsState state;
  state.generation = 17;
  state.evaluations = 99;
  state.population = {make_ind(a, 4), make_ind(b, 6), make_ind(c, 8)};
  state.best = state.population[2];

  const DiversityPoint p = diversity_snapshot(state);
  CHECK(p.generation == 17);
  CHECK(p.evaluations == 99);
  CHECK(p.best_fitness == 8);
  CHECK(p.avg_fitness == Catch::Approx(6.0));
  CHECK(p.avg_pairwise_distance == Catch::Approx(2.0));

  state.population.resize(1);
  CHECK_THROWS_AS(diversity_snapshot(state), std::invalid_argument);
  CHECK_THROWS_AS(average_fitness({}), std::invalid_argument);
}

TEST_CASE("write_trace_csv emits one row per snapshot", "[es]") {
  std::vector<DiversityPoint> trace;
  trace.push_back({0, 5, 4.5, 3.25, 16});
  trace.push_back({40, 7, 6.0, 2.0, 656});

  std::ostringstream out;
  write_trace_csv(out, trace);
  CHECK(out.str() ==
        "generation,best_fitness,avg_fitness,avg_pairwise_distance,"
        "evaluations\n"
        "0,5,4.5,3.25,16\n"
        "40,7,6,2,656\n");
}
