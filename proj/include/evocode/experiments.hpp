#pragma once

#include "evocode/code.hpp"
#include "evocode/equivalence.hpp"
#include "evocode/es.hpp"
#include "evocode/matrix_io.hpp"
#include "evocode/rng.hpp"
#include "evocode/stats.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace evocode {

struct VariantSpec {
  Replacement replacement = Replacement::comma;
  bool use_crossover = false;

  friend bool operator==(const VariantSpec&, const VariantSpec&) = default;
};

inline std::string variant_name(const VariantSpec& v) {
  std::string name = replacement_name(v.replacement);
  if (v.use_crossover) name += "+xo";
  return name;
}

inline std::optional<VariantSpec> parse_variant(const std::string& name) {
  if (name == "comma") return VariantSpec{Replacement::comma, false};
  if (name == "comma+xo") return VariantSpec{Replacement::comma, true};
  if (name == "plus") return VariantSpec{Replacement::plus, false};
  if (name == "plus+xo") return VariantSpec{Replacement::plus, true};
  return std::nullopt;
}

inline std::vector<VariantSpec> all_variants() {
  return {{Replacement::comma, false},
          {Replacement::comma, true},
          {Replacement::plus, false},
          {Replacement::plus, true}};
}

struct Campaign {
  std::vector<ProblemInstance> instances;
  std::vector<VariantSpec> variants;
  int runs_per_cell = 30;
  std::uint64_t master_seed = 0;
  std::int64_t budget = 20000;
  std::int64_t diversity_every = 40;
  bool trace_diversity = false;
};

inline std::optional<std::string> validate_campaign(const Campaign& c) {
  if (c.instances.empty()) return std::string("campaign has no instances");
  for (const ProblemInstance& inst : c.instances)
    if (auto bad = validate_instance(inst)) return bad;
  if (c.variants.empty()) return std::string("campaign has no variants");
  for (std::size_t i = 0; i < c.variants.size(); ++i)
    for (std::size_t j = i + 1; j < c.variants.size(); ++j)
      if (c.variants[i] == c.variants[j])
        return "duplicate variant " + variant_name(c.variants[i]);
  if (c.runs_per_cell < 1) return std::string("runs_per_cell must be >= 1");
  if (c.budget < 0) return std::string("budget must be >= 0");
  if (c.diversity_every < 1) return std::string("diversity_every must be >= 1");
  return std::nullopt;
}

// Per-run configuration: Table-style defaults for the instance, the
// campaign's budget, and the given per-run seed.
inline EsConfig cell_config(const Campaign& campaign, const ProblemInstance& inst,
                            const VariantSpec& variant, std::uint64_t run_seed) {
  EsConfig cfg = default_config(inst, variant.replacement, variant.use_crossover,
                                run_seed);
  cfg.max_generations = campaign.budget;
  return cfg;
}

struct RunRecord {
  int run_index = 0;
  std::uint64_t seed = 0;
  bool success = false;
  std::optional<std::int64_t> evaluations_to_success;
  std::int64_t generations_used = 0;
  std::int64_t evaluations = 0;
  std::int64_t best_fitness = 0;
  GeneratorMatrix best_genotype;
  std::vector<DiversityPoint> trace;
  // Independent re-check of a reported success: brute-force distance >= d.
  bool verified = false;
};

struct CellResult {
  ProblemInstance instance;
  VariantSpec variant;
  std::vector<RunRecord> runs;
  int success_count = 0;
  // Equivalence partition of the successful runs' codes; members hold
  // run_index values.
  std::vector<EquivalenceClass> classes;
};

struct PairwiseTest {
  std::size_t instance_index = 0;
  std::size_t variant_a = 0;
  std::size_t variant_b = 0;
  // Meaningless when either cell has no successes.
  bool valid = false;
  MannWhitneyResult result;
};

struct BatchResult {
  Campaign campaign;
  // Instance-major, variant-minor, matching the seed derivation order.
  std::vector<CellResult> cells;
  std::vector<PairwiseTest> tests;
};

namespace detail {

inline void parallel_for(std::size_t count, int jobs,
                         const std::function<void(std::size_t)>& body) {
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  const int spawn = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  threads.reserve(static_cast<std::size_t>(spawn));
  for (int t = 0; t < spawn; ++t) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

// Executes runs_per_cell runs per (instance, variant) cell. Run i of cell c
// (cells in instance-major, variant-minor order) owns the random stream
// derived from index c * runs_per_cell + i, so any worker count produces
// the same BatchResult. Successes are re-verified against the brute-force
// distance oracle and each cell's successful codes are partitioned into
// equivalence classes.
inline BatchResult run_campaign(const Campaign& campaign, int jobs = 1) {
  if (auto bad = validate_campaign(campaign))
    throw std::invalid_argument("run_campaign: " + *bad);

  BatchResult batch;
  batch.campaign = campaign;
  const std::size_t cell_count =
      campaign.instances.size() * campaign.variants.size();
  const auto runs = static_cast<std::size_t>(campaign.runs_per_cell);
  batch.cells.resize(cell_count);
  for (std::size_t ci = 0; ci < cell_count; ++ci) {
    CellResult& cell = batch.cells[ci];
    cell.instance = campaign.instances[ci / campaign.variants.size()];
    cell.variant = campaign.variants[ci % campaign.variants.size()];
    cell.runs.resize(runs);
  }

  TraceOptions trace;
  trace.enabled = campaign.trace_diversity;
  trace.every = campaign.diversity_every;

  detail::parallel_for(cell_count * runs, jobs, [&](std::size_t task) {
    const std::size_t ci = task / runs;
    const std::size_t ri = task % runs;
    CellResult& cell = batch.cells[ci];
    const std::uint64_t seed = derive_seed(campaign.master_seed, task);

    RunResult r = run(cell_config(campaign, cell.instance, cell.variant, seed),
                      trace);
    RunRecord& rec = cell.runs[ri];
    rec.run_index = static_cast<int>(ri);
    rec.seed = seed;
    rec.success = r.success;
    rec.evaluations_to_success = r.evaluations_to_success;
    rec.generations_used = r.generations_used;
    rec.evaluations = r.evaluations;
    rec.best_fitness = r.best.fitness;
    rec.best_genotype = r.best.genotype;
    rec.trace = std::move(r.diversity_trace);
    rec.verified =
        r.success &&
        min_distance_bruteforce(span(r.best.genotype)) >= cell.instance.d;
  });

  for (CellResult& cell : batch.cells) {
    std::vector<LinearCode> codes;
    std::vector<std::size_t> run_of_code;
    for (const RunRecord& rec : cell.runs) {
      if (!rec.success) continue;
      ++cell.success_count;
      codes.push_back(span(rec.best_genotype));
      run_of_code.push_back(static_cast<std::size_t>(rec.run_index));
    }
    cell.classes = partition_classes(codes);
    for (EquivalenceClass& cls : cell.classes)
      for (std::size_t& m : cls.members) m = run_of_code[m];
  }

  for (std::size_t ii = 0; ii < campaign.instances.size(); ++ii)
    for (std::size_t va = 0; va < campaign.variants.size(); ++va)
      for (std::size_t vb = va + 1; vb < campaign.variants.size(); ++vb) {
        PairwiseTest test;
        test.instance_index = ii;
        test.variant_a = va;
        test.variant_b = vb;
        std::vector<double> sa, sb;
        const CellResult& ca = batch.cells[ii * campaign.variants.size() + va];
        const CellResult& cb = batch.cells[ii * campaign.variants.size() + vb];
        for (const RunRecord& rec : ca.runs)
          if (rec.success)
            sa.push_back(static_cast<double>(*rec.evaluations_to_success));
        for (const RunRecord& rec : cb.runs)
          if (rec.success)
            sb.push_back(static_cast<double>(*rec.evaluations_to_success));
        if (!sa.empty() && !sb.empty()) {
          test.valid = true;
          test.result = mann_whitney_u(sa, sb);
        }
        batch.tests.push_back(test);
      }
  return batch;
}

inline Campaign campaign_from_json(const nlohmann::json& doc) {
  Campaign c;
  if (!doc.is_object()) throw std::runtime_error("campaign: not a JSON object");
  for (const std::string key : {"instances", "variants", "runs", "seed"})
    if (!doc.contains(key))
      throw std::runtime_error("campaign: missing field '" + key + "'");

  for (const nlohmann::json& j : doc.at("instances")) {
    ProblemInstance inst{j.at("n").get<int>(), j.at("k").get<int>(),
                         j.at("d").get<int>()};
    c.instances.push_back(inst);
  }
  for (const nlohmann::json& j : doc.at("variants")) {
    const auto name = j.get<std::string>();
    const auto v = parse_variant(name);
    if (!v) throw std::runtime_error("campaign: unknown variant '" + name + "'");
    c.variants.push_back(*v);
  }
  c.runs_per_cell = doc.at("runs").get<int>();
  c.master_seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("budget")) c.budget = doc.at("budget").get<std::int64_t>();
  if (doc.contains("diversity_every"))
    c.diversity_every = doc.at("diversity_every").get<std::int64_t>();
  if (doc.contains("trace_diversity"))
    c.trace_diversity = doc.at("trace_diversity").get<bool>();
  if (auto bad = validate_campaign(c))
    throw std::runtime_error("campaign: " + *bad);
  return c;
}

inline Campaign load_campaign_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  try {
    return campaign_from_json(doc);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

namespace detail {

inline nlohmann::json instance_json(const ProblemInstance& inst) {
  return {{"n", inst.n}, {"k", inst.k}, {"d", inst.d}};
}

inline nlohmann::json sample_stats_json(const std::vector<double>& sample) {
  nlohmann::json j;
  j["count"] = sample.size();
  if (sample.empty()) return j;
  j["min"] = quantile(sample, 0.0);
  j["q25"] = quantile(sample, 0.25);
  j["median"] = quantile(sample, 0.5);
  j["q75"] = quantile(sample, 0.75);
  j["max"] = quantile(sample, 1.0);
  j["mean"] = mean(sample);
  return j;
}

}  // namespace detail

// Deterministic summary: nlohmann's object keys are ordered, all numeric
// content is either integral or a reproducible double, so equal batches
// serialize byte-identically.
inline nlohmann::json summary_json(const BatchResult& batch) {
  const Campaign& c = batch.campaign;
  nlohmann::json root;
  nlohmann::json& meta = root["metadata"];
  meta["master_seed"] = c.master_seed;
  meta["runs_per_cell"] = c.runs_per_cell;
  meta["budget"] = c.budget;
  meta["diversity_every"] = c.diversity_every;
  meta["trace_diversity"] = c.trace_diversity;
  meta["seed_rule"] =
      "run seed = mix64(mix64(master) + mix64(task + 1)), task = cell * runs + "
      "run, cells instance-major then variant";
  meta["evaluation_convention"] =
      "evaluations counted at scoring time, including the lambda initial "
      "evaluations; evaluations_to_success is the ordinal of the first "
      "evaluation reaching the optimum";
  meta["variants"] = nlohmann::json::array();
  for (const VariantSpec& v : c.variants) meta["variants"].push_back(variant_name(v));
  meta["instances"] = nlohmann::json::array();
  for (const ProblemInstance& inst : c.instances)
    meta["instances"].push_back(detail::instance_json(inst));

  root["cells"] = nlohmann::json::array();
  for (const CellResult& cell : batch.cells) {
    nlohmann::json j;
    j["instance"] = detail::instance_json(cell.instance);
    j["variant"] = variant_name(cell.variant);
    j["optimal_fitness"] = optimal_fitness(cell.instance);
    j["runs"] = cell.runs.size();
    j["success_count"] = cell.success_count;
    j["success_rate"] = static_cast<double>(cell.success_count) /
                        static_cast<double>(cell.runs.size());
    j["all_successes_verified"] = [&] {
      for (const RunRecord& rec : cell.runs)
        if (rec.success && !rec.verified) return false;
      return true;
    }();
    std::vector<double> evals;
    for (const RunRecord& rec : cell.runs)
      if (rec.success)
        evals.push_back(static_cast<double>(*rec.evaluations_to_success));
    j["evaluations_to_success"] = detail::sample_stats_json(evals);

    nlohmann::json classes = nlohmann::json::array();
    int undecided = 0;
    for (const EquivalenceClass& cls : cell.classes) {
      nlohmann::json cj;
      cj["members"] = cls.members;
      cj["undecided"] = cls.undecided;
      if (cls.undecided) ++undecided;
      classes.push_back(cj);
    }
    j["equivalence"] = {{"class_count", cell.classes.size()},
                        {"undecided_classes", undecided},
                        {"classes", classes}};
    root["cells"].push_back(j);
  }

  root["tests"] = nlohmann::json::array();
  for (const PairwiseTest& t : batch.tests) {
    nlohmann::json j;
    j["instance"] = detail::instance_json(c.instances[t.instance_index]);
    j["variant_a"] = variant_name(c.variants[t.variant_a]);
    j["variant_b"] = variant_name(c.variants[t.variant_b]);
    j["valid"] = t.valid;
    if (t.valid) {
      j["U"] = t.result.u;
      j["p"] = t.result.p;
      j["exact"] = t.result.exact;
      j["degenerate"] = t.result.degenerate;
    }
    root["tests"].push_back(j);
  }
  return root;
}

inline std::string run_file_stem(const ProblemInstance& inst,
                                 const VariantSpec& variant, int run_index) {
  std::ostringstream name;
  name << inst.n << '_' << inst.k << '_' << inst.d << '_'
       << variant_name(variant) << '_' << run_index;
  return name.str();
}

// summary.json, per-run best-genotype matrix files, and (when traced)
// per-run CSV logs, all under out_dir.
inline void write_batch_outputs(const BatchResult& batch,
                                const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "summary.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write summary.json");
    out << summary_json(batch).dump(2) << '\n';
  }
  for (const CellResult& cell : batch.cells) {
    for (const RunRecord& rec : cell.runs) {
      const std::string stem =
          run_file_stem(cell.instance, cell.variant, rec.run_index);
      write_matrix_file((out_dir / (stem + ".txt")).string(), rec.best_genotype);
      if (!rec.trace.empty()) {
        std::ofstream csv(out_dir / (stem + ".csv"), std::ios::binary);
        if (!csv) throw std::runtime_error("cannot write " + stem + ".csv");
        write_trace_csv(csv, rec.trace);
      }
    }
  }
}

}  // namespace evocode
