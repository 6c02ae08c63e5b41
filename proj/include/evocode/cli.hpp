#pragma once

#include "evocode/code.hpp"
#include "evocode/equivalence.hpp"
#include "evocode/es.hpp"
#include "evocode/experiments.hpp"
#include "evocode/matrix_io.hpp"
#include "evocode/stats.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

// Exit codes: 0 completed (evolve reports optimization success separately in
// its output), 1 malformed input or invalid configuration, 2 equivalence
// left undecided by the effort cap.

namespace evocode::cli {

namespace detail {

inline const char* bool_word(bool b) { return b ? "true" : "false"; }

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline std::vector<double> read_csv_column(const std::string& path,
                                           const std::string& column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> headers = split_csv_line(line);
  std::size_t col = headers.size();
  for (std::size_t i = 0; i < headers.size(); ++i)
    if (headers[i] == column) col = i;
  if (col == headers.size())
    throw std::runtime_error(path + ": no column named '" + column + "'");

  std::vector<double> values;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != headers.size())
      throw std::runtime_error(path + ": line " + std::to_string(lineno) +
                               ": expected " + std::to_string(headers.size()) +
                               " cells");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cells[col], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != cells[col].size())
      throw std::runtime_error(path + ": line " + std::to_string(lineno) +
                               ": '" + cells[col] + "' is not a number");
    values.push_back(v);
  }
  if (values.empty()) throw std::runtime_error(path + ": no data rows");
  return values;
}

// The span of an arbitrary matrix, via its reduced echelon basis, so
// redundant input rows are accepted.
inline LinearCode code_from_matrix(const BinMatrix& m) {
  const BinMatrix r = rref(m);
  if (r.k() == 0) throw std::runtime_error("matrix has rank 0: code is {0}");
  return span(GeneratorMatrix::unchecked(r));
}

struct EvolveArgs {
  int n = 0, k = 0, d = 0;
  std::string variant;
  bool crossover = false;
  int lambda = 0;
  int mu = 0;
  double pmut = 0.0;
  std::int64_t max_gens = 20000;
  std::uint64_t seed = 0;
  std::string out_file;
  std::string trace_file;
};

inline int run_evolve(const EvolveArgs& args) {
  const ProblemInstance inst{args.n, args.k, args.d};
  if (auto bad = validate_instance(inst)) {
    std::cerr << "invalid instance: " << *bad << '\n';
    return 1;
  }
  const Replacement replacement =
      args.variant == "comma" ? Replacement::comma : Replacement::plus;
  EsConfig cfg = default_config(inst, replacement, args.crossover, args.seed);
  if (args.lambda > 0) cfg.lambda = args.lambda;
  if (args.mu > 0) cfg.mu = args.mu;
  if (args.pmut > 0.0) cfg.p_mut = args.pmut;
  cfg.max_generations = args.max_gens;
  if (auto bad = validate_config(cfg)) {
    std::cerr << "invalid configuration: " << *bad << '\n';
    return 1;
  }

  TraceOptions trace;
  trace.enabled = !args.trace_file.empty();
  const RunResult result = run(cfg, trace);

  std::cout << "success=" << bool_word(result.success) << '\n'
            << "best_fitness=" << result.best.fitness << '\n'
            << "optimal_fitness=" << optimal_fitness(inst) << '\n'
            << "generations=" << result.generations_used << '\n'
            << "evaluations=" << result.evaluations << '\n';
  if (result.evaluations_to_success)
    std::cout << "evaluations_to_success=" << *result.evaluations_to_success
              << '\n';
  std::cerr << (result.success ? "reached" : "did not reach")
            << " the optimum for (" << inst.n << ',' << inst.k << ','
            << inst.d << ") with " << variant_name({replacement, args.crossover})
            << " after " << result.generations_used << " generations\n";

  if (!args.out_file.empty()) {
    write_matrix_file(args.out_file, result.best.genotype);
    std::cout << "out=" << args.out_file << '\n';
  }
  if (!args.trace_file.empty()) {
    std::ofstream csv(args.trace_file, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + args.trace_file);
    write_trace_csv(csv, result.diversity_trace);
    std::cout << "trace=" << args.trace_file << '\n';
  }
  return 0;
}

inline int run_verify(const std::string& matrix_file, int target_d) {
  const BinMatrix m = read_matrix_file(matrix_file);
  const LinearCode code = code_from_matrix(m);
  const int d_brute = min_distance_bruteforce(code);
  const int d_anf = min_absent_degree(mobius_transform(indicator_table(code)));

  std::cout << "n=" << m.n << '\n'
            << "k=" << m.k() << '\n'
            << "rank=" << code.k << '\n'
            << "d_anf=" << d_anf << '\n'
            << "d_bruteforce=" << d_brute << '\n'
            << "agree=" << bool_word(d_anf == d_brute) << '\n';
  if (target_d > 0)
    std::cout << "meets_target=" << bool_word(d_brute >= target_d) << '\n';
  std::cerr << "d=" << d_anf << " (ANF) / d=" << d_brute
            << " (brute force) -- "
            << (d_anf == d_brute ? "agree" : "DISAGREE") << '\n';
  return 0;
}

inline int run_equiv(const std::string& file_a, const std::string& file_b,
                     std::int64_t cap) {
  const LinearCode a = span(read_generator_file(file_a));
  const LinearCode b = span(read_generator_file(file_b));
  const EquivalenceReport report = is_equivalent(a, b, cap);

  const char* outcome = report.outcome == EquivOutcome::equivalent
                            ? "equivalent"
                            : report.outcome == EquivOutcome::not_equivalent
                                  ? "not_equivalent"
                                  : "undecided";
  const char* pruned = report.pruned_by == PrunedBy::weight_enumerator
                           ? "weight_enumerator"
                           : report.pruned_by == PrunedBy::signature
                                 ? "signature"
                                 : report.pruned_by == PrunedBy::search_exhausted
                                       ? "search_exhausted"
                                       : "none";
  std::cout << "outcome=" << outcome << '\n'
            << "pruned_by=" << pruned << '\n'
            << "nodes=" << report.nodes << '\n';
  if (report.witness) {
    std::cout << "witness=";
    for (std::size_t j = 0; j < report.witness->image.size(); ++j)
      std::cout << (j ? " " : "") << report.witness->image[j] + 1;
    std::cout << '\n';
  }
  if (report.outcome == EquivOutcome::undecided) {
    std::cerr << "effort cap of " << cap
              << " nodes exhausted; equivalence undecided\n";
    return 2;
  }
  return 0;
}

inline int run_campaign_cmd(const std::string& config_file,
                            const std::string& out_dir, int jobs) {
  const Campaign campaign = load_campaign_file(config_file);
  const BatchResult batch = run_campaign(campaign, jobs);
  write_batch_outputs(batch, out_dir);

  std::cout << "out=" << out_dir << '\n'
            << "cells=" << batch.cells.size() << '\n'
            << "runs_per_cell=" << campaign.runs_per_cell << '\n';
  for (const CellResult& cell : batch.cells)
    std::cerr << '(' << cell.instance.n << ',' << cell.instance.k << ','
              << cell.instance.d << ") " << variant_name(cell.variant) << ": "
              << cell.success_count << '/' << cell.runs.size()
              << " successes, " << cell.classes.size()
              << " equivalence classes\n";
  return 0;
}

inline int run_stats(const std::string& file_a, const std::string& file_b,
                     const std::string& column) {
  const std::vector<double> a = read_csv_column(file_a, column);
  const std::vector<double> b = read_csv_column(file_b, column);
  const MannWhitneyResult r = mann_whitney_u(a, b);
  std::cout << "n_a=" << a.size() << '\n'
            << "n_b=" << b.size() << '\n'
            << "U=" << r.u << '\n'
            << "p=" << r.p << '\n'
            << "exact=" << bool_word(r.exact) << '\n'
            << "degenerate=" << bool_word(r.degenerate) << '\n';
  return 0;
}

}  // namespace detail

inline int dispatch(int argc, const char* const* argv) {
  CLI::App app{"evolves binary linear codes with rank-preserving evolutionary "
               "strategies and analyzes the results"};
  app.require_subcommand(1);

  detail::EvolveArgs ev;
  CLI::App* evolve = app.add_subcommand("evolve", "run one evolution");
  evolve->add_option("--n", ev.n, "code length")->required();
  evolve->add_option("--k", ev.k, "code dimension")->required();
  evolve->add_option("--d", ev.d, "target minimum distance")->required();
  evolve->add_option("--variant", ev.variant, "replacement scheme")
      ->required()
      ->check(CLI::IsMember({"comma", "plus"}));
  evolve->add_flag("--crossover", ev.crossover, "mate before mutating");
  evolve->add_option("--lambda", ev.lambda, "population size (default n)");
  evolve->add_option("--mu", ev.mu, "pool size (default floor(n/3))");
  evolve->add_option("--pmut", ev.pmut, "row mutation probability (default 1/n)");
  evolve->add_option("--max-gens", ev.max_gens, "generation budget");
  evolve->add_option("--seed", ev.seed, "random seed")->required();
  evolve->add_option("--out", ev.out_file, "write the best generator matrix here");
  evolve->add_option("--trace", ev.trace_file,
                     "write a CSV diversity log here (forces the full budget)");

  std::string verify_matrix;
  int verify_d = 0;
  CLI::App* verify = app.add_subcommand("verify", "check a matrix file");
  verify->add_option("--matrix", verify_matrix, "matrix file")->required();
  verify->add_option("--d", verify_d, "target distance to check against");

  std::string equiv_a, equiv_b;
  std::int64_t equiv_cap = kDefaultEffortCap;
  CLI::App* equiv = app.add_subcommand("equiv", "test code equivalence");
  equiv->add_option("--a", equiv_a, "first generator matrix file")->required();
  equiv->add_option("--b", equiv_b, "second generator matrix file")->required();
  equiv->add_option("--cap", equiv_cap, "backtracking node budget");

  std::string campaign_config, campaign_out;
  int campaign_jobs = 1;
  CLI::App* campaign = app.add_subcommand("campaign", "run a batch experiment");
  campaign->add_option("--config", campaign_config, "campaign JSON file")
      ->required();
  campaign->add_option("--out", campaign_out, "output directory")->required();
  campaign->add_option("--jobs", campaign_jobs, "parallel workers");

  std::string stats_a, stats_b, stats_column;
  CLI::App* stats = app.add_subcommand("stats", "compare two CSV samples");
  stats->add_option("--a", stats_a, "first CSV file")->required();
  stats->add_option("--b", stats_b, "second CSV file")->required();
  stats->add_option("--column", stats_column, "column to compare")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*evolve) return detail::run_evolve(ev);
    if (*verify) return detail::run_verify(verify_matrix, verify_d);
    if (*equiv) return detail::run_equiv(equiv_a, equiv_b, equiv_cap);
    if (*campaign)
      return detail::run_campaign_cmd(campaign_config, campaign_out,
                                      campaign_jobs);
    if (*stats) return detail::run_stats(stats_a, stats_b, stats_column);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace evocode::cli
