#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "modalid/backbone.hpp"
#include "modalid/modal_basis.hpp"
#include "modalid/objectives.hpp"
#include "modalid/rng.hpp"
#include "modalid/targets.hpp"

namespace modalid {

using Genome = std::vector<double>;

/// Solver settings. Defaults are the 20 x 10 configuration with 90% crossover
/// and 0.5% per-gene mutation over six genes in [-2, 2].
struct EAConfig {
  std::size_t generation_size = 20;
  std::size_t generation_count = 10;
  double crossover_prob = 0.90;
  double mutation_prob = 0.005;
  std::vector<Bounds> bounds = std::vector<Bounds>(2 * kDefaultTermsPerAxis, Bounds{});
  double sbx_eta = 20.0;
  double mutation_eta = 20.0;
  std::uint64_t seed = 0;
  std::size_t sample_count = kDefaultSampleCount;
  std::size_t n_divisions = 8;

  std::size_t genome_size() const { return bounds.size(); }
  /// Throws InvalidConfig. Degenerate bounds (lo == hi) are allowed and pin a gene.
  void validate() const;

  friend bool operator==(const EAConfig&, const EAConfig&) = default;
};

struct Individual {
  Genome genome;
  std::optional<FitnessPair> fitness;
  std::size_t rank = 0;  // non-domination front index, 0 = non-dominated
  double crowding = 0.0;
  std::size_t generation = 0;
  std::size_t index = 0;  // position within its generation
};

struct ObjectiveStats {
  double mean = 0.0;
  double standard_deviation = 0.0;  // population (divisor N)
  double minimum = 0.0;
};

struct GenerationStats {
  std::size_t generation = 0;
  ObjectiveStats mse1;
  ObjectiveStats mse2;
  Genome best_genome;  // argmin of mse1 + mse2 within the generation
  FitnessPair best_fitness;
};

struct RunResult {
  EAConfig config;
  std::vector<GenerationStats> history;
  /// Every evaluated individual, generation-major. Generation 0 is the random
  /// initial population, generation g > 0 the offspring bred in that
  /// generation. `rank` is the front index within the individual's generation.
  std::vector<Individual> archive;
  /// Archive indices of the breeding population after each generation's
  /// environmental selection (entry 0 is the initial population).
  std::vector<std::vector<std::size_t>> populations;
  /// Non-dominated members of the whole archive, duplicates removed.
  std::vector<Individual> pareto_front;
  Individual best;  // argmin of mse1 + mse2 over pareto_front
};

bool dominates(const FitnessPair& a, const FitnessPair& b);

/// Fronts of indices into `fitness`; each front is in ascending index order.
std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const FitnessPair> fitness);
std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const Individual> population);

/// Crowding distance of each member of `front` (same order). Extremes per
/// objective are +inf.
std::vector<double> crowding_distance(std::span<const FitnessPair> fitness,
                                      std::span<const std::size_t> front);

std::vector<Individual> init_population(const EAConfig& config);

/// Simulated binary crossover (bounded form), applied with crossover_prob.
std::pair<Genome, Genome> sbx_crossover(const Genome& parent_a, const Genome& parent_b,
                                        const EAConfig& config, Rng& rng);

/// Polynomial mutation, each gene independently with mutation_prob.
Genome polynomial_mutation(Genome genome, const EAConfig& config, Rng& rng);

GenerationStats compute_stats(std::size_t generation, std::span<const Individual> members);

/// Evaluates genomes against the target, using up to `threads` workers
/// (0 or 1 = serial). Output order matches input order.
std::vector<FitnessPair> evaluate_genomes(std::span<const Genome> genomes,
                                          const TargetConfiguration& target,
                                          const EAConfig& config, std::size_t threads);

/// Elitist generational NSGA-II loop. The result depends only on (config,
/// target), never on `threads`.
RunResult run(const EAConfig& config, const TargetConfiguration& target, std::size_t threads = 0);

}  // namespace modalid
