#include "modalid/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "modalid/error.hpp"

namespace modalid {

namespace {

// Stream ids; every random draw in a run is keyed by (seed, op, generation, slot).
enum : std::uint64_t { kInitStream = 1, kSelectStream = 2, kCrossStream = 3, kMutateStream = 4 };

constexpr double kInf = std::numeric_limits<double>::infinity();

const FitnessPair& fitness_of(const Individual& ind) {
  if (!ind.fitness) throw Error(ErrorKind::UnevaluatedIndividual, "individual has no fitness");
  return *ind.fitness;
}

std::vector<FitnessPair> fitness_list(std::span<const Individual> pop) {
  std::vector<FitnessPair> out;
  out.reserve(pop.size());
  for (const auto& ind : pop) out.push_back(fitness_of(ind));
  return out;
}

// Writes rank and crowding for every member of `pop` from one joint sort.
void assign_rank_and_crowding(std::span<Individual> pop) {
  const auto fit = fitness_list(pop);
  const auto fronts = nondominated_sort(std::span<const FitnessPair>(fit));
  for (std::size_t r = 0; r < fronts.size(); ++r) {
    const auto dist = crowding_distance(fit, fronts[r]);
    for (std::size_t k = 0; k < fronts[r].size(); ++k) {
      pop[fronts[r][k]].rank = r;
      pop[fronts[r][k]].crowding = dist[k];
    }
  }
}

// Crowded-comparison order; lower position index wins ties.
bool crowded_less(const Individual& a, std::size_t ia, const Individual& b, std::size_t ib) {
  if (a.rank != b.rank) return a.rank < b.rank;
  if (a.crowding != b.crowding) return a.crowding > b.crowding;
  return ia < ib;
}

std::size_t tournament(std::span<const Individual> pop, Rng& rng) {
  const std::size_t i = rng.index(pop.size());
  const std::size_t j = rng.index(pop.size());
  return crowded_less(pop[j], j, pop[i], i) ? j : i;
}

double sbx_spread(double rand, double beta, double eta) {
  const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
  if (rand <= 1.0 / alpha) return std::pow(rand * alpha, 1.0 / (eta + 1.0));
  return std::pow(1.0 / (2.0 - rand * alpha), 1.0 / (eta + 1.0));
}

}  // namespace

void EAConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); };
  if (generation_size < 4 || generation_size % 2 != 0) {
    fail("generation_size must be even and at least 4");
  }
  if (generation_count < 1) fail("generation_count must be at least 1");
  if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) fail("crossover_prob must be in [0,1]");
  if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) fail("mutation_prob must be in [0,1]");
  if (bounds.empty() || bounds.size() % 2 != 0) fail("need an even, non-zero number of gene bounds");
  for (const auto& b : bounds) {
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi) fail("gene bounds need lo <= hi");
  }
  if (!(sbx_eta > 0.0) || !(mutation_eta > 0.0)) fail("distribution indices must be positive");
  if (sample_count < 2) fail("sample_count must be at least 2");
  if (n_divisions < 1 || n_divisions > sample_count - 1) {
    fail("n_divisions must be in [1, sample_count - 1]");
  }
}

bool dominates(const FitnessPair& a, const FitnessPair& b) {
  return a.mse1 <= b.mse1 && a.mse2 <= b.mse2 && (a.mse1 < b.mse1 || a.mse2 < b.mse2);
}

std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const FitnessPair> fitness) {
  const std::size_t n = fitness.size();
  std::vector<std::vector<std::size_t>> dominated_by(n);
  std::vector<std::size_t> domination_count(n, 0);
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;

  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      if (dominates(fitness[p], fitness[q])) {
        dominated_by[p].push_back(q);
      } else if (dominates(fitness[q], fitness[p])) {
        ++domination_count[p];
      }
    }
    if (domination_count[p] == 0) current.push_back(p);
  }

  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t p : current) {
      for (std::size_t q : dominated_by[p]) {
        if (--domination_count[q] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const Individual> population) {
  const auto fit = fitness_list(population);
  return nondominated_sort(std::span<const FitnessPair>(fit));
}

std::vector<double> crowding_distance(std::span<const FitnessPair> fitness,
                                      std::span<const std::size_t> front) {
  const std::size_t m = front.size();
  std::vector<double> dist(m, 0.0);
  if (m <= 2) {
    std::fill(dist.begin(), dist.end(), kInf);
    return dist;
  }
  for (auto objective : {&FitnessPair::mse1, &FitnessPair::mse2}) {
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return fitness[front[a]].*objective < fitness[front[b]].*objective;
    });
    const double lo = fitness[front[order.front()]].*objective;
    const double hi = fitness[front[order.back()]].*objective;
    dist[order.front()] = kInf;
    dist[order.back()] = kInf;
    const double range = hi - lo;
    if (!(range > 0.0)) continue;
    for (std::size_t k = 1; k + 1 < m; ++k) {
      const double gap =
          fitness[front[order[k + 1]]].*objective - fitness[front[order[k - 1]]].*objective;
      dist[order[k]] += gap / range;
    }
  }
  return dist;
}

std::vector<Individual> init_population(const EAConfig& config) {
  config.validate();
  std::vector<Individual> pop(config.generation_size);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    Rng rng(config.seed, {kInitStream, 0, i});
    pop[i].genome.resize(config.genome_size());
    for (std::size_t g = 0; g < config.genome_size(); ++g) {
      const auto& b = config.bounds[g];
      pop[i].genome[g] = b.lo == b.hi ? b.lo : std::min(b.hi, rng.uniform(b.lo, b.hi));
    }
    pop[i].index = i;
  }
  return pop;
}

std::pair<Genome, Genome> sbx_crossover(const Genome& parent_a, const Genome& parent_b,
                                        const EAConfig& config, Rng& rng) {
  Genome a = parent_a;
  Genome b = parent_b;
  if (!(rng.uniform() < config.crossover_prob)) return {a, b};

  const double eta = config.sbx_eta;
  for (std::size_t g = 0; g < a.size(); ++g) {
    if (!(rng.uniform() < 0.5)) continue;
    const double lo = config.bounds[g].lo;
    const double hi = config.bounds[g].hi;
    if (std::abs(parent_a[g] - parent_b[g]) <= 1e-14 || lo == hi) continue;

    const double y1 = std::min(parent_a[g], parent_b[g]);
    const double y2 = std::max(parent_a[g], parent_b[g]);
    const double rand = rng.uniform();

    const double beta_lo = 1.0 + 2.0 * (y1 - lo) / (y2 - y1);
    double c1 = 0.5 * ((y1 + y2) - sbx_spread(rand, beta_lo, eta) * (y2 - y1));
    const double beta_hi = 1.0 + 2.0 * (hi - y2) / (y2 - y1);
    double c2 = 0.5 * ((y1 + y2) + sbx_spread(rand, beta_hi, eta) * (y2 - y1));
    c1 = std::clamp(c1, lo, hi);
    c2 = std::clamp(c2, lo, hi);

    if (rng.uniform() < 0.5) {
      a[g] = c2;
      b[g] = c1;
    } else {
      a[g] = c1;
      b[g] = c2;
    }
  }
  return {std::move(a), std::move(b)};
}

Genome polynomial_mutation(Genome genome, const EAConfig& config, Rng& rng) {
  const double eta = config.mutation_eta;
  const double mut_pow = 1.0 / (eta + 1.0);
  for (std::size_t g = 0; g < genome.size(); ++g) {
    if (!(rng.uniform() < config.mutation_prob)) continue;
    const double lo = config.bounds[g].lo;
    const double hi = config.bounds[g].hi;
    if (lo == hi) continue;

    const double y = genome[g];
    const double delta1 = (y - lo) / (hi - lo);
    const double delta2 = (hi - y) / (hi - lo);
    const double rnd = rng.uniform();
    double deltaq = 0.0;
    if (rnd <= 0.5) {
      const double val = 2.0 * rnd + (1.0 - 2.0 * rnd) * std::pow(1.0 - delta1, eta + 1.0);
      deltaq = std::pow(val, mut_pow) - 1.0;
    } else {
      const double val =
          2.0 * (1.0 - rnd) + 2.0 * (rnd - 0.5) * std::pow(1.0 - delta2, eta + 1.0);
      deltaq = 1.0 - std::pow(val, mut_pow);
    }
    genome[g] = std::clamp(y + deltaq * (hi - lo), lo, hi);
  }
  return genome;
}

GenerationStats compute_stats(std::size_t generation, std::span<const Individual> members) {
  GenerationStats st;
  st.generation = generation;
  if (members.empty()) return st;

  const double count = static_cast<double>(members.size());
  auto summarize = [&](double FitnessPair::*objective) {
    ObjectiveStats os;
    double sum = 0.0;
    double maximum = -kInf;
    os.minimum = kInf;
    for (const auto& ind : members) {
      const double v = fitness_of(ind).*objective;
      sum += v;
      os.minimum = std::min(os.minimum, v);
      maximum = std::max(maximum, v);
    }
    if (os.minimum == maximum) {
      // Constant data: report it exactly rather than through a rounded sum.
      os.mean = os.minimum;
      return os;
    }
    os.mean = sum / count;
    double sq = 0.0;
    for (const auto& ind : members) {
      const double d = fitness_of(ind).*objective - os.mean;
      sq += d * d;
    }
    os.standard_deviation = std::sqrt(sq / count);
    return os;
  };
  st.mse1 = summarize(&FitnessPair::mse1);
  st.mse2 = summarize(&FitnessPair::mse2);

  std::size_t best = 0;
  for (std::size_t i = 1; i < members.size(); ++i) {
    const auto& f = fitness_of(members[i]);
    const auto& fb = fitness_of(members[best]);
    if (f.mse1 + f.mse2 < fb.mse1 + fb.mse2) best = i;
  }
  st.best_genome = members[best].genome;
  st.best_fitness = fitness_of(members[best]);
  return st;
}

std::vector<FitnessPair> evaluate_genomes(std::span<const Genome> genomes,
                                          const TargetConfiguration& target,
                                          const EAConfig& config, std::size_t threads) {
  std::vector<FitnessPair> out(genomes.size());
  const KinematicsParams params{config.sample_count, IntegrationMode::PaperScript};
  auto work = [&](std::size_t i) {
    out[i] = evaluate(CoefficientSet::from_genome(genomes[i]), target, params);
  };

  const std::size_t workers = std::min(threads, genomes.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < genomes.size(); ++i) work(i);
    return out;
  }

  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < genomes.size(); i += workers) work(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

RunResult run(const EAConfig& config, const TargetConfiguration& target, std::size_t threads) {
  config.validate();
  target.validate();
  if (config.n_divisions != target.n) {
    throw Error(ErrorKind::InvalidConfig, "config n_divisions " + std::to_string(config.n_divisions) +
                                              " does not match target n " + std::to_string(target.n));
  }
  if (config.n_divisions > config.sample_count - 1) {
    throw Error(ErrorKind::InvalidConfig, "n_divisions exceeds sample intervals");
  }

  RunResult result;
  result.config = config;
  result.archive.reserve(config.generation_size * config.generation_count);

  // Evaluates, ranks within the generation, and records one generation's brood.
  auto record = [&](std::vector<Individual>& brood, std::size_t generation) {
    std::vector<Genome> genomes;
    genomes.reserve(brood.size());
    for (const auto& ind : brood) genomes.push_back(ind.genome);
    const auto fit = evaluate_genomes(genomes, target, config, threads);
    for (std::size_t i = 0; i < brood.size(); ++i) {
      brood[i].fitness = fit[i];
      brood[i].generation = generation;
      brood[i].index = i;
    }
    assign_rank_and_crowding(brood);
    result.archive.insert(result.archive.end(), brood.begin(), brood.end());
    result.history.push_back(compute_stats(generation, brood));
  };

  std::vector<Individual> population = init_population(config);
  record(population, 0);

  auto archive_indices = [&](const std::vector<Individual>& members) {
    std::vector<std::size_t> idx;
    idx.reserve(members.size());
    for (const auto& m : members) idx.push_back(m.generation * config.generation_size + m.index);
    return idx;
  };
  result.populations.push_back(archive_indices(population));

  const std::size_t pairs = config.generation_size / 2;
  for (std::size_t gen = 1; gen < config.generation_count; ++gen) {
    std::vector<Individual> offspring(config.generation_size);
    for (std::size_t p = 0; p < pairs; ++p) {
      Rng select(config.seed, {kSelectStream, gen, p});
      const auto& pa = population[tournament(population, select)];
      const auto& pb = population[tournament(population, select)];

      Rng cross(config.seed, {kCrossStream, gen, p});
      auto [ca, cb] = sbx_crossover(pa.genome, pb.genome, config, cross);

      Rng mutate_a(config.seed, {kMutateStream, gen, 2 * p});
      Rng mutate_b(config.seed, {kMutateStream, gen, 2 * p + 1});
      offspring[2 * p].genome = polynomial_mutation(std::move(ca), config, mutate_a);
      offspring[2 * p + 1].genome = polynomial_mutation(std::move(cb), config, mutate_b);
    }
    record(offspring, gen);

    // Environmental selection over parents followed by offspring.
    std::vector<Individual> pool = population;
    pool.insert(pool.end(), offspring.begin(), offspring.end());
    assign_rank_and_crowding(pool);
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return crowded_less(pool[a], a, pool[b], b);
    });
    std::vector<Individual> survivors;
    survivors.reserve(config.generation_size);
    for (std::size_t k = 0; k < config.generation_size; ++k) survivors.push_back(pool[order[k]]);
    population = std::move(survivors);
    result.populations.push_back(archive_indices(population));
  }

  // Pareto front of the whole archive, first occurrence of each genome kept.
  const auto fronts = nondominated_sort(std::span<const Individual>(result.archive));
  for (std::size_t idx : fronts.front()) {
    const auto& cand = result.archive[idx];
    const bool seen = std::any_of(result.pareto_front.begin(), result.pareto_front.end(),
                                  [&](const Individual& m) { return m.genome == cand.genome; });
    if (!seen) result.pareto_front.push_back(cand);
  }
  result.best = result.pareto_front.front();
  for (const auto& m : result.pareto_front) {
    const double s = m.fitness->mse1 + m.fitness->mse2;
    if (s < result.best.fitness->mse1 + result.best.fitness->mse2) result.best = m;
  }
  return result;
}

}  // namespace modalid
