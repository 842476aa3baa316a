#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pevsim/demand.hpp"
#include "pevsim/error.hpp"
#include "pevsim/evaluation.hpp"
#include "pevsim/network.hpp"
#include "pevsim/parallel.hpp"
#include "pevsim/random.hpp"

namespace pevsim {

/// Station layout over all N candidate nodes: 1 = station built.
using Chromosome = std::vector<std::uint8_t>;

inline std::size_t count_ones(const Chromosome& c) {
  return static_cast<std::size_t>(std::count(c.begin(), c.end(), std::uint8_t{1}));
}

struct GaConfig {
  std::size_t pop_size = 50;
  std::size_t generations = 200;
  double pc = 0.8;
  double pm = 0.1;
  std::size_t window_len = 0;  // 0 selects max(2, round(N / 5))
  std::size_t k = 5;
  bool elitism = true;
  std::uint64_t seed = 7;
  unsigned threads = 1;
};

inline void validate(const GaConfig& cfg, std::size_t node_count) {
  if (cfg.pop_size == 0) throw Error(ErrorCode::InvalidConfig, "population size must be >= 1");
  if (cfg.generations == 0) throw Error(ErrorCode::InvalidConfig, "generations must be >= 1");
  if (!(cfg.pc >= 0.0 && cfg.pc <= 1.0)) throw Error(ErrorCode::InvalidConfig, "pc must lie in [0, 1]");
  if (!(cfg.pm >= 0.0 && cfg.pm <= 1.0)) throw Error(ErrorCode::InvalidConfig, "pm must lie in [0, 1]");
  if (cfg.window_len == 1) throw Error(ErrorCode::InvalidConfig, "crossover window must be >= 2");
  if (cfg.k > node_count) {
    throw Error(ErrorCode::InvalidCardinality,
                "k = " + std::to_string(cfg.k) + " exceeds the " + std::to_string(node_count) + " candidate nodes");
  }
}

/// Window length actually used on N-bit chromosomes.
inline std::size_t effective_window(const GaConfig& cfg, std::size_t node_count) {
  std::size_t w = cfg.window_len;
  if (w == 0) w = std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(node_count / 5.0)));
  return std::min(w, node_count);
}

// RNG stream ids used by run_ga.
inline constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t selection_stream(std::size_t generation) { return 1 + 3 * generation; }
constexpr std::uint64_t crossover_stream(std::size_t generation) { return 2 + 3 * generation; }
constexpr std::uint64_t mutation_stream(std::size_t generation) { return 3 + 3 * generation; }

/// Uniformly random k-subsets of N positions (partial Fisher-Yates).
inline std::vector<Chromosome> init_population(std::size_t n, std::size_t k, std::size_t pop_size, Rng& rng) {
  if (k > n) throw Error(ErrorCode::InvalidCardinality, "cannot place k stations on fewer than k nodes");
  std::vector<Chromosome> pop;
  pop.reserve(pop_size);
  std::vector<std::size_t> idx(n);
  for (std::size_t p = 0; p < pop_size; ++p) {
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    Chromosome c(n, 0);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
      std::swap(idx[i], idx[j]);
      c[idx[i]] = 1;
    }
    pop.push_back(std::move(c));
  }
  return pop;
}

/// Roulette-wheel probabilities fit_i / sum(fit).
inline std::vector<double> selection_probabilities(std::span<const double> fits) {
  double total = 0.0;
  for (double f : fits) {
    if (!(f >= 0.0)) throw Error(ErrorCode::ZeroTotalFit, "fit values must be nonnegative");
    total += f;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroTotalFit, "sum of fit values is zero");
  std::vector<double> p;
  p.reserve(fits.size());
  for (double f : fits) p.push_back(f / total);
  return p;
}

/// Index of one roulette draw.
inline std::size_t roulette_draw(std::span<const double> cumulative, Rng& rng) {
  const double pick = rng.uniform() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

/// pop_size draws with replacement, each with probability fit_i / sum(fit).
inline std::vector<Chromosome> select(const std::vector<Chromosome>& population, std::span<const double> fits,
                                      Rng& rng) {
  if (fits.size() != population.size()) throw Error(ErrorCode::InvalidConfig, "fits not aligned with population");
  if (population.empty()) return {};
  selection_probabilities(fits);  // validates
  std::vector<double> cumulative(fits.size());
  double running = 0.0;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    running += fits[i];
    cumulative[i] = running;
  }
  std::vector<Chromosome> next;
  next.reserve(population.size());
  for (std::size_t i = 0; i < population.size(); ++i) next.push_back(population[roulette_draw(cumulative, rng)]);
  return next;
}

/// Scans cyclic windows of `len` bits starting at `offset` and swaps the first
/// window in which both parents hold the same number of ones. Returns the
/// start of the swapped window, or nullopt when no window qualifies.
inline std::optional<std::size_t> swap_balanced_window(Chromosome& a, Chromosome& b, std::size_t len,
                                                       std::size_t offset) {
  const std::size_t n = a.size();
  if (n == 0 || b.size() != n) return std::nullopt;
  len = std::min(len, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t start = (offset + j) % n;
    std::size_t ca = 0, cb = 0;
    for (std::size_t t = 0; t < len; ++t) {
      const std::size_t pos = (start + t) % n;
      ca += a[pos];
      cb += b[pos];
    }
    if (ca != cb) continue;
    for (std::size_t t = 0; t < len; ++t) {
      const std::size_t pos = (start + t) % n;
      std::swap(a[pos], b[pos]);
    }
    return start;
  }
  return std::nullopt;
}

/// Cardinality-preserving crossover applied in place with probability pc.
/// Returns true when a window was swapped.
inline bool crossover(Chromosome& a, Chromosome& b, double pc, std::size_t window_len, Rng& rng) {
  if (!rng.bernoulli(pc) || a.empty()) return false;
  const auto offset = static_cast<std::size_t>(rng.below(a.size()));
  return swap_balanced_window(a, b, window_len, offset).has_value();
}

/// With probability pm swaps a random 1 with a random 0. Returns true when
/// the chromosome changed.
inline bool mutate(Chromosome& c, double pm, Rng& rng) {
  if (!rng.bernoulli(pm)) return false;
  std::vector<std::size_t> ones, zeros;
  for (std::size_t i = 0; i < c.size(); ++i) (c[i] ? ones : zeros).push_back(i);
  if (ones.empty() || zeros.empty()) return false;
  const std::size_t i = ones[rng.below(ones.size())];
  const std::size_t j = zeros[rng.below(zeros.size())];
  std::swap(c[i], c[j]);
  return true;
}

struct GenerationStats {
  double best_fit = 0.0;
  double mean_fit = 0.0;
};

struct GaResult {
  Deployment best;
  double best_u = 0.0;
  std::vector<GenerationStats> curve;
  std::size_t evaluations = 0;  // distinct deployments scored
};

/// Fixed-cardinality genetic algorithm over station layouts.
///
/// Per generation: score every individual, record the best and mean fit,
/// then roulette selection, crossover of pairs (2i, 2i+1) and mutation. With
/// elitism the previous generation's best replaces the new generation's
/// worst individual when it is strictly fitter. Scores are memoized by
/// chromosome and may be computed on cfg.threads workers; the RNG streams are
/// never touched during scoring, so results do not depend on the thread count.
inline GaResult run_ga(const Network& net, std::span<const Trip> trips, const EvalParams& params,
                       const GaConfig& cfg) {
  validate(params);
  const std::size_t n = net.size();
  validate(cfg, n);
  const std::size_t window = effective_window(cfg, n);

  std::map<Chromosome, double> memo;
  GaResult result;
  bool have_best = false;

  const auto score_all = [&](const std::vector<Chromosome>& pop) {
    std::vector<Chromosome> fresh;
    for (const Chromosome& c : pop) {
      if (!memo.contains(c) && std::find(fresh.begin(), fresh.end(), c) == fresh.end()) fresh.push_back(c);
    }
    std::vector<double> values(fresh.size());
    parallel_for(fresh.size(), cfg.threads, [&](std::size_t i) {
      values[i] = deployment_score(net, trips, Deployment::from_bits(fresh[i]), params);
    });
    for (std::size_t i = 0; i < fresh.size(); ++i) memo.emplace(fresh[i], values[i]);
    result.evaluations += fresh.size();

    std::vector<double> us;
    us.reserve(pop.size());
    for (const Chromosome& c : pop) us.push_back(memo.at(c));
    return us;
  };

  Rng init_rng = Rng::stream(cfg.seed, kInitStream);
  std::vector<Chromosome> pop = init_population(n, cfg.k, cfg.pop_size, init_rng);
  std::vector<double> us = score_all(pop);

  for (std::size_t g = 0; g < cfg.generations; ++g) {
    std::vector<double> fits(us.size());
    double sum = 0.0;
    std::size_t elite = 0;
    for (std::size_t i = 0; i < us.size(); ++i) {
      fits[i] = fitness(us[i]);
      sum += fits[i];
      if (fits[i] > fits[elite]) elite = i;
    }
    result.curve.push_back({fits[elite], sum / static_cast<double>(fits.size())});
    if (!have_best || us[elite] < result.best_u) {
      result.best = Deployment::from_bits(pop[elite]);
      result.best_u = us[elite];
      have_best = true;
    }
    if (g + 1 == cfg.generations) break;

    Rng sel_rng = Rng::stream(cfg.seed, selection_stream(g));
    Rng cx_rng = Rng::stream(cfg.seed, crossover_stream(g));
    Rng mut_rng = Rng::stream(cfg.seed, mutation_stream(g));

    std::vector<Chromosome> next = select(pop, fits, sel_rng);
    for (std::size_t i = 0; i + 1 < next.size(); i += 2) crossover(next[i], next[i + 1], cfg.pc, window, cx_rng);
    for (Chromosome& c : next) mutate(c, cfg.pm, mut_rng);

    std::vector<double> next_us = score_all(next);
    if (cfg.elitism) {
      std::size_t worst = 0;
      for (std::size_t i = 1; i < next_us.size(); ++i) {
        if (next_us[i] > next_us[worst]) worst = i;
      }
      if (us[elite] < next_us[worst]) {
        next[worst] = pop[elite];
        next_us[worst] = us[elite];
      }
    }
    pop = std::move(next);
    us = std::move(next_us);
  }
  return result;
}

/// C(n, k), saturating at the maximum of std::uint64_t.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    // r * num / i is exact at every step; divide first where possible.
    const std::uint64_t g = std::gcd(r, i);
    const std::uint64_t rr = r / g, ii = i / g;
    const std::uint64_t nn = num / ii;  // ii divides num * rr and gcd(rr, ii) == 1
    if (rr != 0 && nn > std::numeric_limits<std::uint64_t>::max() / rr) return std::numeric_limits<std::uint64_t>::max();
    r = rr * nn;
  }
  return r;
}

inline constexpr std::uint64_t kDefaultOracleCap = 1'000'000;

struct OracleResult {
  Deployment best;
  double best_u = 0.0;
  std::uint64_t candidates = 0;
};

/// Exact optimum over every k-subset, enumerated in lexicographic order. Ties
/// keep the lexicographically smallest subset.
inline OracleResult brute_force(const Network& net, std::span<const Trip> trips, std::size_t k,
                                const EvalParams& params, std::uint64_t cap = kDefaultOracleCap,
                                unsigned threads = 1) {
  validate(params);
  const std::size_t n = net.size();
  if (k > n) throw Error(ErrorCode::InvalidCardinality, "k exceeds the number of nodes");
  const std::uint64_t total = binomial(n, k);
  if (total > cap) {
    throw Error(ErrorCode::SearchSpaceTooLarge, "C(" + std::to_string(n) + "," + std::to_string(k) +
                                                    ") = " + std::to_string(total) + " exceeds the cap of " +
                                                    std::to_string(cap));
  }

  std::vector<int> combo(k);
  for (std::size_t i = 0; i < k; ++i) combo[i] = static_cast<int>(i);
  const auto advance = [&]() {
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (static_cast<std::size_t>(combo[i]) < n - k + i) {
        ++combo[i];
        for (std::size_t j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
        return true;
      }
    }
    return false;
  };

  OracleResult out;
  out.candidates = total;
  bool have = false;
  constexpr std::size_t kBatch = 256;
  bool more = true;
  while (more) {
    std::vector<Deployment> batch;
    while (more && batch.size() < kBatch) {
      batch.push_back(Deployment::from_stations(n, combo));
      more = advance();
    }
    std::vector<double> us(batch.size());
    parallel_for(batch.size(), threads,
                 [&](std::size_t i) { us[i] = deployment_score(net, trips, batch[i], params); });
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (!have || us[i] < out.best_u) {
        out.best = batch[i];
        out.best_u = us[i];
        have = true;
      }
    }
  }
  return out;
}

}  // namespace pevsim
