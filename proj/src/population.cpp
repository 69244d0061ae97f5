#include "hpin/population.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace hpin {

namespace {

// Deterministic data-parallel loop: the partition only affects scheduling,
// never which stream computes entry i.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count < 2) {
    fn(std::size_t{0}, count);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

Population init_population(const ModelParams& params, const DisorderLaw& law,
                           std::size_t M, std::uint64_t seed, int threads) {
  params.validate();
  if (M < 2) throw std::invalid_argument("init_population: M >= 2");
  Population pop;
  pop.level = 0;
  pop.params = params;
  pop.law = law;
  pop.seed = seed;
  pop.pool.resize(M);
  const RngStream level0 = RngStream::root(seed).child(0);
  parallel_for(M, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      RngStream rng = level0.child(i);
      pop.pool[i] = sample_initial(law, params, rng);
    }
  });
  return pop;
}

Population population_step(const Population& pop, int threads) {
  const std::size_t M = pop.pool.size();
  const int s = pop.params.s, b = pop.params.b;
  Population next;
  next.level = pop.level + 1;
  next.params = pop.params;
  next.law = pop.law;
  next.seed = pop.seed;
  next.pool.resize(M);
  const RngStream level = RngStream::root(pop.seed).child(next.level);
  parallel_for(M, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      RngStream rng = level.child(i);
      double sum = 0.0;
      for (int j = 0; j < s; ++j) sum += pop.pool[rng.next_index(M)];
      next.pool[i] = combine_core(sum, b);
    }
  });
  return next;
}

FreeEnergyEstimate estimate_from_pool(const Population& pop) {
  const std::size_t M = pop.pool.size();
  // centered on the first entry: the common O(F s^N) offset cancels before
  // summation, and a degenerate pool yields an exactly zero variance
  const double base = pop.pool[0];
  double acc = 0.0;
  for (double v : pop.pool) acc += v - base;
  const double mean = base + acc / static_cast<double>(M);
  double var = 0.0;
  for (double v : pop.pool) var += (v - mean) * (v - mean);
  var /= static_cast<double>(M - 1);
  const double scale = std::pow(double(pop.params.s), pop.level);
  FreeEnergyEstimate est;
  est.mean = mean / scale;
  est.std_err = std::sqrt(var / static_cast<double>(M)) / scale;
  est.level = pop.level;
  est.pool_size = M;
  est.beta = pop.params.beta;
  est.h = pop.params.h;
  return est;
}

FreeEnergyEstimate quenched_free_energy(const ModelParams& params,
                                        const DisorderLaw& law, std::size_t M,
                                        int n_levels, std::uint64_t seed,
                                        int threads) {
  if (n_levels < 1)
    throw std::invalid_argument("quenched_free_energy: n_levels >= 1");
  Population pop = init_population(params, law, M, seed, threads);
  for (int n = 0; n < n_levels; ++n) pop = population_step(pop, threads);
  return estimate_from_pool(pop);
}

double critical_point_scan(const ModelParams& params, const DisorderLaw& law,
                           std::size_t M, int n_levels, std::uint64_t seed,
                           double h_lo, double h_hi, double f_threshold,
                           int threads) {
  if (!(h_lo < h_hi))
    throw std::invalid_argument("critical_point_scan: need h_lo < h_hi");
  if (!(f_threshold > 0.0))
    throw std::invalid_argument("critical_point_scan: need f_threshold > 0");

  const auto localized = [&](double h) {
    ModelParams p = params;
    p.h = h;
    const FreeEnergyEstimate est =
        quenched_free_energy(p, law, M, n_levels, seed, threads);
    return est.mean > f_threshold + 3.0 * est.std_err;
  };

  if (localized(h_lo))
    throw std::runtime_error("critical_point_scan: predicate already true at h_lo");
  if (!localized(h_hi))
    throw std::runtime_error("critical_point_scan: predicate still false at h_hi");

  double lo = h_lo, hi = h_hi;
  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo + hi);
    (localized(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace hpin
