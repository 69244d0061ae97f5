#pragma once

// Population-dynamics Monte Carlo for the quenched free energy: a fixed pool
// of M log partition functions approximates the iid family R_n^{(i)}.  Each
// new entry combines s parents drawn uniformly with replacement from the
// previous level.  Every draw is keyed by (seed, level, pool index), so a
// pool is a pure function of its coordinates: results are bitwise identical
// for any worker count.
//
// The pool introduces O(1/M) correlation bias relative to the exact
// exponential tree; the M vs 4M consistency test bounds it empirically.

#include <cstdint>
#include <vector>

#include "hpin/model.hpp"

namespace hpin {

struct Population {
  int level = 0;
  std::vector<LogWeight> pool;
  ModelParams params;
  DisorderLaw law = DisorderLaw::standard_gaussian();
  std::uint64_t seed = 0;
};

struct FreeEnergyEstimate {
  double mean = 0.0;     // average of pool logs / s^N
  double std_err = 0.0;  // pool std / (sqrt(M) * s^N), cross-entry correlation ignored
  int level = 0;
  std::size_t pool_size = 0;
  double beta = 0.0;
  double h = 0.0;
};

// M independent level-0 draws; throws std::invalid_argument if M < 2.
Population init_population(const ModelParams& params, const DisorderLaw& law,
                           std::size_t M, std::uint64_t seed, int threads = 1);

Population population_step(const Population& pop, int threads = 1);

FreeEnergyEstimate quenched_free_energy(const ModelParams& params,
                                        const DisorderLaw& law, std::size_t M,
                                        int n_levels, std::uint64_t seed,
                                        int threads = 1);

FreeEnergyEstimate estimate_from_pool(const Population& pop);

// Bisection (30 iterations) on h for the predicate
//   [quenched estimate > f_threshold + 3 * std_err].
// Returns the final midpoint: an upper estimate of the finite-size
// pseudo-critical point, not h_c itself.  Throws std::runtime_error if the
// predicate holds at h_lo or fails at h_hi.
double critical_point_scan(const ModelParams& params, const DisorderLaw& law,
                           std::size_t M, int n_levels, std::uint64_t seed,
                           double h_lo, double h_hi, double f_threshold,
                           int threads = 1);

}  // namespace hpin
