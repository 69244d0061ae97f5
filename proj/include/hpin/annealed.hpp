#pragma once

// Deterministic iteration of the annealed recursion
//
//   r_0 = e^h,   r_{n+1} = (r_n^s + b - 1) / b,
//
// carried as rho_n = log r_n, with extraction of the annealed free energy
// F(h) = lim rho_n / s^n, the epsilon sequence a_n of the critical analysis,
// and the essential-singularity fit.

#include <span>
#include <vector>

#include "hpin/model.hpp"

namespace hpin {

struct AnnealedState {
  long level = 0;
  double rho = 0.0;  // log r_n
};

enum class Phase { Localized, Delocalized };

struct FreeEnergyValue {
  double value = 0.0;  // F >= 0; 0 iff Delocalized
  long levels_used = 0;
  bool converged = false;
  Phase phase = Phase::Delocalized;
};

// One step: rho' = combine_core(s * rho, b).
AnnealedState annealed_step(const AnnealedState& state, const ModelParams& params);

// Certified finite computation of F(h) (beta is ignored).  Exits:
//  - rho_0 <= 0, or any non-increasing step, or Cauchy capture at a bounded
//    fixed point  -> Delocalized, value 0 (the orbit of a monotone map is
//    monotone, so a non-increasing step means r_n is bounded and F = 0);
//  - rho_n >= RHO_BIG -> Localized with the exact geometric tail
//    value = (rho_n - log(b)/(s-1)) / s^n; the neglected corrections
//    sum_m log1p((b-1) e^{-s rho_m}) / s^{m+1} are < (b-1)e^{-s*RHO_BIG},
//    far below any tol;
//  - max_levels exhausted -> converged = false, carrying rho_n/s^n.
FreeEnergyValue annealed_free_energy(const ModelParams& params,
                                     double tol = 1e-12,
                                     long max_levels = 1000000);

inline constexpr double kRhoBig = 50.0;

// Finite-level value rho_N / s^N (the deterministic F_N), plus rho_N itself.
struct AnnealedPartial {
  double value = 0.0;  // rho_N / s^N
  double rho = 0.0;    // rho_N = log r_N
};
AnnealedPartial annealed_partial(const ModelParams& params, int levels);

// a_0 solves Fhat(0,a) = 1 where Fhat(0,eps) := F(log(1+eps));
// a_{n+1} = (s a_n + 1)^{1/s} - 1, strictly decreasing to 0.
struct EpsilonSequence {
  int s = 2;
  std::vector<double> a;  // a_0 .. a_{n_terms}
};
EpsilonSequence build_epsilon_sequence(const ModelParams& params, int n_terms);

struct SingularityFit {
  double slope = 0.0;      // estimate of 2 log(s)/(s-1)
  double intercept = 0.0;
  double max_rel_residual = 0.0;
};

// OLS fit of -log Fhat(0,eps) against 1/eps over the grid.  Throws if any
// grid point is non-positive, delocalized, or fails to converge.
SingularityFit fit_singularity(const ModelParams& params,
                               std::span<const double> eps_grid);

}  // namespace hpin
