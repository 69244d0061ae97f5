#include "hpin/annealed.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hpin {

AnnealedState annealed_step(const AnnealedState& state, const ModelParams& params) {
  return {state.level + 1, combine_core(params.s * state.rho, params.b)};
}

FreeEnergyValue annealed_free_energy(const ModelParams& params, double tol,
                                     long max_levels) {
  params.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("annealed_free_energy: tol > 0");
  const int b = params.b, s = params.s;

  double rho = params.h;
  if (rho <= 0.0) return {0.0, 0, true, Phase::Delocalized};

  double scale = 1.0;  // s^level
  for (long level = 1; level <= max_levels; ++level) {
    const double next = combine_core(s * rho, b);
    scale *= s;
    if (next <= rho || next <= 0.0)
      return {0.0, level, true, Phase::Delocalized};
    if (next >= kRhoBig) {
      const double value = (next - std::log(double(b)) / (s - 1)) / scale;
      return {value, level, true, Phase::Localized};
    }
    // Stable-fixed-point capture (sub-unit fixed point when s > b); the
    // monotone-step exit above normally fires first.
    if (std::abs(next - rho) < tol * std::abs(rho))
      return {0.0, level, true, Phase::Delocalized};
    rho = next;
  }
  return {rho / scale, max_levels, false, Phase::Localized};
}

AnnealedPartial annealed_partial(const ModelParams& params, int levels) {
  params.validate();
  if (levels < 0) throw std::invalid_argument("annealed_partial: levels >= 0");
  double rho = params.h;
  for (int n = 0; n < levels; ++n) rho = combine_core(params.s * rho, params.b);
  return {rho / std::pow(double(params.s), levels), rho};
}

namespace {

double fhat(const ModelParams& params, double eps) {
  ModelParams p = params;
  p.h = std::log1p(eps);
  return annealed_free_energy(p).value;
}

}  // namespace

EpsilonSequence build_epsilon_sequence(const ModelParams& params, int n_terms) {
  params.validate();
  if (params.b != params.s)
    throw std::invalid_argument("build_epsilon_sequence: requires b == s");
  if (n_terms < 1)
    throw std::invalid_argument("build_epsilon_sequence: n_terms >= 1");
  const int s = params.s;

  // Bracket Fhat = 1: Fhat is continuous, increasing, 0 at eps = 0, unbounded.
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (fhat(params, hi) < 1.0) {
    hi *= 2.0;
    if (++guard > 64)
      throw std::runtime_error("build_epsilon_sequence: bisection bracket failure");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (fhat(params, mid) < 1.0 ? lo : hi) = mid;
  }
  const double a0 = 0.5 * (lo + hi);
  if (std::abs(fhat(params, a0) - 1.0) > 1e-10)
    throw std::runtime_error("build_epsilon_sequence: |Fhat(a0) - 1| > 1e-10");

  EpsilonSequence seq;
  seq.s = s;
  seq.a.reserve(n_terms + 1);
  seq.a.push_back(a0);
  double a = a0;
  for (int n = 0; n < n_terms; ++n) {
    // (s a + 1)^{1/s} - 1, cancellation-free for small a.
    a = std::expm1(std::log1p(s * a) / s);
    seq.a.push_back(a);
  }
  return seq;
}

SingularityFit fit_singularity(const ModelParams& params,
                               std::span<const double> eps_grid) {
  params.validate();
  if (params.b != params.s)
    throw std::invalid_argument("fit_singularity: requires b == s");
  if (eps_grid.size() < 2)
    throw std::invalid_argument("fit_singularity: need at least 2 grid points");

  std::vector<double> xs, ys;
  xs.reserve(eps_grid.size());
  ys.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    if (!(eps > 0.0))
      throw std::invalid_argument("fit_singularity: eps grid must be > 0");
    ModelParams p = params;
    p.h = std::log1p(eps);
    const FreeEnergyValue f = annealed_free_energy(p);
    if (!f.converged || f.value <= 0.0) {
      std::ostringstream msg;
      msg << "fit_singularity: Fhat not positive/converged at eps = " << eps;
      throw std::runtime_error(msg.str());
    }
    xs.push_back(1.0 / eps);
    ys.push_back(-std::log(f.value));
  }

  const std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) { mx += xs[i]; my += ys[i]; }
  mx /= n; my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  SingularityFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = fit.slope * xs[i] + fit.intercept;
    fit.max_rel_residual =
        std::max(fit.max_rel_residual, std::abs(ys[i] - pred) / std::abs(ys[i]));
  }
  return fit;
}

}  // namespace hpin
