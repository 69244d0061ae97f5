#include "hpin/model.hpp"

#include <cmath>
#include <stdexcept>

namespace hpin {

void ModelParams::validate() const {
  if (b < 2 || s < 2)
    throw std::invalid_argument("ModelParams: need b >= 2 and s >= 2");
  if (!(beta >= 0.0))
    throw std::invalid_argument("ModelParams: need beta >= 0");
  if (!std::isfinite(h) || !std::isfinite(beta))
    throw std::invalid_argument("ModelParams: beta and h must be finite");
}

DisorderLaw DisorderLaw::standard_gaussian() {
  return DisorderLaw(Kind::StandardGaussian, {}, {});
}

DisorderLaw DisorderLaw::fair_signs() {
  return DisorderLaw(Kind::FairSigns, {}, {});
}

DisorderLaw DisorderLaw::finite_discrete(std::vector<double> values,
                                         std::vector<double> probs) {
  if (values.empty() || values.size() != probs.size())
    throw std::invalid_argument(
        "FiniteDiscrete: values and probs must be non-empty and equal-sized");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0))
        throw std::invalid_argument("FiniteDiscrete: probs must be >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument(
        "FiniteDiscrete: probs must sum to 1 within 1e-12");
  return DisorderLaw(Kind::FiniteDiscrete, std::move(values), std::move(probs));
}

std::string DisorderLaw::name() const {
  switch (kind_) {
    case Kind::StandardGaussian: return "gaussian";
    case Kind::FairSigns: return "signs";
    case Kind::FiniteDiscrete: return "discrete";
  }
  return "?";
}

double DisorderLaw::log_m(double beta) const {
  if (!(beta >= 0.0)) throw std::invalid_argument("log_m: need beta >= 0");
  switch (kind_) {
    case Kind::StandardGaussian:
      return 0.5 * beta * beta;
    case Kind::FairSigns: {
      // log cosh(beta), overflow-safe for large beta.
      double a = std::abs(beta);
      return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
    }
    case Kind::FiniteDiscrete: {
      // log sum p_i e^{beta v_i} via max-shifted log-sum-exp.
      double m = -INFINITY;
      for (double v : values_) m = std::max(m, beta * v);
      double acc = 0.0;
      for (std::size_t i = 0; i < values_.size(); ++i)
        acc += probs_[i] * std::exp(beta * values_[i] - m);
      return m + std::log(acc);
    }
  }
  return 0.0;
}

double DisorderLaw::sample(RngStream& rng) const {
  switch (kind_) {
    case Kind::StandardGaussian:
      return rng.next_normal();
    case Kind::FairSigns:
      return (rng.next_u64() >> 63) ? 1.0 : -1.0;
    case Kind::FiniteDiscrete: {
      double u = rng.next_unit();
      double cdf = 0.0;
      for (std::size_t i = 0; i + 1 < probs_.size(); ++i) {
        cdf += probs_[i];
        if (u < cdf) return values_[i];
      }
      return values_.back();
    }
  }
  return 0.0;
}

double log_m(const DisorderLaw& law, double beta) { return law.log_m(beta); }

LogWeight sample_initial(const DisorderLaw& law, const ModelParams& params,
                         RngStream& rng) {
  const double omega = law.sample(rng);
  return params.beta * omega + params.h - law.log_m(params.beta);
}

double combine_core(double sum_logs, int b) {
  const double bm1 = static_cast<double>(b - 1);
  if (sum_logs >= 0.0)
    return sum_logs + std::log1p(bm1 * std::expm1(-sum_logs) / b);
  return std::log1p(std::expm1(sum_logs) / b);
}

LogWeight combine_children(std::span<const LogWeight> children, int b, int s) {
  if (static_cast<int>(children.size()) != s)
    throw std::invalid_argument("combine_children: expected exactly s children");
  double sum = 0.0;
  for (double c : children) sum += c;
  return combine_core(sum, b);
}

LogWeight combine_tree(std::span<const LogWeight> leaf_logs, int b, int s) {
  std::size_t width = leaf_logs.size();
  std::size_t check = width;
  while (check > 1) {
    if (check % s != 0)
      throw std::invalid_argument("combine_tree: size must be a power of s");
    check /= s;
  }
  std::vector<double> level(leaf_logs.begin(), leaf_logs.end());
  while (width > 1) {
    width /= s;
    for (std::size_t i = 0; i < width; ++i) {
      double sum = 0.0;
      for (int j = 0; j < s; ++j) sum += level[i * s + j];
      level[i] = combine_core(sum, b);
    }
  }
  return level.empty() ? 0.0 : level[0];
}

}  // namespace hpin
