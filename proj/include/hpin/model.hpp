#pragma once

// Shared domain types for the hierarchical pinning model with bond disorder,
// plus the numerically stable log-space one-step map used by every solver:
//
//   R_{n+1} = ( prod_{j=1}^{s} R_n^{(j)} + b - 1 ) / b,
//   R_0     = exp(beta*omega + h - log M(beta)).
//
// Partition functions are carried in log space throughout; in the localized
// phase log R_n grows like F * s^n and overflows linear doubles immediately.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hpin/rng.hpp"

namespace hpin {

using LogWeight = double;  // natural log of a partition function (R > 0 always)

enum class Regime { Equal, Relevant, Other };  // b = s, s > b, b > s

struct ModelParams {
  int b = 2;        // branching factor
  int s = 2;        // segments per branch
  double beta = 0;  // inverse temperature, >= 0
  double h = 0;     // pinning potential

  Regime regime() const {
    if (b == s) return Regime::Equal;
    return s > b ? Regime::Relevant : Regime::Other;
  }

  // Throws std::invalid_argument unless b,s >= 2 and beta >= 0 and h finite.
  void validate() const;
};

// Closed variant set of disorder laws, so log M(beta) is always available in
// closed form; an estimated log M would bias the normalization E[R_0] = e^h.
class DisorderLaw {
 public:
  enum class Kind { StandardGaussian, FairSigns, FiniteDiscrete };

  static DisorderLaw standard_gaussian();
  static DisorderLaw fair_signs();
  // Throws std::invalid_argument if sizes mismatch, probs are negative, or
  // the probs do not sum to 1 within 1e-12.
  static DisorderLaw finite_discrete(std::vector<double> values,
                                     std::vector<double> probs);

  Kind kind() const { return kind_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& probs() const { return probs_; }
  std::string name() const;

  // log M(beta) = log E[exp(beta*omega)] by the closed form of the variant.
  double log_m(double beta) const;

  // One draw of omega.
  double sample(RngStream& rng) const;

 private:
  DisorderLaw(Kind kind, std::vector<double> values, std::vector<double> probs)
      : kind_(kind), values_(std::move(values)), probs_(std::move(probs)) {}

  Kind kind_;
  std::vector<double> values_;  // FiniteDiscrete only
  std::vector<double> probs_;
};

double log_m(const DisorderLaw& law, double beta);

// One level-0 log weight: beta*omega + h - log M(beta).  E[exp(result)] = e^h.
LogWeight sample_initial(const DisorderLaw& law, const ModelParams& params,
                         RngStream& rng);

// log( (exp(sum_logs) + b - 1) / b ), stable over the full double range and
// exactly 0 at sum_logs = 0.  Two branches:
//   S >= 0 :  S + log1p( (b-1) * expm1(-S) / b )
//   S <  0 :  log1p( expm1(S) / b )
// (algebraically identical to S + log1p((b-1)e^{-S}) - log b; this form keeps
// the r = 1 fixed point exact for every b, which libm's log1p/log pair does
// not guarantee).
double combine_core(double sum_logs, int b);

// The one-step map on s children.  Throws std::invalid_argument unless
// children.size() == s.
LogWeight combine_children(std::span<const LogWeight> children, int b, int s);

// The map applied through a full tree: s^d leaf logs reduced d times, groups
// of s in leaf order.  Throws unless the size is a power of s.
LogWeight combine_tree(std::span<const LogWeight> leaf_logs, int b, int s);

}  // namespace hpin
