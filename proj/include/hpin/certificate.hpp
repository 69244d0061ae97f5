#pragma once

// Good-diamond coarse-graining as a computable lower bound on F(beta,h):
// pick a scale k with log(r_k)/s^k large, a scale n satisfying the variance
// condition log_s(8 s^k V(R_k)/r_k^2) < n, estimate the good-diamond density
// p_good by Monte Carlo, and assemble
//
//   bound = (p_good / s^n) [ (n-k) log s - log 2 + log r_k
//                            + log p_{k,n} + log(q_n) E[i_1] ].
//
// A positive bound certifies F(beta,h) > 0 up to the Monte Carlo error on
// p_good and V(R_k); conservative mode widens both before evaluating.

#include <cstdint>
#include <optional>
#include <string>

#include "hpin/model.hpp"

namespace hpin {

// log r_k after k annealed steps from r_0 = e^h.
double annealed_mean_rk(const ModelParams& params, int k);

// Smallest k with log(r_k)/s^k >= target; target defaults to F(h)/2.
// Requires h > 0 and b == s; throws std::domain_error when F(h) = 0.
int choose_k(const ModelParams& params, const DisorderLaw& law,
             std::optional<double> target = std::nullopt);

struct VarianceEstimate {
  double value = 0.0;
  double std_err = 0.0;  // large-M: sqrt((m4 - V^2)/M)
};

// Sample variance of exp(pool) for a level-k population of size M.  Throws
// if M < 2 or if any pool log exceeds the safe exponentiation range (pick a
// smaller k in that case).
VarianceEstimate estimate_variance_rk(const ModelParams& params,
                                      const DisorderLaw& law, int k,
                                      std::size_t M, std::uint64_t seed);

// log_s( 8 s^k V(R_k) / r_k^2 ) < n, with V estimated as above.
bool check_condition15(const ModelParams& params, const DisorderLaw& law,
                       int k, int n, std::size_t M, std::uint64_t seed);

struct PGoodEstimate {
  double p_good = 0.0;
  double std_err = 0.0;          // binomial
  double mean_first_good = 0.0;  // E[i_1] = 1/p_good (geometric on {1,2,...})
};

// Monte Carlo over trial groups of s^{n-k} level-k partition functions, each
// generated leaf-exact (full disorder tree, no pool bias); a group is good
// when its sum reaches s^{n-k} r_k / 2.  Throws when s^{n-k} > 1e8.
PGoodEstimate estimate_p_good(const ModelParams& params, const DisorderLaw& law,
                              int k, int n, std::size_t m_trials,
                              std::uint64_t seed);

struct Certificate {
  int k = 0;
  int n = 0;
  double r_k = 0.0;    // annealed mean E[R_k]
  double var_k = 0.0;  // V(R_k) estimate
  double var_std_err = 0.0;
  double p_good = 0.0;
  double p_good_std_err = 0.0;
  double mean_first_good = 0.0;
  bool cond15_ok = false;
  double log_pkn = 0.0;
  double log_qn = 0.0;
  double bound = 0.0;
  bool conservative = false;
  // run inputs, for the serialized record
  ModelParams params;
  std::string law_name;
  std::size_t pool_m = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

// Assembles every field; when cond15 fails the bound is still computed but
// flagged (the p_good >= 1/2 guarantee is void).  Conservative mode uses
// p_good - 3 std errors, V + 3 std errors, and E[i_1] + 1.  Requires
// 1 <= k < n and b == s.
Certificate lower_bound(const ModelParams& params, const DisorderLaw& law,
                        int k, int n, std::size_t M, std::size_t m_trials,
                        std::uint64_t seed, bool conservative = false);

// Outer loop k from max(1, choose_k) over at most max_k_tries values, inner
// loop n from the smallest cond15-satisfying level upward over n_window
// values; returns the first certificate with cond15_ok, p_good >= 1/2 within
// 3 std errors, and bound > 0.
std::optional<Certificate> search_certificate(
    const ModelParams& params, const DisorderLaw& law, std::size_t M,
    std::size_t m_trials, std::uint64_t seed, bool conservative = false,
    int max_k_tries = 4, int n_window = 20);

}  // namespace hpin
