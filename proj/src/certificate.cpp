#include "hpin/certificate.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hpin/annealed.hpp"
#include "hpin/population.hpp"
#include "hpin/walk.hpp"

namespace hpin {

namespace {

constexpr std::uint64_t kPGoodTag = 0x70676F6F64ull;  // disjoint from level ids
constexpr double kSafeLogRange = 300.0;               // exp(2x) must stay finite
constexpr double kGroupBudget = 1e8;                  // cap on s^{n-k}

std::uint64_t upow(int base, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<std::uint64_t>(base);
  return r;
}

// One leaf-exact level-k log partition function: s^k fresh leaves combined
// bottom-up.  `node` keys the stream of this sample.
double leaf_exact_log_rk(const ModelParams& params, const DisorderLaw& law,
                         int k, const RngStream& node) {
  const std::uint64_t leaves = upow(params.s, k);
  std::vector<double> logs(leaves);
  for (std::uint64_t i = 0; i < leaves; ++i) {
    RngStream rng = node.child(i);
    logs[i] = sample_initial(law, params, rng);
  }
  return combine_tree(logs, params.b, params.s);
}

double cond15_lhs(int s, int k, double variance, double log_rk) {
  // log_s(8 s^k V / r_k^2), in logs so huge variances cannot overflow.
  if (!(variance > 0.0)) return -INFINITY;
  return (std::log(8.0) + k * std::log(double(s)) + std::log(variance) -
          2.0 * log_rk) /
         std::log(double(s));
}

}  // namespace

double annealed_mean_rk(const ModelParams& params, int k) {
  if (k < 0) throw std::invalid_argument("annealed_mean_rk: k >= 0");
  return annealed_partial(params, k).rho;
}

int choose_k(const ModelParams& params, const DisorderLaw& law,
             std::optional<double> target) {
  params.validate();
  (void)law;  // the annealed mean does not depend on the disorder variant
  if (params.b != params.s)
    throw std::invalid_argument("choose_k: requires b == s");
  if (!(params.h > 0.0))
    throw std::domain_error("choose_k: requires h > 0 (F(h) = 0 otherwise)");
  double t;
  if (target) {
    t = *target;
  } else {
    const FreeEnergyValue f = annealed_free_energy(params);
    if (!(f.value > 0.0))
      throw std::domain_error("choose_k: annealed free energy is 0, no valid k");
    t = 0.5 * f.value;
  }
  double rho = params.h;
  double scale = 1.0;
  for (int k = 0; k <= 64; ++k) {
    if (rho / scale >= t) return k;
    rho = combine_core(params.s * rho, params.b);
    scale *= params.s;
  }
  throw std::domain_error("choose_k: no k <= 64 reaches the target");
}

VarianceEstimate estimate_variance_rk(const ModelParams& params,
                                      const DisorderLaw& law, int k,
                                      std::size_t M, std::uint64_t seed) {
  if (M < 2) throw std::invalid_argument("estimate_variance_rk: M >= 2");
  Population pop = init_population(params, law, M, seed);
  for (int lev = 0; lev < k; ++lev) pop = population_step(pop);

  std::vector<double> r(M);
  for (std::size_t i = 0; i < M; ++i) {
    if (std::abs(pop.pool[i]) > kSafeLogRange)
      throw std::runtime_error(
          "estimate_variance_rk: pool log exceeds safe exp range; use a smaller k");
    r[i] = std::exp(pop.pool[i]);
  }
  // centered on the first entry so a disorder-free pool gives exactly zero
  const double base = r[0];
  double acc = 0.0;
  for (double v : r) acc += v - base;
  const double mean = base + acc / static_cast<double>(M);
  double m2 = 0.0, m4 = 0.0;
  for (double v : r) {
    const double d = v - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double var = m2 / static_cast<double>(M - 1);
  m4 /= static_cast<double>(M);
  VarianceEstimate est;
  est.value = var;
  est.std_err = std::sqrt(std::max(0.0, m4 - var * var) / static_cast<double>(M));
  return est;
}

bool check_condition15(const ModelParams& params, const DisorderLaw& law,
                       int k, int n, std::size_t M, std::uint64_t seed) {
  const VarianceEstimate v = estimate_variance_rk(params, law, k, M, seed);
  const double log_rk = annealed_mean_rk(params, k);
  return cond15_lhs(params.s, k, v.value, log_rk) < static_cast<double>(n);
}

PGoodEstimate estimate_p_good(const ModelParams& params, const DisorderLaw& law,
                              int k, int n, std::size_t m_trials,
                              std::uint64_t seed) {
  if (!(n > k)) throw std::invalid_argument("estimate_p_good: n > k");
  if (m_trials < 1) throw std::invalid_argument("estimate_p_good: m_trials >= 1");
  const double group_sz = std::pow(double(params.s), n - k);
  if (group_sz > kGroupBudget)
    throw std::runtime_error(
        "estimate_p_good: s^(n-k) exceeds the group budget; use a smaller n-k");
  const std::uint64_t count = upow(params.s, n - k);

  const double log_rk = annealed_mean_rk(params, k);
  const double half_target = 0.5 * count * std::exp(log_rk);

  const RngStream ns = RngStream::root(seed).child(kPGoodTag);
  std::size_t good = 0;
  for (std::size_t t = 0; t < m_trials; ++t) {
    const RngStream trial = ns.child(t);
    double sum = 0.0;
    for (std::uint64_t e = 0; e < count; ++e)
      sum += std::exp(leaf_exact_log_rk(params, law, k, trial.child(e)));
    if (sum >= half_target) ++good;
  }
  PGoodEstimate est;
  est.p_good = static_cast<double>(good) / static_cast<double>(m_trials);
  est.std_err = std::sqrt(est.p_good * (1.0 - est.p_good) /
                          static_cast<double>(m_trials));
  est.mean_first_good = est.p_good > 0.0 ? 1.0 / est.p_good : INFINITY;
  return est;
}

Certificate lower_bound(const ModelParams& params, const DisorderLaw& law,
                        int k, int n, std::size_t M, std::size_t m_trials,
                        std::uint64_t seed, bool conservative) {
  params.validate();
  if (params.b != params.s)
    throw std::invalid_argument("lower_bound: requires b == s");
  if (!(1 <= k && k < n))
    throw std::invalid_argument("lower_bound: requires 1 <= k < n");

  const int s = params.s;
  const double log_rk = annealed_mean_rk(params, k);
  if (log_rk > kSafeLogRange)
    throw std::runtime_error("lower_bound: r_k overflows; use a smaller k");

  const VarianceEstimate var = estimate_variance_rk(params, law, k, M, seed);
  const double var_eff = conservative ? var.value + 3.0 * var.std_err : var.value;
  const bool cond15 = cond15_lhs(s, k, var_eff, log_rk) < static_cast<double>(n);

  const PGoodEstimate pg = estimate_p_good(params, law, k, n, m_trials, seed);
  const double p_eff =
      conservative ? std::max(0.0, pg.p_good - 3.0 * pg.std_err) : pg.p_good;

  const WalkTables tables = build_q_table(s, n);
  const double log_pkn = log_p_kn(tables, k, n);
  const double log_qn = std::log(tables.q[n]);

  Certificate cert;
  cert.k = k;
  cert.n = n;
  cert.r_k = std::exp(log_rk);
  cert.var_k = var.value;
  cert.var_std_err = var.std_err;
  cert.p_good = pg.p_good;
  cert.p_good_std_err = pg.std_err;
  cert.mean_first_good = pg.mean_first_good;
  cert.cond15_ok = cond15;
  cert.log_pkn = log_pkn;
  cert.log_qn = log_qn;
  cert.conservative = conservative;
  cert.params = params;
  cert.law_name = law.name();
  cert.pool_m = M;
  cert.trials = m_trials;
  cert.seed = seed;

  if (p_eff <= 0.0) {
    cert.bound = 0.0;  // vacuous: F >= 0 always
    return cert;
  }
  const double gaps = conservative ? 1.0 / p_eff + 1.0 : pg.mean_first_good;
  const double bracket = (n - k) * std::log(double(s)) - std::log(2.0) +
                         std::log(cert.r_k) + log_pkn + log_qn * gaps;
  cert.bound = p_eff * bracket / std::pow(double(s), n);
  return cert;
}

std::optional<Certificate> search_certificate(const ModelParams& params,
                                              const DisorderLaw& law,
                                              std::size_t M,
                                              std::size_t m_trials,
                                              std::uint64_t seed,
                                              bool conservative,
                                              int max_k_tries, int n_window) {
  const int k0 = std::max(1, choose_k(params, law));
  for (int k = k0; k < k0 + max_k_tries; ++k) {
    const double log_rk = annealed_mean_rk(params, k);
    if (log_rk > kSafeLogRange) break;
    VarianceEstimate var;
    try {
      var = estimate_variance_rk(params, law, k, M, seed);
    } catch (const std::runtime_error&) {
      break;  // level-k weights out of exp range; larger k only gets worse
    }
    const double var_eff =
        conservative ? var.value + 3.0 * var.std_err : var.value;
    const double lhs = cond15_lhs(params.s, k, var_eff, log_rk);
    int n_min = k + 1;
    if (std::isfinite(lhs))
      n_min = std::max(n_min, static_cast<int>(std::floor(lhs)) + 1);
    for (int n = n_min; n < n_min + n_window; ++n) {
      if (std::pow(double(params.s), n - k) > kGroupBudget) break;
      const Certificate cert =
          lower_bound(params, law, k, n, M, m_trials, seed, conservative);
      if (cert.cond15_ok &&
          cert.p_good >= 0.5 - 3.0 * cert.p_good_std_err && cert.bound > 0.0)
        return cert;
    }
  }
  return std::nullopt;
}

}  // namespace hpin
