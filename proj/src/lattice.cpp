#include "hpin/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace hpin {

namespace {

constexpr std::uint64_t kTrajectoryBudget = 1000000;

// N_0 .. N_level, throwing past the budget.
std::vector<std::uint64_t> counts(int b, int s, int level) {
  std::vector<std::uint64_t> n(level + 1);
  n[0] = 1;
  for (int m = 1; m <= level; ++m) {
    long double pw = 1.0L;
    for (int j = 0; j < s; ++j) pw *= static_cast<long double>(n[m - 1]);
    pw *= b;
    if (pw > static_cast<long double>(kTrajectoryBudget))
      throw std::runtime_error(
          "diamond_lattice: trajectory count exceeds the enumeration budget");
    n[m] = static_cast<std::uint64_t>(pw);
  }
  return n;
}

std::uint64_t ipow(std::uint64_t base, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

struct Enumerator {
  int b, s;
  std::vector<std::uint64_t> n;       // trajectory counts per level
  std::vector<std::uint64_t> leaves;  // s^m per level
  std::span<const double> x;          // leaf log-weights along the wall

  // Sum of wall-coincident leaf log-weights for trajectory T of a
  // wall-containing level-L diamond whose wall leaves start at `off`.
  double wall_energy(int L, std::uint64_t T, std::uint64_t off) const {
    if (L == 0) return x[off];
    const std::uint64_t sub = ipow(n[L - 1], s);
    const std::uint64_t c = T / sub;
    if (c != 0) return 0.0;  // left the wall branch: subtree never touches
    std::uint64_t rem = T % sub;
    double acc = 0.0;
    for (int j = s - 1; j >= 0; --j) {
      const std::uint64_t tj = rem % n[L - 1];
      rem /= n[L - 1];
      acc += wall_energy(L - 1, tj, off + j * leaves[L - 1]);
    }
    return acc;
  }

  bool touches_wall(int L, std::uint64_t T) const {
    if (L == 0) return true;
    const std::uint64_t sub = ipow(n[L - 1], s);
    if (T / sub != 0) return false;
    std::uint64_t rem = T % sub;
    for (int j = 0; j < s; ++j) {
      const std::uint64_t tj = rem % n[L - 1];
      rem /= n[L - 1];
      if (touches_wall(L - 1, tj)) return true;
    }
    return false;
  }
};

}  // namespace

DiamondLattice diamond_lattice(int b, int s, int level) {
  if (b < 2 || s < 2 || level < 0)
    throw std::invalid_argument("diamond_lattice: need b,s >= 2 and level >= 0");
  const auto n = counts(b, s, level);
  return {b, s, level, n[level]};
}

static std::vector<double> leaf_weights(const DiamondLattice& lattice,
                                        std::span<const double> omega,
                                        const ModelParams& params,
                                        const DisorderLaw& law) {
  const std::uint64_t want = ipow(lattice.s, lattice.level);
  if (omega.size() != want)
    throw std::invalid_argument("enumerate_partition: omega must have s^n entries");
  const double lm = law.log_m(params.beta);
  std::vector<double> x(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i)
    x[i] = params.beta * omega[i] + params.h - lm;
  return x;
}

double enumerate_partition(const DiamondLattice& lattice,
                           std::span<const double> omega,
                           const ModelParams& params, const DisorderLaw& law) {
  const auto x = leaf_weights(lattice, omega, params, law);
  // Linear-space factorized average: R(wall diamond) with every non-wall
  // branch averaging to 1.
  struct Rec {
    int b, s;
    const std::vector<double>& x;
    std::uint64_t leaf(int L) const { return ipow(std::uint64_t(s), L); }
    double r(int L, std::uint64_t off) const {
      if (L == 0) return std::exp(x[off]);
      double prod = 1.0;
      for (int j = 0; j < s; ++j) prod *= r(L - 1, off + j * leaf(L - 1));
      return (prod + (b - 1)) / b;
    }
  } rec{lattice.b, lattice.s, x};
  return std::log(rec.r(lattice.level, 0));
}

double enumerate_partition_flat(const DiamondLattice& lattice,
                                std::span<const double> omega,
                                const ModelParams& params,
                                const DisorderLaw& law) {
  const auto x = leaf_weights(lattice, omega, params, law);
  Enumerator e{lattice.b, lattice.s, counts(lattice.b, lattice.s, lattice.level),
               {}, x};
  e.leaves.resize(lattice.level + 1);
  for (int m = 0; m <= lattice.level; ++m) e.leaves[m] = ipow(lattice.s, m);

  const std::uint64_t total = e.n[lattice.level];
  double sum = 0.0, comp = 0.0;  // Kahan
  for (std::uint64_t t = 0; t < total; ++t) {
    const double w = std::exp(e.wall_energy(lattice.level, t, 0));
    const double y = w - comp;
    const double s2 = sum + y;
    comp = (s2 - sum) - y;
    sum = s2;
  }
  return std::log(sum / static_cast<double>(total));
}

double enumerate_escape_probability(const DiamondLattice& lattice) {
  Enumerator e{lattice.b, lattice.s, counts(lattice.b, lattice.s, lattice.level),
               {}, {}};
  const std::uint64_t total = e.n[lattice.level];
  std::uint64_t escaped = 0;
  for (std::uint64_t t = 0; t < total; ++t)
    if (!e.touches_wall(lattice.level, t)) ++escaped;
  return static_cast<double>(escaped) / static_cast<double>(total);
}

}  // namespace hpin
