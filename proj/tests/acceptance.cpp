// Acceptance suite: runs every criterion at its stated tolerance and prints
// one [PASS]/[FAIL] line per criterion.  Exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hpin/annealed.hpp"
#include "hpin/certificate.hpp"
#include "hpin/cli.hpp"
#include "hpin/lattice.hpp"
#include "hpin/model.hpp"
#include "hpin/population.hpp"
#include "hpin/walk.hpp"

using namespace hpin;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int id, bool ok, const std::string& detail, double elapsed,
            double budget) {
  const bool in_time = elapsed < budget;
  const bool pass = ok && in_time;
  if (!pass) ++failures;
  std::printf("[%s] criterion %2d: %s (%.1f s%s)\n", pass ? "PASS" : "FAIL", id,
              detail.c_str(), elapsed, in_time ? "" : ", over budget");
  std::fflush(stdout);
}

std::size_t ipow(int b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// ---- 1: oracle equivalence -------------------------------------------------
void criterion1() {
  const auto t0 = Clock::now();
  const auto law = DisorderLaw::standard_gaussian();
  double max_rel = 0.0;
  std::uint64_t key = 0;
  for (const auto& [b, s] :
       std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {2, 3}}) {
    const ModelParams p{b, s, 1.0, 0.3};
    const double lm = law.log_m(p.beta);
    for (int n = 0; n <= 3; ++n) {
      const DiamondLattice lat = diamond_lattice(b, s, n);
      for (int draw = 0; draw < 100; ++draw) {
        RngStream rng = RngStream::root(2026).child(++key);
        std::vector<double> omega(ipow(s, n));
        std::vector<double> logs(omega.size());
        for (std::size_t i = 0; i < omega.size(); ++i) {
          omega[i] = rng.next_normal();
          logs[i] = p.beta * omega[i] + p.h - lm;
        }
        const double via_lattice = enumerate_partition(lat, omega, p, law);
        const double via_recursion = combine_tree(logs, b, s);
        max_rel =
            std::max(max_rel, std::abs(std::expm1(via_lattice - via_recursion)));
      }
    }
  }
  std::ostringstream msg;
  msg << "oracle equivalence, max rel err " << max_rel << " <= 1e-12";
  report(1, max_rel <= 1e-12, msg.str(), seconds_since(t0), 10.0);
}

// ---- 2: q_n asymptotics ----------------------------------------------------
void criterion2() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int s : {2, 3, 4}) {
    const int n = 100000;
    const WalkTables t = build_q_table(s, n);
    worst = std::max(worst, std::abs(n * (1.0 - t.q[n]) * (s - 1) / 2.0 - 1.0));
  }
  std::ostringstream msg;
  msg << "q_n asymptotics, worst |n(1-q_n)(s-1)/2 - 1| = " << worst << " < 0.02";
  report(2, worst < 0.02, msg.str(), seconds_since(t0), 1.0);
}

// ---- 3: p_{k,n} asymptotics ------------------------------------------------
void criterion3() {
  const auto t0 = Clock::now();
  const WalkTables t = build_q_table(2, 300);
  const double ratio = log_p_kn(t, 100, 300) / (2.0 * std::log(100.0 / 300.0));
  std::ostringstream msg;
  msg << "p_{k,n} asymptotics, ratio " << ratio << " within 5% of 1";
  report(3, std::abs(ratio - 1.0) < 0.05, msg.str(), seconds_since(t0), 1.0);
}

// ---- 4: essential singularity ----------------------------------------------
void criterion4() {
  const auto t0 = Clock::now();
  const ModelParams p{2, 2, 0.0, 0.0};
  std::vector<double> grid;
  for (int i = 0; i < 13; ++i) grid.push_back(0.03 + 0.01 * i);
  const SingularityFit fit = fit_singularity(p, grid);
  const double target = 2.0 * std::log(2.0);
  const bool slope_ok = std::abs(fit.slope - target) / target < 0.15;

  // two-sided bound with one c: both constraints relax as c grows, so take
  // the smallest feasible c over the h grid and check it sits inside (1,3)
  double c_min = 1.0 + 1e-9;
  std::vector<std::pair<double, double>> fh;
  for (int i = 0; i <= 18; ++i) {
    const double h = 0.05 + 0.025 * i;
    fh.emplace_back(h, annealed_free_energy({2, 2, 0.0, h}).value);
  }
  for (const auto& [h, F] : fh) {
    const double lf = std::log(F);
    for (int side = 0; side < 2; ++side) {
      double lo = 1e-6, hi = 100.0;
      for (int it = 0; it < 100; ++it) {
        const double c = 0.5 * (lo + hi);
        const double g = side == 0 ? std::log(c) - 1.0 / (c * h) - lf
                                   : lf + std::log(c) + c / h;
        (g < 0.0 ? lo : hi) = c;
      }
      c_min = std::max(c_min, hi);
    }
  }
  bool witness_ok = c_min < 3.0;
  const double c = std::max(c_min * (1.0 + 1e-9), 1.0 + 1e-6);
  for (const auto& [h, F] : fh)
    witness_ok = witness_ok && (1.0 / c) * std::exp(-c / h) <= F &&
                 F <= c * std::exp(-1.0 / (c * h));

  std::ostringstream msg;
  msg << "essential singularity, slope " << fit.slope << " vs " << target
      << ", two-sided c = " << c << " in (1,3)";
  report(4, slope_ok && witness_ok && c > 1.0 && c < 3.0, msg.str(),
         seconds_since(t0), 60.0);
}

// ---- 5: scaling relation ---------------------------------------------------
void criterion5() {
  const auto t0 = Clock::now();
  const ModelParams p{2, 2, 0.0, 0.0};
  const EpsilonSequence seq = build_epsilon_sequence(p, 21);
  double worst = 0.0;
  for (int n = 0; n <= 20; ++n) {
    ModelParams pa = p, pb = p;
    pa.h = std::log1p(seq.a[n]);
    pb.h = std::log1p(seq.a[n + 1]);
    const double rhs = annealed_free_energy(pa).value;
    const double lhs = 2.0 * annealed_free_energy(pb).value;
    worst = std::max(worst, std::abs(lhs - rhs) / rhs);
  }
  std::ostringstream msg;
  msg << "scaling relation s*Fhat(a_{n+1}) = Fhat(a_n), worst rel err " << worst
      << " <= 1e-8";
  report(5, worst <= 1e-8, msg.str(), seconds_since(t0), 60.0);
}

// ---- 6: s > b critical exponent ----------------------------------------------
void criterion6() {
  const auto t0 = Clock::now();
  std::vector<double> xs, ys;
  for (int k = 0; k <= 8; ++k) {
    const double h = std::pow(10.0, -4.0 + k / 4.0);
    const FreeEnergyValue f = annealed_free_energy({2, 3, 0.0, h});
    xs.push_back(std::log(h));
    ys.push_back(std::log(f.value));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
  mx /= xs.size(); my /= ys.size();
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double target = std::log(3.0) / (std::log(3.0) - std::log(2.0));
  std::ostringstream msg;
  msg << "s>b exponent, log-log slope " << slope << " within 10% of " << target;
  report(6, std::abs(slope - target) / target < 0.10, msg.str(),
         seconds_since(t0), 60.0);
}

// ---- 7: Jensen and monotonicity ---------------------------------------------
void criterion7() {
  const auto t0 = Clock::now();
  const auto law = DisorderLaw::standard_gaussian();
  const std::vector<double> betas{0.0, 0.5, 1.0};
  const std::vector<double> hs{0.0, 0.25, 0.5, 1.0};
  // The per-pool std_err ignores the ancestry correlation of pool entries and
  // understates the run-to-run spread, so the 3-sigma window is taken over
  // independent replicas (each one a full M = 1e5, N = 25 run).
  const int reps = 4;
  bool ok = true;
  std::ostringstream why;
  for (double beta : betas) {
    double prev_mean = -1e300, prev_se = 0.0;
    for (double h : hs) {
      const ModelParams p{2, 2, beta, h};
      double sum = 0.0, sumsq = 0.0;
      for (int r = 0; r < reps; ++r) {
        const double e = quenched_free_energy(p, law, 100000, 25, 1 + r).mean;
        sum += e;
        sumsq += e * e;
      }
      const double mean = sum / reps;
      const double se =
          std::sqrt(std::max(0.0, sumsq / reps - mean * mean) / (reps - 1));
      const double ann = annealed_partial({2, 2, 0.0, h}, 25).value;
      if (mean > ann + 3.0 * se) {
        ok = false;
        why << " [Jensen fails at beta=" << beta << " h=" << h << "]";
      }
      const double comb = std::sqrt(se * se + prev_se * prev_se);
      if (mean < prev_mean - 3.0 * comb) {
        ok = false;
        why << " [monotonicity fails at beta=" << beta << " h=" << h << "]";
      }
      prev_mean = mean;
      prev_se = se;
    }
  }
  report(7, ok, "Jensen bound and h-monotonicity on the 3x4 grid" + why.str(),
         seconds_since(t0), 600.0);
}

// ---- 8: localization certificate ---------------------------------------------
void criterion8() {
  const auto t0 = Clock::now();
  const auto law = DisorderLaw::standard_gaussian();
  const ModelParams p{2, 2, 1.0, 0.5};
  const auto cert = search_certificate(p, law, 100000, 2000, 2024, true);
  bool ok = cert.has_value();
  std::ostringstream msg;
  if (ok) {
    ok = cert->cond15_ok && cert->p_good >= 0.5 - 3.0 * cert->p_good_std_err &&
         cert->bound > 0.0;
    msg << "certificate at (k,n)=(" << cert->k << "," << cert->n
        << "), p_good " << cert->p_good << ", conservative bound "
        << cert->bound;
  } else {
    msg << "certificate search failed";
  }

  // beta = 0 validity: every bound computed on the sweep stays below truth
  for (double h : {0.5, 1.0}) {
    const ModelParams p0{2, 2, 0.0, h};
    const double F = annealed_free_energy(p0).value;
    for (int k = 1; k <= 4 && ok; ++k)
      for (int n = k + 1; n <= k + 12 && ok; ++n) {
        const Certificate c = lower_bound(p0, law, k, n, 1000, 8, 7);
        if (c.bound > F + 1e-9) {
          ok = false;
          msg << " [beta=0 bound " << c.bound << " exceeds F=" << F << " at ("
              << k << "," << n << ") h=" << h << "]";
        }
      }
  }
  report(8, ok, msg.str(), seconds_since(t0), 600.0);
}

// ---- 9: critical-point evidence (scan agreement + N-direction) ---------------
void criterion9() {
  const auto t0 = Clock::now();
  const auto law = DisorderLaw::standard_gaussian();
  double h0[3], h1[3];
  const int Ns[3] = {20, 25, 30};
  for (int i = 0; i < 3; ++i) {
    h0[i] = critical_point_scan({2, 2, 0.0, 0.0}, law, 100000, Ns[i], 1, 0.0,
                                0.5, 1e-6);
    h1[i] = critical_point_scan({2, 2, 1.0, 0.0}, law, 100000, Ns[i], 1, 0.0,
                                0.5, 1e-6);
  }
  const bool close = std::abs(h0[2] - h1[2]) < 0.1;
  const bool shrink0 = h0[1] <= h0[0] && h0[2] <= h0[1];
  const bool shrink1 = h1[1] <= h1[0] && h1[2] <= h1[1];
  std::ostringstream msg;
  msg << "pseudo-critical points: beta=0 {";
  for (int i = 0; i < 3; ++i) msg << (i ? "," : "") << h0[i];
  msg << "} beta=1 {";
  for (int i = 0; i < 3; ++i) msg << (i ? "," : "") << h1[i];
  msg << "}, |diff@N=30| = " << std::abs(h0[2] - h1[2]) << " < 0.1"
      << (close ? "" : " VIOLATED") << "; monotone shrink in N"
      << ((shrink0 && shrink1) ? "" : " VIOLATED (values grow with N)");
  report(9, close && shrink0 && shrink1, msg.str(), seconds_since(t0), 1800.0);
}

// ---- 10: determinism across worker counts ------------------------------------
void criterion10() {
  const auto t0 = Clock::now();
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "hpin_acceptance_out";
  fs::create_directories(dir);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  bool ok = true;
  for (const char* beta : {"0", "0.5", "1"}) {
    std::string c1 = (dir / (std::string("t1_") + beta + ".csv")).string();
    std::string j1 = (dir / (std::string("t1_") + beta + ".json")).string();
    std::string c8 = (dir / (std::string("t8_") + beta + ".csv")).string();
    std::string j8 = (dir / (std::string("t8_") + beta + ".json")).string();
    const std::vector<std::string> common{
        "quenched", "--beta", beta,   "--h",    "0,0.25,0.5,1",
        "--pool",   "100000", "--levels", "25", "--seed", "2024"};
    std::vector<std::string> run1{"--threads", "1", "--csv", c1, "--json", j1};
    std::vector<std::string> run8{"--threads", "8", "--csv", c8, "--json", j8};
    run1.insert(run1.end(), common.begin(), common.end());
    run8.insert(run8.end(), common.begin(), common.end());
    ok = ok && run_command(run1) == 0 && run_command(run8) == 0;
    ok = ok && slurp(c1) == slurp(c8) && slurp(j1) == slurp(j8);
  }
  fs::remove_all(dir);
  report(10, ok, "1-worker and 8-worker exports byte-identical",
         seconds_since(t0), 1800.0);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("acceptance: %d/10 criteria passed\n", 10 - failures);
  return failures;
}
