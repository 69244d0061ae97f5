#include "hpin/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "hpin/annealed.hpp"
#include "hpin/certificate.hpp"
#include "hpin/lattice.hpp"
#include "hpin/model.hpp"
#include "hpin/population.hpp"
#include "hpin/records.hpp"
#include "hpin/walk.hpp"

namespace hpin {

namespace {

struct LawOptions {
  std::string law = "gaussian";
  std::vector<double> values;
  std::vector<double> probs;

  void attach(CLI::App* cmd) {
    cmd->add_option("--law", law, "disorder law: gaussian | signs | discrete")
        ->capture_default_str();
    cmd->add_option("--law-values", values, "discrete law support points")
        ->delimiter(',');
    cmd->add_option("--law-probs", probs, "discrete law probabilities")
        ->delimiter(',');
  }

  DisorderLaw build() const {
    if (law == "gaussian") return DisorderLaw::standard_gaussian();
    if (law == "signs") return DisorderLaw::fair_signs();
    if (law == "discrete") return DisorderLaw::finite_discrete(values, probs);
    throw std::invalid_argument("unknown disorder law: " + law);
  }
};

std::string resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  if (const char* dir = std::getenv("HPIN_OUTPUT_DIR"))
    return (std::filesystem::path(dir) / p).string();
  return path;
}

void base_fields(ResultRecord& rec, const std::string& command) {
  rec.add("command", command).add("version", std::string(kToolkitVersion));
}

void emit(const std::vector<ResultRecord>& records, const std::string& csv_path,
          const std::string& json_path) {
  if (csv_path.empty() && json_path.empty()) {
    std::cout << to_csv(records);
    return;
  }
  if (!csv_path.empty()) {
    const std::string path = resolve_output(csv_path);
    export_csv(records, path);
    std::cout << "wrote " << path << "\n";
  }
  if (!json_path.empty()) {
    const std::string path = resolve_output(json_path);
    export_json(records, path);
    std::cout << "wrote " << path << "\n";
  }
}

ResultRecord quenched_record(const ModelParams& p, const LawOptions& law,
                             std::size_t pool, int levels, std::uint64_t seed,
                             const FreeEnergyEstimate& est) {
  ResultRecord rec;
  base_fields(rec, "quenched");
  rec.add("b", std::int64_t(p.b))
      .add("s", std::int64_t(p.s))
      .add("beta", p.beta)
      .add("h", p.h)
      .add("law", law.law)
      .add("pool", std::uint64_t(pool))
      .add("levels", std::int64_t(levels))
      .add("seed", std::uint64_t(seed))
      .add("estimate", est.mean)
      .add("std_err", est.std_err);
  return rec;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
  CLI::App app{"hierarchical pinning model numerics"};
  app.set_help_flag("--help", "print help");  // frees -h/--h for the potential
  app.set_config("--config", "", "read options from an INI/TOML file");
  app.require_subcommand(1);

  int threads = 1;
  std::string csv_path, json_path;
  app.add_option("--threads", threads, "worker count (outputs are identical for any value)")
      ->capture_default_str();
  app.add_option("--csv", csv_path, "write records to this CSV file");
  app.add_option("--json", json_path, "write records to this JSON file");

  const auto subcommand = [&app](const char* name, const char* desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->set_help_flag("--help", "print help");
    sub->fallthrough();  // global --csv/--json/--threads may follow the command
    return sub;
  };

  // annealed
  auto* ann = subcommand("annealed", "annealed free energy F(h)");
  struct {
    int b = 2, s = 2;
    double h = 0.0, tol = 1e-12;
    long max_levels = 1000000;
  } a;
  ann->add_option("--b", a.b)->capture_default_str();
  ann->add_option("--s", a.s)->capture_default_str();
  ann->add_option("--h", a.h, "pinning potential")->required();
  ann->add_option("--tol", a.tol)->capture_default_str();
  ann->add_option("--max-levels", a.max_levels)->capture_default_str();

  // quenched
  auto* que = subcommand("quenched", "quenched free energy estimates");
  struct {
    int b = 2, s = 2;
    double beta = 1.0;
    std::vector<double> h;
    std::uint64_t pool = 100000, seed = 1;
    int levels = 30;
  } q;
  LawOptions q_law;
  que->add_option("--b", q.b)->capture_default_str();
  que->add_option("--s", q.s)->capture_default_str();
  que->add_option("--beta", q.beta)->capture_default_str();
  que->add_option("--h", q.h, "one or more h values")->required()->delimiter(',');
  que->add_option("--pool", q.pool, "population size M")->capture_default_str();
  que->add_option("--levels", q.levels)->capture_default_str();
  que->add_option("--seed", q.seed)->capture_default_str();
  q_law.attach(que);

  // scan
  auto* scn = subcommand("scan", "pseudo-critical point by bisection");
  struct {
    int b = 2, s = 2;
    double beta = 1.0, h_lo = 0.0, h_hi = 0.5, threshold = 1e-6;
    std::uint64_t pool = 100000, seed = 1;
    int levels = 30;
  } sc;
  LawOptions sc_law;
  scn->add_option("--b", sc.b)->capture_default_str();
  scn->add_option("--s", sc.s)->capture_default_str();
  scn->add_option("--beta", sc.beta)->capture_default_str();
  scn->add_option("--h-lo", sc.h_lo)->capture_default_str();
  scn->add_option("--h-hi", sc.h_hi)->capture_default_str();
  scn->add_option("--threshold", sc.threshold)->capture_default_str();
  scn->add_option("--pool", sc.pool)->capture_default_str();
  scn->add_option("--levels", sc.levels)->capture_default_str();
  scn->add_option("--seed", sc.seed)->capture_default_str();
  sc_law.attach(scn);

  // walkprob
  auto* wlk = subcommand("walkprob", "wall-avoidance probabilities q_n");
  struct {
    int s = 2, n = 10, b = 0;  // b = 0 means b = s
  } w;
  wlk->add_option("--s", w.s)->capture_default_str();
  wlk->add_option("--n", w.n)->capture_default_str();
  wlk->add_option("--b", w.b, "branching (defaults to s)");

  // certify
  auto* cer = subcommand("certify", "localization lower-bound certificate");
  struct {
    int b = 2, s = 2, k = 0, n = 0, max_k_tries = 4, n_window = 20;
    double beta = 1.0, h = 0.5;
    std::uint64_t pool = 100000, trials = 2000, seed = 1;
    bool conservative = false;
  } c;
  LawOptions c_law;
  cer->add_option("--b", c.b)->capture_default_str();
  cer->add_option("--s", c.s)->capture_default_str();
  cer->add_option("--beta", c.beta)->capture_default_str();
  cer->add_option("--h", c.h)->capture_default_str();
  cer->add_option("--k", c.k, "fix k (0 = search)");
  cer->add_option("--n", c.n, "fix n (0 = search)");
  cer->add_option("--pool", c.pool, "population size for the variance estimate")
      ->capture_default_str();
  cer->add_option("--trials", c.trials, "Monte Carlo groups for p_good")
      ->capture_default_str();
  cer->add_option("--seed", c.seed)->capture_default_str();
  cer->add_option("--max-k-tries", c.max_k_tries)->capture_default_str();
  cer->add_option("--n-window", c.n_window)->capture_default_str();
  cer->add_flag("--conservative", c.conservative,
                "subtract 3 sigma from p_good, add 3 sigma to the variance, "
                "use E[i1]+1 gap weights");
  c_law.attach(cer);

  // oracle-check
  auto* orc = subcommand("oracle-check",
                                 "lattice enumeration vs recursion cross-check");
  struct {
    std::uint64_t draws = 100, seed = 1;
    double tol = 1e-12;
  } o;
  orc->add_option("--draws", o.draws)->capture_default_str();
  orc->add_option("--seed", o.seed)->capture_default_str();
  orc->add_option("--tol", o.tol)->capture_default_str();

  // fit-singularity
  auto* fit = subcommand("fit-singularity",
                                 "essential-singularity rate fit at b = s");
  struct {
    int s = 2, points = 13;
    double eps_lo = 0.03, eps_hi = 0.15;
  } f;
  fit->add_option("--s", f.s)->capture_default_str();
  fit->add_option("--eps-lo", f.eps_lo)->capture_default_str();
  fit->add_option("--eps-hi", f.eps_hi)->capture_default_str();
  fit->add_option("--points", f.points)->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("hpin");
  for (const auto& s : args) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    std::vector<ResultRecord> records;

    if (*ann) {
      ModelParams p{a.b, a.s, 0.0, a.h};
      const FreeEnergyValue fv = annealed_free_energy(p, a.tol, a.max_levels);
      ResultRecord rec;
      base_fields(rec, "annealed");
      rec.add("b", std::int64_t(a.b))
          .add("s", std::int64_t(a.s))
          .add("h", a.h)
          .add("tol", a.tol)
          .add("max_levels", std::int64_t(a.max_levels))
          .add("value", fv.value)
          .add("levels_used", std::int64_t(fv.levels_used))
          .add("converged", fv.converged)
          .add("phase", std::string(fv.phase == Phase::Localized ? "localized"
                                                                 : "delocalized"));
      records.push_back(std::move(rec));
    } else if (*que) {
      const DisorderLaw law = q_law.build();
      ModelParams p{q.b, q.s, q.beta, 0.0};
      p.validate();
      std::vector<double> hs = q.h;
      std::sort(hs.begin(), hs.end());
      for (double h : hs) {
        p.h = h;
        const FreeEnergyEstimate est =
            quenched_free_energy(p, law, q.pool, q.levels, q.seed, threads);
        records.push_back(quenched_record(p, q_law, q.pool, q.levels, q.seed, est));
      }
    } else if (*scn) {
      const DisorderLaw law = sc_law.build();
      ModelParams p{sc.b, sc.s, sc.beta, 0.0};
      p.validate();
      const double h_star =
          critical_point_scan(p, law, sc.pool, sc.levels, sc.seed, sc.h_lo,
                              sc.h_hi, sc.threshold, threads);
      ResultRecord rec;
      base_fields(rec, "scan");
      rec.add("b", std::int64_t(sc.b))
          .add("s", std::int64_t(sc.s))
          .add("beta", sc.beta)
          .add("law", sc_law.law)
          .add("pool", std::uint64_t(sc.pool))
          .add("levels", std::int64_t(sc.levels))
          .add("seed", std::uint64_t(sc.seed))
          .add("h_lo", sc.h_lo)
          .add("h_hi", sc.h_hi)
          .add("threshold", sc.threshold)
          .add("h_star", h_star);
      records.push_back(std::move(rec));
    } else if (*wlk) {
      const int b = w.b == 0 ? w.s : w.b;
      const WalkTables t = build_q_table_general(b, w.s, w.n);
      for (int lev = 0; lev <= w.n; ++lev) {
        ResultRecord rec;
        base_fields(rec, "walkprob");
        rec.add("b", std::int64_t(b))
            .add("s", std::int64_t(w.s))
            .add("level", std::int64_t(lev))
            .add("q", t.q[lev]);
        records.push_back(std::move(rec));
      }
    } else if (*cer) {
      const DisorderLaw law = c_law.build();
      ModelParams p{c.b, c.s, c.beta, c.h};
      p.validate();
      std::optional<Certificate> cert;
      if (c.k > 0 && c.n > 0) {
        cert = lower_bound(p, law, c.k, c.n, c.pool, c.trials, c.seed,
                           c.conservative);
        if (!cert->cond15_ok)
          std::cerr << "warning: variance condition fails at (k,n)=(" << c.k
                    << "," << c.n
                    << "); the p_good >= 1/2 guarantee is void\n";
      } else if (c.k > 0 || c.n > 0) {
        throw std::invalid_argument("certify: give both --k and --n, or neither");
      } else {
        cert = search_certificate(p, law, c.pool, c.trials, c.seed,
                                  c.conservative, c.max_k_tries, c.n_window);
        if (!cert)
          throw std::runtime_error(
              "certify: no certificate found in the search range");
      }
      ResultRecord rec;
      base_fields(rec, "certify");
      rec.add("b", std::int64_t(c.b))
          .add("s", std::int64_t(c.s))
          .add("beta", c.beta)
          .add("h", c.h)
          .add("law", c_law.law)
          .add("pool", std::uint64_t(c.pool))
          .add("trials", std::uint64_t(c.trials))
          .add("seed", std::uint64_t(c.seed))
          .add("conservative", cert->conservative)
          .add("k", std::int64_t(cert->k))
          .add("n", std::int64_t(cert->n))
          .add("r_k", cert->r_k)
          .add("var_k", cert->var_k)
          .add("var_std_err", cert->var_std_err)
          .add("p_good", cert->p_good)
          .add("p_good_std_err", cert->p_good_std_err)
          .add("mean_first_good", cert->mean_first_good)
          .add("cond15_ok", cert->cond15_ok)
          .add("log_pkn", cert->log_pkn)
          .add("log_qn", cert->log_qn)
          .add("bound", cert->bound);
      records.push_back(std::move(rec));
    } else if (*orc) {
      const DisorderLaw law = DisorderLaw::standard_gaussian();
      const RngStream root = RngStream::root(o.seed);
      bool all_ok = true;
      const std::pair<int, int> pairs[] = {{2, 2}, {3, 2}, {2, 3}};
      std::uint64_t case_id = 0;
      for (auto [b, s] : pairs) {
        for (int n = 0; n <= 3; ++n) {
          const DiamondLattice lat = diamond_lattice(b, s, n);
          ModelParams p{b, s, 1.0, 0.3};
          std::size_t leaves = 1;
          for (int m = 0; m < n; ++m) leaves *= s;
          double max_rel = 0.0;
          for (std::uint64_t d = 0; d < o.draws; ++d) {
            RngStream rng = root.child(case_id).child(d);
            std::vector<double> omega(leaves);
            for (auto& x : omega) x = rng.next_normal();
            std::vector<double> leaf_logs(leaves);
            const double lm = law.log_m(p.beta);
            for (std::size_t i = 0; i < leaves; ++i)
              leaf_logs[i] = p.beta * omega[i] + p.h - lm;
            const double via_lattice = enumerate_partition(lat, omega, p, law);
            const double via_recursion = combine_tree(leaf_logs, b, s);
            max_rel = std::max(max_rel,
                               std::abs(std::expm1(via_lattice - via_recursion)));
          }
          const WalkTables t = build_q_table_general(b, s, n);
          const double escape = enumerate_escape_probability(lat);
          const bool ok = max_rel <= o.tol && std::abs(escape - t.q[n]) <= 1e-15;
          all_ok = all_ok && ok;
          ResultRecord rec;
          base_fields(rec, "oracle-check");
          rec.add("b", std::int64_t(b))
              .add("s", std::int64_t(s))
              .add("n", std::int64_t(n))
              .add("draws", std::uint64_t(o.draws))
              .add("seed", std::uint64_t(o.seed))
              .add("max_rel_err", max_rel)
              .add("trajectories", std::uint64_t(lat.trajectories))
              .add("escape_prob", escape)
              .add("q_expected", t.q[n])
              .add("ok", ok);
          records.push_back(std::move(rec));
          ++case_id;
        }
      }
      emit(records, csv_path, json_path);
      return all_ok ? 0 : 1;
    } else if (*fit) {
      if (f.points < 2) throw std::invalid_argument("fit-singularity: points >= 2");
      ModelParams p{f.s, f.s, 0.0, 0.0};
      std::vector<double> grid(f.points);
      for (int i = 0; i < f.points; ++i)
        grid[i] = f.eps_lo + (f.eps_hi - f.eps_lo) * i / (f.points - 1);
      const SingularityFit sf = fit_singularity(p, grid);
      ResultRecord rec;
      base_fields(rec, "fit-singularity");
      rec.add("s", std::int64_t(f.s))
          .add("eps_lo", f.eps_lo)
          .add("eps_hi", f.eps_hi)
          .add("points", std::int64_t(f.points))
          .add("slope", sf.slope)
          .add("intercept", sf.intercept)
          .add("max_rel_residual", sf.max_rel_residual)
          .add("target_rate", 2.0 * std::log(double(f.s)) / (f.s - 1));
      records.push_back(std::move(rec));
    }

    emit(records, csv_path, json_path);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hpin
