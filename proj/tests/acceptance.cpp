// End-to-end acceptance suite. Each criterion prints a single PASS/FAIL line
// with its elapsed time; the process exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dpsynth/baselines.hpp"
#include "dpsynth/copula.hpp"
#include "dpsynth/dp.hpp"
#include "dpsynth/eval.hpp"
#include "dpsynth/kernels.hpp"
#include "dpsynth/marginals.hpp"
#include "dpsynth/npc.hpp"
#include "dpsynth/pipeline.hpp"
#include "dpsynth/stats.hpp"
#include "dpsynth/table.hpp"

namespace fs = std::filesystem;
using namespace dpsynth;

namespace {

int g_failures = 0;

class Criterion {
 public:
  Criterion(int number, const char* name) : number_(number), name_(name) {
    start_ = std::chrono::steady_clock::now();
  }
  void finish(bool ok, double time_limit_s = 0.0) {
    double elapsed = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start_)
                         .count();
    bool in_time = time_limit_s <= 0.0 || elapsed <= time_limit_s;
    bool pass = ok && in_time;
    if (!pass) ++g_failures;
    std::printf("[%s] criterion %2d: %-24s (%.2f s%s)\n", pass ? "PASS" : "FAIL",
                number_, name_, elapsed,
                in_time ? "" : ", over time limit");
    std::fflush(stdout);
  }

 private:
  int number_;
  const char* name_;
  std::chrono::steady_clock::time_point start_;
};

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return 1e300;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::fabs(a[i] - b[i]));
  }
  return m;
}

// Spearman rank correlation with average ranks for ties.
std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    double r = (double(i) + double(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto rx = average_ranks(x);
  auto ry = average_ranks(y);
  double n = double(x.size());
  double mx = 0, my = 0;
  for (double v : rx) mx += v;
  for (double v : ry) my += v;
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

// Correlated mixed fixture used by the trend criteria: two near-comonotone
// continuous numeric columns plus a categorical column derived from the first
// numeric one.
Table trend_fixture(std::size_t n, std::uint64_t seed) {
  Table t;
  t.schema.columns.push_back({"x", ColumnKind::Numeric, {}, 0.0, 1.0});
  t.schema.columns.push_back({"y", ColumnKind::Numeric, {}, 0.0, 1.0});
  std::vector<std::string> cats;
  for (int s = 0; s < 8; ++s) cats.push_back("c" + std::to_string(s));
  t.schema.columns.push_back({"c", ColumnKind::Categorical, cats, 0, 0});
  t.numeric.resize(3);
  t.categorical.resize(3);
  Rng gen(seed);
  // y tracks x within a thin band and the category is a fine coarsening of x,
  // so attack success depends on how well the generator resolves both
  for (std::size_t i = 0; i < n; ++i) {
    double x = gen.uniform();
    double y = std::clamp(x + 0.01 * (gen.uniform() - 0.5), 0.0, 1.0);
    t.numeric[0].push_back(x);
    t.numeric[1].push_back(y);
    int slice = std::min(7, int(x * 8.0));
    t.categorical[2].push_back("c" + std::to_string(slice));
  }
  return t;
}

// Numeric feature plus binary label split at 0.4; the imbalanced label share
// makes a shuffled-label classifier collapse onto constant predictions
// instead of rediscovering the threshold through its bias term.
Table threshold_fixture(std::size_t n, std::uint64_t seed) {
  Table t;
  t.schema.columns.push_back({"x", ColumnKind::Numeric, {}, 0.0, 1.0});
  t.schema.columns.push_back({"y", ColumnKind::Categorical, {"n", "p"}, 0, 0});
  t.numeric.resize(2);
  t.categorical.resize(2);
  Rng gen(seed);
  for (std::size_t i = 0; i < n; ++i) {
    double v = gen.uniform();
    t.numeric[0].push_back(v);
    t.categorical[1].push_back(v < 0.4 ? "n" : "p");
  }
  return t;
}

double mia_rate(const Table& train, const Table& synthetic,
                std::size_t n_targets, double tolerance) {
  std::vector<std::size_t> idx(n_targets);
  std::iota(idx.begin(), idx.end(), 0);
  Table targets = train.select_rows(idx);
  auto ranges = gower_ranges(train);
  AttackOutcome out = mia_attack(targets, synthetic, tolerance, ranges);
  return double(out.successes()) / double(n_targets);
}

void criterion_1() {
  Criterion c(1, "zero-noise equivalence");
  bool ok = true;
  std::vector<std::vector<double>> cols = {
      {1, 1, 2, 4, 4, 7, 9, 9, 9, 12}, {0, 1, 0, 1, 2, 2, 1, 0, 1, 2},
      {5, 4, 3, 2, 1, 5, 4, 3, 2, 1}};
  std::vector<std::size_t> bins = {4, 3, 5};

  NpcModel plain = npc_fit(cols, bins);
  Rng rng(1);
  NpcModel dp = dpnpc_fit(cols, bins, 1.0, rng, ZeroNoise{});
  for (std::size_t i = 0; i < cols.size(); ++i) {
    ok = ok && dp.cdfs[i].support == plain.cdfs[i].support;
    ok = ok && max_abs_diff(dp.cdfs[i].cdf, plain.cdfs[i].cdf) < 1e-9;
    ok = ok &&
         max_abs_diff(dp.tables[i].cumulative, plain.tables[i].cumulative) < 1e-9;
    ok = ok && max_abs_diff(dp.ranks[i], plain.ranks[i]) < 1e-9;
  }

  Rng rng2(2);
  DpCopulaModel cop = dp_copula_fit(cols, 1.0, 0.5, rng2, ZeroNoise{});
  for (std::size_t i = 0; i < cols.size(); ++i) {
    StepCdf ref = empirical_cdf(cols[i]);
    ok = ok && cop.marginals[i].support == ref.support;
    ok = ok && max_abs_diff(cop.marginals[i].cdf, ref.cdf) < 1e-9;
  }
  c.finish(ok, 5.0);
}

void criterion_2() {
  Criterion c(2, "budget accounting");
  bool ok = true;
  const std::vector<double> epsilons = {0.1, 0.5, 1.0, 5.0, 10.0};
  const std::vector<std::size_t> widths = {2, 3, 5, 8};
  for (double eps : epsilons) {
    for (std::size_t p : widths) {
      std::vector<std::vector<double>> cols(
          p, std::vector<double>{1, 2, 3, 4, 5, 6});
      std::vector<std::size_t> bins(p, 3);

      Rng r1(7);
      NpcModel npc = dpnpc_fit(cols, bins, eps, r1);
      ok = ok && npc.ledger.entries().size() == 2 * p;
      for (const auto& e : npc.ledger.entries()) {
        ok = ok && std::fabs(e.epsilon - eps / double(2 * p)) < 1e-12;
      }
      ok = ok && std::fabs(npc.ledger.spent() - eps) < 1e-9;

      Rng r2(7);
      DpCopulaModel cop = dp_copula_fit(cols, eps, 0.5, r2);
      ok = ok && cop.ledger.entries().size() == p + 1;
      ok = ok && std::fabs(cop.ledger.spent() - eps) < 1e-9;

      Rng r3(7);
      DpHistogramModel hist = dp_histogram_fit(cols, eps, 3, r3);
      ok = ok && hist.ledger.entries().size() == p;
      for (const auto& e : hist.ledger.entries()) {
        ok = ok && std::fabs(e.epsilon - eps / double(p)) < 1e-12;
      }
      ok = ok && std::fabs(hist.ledger.spent() - eps) < 1e-9;
    }
  }
  c.finish(ok, 1.0);
}

void criterion_3() {
  Criterion c(3, "dft/efpa numerics");
  bool ok = true;
  Rng gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 2 * gen.below(500) + 1;  // odd, up to 1001
    std::vector<double> h(n);
    for (auto& v : h) v = gen.uniform() * 100.0;

    auto f = dft_real(h);
    auto back = idft_real(f, n);
    ok = ok && max_abs_diff(back, h) < 1e-9;

    double eh = 0.0, ef = 0.0;
    for (double v : h) eh += v * v;
    for (double v : f) ef += v * v;
    ok = ok && std::fabs(eh - ef) / eh < 1e-9;

    std::size_t m = (n + 1) / 2;
    double eps = 0.1 + gen.uniform() * 10.0;
    ok = ok && efpa_cost(f, m, eps) == 2.0 * (2.0 * double(m) + 1.0) / eps;
  }
  c.finish(ok, 10.0);
}

void criterion_4() {
  Criterion c(4, "kendall/copula oracle");
  bool ok = true;
  Rng gen(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + gen.below(7);
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = gen.uniform();
    for (auto& v : y) v = gen.uniform();
    double net = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double s = (x[i] - x[j]) * (y[i] - y[j]);
        net += s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0);
      }
    }
    double oracle = net / (0.5 * double(n) * double(n - 1));
    ok = ok && std::fabs(kendall_tau(x, y) - oracle) < 1e-12;
  }

  Rng rng(19);
  Matrix rho(2, 2);
  rho << 1.0, 0.8, 0.8, 1.0;
  Matrix u = sample_gaussian_copula(rho, 10000, rng);
  std::vector<double> x(u.rows()), y(u.rows());
  for (Eigen::Index r = 0; r < u.rows(); ++r) {
    x[r] = u(r, 0);
    y[r] = u(r, 1);
  }
  double tau = kendall_tau(x, y);
  ok = ok && std::fabs(tau - 2.0 / M_PI * std::asin(0.8)) < 0.03;
  c.finish(ok, 30.0);
}

void criterion_5() {
  Criterion c(5, "evaluation formulas");
  bool ok = true;
  const double z = 1.9599639845400545;  // Phi^{-1}(0.975)
  const double z2 = z * z;
  for (std::size_t ns : {0ul, 125ul, 200ul, 250ul}) {
    WilsonPoint p = wilson_risk(ns, 250, 0.95);
    double na = 250.0;
    double r = (double(ns) + z2 / 2.0) / (na + z2);
    double d = z / (na + z2) *
               std::sqrt(double(ns) * (na - double(ns)) / na + z2 / 4.0);
    ok = ok && std::fabs(p.r - r) < 1e-6 && std::fabs(p.delta - d) < 1e-6;
  }

  ok = ok && std::fabs(mcc(40, 40, 10, 10) - 0.6) < 1e-12;

  Rng gen(5);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t na = 1 + gen.below(12), nb = 1 + gen.below(12);
    std::vector<double> a(na), b(nb);
    for (auto& v : a) v = double(gen.below(6));
    for (auto& v : b) v = double(gen.below(6));
    std::vector<double> pts = a;
    pts.insert(pts.end(), b.begin(), b.end());
    double brute = 0.0;
    for (double v : pts) {
      double fa = 0.0, fb = 0.0;
      for (double w : a) fa += w <= v ? 1.0 : 0.0;
      for (double w : b) fb += w <= v ? 1.0 : 0.0;
      brute = std::max(brute, std::fabs(fa / double(na) - fb / double(nb)));
    }
    ok = ok && std::fabs(ks_distance(a, b) - brute) < 1e-12;
  }
  c.finish(ok);
}

void criterion_6() {
  Criterion c(6, "q1 trend");
  Table train = trend_fixture(2000, 100);
  const std::vector<double> epsilons = {0.1, 1.0, 10.0};
  const std::vector<std::size_t> bins_grid = {10, 40, 100};
  const int n_seeds = 10;
  std::vector<std::vector<double>> cell(epsilons.size(),
                                        std::vector<double>(bins_grid.size()));
  for (std::size_t ei = 0; ei < epsilons.size(); ++ei) {
    for (std::size_t bi = 0; bi < bins_grid.size(); ++bi) {
      double total = 0.0;
      for (int s = 0; s < n_seeds; ++s) {
        GenConfig cfg;
        cfg.n_synthetic = 2000;
        cfg.bins = bins_grid[bi];
        cfg.epsilon = epsilons[ei];
        cfg.seed = 1000 + std::uint64_t(s);
        GenResult res = generate(train, ModelKind::Dpnpc, cfg);
        total += mia_rate(train, res.synthetic, 500, 0.0015);
      }
      cell[ei][bi] = total / n_seeds;
      std::printf("    q1 cell eps=%-5.1f bins=%-4zu rate=%.3f\n", epsilons[ei],
                  bins_grid[bi], cell[ei][bi]);
    }
  }
  // mean success rate per factor level, averaged over the other factor
  std::vector<double> eps_mean(epsilons.size(), 0.0);
  std::vector<double> bins_mean(bins_grid.size(), 0.0);
  for (std::size_t ei = 0; ei < epsilons.size(); ++ei) {
    for (std::size_t bi = 0; bi < bins_grid.size(); ++bi) {
      eps_mean[ei] += cell[ei][bi] / double(bins_grid.size());
      bins_mean[bi] += cell[ei][bi] / double(epsilons.size());
    }
  }
  std::vector<double> bins_levels(bins_grid.begin(), bins_grid.end());
  double rho_eps = spearman(eps_mean, epsilons);
  double rho_bins = spearman(bins_mean, bins_levels);
  std::printf("    q1 trend: spearman vs epsilon %.3f, vs bins %.3f\n", rho_eps,
              rho_bins);
  c.finish(rho_eps > 0.5 && rho_bins > 0.5, 600.0);
}

void criterion_7() {
  Criterion c(7, "fidelity trend");
  Table train = trend_fixture(2000, 100);
  const int n_seeds = 20;
  int wins = 0;
  double mean_lo = 0.0, mean_hi = 0.0;
  for (int s = 0; s < n_seeds; ++s) {
    auto run = [&](double eps) {
      GenConfig cfg;
      cfg.n_synthetic = 2000;
      cfg.bins = 40;
      cfg.epsilon = eps;
      cfg.seed = 2000 + std::uint64_t(s);
      GenResult res = generate(train, ModelKind::Dpnpc, cfg);
      Rng rng(3000 + std::uint64_t(s));
      return fidelity(train, res.synthetic, rng).avg_ks;
    };
    double lo = run(0.1), hi = run(10.0);
    mean_lo += lo;
    mean_hi += hi;
    if (hi < lo) ++wins;
  }
  mean_lo /= n_seeds;
  mean_hi /= n_seeds;
  std::printf("    fidelity trend: mean avg_ks eps=0.1 %.4f, eps=10 %.4f, "
              "wins %d/%d\n",
              mean_lo, mean_hi, wins, n_seeds);
  // 15/20 one-sided sign-test wins gives p = P(Bin(20,1/2) >= 15) ~ 0.021
  c.finish(mean_hi < mean_lo && wins >= 15, 600.0);
}

void criterion_8() {
  Criterion c(8, "baseline separation");
  const std::size_t n = 1000;
  const double rho = std::sin(0.7 * M_PI / 2.0);  // Kendall tau 0.7
  std::vector<std::vector<double>> cols(2, std::vector<double>(n));
  Rng gen(8);
  for (std::size_t i = 0; i < n; ++i) {
    double z1 = normal_quantile(gen.uniform());
    double z2 = rho * z1 + std::sqrt(1.0 - rho * rho) * normal_quantile(gen.uniform());
    cols[0][i] = z1;
    cols[1][i] = z2;
  }
  double tau_train = kendall_tau(cols[0], cols[1]);
  bool fixture_ok = std::fabs(tau_train - 0.7) < 0.05;

  double tau_npc = 0.0, tau_hist = 0.0;
  const int n_seeds = 10;
  for (int s = 0; s < n_seeds; ++s) {
    Rng r1(4000 + std::uint64_t(s));
    NpcModel m = dpnpc_fit(cols, {40, 40}, 10.0, r1);
    auto syn = npc_sample(m, 1000, r1);
    tau_npc += kendall_tau(syn[0], syn[1]);

    Rng r2(5000 + std::uint64_t(s));
    auto hist = dp_histogram_generate(cols, 10.0, 40, 1000, r2);
    tau_hist += kendall_tau(hist[0], hist[1]);
  }
  tau_npc /= n_seeds;
  tau_hist /= n_seeds;
  std::printf("    baseline separation: train tau %.3f, dpnpc %.3f, dphist %.3f\n",
              tau_train, tau_npc, tau_hist);
  c.finish(fixture_ok && tau_npc >= 0.3 && std::fabs(tau_hist) < 0.05);
}

void criterion_9() {
  Criterion c(9, "utility harness sanity");
  Table train = threshold_fixture(400, 9);
  Table test = threshold_fixture(400, 10);
  UtilityReport same = utility_score(train, train, test, "y");
  bool ok = same.mcc_syn == same.mcc_real;

  double mean_abs = 0.0;
  const int n_seeds = 20;
  for (int s = 0; s < n_seeds; ++s) {
    Table shuffled = train;
    Rng rng(6000 + std::uint64_t(s));
    std::shuffle(shuffled.categorical[1].begin(), shuffled.categorical[1].end(),
                 rng.engine());
    UtilityReport rep = utility_score(train, shuffled, test, "y");
    mean_abs += std::fabs(rep.mcc_syn);
  }
  mean_abs /= n_seeds;
  std::printf("    utility sanity: mcc_real %.4f, shuffled mean |mcc| %.4f\n",
              same.mcc_real, mean_abs);
  c.finish(ok && mean_abs < 0.1);
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool run_cli(const std::string& args) {
  std::string cmd = std::string(DPSYNTH_CLI_PATH) + " " + args +
                    " >/dev/null 2>&1";
  return std::system(cmd.c_str()) == 0;
}

void criterion_10() {
  Criterion c(10, "cli determinism");
  fs::path work = fs::temp_directory_path() / "dpsynth-acceptance";
  fs::remove_all(work);
  fs::create_directories(work);
  Table fixture = trend_fixture(600, 11);
  fs::path input = work / "input.csv";
  write_csv(fixture, input.string());

  bool ok = true;
  std::string gen_flags = "generate --input " + input.string() +
                          " --model dpnpc --epsilon 1 --bins 20 --n 300 --seed 7";
  ok = ok && run_cli(gen_flags + " --out " + (work / "gen_a").string());
  ok = ok && run_cli(gen_flags + " --out " + (work / "gen_b").string());
  for (const char* f : {"synthetic.csv", "model.json", "ledger.json",
                        "schema.json"}) {
    std::string a = read_bytes(work / "gen_a" / f);
    ok = ok && !a.empty() && a == read_bytes(work / "gen_b" / f);
  }

  std::string eval_flags =
      "evaluate --input " + input.string() +
      " --model dpnpc --epsilon 1 --bins 20 --n 300 --seed 7 --attacks 50 "
      "--tolerance 0.05";
  ok = ok && run_cli(eval_flags + " --out " + (work / "eval_a").string());
  ok = ok && run_cli(eval_flags + " --out " + (work / "eval_b").string());
  for (const char* f : {"ledger.json", "metrics.csv"}) {
    std::string a = read_bytes(work / "eval_a" / f);
    ok = ok && !a.empty() && a == read_bytes(work / "eval_b" / f);
  }
  // report.json carries wall-clock timings; everything else must match
  // byte for byte.
  auto strip_runtime = [](const fs::path& p) {
    auto doc = nlohmann::ordered_json::parse(read_bytes(p));
    doc.erase("runtime_seconds");
    return doc.dump(2);
  };
  ok = ok && strip_runtime(work / "eval_a" / "report.json") ==
                 strip_runtime(work / "eval_b" / "report.json");

  fs::remove_all(work);
  c.finish(ok);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures > 0) {
    std::printf("%d criteria failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
