// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  argv[1] = path to the wtp CLI binary, argv[2] = data directory.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wtp/closedform.hpp"
#include "wtp/entropy.hpp"
#include "wtp/estimators.hpp"
#include "wtp/numeric.hpp"
#include "wtp/optimizer.hpp"
#include "wtp/sponge.hpp"

using namespace wtp;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %2d %-34s %s\n", ok ? "PASS" : "FAIL", criterion, name.c_str(),
              detail.c_str());
  if (!ok) ++failures;
}

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

SpongeSpec mcmullen() {
  return SpongeSpec::create({2, 3}, {{0, 0}, {0, 2}, {1, 1}});
}

double power_iteration_log_radius(const std::vector<std::vector<double>>& m) {
  const int n = static_cast<int>(m.size());
  std::vector<double> v(n, 1.0);
  double lambda = 1.0;
  for (int iter = 0; iter < 1000; ++iter) {
    std::vector<double> w(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w[i] += m[i][j] * v[j];
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    lambda = norm;
    for (int i = 0; i < n; ++i) v[i] = w[i] / norm;
  }
  return std::log(lambda);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& cmd) { return std::system(cmd.c_str()); }

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "./wtp";
  const std::string data = argc > 2 ? argv[2] : "data";

  const SpongeSpec carpet = mcmullen();
  const WeightVector canon = canonical_weights(carpet);
  const CylinderPotential zero = CylinderPotential::zero(carpet);

  // 1: closed form against the independent concave optimizer
  {
    Timer t;
    const double closed = nested_pressure(carpet, canon, zero).value;
    OptimizerConfig cfg;
    cfg.seed = 1;
    const double opt = maximize_bernoulli(carpet, canon, zero, cfg).value;
    const double theta = std::log(2.0) / std::log(3.0);
    const double target = std::log(1.0 + std::pow(2.0, theta)) / std::log(2.0);
    const bool ok = std::abs(closed - opt) <= 1e-6 && std::abs(closed - target) <= 1e-9 &&
                    t.seconds() < 1.0;
    report(1, "closed form vs optimizer",
           ok, "|" + num(closed) + " - " + num(opt) + "|, target " + num(target) + ", " +
                   num(t.seconds()) + "s");
  }

  // 2: exhaustive sweep of the 63 nonempty digit subsets of the 2x3 grid
  {
    Timer t;
    std::vector<Digit> grid;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) grid.push_back({i, j});
    bool ok = true;
    std::string why = "all 63 subsets";
    for (int mask = 1; mask < 64 && ok; ++mask) {
      std::vector<Digit> digits;
      for (int b = 0; b < 6; ++b)
        if (mask >> b & 1) digits.push_back(grid[b]);
      const SpongeSpec sub = SpongeSpec::create({2, 3}, digits);
      const WeightVector a = canonical_weights(sub);
      const double dim = mcmullen_dimension(sub);
      const double nest = nested_pressure(sub, a, CylinderPotential::zero(sub)).value;
      const double box = box_dimension_closed_form(sub);
      std::set<int> col_counts;
      std::vector<int> counts(sub.alphabet_size(2), 0);
      for (int d = 0; d < sub.digit_count(); ++d) counts[sub.level_index(2, d)]++;
      for (int c : counts)
        if (c > 0) col_counts.insert(c);
      const bool balanced = col_counts.size() == 1;
      if (std::abs(dim - nest) > 1e-9) {
        ok = false;
        why = "dim != nested at mask " + std::to_string(mask);
      } else if (dim > box + 1e-12) {
        ok = false;
        why = "dim > box at mask " + std::to_string(mask);
      } else if (balanced != (std::abs(dim - box) <= 1e-9)) {
        ok = false;
        why = "equality pattern off at mask " + std::to_string(mask);
      }
    }
    ok = ok && t.seconds() < 5.0;
    report(2, "63-subset grid sweep", ok, why + ", " + num(t.seconds()) + "s");
  }

  // 3: fibre-collapse identity on random potentials
  {
    Timer t;
    std::mt19937 gen(42);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> fv(3);
      for (double& v : fv) v = unif(gen);
      worst = std::max(worst, barral_feng_identity_check(
                                  carpet, canon, CylinderPotential::create(carpet, fv)));
    }
    const bool ok = worst <= 1e-10 && t.seconds() < 1.0;
    report(3, "fibre collapse identity x100", ok,
           "worst residual " + num(worst) + ", " + num(t.seconds()) + "s");
  }

  // 4: analytic gradient against central finite differences
  {
    std::mt19937 gen(4);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const CylinderPotential f = CylinderPotential::create(carpet, {0.6, -0.3, 1.4});
    const double h = 1e-6;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> p(3);
      double sum = 0.0;
      for (double& x : p) {
        x = 0.2 + unif(gen);
        sum += x;
      }
      for (double& x : p) x /= sum;
      const ObjectiveGradient g = weighted_objective_gradient(carpet, canon, p, f);
      for (int d = 0; d < 3; ++d) {
        std::vector<double> pp = p, pm = p;
        pp[d] += h;
        pm[d] -= h;
        const double fd = (weighted_objective(carpet, canon, pp, f) -
                           weighted_objective(carpet, canon, pm, f)) /
                          (2 * h);
        worst = std::max(worst, std::abs(fd - g.g[d]) / std::max(1.0, std::abs(g.g[d])));
      }
    }
    report(4, "gradient finite differences", worst <= 1e-6, "max rel err " + num(worst));
  }

  // 5: sandwich at finite orders
  {
    Timer t;
    const NestedPressureResult nested = nested_pressure(carpet, canon, zero);
    double sum_log_alpha = 0.0;
    for (int i = 1; i <= 2; ++i)
      sum_log_alpha += std::log(static_cast<double>(carpet.alphabet_size(i)));
    bool ok = true;
    std::string why;
    for (std::int64_t n : {50, 200, 1000}) {
      const double lo = min_information_rate(carpet, canon, nested.optimal_measure, n);
      const double hi = weighted_cylinder_count(carpet, canon, n).rate +
                        sum_log_alpha / static_cast<double>(n);
      if (!(lo <= nested.value && nested.value <= hi)) {
        ok = false;
        why = "violated at n=" + std::to_string(n);
      }
      if (n == 1000) why = num(lo) + " <= " + num(nested.value) + " <= " + num(hi);
    }
    ok = ok && t.seconds() < 1.0;
    report(5, "sandwich at n=50,200,1000", ok, why + ", " + num(t.seconds()) + "s");
  }

  // 6: weighted Brin-Katok Monte Carlo
  {
    Timer t;
    const NestedPressureResult nested = nested_pressure(carpet, canon, zero);
    const double theta = std::log(2.0) / std::log(3.0);
    const double target_star = std::log(1.0 + std::pow(2.0, theta)) / std::log(2.0);
    const double target_unif =
        canon.a(1) * std::log(3.0) +
        canon.a(2) * (std::log(3.0) - (2.0 / 3) * std::log(2.0));

    const McEstimate star =
        brin_katok_mc(carpet, canon, nested.optimal_measure, 2000, 1000, 1);
    const McEstimate unif =
        brin_katok_mc(carpet, canon, BernoulliMeasure::uniform(carpet), 2000, 1000, 1);
    const bool ok_star = std::abs(star.mean - target_star) <= 4.0 * star.stderr_;
    const bool ok_unif = std::abs(unif.mean - target_unif) <= 4.0 * unif.stderr_;
    const bool ok = ok_star && ok_unif && t.seconds() < 30.0;
    report(6, "weighted Brin-Katok MC", ok,
           "optimal " + num(star.mean) + "+-4*" + num(star.stderr_) + " vs " +
               num(target_star) + "; uniform " + num(unif.mean) + "+-4*" +
               num(unif.stderr_) + " vs " + num(target_unif) + ", " + num(t.seconds()) + "s");
  }

  // 7: weighted SMB information path
  {
    Timer t;
    const BernoulliMeasure uni = BernoulliMeasure::uniform(carpet);
    const double target = bernoulli_weighted_entropy(carpet, canon, uni);
    const std::vector<int> x = sample_orbit(carpet, uni, canon.t(2, 5000), 1, 0);
    const auto path = smb_information_path(carpet, canon, uni, x, {5000});
    const double endpoint = path.back().second;
    const bool ok = std::abs(endpoint - target) <= 0.02 && t.seconds() < 10.0;
    report(7, "weighted SMB path at N=5000", ok,
           num(endpoint) + " vs " + num(target) + ", " + num(t.seconds()) + "s");
  }

  // 8: classical reductions
  {
    const WeightVector a10 = WeightVector::create({1.0, 0.0});
    std::mt19937 gen(8);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<double> fv(3);
      for (double& v : fv) v = unif(gen);
      const double nested =
          nested_pressure(carpet, a10, CylinderPotential::create(carpet, fv)).value;
      worst = std::max(worst, std::abs(nested - log_sum_exp(fv)));
    }

    // golden-mean subshift: Markov ascent against the spectral radius
    const SpongeSpec two = SpongeSpec::create({2, 3}, {{0, 0}, {1, 1}});
    const WeightVector w10 = WeightVector::create({1.0, 0.0});
    OptimizerConfig cfg;
    cfg.max_iters = 5000;
    const MarkovOptimizerResult m = maximize_markov(
        two, w10, CylinderPotential::zero(two), {{true, true}, {true, false}}, 3, cfg);
    const double oracle = power_iteration_log_radius({{1.0, 1.0}, {1.0, 0.0}});
    const double gap = std::abs(m.objective.mid() - oracle);
    report(8, "classical reduction + SFT", worst <= 1e-12 && gap <= 1e-4,
           "pressure residual " + num(worst) + ", spectral gap " + num(gap));
  }

  // 9: three-level sponge, seeded digit subset
  {
    std::vector<Digit> cells;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 5; ++l) cells.push_back({i, j, l});
    std::mt19937 gen(9235);
    std::shuffle(cells.begin(), cells.end(), gen);
    cells.resize(9);
    const SpongeSpec sponge = SpongeSpec::create({2, 3, 5}, cells);
    const WeightVector a = canonical_weights(sponge);
    const CylinderPotential z = CylinderPotential::zero(sponge);
    const double nest = nested_pressure(sponge, a, z).value;
    OptimizerConfig cfg;
    cfg.seed = 1;
    const double opt = maximize_bernoulli(sponge, a, z, cfg).value;
    bool mono = true;
    for (int drop = 0; drop < sponge.digit_count(); ++drop) {
      std::vector<Digit> digits;
      for (int d = 0; d < sponge.digit_count(); ++d)
        if (d != drop) digits.push_back(sponge.digits()[d]);
      const SpongeSpec sub = SpongeSpec::create({2, 3, 5}, digits);
      if (nested_pressure(sub, canonical_weights(sub), CylinderPotential::zero(sub)).value >
          nest + 1e-12)
        mono = false;
    }
    report(9, "k=3 sponge dual witness", std::abs(nest - opt) <= 1e-6 && mono,
           "|" + num(nest) + " - " + num(opt) + "|, deletions monotone: " +
               (mono ? "yes" : "no"));
  }

  // 10: geometric box-counting cross-check
  {
    Timer t;
    const PointCloud cloud = generate_sponge_points(carpet, 8);
    const BoxCountFit fit = box_counting_estimate(cloud, {2, 3, 4, 5, 6});
    const double target = box_dimension_closed_form(carpet);
    const bool ok = std::abs(fit.slope - target) <= 0.08 && t.seconds() < 60.0;
    report(10, "box-counting slope", ok,
           num(fit.slope) + " vs " + num(target) + ", " + num(t.seconds()) + "s");
  }

  // 11: byte-level determinism of the CLI
  {
    const std::string spec = data + "/mcmullen.json";
    const std::string base = cli + " mc --spec " + spec + " --n 400 --samples 200 --seed 5";
    bool ok = true;
    std::string why = "mc and verify byte-identical";
    if (run(base + " --out acc_mc_a.csv") != 0 || run(base + " --out acc_mc_b.csv") != 0 ||
        run(base + " --threads 4 --out acc_mc_c.csv") != 0) {
      ok = false;
      why = "mc run failed";
    } else if (slurp("acc_mc_a.csv") != slurp("acc_mc_b.csv") ||
               slurp("acc_mc_a.csv") != slurp("acc_mc_c.csv") ||
               slurp("acc_mc_a.csv").empty()) {
      ok = false;
      why = "mc outputs differ across runs/threads";
    }
    const std::string verify = cli + " verify --spec " + spec + " --seed 2";
    if (ok) {
      const int v1 = run(verify + " --out acc_v1.txt");
      const int v2 = run(verify + " --threads 4 --out acc_v2.txt");
      if (v1 != 0 || v2 != 0) {
        ok = false;
        why = "verify exited nonzero";
      } else if (slurp("acc_v1.txt") != slurp("acc_v2.txt") || slurp("acc_v1.txt").empty()) {
        ok = false;
        why = "verify outputs differ";
      }
    }
    for (const char* f : {"acc_mc_a.csv", "acc_mc_b.csv", "acc_mc_c.csv", "acc_v1.txt",
                          "acc_v2.txt"})
      std::remove(f);
    report(11, "CLI determinism", ok, why);
  }

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              failures);
  return failures == 0 ? 0 : 1;
}
