#include "wtp/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wtp/errors.hpp"
#include "wtp/philox.hpp"

namespace wtp {

double weighted_objective(const SpongeSpec& spec, const WeightVector& a,
                          const std::vector<double>& p, const CylinderPotential& f) {
  double value = 0.0;
  for (int level = 1; level <= spec.k(); ++level) {
    const double w = a.a(level);
    if (w == 0.0) continue;
    const std::vector<double> q = pushforward(spec, p, level);
    double h = 0.0;
    for (double x : q)
      if (x > 0.0) h -= x * std::log(x);
    value += w * h;
  }
  for (int d = 0; d < spec.digit_count(); ++d) value += p[d] * f(d);
  return value;
}

ObjectiveGradient weighted_objective_gradient(const SpongeSpec& spec, const WeightVector& a,
                                              const std::vector<double>& p,
                                              const CylinderPotential& f) {
  ObjectiveGradient out;
  out.g.assign(spec.digit_count(), 0.0);
  for (int d = 0; d < spec.digit_count(); ++d) out.g[d] = f(d);
  for (int level = 1; level <= spec.k(); ++level) {
    const double w = a.a(level);
    if (w == 0.0) continue;
    const std::vector<double> q = pushforward(spec, p, level);
    for (int d = 0; d < spec.digit_count(); ++d) {
      const double qd = q[spec.level_index(level, d)];
      if (qd > 0.0) {
        out.g[d] -= w * (1.0 + std::log(qd));
      } else {
        out.g[d] = std::numeric_limits<double>::infinity();
        out.boundary = true;
      }
    }
  }
  return out;
}

namespace {

double kkt_residual(const std::vector<double>& p, const std::vector<double>& g,
                    const std::vector<char>& active) {
  double mean = 0.0;
  for (std::size_t d = 0; d < p.size(); ++d)
    if (active[d]) mean += p[d] * g[d];
  double r = 0.0;
  for (std::size_t d = 0; d < p.size(); ++d)
    if (active[d]) r = std::max(r, std::abs(g[d] - mean));
  return r;
}

std::vector<int> support_of(const std::vector<double>& p, double tol = 1e-9) {
  std::vector<int> s;
  for (std::size_t d = 0; d < p.size(); ++d)
    if (p[d] > tol) s.push_back(static_cast<int>(d));
  return s;
}

OptimizerResult ascend(const SpongeSpec& spec, const WeightVector& a,
                       const CylinderPotential& f, const OptimizerConfig& cfg,
                       std::uint64_t seed) {
  const int n = spec.digit_count();
  OptimizerResult res;
  res.p.assign(n, 1.0 / n);
  if (cfg.jitter > 0.0) {
    Philox rng(seed, 0);
    std::vector<double> dir(n);
    double sum = 0.0;
    for (int d = 0; d < n; ++d) {
      dir[d] = -std::log1p(-rng.next_double());  // Exp(1), Dirichlet(1) after normalizing
      sum += dir[d];
    }
    for (int d = 0; d < n; ++d) res.p[d] = (1.0 - cfg.jitter) / n + cfg.jitter * dir[d] / sum;
  }

  std::vector<char> active(n, 1);
  double value = weighted_objective(spec, a, res.p, f);
  if (cfg.keep_trace) res.trace.push_back(value);

  double best_kkt = std::numeric_limits<double>::infinity();
  int stagnant = 0;

  for (res.iterations = 0; res.iterations < cfg.max_iters; ++res.iterations) {
    const ObjectiveGradient grad = weighted_objective_gradient(spec, a, res.p, f);
    res.kkt_residual = kkt_residual(res.p, grad.g, active);
    if (res.kkt_residual <= cfg.kkt_tol) {
      res.converged = true;
      break;
    }
    // float-level limit cycle: the residual stops improving well above the
    // tolerance once objective gains round to zero
    if (res.kkt_residual < best_kkt * (1.0 - 1e-3)) {
      best_kkt = res.kkt_residual;
      stagnant = 0;
    } else if (++stagnant >= 300) {
      break;
    }

    double gmax = -std::numeric_limits<double>::infinity();
    for (int d = 0; d < n; ++d)
      if (active[d]) gmax = std::max(gmax, grad.g[d]);

    double eta = cfg.initial_step;
    std::vector<double> cand(n, 0.0);
    double cand_value = -std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int halving = 0; halving < 80; ++halving) {
      double norm = 0.0;
      for (int d = 0; d < n; ++d) {
        cand[d] = active[d] ? res.p[d] * std::exp(eta * (grad.g[d] - gmax)) : 0.0;
        norm += cand[d];
      }
      for (int d = 0; d < n; ++d) cand[d] /= norm;
      cand_value = weighted_objective(spec, a, cand, f);
      if (cfg.step_rule == StepRule::Fixed || cand_value >= value) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;  // step collapsed; KKT residual reports where we stand

    res.p = cand;
    value = cand_value;
    // entries that underflow leave the support for good
    double renorm = 0.0;
    for (int d = 0; d < n; ++d) {
      if (active[d] && res.p[d] < 1e-300) {
        res.p[d] = 0.0;
        active[d] = 0;
      }
      renorm += res.p[d];
    }
    if (renorm != 1.0)
      for (int d = 0; d < n; ++d) res.p[d] /= renorm;
    if (cfg.keep_trace) res.trace.push_back(value);
  }

  res.value = weighted_objective(spec, a, res.p, f);
  const ObjectiveGradient grad = weighted_objective_gradient(spec, a, res.p, f);
  res.kkt_residual = kkt_residual(res.p, grad.g, active);
  if (res.kkt_residual <= cfg.kkt_tol) res.converged = true;
  res.support = support_of(res.p);
  return res;
}

}  // namespace

OptimizerResult maximize_bernoulli(const SpongeSpec& spec, const WeightVector& a,
                                   const CylinderPotential& f, const OptimizerConfig& cfg) {
  if (a.k() != spec.k()) throw ValidationError("optimizer: weight arity mismatch");
  if (cfg.max_iters < 1 || cfg.kkt_tol <= 0.0)
    throw ValidationError("optimizer: bad config");

  OptimizerResult res = ascend(spec, a, f, cfg, cfg.seed);

  // flat directions show up as equal values over different supports
  OptimizerResult alt = ascend(spec, a, f, cfg, cfg.seed ^ 0x9E3779B97F4A7C15ULL);
  if (std::abs(alt.value - res.value) <= 1e-10 && alt.support != res.support)
    res.tie_supports.push_back(alt.support);
  return res;
}

namespace {

struct RowParam {
  int row;
  std::vector<int> targets;  // allowed columns, >= 2 of them
};

struct MarkovProblem {
  const SpongeSpec* spec;
  const WeightVector* a;
  const CylinderPotential* f;
  const std::vector<std::vector<bool>>* allowed;
  std::int64_t block_n;
  double budget;
  std::vector<RowParam> params;          // rows with free logits
  std::vector<std::vector<double>> base;  // fixed part: rows with one target

  std::vector<std::vector<double>> matrix(const std::vector<double>& theta) const {
    std::vector<std::vector<double>> P = base;
    std::size_t at = 0;
    for (const RowParam& rp : params) {
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < rp.targets.size(); ++j)
        mx = std::max(mx, theta[at + j]);
      double sum = 0.0;
      for (std::size_t j = 0; j < rp.targets.size(); ++j)
        sum += std::exp(theta[at + j] - mx);
      for (std::size_t j = 0; j < rp.targets.size(); ++j)
        P[rp.row][rp.targets[j]] = std::exp(theta[at + j] - mx) / sum;
      at += rp.targets.size();
    }
    return P;
  }

  EntropyBracket bracket(const std::vector<std::vector<double>>& P,
                         const std::vector<double>& pi) const {
    MarkovMeasure m = MarkovMeasure::create(*spec, P, pi);
    EntropyBracket b = markov_weighted_entropy(*spec, *a, m, block_n, budget);
    double integral = 0.0;
    for (int d = 0; d < spec->digit_count(); ++d) integral += pi[d] * (*f)(d);
    b.lower += integral;
    b.upper += integral;
    return b;
  }

  double objective(const std::vector<double>& theta) const {
    const auto P = matrix(theta);
    return bracket(P, stationary_distribution(P)).mid();
  }
};

}  // namespace

MarkovOptimizerResult maximize_markov(const SpongeSpec& spec, const WeightVector& a,
                                      const CylinderPotential& f,
                                      const std::vector<std::vector<bool>>& allowed,
                                      std::int64_t block_n, const OptimizerConfig& cfg,
                                      bool tie_rows, double budget) {
  const int n = spec.digit_count();
  if (cfg.max_iters < 1 || cfg.kkt_tol <= 0.0)
    throw ValidationError("optimizer: bad config");
  if (static_cast<int>(allowed.size()) != n)
    throw ValidationError("markov optimizer: allowed relation size mismatch");
  bool full_shift = true;
  for (const auto& row : allowed) {
    if (static_cast<int>(row.size()) != n)
      throw ValidationError("markov optimizer: ragged allowed relation");
    int cnt = 0;
    for (bool b : row) cnt += b ? 1 : 0;
    if (cnt == 0) throw ValidationError("markov optimizer: row with no allowed transition");
    if (cnt != n) full_shift = false;
  }

  MarkovOptimizerResult out;
  out.witness_only = !full_shift;

  if (tie_rows) {
    if (!full_shift)
      throw ValidationError("markov optimizer: tied rows require the full shift");
    const OptimizerResult b = maximize_bernoulli(spec, a, f, cfg);
    const BernoulliMeasure bm = BernoulliMeasure::create(spec, b.p);
    out.transition.assign(n, b.p);
    out.stationary = b.p;
    const double h = bernoulli_weighted_entropy(spec, a, bm);
    double integral = 0.0;
    for (int d = 0; d < n; ++d) integral += b.p[d] * f(d);
    out.objective = {h + integral, h + integral, block_n};
    out.grad_residual = b.kkt_residual;
    out.iterations = b.iterations;
    out.converged = b.converged;
    return out;
  }

  MarkovProblem prob{&spec, &a, &f, &allowed, block_n, budget, {}, {}};
  prob.base.assign(n, std::vector<double>(n, 0.0));
  int param_count = 0;
  for (int u = 0; u < n; ++u) {
    std::vector<int> targets;
    for (int v = 0; v < n; ++v)
      if (allowed[u][v]) targets.push_back(v);
    if (targets.size() == 1) {
      prob.base[u][targets[0]] = 1.0;
    } else {
      param_count += static_cast<int>(targets.size());
      prob.params.push_back({u, std::move(targets)});
    }
  }

  std::vector<double> theta(param_count, 0.0);  // uniform rows
  double value = prob.objective(theta);
  const double grad_tol = std::max(cfg.kkt_tol, 1e-6);
  const double fd_step = 1e-5;

  for (out.iterations = 0; out.iterations < cfg.max_iters; ++out.iterations) {
    std::vector<double> grad(param_count);
    double gmax = 0.0;
    for (int j = 0; j < param_count; ++j) {
      std::vector<double> tp = theta, tm = theta;
      tp[j] += fd_step;
      tm[j] -= fd_step;
      grad[j] = (prob.objective(tp) - prob.objective(tm)) / (2.0 * fd_step);
      gmax = std::max(gmax, std::abs(grad[j]));
    }
    out.grad_residual = gmax;
    if (gmax <= grad_tol) {
      out.converged = true;
      break;
    }
    double eta = cfg.initial_step / std::max(1.0, gmax);
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      std::vector<double> cand = theta;
      for (int j = 0; j < param_count; ++j)
        cand[j] = std::clamp(cand[j] + eta * grad[j], -40.0, 40.0);
      const double cv = prob.objective(cand);
      if (cv > value || cfg.step_rule == StepRule::Fixed) {
        theta = std::move(cand);
        value = cv;
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;
  }

  out.transition = prob.matrix(theta);
  out.stationary = stationary_distribution(out.transition);
  out.objective = prob.bracket(out.transition, out.stationary);
  return out;
}

}  // namespace wtp
