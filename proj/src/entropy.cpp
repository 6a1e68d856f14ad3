#include "wtp/entropy.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "wtp/errors.hpp"

namespace wtp {

double shannon_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x < 0.0) throw ValidationError("entropy: negative probability");
    if (x > 0.0) h -= x * std::log(x);
  }
  return h < 0.0 ? 0.0 : h;
}

double bernoulli_weighted_entropy(const SpongeSpec& spec, const WeightVector& a,
                                  const BernoulliMeasure& p) {
  if (a.k() != spec.k()) throw ValidationError("weighted entropy: weight arity mismatch");
  double h = 0.0;
  for (int level = 1; level <= spec.k(); ++level) {
    if (a.a(level) == 0.0) continue;
    h += a.a(level) * shannon_entropy(pushforward(spec, p, level));
  }
  return h;
}

double markov_entropy_rate(const MarkovMeasure& m) {
  double h = 0.0;
  const int n = m.state_count();
  for (int u = 0; u < n; ++u) {
    double row = 0.0;
    for (int v = 0; v < n; ++v) {
      const double t = m.transition()[u][v];
      if (t > 0.0) row -= t * std::log(t);
    }
    h += m.stationary()[u] * row;
  }
  return h < 0.0 ? 0.0 : h;
}

namespace {

// Depth-first enumeration of observation blocks with exact forward vectors.
// At depths `short_depth` / `long_depth` the block probability (the mass of
// the current forward vector) feeds the corresponding block-entropy sum.
struct BlockEntropyScan {
  const std::vector<std::vector<double>>* transition;
  const std::vector<int>* obs;  // state -> observed symbol
  int symbols;
  int short_depth;
  int long_depth;
  double h_short = 0.0;
  double h_long = 0.0;

  void run(const std::vector<double>& alpha, int depth) {
    if (depth == short_depth || depth == long_depth) {
      double mass = 0.0;
      for (double v : alpha) mass += v;
      if (mass > 0.0) {
        if (depth == short_depth) h_short -= mass * std::log(mass);
        if (depth == long_depth) h_long -= mass * std::log(mass);
      }
      if (depth == long_depth) return;
    }
    const int n = static_cast<int>(alpha.size());
    for (int y = 0; y < symbols; ++y) {
      std::vector<double> next(n, 0.0);
      bool live = false;
      for (int x = 0; x < n; ++x) {
        if (alpha[x] == 0.0) continue;
        const std::vector<double>& row = (*transition)[x];
        for (int x2 = 0; x2 < n; ++x2) {
          if (row[x2] > 0.0 && (*obs)[x2] == y) {
            next[x2] += alpha[x] * row[x2];
            live = true;
          }
        }
      }
      if (live) run(next, depth + 1);
    }
  }
};

}  // namespace

EntropyBracket hidden_marginal_entropy_bounds(const MarkovMeasure& m, const SpongeSpec& spec,
                                              int level, std::int64_t n, double budget) {
  if (level < 1 || level > spec.k()) throw ValidationError("entropy bounds: level out of range");
  if (n < 1) throw ValidationError("entropy bounds: block length must be >= 1");
  const int states = m.state_count();
  const int symbols = spec.alphabet_size(level);

  // injective projection: the observed process is the chain itself
  if (symbols == states) {
    const double h = markov_entropy_rate(m);
    return {h, h, n};
  }

  const double cost = std::pow(static_cast<double>(symbols), static_cast<double>(n + 1)) *
                      states * 2.0;
  if (cost > budget)
    throw ResourceError("entropy bounds: block enumeration needs ~" + std::to_string(cost) +
                        " weighted states, budget is " + std::to_string(budget));

  std::vector<int> obs(states);
  for (int x = 0; x < states; ++x) obs[x] = spec.level_index(level, x);

  // upper(n) = H(Y_1..Y_{n+1}) - H(Y_1..Y_n)
  BlockEntropyScan up{&m.transition(), &obs, symbols, static_cast<int>(n),
                      static_cast<int>(n) + 1};
  {
    // depth 1 splits the stationary vector by observed symbol
    for (int y = 0; y < symbols; ++y) {
      std::vector<double> alpha(states, 0.0);
      bool live = false;
      for (int x = 0; x < states; ++x) {
        if (obs[x] == y && m.stationary()[x] > 0.0) {
          alpha[x] = m.stationary()[x];
          live = true;
        }
      }
      if (live) up.run(alpha, 1);
    }
  }
  const double upper = up.h_long - up.h_short;

  // lower(n) = H(Y_{n+1} | Y_2..Y_n, X_1), averaged over the hidden start
  double lower = 0.0;
  for (int x0 = 0; x0 < states; ++x0) {
    if (m.stationary()[x0] == 0.0) continue;
    BlockEntropyScan lo{&m.transition(), &obs, symbols, static_cast<int>(n) - 1,
                        static_cast<int>(n)};
    std::vector<double> alpha = m.transition()[x0];
    lo.run(alpha, 0);
    lower += m.stationary()[x0] * (lo.h_long - lo.h_short);
  }

  EntropyBracket out{lower, upper, n};
  if (out.lower > out.upper) {  // roundoff at collapse
    const double mid = out.mid();
    out.lower = out.upper = mid;
  }
  if (out.lower < 0.0) out.lower = 0.0;
  return out;
}

EntropyBracket markov_weighted_entropy(const SpongeSpec& spec, const WeightVector& a,
                                       const MarkovMeasure& m, std::int64_t n,
                                       double budget) {
  if (a.k() != spec.k()) throw ValidationError("weighted entropy: weight arity mismatch");
  EntropyBracket total{0.0, 0.0, n};
  for (int level = 1; level <= spec.k(); ++level) {
    const double w = a.a(level);
    if (w == 0.0) continue;
    const EntropyBracket b = hidden_marginal_entropy_bounds(m, spec, level, n, budget);
    total.lower += w * b.lower;
    total.upper += w * b.upper;
  }
  return total;
}

}  // namespace wtp
