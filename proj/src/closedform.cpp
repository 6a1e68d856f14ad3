#include "wtp/closedform.hpp"

#include <cmath>
#include <string>

#include "wtp/errors.hpp"
#include "wtp/numeric.hpp"

namespace wtp {

namespace {

constexpr double kTieGap = 1e-12;

std::string prefix_string(const std::vector<int>& prefix) {
  std::string s;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(prefix[i]);
  }
  return s;
}

struct Builder {
  const SpongeSpec* spec;
  const WeightVector* a;
  const CylinderPotential* f;
  NestedPressureResult* out;

  // digits in [lo, hi) share the first `depth` coordinates
  double solve(int lo, int hi, int depth) {
    const int k = spec->k();
    if (depth == k) return (*f)(lo);

    const double c = a->b(k - depth);  // aggregates coordinate depth+1
    NestedPressureResult::Node node;
    node.prefix.assign(spec->digits()[lo].begin(), spec->digits()[lo].begin() + depth);

    std::vector<double> scaled;  // W_child / c
    int i = lo;
    while (i < hi) {
      const int coord = spec->digits()[i][depth];
      int j = i;
      while (j < hi && spec->digits()[j][depth] == coord) ++j;
      node.coords.push_back(coord);
      scaled.push_back(solve(i, j, depth + 1) / c);
      i = j;
    }
    const double lse = log_sum_exp(scaled);
    const double w = c * lse;
    node.conditional.resize(scaled.size());
    for (std::size_t t = 0; t < scaled.size(); ++t)
      node.conditional[t] = std::exp(scaled[t] - lse);
    node.w = w;
    for (std::size_t t = 1; t < scaled.size(); ++t)
      for (std::size_t s = 0; s < t; ++s)
        if (std::abs(scaled[t] - scaled[s]) * c < kTieGap)
          out->ties.push_back("depth " + std::to_string(depth) + " prefix [" +
                              prefix_string(node.prefix) + "]: coordinates " +
                              std::to_string(node.coords[s]) + " and " +
                              std::to_string(node.coords[t]) + " tie");
    out->tree[depth].push_back(std::move(node));
    return w;
  }
};

}  // namespace

NestedPressureResult nested_pressure(const SpongeSpec& spec, const WeightVector& a,
                                     const CylinderPotential& f) {
  if (a.k() != spec.k()) throw ValidationError("nested pressure: weight arity mismatch");

  NestedPressureResult out;
  out.tree.resize(spec.k());
  Builder builder{&spec, &a, &f, &out};
  out.value = builder.solve(0, spec.digit_count(), 0);

  // chain the conditionals down to leaf probabilities
  std::vector<double> p(spec.digit_count(), 0.0);
  struct Walk {
    const SpongeSpec* spec;
    const NestedPressureResult* res;
    std::vector<double>* p;
    std::vector<int> cursor;  // next unread node per depth (tree is in DFS order)

    void go(int lo, int hi, int depth, double log_p) {
      if (depth == spec->k()) {
        (*p)[lo] = std::exp(log_p);
        return;
      }
      const auto& node = res->tree[depth][cursor[depth]++];
      int i = lo;
      for (std::size_t t = 0; t < node.coords.size(); ++t) {
        int j = i;
        while (j < hi && spec->digits()[j][depth] == node.coords[t]) ++j;
        go(i, j, depth + 1, log_p + std::log(node.conditional[t]));
        i = j;
      }
    }
  };
  // nodes were appended post-order; re-bucket them into DFS order per depth
  // by construction they already group per depth in left-to-right order
  Walk walk{&spec, &out, &p, std::vector<int>(spec.k(), 0)};
  walk.go(0, spec.digit_count(), 0, 0.0);
  double sum = 0.0;
  for (double x : p) sum += x;
  for (double& x : p) x /= sum;  // absorb ~1e-16 chaining roundoff
  out.optimal_measure = BernoulliMeasure::create(spec, std::move(p));
  return out;
}

double mcmullen_dimension(const SpongeSpec& spec) {
  if (spec.k() != 2) throw ValidationError("mcmullen dimension: defined for k = 2");
  const double lm1 = std::log(static_cast<double>(spec.bases()[0]));
  const double lm2 = std::log(static_cast<double>(spec.bases()[1]));
  std::vector<int> counts(spec.alphabet_size(2), 0);
  for (int d = 0; d < spec.digit_count(); ++d) counts[spec.level_index(2, d)]++;
  const double theta = lm1 / lm2;
  double sum = 0.0;
  for (int t : counts) sum += std::pow(static_cast<double>(t), theta);
  return std::log(sum) / lm1;
}

double box_dimension_closed_form(const SpongeSpec& spec) {
  if (spec.k() != 2) throw ValidationError("box dimension: defined for k = 2");
  const double s = spec.alphabet_size(2);
  const double n = spec.digit_count();
  return std::log(s) / std::log(static_cast<double>(spec.bases()[0])) +
         std::log(n / s) / std::log(static_cast<double>(spec.bases()[1]));
}

double barral_feng_identity_check(const SpongeSpec& spec, const WeightVector& a,
                                  const CylinderPotential& f) {
  if (spec.k() != 2) throw ValidationError("identity check: defined for k = 2");
  if (a.k() != 2) throw ValidationError("identity check: weight arity mismatch");
  const double a1 = a.a(1);
  const double total = a.b(2);

  const int cols = spec.alphabet_size(2);
  std::vector<double> psi(cols, kNegInf);  // Phi(u) / (a_1 + a_2)
  for (int u = 0; u < cols; ++u) {
    std::vector<double> scaled;
    for (int d = 0; d < spec.digit_count(); ++d)
      if (spec.level_index(2, d) == u) scaled.push_back(f(d) / a1);
    psi[u] = a1 * log_sum_exp(scaled) / total;
  }
  const double rhs = total * log_sum_exp(psi);
  return std::abs(rhs - nested_pressure(spec, a, f).value);
}

}  // namespace wtp
