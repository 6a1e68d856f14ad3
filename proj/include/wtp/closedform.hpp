#ifndef WTP_CLOSEDFORM_HPP
#define WTP_CLOSEDFORM_HPP

#include <string>
#include <vector>

#include "wtp/measure.hpp"
#include "wtp/sponge.hpp"

namespace wtp {

// Closed-form weighted pressure on the full shift together with its
// maximizing Bernoulli measure, expressed as a conditional tree over digit
// prefixes: node at depth d fixes the first d coordinates.
struct NestedPressureResult {
  struct Node {
    std::vector<int> prefix;          // coordinates fixed so far
    std::vector<int> coords;          // admissible next coordinates
    std::vector<double> conditional;  // p(coord | prefix), aligned with coords
    double w;                         // subtree pressure value
  };

  double value = 0.0;                   // nats
  std::vector<std::vector<Node>> tree;  // tree[d] = nodes at depth d, 0..k-1
  BernoulliMeasure optimal_measure;
  std::vector<std::string> ties;        // branch values within 1e-12 of each other
};

// Backward nested log-sum-exp:
//   W_k(d) = f(d);  W_{l-1}(prefix) = b_{k-l+1} * ln sum exp(W_l / b_{k-l+1})
// over admissible next coordinates, where b_j are the partial weight sums.
// Returns W_0 and the conditionals p(d_l | prefix) ~ exp(W_l / b_{k-l+1}).
// All aggregation is max-shifted in the log domain.  Since b_j >= a_1 > 0,
// vanishing weights (a_i = 0, equal consecutive b) collapse adjacent levels
// into a plain log-sum-exp without any special casing.
NestedPressureResult nested_pressure(const SpongeSpec& spec, const WeightVector& a,
                                     const CylinderPotential& f);

// Carpet (k=2) dimension: (1/ln m_1) * ln sum_u t_u^(ln m_1/ln m_2) over
// nonempty columns u with t_u cells; equals nested_pressure at canonical
// weights and f == 0.
double mcmullen_dimension(const SpongeSpec& spec);

// Carpet (k=2) box dimension: ln s/ln m_1 + ln(N/s)/ln m_2 with s nonempty
// columns and N cells.
double box_dimension_closed_form(const SpongeSpec& spec);

// Evaluates the weighted pressure a second way, collapsing the fibre over
// each column u into the potential Phi(u) = a_1 ln sum_{d in u} e^{f(d)/a_1}
// and taking classical full-shift pressure on the column alphabet:
//   RHS = (a_1+a_2) * ln sum_u exp(Phi(u)/(a_1+a_2)).
// Returns |RHS - nested_pressure(spec, a, f).value|.
double barral_feng_identity_check(const SpongeSpec& spec, const WeightVector& a,
                                  const CylinderPotential& f);

}  // namespace wtp

#endif
