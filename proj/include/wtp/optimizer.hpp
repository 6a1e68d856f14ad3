#ifndef WTP_OPTIMIZER_HPP
#define WTP_OPTIMIZER_HPP

#include <cstdint>
#include <vector>

#include "wtp/entropy.hpp"
#include "wtp/measure.hpp"
#include "wtp/sponge.hpp"

namespace wtp {

enum class StepRule { Fixed, Backtracking };

struct OptimizerConfig {
  int max_iters = 20000;
  StepRule step_rule = StepRule::Backtracking;
  double initial_step = 0.5;
  // stationarity target; ~1e-9 is the float noise floor of the objective,
  // so demanding much less makes converged=false the likely outcome
  double kkt_tol = 1e-8;
  std::uint64_t seed = 0;
  double jitter = 1e-3;  // Dirichlet perturbation of the uniform start
  bool keep_trace = false;
};

struct OptimizerResult {
  std::vector<double> p;  // argmax, digit-indexed
  double value = 0.0;     // nats
  double kkt_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<int> support;                    // digit indices with p > 1e-9
  std::vector<std::vector<int>> tie_supports;  // other supports within 1e-10 in value
  std::vector<double> trace;                   // objective per accepted iteration
};

// sum_i a_i H(q^(i)) + <p, f>.  Defined for any nonnegative vector (the
// entropy terms use the raw marginal sums), which is what the finite
// difference checks differentiate.
double weighted_objective(const SpongeSpec& spec, const WeightVector& a,
                          const std::vector<double>& p, const CylinderPotential& f);

struct ObjectiveGradient {
  std::vector<double> g;
  bool boundary = false;  // some needed marginal vanished; those entries are +inf
};

// d/dp(d) = f(d) - sum_i a_i (1 + ln q^(i)(proj_i(d)))
ObjectiveGradient weighted_objective_gradient(const SpongeSpec& spec, const WeightVector& a,
                                              const std::vector<double>& p,
                                              const CylinderPotential& f);

// Mirror ascent (exponentiated gradient) over Bernoulli measures from a
// jittered interior start.  The objective is concave, so the stationary
// point reached is the global maximum up to kkt_tol, where the residual is
// max_d |grad(d) - <grad, p>| over the support.  Backtracking halves the
// step on objective decrease, so accepted iterates never go downhill.
OptimizerResult maximize_bernoulli(const SpongeSpec& spec, const WeightVector& a,
                                   const CylinderPotential& f, const OptimizerConfig& cfg);

struct MarkovOptimizerResult {
  std::vector<std::vector<double>> transition;
  std::vector<double> stationary;
  EntropyBracket objective;  // weighted entropy bracket plus integral of f
  double grad_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  // true when the transition constraint is a proper subshift: the bracketed
  // value certifies a lower bound for the pressure but optimality over all
  // invariant measures is not claimed
  bool witness_only = false;
};

// Best-effort ascent over stationary Markov measures respecting an
// allowed-transition relation.  Rows are parametrized by logits; gradients
// of the bracket-midpoint objective come from central finite differences.
// With tie_rows the rows are constrained equal, which reduces the search to
// maximize_bernoulli exactly.
MarkovOptimizerResult maximize_markov(const SpongeSpec& spec, const WeightVector& a,
                                      const CylinderPotential& f,
                                      const std::vector<std::vector<bool>>& allowed,
                                      std::int64_t block_n, const OptimizerConfig& cfg,
                                      bool tie_rows = false, double budget = 1e7);

}  // namespace wtp

#endif
