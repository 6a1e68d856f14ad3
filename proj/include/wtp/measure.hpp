#ifndef WTP_MEASURE_HPP
#define WTP_MEASURE_HPP

#include <vector>

#include "wtp/sponge.hpp"

namespace wtp {

// Product (i.i.d.) measure on the digit full shift; p indexed like spec.digits().
class BernoulliMeasure {
 public:
  BernoulliMeasure() = default;  // empty placeholder; use create()
  static BernoulliMeasure create(const SpongeSpec& spec, std::vector<double> p);
  static BernoulliMeasure uniform(const SpongeSpec& spec);

  const std::vector<double>& p() const { return p_; }
  double p(int digit_idx) const { return p_[digit_idx]; }
  int size() const { return static_cast<int>(p_.size()); }

 private:
  std::vector<double> p_;
};

// Stationary Markov measure on digit sequences.  Rows of the transition
// matrix are stochastic; zero entries encode the allowed-transition relation.
class MarkovMeasure {
 public:
  static MarkovMeasure create(const SpongeSpec& spec,
                              std::vector<std::vector<double>> transition,
                              std::vector<double> stationary);
  // computes the stationary row vector from the transition matrix
  static MarkovMeasure from_transition(const SpongeSpec& spec,
                                       std::vector<std::vector<double>> transition);
  static MarkovMeasure iid(const SpongeSpec& spec, const BernoulliMeasure& p);

  const std::vector<std::vector<double>>& transition() const { return transition_; }
  const std::vector<double>& stationary() const { return stationary_; }
  int state_count() const { return static_cast<int>(stationary_.size()); }

 private:
  MarkovMeasure() = default;
  std::vector<std::vector<double>> transition_;
  std::vector<double> stationary_;
};

// Depth-1 potential f: digits -> R, indexed like spec.digits().
class CylinderPotential {
 public:
  static CylinderPotential create(const SpongeSpec& spec, std::vector<double> values);
  static CylinderPotential zero(const SpongeSpec& spec);

  const std::vector<double>& values() const { return values_; }
  double operator()(int digit_idx) const { return values_[digit_idx]; }

 private:
  CylinderPotential() = default;
  std::vector<double> values_;
};

// Marginal q^(level) of p under the coordinate-dropping projection; indexed
// like spec.alphabet(level).  Linear in p; level 1 returns p itself.
std::vector<double> pushforward(const SpongeSpec& spec, const BernoulliMeasure& measure,
                                int level);
std::vector<double> pushforward(const SpongeSpec& spec, const std::vector<double>& p,
                                int level);

// Left fixed probability vector of a row-stochastic matrix.
std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& transition);

}  // namespace wtp

#endif
