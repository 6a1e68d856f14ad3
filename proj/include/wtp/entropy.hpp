#ifndef WTP_ENTROPY_HPP
#define WTP_ENTROPY_HPP

#include <cstdint>
#include <vector>

#include "wtp/measure.hpp"
#include "wtp/sponge.hpp"

namespace wtp {

// Certified enclosure of an entropy rate, in nats.
struct EntropyBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::int64_t n_used = 0;

  double width() const { return upper - lower; }
  double mid() const { return 0.5 * (lower + upper); }
};

// -sum p ln p with 0 ln 0 = 0.  Rejects negative entries.
double shannon_entropy(const std::vector<double>& p);

// h^a of a Bernoulli measure: sum_i a_i H(q^(i)) where q^(i) is the level-i
// marginal.  For product measures on full shifts each projected process is
// again i.i.d., so the per-symbol Shannon entropy is the entropy rate.
double bernoulli_weighted_entropy(const SpongeSpec& spec, const WeightVector& a,
                                  const BernoulliMeasure& p);

// -sum_u pi(u) sum_v P(u,v) ln P(u,v)
double markov_entropy_rate(const MarkovMeasure& m);

// Entropy-rate bracket for the level-i projection of a stationary Markov
// chain (a hidden-Markov process; no closed form exists).  Conditional block
// entropies computed by exact forward algebra:
//   upper(n) = H(Y_{n+1} | Y_1..Y_n)
//   lower(n) = H(Y_{n+1} | Y_2..Y_n, X_1)
// where X_1 is the hidden initial digit.  Both converge monotonically to the
// projected entropy rate, so brackets at larger n nest inside smaller ones.
// Enumeration cost beyond `budget` weighted states raises ResourceError.
EntropyBracket hidden_marginal_entropy_bounds(const MarkovMeasure& m, const SpongeSpec& spec,
                                              int level, std::int64_t n,
                                              double budget = 1e7);

// sum_i a_i * (level-i bracket), interval arithmetic on endpoints.
// Levels with a_i = 0 contribute nothing and are skipped.
EntropyBracket markov_weighted_entropy(const SpongeSpec& spec, const WeightVector& a,
                                       const MarkovMeasure& m, std::int64_t n,
                                       double budget = 1e7);

}  // namespace wtp

#endif
