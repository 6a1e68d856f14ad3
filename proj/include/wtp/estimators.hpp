#ifndef WTP_ESTIMATORS_HPP
#define WTP_ESTIMATORS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wtp/measure.hpp"
#include "wtp/sponge.hpp"

namespace wtp {

// Symbolic weighted Bowen ball of order n: level-i symbols pinned on the
// position range [t_{i-1}(n), t_i(n)).  The ranges are disjoint by
// construction; the level-i segment stores indices into spec.alphabet(i).
struct WeightedCylinder {
  std::int64_t n = 0;
  std::vector<std::vector<int>> segments;
};

// Cylinder of the orbit x (digit indices, length >= t_k(n)).  Under the
// symbolic metric d_i(x,y) = e^{-first disagreement} this set is the
// n-th weighted Bowen ball around x for any radius in (1/e, 1).
WeightedCylinder weighted_cylinder_of(const SpongeSpec& spec, const WeightVector& a,
                                      std::span<const int> x, std::int64_t n);

// Product-measure mass: segment 1 draws from p, segment i >= 2 from the
// level-i marginal.  Log-domain; -inf when a needed symbol has no mass.
double log_cylinder_mass(const SpongeSpec& spec, const WeightVector& a,
                         const BernoulliMeasure& measure, const WeightedCylinder& cyl);
double cylinder_mass(const SpongeSpec& spec, const WeightVector& a,
                     const BernoulliMeasure& measure, const WeightedCylinder& cyl);

struct CylinderCount {
  std::int64_t n = 0;
  double log_count = 0.0;             // nats
  double rate = 0.0;                  // log_count / n
  std::optional<std::string> exact;   // decimal, provided up to 512 bits
};

// Number of order-n weighted cylinders on the full shift:
// |D|^{t_1} * prod_{i>=2} |A_i|^{t_i - t_{i-1}}.
CylinderCount weighted_cylinder_count(const SpongeSpec& spec, const WeightVector& a,
                                      std::int64_t n);

// Same count restricted to an allowed-transition relation on digits,
// via subset determinization of the projected word languages.  The DP
// raises ResourceError once the live subset table exceeds `budget`.
CylinderCount weighted_cylinder_count_sft(const SpongeSpec& spec, const WeightVector& a,
                                          const std::vector<std::vector<bool>>& allowed,
                                          std::int64_t n, double budget = 1e7);

// min over x of -(1/n) ln mass(cylinder of x): every s below the n->inf
// limit is a mass-distribution lower bound for the weighted entropy.
double min_information_rate(const SpongeSpec& spec, const WeightVector& a,
                            const BernoulliMeasure& measure, std::int64_t n);

// i.i.d. digit string of given length from the measure, on the Philox
// stream (seed, stream); zero-mass digits are never produced.
std::vector<int> sample_orbit(const SpongeSpec& spec, const BernoulliMeasure& measure,
                              std::int64_t length, std::uint64_t seed, std::uint64_t stream);

struct McEstimate {
  std::int64_t n = 0;
  std::int64_t samples = 0;
  double mean = 0.0;
  double stderr_ = 0.0;  // NaN when samples == 1
};

// Monte-Carlo local-entropy estimate: mean over sampled orbits of
// -(1/n) ln mass of their weighted cylinder; converges to h^a as n grows.
// Sample-indexed Philox streams make the result independent of `threads`.
McEstimate brin_katok_mc(const SpongeSpec& spec, const WeightVector& a,
                         const BernoulliMeasure& measure, std::int64_t n,
                         std::int64_t samples, std::uint64_t seed, int threads = 1);

// Information path (1/N) * -ln mu(join of coordinate partitions, level i
// over positions [0, t_i(N)) ).  For product measures the overlapping join
// collapses to the weighted cylinder, which is how it is evaluated here;
// the collapse itself is enumeration-tested at small n.
std::vector<std::pair<std::int64_t, double>> smb_information_path(
    const SpongeSpec& spec, const WeightVector& a, const BernoulliMeasure& measure,
    std::span<const int> x, const std::vector<std::int64_t>& n_list);

// Evaluates log phi_n along symbolic prefixes; implementations must be
// sub-additive: log phi_{n+m}(x) <= log phi_n(x) + log phi_m(shifted x).
class SubadditivePotentialSampler {
 public:
  virtual ~SubadditivePotentialSampler() = default;
  virtual double log_phi(std::span<const int> x, std::int64_t n) const = 0;
};

// Birkhoff sums of a depth-1 potential (the additive case).
class AdditivePotentialSampler : public SubadditivePotentialSampler {
 public:
  explicit AdditivePotentialSampler(CylinderPotential f) : f_(std::move(f)) {}
  double log_phi(std::span<const int> x, std::int64_t n) const override;

 private:
  CylinderPotential f_;
};

// log of the entry-sum norm of a product of per-digit nonnegative 2x2
// matrices (a matrix cocycle; the norm is submultiplicative).
class MatrixProductSampler : public SubadditivePotentialSampler {
 public:
  using Mat2 = std::array<std::array<double, 2>, 2>;
  MatrixProductSampler(const SpongeSpec& spec, std::vector<Mat2> per_digit);
  double log_phi(std::span<const int> x, std::int64_t n) const override;

 private:
  std::vector<Mat2> mats_;
};

struct FeketeEstimate {
  std::int64_t n = 0;
  double estimate = 0.0;     // Monte-Carlo mean of log phi_n / n
  double stderr_ = 0.0;
  double running_min = 0.0;  // best upper estimate of the limit so far
};

// Monte-Carlo (1/n) E[log phi_n] along n_list.  The exact sequence is
// subadditive, hence its limit is its infimum; the running minimum tracks
// the best upper estimate.  Sampled triples are spot-checked for
// sub-additivity; a violation beyond 1e-9 raises SubadditivityError.
std::vector<FeketeEstimate> fekete_rate(const SubadditivePotentialSampler& sampler,
                                        const SpongeSpec& spec,
                                        const BernoulliMeasure& measure,
                                        std::vector<std::int64_t> n_list,
                                        std::int64_t samples, std::uint64_t seed);

struct PointCloud {
  int dim = 0;
  std::vector<double> coords;  // row-major, count() * dim

  std::int64_t count() const { return dim ? static_cast<std::int64_t>(coords.size()) / dim : 0; }
  std::span<const double> point(std::int64_t i) const {
    return {coords.data() + i * dim, static_cast<std::size_t>(dim)};
  }
};

// Depth-level cell centers sum_{j=1..depth} diag(m_i^-j) u_j over admissible
// digit strings; |D|^depth points in [0,1)^k.  ResourceError over budget.
PointCloud generate_sponge_points(const SpongeSpec& spec, int depth, double budget = 1e7);

struct BoxCountFit {
  double slope = 0.0;
  std::vector<std::pair<int, std::int64_t>> counts;  // (j, occupied boxes at side 2^-j)
};

// Occupied-box counts on dyadic grids and the least-squares slope of
// ln N(2^-j) against j ln 2.  Needs at least two scales.
BoxCountFit box_counting_estimate(const PointCloud& points, const std::vector<int>& j_list);

}  // namespace wtp

#endif
