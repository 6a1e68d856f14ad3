#include "wtp/measure.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "wtp/errors.hpp"

namespace wtp {

namespace {
constexpr double kSimplexTol = 1e-12;
constexpr double kStationaryTol = 1e-10;
}  // namespace

BernoulliMeasure BernoulliMeasure::create(const SpongeSpec& spec, std::vector<double> p) {
  if (static_cast<int>(p.size()) != spec.digit_count())
    throw ValidationError("measure: probability vector size does not match digit set");
  double sum = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0)
      throw ValidationError("measure: probabilities must be finite and >= 0");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSimplexTol)
    throw ValidationError("measure: probabilities sum to " + std::to_string(sum));
  BernoulliMeasure m;
  m.p_ = std::move(p);
  return m;
}

BernoulliMeasure BernoulliMeasure::uniform(const SpongeSpec& spec) {
  const int n = spec.digit_count();
  return create(spec, std::vector<double>(n, 1.0 / n));
}

MarkovMeasure MarkovMeasure::create(const SpongeSpec& spec,
                                    std::vector<std::vector<double>> transition,
                                    std::vector<double> stationary) {
  const int n = spec.digit_count();
  if (static_cast<int>(transition.size()) != n || static_cast<int>(stationary.size()) != n)
    throw ValidationError("markov: matrix/vector size does not match digit set");
  for (const auto& row : transition) {
    if (static_cast<int>(row.size()) != n) throw ValidationError("markov: ragged matrix");
    double sum = 0.0;
    for (double x : row) {
      if (!std::isfinite(x) || x < 0.0) throw ValidationError("markov: bad transition entry");
      sum += x;
    }
    if (std::abs(sum - 1.0) > kSimplexTol)
      throw ValidationError("markov: row sums to " + std::to_string(sum));
  }
  double sum = 0.0;
  for (double x : stationary) {
    if (!std::isfinite(x) || x < 0.0) throw ValidationError("markov: bad stationary entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSimplexTol)
    throw ValidationError("markov: stationary sums to " + std::to_string(sum));
  for (int v = 0; v < n; ++v) {
    double dot = 0.0;
    for (int u = 0; u < n; ++u) dot += stationary[u] * transition[u][v];
    if (std::abs(dot - stationary[v]) > kStationaryTol)
      throw ValidationError("markov: vector is not stationary for the matrix");
  }
  MarkovMeasure m;
  m.transition_ = std::move(transition);
  m.stationary_ = std::move(stationary);
  return m;
}

MarkovMeasure MarkovMeasure::from_transition(const SpongeSpec& spec,
                                             std::vector<std::vector<double>> transition) {
  std::vector<double> pi = stationary_distribution(transition);
  return create(spec, std::move(transition), std::move(pi));
}

MarkovMeasure MarkovMeasure::iid(const SpongeSpec& spec, const BernoulliMeasure& p) {
  std::vector<std::vector<double>> rows(spec.digit_count(), p.p());
  return create(spec, std::move(rows), p.p());
}

CylinderPotential CylinderPotential::create(const SpongeSpec& spec, std::vector<double> values) {
  if (static_cast<int>(values.size()) != spec.digit_count())
    throw ValidationError("potential: value vector size does not match digit set");
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("potential: values must be finite");
  CylinderPotential f;
  f.values_ = std::move(values);
  return f;
}

CylinderPotential CylinderPotential::zero(const SpongeSpec& spec) {
  return create(spec, std::vector<double>(spec.digit_count(), 0.0));
}

std::vector<double> pushforward(const SpongeSpec& spec, const std::vector<double>& p,
                                int level) {
  if (static_cast<int>(p.size()) != spec.digit_count())
    throw ValidationError("pushforward: vector size does not match digit set");
  std::vector<double> q(spec.alphabet_size(level), 0.0);
  for (int d = 0; d < spec.digit_count(); ++d) q[spec.level_index(level, d)] += p[d];
  return q;
}

std::vector<double> pushforward(const SpongeSpec& spec, const BernoulliMeasure& measure,
                                int level) {
  return pushforward(spec, measure.p(), level);
}

std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& transition) {
  const int n = static_cast<int>(transition.size());
  if (n == 0) throw ValidationError("stationary: empty matrix");
  // solve x (P - I) = 0 with sum(x) = 1: transpose system, replace last row
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) A(v, u) = transition[u][v];
  A -= Eigen::MatrixXd::Identity(n, n);
  A.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::VectorXd x = A.partialPivLu().solve(b);
  std::vector<double> pi(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    pi[i] = std::max(x(i), 0.0);  // scrub -1e-17 style noise
    sum += pi[i];
  }
  if (!(sum > 0.0) || !std::isfinite(sum))
    throw ValidationError("stationary: solve failed (reducible or ill-conditioned chain)");
  for (double& v : pi) v /= sum;
  return pi;
}

}  // namespace wtp
