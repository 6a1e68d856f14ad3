#include "wtp/report.hpp"

#include <cmath>
#include <limits>

#include "wtp/closedform.hpp"
#include "wtp/errors.hpp"
#include "wtp/estimators.hpp"
#include "wtp/optimizer.hpp"

namespace wtp {

namespace {

double unit_scale(const std::string& units) {
  if (units == "nats" || units == "dim") return 1.0;
  if (units == "bits") return 1.0 / std::log(2.0);
  throw ValidationError("unknown units: " + units);
}

}  // namespace

DimensionReport make_dimension_report(const SpongeSpec& spec, const WeightVector& a,
                                      const ReportOptions& opts) {
  if (opts.n < 1) throw ValidationError("report: n must be >= 1");
  DimensionReport rep;
  rep.tolerance = opts.tolerance;

  const CylinderPotential zero = CylinderPotential::zero(spec);
  const NestedPressureResult nested = nested_pressure(spec, a, zero);
  rep.closed_form = nested.value;

  OptimizerConfig cfg;
  cfg.seed = opts.seed;
  const OptimizerResult opt = maximize_bernoulli(spec, a, zero, cfg);
  rep.optimizer_value = opt.value;
  rep.kkt_residual = opt.kkt_residual;

  rep.counting_n = opts.n;
  rep.counting_rate = weighted_cylinder_count(spec, a, opts.n).rate;
  rep.min_info_rate = min_information_rate(spec, a, nested.optimal_measure, opts.n);

  double max_log_base = 0.0, sum_log_alpha = 0.0;
  for (int i = 1; i <= spec.k(); ++i) {
    max_log_base = std::max(max_log_base, std::log(static_cast<double>(spec.bases()[i - 1])));
    sum_log_alpha += std::log(static_cast<double>(spec.alphabet_size(i)));
  }
  rep.slack_left = (a.total() * max_log_base + 1.0) / static_cast<double>(opts.n);
  rep.slack_right = sum_log_alpha / static_cast<double>(opts.n);

  if (spec.k() == 2) {
    const PointCloud cloud = generate_sponge_points(spec, opts.depth, opts.budget);
    std::vector<int> scales;
    for (int j = opts.jmin; j <= opts.jmax; ++j) scales.push_back(j);
    rep.box_estimate = box_counting_estimate(cloud, scales).slope;
  } else {
    rep.box_estimate = std::numeric_limits<double>::quiet_NaN();
  }

  rep.verdict = rep.min_info_rate <= rep.closed_form + rep.slack_left &&
                rep.closed_form <= rep.counting_rate + rep.slack_right &&
                std::abs(rep.closed_form - rep.optimizer_value) <= rep.tolerance;
  return rep;
}

PressureReport make_pressure_report(const SpongeSpec& spec, const WeightVector& a,
                                    const CylinderPotential& f, const ReportOptions& opts) {
  PressureReport rep;
  rep.tolerance = opts.tolerance;
  rep.nested_value = nested_pressure(spec, a, f).value;

  OptimizerConfig cfg;
  cfg.seed = opts.seed;
  cfg.keep_trace = opts.keep_trace;
  rep.optimizer = maximize_bernoulli(spec, a, f, cfg);
  rep.optimizer_value = rep.optimizer.value;
  rep.kkt_residual = rep.optimizer.kkt_residual;
  rep.identity_residual = spec.k() == 2 ? barral_feng_identity_check(spec, a, f)
                                        : std::numeric_limits<double>::quiet_NaN();
  rep.agree = std::abs(rep.nested_value - rep.optimizer_value) <= rep.tolerance;
  return rep;
}

Json to_json(const DimensionReport& r, const std::string& units) {
  const double s = unit_scale(units);
  Json j;
  j["units"] = units;
  j["closed_form"] = r.closed_form * s;
  j["optimizer_value"] = r.optimizer_value * s;
  j["kkt_residual"] = r.kkt_residual;
  j["counting_n"] = r.counting_n;
  j["counting_rate"] = r.counting_rate * s;
  j["min_info_rate"] = r.min_info_rate * s;
  if (std::isfinite(r.box_estimate)) j["box_estimate"] = r.box_estimate;
  j["slack_left"] = r.slack_left * s;
  j["slack_right"] = r.slack_right * s;
  j["tolerance"] = r.tolerance;
  j["verdict"] = r.verdict;
  return j;
}

Json to_json(const SpongeSpec& spec, const PressureReport& r, const std::string& units) {
  const double s = unit_scale(units);
  Json j;
  j["units"] = units;
  j["nested_value"] = r.nested_value * s;
  j["optimizer_value"] = r.optimizer_value * s;
  j["kkt_residual"] = r.kkt_residual;
  if (std::isfinite(r.identity_residual)) j["identity_residual"] = r.identity_residual;
  j["tolerance"] = r.tolerance;
  j["agree"] = r.agree;
  j["optimizer"] = to_json(spec, r.optimizer);
  return j;
}

}  // namespace wtp
