#ifndef WTP_REPORT_HPP
#define WTP_REPORT_HPP

#include <cstdint>
#include <string>

#include "wtp/measure.hpp"
#include "wtp/optimizer.hpp"
#include "wtp/serialize.hpp"
#include "wtp/sponge.hpp"

namespace wtp {

// Bundle of dimension/pressure witnesses for one spec.  All values in nats.
// The verdict requires the sandwich
//   min_info_rate <= closed_form + slack_left
//   closed_form   <= counting_rate + slack_right
// with the finite-n slacks below, plus |closed_form - optimizer_value|
// within tolerance.
struct DimensionReport {
  double closed_form = 0.0;
  double optimizer_value = 0.0;
  double kkt_residual = 0.0;
  std::int64_t counting_n = 0;
  double counting_rate = 0.0;
  double min_info_rate = 0.0;
  double box_estimate = 0.0;  // NaN when not computed (k != 2)
  double slack_left = 0.0;    // (sum_i a_i * max ln m_i + 1) / n
  double slack_right = 0.0;   // sum_i ln|A_i| / n
  double tolerance = 1e-6;
  bool verdict = false;
};

struct ReportOptions {
  std::int64_t n = 1000;     // counting / min-info order
  int depth = 8;             // box-counting point cloud depth (k = 2 only)
  int jmin = 2, jmax = 6;    // box-counting scales
  double tolerance = 1e-6;
  std::uint64_t seed = 1;
  double budget = 1e7;
  bool keep_trace = false;   // record the optimizer's objective per iteration
};

DimensionReport make_dimension_report(const SpongeSpec& spec, const WeightVector& a,
                                      const ReportOptions& opts);

struct PressureReport {
  double nested_value = 0.0;
  double optimizer_value = 0.0;
  double kkt_residual = 0.0;
  double identity_residual = 0.0;  // NaN for k != 2
  double tolerance = 1e-6;
  bool agree = false;  // |nested - optimizer| <= tolerance
  OptimizerResult optimizer;
};

PressureReport make_pressure_report(const SpongeSpec& spec, const WeightVector& a,
                                    const CylinderPotential& f, const ReportOptions& opts);

// units: "nats" (default), "bits" (divide by ln 2), or "dim" (alias of nats;
// canonical weights already carry the 1/ln m factors of dimension formulas)
Json to_json(const DimensionReport& r, const std::string& units = "nats");
Json to_json(const SpongeSpec& spec, const PressureReport& r,
             const std::string& units = "nats");

}  // namespace wtp

#endif
