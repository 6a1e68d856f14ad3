#ifndef WTP_CLI_HPP
#define WTP_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "wtp/measure.hpp"
#include "wtp/report.hpp"
#include "wtp/sponge.hpp"

namespace wtp {

// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitCriterionFailure = 1,
  kExitValidation = 2,
  kExitResource = 3,
};

struct RunConfig {
  std::string subcommand;
  std::string spec_path;
  std::string weights = "canonical";  // "canonical" or "a1,a2,..."
  std::string potential_path;         // empty: f == 0
  std::int64_t n = 1000;
  int depth = 8;
  std::int64_t samples = 1000;
  std::uint64_t seed = 1;
  std::string format = "csv";  // mc/count: csv|json
  std::string out;             // empty: stdout
  double budget = 1e7;
  int threads = 1;
  std::string measure = "optimal";  // mc: optimal|uniform|<path>
  std::string mode = "bk";          // mc: bk|smb
  int jmin = 2, jmax = 6;
  double tolerance = 1e-6;
  std::string units = "nats";
  std::string trace;  // pressure: write the optimizer's iteration trace CSV here
  std::string cloud;  // box: write the generated point cloud JSON here
};

// Fill cfg from a flat JSON or TOML file with the same keys as the flags
// (json is normative; toml accepts `key = value` lines).
void apply_config_file(RunConfig& cfg, const std::string& path);

SpongeSpec load_spec(const RunConfig& cfg);
WeightVector resolve_weights(const SpongeSpec& spec, const std::string& weights);
CylinderPotential resolve_potential(const SpongeSpec& spec, const std::string& path);
BernoulliMeasure resolve_measure(const SpongeSpec& spec, const WeightVector& a,
                                 const std::string& measure);

void cmd_dim(const RunConfig& cfg, std::ostream& os);
void cmd_pressure(const RunConfig& cfg, std::ostream& os);
int cmd_verify(const RunConfig& cfg, std::ostream& os);  // returns failure count
void cmd_mc(const RunConfig& cfg, std::ostream& os);
void cmd_count(const RunConfig& cfg, std::ostream& os);
void cmd_box(const RunConfig& cfg, std::ostream& os);

int cli_main(int argc, const char* const* argv);

}  // namespace wtp

#endif
