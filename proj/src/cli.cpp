#include "wtp/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wtp/closedform.hpp"
#include "wtp/entropy.hpp"
#include "wtp/errors.hpp"
#include "wtp/estimators.hpp"
#include "wtp/numeric.hpp"
#include "wtp/optimizer.hpp"
#include "wtp/philox.hpp"
#include "wtp/serialize.hpp"

namespace wtp {

namespace {

std::string fmt12(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// flat `key = value` reader, enough for the config schema; strings may be
// quoted, everything else parses as a number/boolean
Json parse_flat_toml(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config: " + path);
  Json j = Json::object();
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("bad toml line: " + line);
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'')) {
      j[key] = value.substr(1, value.size() - 2);
    } else if (value == "true" || value == "false") {
      j[key] = value == "true";
    } else {
      try {
        if (value.find_first_of(".eE") != std::string::npos)
          j[key] = std::stod(value);
        else
          j[key] = static_cast<std::int64_t>(std::stoll(value));
      } catch (const std::exception&) {
        throw ValidationError("bad toml value for '" + key + "': " + value);
      }
    }
  }
  return j;
}

void merge_config(RunConfig& cfg, const Json& j) {
  auto str = [&](const char* key, std::string& field) {
    if (j.contains(key)) field = j.at(key).get<std::string>();
  };
  str("spec", cfg.spec_path);
  str("weights", cfg.weights);
  str("potential", cfg.potential_path);
  str("format", cfg.format);
  str("out", cfg.out);
  str("measure", cfg.measure);
  str("mode", cfg.mode);
  str("units", cfg.units);
  if (j.contains("n")) cfg.n = j.at("n").get<std::int64_t>();
  if (j.contains("depth")) cfg.depth = j.at("depth").get<int>();
  if (j.contains("samples")) cfg.samples = j.at("samples").get<std::int64_t>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("budget")) cfg.budget = j.at("budget").get<double>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  if (j.contains("jmin")) cfg.jmin = j.at("jmin").get<int>();
  if (j.contains("jmax")) cfg.jmax = j.at("jmax").get<int>();
  if (j.contains("tolerance")) cfg.tolerance = j.at("tolerance").get<double>();
}

struct CsvRow {
  std::string n, estimate, stderr_, lower, upper;
};

void write_csv(std::ostream& os, const std::string& header_comment,
               const std::vector<CsvRow>& rows) {
  os << header_comment << "\n";
  os << "n,estimate,stderr,lower,upper\n";
  for (const CsvRow& r : rows)
    os << r.n << ',' << r.estimate << ',' << r.stderr_ << ',' << r.lower << ',' << r.upper
       << "\n";
}

std::vector<std::int64_t> ladder(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t d : {8, 4, 2, 1}) {
    const std::int64_t v = std::max<std::int64_t>(1, n / d);
    if (out.empty() || out.back() != v) out.push_back(v);
  }
  return out;
}

// every float in emitted json goes out with 12 significant digits
Json round12(const Json& j) {
  if (j.is_object()) {
    Json out = Json::object();
    for (const auto& [k, v] : j.items()) out[k] = round12(v);
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& v : j) out.push_back(round12(v));
    return out;
  }
  if (j.is_number_float()) return std::stod(fmt12(j.get<double>()));
  return j;
}

}  // namespace

void apply_config_file(RunConfig& cfg, const std::string& path) {
  const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  merge_config(cfg, json ? load_json_file(path) : parse_flat_toml(path));
}

SpongeSpec load_spec(const RunConfig& cfg) {
  if (cfg.spec_path.empty()) throw ValidationError("no spec file given");
  return sponge_from_json(load_json_file(cfg.spec_path));
}

WeightVector resolve_weights(const SpongeSpec& spec, const std::string& weights) {
  if (weights == "canonical") return canonical_weights(spec);
  std::vector<double> a;
  std::istringstream in(weights);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      a.push_back(std::stod(trim(part)));
    } catch (const std::exception&) {
      throw ValidationError("bad weight entry: '" + part + "'");
    }
  }
  if (static_cast<int>(a.size()) != spec.k())
    throw ValidationError("expected " + std::to_string(spec.k()) + " weights");
  return WeightVector::create(std::move(a));
}

CylinderPotential resolve_potential(const SpongeSpec& spec, const std::string& path) {
  if (path.empty()) return CylinderPotential::zero(spec);
  return potential_from_json(spec, load_json_file(path));
}

BernoulliMeasure resolve_measure(const SpongeSpec& spec, const WeightVector& a,
                                 const std::string& measure) {
  if (measure == "uniform") return BernoulliMeasure::uniform(spec);
  if (measure == "optimal")
    return nested_pressure(spec, a, CylinderPotential::zero(spec)).optimal_measure;
  return bernoulli_from_json(spec, load_json_file(measure));
}

void cmd_dim(const RunConfig& cfg, std::ostream& os) {
  const SpongeSpec spec = load_spec(cfg);
  const WeightVector a = resolve_weights(spec, cfg.weights);
  ReportOptions opts;
  opts.n = cfg.n;
  opts.depth = cfg.depth;
  opts.jmin = cfg.jmin;
  opts.jmax = cfg.jmax;
  opts.tolerance = cfg.tolerance;
  opts.seed = cfg.seed;
  opts.budget = cfg.budget;
  os << round12(to_json(make_dimension_report(spec, a, opts), cfg.units)).dump(2) << "\n";
}

void cmd_pressure(const RunConfig& cfg, std::ostream& os) {
  const SpongeSpec spec = load_spec(cfg);
  const WeightVector a = resolve_weights(spec, cfg.weights);
  const CylinderPotential f = resolve_potential(spec, cfg.potential_path);
  ReportOptions opts;
  opts.tolerance = cfg.tolerance;
  opts.seed = cfg.seed;
  opts.keep_trace = !cfg.trace.empty();
  const PressureReport rep = make_pressure_report(spec, a, f, opts);
  if (!cfg.trace.empty()) {
    std::ofstream tf(cfg.trace);
    if (!tf) throw ValidationError("cannot open trace file: " + cfg.trace);
    std::vector<CsvRow> rows;
    for (std::size_t i = 0; i < rep.optimizer.trace.size(); ++i)
      rows.push_back({std::to_string(i), fmt12(rep.optimizer.trace[i]), "", "", ""});
    write_csv(tf, "# optimizer objective per accepted iteration", rows);
  }
  Json j = to_json(spec, rep, cfg.units);
  j["nested"] = to_json(spec, nested_pressure(spec, a, f));  // full conditional tree
  os << round12(j).dump(2) << "\n";
}

namespace {

struct VerifyTable {
  std::ostream& os;
  int failures = 0;

  void check(const std::string& name, bool ok, const std::string& detail) {
    os << (ok ? "PASS " : "FAIL ") << name << "  " << detail << "\n";
    if (!ok) ++failures;
  }
};

}  // namespace

int cmd_verify(const RunConfig& cfg, std::ostream& os) {
  const SpongeSpec spec = load_spec(cfg);
  const WeightVector a = resolve_weights(spec, cfg.weights);
  const CylinderPotential f = resolve_potential(spec, cfg.potential_path);
  VerifyTable table{os};

  const NestedPressureResult nested = nested_pressure(spec, a, f);
  OptimizerConfig ocfg;
  ocfg.seed = cfg.seed;
  const OptimizerResult opt = maximize_bernoulli(spec, a, f, ocfg);
  table.check("closed_vs_optimizer", std::abs(nested.value - opt.value) <= cfg.tolerance,
              "|" + fmt12(nested.value) + " - " + fmt12(opt.value) +
                  "| <= " + fmt12(cfg.tolerance));

  if (spec.k() == 2) {
    const double res = barral_feng_identity_check(spec, a, f);
    table.check("fibre_collapse_identity", res <= 1e-10, "residual " + fmt12(res));
  }

  {
    // analytic gradient against central differences at seeded interior points
    double worst = 0.0;
    const double h = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
      Philox rng(cfg.seed, 1000 + trial);
      std::vector<double> p(spec.digit_count());
      double sum = 0.0;
      for (double& x : p) {
        x = 0.2 + rng.next_double();
        sum += x;
      }
      for (double& x : p) x /= sum;
      const ObjectiveGradient g = weighted_objective_gradient(spec, a, p, f);
      for (int d = 0; d < spec.digit_count(); ++d) {
        std::vector<double> pp = p, pm = p;
        pp[d] += h;
        pm[d] -= h;
        const double fd = (weighted_objective(spec, a, pp, f) -
                           weighted_objective(spec, a, pm, f)) /
                          (2.0 * h);
        worst = std::max(worst, std::abs(fd - g.g[d]) / std::max(1.0, std::abs(g.g[d])));
      }
    }
    table.check("gradient_finite_difference", worst <= 1e-6, "max rel err " + fmt12(worst));
  }

  {
    double max_log_base = 0.0, sum_log_alpha = 0.0;
    for (int i = 1; i <= spec.k(); ++i) {
      max_log_base = std::max(max_log_base, std::log(static_cast<double>(spec.bases()[i - 1])));
      sum_log_alpha += std::log(static_cast<double>(spec.alphabet_size(i)));
    }
    const NestedPressureResult base = nested_pressure(spec, a, CylinderPotential::zero(spec));
    bool ok = true;
    std::string detail;
    for (std::int64_t n : {50, 200, 1000}) {
      const double lo = min_information_rate(spec, a, base.optimal_measure, n);
      const double hi = weighted_cylinder_count(spec, a, n).rate;
      const double slack_left = (a.total() * max_log_base + 1.0) / static_cast<double>(n);
      const double slack_right = sum_log_alpha / static_cast<double>(n);
      if (!(lo <= base.value + slack_left && base.value <= hi + slack_right)) ok = false;
      if (n == 1000)
        detail = fmt12(lo) + " <= " + fmt12(base.value) + " <= " + fmt12(hi) + " (+slack)";
    }
    table.check("sandwich_min_info_counting", ok, detail);
  }

  {
    std::vector<double> aw(spec.k(), 0.0);
    aw[0] = 1.0;
    const WeightVector a10 = WeightVector::create(aw);
    std::vector<double> scaled(spec.digit_count());
    for (int d = 0; d < spec.digit_count(); ++d) scaled[d] = f(d);
    const double classical = log_sum_exp(scaled);
    const double nested10 = nested_pressure(spec, a10, f).value;
    table.check("classical_reduction", std::abs(nested10 - classical) <= 1e-12,
                "|" + fmt12(nested10) + " - " + fmt12(classical) + "|");
  }

  if (spec.digit_count() > 1) {
    bool ok = true;
    for (int drop = 0; drop < spec.digit_count() && ok; ++drop) {
      std::vector<Digit> digits;
      for (int d = 0; d < spec.digit_count(); ++d)
        if (d != drop) digits.push_back(spec.digits()[d]);
      const SpongeSpec sub = SpongeSpec::create(spec.bases(), digits);
      std::vector<double> fv;
      for (int d = 0; d < spec.digit_count(); ++d)
        if (d != drop) fv.push_back(f(d));
      const double v =
          nested_pressure(sub, a, CylinderPotential::create(sub, fv)).value;
      if (v > nested.value + 1e-12) ok = false;
    }
    table.check("monotone_under_digit_deletion", ok, "all single-digit deletions");
  }

  {
    double integral = 0.0;
    for (int d = 0; d < spec.digit_count(); ++d)
      integral += nested.optimal_measure.p(d) * f(d);
    const double attained = bernoulli_weighted_entropy(spec, a, nested.optimal_measure) +
                            integral;
    table.check("maximizer_attains_value", std::abs(attained - nested.value) <= 1e-10,
                "|" + fmt12(attained) + " - " + fmt12(nested.value) + "|");
  }

  {
    // Monte-Carlo local entropy against its exact finite-n expectation
    const NestedPressureResult base = nested_pressure(spec, a, CylinderPotential::zero(spec));
    const std::int64_t n = 500, samples = 200;
    const McEstimate est =
        brin_katok_mc(spec, a, base.optimal_measure, n, samples, cfg.seed, cfg.threads);
    double expect = 0.0;
    for (int level = 1; level <= spec.k(); ++level)
      expect += static_cast<double>(a.segment_length(level, n)) / static_cast<double>(n) *
                shannon_entropy(pushforward(spec, base.optimal_measure, level));
    const bool ok = std::abs(est.mean - expect) <= 5.0 * est.stderr_ + 1e-12;
    table.check("brin_katok_mc",
                ok, "mean " + fmt12(est.mean) + " vs " + fmt12(expect) + " +- 5*" +
                        fmt12(est.stderr_));
  }

  {
    const BernoulliMeasure uni = BernoulliMeasure::uniform(spec);
    const std::int64_t n = 2000;
    const std::vector<int> x = sample_orbit(spec, uni, a.t(spec.k(), n), cfg.seed, 0);
    const auto path = smb_information_path(spec, a, uni, x, {n});
    const double target = bernoulli_weighted_entropy(spec, a, uni);
    table.check("smb_information_path", std::abs(path.back().second - target) <= 0.05,
                fmt12(path.back().second) + " vs " + fmt12(target));
  }

  {
    const BernoulliMeasure uni = BernoulliMeasure::uniform(spec);
    const McEstimate one = brin_katok_mc(spec, a, uni, 200, 100, cfg.seed, 1);
    const McEstimate two = brin_katok_mc(spec, a, uni, 200, 100, cfg.seed, cfg.threads);
    table.check("thread_determinism",
                one.mean == two.mean && one.stderr_ == two.stderr_, "bitwise equal");
  }

  os << (table.failures == 0 ? "VERIFY PASS" : "VERIFY FAIL") << " ("
     << table.failures << " failures)\n";
  return table.failures;
}

void cmd_mc(const RunConfig& cfg, std::ostream& os) {
  const SpongeSpec spec = load_spec(cfg);
  const WeightVector a = resolve_weights(spec, cfg.weights);
  const BernoulliMeasure measure = resolve_measure(spec, a, cfg.measure);
  if (cfg.mode != "bk" && cfg.mode != "smb")
    throw ValidationError("mc: mode must be bk or smb");

  std::vector<CsvRow> rows;
  Json jrows = Json::array();
  if (cfg.mode == "bk") {
    for (std::int64_t n : ladder(cfg.n)) {
      const McEstimate e = brin_katok_mc(spec, a, measure, n, cfg.samples, cfg.seed,
                                         cfg.threads);
      rows.push_back({std::to_string(e.n), fmt12(e.mean),
                      std::isfinite(e.stderr_) ? fmt12(e.stderr_) : "", "", ""});
      jrows.push_back(to_json(e));
    }
  } else {
    const std::vector<std::int64_t> ns = ladder(cfg.n);
    const std::vector<int> x = sample_orbit(spec, measure, a.t(spec.k(), ns.back()),
                                            cfg.seed, 0);
    for (const auto& [n, value] : smb_information_path(spec, a, measure, x, ns)) {
      rows.push_back({std::to_string(n), fmt12(value), "", "", ""});
      jrows.push_back(Json{{"n", n}, {"estimate", value}});
    }
  }

  if (cfg.format == "json") {
    os << round12(jrows).dump(2) << "\n";
  } else {
    write_csv(os,
              "# mode=" + cfg.mode + " measure=" + cfg.measure + " seed=" +
                  std::to_string(cfg.seed) + " samples=" + std::to_string(cfg.samples) +
                  " n=" + std::to_string(cfg.n),
              rows);
  }
}

void cmd_count(const RunConfig& cfg, std::ostream& os) {
  const SpongeSpec spec = load_spec(cfg);
  const WeightVector a = resolve_weights(spec, cfg.weights);
  std::vector<CsvRow> rows;
  Json jrows = Json::array();
  for (std::int64_t n : ladder(cfg.n)) {
    const CylinderCount c = weighted_cylinder_count(spec, a, n);
    rows.push_back({std::to_string(c.n), fmt12(c.rate), "", "", ""});
    jrows.push_back(to_json(c));
  }
  if (cfg.format == "json")
    os << round12(jrows).dump(2) << "\n";
  else
    write_csv(os, "# count n=" + std::to_string(cfg.n), rows);
}

void cmd_box(const RunConfig& cfg, std::ostream& os) {
  const SpongeSpec spec = load_spec(cfg);
  const PointCloud cloud = generate_sponge_points(spec, cfg.depth, cfg.budget);
  if (!cfg.cloud.empty()) {
    std::ofstream cf(cfg.cloud);
    if (!cf) throw ValidationError("cannot open cloud file: " + cfg.cloud);
    cf << round12(to_json(cloud)).dump() << "\n";
  }
  std::vector<int> scales;
  for (int j = cfg.jmin; j <= cfg.jmax; ++j) scales.push_back(j);
  const BoxCountFit fit = box_counting_estimate(cloud, scales);
  Json j = to_json(fit);
  j["depth"] = cfg.depth;
  j["points"] = cloud.count();
  if (spec.k() == 2) j["closed_form"] = box_dimension_closed_form(spec);
  os << round12(j).dump(2) << "\n";
}

int cli_main(int argc, const char* const* argv) {
  RunConfig cfg;

  // config file fills defaults first; explicit flags win
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") apply_config_file(cfg, argv[i + 1]);

  CLI::App app{"weighted pressure, entropy and dimension for self-affine sponges"};
  app.require_subcommand(1);
  std::string config_dummy;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--spec", cfg.spec_path, "sponge spec (json)");
    sub->add_option("--weights", cfg.weights, "canonical or a1,a2,...");
    sub->add_option("--potential", cfg.potential_path, "depth-1 potential (json)");
    sub->add_option("--n", cfg.n, "order / block length");
    sub->add_option("--depth", cfg.depth, "point cloud depth");
    sub->add_option("--samples", cfg.samples, "Monte-Carlo sample count");
    sub->add_option("--seed", cfg.seed, "PRNG seed");
    sub->add_option("--format", cfg.format, "csv|json");
    sub->add_option("--out", cfg.out, "output path (default stdout)");
    sub->add_option("--budget", cfg.budget, "enumeration budget");
    sub->add_option("--threads", cfg.threads, "worker threads");
    sub->add_option("--measure", cfg.measure, "optimal|uniform|path");
    sub->add_option("--mode", cfg.mode, "bk|smb");
    sub->add_option("--jmin", cfg.jmin, "smallest box scale exponent");
    sub->add_option("--jmax", cfg.jmax, "largest box scale exponent");
    sub->add_option("--tolerance", cfg.tolerance, "agreement tolerance");
    sub->add_option("--units", cfg.units, "nats|bits|dim");
    sub->add_option("--trace", cfg.trace, "optimizer iteration trace CSV path");
    sub->add_option("--cloud", cfg.cloud, "point cloud JSON path (box)");
    sub->add_option("--config", config_dummy, "config file (json or toml)");
  };
  CLI::App* dim = app.add_subcommand("dim", "closed form + optimizer + counting report");
  CLI::App* pressure = app.add_subcommand("pressure", "weighted pressure of a potential");
  CLI::App* verify = app.add_subcommand("verify", "run the verification matrix");
  CLI::App* mc = app.add_subcommand("mc", "Monte-Carlo local entropy / information paths");
  CLI::App* count = app.add_subcommand("count", "weighted cylinder counting");
  CLI::App* box = app.add_subcommand("box", "box-counting slope of the sponge");
  for (CLI::App* sub : {dim, pressure, verify, mc, count, box}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  if (const char* env = std::getenv("WTP_BUDGET")) {
    try {
      cfg.budget = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "bad WTP_BUDGET: " << env << "\n";
      return kExitValidation;
    }
  }
  if (cfg.format != "csv" && cfg.format != "json") {
    std::cerr << Json{{"error", "validation"},
                      {"message", "format must be csv or json"}}.dump() << "\n";
    return kExitValidation;
  }

  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) {
      std::cerr << "cannot open output file: " << cfg.out << "\n";
      return kExitValidation;
    }
  }
  std::ostream& os = cfg.out.empty() ? std::cout : file;

  try {
    if (*dim) cmd_dim(cfg, os);
    if (*pressure) cmd_pressure(cfg, os);
    if (*verify) return cmd_verify(cfg, os) == 0 ? kExitOk : kExitCriterionFailure;
    if (*mc) cmd_mc(cfg, os);
    if (*count) cmd_count(cfg, os);
    if (*box) cmd_box(cfg, os);
  } catch (const ResourceError& e) {
    std::cerr << Json{{"error", "resource"}, {"message", e.what()}}.dump() << "\n";
    return kExitResource;
  } catch (const ValidationError& e) {
    std::cerr << Json{{"error", "validation"}, {"message", e.what()}}.dump() << "\n";
    return kExitValidation;
  } catch (const SubadditivityError& e) {
    std::cerr << Json{{"error", "subadditivity"}, {"message", e.what()}}.dump() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace wtp
