#include "wtp/serialize.hpp"

#include <cmath>
#include <fstream>

#include "wtp/errors.hpp"

namespace wtp {

std::string digit_key(const Digit& d) {
  std::string s;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(d[i]);
  }
  return s;
}

Digit parse_digit_key(const std::string& key) {
  Digit d;
  std::size_t at = 0;
  while (at <= key.size()) {
    const std::size_t comma = key.find(',', at);
    const std::string part = key.substr(at, comma == std::string::npos ? comma : comma - at);
    try {
      d.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw ValidationError("bad digit key: '" + key + "'");
    }
    if (comma == std::string::npos) break;
    at = comma + 1;
  }
  return d;
}

namespace {

int digit_index(const SpongeSpec& spec, const Digit& d) {
  const auto it = std::lower_bound(spec.digits().begin(), spec.digits().end(), d);
  if (it == spec.digits().end() || *it != d)
    throw ValidationError("digit '" + digit_key(d) + "' is not in the spec");
  return static_cast<int>(it - spec.digits().begin());
}

}  // namespace

Json to_json(const SpongeSpec& spec) {
  Json j;
  j["bases"] = spec.bases();
  j["digits"] = spec.digits();
  return j;
}

SpongeSpec sponge_from_json(const Json& j) {
  if (!j.contains("bases") || !j.contains("digits"))
    throw ValidationError("sponge json: need 'bases' and 'digits'");
  try {
    return SpongeSpec::create(j.at("bases").get<std::vector<int>>(),
                              j.at("digits").get<std::vector<Digit>>());
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("sponge json: ") + e.what());
  }
}

Json to_json(const SpongeSpec& spec, const BernoulliMeasure& m) {
  Json p = Json::object();
  for (int d = 0; d < spec.digit_count(); ++d) p[digit_key(spec.digits()[d])] = m.p(d);
  return Json{{"p", p}};
}

BernoulliMeasure bernoulli_from_json(const SpongeSpec& spec, const Json& j) {
  if (!j.contains("p")) throw ValidationError("measure json: need 'p'");
  std::vector<double> p(spec.digit_count(), 0.0);
  for (const auto& [key, value] : j.at("p").items())
    p[digit_index(spec, parse_digit_key(key))] = value.get<double>();
  return BernoulliMeasure::create(spec, std::move(p));
}

Json to_json_potential(const SpongeSpec& spec, const CylinderPotential& f) {
  Json vals = Json::object();
  for (int d = 0; d < spec.digit_count(); ++d) vals[digit_key(spec.digits()[d])] = f(d);
  return Json{{"f", vals}};
}

CylinderPotential potential_from_json(const SpongeSpec& spec, const Json& j) {
  if (!j.contains("f")) throw ValidationError("potential json: need 'f'");
  std::vector<double> vals(spec.digit_count(), 0.0);
  for (const auto& [key, value] : j.at("f").items())
    vals[digit_index(spec, parse_digit_key(key))] = value.get<double>();
  return CylinderPotential::create(spec, std::move(vals));
}

Json to_json(const EntropyBracket& b) {
  return Json{{"lower", b.lower}, {"upper", b.upper}, {"n", b.n_used}};
}

Json to_json(const SpongeSpec& spec, const NestedPressureResult& r) {
  Json tree = Json::array();
  for (int depth = 0; depth < spec.k(); ++depth) {
    Json level = Json::array();
    for (const auto& node : r.tree[depth]) {
      Json cond = Json::object();
      for (std::size_t t = 0; t < node.coords.size(); ++t)
        cond[std::to_string(node.coords[t])] = node.conditional[t];
      level.push_back(Json{{"prefix", digit_key(node.prefix)},
                           {"value", node.w},
                           {"conditional", cond}});
    }
    tree.push_back(level);
  }
  Json j;
  j["value"] = r.value;
  j["conditionals"] = tree;
  j["optimal_measure"] = to_json(spec, r.optimal_measure);
  j["ties"] = r.ties;
  return j;
}

Json to_json(const SpongeSpec& spec, const OptimizerResult& r) {
  Json j;
  j["value"] = r.value;
  j["kkt_residual"] = r.kkt_residual;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["argmax"] = to_json(spec, BernoulliMeasure::create(spec, r.p));
  j["support"] = r.support;
  if (!r.tie_supports.empty()) j["tie_supports"] = r.tie_supports;
  return j;
}

Json to_json(const CylinderCount& c) {
  Json j;
  j["n"] = c.n;
  j["log_count"] = c.log_count;
  j["rate"] = c.rate;
  if (c.exact) j["exact"] = *c.exact;
  return j;
}

Json to_json(const McEstimate& e) {
  Json j;
  j["n"] = e.n;
  j["samples"] = e.samples;
  j["mean"] = e.mean;
  if (std::isfinite(e.stderr_)) j["stderr"] = e.stderr_;
  return j;
}

Json to_json(const BoxCountFit& f) {
  Json counts = Json::array();
  for (const auto& [j, c] : f.counts) counts.push_back(Json{{"j", j}, {"boxes", c}});
  return Json{{"slope", f.slope}, {"counts", counts}};
}

Json to_json(const PointCloud& cloud) {
  Json points = Json::array();
  for (std::int64_t p = 0; p < cloud.count(); ++p) {
    Json pt = Json::array();
    for (double c : cloud.point(p)) pt.push_back(c);
    points.push_back(std::move(pt));
  }
  return Json{{"dim", cloud.dim}, {"points", points}};
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ValidationError("bad json in " + path + ": " + e.what());
  }
}

}  // namespace wtp
