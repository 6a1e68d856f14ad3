#ifndef WTP_SERIALIZE_HPP
#define WTP_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "wtp/closedform.hpp"
#include "wtp/entropy.hpp"
#include "wtp/estimators.hpp"
#include "wtp/measure.hpp"
#include "wtp/optimizer.hpp"
#include "wtp/sponge.hpp"

namespace wtp {

using Json = nlohmann::ordered_json;

// digits serialize as comma-joined coordinates: (0,2) -> "0,2"
std::string digit_key(const Digit& d);
Digit parse_digit_key(const std::string& key);

// {"bases":[2,3],"digits":[[0,0],[0,2],[1,1]]}
Json to_json(const SpongeSpec& spec);
SpongeSpec sponge_from_json(const Json& j);

// {"p":{"0,0":0.2,...}}
Json to_json(const SpongeSpec& spec, const BernoulliMeasure& m);
BernoulliMeasure bernoulli_from_json(const SpongeSpec& spec, const Json& j);

// {"f":{"0,0":1.5,...}}
Json to_json_potential(const SpongeSpec& spec, const CylinderPotential& f);
CylinderPotential potential_from_json(const SpongeSpec& spec, const Json& j);

Json to_json(const EntropyBracket& b);  // {"lower":..,"upper":..,"n":..}
Json to_json(const SpongeSpec& spec, const NestedPressureResult& r);
Json to_json(const SpongeSpec& spec, const OptimizerResult& r);
Json to_json(const CylinderCount& c);
Json to_json(const McEstimate& e);
Json to_json(const BoxCountFit& f);
Json to_json(const PointCloud& cloud);  // {"dim":k,"points":[[x,y,..],..]}

Json load_json_file(const std::string& path);

}  // namespace wtp

#endif
