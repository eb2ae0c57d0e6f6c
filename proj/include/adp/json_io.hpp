#pragma once

#include <json.hpp>

#include "adp/dichotomy.hpp"
#include "adp/oracle.hpp"
#include "adp/solver.hpp"

namespace adp {

nlohmann::json to_json(const Query& q, const HardStructure& s);
nlohmann::json to_json(const DecisionTrace& t);
nlohmann::json to_json(const Query& q, const Classification& c);
nlohmann::json to_json(const Query& q, const AdpResult& r);

ZipfSpec zipf_spec_from_json(const nlohmann::json& j);

}  // namespace adp
