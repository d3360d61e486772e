#pragma once

#include <string>

#include <json.hpp>

#include "cpvf/combinatorics.hpp"
#include "cpvf/invariants.hpp"
#include "cpvf/realizer.hpp"

namespace cpvf {

using ojson = nlohmann::ordered_json;

// Stable key order, floats at 12 significant digits.
std::string dump(const ojson& j, int indent = 2);

ojson parse_json_text(const std::string& text);
ojson read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

ojson to_json(const Polynomial& p);
Polynomial polynomial_from_json(const ojson& j);

ojson to_json(const SeparatrixGraph& g);
SeparatrixGraph graph_from_json(const ojson& j);

ojson to_json(const DiskModel& m);
// Accepts graph JSON or model JSON; zones are always recomputed.
DiskModel model_from_json(const ojson& j);

ojson to_json(const Invariants& inv);
Invariants invariants_from_json(const ojson& j);

ojson to_json(const InequalitySystem& s);
InequalitySystem system_from_json(const ojson& j);

ojson to_json(const BifurcationEvent& e);
BifurcationEvent event_from_json(const ojson& j);

ojson to_json(const VerifyReport& r);
ojson to_json(const RankSearch& r);

}  // namespace cpvf
