#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "dga/problem.hpp"

namespace dga {

using json = nlohmann::json;

/// Graph file format: {"n": int, "edges": [[i, j, weight], ...]}, 0-based.
json graph_to_json(const NetworkGraph& g);
NetworkGraph graph_from_json(const json& j);

/// Problem file format: global {m, p}, per-agent objective/A/d/set, graph
/// inline under "graph". A/d are row-major lists; set bounds use null for
/// +-infinity.
json problem_to_json(const CoupledProblem& p);
CoupledProblem problem_from_json(const json& j);

json load_json_file(const std::string& path);
void save_json_file(const json& j, const std::string& path);

}  // namespace dga
