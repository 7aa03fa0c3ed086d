#include "dga/json_io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <limits>

namespace dga {

namespace {

json vec_to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

Vec vec_from_json(const json& j) {
  Vec v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index k = 0;
  for (const auto& e : j) v(k++) = e.get<double>();
  return v;
}

json bound_to_json(double b) {
  if (std::isinf(b)) return nullptr;
  return b;
}

double bound_from_json(const json& j, double inf_sign) {
  if (j.is_null()) return inf_sign * std::numeric_limits<double>::infinity();
  return j.get<double>();
}

}  // namespace

json graph_to_json(const NetworkGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.i, e.j, e.weight});
  return {{"n", g.size()}, {"edges", edges}};
}

NetworkGraph graph_from_json(const json& j) {
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges"))
    edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
  return NetworkGraph(j.at("n").get<int>(), std::move(edges));
}

json problem_to_json(const CoupledProblem& p) {
  json agents = json::array();
  for (int i = 0; i < p.num_agents(); ++i) {
    const auto& a = p.agent(i);
    json obj;
    if (a.objective.is_quadratic()) {
      obj = {{"kind", "quadratic"},
             {"a", vec_to_json(a.objective.quadratic().a)},
             {"b", vec_to_json(a.objective.quadratic().b)}};
    } else {
      const auto& q = a.objective.quad_exp();
      obj = {{"kind", "quadexp"},
             {"a", vec_to_json(q.a)},
             {"b", vec_to_json(q.b)},
             {"delta", vec_to_json(q.delta)},
             {"ell", vec_to_json(q.ell)}};
    }
    json set;
    switch (a.set.kind()) {
      case FeasibleSet::Kind::full_space:
        set = {{"kind", "full_space"}};
        break;
      case FeasibleSet::Kind::box: {
        json lo = json::array(), hi = json::array();
        for (int k = 0; k < p.p(); ++k) {
          lo.push_back(bound_to_json(a.set.lower(k)));
          hi.push_back(bound_to_json(a.set.upper(k)));
        }
        set = {{"kind", "box"}, {"lo", lo}, {"hi", hi}};
        break;
      }
      case FeasibleSet::Kind::fixed_point: {
        json pt = json::array();
        for (int k = 0; k < p.p(); ++k) pt.push_back(a.set.lower(k));
        set = {{"kind", "fixed"}, {"point", pt}};
        break;
      }
    }
    json A = json::array();
    for (int r = 0; r < p.m(); ++r)
      for (int c = 0; c < p.p(); ++c) A.push_back(a.A(r, c));
    agents.push_back(
        {{"objective", obj}, {"A", A}, {"d", vec_to_json(a.d)}, {"set", set}});
  }
  return {{"m", p.m()},
          {"p", p.p()},
          {"agents", agents},
          {"graph", graph_to_json(p.graph())}};
}

CoupledProblem problem_from_json(const json& j) {
  const int m = j.at("m").get<int>();
  const int p = j.at("p").get<int>();
  auto graph = graph_from_json(j.at("graph"));

  std::vector<AgentSpec> agents;
  for (const auto& ja : j.at("agents")) {
    const auto& jo = ja.at("objective");
    std::string kind = jo.at("kind").get<std::string>();
    SeparableObjective obj = [&]() -> SeparableObjective {
      if (kind == "quadratic")
        return SeparableObjective(
            Quadratic{vec_from_json(jo.at("a")), vec_from_json(jo.at("b"))});
      if (kind == "quadexp")
        return SeparableObjective(
            QuadExp{vec_from_json(jo.at("a")), vec_from_json(jo.at("b")),
                    vec_from_json(jo.at("delta")), vec_from_json(jo.at("ell"))});
      throw std::invalid_argument("problem_from_json: unknown objective kind " + kind);
    }();

    Mat A(m, p);
    const auto& jA = ja.at("A");
    if (static_cast<int>(jA.size()) != m * p)
      throw std::invalid_argument("problem_from_json: A must be row-major m*p");
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < p; ++c)
        A(r, c) = jA.at(static_cast<std::size_t>(r * p + c)).get<double>();

    const auto& js = ja.at("set");
    std::string sk = js.at("kind").get<std::string>();
    FeasibleSet set = [&]() -> FeasibleSet {
      if (sk == "full_space") return FeasibleSet::full_space(p);
      if (sk == "fixed") return FeasibleSet::fixed(vec_from_json(js.at("point")));
      if (sk == "box") {
        Vec lo(p), hi(p);
        for (int k = 0; k < p; ++k) {
          lo(k) = bound_from_json(js.at("lo").at(static_cast<std::size_t>(k)), -1.0);
          hi(k) = bound_from_json(js.at("hi").at(static_cast<std::size_t>(k)), 1.0);
        }
        return FeasibleSet::box(std::move(lo), std::move(hi));
      }
      throw std::invalid_argument("problem_from_json: unknown set kind " + sk);
    }();

    agents.push_back({std::move(obj), std::move(A), vec_from_json(ja.at("d")),
                      std::move(set)});
  }
  return CoupledProblem(std::move(agents), std::move(graph), m, p);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void save_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace dga
