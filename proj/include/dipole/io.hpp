#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lattice.hpp"
#include "pipeline.hpp"

namespace dipole::io {

using nlohmann::json;

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::MalformedInput, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::MalformedInput, path + ": " + e.what());
  }
}

inline void write_file(const std::string& path, const json& j) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) fail(ErrorKind::MalformedInput, "cannot write " + path);
  out << j.dump(2) << "\n";
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    fail(ErrorKind::MalformedInput, e.what());
  }
}

// Signed 1-based edge reference: +k is stored edge k-1, -k its reverse.
inline long edge_ref(Half h) { return h.forward ? long(h.edge) + 1 : -(long(h.edge) + 1); }

inline json complex_to_json(const PlanarComplex& c) {
  json j;
  j["vertices"] = json::array();
  for (VertexIndex v = 0; v < c.num_vertices(); ++v)
    j["vertices"].push_back({{"id", c.id(v)}, {"x", c.point(v).x}, {"y", c.point(v).y}});
  j["edges"] = json::array();
  for (const auto& e : c.graph().edges()) j["edges"].push_back({c.id(e.tail), c.id(e.head)});
  j["faces"] = json::array();
  for (const auto& f : c.faces()) {
    json cyc = json::array();
    for (Half h : f) cyc.push_back(edge_ref(h));
    j["faces"].push_back(cyc);
  }
  j["boundary"] = json::array();
  for (Half h : boundary_complex(c).edges) j["boundary"].push_back(edge_ref(h));
  return j;
}

inline PlanarComplex complex_from_json(const json& j) {
  return guarded([&] {
    std::vector<VertexSpec> vs;
    for (const auto& v : j.at("vertices"))
      vs.push_back({v.at("id").get<VertexId>(), v.at("x").get<double>(), v.at("y").get<double>()});
    std::vector<std::pair<VertexId, VertexId>> es;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) fail(ErrorKind::MalformedInput, "edge entries must be [a, b]");
      es.emplace_back(e[0].get<VertexId>(), e[1].get<VertexId>());
    }
    return build_complex(vs, es);
  });
}

inline json function_to_json(const PlanarComplex& c, const VertexFunction& u) {
  json j;
  j["values"] = json::array();
  for (VertexIndex v = 0; v < c.num_vertices(); ++v) j["values"].push_back({c.id(v), u[v]});
  return j;
}

inline VertexFunction function_from_json(const PlanarComplex& c, const json& j) {
  return guarded([&] {
    VertexFunction u(c.num_vertices(), 0.0);
    std::vector<bool> set(c.num_vertices(), false);
    for (const auto& p : j.at("values")) {
      VertexIndex v = c.require_index(p.at(0).get<VertexId>());
      u[v] = p.at(1).get<double>();
      set[v] = true;
    }
    for (bool s : set)
      if (!s) fail(ErrorKind::MalformedInput, "vertex function is not defined on every vertex");
    return u;
  });
}

inline json form_to_json(const Graph& g, const OneForm& a, const std::vector<VertexId>& ids) {
  json j;
  j["edges"] = json::array();
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) j["edges"].push_back({ids[g.edge(e).tail], ids[g.edge(e).head], a[e]});
  return j;
}

inline json lattice_to_json(const LatticeDomain& L) {
  json j = complex_to_json(L.complex);
  j["epsilon"] = L.epsilon;
  j["cells"] = json::array();
  for (auto [x, y] : L.cells) j["cells"].push_back({x, y});
  return j;
}

inline LatticeDomain lattice_from_json(const json& j) {
  return guarded([&] {
    std::vector<LatticeNode> cells;
    for (const auto& c : j.at("cells")) cells.push_back({c.at(0).get<long>(), c.at(1).get<long>()});
    return lattice_from_cells(std::move(cells), j.at("epsilon").get<double>());
  });
}

inline json dual_to_json(const DualGraph& d) {
  json j;
  j["vertices"] = json::array();
  for (VertexIndex v = 0; v < d.graph.num_vertices(); ++v)
    j["vertices"].push_back(
        {{"id", v}, {"x", d.points[v].x}, {"y", d.points[v].y}, {"kind", d.is_boundary[v] ? "boundary" : "face"}});
  j["edges"] = json::array();
  j["dual_of"] = json::array();
  for (EdgeIndex e = 0; e < d.graph.num_edges(); ++e) {
    j["edges"].push_back({d.graph.edge(e).tail, d.graph.edge(e).head});
    j["dual_of"].push_back({e + 1, e + 1});
  }
  return j;
}

inline json hypotheses_to_json(const PlanarComplex& c, const HypothesisReport& h) {
  json j{{"h0", h.h0_ok},           {"h0_exceptions", h.exception_count}, {"boundary_sum", h.boundary_sum},
         {"boundary_tv", h.boundary_tv}, {"h1", h.h1_ok}, {"h1_strict", h.h1_strict}, {"h2", h.h2_ok}};
  if (h.exceptional) {
    const auto& g = c.graph();
    j["exceptional_edge"] = {c.id(g.tail(*h.exceptional)), c.id(g.head(*h.exceptional))};
  }
  return j;
}

inline json report_to_json(const PlanarComplex& c, const PipelineReport& r) {
  json j;
  j["hypotheses"] = hypotheses_to_json(c, r.hypotheses);
  j["theorem"] = r.theorem;
  j["dual"] = {{"flux", r.dual_flux}, {"tv", r.dual_tv}};
  json cert{{"flux", r.certificate.flux},
            {"tv", r.certificate.tv},
            {"max_ratio", r.certificate.max_ratio},
            {"depth", r.certificate.depth},
            {"positive_charges", r.certificate.positive_charges}};
  cert["x0"] = r.certificate.x0 ? json(*r.certificate.x0) : json(nullptr);
  cert["witness"] = r.certificate.witness ? json(*r.certificate.witness + 1) : json(nullptr);
  j["certificate"] = cert;
  j["singular_face"] = r.singular_face ? json(*r.singular_face) : json(nullptr);
  j["singular_charge"] = r.singular_charge;
  j["max_edge_ratio"] = r.max_edge_ratio;
  j["strict_edge"] = r.strict_edge ? json(*r.strict_edge + 1) : json(nullptr);
  auto charges = [](const FaceCharge& fc) {
    json a = json::array();
    for (std::size_t f = 0; f < fc.size(); ++f)
      if (std::lround(fc[f]) != 0) a.push_back({f, std::lround(fc[f])});
    return a;
  };
  j["charges_before"] = charges(r.curl_before);
  j["charges_after"] = charges(r.curl_after);
  return j;
}

inline json vorticity_to_json(const VorticityMeasure& m) {
  json j;
  j["total"] = m.total;
  j["charges"] = json::array();
  for (const auto& c : m.charges)
    j["charges"].push_back({{"cell", {c.cell.first, c.cell.second}}, {"x", c.center.x}, {"y", c.center.y},
                            {"charge", c.charge}});
  return j;
}

inline EnergyProfile parse_profile(const std::string& desc) {
  if (desc == "sd") return sd_profile();
  if (desc == "xy") return xy_profile();
  const std::string prefix = "custom:";
  if (desc.rfind(prefix, 0) == 0) {
    json j = read_file(desc.substr(prefix.size()));
    return guarded([&] {
      std::vector<std::pair<double, double>> s;
      for (const auto& p : j.at("samples")) s.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      return piecewise_profile(desc, std::move(s));
    });
  }
  fail(ErrorKind::MalformedInput, "unknown profile " + desc);
}

}  // namespace dipole::io
