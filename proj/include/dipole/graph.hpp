#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <queue>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"

namespace dipole {

using VertexIndex = std::size_t;
using EdgeIndex = std::size_t;

struct Edge {
  VertexIndex tail = 0;
  VertexIndex head = 0;
};

// Oriented edge: `forward` means tail -> head of the stored edge.
struct Half {
  EdgeIndex edge = 0;
  bool forward = true;
  Half reversed() const { return {edge, !forward}; }
  int sign() const { return forward ? 1 : -1; }
  bool operator==(const Half&) const = default;
};

struct Incidence {
  EdgeIndex edge;
  VertexIndex other;
  int sign;  // +1 when (v, other) is the stored orientation
  Half half() const { return {edge, sign > 0}; }
};

// Bidirectional multigraph; every stored edge stands for both orientations.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : adj_(n) {}

  VertexIndex add_vertex() {
    adj_.emplace_back();
    return adj_.size() - 1;
  }

  EdgeIndex add_edge(VertexIndex a, VertexIndex b) {
    if (a >= adj_.size() || b >= adj_.size()) fail(ErrorKind::UnknownVertex, "edge endpoint out of range");
    edges_.push_back({a, b});
    EdgeIndex e = edges_.size() - 1;
    adj_[a].push_back({e, b, 1});
    adj_[b].push_back({e, a, -1});
    return e;
  }

  std::size_t num_vertices() const { return adj_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const Edge& edge(EdgeIndex e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Incidence>& incident(VertexIndex v) const { return adj_[v]; }

  VertexIndex tail(Half h) const { return h.forward ? edges_[h.edge].tail : edges_[h.edge].head; }
  VertexIndex head(Half h) const { return h.forward ? edges_[h.edge].head : edges_[h.edge].tail; }
  bool is_loop(EdgeIndex e) const { return edges_[e].tail == edges_[e].head; }

  // Component label per vertex, and the number of components.
  std::pair<std::vector<std::size_t>, std::size_t> components() const {
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label(adj_.size(), unset);
    std::size_t count = 0;
    for (VertexIndex s = 0; s < adj_.size(); ++s) {
      if (label[s] != unset) continue;
      std::queue<VertexIndex> q;
      q.push(s);
      label[s] = count;
      while (!q.empty()) {
        VertexIndex v = q.front();
        q.pop();
        for (const auto& inc : adj_[v]) {
          if (label[inc.other] == unset) {
            label[inc.other] = count;
            q.push(inc.other);
          }
        }
      }
      ++count;
    }
    return {label, count};
  }

  bool connected() const { return adj_.empty() || components().second == 1; }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adj_;
};

// Antisymmetric function on oriented edges, one value per stored edge.
struct OneForm {
  std::vector<double> values;

  OneForm() = default;
  explicit OneForm(std::size_t m, double v = 0.0) : values(m, v) {}
  explicit OneForm(std::vector<double> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  double operator[](EdgeIndex e) const { return values[e]; }
  double& operator[](EdgeIndex e) { return values[e]; }
  double at(Half h) const { return h.forward ? values[h.edge] : -values[h.edge]; }
  double at(const Incidence& inc) const { return inc.sign * values[inc.edge]; }

  OneForm operator-() const {
    OneForm r(*this);
    for (auto& v : r.values) v = -v;
    return r;
  }
  OneForm operator+(const OneForm& o) const {
    OneForm r(*this);
    for (std::size_t i = 0; i < r.size(); ++i) r.values[i] += o.values[i];
    return r;
  }
  OneForm operator-(const OneForm& o) const { return *this + (-o); }
};

using VertexFunction = std::vector<double>;

inline std::vector<double> divergence(const Graph& g, const OneForm& a) {
  std::vector<double> d(g.num_vertices(), 0.0);
  std::vector<double> terms;
  for (VertexIndex v = 0; v < g.num_vertices(); ++v) {
    terms.clear();
    for (const auto& inc : g.incident(v)) terms.push_back(a.at(inc));
    d[v] = exact_sum(terms);
  }
  return d;
}

inline double flux(const Graph& g, const OneForm& a, const std::vector<bool>& boundary) {
  std::vector<double> terms;
  for (VertexIndex v = 0; v < g.num_vertices(); ++v)
    if (boundary[v])
      for (const auto& inc : g.incident(v)) terms.push_back(a.at(inc));
  return exact_sum(terms);
}

inline double boundary_tv(const Graph& g, const OneForm& a, const std::vector<bool>& boundary) {
  std::vector<double> terms;
  for (VertexIndex v = 0; v < g.num_vertices(); ++v)
    if (boundary[v])
      for (const auto& inc : g.incident(v)) terms.push_back(std::abs(a.at(inc)));
  return exact_sum(terms);
}

inline OneForm differential(const Graph& g, const VertexFunction& u) {
  OneForm a(g.num_edges());
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) a[e] = u[g.edge(e).head] - u[g.edge(e).tail];
  return a;
}

inline OneForm pi_form(const OneForm& a) {
  OneForm r(a);
  for (auto& v : r.values) v = project_pi(v);
  return r;
}

}  // namespace dipole
