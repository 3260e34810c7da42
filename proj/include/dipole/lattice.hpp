#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "forms.hpp"

namespace dipole {

struct Disk {
  Point center{0, 0};
  double radius = 1;
};

struct Polygon {
  std::vector<Point> vertices;  // simple polygon, either orientation
};

using Domain = std::variant<Disk, Polygon>;

inline Polygon square_domain(double half_side) {
  double h = half_side;
  return Polygon{{{-h, -h}, {h, -h}, {h, h}, {-h, h}}};
}

using LatticeNode = std::pair<long, long>;

struct LatticeDomain {
  double epsilon = 0;
  std::vector<LatticeNode> cells;  // lower-left corners in units of epsilon
  std::vector<LatticeNode> nodes;  // per vertex index
  PlanarComplex complex;
  std::vector<bool> discrete_boundary;    // ∂_εΩ
  Cycle boundary_cycle;                   // E∂ starting at the lexicographically smallest vertex
  std::vector<int> cell_face;             // face index per cell

  std::vector<VertexIndex> boundary_walk() const {
    std::vector<VertexIndex> w;
    for (Half h : boundary_cycle) w.push_back(complex.graph().tail(h));
    return w;
  }
};

namespace detail {

inline bool rational_in_disk(const Disk& d, const Rational& x, const Rational& y) {
  Rational dx = x - Rational(d.center.x), dy = y - Rational(d.center.y), r(d.radius);
  return dx * dx + dy * dy <= r * r;
}

// Open box (x0,x1)x(y0,y1) meets the closed segment a-b.
inline bool segment_meets_open_box(const Rational& ax, const Rational& ay, const Rational& bx, const Rational& by,
                                   const Rational& x0, const Rational& x1, const Rational& y0, const Rational& y1) {
  Rational lo(0), hi(1);
  bool lo_open = false, hi_open = false;
  auto clip = [&](const Rational& a, const Rational& d, const Rational& m0, const Rational& m1) {
    if (d == 0) return m0 < a && a < m1;
    Rational t0 = (m0 - a) / d, t1 = (m1 - a) / d;
    if (t0 > t1) std::swap(t0, t1);
    if (t0 > lo || (t0 == lo && !lo_open)) lo = t0, lo_open = true;
    if (t1 < hi || (t1 == hi && !hi_open)) hi = t1, hi_open = true;
    return true;
  };
  if (!clip(ax, bx - ax, x0, x1)) return false;
  if (!clip(ay, by - ay, y0, y1)) return false;
  if (lo_open || hi_open) return lo < hi;
  return lo <= hi;
}

inline bool rational_in_polygon(const Polygon& p, const Rational& x, const Rational& y) {
  int w = 0;
  std::size_t n = p.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    Rational ax(p.vertices[i].x), ay(p.vertices[i].y);
    Rational bx(p.vertices[(i + 1) % n].x), by(p.vertices[(i + 1) % n].y);
    Rational o = (bx - ax) * (y - ay) - (by - ay) * (x - ax);
    if (ay <= y) {
      if (by > y && o > 0) ++w;
    } else if (by <= y && o < 0) {
      --w;
    }
  }
  return w != 0;
}

inline bool cell_inside(const Domain& dom, long ix, long iy, double eps) {
  Rational e(eps);
  Rational x0 = Rational(ix) * e, x1 = Rational(ix + 1) * e, y0 = Rational(iy) * e, y1 = Rational(iy + 1) * e;
  if (auto* d = std::get_if<Disk>(&dom))
    return rational_in_disk(*d, x0, y0) && rational_in_disk(*d, x1, y0) && rational_in_disk(*d, x0, y1) &&
           rational_in_disk(*d, x1, y1);
  const auto& p = std::get<Polygon>(dom);
  if (!rational_in_polygon(p, (x0 + x1) / 2, (y0 + y1) / 2)) return false;
  std::size_t n = p.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = p.vertices[i];
    const Point& b = p.vertices[(i + 1) % n];
    if (segment_meets_open_box(Rational(a.x), Rational(a.y), Rational(b.x), Rational(b.y), x0, x1, y0, y1))
      return false;
  }
  return true;
}

inline std::pair<Point, Point> bounding_box(const Domain& dom) {
  if (auto* d = std::get_if<Disk>(&dom))
    return {{d->center.x - d->radius, d->center.y - d->radius}, {d->center.x + d->radius, d->center.y + d->radius}};
  const auto& p = std::get<Polygon>(dom);
  Point lo = p.vertices.front(), hi = lo;
  for (const auto& v : p.vertices) {
    lo.x = std::min(lo.x, v.x), lo.y = std::min(lo.y, v.y);
    hi.x = std::max(hi.x, v.x), hi.y = std::max(hi.y, v.y);
  }
  return {lo, hi};
}

}  // namespace detail

inline LatticeDomain lattice_from_cells(std::vector<LatticeNode> cells, double eps) {
  if (cells.empty()) fail(ErrorKind::EmptyDiscretization, "no lattice cell fits inside the domain");
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  LatticeDomain L;
  L.epsilon = eps;
  L.cells = cells;
  std::set<LatticeNode> cellset(cells.begin(), cells.end());
  std::set<LatticeNode> nodeset;
  for (auto [x, y] : cells)
    for (long dx : {0, 1})
      for (long dy : {0, 1}) nodeset.insert({x + dx, y + dy});
  L.nodes.assign(nodeset.begin(), nodeset.end());
  std::map<LatticeNode, VertexId> id;
  std::vector<VertexSpec> vs;
  for (std::size_t i = 0; i < L.nodes.size(); ++i) {
    id[L.nodes[i]] = static_cast<VertexId>(i);
    vs.push_back({static_cast<VertexId>(i), L.nodes[i].first * eps, L.nodes[i].second * eps});
  }
  std::vector<std::pair<VertexId, VertexId>> bonds;
  for (const auto& n : L.nodes) {
    for (LatticeNode m : {LatticeNode{n.first + 1, n.second}, LatticeNode{n.first, n.second + 1}})
      if (nodeset.count(m)) bonds.emplace_back(id[n], id[m]);
  }
  L.complex = build_complex(vs, bonds);
  L.discrete_boundary.assign(L.nodes.size(), false);
  for (std::size_t i = 0; i < L.nodes.size(); ++i) {
    auto [x, y] = L.nodes[i];
    int around = cellset.count({x, y}) + cellset.count({x - 1, y}) + cellset.count({x, y - 1}) +
                 cellset.count({x - 1, y - 1});
    L.discrete_boundary[i] = around < 4;
  }
  BoundaryComplex b = boundary_complex(L.complex);
  if (L.complex.outer_cycles().size() == 1 && !b.edges.empty()) {
    std::size_t start = 0;
    for (std::size_t j = 0; j < b.edges.size(); ++j)
      if (L.complex.graph().tail(b.edges[j]) < L.complex.graph().tail(b.edges[start])) start = j;
    std::rotate(b.edges.begin(), b.edges.begin() + start, b.edges.end());
  }
  L.boundary_cycle = b.edges;
  for (auto [x, y] : L.cells) {
    auto e = L.complex.find_edge(static_cast<VertexIndex>(id[{x, y}]), static_cast<VertexIndex>(id[{x + 1, y}]));
    Half h{*e, L.complex.graph().edge(*e).tail == static_cast<VertexIndex>(id[{x, y}])};
    L.cell_face.push_back(L.complex.face_of(h));
  }
  return L;
}

inline LatticeDomain discretize(const Domain& dom, double eps) {
  if (!(eps > 0)) fail(ErrorKind::MalformedInput, "epsilon must be positive");
  auto [lo, hi] = detail::bounding_box(dom);
  long x0 = static_cast<long>(std::floor(lo.x / eps)) - 1, x1 = static_cast<long>(std::ceil(hi.x / eps)) + 1;
  long y0 = static_cast<long>(std::floor(lo.y / eps)) - 1, y1 = static_cast<long>(std::ceil(hi.y / eps)) + 1;
  std::vector<LatticeNode> cells;
  for (long ix = x0; ix <= x1; ++ix)
    for (long iy = y0; iy <= y1; ++iy)
      if (detail::cell_inside(dom, ix, iy, eps)) cells.push_back({ix, iy});
  return lattice_from_cells(std::move(cells), eps);
}

struct EnergyProfile {
  std::string name;
  std::function<double(double)> f;
};

inline EnergyProfile sd_profile() {
  return {"sd", [](double t) { return t * t; }};
}
inline EnergyProfile xy_profile() {
  return {"xy", [](double t) { return 1 - std::cos(2 * std::numbers::pi * t); }};
}

// Piecewise-linear profile through (t, f) samples covering [0, 1/2].
inline EnergyProfile piecewise_profile(std::string name, std::vector<std::pair<double, double>> samples) {
  std::sort(samples.begin(), samples.end());
  if (samples.size() < 2 || samples.front().first > 0 || samples.back().first < 0.5)
    fail(ErrorKind::MalformedInput, "profile samples must cover [0, 1/2]");
  EnergyProfile p{std::move(name), [samples](double t) {
                    auto it = std::lower_bound(samples.begin(), samples.end(), std::pair<double, double>{t, -INFINITY});
                    if (it == samples.begin()) return it->second;
                    if (it == samples.end()) return samples.back().second;
                    auto prev = std::prev(it);
                    if (it->first == prev->first) return it->second;
                    double w = (t - prev->first) / (it->first - prev->first);
                    return prev->second + w * (it->second - prev->second);
                  }};
  for (int i = 0; i < 1000; ++i)
    if (p.f(0.5 * (i + 1) / 1000) < p.f(0.5 * i / 1000))
      fail(ErrorKind::MalformedInput, "profile is not nondecreasing on [0, 1/2]");
  return p;
}

// Sum over unordered bonds.
inline double energy(const VertexFunction& u, const PlanarComplex& c, const EnergyProfile& p) {
  std::vector<double> terms;
  const Graph& g = c.graph();
  for (EdgeIndex e = 0; e < g.num_edges(); ++e)
    terms.push_back(p.f(std::abs(project_pi(u[g.edge(e).head] - u[g.edge(e).tail]))));
  return exact_sum(terms);
}

struct CellCharge {
  LatticeNode cell;
  Point center;
  long charge;
};

struct VorticityMeasure {
  std::vector<CellCharge> charges;  // nonzero only
  long total = 0;
};

inline VorticityMeasure vorticity(const VertexFunction& u, const LatticeDomain& L) {
  auto cu = curl(pi_form(differential(L.complex.graph(), u)), L.complex);
  VorticityMeasure m;
  for (std::size_t i = 0; i < L.cells.size(); ++i) {
    double v = cu[L.cell_face[i]];
    long k = std::lround(v);
    if (std::abs(v - k) > kTol || std::abs(k) > 1)
      fail(ErrorKind::InternalError, "cell circulation " + std::to_string(v) + " is not in {-1,0,1}");
    if (k != 0) {
      auto [x, y] = L.cells[i];
      m.charges.push_back({L.cells[i], {(x + 0.5) * L.epsilon, (y + 0.5) * L.epsilon}, k});
      m.total += k;
    }
  }
  return m;
}

inline double turn_angle(const Point& p) {
  double t = std::atan2(p.y, p.x);
  if (t < 0) t += 2 * std::numbers::pi;
  if (t >= 2 * std::numbers::pi) t = 0;
  return t;
}

namespace detail {

inline bool covered(const LatticeDomain& L, const std::set<LatticeNode>& cells, const Point& p) {
  double fx = p.x / L.epsilon, fy = p.y / L.epsilon;
  long ix = static_cast<long>(std::floor(fx)), iy = static_cast<long>(std::floor(fy));
  for (long dx : {0L, -1L})
    for (long dy : {0L, -1L}) {
      long cx = ix + dx, cy = iy + dy;
      if (fx >= cx && fx <= cx + 1 && fy >= cy && fy <= cy + 1 && cells.count({cx, cy})) return true;
    }
  return false;
}

}  // namespace detail

inline void check_star_shaped(const LatticeDomain& L, int rays = 1000) {
  std::set<LatticeNode> cells(L.cells.begin(), L.cells.end());
  if (!detail::covered(L, cells, {0, 0})) fail(ErrorKind::NotStarShaped, "origin is outside the lattice domain");
  double reach = 0;
  for (auto [x, y] : L.nodes) reach = std::max(reach, std::hypot(double(x), double(y)) * L.epsilon);
  int steps = static_cast<int>(std::ceil(8 * reach / L.epsilon)) + 8;
  for (int r = 0; r < rays; ++r) {
    double th = 2 * std::numbers::pi * (r + 0.5) / rays;
    bool left = false;
    for (int s = 1; s <= steps; ++s) {
      double t = reach * 1.01 * s / steps;
      bool in = detail::covered(L, cells, {t * std::cos(th), t * std::sin(th)});
      if (!in) left = true;
      else if (left) fail(ErrorKind::NotStarShaped, "a ray from the origin re-enters the lattice domain");
    }
  }
}

// u0 = ψ(θ/2π) with θ in [0, 2π); filled on all vertices, the origin gets 0.
inline VertexFunction star_boundary(const std::function<double(double)>& psi, const LatticeDomain& L) {
  check_star_shaped(L);
  VertexFunction u(L.nodes.size(), 0.0);
  for (std::size_t v = 0; v < L.nodes.size(); ++v) {
    const Point& p = L.complex.point(v);
    if (p.x == 0 && p.y == 0) continue;
    u[v] = psi(turn_angle(p) / (2 * std::numbers::pi));
  }
  return u;
}

// Boundary cycle rotated to start at the vertex of smallest angle (i0 of the star datum).
inline Cycle star_cycle(const LatticeDomain& L) {
  Cycle c = L.boundary_cycle;
  std::size_t best = 0;
  for (std::size_t j = 0; j < c.size(); ++j)
    if (turn_angle(L.complex.point(L.complex.graph().tail(c[j]))) <
        turn_angle(L.complex.point(L.complex.graph().tail(c[best]))))
      best = j;
  std::rotate(c.begin(), c.begin() + best, c.end());
  return c;
}

inline double boundary_variation(const VertexFunction& u, const PlanarComplex& c, const Cycle& cyc) {
  std::vector<double> terms;
  for (Half h : cyc) terms.push_back(std::abs(project_pi(u[c.graph().head(h)] - u[c.graph().tail(h)])));
  return exact_sum(terms);
}

// Boundary phase field v0 = exp(2πi·phase), phase in turns.
struct BoundaryField {
  std::string name;
  std::function<double(const Point&)> phase;
};

inline BoundaryField radial_field() {
  return {"radial", [](const Point& p) { return turn_angle(p) / (2 * std::numbers::pi); }};
}
inline BoundaryField constant_field(double phase) {
  return {"constant", [phase](const Point&) { return phase; }};
}
inline BoundaryField degree_field(int n) {
  return {"degree:" + std::to_string(n), [n](const Point& p) {
            double t = n * turn_angle(p) / (2 * std::numbers::pi);
            return t - std::floor(t);
          }};
}

// Lifts the phase along the boundary cycle with nearest-integer jumps.
// omega: modulus of continuity of v0 at scale ε; estimated from chords when absent.
inline VertexFunction lift_boundary(const BoundaryField& field, const LatticeDomain& L,
                                    std::optional<double> omega = std::nullopt) {
  const auto& g = L.complex.graph();
  auto walk = L.boundary_walk();
  double chord = 0;
  for (std::size_t k = 0; k < walk.size(); ++k) {
    double a = field.phase(L.complex.point(walk[k]));
    double b = field.phase(L.complex.point(walk[(k + 1) % walk.size()]));
    chord = std::max(chord, 2 * std::abs(std::sin(std::numbers::pi * project_pi(b - a))));
  }
  double w = omega.value_or(chord);
  if (w > 1 / (2 * std::sqrt(2.0)))
    fail(ErrorKind::H0Unsatisfiable, "modulus of continuity " + std::to_string(w) + " exceeds 1/(2 sqrt 2)");
  VertexFunction u(g.num_vertices(), 0.0);
  std::vector<bool> set(g.num_vertices(), false);
  if (walk.empty()) return u;
  double first = field.phase(L.complex.point(walk[0]));
  u[walk[0]] = first - std::floor(first);
  set[walk[0]] = true;
  for (std::size_t k = 0; k + 1 < walk.size(); ++k) {
    VertexIndex a = walk[k], b = walk[k + 1];
    if (set[b]) continue;
    u[b] = u[a] + project_pi(field.phase(L.complex.point(b)) - field.phase(L.complex.point(a)));
    set[b] = true;
  }
  return u;
}

// Coordinate descent on interior vertices; a move is kept only if it lowers the local energy.
inline VertexFunction relax(VertexFunction u, const LatticeDomain& L, const EnergyProfile& p, int sweeps) {
  const Graph& g = L.complex.graph();
  BoundaryComplex b = boundary_complex(L.complex);
  auto local = [&](VertexIndex v, double x) {
    std::vector<double> t;
    for (const auto& inc : g.incident(v)) t.push_back(p.f(std::abs(project_pi(x - u[inc.other]))));
    return exact_sum(t);
  };
  for (int s = 0; s < sweeps; ++s) {
    for (VertexIndex v = 0; v < g.num_vertices(); ++v) {
      if (b.is_boundary[v] || L.discrete_boundary[v]) continue;
      double cur = u[v];
      double best_x = cur, best = local(v, cur);
      constexpr int grid = 96;
      double step = 1.0 / grid;
      std::vector<double> cand;
      for (int i = 0; i < grid; ++i) cand.push_back(cur - 0.5 + i * step);
      for (const auto& inc : g.incident(v)) {
        double d = project_pi(u[inc.other] - cur);
        cand.push_back(cur + d);
      }
      double seed_x = cur, seed_val = best;
      for (double x : cand) {
        double val = local(v, x);
        if (val < seed_val) seed_val = val, seed_x = x;
      }
      // golden-section refinement around the best sample
      double lo = seed_x - step, hi = seed_x + step;
      const double r = (std::sqrt(5.0) - 1) / 2;
      double m1 = hi - r * (hi - lo), m2 = lo + r * (hi - lo);
      double f1 = local(v, m1), f2 = local(v, m2);
      for (int it = 0; it < 60; ++it) {
        if (f1 < f2) hi = m2, m2 = m1, f2 = f1, m1 = hi - r * (hi - lo), f1 = local(v, m1);
        else lo = m1, m1 = m2, f1 = f2, m2 = lo + r * (hi - lo), f2 = local(v, m2);
      }
      double gx = (lo + hi) / 2, gv = local(v, gx);
      if (gv < seed_val) seed_val = gv, seed_x = gx;
      if (seed_val < best - 1e-14) best_x = seed_x;
      u[v] = best_x;
    }
  }
  return u;
}

}  // namespace dipole
