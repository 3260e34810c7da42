#pragma once

#include <dipole/dipole.hpp>

namespace fixtures {

using namespace dipole;

inline PlanarComplex unit_square() {
  return build_complex({{1, 0, 0}, {2, 1, 0}, {3, 1, 1}, {4, 0, 1}}, {{1, 2}, {2, 3}, {3, 4}, {4, 1}});
}

// n x n cells, vertex id = 100*x + y
inline PlanarComplex grid(int n) {
  std::vector<VertexSpec> vs;
  std::vector<std::pair<VertexId, VertexId>> es;
  for (int x = 0; x <= n; ++x)
    for (int y = 0; y <= n; ++y) {
      vs.push_back({100 * x + y, double(x), double(y)});
      if (x < n) es.push_back({100 * x + y, 100 * (x + 1) + y});
      if (y < n) es.push_back({100 * x + y, 100 * x + y + 1});
    }
  return build_complex(vs, es);
}

inline PlanarComplex square_with_pendant() {
  return build_complex({{1, 0, 0}, {2, 1, 0}, {3, 1, 1}, {4, 0, 1}, {5, 2, 2}},
                       {{1, 2}, {2, 3}, {3, 4}, {4, 1}, {3, 5}});
}

// two unit squares touching at (1,1)
inline PlanarComplex squares_sharing_vertex() {
  return build_complex({{1, 0, 0}, {2, 1, 0}, {3, 1, 1}, {4, 0, 1}, {5, 2, 1}, {6, 2, 2}, {7, 1, 2}},
                       {{1, 2}, {2, 3}, {3, 4}, {4, 1}, {3, 5}, {5, 6}, {6, 7}, {7, 3}});
}

// two unit squares joined by the bridge (1,0)-(2,0)
inline PlanarComplex squares_with_bridge() {
  return build_complex({{1, 0, 0}, {2, 1, 0}, {3, 1, 1}, {4, 0, 1}, {5, 2, 0}, {6, 3, 0}, {7, 3, 1}, {8, 2, 1}},
                       {{1, 2}, {2, 3}, {3, 4}, {4, 1}, {2, 5}, {5, 6}, {6, 7}, {7, 8}, {8, 5}});
}

inline ChargedGraph chain(std::vector<double> values, std::vector<bool> boundary) {
  ChargedGraph cg{Graph(values.size() + 1), std::move(boundary), OneForm(values.size())};
  for (std::size_t i = 0; i < values.size(); ++i) {
    cg.graph.add_edge(i, i + 1);
    cg.alpha[i] = values[i];
  }
  return cg;
}

}  // namespace fixtures

#define EXPECT_KIND(stmt, k)                                         \
  do {                                                               \
    try {                                                            \
      (void)(stmt);                                                  \
      ADD_FAILURE() << "no error thrown, expected " << to_string(k); \
    } catch (const ::dipole::Error& err_) {                          \
      EXPECT_EQ(err_.kind(), k) << err_.what();                      \
    }                                                                \
  } while (0)
