#include "fixtures.hpp"

#include <stdexcept>

namespace fx {

using namespace cpvf;

SeparatrixGraph make(int degree, std::vector<std::pair<int, int>> homoclinics, std::map<int, int> landing) {
  SeparatrixGraph g;
  g.degree = degree;
  for (auto [k, j] : homoclinics) g.homoclinics.push_back({k, j, 1.0, {}});
  g.landing = std::move(landing);
  g.sort();
  return g;
}

SeparatrixGraph double_point() { return make(4, {{1, 2}}, {{0, 0}, {3, 1}, {4, 0}, {5, 0}}); }

SeparatrixGraph strip_three_cylinders() { return make(5, {{1, 2}, {5, 4}, {7, 6}}, {{0, 0}, {3, 2}}); }

SeparatrixGraph cubic_cylinder() { return make(3, {{1, 0}}, {{2, 0}, {3, 1}}); }

SeparatrixGraph joining_cylinders() { return make(4, {{1, 0}, {5, 4}}, {{2, 0}, {3, 0}}); }

SeparatrixGraph simultaneous() {
  return make(8, {{3, 8}, {5, 4}, {9, 0}, {13, 12}}, {{1, 0}, {2, 1}, {6, 2}, {7, 3}, {10, 4}, {11, 5}});
}

SeparatrixGraph simultaneous_after() {
  return make(8, {{3, 0}, {5, 12}},
              {{1, 0}, {2, 1}, {4, 6}, {6, 2}, {7, 3}, {8, 2}, {9, 5}, {10, 4}, {11, 5}, {13, 7}});
}

SeparatrixGraph three_break() {
  return make(9, {{1, 2}, {3, 4}, {5, 6}, {7, 14}, {13, 12}, {11, 10}}, {{0, 0}, {8, 1}, {9, 2}, {15, 3}});
}

SeparatrixGraph seven_homoclinics() {
  return make(10, {{7, 0}, {1, 2}, {5, 6}, {9, 8}, {11, 10}, {17, 12}, {13, 16}},
              {{3, 0}, {4, 1}, {14, 2}, {15, 3}});
}

AdmissiblePath path(const HGraph& hg, std::vector<int> vertices) {
  AdmissiblePath p;
  p.vertices = vertices;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    int zone = -1;
    for (const auto& e : hg.edges)
      if (e.from == vertices[i] && e.to == vertices[i + 1]) zone = e.zone;
    if (zone < 0) throw std::logic_error("no H-graph edge");
    p.zones.push_back(zone);
  }
  return p;
}

UnionGraph accepted_union(const HGraph& hg) { return {{path(hg, {5, 7, 17, 13}), path(hg, {11, 9})}}; }

UnionGraph shared_end_union(const HGraph& hg) { return {{path(hg, {5, 1}), path(hg, {7, 1})}}; }

UnionGraph conflict_union(const HGraph& hg) { return {{path(hg, {5, 7, 17}), path(hg, {9, 7, 1})}}; }

}  // namespace fx
