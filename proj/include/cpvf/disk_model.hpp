#pragma once

#include <map>
#include <vector>

#include "cpvf/graph.hpp"

namespace cpvf {

enum class ZoneKind { CenterCylinder, Sepal, Strip };

const char* to_string(ZoneKind kind);

struct FaceItem {
  enum class Type { End, Chord, Landing };
  Type type = Type::End;
  int end = -1;            // End
  int from = -1, to = -1;  // Chord, traversal order
  int vertex = -1, in = -1, out = -1;  // Landing: arrive via `in`, leave via `out`
};

// Boundary component in flow order: first landing separatrix (j0), homoclinics by k, last (k0).
struct BoundarySequence {
  int first = -1;
  std::vector<int> homoclinics;
  int last = -1;
  bool empty() const { return first < 0 && homoclinics.empty() && last < 0; }
};

struct Zone {
  ZoneKind kind = ZoneKind::Strip;
  // CenterCylinder: true when the homoclinics bound it from below (counterclockwise rotation).
  bool ccw = true;
  // Sepal: the half-plane it occupies.
  Side half_plane = Side::Upper;
  BoundarySequence upper, lower;
  std::vector<int> ends;
  std::vector<int> equilibria;
  std::vector<FaceItem> walk;
};

struct Transversal {
  int k = 0;
  int j = 0;
  int zone = 0;
};

struct EquilibriumSummary {
  int index = 0;
  int multiplicity = 1;
  EquilibriumKind kind = EquilibriumKind::Sink;
};

struct Counts {
  int s = 0, h = 0, mstar = 0, N = 0;
  int dim = 0, codim = 0;
};

struct DiskModel {
  SeparatrixGraph graph;
  std::vector<Zone> zones;
  std::vector<Transversal> transversals;
  std::vector<EquilibriumSummary> equilibria;
  std::map<int, int> upper_zone, lower_zone;  // keyed by homoclinic k
  std::vector<int> end_zone;
  Counts counts;

  int zone_of(int k, Side side) const { return side == Side::Upper ? upper_zone.at(k) : lower_zone.at(k); }
  const EquilibriumSummary& equilibrium(int index) const;
};

// Faces of the disk model as cycles of the end permutation.
std::vector<std::vector<FaceItem>> faces(const SeparatrixGraph& g);

// Equilibrium that a separatrix of the given parity reaches when it lands inside `zone`.
int landing_target(const DiskModel& m, int zone, bool odd);

DiskModel decompose(const SeparatrixGraph& g);

}  // namespace cpvf
