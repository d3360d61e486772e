#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cpvf/polynomial.hpp"

namespace cpvf {

enum class Side { Upper, Lower };

inline const char* to_string(Side s) { return s == Side::Upper ? "upper" : "lower"; }

struct Homoclinic {
  int k = 0;  // outgoing direction, odd
  int j = 0;  // incoming direction, even
  double tau = 0.0;
  std::vector<cplx> polyline;  // flow order, from the k end to the j end
};

// The center equilibrium lives in the zone on `side` of homoclinic k.
struct CenterPlacement {
  int equilibrium = 0;
  int k = 0;
  Side side = Side::Upper;
};

struct SeparatrixGraph {
  int degree = 0;
  std::vector<Homoclinic> homoclinics;  // sorted by k
  std::map<int, int> landing;           // direction -> equilibrium index
  std::map<int, std::vector<cplx>> landing_polylines;  // from infinity inward
  std::vector<CenterPlacement> centers;
  std::vector<EquilibriumPoint> equilibria;  // optional numeric data, indexed like `landing`

  int directions() const { return 2 * (degree - 1); }
  int mod(int ell) const {
    int m = directions();
    return ((ell % m) + m) % m;
  }
  const Homoclinic* homoclinic_with_end(int ell) const;
  const Homoclinic* homoclinic_k(int k) const;
  void sort();
};

// Labelled-graph equality: homoclinic index pairs and the landing map.
bool same_labelled_graph(const SeparatrixGraph& a, const SeparatrixGraph& b);
std::string labelled_key(const SeparatrixGraph& g);

}  // namespace cpvf
