#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpvf/disk_model.hpp"

namespace cpvf {

// Homoclinics are identified by their outgoing index k throughout.

// Edge a -> b: a precedes b on one boundary run of `zone`; sign '+' when the run bounds the zone from below.
struct HEdge {
  int from = 0;
  int to = 0;
  int zone = 0;
  char sign = '+';
  std::vector<int> chain;  // from .. to inclusive, flow order
};

struct HGraph {
  std::vector<int> vertices;
  std::vector<HEdge> edges;
  std::map<int, std::vector<int>> successors;  // consecutive members of a run

  const HEdge* find(int from, int to, int zone) const;
  bool has_edge(int from, int to) const;
};

HGraph build_hgraph(const DiskModel& m);

struct HChain {
  std::vector<std::pair<int, int>> members;  // (k, j)
  std::vector<char> itinerary;               // between consecutive members
};

// Shortest H-chain from homoclinic k_from to homoclinic k_to, ties broken lexicographically.
std::optional<HChain> can_form(const DiskModel& m, int k_from, int k_to);

char itinerary_sign(int directions, std::pair<int, int> prev, std::pair<int, int> next);

enum class Relation { Less, Greater, Equal };

const char* to_string(Relation r);

// Rows over `variables` (Im tau of the listed homoclinics) compared against zero.
struct InequalitySystem {
  std::vector<int> variables;
  std::vector<std::vector<double>> lhs;
  std::vector<Relation> rel;
  std::vector<double> witness;
  double margin = 0.0;
};

bool satisfies(const InequalitySystem& s, const std::vector<double>& x, double margin, double eq_tol = 1e-12);

// n >= 2 gives one system; n = 1 gives the two open half-plane cases (Im tau > 0, then < 0).
std::vector<InequalitySystem> feasibility(const HChain& chain, double eps = 1.0);

struct MarginResult {
  double margin = -1.0;  // negative when infeasible
  std::vector<double> x;
};

// Largest t with every strict row at least t away from zero, |x| <= 1.
MarginResult max_margin(const InequalitySystem& s);

struct AdmissiblePath {
  std::vector<int> vertices;
  std::vector<int> zones;  // zone of the edge vertices[i] -> vertices[i+1]
};

struct UnionGraph {
  std::vector<AdmissiblePath> paths;
};

struct UnionVerdict {
  bool accepted = false;
  std::string reason;  // "shared-start", "shared-end", "direction-conflict", "not-admissible", "infeasible"
};

UnionVerdict validate_union(const DiskModel& m, const HGraph& hg, const UnionGraph& u);
bool union_has_cycle(const UnionGraph& u);
InequalitySystem union_system(const DiskModel& m, const HGraph& hg, const UnionGraph& u);

std::vector<AdmissiblePath> admissible_paths(const HGraph& hg, std::size_t max_edges = 64);

struct BifurcationEvent {
  std::vector<std::pair<int, int>> broken;  // chain order
  std::vector<std::pair<int, int>> formed;
  std::vector<int> zones;  // zone of each H-graph edge used
  int rank = 1;
  char sign = '+';  // sign of Im tau of the first broken homoclinic
  int j1 = -1, kn = -1;
  int land_j1 = -1, land_kn = -1;
  InequalitySystem system;  // over the broken homoclinics

  std::string key() const;
};

std::vector<BifurcationEvent> enumerate_rank1(const DiskModel& m);

DiskModel apply_event(const DiskModel& m, const BifurcationEvent& e);

struct RankSearch {
  bool found = false;
  std::vector<BifurcationEvent> steps;
  std::size_t states_explored = 0;
};

RankSearch decompose_rank_k(const DiskModel& from, const DiskModel& target, std::size_t max_states = 200000);

// All unions of n single-edge paths on n+1 vertices (n <= max_n) that validate_union accepts.
std::vector<AdmissiblePath> brute_force_chained(const DiskModel& m, const HGraph& hg, int max_n);

}  // namespace cpvf
