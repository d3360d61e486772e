#include "cpvf/combinatorics.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "cpvf/error.hpp"
#include "cpvf/lp.hpp"

namespace cpvf {

namespace {

struct Run {
  int zone = 0;
  char sign = '+';
  bool cyclic = false;
  std::vector<int> ks;
};

std::vector<Run> runs(const DiskModel& m) {
  std::vector<Run> out;
  for (std::size_t i = 0; i < m.zones.size(); ++i) {
    const Zone& z = m.zones[i];
    const int id = static_cast<int>(i);
    if (z.kind == ZoneKind::CenterCylinder) {
      out.push_back({id, z.ccw ? '+' : '-', true, z.ccw ? z.lower.homoclinics : z.upper.homoclinics});
    } else {
      if (!z.lower.homoclinics.empty()) out.push_back({id, '+', false, z.lower.homoclinics});
      if (!z.upper.homoclinics.empty()) out.push_back({id, '-', false, z.upper.homoclinics});
    }
  }
  return out;
}

std::pair<int, int> pair_of(const DiskModel& m, int k) {
  const Homoclinic* h = m.graph.homoclinic_k(k);
  if (!h) throw PreconditionError("no homoclinic with outgoing index " + std::to_string(k));
  return {h->k, h->j};
}

struct UnionFind {
  std::map<int, int> parent;
  int find(int x) {
    auto it = parent.find(x);
    if (it == parent.end()) return parent[x] = x;
    if (it->second == x) return x;
    return it->second = find(it->second);
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

const HEdge* HGraph::find(int from, int to, int zone) const {
  for (const auto& e : edges)
    if (e.from == from && e.to == to && e.zone == zone) return &e;
  return nullptr;
}

bool HGraph::has_edge(int from, int to) const {
  return std::any_of(edges.begin(), edges.end(), [&](const HEdge& e) { return e.from == from && e.to == to; });
}

HGraph build_hgraph(const DiskModel& m) {
  HGraph hg;
  for (const auto& h : m.graph.homoclinics) hg.vertices.push_back(h.k);
  for (const Run& r : runs(m)) {
    const int n = static_cast<int>(r.ks.size());
    for (int p = 0; p < n; ++p) {
      if (p + 1 < n) hg.successors[r.ks[p]].push_back(r.ks[p + 1]);
      else if (r.cyclic && n > 1) hg.successors[r.ks[p]].push_back(r.ks[0]);
      for (int q = 0; q < n; ++q) {
        if (q == p || (!r.cyclic && q < p)) continue;
        HEdge e{r.ks[p], r.ks[q], r.zone, r.sign, {}};
        for (int i = p;; i = (i + 1) % n) {
          e.chain.push_back(r.ks[i]);
          if (i == q) break;
        }
        hg.edges.push_back(std::move(e));
      }
    }
  }
  for (auto& [k, s] : hg.successors) std::sort(s.begin(), s.end());
  std::sort(hg.edges.begin(), hg.edges.end(), [](const HEdge& a, const HEdge& b) {
    return std::tie(a.from, a.to, a.zone) < std::tie(b.from, b.to, b.zone);
  });
  return hg;
}

char itinerary_sign(int directions, std::pair<int, int> prev, std::pair<int, int> next) {
  auto mod = [&](int x) { return ((x % directions) + directions) % directions; };
  if (next.first == mod(prev.second + 1)) return '+';
  if (next.first == mod(prev.second - 1)) return '-';
  return '?';
}

std::optional<HChain> can_form(const DiskModel& m, int k_from, int k_to) {
  pair_of(m, k_from);
  pair_of(m, k_to);
  if (k_from == k_to) return std::nullopt;
  // step a -> b with the sign of the run it belongs to
  std::map<int, std::vector<std::pair<int, char>>> step;
  for (const Run& r : runs(m)) {
    const int n = static_cast<int>(r.ks.size());
    for (int p = 0; p < n; ++p) {
      if (p + 1 < n) step[r.ks[p]].push_back({r.ks[p + 1], r.sign});
      else if (r.cyclic && n > 1) step[r.ks[p]].push_back({r.ks[0], r.sign});
    }
  }
  std::map<int, std::vector<int>> back;
  for (auto& [a, bs] : step) {
    std::sort(bs.begin(), bs.end());
    for (auto [b, s] : bs) back[b].push_back(a);
  }
  std::map<int, int> dist{{k_to, 0}};
  std::deque<int> queue{k_to};
  while (!queue.empty()) {
    int b = queue.front();
    queue.pop_front();
    for (int a : back[b])
      if (!dist.count(a)) {
        dist[a] = dist[b] + 1;
        queue.push_back(a);
      }
  }
  if (!dist.count(k_from)) return std::nullopt;
  HChain chain;
  int cur = k_from;
  chain.members.push_back(pair_of(m, cur));
  while (cur != k_to) {
    for (auto [b, s] : step[cur]) {
      auto it = dist.find(b);
      if (it != dist.end() && it->second == dist[cur] - 1) {
        chain.itinerary.push_back(s);
        chain.members.push_back(pair_of(m, b));
        cur = b;
        break;
      }
    }
  }
  return chain;
}

const char* to_string(Relation r) {
  switch (r) {
    case Relation::Less: return "<";
    case Relation::Greater: return ">";
    case Relation::Equal: return "=";
  }
  return "?";
}

bool satisfies(const InequalitySystem& s, const std::vector<double>& x, double margin, double eq_tol) {
  for (std::size_t r = 0; r < s.lhs.size(); ++r) {
    double v = std::inner_product(s.lhs[r].begin(), s.lhs[r].end(), x.begin(), 0.0);
    switch (s.rel[r]) {
      case Relation::Less:
        if (!(v <= -margin) || v >= 0.0) return false;
        break;
      case Relation::Greater:
        if (!(v >= margin) || v <= 0.0) return false;
        break;
      case Relation::Equal:
        if (std::abs(v) > eq_tol) return false;
        break;
    }
  }
  return true;
}

std::vector<InequalitySystem> feasibility(const HChain& chain, double eps) {
  const std::size_t n = chain.members.size();
  std::vector<int> vars;
  for (auto [k, j] : chain.members) vars.push_back(k);
  if (n == 1) {
    InequalitySystem up{vars, {{1.0}}, {Relation::Greater}, {eps}, eps};
    InequalitySystem down{vars, {{1.0}}, {Relation::Less}, {-eps}, eps};
    return {up, down};
  }
  InequalitySystem s;
  s.variables = vars;
  std::vector<double> partial(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::vector<double> row(n, 0.0);
    std::fill(row.begin(), row.begin() + i + 1, 1.0);
    s.lhs.push_back(row);
    bool plus = chain.itinerary[i] == '+';
    s.rel.push_back(plus ? Relation::Less : Relation::Greater);
    partial[i] = plus ? -eps : eps;
  }
  s.lhs.push_back(std::vector<double>(n, 1.0));
  s.rel.push_back(Relation::Equal);
  s.witness.assign(n, 0.0);
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s.witness[i] = partial[i] - prev;
    prev = partial[i];
  }
  s.margin = eps;
  if (!satisfies(s, s.witness, 0.5 * eps)) throw TheoremViolation("H-chain inequality system has no witness");
  return {s};
}

MarginResult max_margin(const InequalitySystem& s) {
  // y = x + 1 in [0, 2], last variable is the margin t in [0, 1]
  const std::size_t n = s.variables.size();
  LinearProgram lp;
  lp.c.assign(n + 1, 0.0);
  lp.c[n] = 1.0;
  auto add = [&](std::vector<double> row, double t_coef, double rhs) {
    row.resize(n + 1, 0.0);
    row[n] = t_coef;
    lp.A.push_back(std::move(row));
    lp.b.push_back(rhs);
  };
  for (std::size_t r = 0; r < s.lhs.size(); ++r) {
    const auto& a = s.lhs[r];
    double sum = std::accumulate(a.begin(), a.end(), 0.0);
    std::vector<double> neg(a.size());
    std::transform(a.begin(), a.end(), neg.begin(), [](double v) { return -v; });
    switch (s.rel[r]) {
      case Relation::Less: add(a, 1.0, sum); break;
      case Relation::Greater: add(neg, 1.0, -sum); break;
      case Relation::Equal:
        add(a, 0.0, sum);
        add(neg, 0.0, -sum);
        break;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n, 0.0);
    row[i] = 1.0;
    add(row, 0.0, 2.0);
  }
  add(std::vector<double>(n, 0.0), 1.0, 1.0);
  LpSolution sol = solve_lp(lp);
  MarginResult out;
  if (sol.status != LpSolution::Status::Optimal) return out;
  out.margin = sol.value;
  out.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.x[i] = sol.x[i] - 1.0;
  return out;
}

InequalitySystem union_system(const DiskModel&, const HGraph& hg, const UnionGraph& u) {
  std::set<int> vs;
  for (const auto& p : u.paths) vs.insert(p.vertices.begin(), p.vertices.end());
  InequalitySystem s;
  s.variables.assign(vs.begin(), vs.end());
  std::map<int, std::size_t> col;
  for (std::size_t i = 0; i < s.variables.size(); ++i) col[s.variables[i]] = i;
  for (const auto& p : u.paths) {
    std::vector<double> row(s.variables.size(), 0.0);
    auto take = [&](int k) {
      auto it = col.find(k);
      if (it != col.end()) row[it->second] += 1.0;
    };
    take(p.vertices[0]);
    for (std::size_t e = 0; e < p.zones.size(); ++e) {
      const HEdge* edge = hg.find(p.vertices[e], p.vertices[e + 1], p.zones[e]);
      for (std::size_t c = 1; c < edge->chain.size(); ++c) {
        s.lhs.push_back(row);
        s.rel.push_back(edge->sign == '+' ? Relation::Less : Relation::Greater);
        take(edge->chain[c]);
      }
    }
    s.lhs.push_back(row);
    s.rel.push_back(Relation::Equal);
  }
  return s;
}

bool union_has_cycle(const UnionGraph& u) {
  std::set<std::tuple<int, int, int>> edges;
  for (const auto& p : u.paths)
    for (std::size_t e = 0; e < p.zones.size(); ++e) edges.insert({p.vertices[e], p.vertices[e + 1], p.zones[e]});
  UnionFind uf;
  for (auto [a, b, z] : edges)
    if (!uf.unite(a, b)) return true;
  return false;
}

UnionVerdict validate_union(const DiskModel& m, const HGraph& hg, const UnionGraph& u) {
  for (const auto& p : u.paths) {
    if (p.vertices.size() != p.zones.size() + 1 || p.zones.empty()) return {false, "not-admissible"};
    std::set<int> vs(p.vertices.begin(), p.vertices.end());
    std::set<int> zs(p.zones.begin(), p.zones.end());
    if (vs.size() != p.vertices.size() || zs.size() != p.zones.size()) return {false, "not-admissible"};
    for (std::size_t e = 0; e < p.zones.size(); ++e)
      if (!hg.find(p.vertices[e], p.vertices[e + 1], p.zones[e])) return {false, "not-admissible"};
  }
  std::set<int> starts, ends;
  for (const auto& p : u.paths)
    if (!starts.insert(p.vertices.front()).second) return {false, "shared-start"};
  for (const auto& p : u.paths)
    if (!ends.insert(p.vertices.back()).second) return {false, "shared-end"};
  std::map<int, std::set<int>> in_zones, out_zones;
  for (const auto& p : u.paths)
    for (std::size_t e = 0; e < p.zones.size(); ++e) {
      out_zones[p.vertices[e]].insert(p.zones[e]);
      in_zones[p.vertices[e + 1]].insert(p.zones[e]);
    }
  std::set<int> touched;
  for (auto& [v, z] : in_zones) touched.insert(v);
  for (auto& [v, z] : out_zones) touched.insert(v);
  for (int v : touched) {
    const auto& in = in_zones[v];
    const auto& out = out_zones[v];
    if (in.size() > 1 || out.size() > 1) return {false, "direction-conflict"};
    if (!in.empty() && !out.empty() && *in.begin() == *out.begin()) return {false, "direction-conflict"};
  }
  if (max_margin(union_system(m, hg, u)).margin <= 1e-9) return {false, "infeasible"};
  if (union_has_cycle(u)) throw TheoremViolation("accepted union graph contains a cycle");
  return {true, ""};
}

std::vector<AdmissiblePath> admissible_paths(const HGraph& hg, std::size_t max_edges) {
  std::map<int, std::vector<const HEdge*>> out;
  for (const auto& e : hg.edges) out[e.from].push_back(&e);
  std::vector<AdmissiblePath> result;
  AdmissiblePath cur;
  std::function<void()> dfs = [&]() {
    if (!cur.zones.empty()) result.push_back(cur);
    if (cur.zones.size() >= max_edges) return;
    for (const HEdge* e : out[cur.vertices.back()]) {
      if (std::find(cur.vertices.begin(), cur.vertices.end(), e->to) != cur.vertices.end()) continue;
      if (std::find(cur.zones.begin(), cur.zones.end(), e->zone) != cur.zones.end()) continue;
      cur.vertices.push_back(e->to);
      cur.zones.push_back(e->zone);
      dfs();
      cur.vertices.pop_back();
      cur.zones.pop_back();
    }
  };
  for (int v : hg.vertices) {
    cur = {{v}, {}};
    dfs();
  }
  return result;
}

std::string BifurcationEvent::key() const {
  auto b = broken, f = formed;
  std::sort(b.begin(), b.end());
  std::sort(f.begin(), f.end());
  std::ostringstream os;
  for (auto [k, j] : b) os << k << "," << j << ";";
  os << "|";
  for (auto [k, j] : f) os << k << "," << j << ";";
  os << "|" << j1 << ">" << land_j1 << "," << kn << ">" << land_kn << "|" << sign;
  return os.str();
}

namespace {

BifurcationEvent make_event(const DiskModel& m, const std::vector<int>& ks, const std::vector<int>& zones,
                            const InequalitySystem& sys) {
  BifurcationEvent e;
  for (int k : ks) e.broken.push_back(pair_of(m, k));
  for (std::size_t i = 0; i + 1 < ks.size(); ++i) e.formed.emplace_back(e.broken[i].first, e.broken[i + 1].second);
  e.zones = zones;
  e.rank = static_cast<int>(e.broken.size() - e.formed.size());
  e.system = sys;
  auto col = [&](int k) {
    return static_cast<std::size_t>(std::find(sys.variables.begin(), sys.variables.end(), k) - sys.variables.begin());
  };
  double x1 = sys.witness[col(ks.front())];
  double xn = sys.witness[col(ks.back())];
  e.sign = x1 > 0 ? '+' : '-';
  e.j1 = e.broken.front().second;
  e.kn = e.broken.back().first;
  e.land_j1 = landing_target(m, m.zone_of(ks.front(), x1 > 0 ? Side::Upper : Side::Lower), false);
  e.land_kn = landing_target(m, m.zone_of(ks.back(), xn > 0 ? Side::Lower : Side::Upper), true);
  return e;
}

}  // namespace

std::vector<BifurcationEvent> enumerate_rank1(const DiskModel& m) {
  std::vector<BifurcationEvent> events;
  std::set<std::string> seen;
  auto push = [&](BifurcationEvent e) {
    if (seen.insert(e.key()).second) events.push_back(std::move(e));
  };
  for (const auto& h : m.graph.homoclinics) {
    HChain single{{{h.k, h.j}}, {}};
    for (const auto& sys : feasibility(single)) push(make_event(m, {h.k}, {}, sys));
  }
  const HGraph hg = build_hgraph(m);
  std::map<int, std::vector<const HEdge*>> out;
  for (const auto& e : hg.edges) out[e.from].push_back(&e);
  std::vector<int> ks, zones;
  std::function<void()> dfs = [&]() {
    if (!zones.empty()) {
      UnionGraph u;
      for (std::size_t i = 0; i < zones.size(); ++i) u.paths.push_back({{ks[i], ks[i + 1]}, {zones[i]}});
      InequalitySystem sys = union_system(m, hg, u);
      std::map<int, double> x;
      double sign = hg.find(ks[0], ks[1], zones[0])->sign == '+' ? -1.0 : 1.0;
      for (int k : ks) {
        x[k] = sign;
        sign = -sign;
      }
      sys.witness.clear();
      for (int v : sys.variables) sys.witness.push_back(x[v]);
      sys.margin = 1.0;
      if (!satisfies(sys, sys.witness, 0.5)) {
        MarginResult r = max_margin(sys);
        if (r.margin <= 1e-9) return;
        sys.witness = r.x;
        sys.margin = r.margin;
      }
      push(make_event(m, ks, zones, sys));
    }
    for (const HEdge* e : out[ks.back()]) {
      if (!zones.empty() && zones.back() == e->zone) continue;
      if (std::find(ks.begin(), ks.end(), e->to) != ks.end()) continue;
      ks.push_back(e->to);
      zones.push_back(e->zone);
      dfs();
      ks.pop_back();
      zones.pop_back();
    }
  };
  for (int v : hg.vertices) {
    ks = {v};
    zones.clear();
    dfs();
  }
  return events;
}

namespace {

std::vector<int> cylinder_ks(const Zone& z) { return z.ccw ? z.lower.homoclinics : z.upper.homoclinics; }

}  // namespace

DiskModel apply_event(const DiskModel& m, const BifurcationEvent& e) {
  SeparatrixGraph g;
  g.degree = m.graph.degree;
  std::set<std::pair<int, int>> broken(e.broken.begin(), e.broken.end());
  for (const auto& h : m.graph.homoclinics)
    if (!broken.count({h.k, h.j})) g.homoclinics.push_back({h.k, h.j, h.tau, {}});
  for (auto [k, j] : e.formed) g.homoclinics.push_back({k, j, 0.0, {}});
  g.landing = m.graph.landing;
  g.landing[e.j1] = e.land_j1;
  g.landing[e.kn] = e.land_kn;
  std::set<int> landed;
  for (auto [ell, v] : g.landing) landed.insert(v);

  // homoclinics enclosed between a formed homoclinic and the boundary it runs along
  std::set<int> enclosed;
  std::map<int, int> formed_in_zone;
  if (!e.zones.empty()) {
    const HGraph hg = build_hgraph(m);
    for (std::size_t i = 0; i < e.zones.size(); ++i) {
      const HEdge* edge = hg.find(e.broken[i].first, e.broken[i + 1].first, e.zones[i]);
      if (!edge) throw PreconditionError("event does not belong to this model");
      for (std::size_t c = 1; c + 1 < edge->chain.size(); ++c) enclosed.insert(edge->chain[c]);
      formed_in_zone.emplace(e.zones[i], e.formed[i].first);
    }
  }

  std::vector<std::pair<int, int>> pending;  // center, old zone
  for (const auto& c : m.graph.centers) {
    if (landed.count(c.equilibrium)) continue;
    const int zone = m.zone_of(c.k, c.side);
    const Zone& z = m.zones[zone];
    const Side side = z.ccw ? Side::Upper : Side::Lower;
    int anchor = -1;
    for (int k : cylinder_ks(z))
      if (!broken.count(pair_of(m, k)) && !enclosed.count(k)) {
        anchor = k;
        break;
      }
    if (anchor < 0 && formed_in_zone.count(zone)) anchor = formed_in_zone[zone];
    if (anchor >= 0) g.centers.push_back({c.equilibrium, anchor, side});
    else pending.emplace_back(c.equilibrium, zone);
  }
  g.sort();
  DiskModel out = decompose(g);
  if (pending.empty()) return out;

  std::set<int> known;
  for (const auto& c : g.centers) known.insert(c.equilibrium);
  std::vector<int> fresh_zones;
  for (std::size_t i = 0; i < out.zones.size(); ++i) {
    const Zone& z = out.zones[i];
    if (z.kind == ZoneKind::CenterCylinder && !known.count(z.equilibria[0])) fresh_zones.push_back(static_cast<int>(i));
  }
  if (fresh_zones.size() != pending.size()) throw DecompositionError("event leaves an unmatched center");
  std::vector<bool> used(pending.size(), false);
  for (int nz : fresh_zones) {
    const Zone& z = out.zones[nz];
    auto ks = cylinder_ks(z);
    std::set<int> ends;
    for (int k : ks) {
      ends.insert(k);
      ends.insert(out.graph.homoclinic_k(k)->j);
    }
    int pick = -1;
    for (std::size_t p = 0; p < pending.size() && pick < 0; ++p) {
      if (used[p]) continue;
      bool touches = pending.size() == 1;
      for (int k : cylinder_ks(m.zones[pending[p].second])) {
        auto [hk, hj] = pair_of(m, k);
        touches = touches || ends.count(hk) || ends.count(hj);
      }
      if (touches) pick = static_cast<int>(p);
    }
    if (pick < 0) throw DecompositionError("event leaves an unmatched center");
    used[pick] = true;
    g.centers.push_back({pending[pick].first, ks[0], z.ccw ? Side::Upper : Side::Lower});
  }
  g.sort();
  return decompose(g);
}

RankSearch decompose_rank_k(const DiskModel& from, const DiskModel& target, std::size_t max_states) {
  const int k = from.counts.h - target.counts.h;
  if (k < 1 || from.counts.mstar != target.counts.mstar || from.counts.N != target.counts.N ||
      from.graph.degree != target.graph.degree)
    throw PreconditionError("target is not reachable by a multiplicity-preserving bifurcation");
  const std::string goal = labelled_key(target.graph);
  struct Node {
    DiskModel model;
    std::vector<BifurcationEvent> steps;
  };
  RankSearch result;
  std::deque<Node> queue{{from, {}}};
  std::unordered_set<std::string> seen{labelled_key(from.graph)};
  while (!queue.empty()) {
    Node node = std::move(queue.front());
    queue.pop_front();
    ++result.states_explored;
    if (labelled_key(node.model.graph) == goal) {
      result.found = true;
      result.steps = std::move(node.steps);
      return result;
    }
    if (static_cast<int>(node.steps.size()) >= k || seen.size() > max_states) continue;
    for (const auto& ev : enumerate_rank1(node.model)) {
      DiskModel next = apply_event(node.model, ev);
      if (next.counts.h < target.counts.h) continue;
      if (!seen.insert(labelled_key(next.graph)).second) continue;
      auto steps = node.steps;
      steps.push_back(ev);
      queue.push_back({std::move(next), std::move(steps)});
    }
  }
  return result;
}

std::vector<AdmissiblePath> brute_force_chained(const DiskModel& m, const HGraph& hg, int max_n) {
  std::vector<AdmissiblePath> found;
  const int total = static_cast<int>(hg.edges.size());
  std::vector<int> pick;
  std::function<void(int, int)> choose = [&](int start, int n) {
    if (static_cast<int>(pick.size()) == n) {
      std::set<int> vs;
      for (int i : pick) {
        vs.insert(hg.edges[i].from);
        vs.insert(hg.edges[i].to);
      }
      if (static_cast<int>(vs.size()) != n + 1) return;
      UnionGraph u;
      for (int i : pick) u.paths.push_back({{hg.edges[i].from, hg.edges[i].to}, {hg.edges[i].zone}});
      if (!validate_union(m, hg, u).accepted) return;
      std::map<int, std::pair<int, int>> next;  // vertex -> (successor, zone)
      std::set<int> has_pred;
      for (int i : pick) {
        next[hg.edges[i].from] = {hg.edges[i].to, hg.edges[i].zone};
        has_pred.insert(hg.edges[i].to);
      }
      std::vector<int> heads;
      for (int v : vs)
        if (!has_pred.count(v)) heads.push_back(v);
      if (heads.size() != 1) throw TheoremViolation("accepted union of single-edge paths is not a path");
      AdmissiblePath p{{heads[0]}, {}};
      while (next.count(p.vertices.back())) {
        auto [to, zone] = next[p.vertices.back()];
        p.vertices.push_back(to);
        p.zones.push_back(zone);
      }
      if (static_cast<int>(p.vertices.size()) != n + 1)
        throw TheoremViolation("accepted union of single-edge paths is not a path");
      found.push_back(std::move(p));
      return;
    }
    for (int i = start; i < total; ++i) {
      pick.push_back(i);
      choose(i + 1, n);
      pick.pop_back();
    }
  };
  for (int n = 1; n <= max_n; ++n) choose(0, n);
  return found;
}

}  // namespace cpvf
