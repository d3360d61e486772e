#include "cpvf/disk_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "cpvf/error.hpp"

namespace cpvf {

const char* to_string(ZoneKind kind) {
  switch (kind) {
    case ZoneKind::CenterCylinder: return "center";
    case ZoneKind::Sepal: return "sepal";
    case ZoneKind::Strip: return "strip";
  }
  return "?";
}

const EquilibriumSummary& DiskModel::equilibrium(int index) const {
  for (const auto& e : equilibria)
    if (e.index == index) return e;
  throw std::out_of_range("no equilibrium " + std::to_string(index));
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw DecompositionError(msg); }

std::string pair_str(int a, int b) { return "(" + std::to_string(a) + "," + std::to_string(b) + ")"; }

// x strictly inside the arc a -> b going counterclockwise
bool inside_arc(int a, int b, int x, int m) {
  int len = ((b - a) % m + m) % m;
  int off = ((x - a) % m + m) % m;
  return off > 0 && off < len;
}

void validate_structure(const SeparatrixGraph& g) {
  if (g.degree < 2) fail("degree must be at least 2");
  const int m = g.directions();
  std::vector<int> use(m, 0);
  for (const auto& h : g.homoclinics) {
    if (h.k < 0 || h.k >= m || h.j < 0 || h.j >= m) fail("homoclinic " + pair_str(h.k, h.j) + " out of range");
    if (h.k % 2 != 1 || h.j % 2 != 0) fail("homoclinic " + pair_str(h.k, h.j) + " violates parity (k odd, j even)");
    ++use[h.k];
    ++use[h.j];
  }
  for (auto [ell, v] : g.landing) {
    if (ell < 0 || ell >= m) fail("landing direction " + std::to_string(ell) + " out of range");
    if (v < 0) fail("negative equilibrium index");
    ++use[ell];
  }
  for (int ell = 0; ell < m; ++ell)
    if (use[ell] != 1)
      fail("direction " + std::to_string(ell) + (use[ell] ? " is used more than once" : " has no separatrix"));

  for (std::size_t a = 0; a < g.homoclinics.size(); ++a)
    for (std::size_t b = a + 1; b < g.homoclinics.size(); ++b) {
      const auto &h1 = g.homoclinics[a], &h2 = g.homoclinics[b];
      if (inside_arc(h1.k, h1.j, h2.k, m) != inside_arc(h1.k, h1.j, h2.j, m))
        fail("homoclinics " + pair_str(h1.k, h1.j) + " and " + pair_str(h2.k, h2.j) + " cross");
    }
  std::map<int, std::vector<int>> groups;
  for (auto [ell, v] : g.landing) groups[v].push_back(ell);
  for (const auto& [v, ls] : groups) {
    for (const auto& h : g.homoclinics) {
      bool any_in = false, any_out = false;
      for (int ell : ls) (inside_arc(h.k, h.j, ell, m) ? any_in : any_out) = true;
      if (any_in && any_out)
        fail("homoclinic " + pair_str(h.k, h.j) + " separates separatrices landing at " + std::to_string(v));
    }
    for (const auto& [u, other] : groups) {
      if (u <= v) continue;
      // other must lie within a single arc cut out by ls
      std::set<int> arcs;
      for (int x : other) {
        std::size_t arc = ls.size() - 1;
        for (std::size_t i = 0; i + 1 < ls.size(); ++i)
          if (x > ls[i] && x < ls[i + 1]) arc = i;
        arcs.insert(static_cast<int>(arc));
      }
      if (arcs.size() > 1)
        fail("landing trees of equilibria " + std::to_string(v) + " and " + std::to_string(u) + " cross");
    }
  }
}

}  // namespace

std::vector<std::vector<FaceItem>> faces(const SeparatrixGraph& g) {
  const int m = g.directions();
  std::map<int, std::vector<int>> groups;
  for (auto [ell, v] : g.landing) groups[v].push_back(ell);
  std::vector<int> partner(m, -1);
  for (const auto& h : g.homoclinics) {
    partner[h.k] = h.j;
    partner[h.j] = h.k;
  }
  std::vector<bool> seen(m, false);
  std::vector<std::vector<FaceItem>> out;
  for (int start = 0; start < m; ++start) {
    if (seen[start]) continue;
    std::vector<FaceItem> walk;
    int e = start;
    while (!seen[e]) {
      seen[e] = true;
      FaceItem end;
      end.end = e;
      walk.push_back(end);
      const int ell = e;  // arrive at point ell
      FaceItem it;
      if (partner[ell] >= 0) {
        it.type = FaceItem::Type::Chord;
        it.from = ell;
        it.to = partner[ell];
        e = g.mod(partner[ell] + 1);
      } else {
        auto found = g.landing.find(ell);
        if (found == g.landing.end()) fail("direction " + std::to_string(ell) + " has no separatrix");
        const auto& ls = groups[found->second];
        auto pos = std::find(ls.begin(), ls.end(), ell) - ls.begin();
        int prev = ls[(pos + ls.size() - 1) % ls.size()];
        it.type = FaceItem::Type::Landing;
        it.vertex = found->second;
        it.in = ell;
        it.out = prev;
        e = g.mod(prev + 1);
      }
      walk.push_back(it);
    }
    if (e != start) fail("face traversal did not close");
    out.push_back(std::move(walk));
  }
  return out;
}

namespace {

void rotate_canonical(std::vector<int>& ks) {
  if (ks.empty()) return;
  std::rotate(ks.begin(), std::min_element(ks.begin(), ks.end()), ks.end());
}

// Fill one boundary component from a run [out x, chords..., in y].
void fill_component(Zone& z, int x, const std::vector<FaceItem>& chords, int y, bool& is_lower) {
  if (x % 2 == 0) {
    is_lower = true;
    z.lower.first = x;
    for (const auto& c : chords) {
      if (c.from % 2 != 1) fail("inconsistent chord orientation on a lower boundary");
      z.lower.homoclinics.push_back(c.from);
    }
    if (y % 2 != 1) fail("lower boundary must end with an odd separatrix");
    z.lower.last = y;
  } else {
    is_lower = false;
    if (y % 2 != 0) fail("upper boundary must start with an even separatrix");
    z.upper.first = y;
    for (auto it = chords.rbegin(); it != chords.rend(); ++it) {
      if (it->to % 2 != 1) fail("inconsistent chord orientation on an upper boundary");
      z.upper.homoclinics.push_back(it->to);
    }
    z.upper.last = x;
  }
}

Zone classify_face(const std::vector<FaceItem>& walk) {
  Zone z;
  z.walk = walk;
  std::vector<std::size_t> landings;
  for (std::size_t i = 0; i < walk.size(); ++i) {
    if (walk[i].type == FaceItem::Type::End) z.ends.push_back(walk[i].end);
    if (walk[i].type == FaceItem::Type::Landing) landings.push_back(i);
  }
  std::sort(z.ends.begin(), z.ends.end());
  auto chords_between = [&](std::size_t a, std::size_t b) {
    std::vector<FaceItem> cs;
    for (std::size_t i = (a + 1) % walk.size(); i != b; i = (i + 1) % walk.size())
      if (walk[i].type == FaceItem::Type::Chord) cs.push_back(walk[i]);
    return cs;
  };

  if (landings.empty()) {
    z.kind = ZoneKind::CenterCylinder;
    int fwd = 0, bwd = 0;
    std::vector<int> ks;
    for (const auto& it : walk) {
      if (it.type != FaceItem::Type::Chord) continue;
      if (it.from % 2 == 1) {
        ++fwd;
        ks.push_back(it.from);
      } else {
        ++bwd;
        ks.push_back(it.to);
      }
    }
    if (fwd && bwd) fail("cylinder face mixes homoclinic orientations");
    if (ks.empty()) fail("face without separatrices");
    z.ccw = fwd > 0;
    if (!z.ccw) std::reverse(ks.begin(), ks.end());
    rotate_canonical(ks);
    (z.ccw ? z.lower : z.upper).homoclinics = ks;
    return z;
  }
  if (landings.size() == 1) {
    const auto& l = walk[landings[0]];
    if (l.in == l.out) fail("equilibrium " + std::to_string(l.vertex) + " bounds a face through a single separatrix");
    z.kind = ZoneKind::Sepal;
    bool lower = false;
    fill_component(z, l.out, chords_between(landings[0], landings[0]), l.in, lower);
    z.half_plane = lower ? Side::Upper : Side::Lower;
    z.equilibria = {l.vertex};
    return z;
  }
  if (landings.size() == 2) {
    const auto& l1 = walk[landings[0]];
    const auto& l2 = walk[landings[1]];
    if (l1.vertex == l2.vertex) fail("face visits equilibrium " + std::to_string(l1.vertex) + " twice");
    z.kind = ZoneKind::Strip;
    bool a_lower = false, b_lower = false;
    fill_component(z, l1.out, chords_between(landings[0], landings[1]), l2.in, a_lower);
    fill_component(z, l2.out, chords_between(landings[1], landings[0]), l1.in, b_lower);
    if (a_lower == b_lower) fail("strip face needs one upper and one lower boundary");
    int source = a_lower ? l1.vertex : l2.vertex;
    int sink = a_lower ? l2.vertex : l1.vertex;
    z.equilibria = {source, sink};
    return z;
  }
  fail("face touches " + std::to_string(landings.size()) + " equilibria");
}

void check_relations(const BoundarySequence& b, bool lower, const SeparatrixGraph& g) {
  // walk the sequence as (k, j) pairs in flow order
  std::vector<std::pair<int, int>> items;
  if (b.first >= 0) items.emplace_back(-1, b.first);
  for (int k : b.homoclinics) items.emplace_back(k, g.homoclinic_k(k)->j);
  if (b.last >= 0) items.emplace_back(b.last, -1);
  for (std::size_t i = 0; i + 1 < items.size(); ++i) {
    int expect = g.mod(items[i].second + (lower ? 1 : -1));
    if (items[i + 1].first != expect) fail("index relation broken along a zone boundary");
  }
}

double winding(const std::vector<cplx>& poly, cplx c) {
  double total = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    cplx a = poly[i] - c, b = poly[(i + 1) % poly.size()] - c;
    total += std::arg(b / a);
  }
  return total / (2.0 * std::numbers::pi);
}

std::vector<cplx> cylinder_polygon(const SeparatrixGraph& g, const Zone& z) {
  std::vector<cplx> poly;
  auto arc_to = [&](cplx target) {
    if (poly.empty()) return;
    cplx from = poly.back();
    double a0 = std::arg(from), r0 = std::abs(from), r1 = std::abs(target);
    double delta = std::fmod(std::arg(target) - a0 + 4.0 * std::numbers::pi, 2.0 * std::numbers::pi);
    for (int s = 1; s < 32; ++s) {
      double t = s / 32.0;
      poly.push_back(std::polar(r0 + t * (r1 - r0), a0 + t * delta));
    }
  };
  for (const auto& it : z.walk) {
    if (it.type != FaceItem::Type::Chord) continue;
    bool fwd = it.from % 2 == 1;
    const Homoclinic* h = g.homoclinic_k(fwd ? it.from : it.to);
    if (h->polyline.empty()) return {};
    std::vector<cplx> pts = h->polyline;
    if (!fwd) std::reverse(pts.begin(), pts.end());
    arc_to(pts.front());
    poly.insert(poly.end(), pts.begin(), pts.end());
  }
  arc_to(poly.front());
  return poly;
}

}  // namespace

int landing_target(const DiskModel& m, int zone, bool odd) {
  const Zone& z = m.zones.at(zone);
  if (z.kind == ZoneKind::Strip) return odd ? z.equilibria[1] : z.equilibria[0];
  return z.equilibria.at(0);
}

DiskModel decompose(const SeparatrixGraph& input) {
  DiskModel model;
  model.graph = input;
  SeparatrixGraph& g = model.graph;
  g.sort();
  validate_structure(g);
  const int m = g.directions();

  auto walks = faces(g);
  model.end_zone.assign(m, -1);
  for (const auto& w : walks) {
    Zone z = classify_face(w);
    const int id = static_cast<int>(model.zones.size());
    for (int e : z.ends) model.end_zone[e] = id;
    for (const auto& it : z.walk) {
      if (it.type != FaceItem::Type::Chord) continue;
      if (it.from % 2 == 1) {
        model.upper_zone[it.from] = id;
      } else {
        model.lower_zone[it.to] = id;
      }
    }
    check_relations(z.lower, true, g);
    check_relations(z.upper, false, g);
    model.zones.push_back(std::move(z));
  }

  // landing vertices
  std::map<int, std::vector<int>> groups;
  for (auto [ell, v] : g.landing) groups[v].push_back(ell);
  std::map<int, int> sepals;
  for (const auto& z : model.zones)
    if (z.kind == ZoneKind::Sepal) ++sepals[z.equilibria[0]];
  for (const auto& [v, ls] : groups) {
    EquilibriumSummary e;
    e.index = v;
    int sp = sepals.count(v) ? sepals[v] : 0;
    if (sp % 2) fail("equilibrium " + std::to_string(v) + " has an odd number of sepals");
    e.multiplicity = 1 + sp / 2;
    if (sp) {
      e.kind = EquilibriumKind::Multiple;
    } else {
      bool odd = ls[0] % 2 == 1;
      for (int ell : ls)
        if ((ell % 2 == 1) != odd)
          fail("simple equilibrium " + std::to_string(v) + " receives separatrices of both parities");
      e.kind = odd ? EquilibriumKind::Sink : EquilibriumKind::Source;
    }
    model.equilibria.push_back(e);
  }
  for (const auto& z : model.zones) {
    if (z.kind != ZoneKind::Strip) continue;
    if (model.equilibrium(z.equilibria[0]).kind == EquilibriumKind::Sink ||
        model.equilibrium(z.equilibria[1]).kind == EquilibriumKind::Source)
      fail("strip between equilibria of the wrong stability");
  }

  // centers
  std::vector<int> cylinders;
  for (std::size_t i = 0; i < model.zones.size(); ++i)
    if (model.zones[i].kind == ZoneKind::CenterCylinder) cylinders.push_back(static_cast<int>(i));
  std::map<int, int> center_of;  // zone -> equilibrium
  auto assign = [&](int zone, int eq) {
    if (model.zones[zone].kind != ZoneKind::CenterCylinder)
      fail("center " + std::to_string(eq) + " placed outside a cylinder");
    if (center_of.count(zone)) fail("two centers in one cylinder");
    if (groups.count(eq)) fail("center " + std::to_string(eq) + " also receives separatrices");
    center_of[zone] = eq;
  };
  if (!g.centers.empty()) {
    for (const auto& c : g.centers) {
      if (!g.homoclinic_k(c.k)) fail("center placed against missing homoclinic " + std::to_string(c.k));
      assign(model.zone_of(c.k, c.side), c.equilibrium);
    }
  } else if (!g.equilibria.empty() && !g.homoclinics.empty() && !g.homoclinics[0].polyline.empty()) {
    for (int zone : cylinders) {
      auto poly = cylinder_polygon(g, model.zones[zone]);
      for (std::size_t i = 0; i < g.equilibria.size(); ++i) {
        if (g.equilibria[i].kind != EquilibriumKind::Center) continue;
        if (std::lround(winding(poly, g.equilibria[i].location)) == 1) assign(zone, static_cast<int>(i));
      }
    }
  }
  int next = 0;
  for (auto [ell, v] : g.landing) next = std::max(next, v + 1);
  for (const auto& c : g.centers) next = std::max(next, c.equilibrium + 1);
  for (auto [zone, eq] : center_of) next = std::max(next, eq + 1);
  for (int zone : cylinders)
    if (!center_of.count(zone)) {
      if (!g.equilibria.empty()) fail("no center found inside cylinder zone " + std::to_string(zone));
      center_of[zone] = next++;
    }
  if (center_of.size() != cylinders.size()) fail("center count does not match cylinder count");
  g.centers.clear();
  for (auto [zone, eq] : center_of) {
    auto& z = model.zones[zone];
    z.equilibria = {eq};
    const auto& seq = z.ccw ? z.lower : z.upper;
    g.centers.push_back({eq, seq.homoclinics[0], z.ccw ? Side::Upper : Side::Lower});
    model.equilibria.push_back({eq, 1, EquilibriumKind::Center});
  }
  g.sort();
  std::sort(model.equilibria.begin(), model.equilibria.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });

  if (!g.equilibria.empty()) {
    if (model.equilibria.size() != g.equilibria.size())
      fail("graph accounts for " + std::to_string(model.equilibria.size()) + " equilibria, polynomial has " +
           std::to_string(g.equilibria.size()));
    for (const auto& e : model.equilibria) {
      if (e.index >= static_cast<int>(g.equilibria.size())) fail("equilibrium index out of range");
      const auto& num = g.equilibria[e.index];
      if (num.multiplicity != e.multiplicity || num.kind != e.kind)
        fail("equilibrium " + std::to_string(e.index) + " is " + to_string(num.kind) + " numerically but " +
             to_string(e.kind) + " combinatorially");
    }
  }

  for (std::size_t i = 0; i < model.zones.size(); ++i) {
    const auto& z = model.zones[i];
    if (z.kind == ZoneKind::Strip) model.transversals.push_back({z.lower.last, z.upper.first, static_cast<int>(i)});
  }

  Counts& c = model.counts;
  c.h = static_cast<int>(g.homoclinics.size());
  c.s = static_cast<int>(model.transversals.size());
  c.N = static_cast<int>(model.equilibria.size());
  int total = 0;
  for (const auto& e : model.equilibria) {
    c.mstar += e.multiplicity - 1;
    total += e.multiplicity;
  }
  c.dim = 2 * c.s + c.h;
  c.codim = 2 * c.mstar + c.h;
  if (total != g.degree) fail("multiplicities sum to " + std::to_string(total) + ", degree is " + std::to_string(g.degree));
  if (c.s + c.h != c.N - 1) fail("s + h != N - 1");
  if (c.dim + c.codim != 2 * g.degree - 2) fail("dim + codim != 2d - 2");
  return model;
}

}  // namespace cpvf
