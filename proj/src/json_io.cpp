#include "cpvf/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cpvf/error.hpp"

namespace cpvf {

namespace {

void write(std::ostringstream& os, const ojson& j, int indent, int level) {
  auto pad = [&](int l) {
    if (indent > 0) os << '\n' << std::string(static_cast<std::size_t>(indent * l), ' ');
  };
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        pad(level + 1);
        os << ojson(it.key()).dump() << (indent > 0 ? ": " : ":");
        write(os, it.value(), indent, level + 1);
      }
      pad(level);
      os << '}';
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      bool flat = std::all_of(j.begin(), j.end(), [](const ojson& v) { return v.is_primitive(); });
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << (flat && indent > 0 ? ", " : ",");
        if (!flat) pad(level + 1);
        write(os, j[i], indent, level + 1);
      }
      if (!flat) pad(level);
      os << ']';
      return;
    }
    case ojson::value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
      os << buf;
      return;
    }
    default:
      os << j.dump();
  }
}

ojson pair_json(cplx z) { return ojson::array({z.real(), z.imag()}); }

cplx pair_value(const ojson& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("expected [re, im], got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
T field(const ojson& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("field \"") + key + "\": " + e.what());
  }
}

EquilibriumKind kind_from(const std::string& s) {
  for (auto k : {EquilibriumKind::Sink, EquilibriumKind::Source, EquilibriumKind::Center, EquilibriumKind::Multiple})
    if (s == to_string(k)) return k;
  throw ParseError("unknown equilibrium kind \"" + s + "\"");
}

ojson sequence_json(const BoundarySequence& b) {
  ojson o;
  o["first"] = b.first >= 0 ? ojson(b.first) : ojson(nullptr);
  o["homoclinics"] = b.homoclinics;
  o["last"] = b.last >= 0 ? ojson(b.last) : ojson(nullptr);
  return o;
}

}  // namespace

std::string dump(const ojson& j, int indent) {
  std::ostringstream os;
  write(os, j, indent, 0);
  if (indent > 0) os << '\n';
  return os.str();
}

ojson parse_json_text(const std::string& text) {
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

ojson read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

ojson to_json(const Polynomial& p) {
  ojson o;
  o["degree"] = p.degree();
  ojson cs = ojson::array();
  for (cplx c : p.coefficients()) cs.push_back(pair_json(c));
  o["coefficients"] = cs;
  return o;
}

Polynomial polynomial_from_json(const ojson& j) {
  int d = field<int>(j, "degree");
  if (d < 2) throw ParseError("degree must be at least 2");
  const ojson& cs = j.at("coefficients");
  if (!cs.is_array()) throw ParseError("\"coefficients\" must be an array");
  std::vector<cplx> a;
  for (const auto& c : cs) a.push_back(pair_value(c));
  if (static_cast<int>(a.size()) != d - 1)
    throw ParseError("expected " + std::to_string(d - 1) + " coefficients a_0..a_{d-2}, got " + std::to_string(a.size()));
  try {
    return Polynomial(d, a);
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

ojson to_json(const SeparatrixGraph& g) {
  ojson o;
  o["degree"] = g.degree;
  ojson hs = ojson::array();
  for (const auto& h : g.homoclinics) hs.push_back({h.k, h.j, h.tau});
  o["homoclinics"] = hs;
  ojson land = ojson::object();
  for (auto [ell, v] : g.landing) land[std::to_string(ell)] = v;
  o["landing"] = land;
  ojson cs = ojson::array();
  for (const auto& c : g.centers) cs.push_back({c.equilibrium, c.k, to_string(c.side)});
  o["centers"] = cs;
  if (!g.equilibria.empty()) {
    ojson es = ojson::array();
    for (const auto& e : g.equilibria) {
      ojson eo;
      eo["location"] = pair_json(e.location);
      eo["multiplicity"] = e.multiplicity;
      eo["kind"] = to_string(e.kind);
      eo["residue"] = pair_json(e.residue);
      es.push_back(eo);
    }
    o["equilibria"] = es;
  }
  return o;
}

SeparatrixGraph graph_from_json(const ojson& j) {
  SeparatrixGraph g;
  g.degree = field<int>(j, "degree");
  if (g.degree < 2) throw ParseError("degree must be at least 2");
  if (!j.contains("homoclinics") || !j.at("homoclinics").is_array()) throw ParseError("missing \"homoclinics\" array");
  for (const auto& h : j.at("homoclinics")) {
    if (!h.is_array() || h.size() < 2 || !h[0].is_number_integer() || !h[1].is_number_integer())
      throw ParseError("homoclinic entries are [k, j, tau]");
    double tau = h.size() > 2 && h[2].is_number() ? h[2].get<double>() : 0.0;
    g.homoclinics.push_back({h[0].get<int>(), h[1].get<int>(), tau, {}});
  }
  if (!j.contains("landing") || !j.at("landing").is_object()) throw ParseError("missing \"landing\" object");
  for (auto it = j.at("landing").begin(); it != j.at("landing").end(); ++it) {
    int ell = 0;
    try {
      std::size_t used = 0;
      ell = std::stoi(it.key(), &used);
      if (used != it.key().size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ParseError("landing key \"" + it.key() + "\" is not a direction index");
    }
    if (!it.value().is_number_integer()) throw ParseError("landing values are equilibrium indices");
    g.landing[ell] = it.value().get<int>();
  }
  if (j.contains("centers")) {
    for (const auto& c : j.at("centers")) {
      if (!c.is_array() || c.size() != 3) throw ParseError("center entries are [eq, k, side]");
      std::string side = c[2].get<std::string>();
      if (side != "upper" && side != "lower") throw ParseError("center side must be upper or lower");
      g.centers.push_back({c[0].get<int>(), c[1].get<int>(), side == "upper" ? Side::Upper : Side::Lower});
    }
  }
  if (j.contains("equilibria")) {
    for (const auto& e : j.at("equilibria")) {
      EquilibriumPoint p;
      p.location = pair_value(e.at("location"));
      p.multiplicity = field<int>(e, "multiplicity");
      p.kind = kind_from(field<std::string>(e, "kind"));
      if (e.contains("residue")) p.residue = pair_value(e.at("residue"));
      g.equilibria.push_back(p);
    }
  }
  g.sort();
  return g;
}

ojson to_json(const DiskModel& m) {
  ojson o = to_json(m.graph);
  ojson zs = ojson::array();
  for (const auto& z : m.zones) {
    ojson zo;
    zo["kind"] = to_string(z.kind);
    if (z.kind == ZoneKind::CenterCylinder) zo["rotation"] = z.ccw ? "ccw" : "cw";
    if (z.kind == ZoneKind::Sepal) zo["half_plane"] = to_string(z.half_plane);
    zo["upper"] = sequence_json(z.upper);
    zo["lower"] = sequence_json(z.lower);
    zo["ends"] = z.ends;
    zo["equilibria"] = z.equilibria;
    zs.push_back(zo);
  }
  o["zones"] = zs;
  ojson ts = ojson::array();
  for (const auto& t : m.transversals) ts.push_back({t.k, t.j});
  o["transversals"] = ts;
  const Counts& c = m.counts;
  o["counts"] = {{"s", c.s}, {"h", c.h}, {"mstar", c.mstar}, {"N", c.N}, {"dim", c.dim}, {"codim", c.codim}};
  return o;
}

DiskModel model_from_json(const ojson& j) { return decompose(graph_from_json(j)); }

ojson to_json(const Invariants& inv) {
  ojson o;
  ojson as = ojson::array();
  for (cplx a : inv.alphas) as.push_back(pair_json(a));
  o["alphas"] = as;
  o["taus"] = inv.taus;
  ojson ti = ojson::array(), hi = ojson::array();
  for (auto [k, j] : inv.transversal_index) ti.push_back({k, j});
  for (auto [k, j] : inv.homoclinic_index) hi.push_back({k, j});
  o["transversal_index"] = ti;
  o["homoclinic_index"] = hi;
  o["alpha_discrepancy"] = inv.alpha_discrepancy;
  return o;
}

Invariants invariants_from_json(const ojson& j) {
  Invariants inv;
  for (const auto& a : j.at("alphas")) inv.alphas.push_back(pair_value(a));
  inv.taus = field<std::vector<double>>(j, "taus");
  for (const auto& t : j.at("transversal_index")) inv.transversal_index.emplace_back(t[0].get<int>(), t[1].get<int>());
  for (const auto& t : j.at("homoclinic_index")) inv.homoclinic_index.emplace_back(t[0].get<int>(), t[1].get<int>());
  if (j.contains("alpha_discrepancy")) inv.alpha_discrepancy = j.at("alpha_discrepancy").get<std::vector<double>>();
  return inv;
}

ojson to_json(const InequalitySystem& s) {
  ojson o;
  o["variables"] = s.variables;
  o["lhs"] = s.lhs;
  ojson rel = ojson::array();
  for (auto r : s.rel) rel.push_back(to_string(r));
  o["rel"] = rel;
  o["witness"] = s.witness;
  return o;
}

InequalitySystem system_from_json(const ojson& j) {
  InequalitySystem s;
  s.variables = field<std::vector<int>>(j, "variables");
  s.lhs = field<std::vector<std::vector<double>>>(j, "lhs");
  for (const auto& r : field<std::vector<std::string>>(j, "rel")) {
    if (r == "<") s.rel.push_back(Relation::Less);
    else if (r == ">") s.rel.push_back(Relation::Greater);
    else if (r == "=") s.rel.push_back(Relation::Equal);
    else throw ParseError("unknown relation \"" + r + "\"");
  }
  s.witness = field<std::vector<double>>(j, "witness");
  if (s.rel.size() != s.lhs.size()) throw ParseError("\"rel\" and \"lhs\" differ in length");
  for (const auto& row : s.lhs)
    if (row.size() != s.variables.size()) throw ParseError("inequality row has the wrong width");
  if (s.witness.size() != s.variables.size()) throw ParseError("witness has the wrong width");
  return s;
}

ojson to_json(const BifurcationEvent& e) {
  ojson o;
  ojson b = ojson::array(), f = ojson::array();
  for (auto [k, j] : e.broken) b.push_back({k, j});
  for (auto [k, j] : e.formed) f.push_back({k, j});
  o["broken"] = b;
  o["formed"] = f;
  o["rank"] = e.rank;
  o["sign"] = std::string(1, e.sign);
  o["landing"] = {{"j1", e.land_j1}, {"kn", e.land_kn}};
  o["zones"] = e.zones;
  o["system"] = to_json(e.system);
  return o;
}

BifurcationEvent event_from_json(const ojson& j) {
  BifurcationEvent e;
  auto pairs = [&](const char* key) {
    std::vector<std::pair<int, int>> out;
    if (!j.contains(key) || !j.at(key).is_array()) throw ParseError(std::string("missing \"") + key + "\" array");
    for (const auto& p : j.at(key)) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
        throw ParseError(std::string("entries of \"") + key + "\" are [k, j]");
      out.emplace_back(p[0].get<int>(), p[1].get<int>());
    }
    return out;
  };
  e.broken = pairs("broken");
  e.formed = pairs("formed");
  if (e.broken.empty()) throw ParseError("event breaks no homoclinic");
  e.rank = field<int>(j, "rank");
  std::string sign = field<std::string>(j, "sign");
  if (sign != "+" && sign != "-") throw ParseError("sign must be \"+\" or \"-\"");
  e.sign = sign[0];
  const ojson& land = j.at("landing");
  e.land_j1 = field<int>(land, "j1");
  e.land_kn = field<int>(land, "kn");
  e.j1 = e.broken.front().second;
  e.kn = e.broken.back().first;
  if (j.contains("zones")) e.zones = j.at("zones").get<std::vector<int>>();
  if (j.contains("system")) e.system = system_from_json(j.at("system"));
  if (e.rank != static_cast<int>(e.broken.size() - e.formed.size())) throw ParseError("rank does not match broken/formed");
  return e;
}

ojson to_json(const VerifyReport& r) {
  ojson o;
  o["event"] = to_json(r.event);
  o["epsilon"] = r.epsilon;
  o["match"] = r.match;
  o["mismatches"] = r.mismatches;
  o["attempts"] = r.attempts;
  o["perturbed_polynomial"] = to_json(r.perturbed);
  o["predicted"] = to_json(r.predicted);
  o["traced"] = to_json(r.traced);
  return o;
}

ojson to_json(const RankSearch& r) {
  ojson o;
  o["found"] = r.found;
  o["states_explored"] = r.states_explored;
  ojson steps = ojson::array();
  for (const auto& e : r.steps) steps.push_back(to_json(e));
  o["steps"] = steps;
  return o;
}

}  // namespace cpvf
