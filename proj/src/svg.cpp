#include "cpvf/svg.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "cpvf/error.hpp"
#include "cpvf/ode.hpp"

namespace cpvf {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Canvas {
  std::ostringstream os;
  int w, h;

  Canvas(int w_, int h_) : w(w_), h(h_) {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
       << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& cls, const std::string& stroke,
                double width, const std::string& extra = "") {
    if (pts.size() < 2) return;
    os << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width)
       << "\"" << extra << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) os << (i ? " " : "") << num(pts[i].first) << "," << num(pts[i].second);
    os << "\"/>\n";
  }

  std::string finish() {
    os << "</svg>\n";
    return os.str();
  }
};

}  // namespace

void validate(const RenderSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0) throw PreconditionError("canvas dimensions must be positive");
  if (spec.density < 1) throw PreconditionError("streamline density must be at least 1");
}

std::string render_disk(const DiskModel& m, const RenderSpec& spec) {
  validate(spec);
  const auto& g = m.graph;
  const int n = g.directions();
  const double cx = spec.width / 2.0, cy = spec.height / 2.0;
  const double r = 0.42 * std::min(spec.width, spec.height);
  auto at = [&](double angle, double rad) { return std::make_pair(cx + rad * std::cos(angle), cy - rad * std::sin(angle)); };
  auto dir = [&](int ell) { return ell * std::numbers::pi / (g.degree - 1); };

  Canvas c(spec.width, spec.height);
  c.os << "<circle class=\"boundary\" cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(r)
       << "\" fill=\"#fbfbf7\" stroke=\"black\" stroke-width=\"1.5\"/>\n";

  // equilibrium positions: mean direction of incoming separatrices, centers beside their chord
  std::map<int, std::pair<double, double>> eq_pos;
  std::map<int, std::vector<int>> groups;
  for (auto [ell, v] : g.landing) groups[v].push_back(ell);
  for (const auto& [v, ls] : groups) {
    double sx = 0, sy = 0;
    for (int ell : ls) {
      sx += std::cos(dir(ell));
      sy += std::sin(dir(ell));
    }
    double a = std::atan2(sy, sx), rad = std::hypot(sx, sy) / ls.size();
    eq_pos[v] = at(a, r * std::clamp(0.55 * rad, 0.12, 0.55));
  }
  for (std::size_t zi = 0; zi < m.zones.size(); ++zi) {
    const Zone& z = m.zones[zi];
    if (z.kind != ZoneKind::CenterCylinder) continue;
    const auto& ks = z.ccw ? z.lower.homoclinics : z.upper.homoclinics;
    double sx = 0, sy = 0;
    for (int e : z.ends) {
      sx += std::cos(dir(e) - 0.5 * std::numbers::pi / (g.degree - 1));
      sy += std::sin(dir(e) - 0.5 * std::numbers::pi / (g.degree - 1));
    }
    if (z.ends.empty())
      for (int k : ks) {
        sx += std::cos(dir(k)) + std::cos(dir(g.homoclinic_k(k)->j));
        sy += std::sin(dir(k)) + std::sin(dir(g.homoclinic_k(k)->j));
      }
    eq_pos[z.equilibria[0]] = at(std::atan2(sy, sx), 0.78 * r);
  }

  const double half = 0.5 * std::numbers::pi / (g.degree - 1);
  for (const auto& z : m.zones) {
    if (z.kind == ZoneKind::CenterCylinder || z.ends.empty()) continue;
    std::vector<std::pair<double, double>> pts;
    for (int e : z.ends) pts.push_back(at(dir(e) - half, r));
    for (int v : z.equilibria) pts.push_back(eq_pos[v]);
    c.os << "<polygon class=\"zone " << to_string(z.kind) << "\" fill=\""
         << (z.kind == ZoneKind::Sepal ? "#f3e6c4" : "#e3eef8") << "\" fill-opacity=\"0.6\" stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) c.os << (i ? " " : "") << num(pts[i].first) << "," << num(pts[i].second);
    c.os << "\"/>\n";
  }
  for (const auto& h : g.homoclinics) {
    auto a = at(dir(h.k), r), b = at(dir(h.j), r);
    double mid = 0.5 * (dir(h.k) + dir(h.j));
    if (std::abs(dir(h.k) - dir(h.j)) > std::numbers::pi) mid += std::numbers::pi;
    double span = std::abs(std::remainder(dir(h.k) - dir(h.j), 2 * std::numbers::pi));
    auto ctrl = at(mid, r * std::cos(0.5 * span) * 0.6);
    c.os << "<path class=\"chord\" d=\"M " << num(a.first) << " " << num(a.second) << " Q " << num(ctrl.first) << " "
         << num(ctrl.second) << " " << num(b.first) << " " << num(b.second) << "\" fill=\"none\" stroke=\""
         << spec.homoclinic_stroke << "\" stroke-width=\"2\"/>\n";
  }
  for (auto [ell, v] : g.landing) {
    auto a = at(dir(ell), r);
    auto b = eq_pos[v];
    c.os << "<line class=\"landing\" x1=\"" << num(a.first) << "\" y1=\"" << num(a.second) << "\" x2=\"" << num(b.first)
         << "\" y2=\"" << num(b.second) << "\" stroke=\"" << spec.landing_stroke << "\" stroke-width=\"1.5\"/>\n";
  }
  for (const auto& t : m.transversals) {
    auto a = at(dir(t.k) - half, r), b = at(dir(t.j) - half, r);
    c.os << "<line class=\"transversal\" x1=\"" << num(a.first) << "\" y1=\"" << num(a.second) << "\" x2=\""
         << num(b.first) << "\" y2=\"" << num(b.second) << "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n";
  }
  for (const auto& e : m.equilibria) {
    auto p = eq_pos[e.index];
    c.os << "<circle class=\"equilibrium " << to_string(e.kind) << "\" cx=\"" << num(p.first) << "\" cy=\""
         << num(p.second) << "\" r=\"4\" fill=\"black\"/>\n";
  }
  for (int ell = 0; ell < n; ++ell) {
    auto p = at(dir(ell), r);
    auto q = at(dir(ell), r + 16);
    c.os << "<circle class=\"direction\" cx=\"" << num(p.first) << "\" cy=\"" << num(p.second)
         << "\" r=\"2.5\" fill=\"black\"/>\n"
         << "<text class=\"label\" x=\"" << num(q.first) << "\" y=\"" << num(q.second)
         << "\" font-size=\"13\" text-anchor=\"middle\" dominant-baseline=\"middle\">s" << ell << "</text>\n";
  }
  return c.finish();
}

std::string render_phase(const Polynomial& p, const SeparatrixGraph& g, const RenderSpec& spec) {
  validate(spec);
  double extent = 1.0 + max_root_modulus(g.equilibria.empty() ? roots(p).equilibria : g.equilibria);
  extent *= 1.8;
  const double cx = spec.width / 2.0, cy = spec.height / 2.0;
  const double scale = 0.5 * std::min(spec.width, spec.height) / extent;
  auto px = [&](cplx z) { return std::make_pair(cx + scale * z.real(), cy - scale * z.imag()); };
  auto inside = [&](cplx z) { return std::abs(z.real()) <= extent && std::abs(z.imag()) <= extent; };

  Canvas c(spec.width, spec.height);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  auto field = [&](const State<2>& y) {
    cplx z(y[0], y[1]);
    cplx v = p(z);
    double s = std::abs(v);
    v = s > 1e-12 ? v / s : cplx(0.0);
    return State<2>{v.real(), v.imag()};
  };
  const double cell = 2.0 * extent / spec.density;
  const double h = 0.05 * cell;
  for (int i = 0; i < spec.density; ++i)
    for (int j = 0; j < spec.density; ++j) {
      cplx z0(-extent + (i + 0.5 + jitter(rng)) * cell, -extent + (j + 0.5 + jitter(rng)) * cell);
      std::vector<std::pair<double, double>> pts{px(z0)};
      State<2> y{z0.real(), z0.imag()};
      for (int s = 0; s < 30; ++s) {
        y = rk4_step<2>(field, y, h);
        cplx z(y[0], y[1]);
        if (!inside(z)) break;
        pts.push_back(px(z));
      }
      c.polyline(pts, "streamline", spec.streamline_stroke, 0.8);
    }
  auto clipped = [&](const std::vector<cplx>& poly) {
    std::vector<std::pair<double, double>> pts;
    for (cplx z : poly)
      if (inside(z)) pts.push_back(px(z));
    return pts;
  };
  for (const auto& hcl : g.homoclinics) c.polyline(clipped(hcl.polyline), "separatrix homoclinic", spec.homoclinic_stroke, 2.5);
  for (const auto& [ell, poly] : g.landing_polylines) c.polyline(clipped(poly), "separatrix landing", spec.landing_stroke, 2.0);
  for (const auto& e : g.equilibria) {
    auto q = px(e.location);
    c.os << "<circle class=\"equilibrium " << to_string(e.kind) << "\" cx=\"" << num(q.first) << "\" cy=\""
         << num(q.second) << "\" r=\"4\" fill=\"black\"/>\n";
  }
  return c.finish();
}

}  // namespace cpvf
