#include "cpvf/tracer.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>

#include "cpvf/error.hpp"
#include "cpvf/ode.hpp"
#include "cpvf/quadrature.hpp"

namespace cpvf {

TraceConfig resolve(const TraceConfig& cfg, int degree, std::span<const EquilibriumPoint> eqs) {
  TraceConfig r = cfg;
  if (r.r_inf <= 0.0) r.r_inf = 10.0 * (1.0 + max_root_modulus(eqs));
  if (r.angle_tol <= 0.0) r.angle_tol = std::numbers::pi / (8.0 * (degree - 1));
  if (4.0 * max_root_modulus(eqs) >= r.r_inf) throw PreconditionError("R_inf must exceed 4 max|zeta|");
  return r;
}

cplx separatrix_start(const Polynomial& p, int ell, double radius) {
  const double theta = std::numbers::pi * ell / (p.degree() - 1);
  cplx z = std::polar(radius, theta);
  const double t0 = phi_inf(p, z).real();
  for (int it = 0; it < 20; ++it) {
    cplx diff = phi_inf(p, z) - t0;
    if (std::abs(diff) <= 1e-15 * std::abs(t0)) break;
    z -= diff * p(z);
  }
  return z;
}

namespace {

// Radius inside which the linear part traps the orbit of a simple sink or source.
double capture_radius(const Polynomial& p, std::span<const EquilibriumPoint> eqs, std::size_t i) {
  const auto& e = eqs[i];
  if (e.multiplicity != 1 || e.kind == EquilibriumKind::Center) return 0.0;
  double sep = 1.0 + std::abs(e.location);
  for (std::size_t j = 0; j < eqs.size(); ++j)
    if (j != i) sep = std::min(sep, std::abs(eqs[j].location - e.location));
  auto t = p.taylor(e.location);
  const double re = std::abs(t[1].real());
  double r = std::min(0.25 * sep, 1e-3 * (1.0 + std::abs(e.location)));
  for (int it = 0; it < 200; ++it) {
    double k = 0.0, rp = 1.0;
    for (std::size_t n = 2; n < t.size(); ++n) {
      k += std::abs(t[n]) * rp;
      rp *= r;
    }
    if (k * r <= 0.5 * re) return r;
    r *= 0.5;
  }
  return 0.0;
}

struct Field {
  const Polynomial& p;
  double dir;
  double radius;
  State<3> operator()(const State<3>& y) const {
    cplx z{y[0], y[1]};
    cplx v = p(z);
    double a = std::abs(v);
    double s = std::sqrt(1.0 + std::norm(z) / (radius * radius));
    double w = s / std::sqrt(1.0 + a * a);
    cplx dz = dir * v * w;
    return {dz.real(), dz.imag(), w};
  }
};

}  // namespace

SeparatrixTrace trace(const Polynomial& p, std::span<const EquilibriumPoint> eqs, int ell, const TraceConfig& in) {
  const TraceConfig cfg = resolve(in, p.degree(), eqs);
  const int d = p.degree();
  const int m = 2 * (d - 1);
  const double R = cfg.r_inf;
  const double dir = ell % 2 ? 1.0 : -1.0;
  const double unit = std::numbers::pi / (d - 1);

  SeparatrixTrace out;
  out.ell = ell;
  const cplx z0 = separatrix_start(p, ell, R);
  const double phi0 = phi_inf(p, z0).real();
  out.start_offset = phi0;
  out.polyline.push_back(z0);

  std::vector<double> capture(eqs.size());
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    bool attracting = dir > 0 ? eqs[i].kind == EquilibriumKind::Sink : eqs[i].kind == EquilibriumKind::Source;
    capture[i] = attracting ? capture_radius(p, eqs, i) : 0.0;
  }
  const double landing_eps = cfg.landing_eps_rel * R;
  std::vector<double> last_dist(eqs.size(), 1e300);

  bool armed = false;
  bool done = false;
  StepControl ctl;
  ctl.rtol = cfg.rtol;
  ctl.atol = cfg.atol;
  ctl.h_init = 1e-3 * R;
  ctl.h_max = cfg.max_step_rel * R;
  ctl.max_steps = cfg.max_steps;

  auto observer = [&](const State<3>& prev, const State<3>& y, double) {
    cplx z{y[0], y[1]}, zp{prev[0], prev[1]};
    out.polyline.push_back(z);
    out.accumulated_time = y[2];
    const double r = std::abs(z);
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      double dist = std::abs(z - eqs[i].location);
      if (dist < std::max(landing_eps, capture[i]) && dist < last_dist[i]) {
        out.outcome = SeparatrixTrace::Outcome::Landing;
        out.equilibrium = static_cast<int>(i);
        out.polyline.push_back(eqs[i].location);
        done = true;
        return StepVerdict::Stop;
      }
      last_dist[i] = dist;
    }
    if (r < R * (1.0 - 1e-3)) armed = true;
    if (armed && r > R && r > std::abs(zp)) {
      armed = false;
      cplx w = phi_inf(p, z);
      if (std::abs(w.imag()) < cfg.homoclinic_tol) {
        double ang = std::arg(z);
        int idx = static_cast<int>(std::lround(ang / unit));
        double dev = std::abs(ang - idx * unit);
        idx = ((idx % m) + m) % m;
        if (dev > cfg.angle_tol || (idx % 2) == (ell % 2)) {
          std::ostringstream os;
          os << "separatrix " << ell << " left at angle " << ang << " outside every admissible direction";
          throw TraceError(os.str(), ell, ang);
        }
        out.outcome = SeparatrixTrace::Outcome::Homoclinic;
        out.partner = idx;
        out.tau = dir * phi0 + y[2] - dir * w.real();
        done = true;
        return StepVerdict::Stop;
      }
    }
    return StepVerdict::Continue;
  };

  auto status = dormand_prince<3>(Field{p, dir, R}, State<3>{z0.real(), z0.imag(), 0.0}, ctl, observer);
  if (!done) {
    std::ostringstream os;
    os << "separatrix " << ell << (status == IntegrationStatus::BudgetExhausted ? ": step budget exhausted"
                                                                                : ": step size underflow")
       << " near " << out.polyline.back();
    throw TraceError(os.str(), ell, std::arg(out.polyline.back()));
  }
  return out;
}

namespace {

double point_segment(cplx q, cplx a, cplx b) {
  cplx ab = b - a;
  double n = std::norm(ab);
  if (n == 0.0) return std::abs(q - a);
  double t = std::clamp(((q - a) * std::conj(ab)).real() / n, 0.0, 1.0);
  return std::abs(q - (a + t * ab));
}

double directed(std::span<const cplx> a, std::span<const cplx> b) {
  double worst = 0.0;
  for (const auto& q : a) {
    double best = 1e300;
    if (b.size() == 1) best = std::abs(q - b[0]);
    for (std::size_t i = 1; i < b.size(); ++i) best = std::min(best, point_segment(q, b[i - 1], b[i]));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double hausdorff(std::span<const cplx> a, std::span<const cplx> b) { return std::max(directed(a, b), directed(b, a)); }

namespace {

// Portion of a polyline inside |z| <= rho, with exact crossing points.
std::vector<cplx> clip_to_disk(std::span<const cplx> pts, double rho) {
  std::vector<cplx> out;
  auto crossing = [&](cplx a, cplx b) {
    double lo = 0.0, hi = 1.0;
    bool a_in = std::abs(a) <= rho;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      ((std::abs(a + mid * (b - a)) <= rho) == a_in ? lo : hi) = mid;
    }
    return a + 0.5 * (lo + hi) * (b - a);
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool in = std::abs(pts[i]) <= rho;
    if (i > 0 && in != (std::abs(pts[i - 1]) <= rho)) out.push_back(crossing(pts[i - 1], pts[i]));
    if (in) out.push_back(pts[i]);
  }
  return out;
}

SeparatrixGraph assemble(const Polynomial& p, std::span<const EquilibriumPoint> eqs, const TraceConfig& cfg,
                         std::vector<SeparatrixTrace>& traces) {
  const int m = static_cast<int>(traces.size());
  SeparatrixGraph g;
  g.degree = p.degree();
  g.equilibria.assign(eqs.begin(), eqs.end());
  for (int ell = 0; ell < m; ++ell) {
    auto& t = traces[ell];
    if (t.outcome == SeparatrixTrace::Outcome::Landing) {
      g.landing[ell] = t.equilibrium;
      g.landing_polylines[ell] = std::move(t.polyline);
      continue;
    }
    if (ell % 2 == 0) continue;
    const auto& back = traces[t.partner];
    if (back.outcome != SeparatrixTrace::Outcome::Homoclinic || back.partner != ell) {
      std::ostringstream os;
      os << "separatrix " << ell << " reaches " << t.partner << " but the backward trace disagrees";
      throw TraceError(os.str(), ell);
    }
    if (std::abs(t.tau - back.tau) > cfg.time_tol_rel * t.tau) {
      std::ostringstream os;
      os << "homoclinic (" << ell << "," << t.partner << ") times disagree: " << t.tau << " vs " << back.tau;
      throw TraceError(os.str(), ell);
    }
    double hd = hausdorff(clip_to_disk(t.polyline, 0.5 * cfg.r_inf), clip_to_disk(back.polyline, 0.5 * cfg.r_inf));
    if (hd > cfg.match_tol_rel * cfg.r_inf) {
      std::ostringstream os;
      os << "homoclinic (" << ell << "," << t.partner << ") forward and backward curves differ by " << hd;
      throw TraceError(os.str(), ell);
    }
    g.homoclinics.push_back({ell, t.partner, t.tau, std::move(t.polyline)});
  }
  g.sort();
  return g;
}

}  // namespace

SeparatrixGraph build_graph(const Polynomial& p, std::span<const EquilibriumPoint> eqs, const TraceConfig& in) {
  const TraceConfig cfg = resolve(in, p.degree(), eqs);
  const int m = 2 * (p.degree() - 1);
  std::vector<SeparatrixTrace> traces(m);
  std::vector<std::exception_ptr> errors(m);
#pragma omp parallel for schedule(dynamic)
  for (int ell = 0; ell < m; ++ell) {
    try {
      traces[ell] = trace(p, eqs, ell, cfg);
    } catch (...) {
      errors[ell] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return assemble(p, eqs, cfg, traces);
}

SeparatrixGraph build_graph_serial(const Polynomial& p, std::span<const EquilibriumPoint> eqs, const TraceConfig& in) {
  const TraceConfig cfg = resolve(in, p.degree(), eqs);
  const int m = 2 * (p.degree() - 1);
  std::vector<SeparatrixTrace> traces;
  for (int ell = 0; ell < m; ++ell) traces.push_back(trace(p, eqs, ell, cfg));
  return assemble(p, eqs, cfg, traces);
}

SeparatrixGraph build_graph(const Polynomial& p, const TraceConfig& cfg) {
  auto r = roots(p);
  return build_graph(p, r.equilibria, cfg);
}

}  // namespace cpvf
