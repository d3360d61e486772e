#include "cpvf/invariants.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <optional>
#include <sstream>

#include "cpvf/error.hpp"
#include "cpvf/ode.hpp"
#include "cpvf/quadrature.hpp"

namespace cpvf {

cplx curve_integral(const Polynomial& p, const FrozenCurve& c, double tol) {
  cplx total = 0.0;
  for (const auto& piece : c.pieces) {
    if (piece.points.empty()) continue;
    if (piece.tail_in) total -= tail_integral(p, piece.points.front()).value;
    total += integrate_polyline(p, piece.points, tol).value;
    if (piece.tail_out) total += tail_integral(p, piece.points.back()).value;
  }
  return total;
}

namespace {

double point_segment(cplx q, cplx a, cplx b) {
  cplx ab = b - a;
  double n = std::norm(ab);
  if (n == 0.0) return std::abs(q - a);
  double t = std::clamp(((q - a) * std::conj(ab)).real() / n, 0.0, 1.0);
  return std::abs(q - (a + t * ab));
}

double point_ray(cplx q, cplx a) {
  // ray from a radially outward
  double r = std::abs(a);
  if (r == 0.0) return std::abs(q);
  cplx u = a / r;
  double t = std::max(0.0, (std::conj(u) * (q - a)).real());
  return std::abs(q - (a + t * u));
}

}  // namespace

double curve_distance(const FrozenCurve& c, cplx z) {
  double best = 1e300;
  for (const auto& piece : c.pieces) {
    const auto& pts = piece.points;
    if (pts.empty()) continue;
    if (pts.size() == 1) best = std::min(best, std::abs(z - pts[0]));
    for (std::size_t i = 1; i < pts.size(); ++i) best = std::min(best, point_segment(z, pts[i - 1], pts[i]));
    if (piece.tail_in) best = std::min(best, point_ray(z, pts.front()));
    if (piece.tail_out) best = std::min(best, point_ray(z, pts.back()));
  }
  return best;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw InvariantError(msg); }

// A separatrix as an obstacle for the orthogonal flow, extended radially at its ends near infinity.
struct Barrier {
  int id = -1;  // direction of the separatrix (k for homoclinics)
  std::vector<cplx> pts;
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
};

struct Hit {
  std::size_t barrier;
  std::size_t segment;
  cplx point;
};

std::optional<cplx> intersect(cplx p1, cplx p2, cplx q1, cplx q2) {
  cplx r = p2 - p1, s = q2 - q1;
  double den = r.real() * s.imag() - r.imag() * s.real();
  if (den == 0.0) return std::nullopt;
  cplx qp = q1 - p1;
  double t = (qp.real() * s.imag() - qp.imag() * s.real()) / den;
  double u = (qp.real() * r.imag() - qp.imag() * r.real()) / den;
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return p1 + t * r;
}

struct OrthoPath {
  std::vector<cplx> pts;  // seed first, crossing point last
  Hit hit;
  int end = -1;  // set when the path escapes to infinity through an end instead
  double time = 0.0;
};

struct OrthoField {
  const Polynomial& p;
  double sigma;
  double radius;
  State<3> operator()(const State<3>& y) const {
    cplx z{y[0], y[1]};
    cplx v = p(z);
    double s = std::sqrt(1.0 + std::norm(z) / (radius * radius));
    double w = s / std::sqrt(1.0 + std::norm(v));
    cplx dz = sigma * cplx(0.0, 1.0) * v * w;
    return {dz.real(), dz.imag(), w};
  }
};

OrthoPath ortho_trace(const Polynomial& p, cplx seed, double sigma, double R, const std::vector<Barrier>& barriers,
                      std::size_t max_steps) {
  const int d = p.degree();
  const double unit = std::numbers::pi / (d - 1);
  bool inside = false;
  OrthoPath out;
  out.pts.push_back(seed);
  StepControl ctl;
  ctl.rtol = 1e-11;
  ctl.atol = 1e-14;
  ctl.h_init = 1e-3 * R;
  ctl.h_max = 0.02 * R;
  ctl.max_steps = max_steps;
  bool found = false;
  auto first_hit = [&](cplx a, cplx b, Hit& hit) {
    double bx0 = std::min(a.real(), b.real()), bx1 = std::max(a.real(), b.real());
    double by0 = std::min(a.imag(), b.imag()), by1 = std::max(a.imag(), b.imag());
    double best = 2.0;
    for (std::size_t bi = 0; bi < barriers.size(); ++bi) {
      const auto& br = barriers[bi];
      if (bx1 < br.xmin || bx0 > br.xmax || by1 < br.ymin || by0 > br.ymax) continue;
      for (std::size_t si = 1; si < br.pts.size(); ++si) {
        cplx q1 = br.pts[si - 1], q2 = br.pts[si];
        if (std::max(q1.real(), q2.real()) < bx0 || std::min(q1.real(), q2.real()) > bx1 ||
            std::max(q1.imag(), q2.imag()) < by0 || std::min(q1.imag(), q2.imag()) > by1)
          continue;
        if (auto x = intersect(a, b, q1, q2)) {
          double t = std::abs(*x - a) / std::max(std::abs(b - a), 1e-300);
          if (t < best) {
            best = t;
            hit = {bi, si - 1, *x};
          }
        }
      }
    }
    return best;
  };
  const OrthoField field{p, sigma, R};
  auto observer = [&](const State<3>& prev, const State<3>& y, double h) {
    cplx a{prev[0], prev[1]}, b{y[0], y[1]};
    Hit hit;
    if (double f0 = first_hit(a, b, hit); f0 <= 1.0) {
      out.hit = hit;
      out.time = prev[2] + f0 * (y[2] - prev[2]);
      // redo the step in small pieces to place the crossing and its time accurately
      constexpr int kSub = 256;
      State<3> cur = prev;
      for (int i = 0; i < kSub; ++i) {
        State<3> nxt = i + 1 == kSub ? y : rk4_step<3>(field, cur, h / kSub);
        cplx c0{cur[0], cur[1]}, c1{nxt[0], nxt[1]};
        double f = first_hit(c0, c1, hit);
        if (f <= 1.0) {
          out.hit = hit;
          out.time = cur[2] + f * (nxt[2] - cur[2]);
          break;
        }
        out.pts.push_back(c1);
        cur = nxt;
      }
      out.pts.push_back(out.hit.point);
      found = true;
      return StepVerdict::Stop;
    }
    out.pts.push_back(b);
    if (std::abs(b) < 0.9 * R) inside = true;
    if (inside && std::abs(b) > 3.0 * R && std::abs(b) > std::abs(a)) {
      double ang = std::fmod(std::arg(b) + 2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
      out.end = (static_cast<int>(std::floor(ang / unit)) + 1) % (2 * (d - 1));
      out.time = y[2];
      found = true;
      return StepVerdict::Stop;
    }
    return StepVerdict::Continue;
  };
  dormand_prince<3>(field, State<3>{seed.real(), seed.imag(), 0.0}, ctl, observer);
  if (!found) fail("orthogonal trajectory from " + std::to_string(seed.real()) + "+" + std::to_string(seed.imag()) +
                   "i never met a separatrix");
  return out;
}

// Cubic Hermite refinement of a trajectory polyline, using the field direction as tangent.
std::vector<cplx> refine(const Polynomial& p, const std::vector<cplx>& pts, int parts) {
  if (pts.size() < 2) return pts;
  std::vector<cplx> out{pts[0]};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    cplx a = pts[i - 1], b = pts[i], chord = b - a;
    double len = std::abs(chord);
    cplx ta = p(a), tb = p(b);
    if (len == 0.0 || std::abs(ta) < 1e-12 || std::abs(tb) < 1e-12) {
      out.push_back(b);
      continue;
    }
    ta *= len / std::abs(ta);
    tb *= len / std::abs(tb);
    if ((ta * std::conj(chord)).real() < 0) ta = -ta;
    if ((tb * std::conj(chord)).real() < 0) tb = -tb;
    for (int k = 1; k < parts; ++k) {
      double t = static_cast<double>(k) / parts, t2 = t * t, t3 = t2 * t;
      out.push_back((2 * t3 - 3 * t2 + 1) * a + (t3 - 2 * t2 + t) * ta + (-2 * t3 + 3 * t2) * b + (t3 - t2) * tb);
    }
    out.push_back(b);
  }
  return out;
}

Barrier make_barrier(const Polynomial& p, int id, const std::vector<cplx>& raw, bool extend_front, bool extend_back) {
  Barrier b;
  b.id = id;
  std::vector<cplx> pts = refine(p, raw, 32);
  if (extend_front) pts.insert(pts.begin(), pts.front() * 1e3);
  if (extend_back) pts.push_back(pts.back() * 1e3);
  b.pts = std::move(pts);
  b.xmin = b.ymin = 1e300;
  b.xmax = b.ymax = -1e300;
  for (const auto& z : b.pts) {
    b.xmin = std::min(b.xmin, z.real());
    b.xmax = std::max(b.xmax, z.real());
    b.ymin = std::min(b.ymin, z.imag());
    b.ymax = std::max(b.ymax, z.imag());
  }
  return b;
}

// Barrier points from index `seg` backwards to the start, preceded by the crossing point.
std::vector<cplx> toward_start(const Barrier& b, const Hit& h) {
  std::vector<cplx> out{h.point};
  for (std::size_t i = h.segment + 1; i-- > 0;) out.push_back(b.pts[i]);
  return out;
}

// From the end of the barrier backwards to the crossing point.
std::vector<cplx> from_end(const Barrier& b, const Hit& h) {
  std::vector<cplx> out;
  for (std::size_t i = b.pts.size(); i-- > h.segment + 1;) out.push_back(b.pts[i]);
  out.push_back(h.point);
  return out;
}

// From the start of the barrier to the crossing point.
std::vector<cplx> from_start(const Barrier& b, const Hit& h) {
  std::vector<cplx> out(b.pts.begin(), b.pts.begin() + h.segment + 1);
  out.push_back(h.point);
  return out;
}

[[noreturn]] void escaped(const Transversal& t, int through) {
  std::ostringstream os;
  os << "orthogonal path of transversal (" << t.k << "," << t.j << ") left its strip through " << through;
  fail(os.str());
}

CurvePiece reversed_homoclinic(const Homoclinic& h) {
  CurvePiece c;
  c.points.assign(h.polyline.rbegin(), h.polyline.rend());
  c.tail_in = c.tail_out = true;
  return c;
}

}  // namespace

InvariantData compute_invariants(const Polynomial& p, const DiskModel& m, const InvariantOptions& opt) {
  const auto& g = m.graph;
  if (g.degree != p.degree()) fail("model and polynomial degree differ");
  InvariantData data;
  auto& inv = data.invariants;
  std::vector<EquilibriumPoint> eqs = g.equilibria;
  if (eqs.empty()) eqs = roots(p).equilibria;
  const double scale = 1.0 + max_root_modulus(eqs);
  const double R = opt.r_inf > 0 ? opt.r_inf : 10.0 * scale;
  data.root_clearance = 1e-4 * scale;

  // barriers: homoclinics by k and landing separatrices by direction
  std::vector<Barrier> barriers;
  std::map<int, std::size_t> barrier_of;
  for (const auto& h : g.homoclinics) {
    if (h.polyline.size() < 2) fail("homoclinic without a traced curve");
    barrier_of[h.k] = barriers.size();
    barriers.push_back(make_barrier(p, h.k, h.polyline, true, true));
  }
  for (const auto& [ell, pts] : g.landing_polylines) {
    barrier_of[ell] = barriers.size();
    barriers.push_back(make_barrier(p, ell, pts, true, false));
  }

  std::vector<FrozenCurve> alpha_curves;
  for (const auto& t : m.transversals) {
    const Zone& z = m.zones[t.zone];
    const double unit = std::numbers::pi / (g.degree - 1);
    auto seed = [&](int end) { return std::polar(R, (end - 0.5) * unit); };
    auto is_member = [&](const BoundarySequence& b, int id) {
      return id == b.first || id == b.last || std::find(b.homoclinics.begin(), b.homoclinics.end(), id) != b.homoclinics.end();
    };

    // Path 1: up from e_k, then left along the upper boundary to e_j.
    const auto& U = z.upper.homoclinics;
    const auto& L = z.lower.homoclinics;
    const cplx s1 = seed(t.k);
    OrthoPath up = ortho_trace(p, s1, 1.0, R, barriers, opt.max_steps);
    FrozenCurve c1;
    std::size_t stop = 0;  // number of upper homoclinics to undo, leftmost first
    if (up.end >= 0) {
      c1.pieces.push_back({up.pts, true, true});
      std::vector<int> ends{z.upper.first};
      for (int k : U) ends.push_back(g.homoclinic_k(k)->j);
      auto it = std::find(ends.begin(), ends.end(), up.end);
      if (it == ends.end()) escaped(t, up.end);
      stop = it - ends.begin();
    } else {
      const Barrier& b1 = barriers[up.hit.barrier];
      if (!is_member(z.upper, b1.id)) escaped(t, b1.id);
      c1.pieces.push_back({up.pts, true, false});
      c1.pieces.push_back({toward_start(b1, up.hit), false, true});
      if (b1.id == z.upper.first && !g.homoclinic_k(b1.id)) {
        stop = 0;
      } else if (b1.id == z.upper.last && !g.homoclinic_k(b1.id)) {
        stop = U.size();
      } else {
        stop = std::find(U.begin(), U.end(), b1.id) - U.begin();
      }
    }
    for (std::size_t i = stop; i-- > 0;) c1.pieces.push_back(reversed_homoclinic(*g.homoclinic_k(U[i])));

    // Path 2: left along the lower boundary from e_k, then up to e_j.
    const cplx s2 = seed(t.j);
    OrthoPath down = ortho_trace(p, s2, -1.0, R, barriers, opt.max_steps);
    FrozenCurve c2;
    std::vector<cplx> back(down.pts.rbegin(), down.pts.rend());
    if (down.end >= 0) {
      std::vector<int> ends{g.mod(z.lower.first + 1)};
      for (int k : L) ends.push_back(g.mod(g.homoclinic_k(k)->j + 1));
      auto it = std::find(ends.begin(), ends.end(), down.end);
      if (it == ends.end()) escaped(t, down.end);
      std::size_t keep = it - ends.begin();
      for (std::size_t i = L.size(); i-- > keep;) c2.pieces.push_back(reversed_homoclinic(*g.homoclinic_k(L[i])));
      c2.pieces.push_back({back, true, true});
    } else {
      const Barrier& b2 = barriers[down.hit.barrier];
      if (!is_member(z.lower, b2.id)) escaped(t, b2.id);
      if (b2.id == z.lower.last && !g.homoclinic_k(b2.id)) {
        c2.pieces.push_back({from_start(b2, down.hit), true, false});
      } else if (b2.id == z.lower.first && !g.homoclinic_k(b2.id)) {
        for (std::size_t i = L.size(); i-- > 0;) c2.pieces.push_back(reversed_homoclinic(*g.homoclinic_k(L[i])));
        c2.pieces.push_back({from_start(b2, down.hit), true, false});
      } else {
        std::size_t pos = std::find(L.begin(), L.end(), b2.id) - L.begin();
        for (std::size_t i = L.size(); i-- > pos + 1;) c2.pieces.push_back(reversed_homoclinic(*g.homoclinic_k(L[i])));
        c2.pieces.push_back({from_end(b2, down.hit), true, false});
      }
      c2.pieces.push_back({back, false, true});
    }

    cplx a1 = curve_integral(p, c1, opt.quad_tol);
    cplx a2 = curve_integral(p, c2, opt.quad_tol);
    double disc = std::abs(a1 - a2);
    if (disc > opt.homotopy_tol * (1.0 + std::abs(a1))) {
      std::ostringstream os;
      os << "transversal (" << t.k << "," << t.j << "): homotopic paths give " << a1 << " and " << a2;
      fail(os.str());
    }
    if (a1.imag() <= 0.0) fail("transversal (" + std::to_string(t.k) + "," + std::to_string(t.j) + ") has non-positive height");
    inv.alphas.push_back(a1);
    inv.transversal_index.emplace_back(t.k, t.j);
    inv.alpha_discrepancy.push_back(disc);
    double height = up.time - tail_integral(p, s1).value.imag();
    if (up.end >= 0) height += tail_integral(p, up.pts.back()).value.imag();
    inv.strip_height.push_back(height);
    alpha_curves.push_back(std::move(c1));
  }

  std::vector<FrozenCurve> tau_curves;
  for (const auto& h : g.homoclinics) {
    FrozenCurve c;
    c.pieces.push_back({h.polyline, true, true});
    cplx tau = curve_integral(p, c, opt.quad_tol);
    if (tau.real() <= 0.0) fail("homoclinic (" + std::to_string(h.k) + "," + std::to_string(h.j) + ") has non-positive time");
    if (std::abs(tau.imag()) > 1e-6 * (1.0 + tau.real()))
      fail("homoclinic (" + std::to_string(h.k) + "," + std::to_string(h.j) + ") time is not real");
    inv.taus.push_back(tau.real());
    inv.homoclinic_index.emplace_back(h.k, h.j);
    tau_curves.push_back(std::move(c));
  }
  data.curves = std::move(alpha_curves);
  data.curves.insert(data.curves.end(), tau_curves.begin(), tau_curves.end());
  return data;
}

namespace {

void check_clearance(const Polynomial& p, const InvariantData& base) {
  for (const auto& e : roots(p).equilibria)
    for (const auto& c : base.curves)
      if (curve_distance(c, e.location) < base.root_clearance) {
        std::ostringstream os;
        os << "perturbed root " << e.location << " is within " << base.root_clearance << " of a frozen curve";
        throw RealizationError(os.str());
      }
}

}  // namespace

std::vector<cplx> pseudo_invariants(const Polynomial& q, const InvariantData& base, double tol) {
  check_clearance(q, base);
  const int n = static_cast<int>(base.curves.size());
  std::vector<cplx> out(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) out[i] = curve_integral(q, base.curves[i], tol);
  return out;
}

std::vector<cplx> pseudo_invariants_serial(const Polynomial& q, const InvariantData& base, double tol) {
  check_clearance(q, base);
  std::vector<cplx> out;
  for (const auto& c : base.curves) out.push_back(curve_integral(q, c, tol));
  return out;
}

}  // namespace cpvf
