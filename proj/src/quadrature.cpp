#include "cpvf/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace cpvf {

namespace {

constexpr std::array<double, 8> kXk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                       0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Integral over t in [t0,t1] of g(t).
template <class G>
void gk15(const G& g, double t0, double t1, cplx& kronrod, cplx& gauss, double& magnitude) {
  const double c = 0.5 * (t0 + t1), h = 0.5 * (t1 - t0);
  cplx fc = g(c);
  kronrod = fc * kWk[7];
  gauss = fc * kWg[3];
  magnitude = std::abs(fc) * kWk[7];
  for (int i = 0; i < 7; ++i) {
    cplx f1 = g(c - h * kXk[i]), f2 = g(c + h * kXk[i]);
    kronrod += (f1 + f2) * kWk[i];
    magnitude += (std::abs(f1) + std::abs(f2)) * kWk[i];
    if (i % 2 == 1) gauss += (f1 + f2) * kWg[i / 2];
  }
  kronrod *= h;
  gauss *= h;
  magnitude *= std::abs(h);
}

template <class G>
QuadResult adaptive(const G& g, double t0, double t1, double tol, int depth) {
  cplx k, gs;
  double mag;
  gk15(g, t0, t1, k, gs, mag);
  double err = std::abs(k - gs);
  if (err <= std::max(tol, 1e-14 * mag) || depth >= 30 || !std::isfinite(err)) return {k, err};
  double m = 0.5 * (t0 + t1);
  auto l = adaptive(g, t0, m, 0.5 * tol, depth + 1);
  auto r = adaptive(g, m, t1, 0.5 * tol, depth + 1);
  return {l.value + r.value, l.error + r.error};
}

}  // namespace

QuadResult integrate_segment(const ComplexFn& f, cplx a, cplx b, double tol) {
  const cplx dz = b - a;
  auto g = [&](double t) { return f(a + t * dz) * dz; };
  return adaptive(g, 0.0, 1.0, tol, 0);
}

QuadResult integrate_polyline(const Polynomial& p, std::span<const cplx> pts, double tol) {
  QuadResult total{0.0, 0.0};
  if (pts.size() < 2) return total;
  double length = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) length += std::abs(pts[i] - pts[i - 1]);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const cplx a = pts[i - 1], dz = pts[i] - pts[i - 1];
    if (dz == 0.0) continue;
    double seg_tol = std::max(tol * std::abs(dz) / length, 1e-17);
    auto g = [&](double t) { return dz / p(a + t * dz); };
    auto r = adaptive(g, 0.0, 1.0, seg_tol, 0);
    total.value += r.value;
    total.error += r.error;
  }
  return total;
}

QuadResult tail_integral(const Polynomial& p, cplx z, double tol) {
  // w = z/u, dw/P(w) = z u^{d-2} du / (u^d P(z/u))
  const int d = p.degree();
  const auto c = p.full_coefficients();
  std::vector<cplx> zpow(d + 1);
  zpow[0] = 1.0;
  for (int i = 1; i <= d; ++i) zpow[i] = zpow[i - 1] * z;
  auto g = [&](double u) {
    cplx q = 0.0;
    for (int i = 0; i <= d; ++i) q = q * u + c[i] * zpow[i];  // sum_i c_i z^i u^{d-i}
    return z * std::pow(u, d - 2) / q;
  };
  double scale = std::abs(z) / std::abs(zpow[d]);
  return adaptive(g, 0.0, 1.0, tol * std::max(scale, 1e-300), 0);
}

}  // namespace cpvf
