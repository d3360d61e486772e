#pragma once

#include <functional>
#include <span>

#include "cpvf/polynomial.hpp"

namespace cpvf {

struct QuadResult {
  cplx value;
  double error = 0.0;
};

using ComplexFn = std::function<cplx(cplx)>;

// Adaptive Gauss-Kronrod 7/15 for the contour integral of f along the segment a -> b.
QuadResult integrate_segment(const ComplexFn& f, cplx a, cplx b, double tol);

// Integral of dz/P along a polyline; tol is the absolute budget for the whole path.
QuadResult integrate_polyline(const Polynomial& p, std::span<const cplx> points, double tol);

// T(z) = integral of dw/P(w) from z to infinity along the ray through z.
QuadResult tail_integral(const Polynomial& p, cplx z, double tol = 1e-14);

// Rectifying coordinate normalized at infinity: Phi_inf(z) = -T(z).
inline cplx phi_inf(const Polynomial& p, cplx z) { return -tail_integral(p, z).value; }

}  // namespace cpvf
