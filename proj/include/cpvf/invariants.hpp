#pragma once

#include <utility>
#include <vector>

#include "cpvf/disk_model.hpp"
#include "cpvf/polynomial.hpp"

namespace cpvf {

// Polyline with optional radial tails to infinity before its first and after its last point.
struct CurvePiece {
  std::vector<cplx> points;
  bool tail_in = false;
  bool tail_out = false;
};

struct FrozenCurve {
  std::vector<CurvePiece> pieces;
};

struct Invariants {
  std::vector<cplx> alphas;
  std::vector<double> taus;
  std::vector<std::pair<int, int>> transversal_index;
  std::vector<std::pair<int, int>> homoclinic_index;
  std::vector<double> alpha_discrepancy;  // between the two homotopic paths
  std::vector<double> strip_height;       // orthogonal crossing time
};

struct InvariantOptions {
  double quad_tol = 1e-11;
  double homotopy_tol = 1e-6;
  double r_inf = 0.0;
  std::size_t max_steps = 400000;
};

struct InvariantData {
  Invariants invariants;
  std::vector<FrozenCurve> curves;  // transversals first, then homoclinics
  double root_clearance = 0.0;
};

cplx curve_integral(const Polynomial& p, const FrozenCurve& c, double tol);
double curve_distance(const FrozenCurve& c, cplx z);

InvariantData compute_invariants(const Polynomial& p, const DiskModel& m, const InvariantOptions& opt = {});

// Same integrals for a perturbed polynomial over the frozen curves; OpenMP over curves.
std::vector<cplx> pseudo_invariants(const Polynomial& perturbed, const InvariantData& base, double tol = 1e-11);
std::vector<cplx> pseudo_invariants_serial(const Polynomial& perturbed, const InvariantData& base,
                                           double tol = 1e-11);

}  // namespace cpvf
