#pragma once

#include <span>
#include <vector>

#include "cpvf/graph.hpp"
#include "cpvf/polynomial.hpp"

namespace cpvf {

struct TraceConfig {
  double r_inf = 0.0;  // 0 selects 10 (1 + max|zeta|)
  double rtol = 1e-10;
  double atol = 1e-13;
  double angle_tol = 0.0;  // 0 selects pi / (8 (d - 1))
  double landing_eps_rel = 1e-8;
  double homoclinic_tol = 1e-6;
  double time_tol_rel = 1e-6;
  double match_tol_rel = 1e-3;
  double max_step_rel = 0.02;
  std::size_t max_steps = 2000000;
};

TraceConfig resolve(const TraceConfig& cfg, int degree, std::span<const EquilibriumPoint> eqs);

struct SeparatrixTrace {
  enum class Outcome { Landing, Homoclinic };
  int ell = 0;
  Outcome outcome = Outcome::Landing;
  int equilibrium = -1;  // landing target
  int partner = -1;      // other end of a homoclinic
  double tau = 0.0;      // homoclinic travel time through infinity
  double accumulated_time = 0.0;
  double start_offset = 0.0;  // Phi_inf at the start point
  std::vector<cplx> polyline;  // tracing order, starting near infinity
};

cplx separatrix_start(const Polynomial& p, int ell, double radius);

SeparatrixTrace trace(const Polynomial& p, std::span<const EquilibriumPoint> eqs, int ell, const TraceConfig& cfg);

// Equilibria are indexed in the order given; OpenMP over directions.
SeparatrixGraph build_graph(const Polynomial& p, std::span<const EquilibriumPoint> eqs, const TraceConfig& cfg = {});
SeparatrixGraph build_graph_serial(const Polynomial& p, std::span<const EquilibriumPoint> eqs,
                                   const TraceConfig& cfg = {});
SeparatrixGraph build_graph(const Polynomial& p, const TraceConfig& cfg = {});

double hausdorff(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace cpvf
