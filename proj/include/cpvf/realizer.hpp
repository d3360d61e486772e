#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cpvf/combinatorics.hpp"
#include "cpvf/invariants.hpp"
#include "cpvf/tracer.hpp"

namespace cpvf {

struct DeformationTarget {
  std::vector<cplx> delta_alphas;  // per transversal
  std::vector<cplx> delta_taus;    // per homoclinic
};

struct RealizerOptions {
  double fd_step = 1e-6;
  int max_iterations = 50;
  double tolerance = 1e-10;
  double trust_factor = 0.05;
  double quad_tol = 1e-12;
};

// Root coordinates: every cluster but the last moves freely, the last keeps the sum centered.
struct RootChart {
  std::vector<RootSpec> base;

  explicit RootChart(std::vector<RootSpec> roots) : base(std::move(roots)) {}
  int dimension() const { return 2 * (static_cast<int>(base.size()) - 1); }
  std::vector<RootSpec> at(const Eigen::VectorXd& x) const;
};

struct Realization {
  Polynomial polynomial;
  std::vector<RootSpec> roots;
  std::vector<cplx> achieved;
  double residual = 0.0;
  int iterations = 0;
};

double trust_radius(const InvariantData& base, double factor = 0.05);

// Real Jacobian of the pseudo-invariant map in root coordinates; OpenMP over columns.
Eigen::MatrixXd pseudo_jacobian(const RootChart& chart, const InvariantData& base, double step = 1e-6,
                                double tol = 1e-12);
Eigen::MatrixXd pseudo_jacobian_serial(const RootChart& chart, const InvariantData& base, double step = 1e-6,
                                       double tol = 1e-12);

std::vector<RootSpec> root_specs(const Polynomial& p);

Realization realize(const Polynomial& p0, const InvariantData& base, const DeformationTarget& target,
                    const RealizerOptions& opt = {});

struct VerifyReport {
  BifurcationEvent event;
  double epsilon = 0.0;
  bool match = false;
  std::vector<std::string> mismatches;
  std::vector<std::string> attempts;  // failed rungs of the epsilon ladder
  Polynomial perturbed;
  SeparatrixGraph predicted;
  SeparatrixGraph traced;
};

VerifyReport verify_event(const Polynomial& p0, const DiskModel& model, const InvariantData& base,
                          const BifurcationEvent& event, const std::vector<double>& ladder = {1e-2, 1e-3, 1e-4},
                          const TraceConfig& cfg = {}, const RealizerOptions& opt = {});

}  // namespace cpvf
