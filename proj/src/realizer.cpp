#include "cpvf/realizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "cpvf/error.hpp"

namespace cpvf {

std::vector<RootSpec> RootChart::at(const Eigen::VectorXd& x) const {
  std::vector<RootSpec> out = base;
  const std::size_t n = base.size();
  cplx moment = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out[i].location += cplx(x[2 * i], x[2 * i + 1]);
    moment += static_cast<double>(out[i].multiplicity) * out[i].location;
  }
  out[n - 1].location = -moment / static_cast<double>(out[n - 1].multiplicity);
  return out;
}

std::vector<RootSpec> root_specs(const Polynomial& p) {
  std::vector<RootSpec> out;
  for (const auto& e : roots(p).equilibria) out.push_back({e.location, e.multiplicity});
  return out;
}

double trust_radius(const InvariantData& base, double factor) {
  double lo = std::numeric_limits<double>::infinity();
  for (double t : base.invariants.taus) lo = std::min(lo, t);
  for (cplx a : base.invariants.alphas) lo = std::min(lo, a.imag());
  return factor * lo;
}

namespace {

Eigen::VectorXd flatten(const std::vector<cplx>& v) {
  Eigen::VectorXd out(2 * v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[2 * i] = v[i].real();
    out[2 * i + 1] = v[i].imag();
  }
  return out;
}

Eigen::VectorXd evaluate(const RootChart& chart, const InvariantData& base, const Eigen::VectorXd& x, double tol,
                         bool parallel) {
  Polynomial q = from_roots(chart.at(x), 1e-7);
  return flatten(parallel ? pseudo_invariants(q, base, tol) : pseudo_invariants_serial(q, base, tol));
}

Eigen::MatrixXd jacobian(const RootChart& chart, const InvariantData& base, const Eigen::VectorXd& x, double step,
                         double tol, bool parallel) {
  const int n = chart.dimension();
  Eigen::VectorXd f0 = evaluate(chart, base, x, tol, false);
  Eigen::MatrixXd J(f0.size(), n);
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int c = 0; c < n; ++c) {
    try {
      Eigen::VectorXd xp = x;
      xp[c] += step;
      J.col(c) = (evaluate(chart, base, xp, tol, false) - f0) / step;
    } catch (...) {
      errors[c] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return J;
}

}  // namespace

Eigen::MatrixXd pseudo_jacobian(const RootChart& chart, const InvariantData& base, double step, double tol) {
  return jacobian(chart, base, Eigen::VectorXd::Zero(chart.dimension()), step, tol, true);
}

Eigen::MatrixXd pseudo_jacobian_serial(const RootChart& chart, const InvariantData& base, double step, double tol) {
  return jacobian(chart, base, Eigen::VectorXd::Zero(chart.dimension()), step, tol, false);
}

Realization realize(const Polynomial& p0, const InvariantData& base, const DeformationTarget& target,
                    const RealizerOptions& opt) {
  const auto& inv = base.invariants;
  if (target.delta_alphas.size() != inv.alphas.size() || target.delta_taus.size() != inv.taus.size())
    throw PreconditionError("deformation target does not match the invariant count");
  std::vector<cplx> goal_c;
  double size = 0.0;
  for (std::size_t i = 0; i < inv.alphas.size(); ++i) {
    goal_c.push_back(inv.alphas[i] + target.delta_alphas[i]);
    size = std::max(size, std::abs(target.delta_alphas[i]));
  }
  for (std::size_t i = 0; i < inv.taus.size(); ++i) {
    goal_c.push_back(inv.taus[i] + target.delta_taus[i]);
    size = std::max(size, std::abs(target.delta_taus[i]));
  }
  Realization out;
  out.polynomial = p0;
  out.roots = root_specs(p0);
  if (size == 0.0) {
    out.achieved = goal_c;
    return out;
  }
  const double trust = trust_radius(base, opt.trust_factor);
  if (size > trust) {
    std::ostringstream os;
    os << "deformation of size " << size << " exceeds the trust radius " << trust;
    throw RealizationError(os.str());
  }

  RootChart chart(out.roots);
  if (chart.dimension() != 2 * static_cast<int>(goal_c.size()))
    throw PreconditionError("invariant count does not match the free root coordinates");
  const Eigen::VectorXd goal = flatten(goal_c);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(chart.dimension());
  Eigen::VectorXd r = evaluate(chart, base, x, opt.quad_tol, true) - goal;
  int it = 0;
  for (; it < opt.max_iterations && r.lpNorm<Eigen::Infinity>() > opt.tolerance; ++it) {
    Eigen::MatrixXd J = jacobian(chart, base, x, opt.fd_step, opt.quad_tol, true);
    Eigen::VectorXd dx = J.colPivHouseholderQr().solve(-r);
    double lambda = 1.0;
    bool improved = false;
    for (int h = 0; h < 30 && !improved; ++h, lambda *= 0.5) {
      Eigen::VectorXd trial = x + lambda * dx;
      try {
        Eigen::VectorXd rt = evaluate(chart, base, trial, opt.quad_tol, true) - goal;
        if (rt.norm() < r.norm()) {
          x = trial;
          r = rt;
          improved = true;
        }
      } catch (const RealizationError&) {
      }
    }
    if (!improved) break;
  }
  if (r.lpNorm<Eigen::Infinity>() > opt.tolerance) {
    std::ostringstream os;
    os << "Newton did not converge: residual " << r.lpNorm<Eigen::Infinity>() << " after " << it << " iterations";
    throw RealizationError(os.str());
  }
  out.roots = chart.at(x);
  out.polynomial = from_roots(out.roots, 1e-7);
  out.iterations = it;
  out.residual = r.lpNorm<Eigen::Infinity>();
  out.achieved.resize(goal_c.size());
  for (std::size_t i = 0; i < goal_c.size(); ++i) out.achieved[i] = cplx(goal[2 * i] + r[2 * i], goal[2 * i + 1] + r[2 * i + 1]);

  auto found = roots(out.polynomial).equilibria;
  std::multiset<int> before, after;
  for (const auto& s : out.roots) before.insert(s.multiplicity);
  for (const auto& e : found) after.insert(e.multiplicity);
  if (before != after) throw RealizationError("root clusters merged or split during realization");
  return out;
}

VerifyReport verify_event(const Polynomial& p0, const DiskModel& model, const InvariantData& base,
                          const BifurcationEvent& event, const std::vector<double>& ladder, const TraceConfig& cfg,
                          const RealizerOptions& opt) {
  VerifyReport rep;
  rep.event = event;
  rep.predicted = apply_event(model, event).graph;
  const auto& inv = base.invariants;
  const auto& sys = event.system;
  double wmax = 0.0;
  for (double w : sys.witness) wmax = std::max(wmax, std::abs(w));
  if (wmax == 0.0) throw PreconditionError("event has no feasibility witness");
  const double trust = trust_radius(base, opt.trust_factor);

  for (double eps : ladder) {
    if (eps > trust) {
      rep.attempts.push_back("epsilon " + std::to_string(eps) + ": above trust radius");
      continue;
    }
    DeformationTarget t;
    t.delta_alphas.assign(inv.alphas.size(), 0.0);
    t.delta_taus.assign(inv.taus.size(), 0.0);
    for (std::size_t v = 0; v < sys.variables.size(); ++v)
      for (std::size_t i = 0; i < inv.homoclinic_index.size(); ++i)
        if (inv.homoclinic_index[i].first == sys.variables[v]) t.delta_taus[i] = cplx(0.0, eps * sys.witness[v] / wmax);
    try {
      Realization real = realize(p0, base, t, opt);
      auto eqs = equilibria_from_roots(real.roots);
      SeparatrixGraph traced = build_graph(real.polynomial, eqs, cfg);
      DiskModel dm = decompose(traced);
      rep.epsilon = eps;
      rep.perturbed = real.polynomial;
      rep.traced = dm.graph;
      rep.mismatches.clear();
      std::set<std::pair<int, int>> want, got;
      for (const auto& h : rep.predicted.homoclinics) want.insert({h.k, h.j});
      for (const auto& h : dm.graph.homoclinics) got.insert({h.k, h.j});
      for (auto [k, j] : want)
        if (!got.count({k, j}))
          rep.mismatches.push_back("homoclinic (" + std::to_string(k) + "," + std::to_string(j) + ") missing");
      for (auto [k, j] : got)
        if (!want.count({k, j}))
          rep.mismatches.push_back("unexpected homoclinic (" + std::to_string(k) + "," + std::to_string(j) + ")");
      for (auto [ell, v] : rep.predicted.landing) {
        auto it = dm.graph.landing.find(ell);
        if (it == dm.graph.landing.end())
          rep.mismatches.push_back("s_" + std::to_string(ell) + " does not land");
        else if (it->second != v)
          rep.mismatches.push_back("s_" + std::to_string(ell) + " lands at " + std::to_string(it->second) +
                                   ", predicted " + std::to_string(v));
      }
      for (auto [ell, v] : dm.graph.landing)
        if (!rep.predicted.landing.count(ell)) rep.mismatches.push_back("s_" + std::to_string(ell) + " lands unexpectedly");
      rep.match = rep.mismatches.empty();
      return rep;
    } catch (const Error& e) {
      rep.attempts.push_back("epsilon " + std::to_string(eps) + ": " + e.what());
    }
  }
  return rep;
}

}  // namespace cpvf
