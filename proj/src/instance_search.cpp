#include "cpvf/instance_search.hpp"

#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "cpvf/error.hpp"

namespace cpvf {

std::string shape_key(const SeparatrixGraph& g) {
  std::vector<std::pair<int, int>> hs;
  for (const auto& h : g.homoclinics) hs.emplace_back(h.k, h.j);
  std::sort(hs.begin(), hs.end());
  std::map<int, int> rename;
  std::ostringstream os;
  os << g.degree << "|";
  for (auto [k, j] : hs) os << k << "," << j << ";";
  os << "|";
  for (auto [ell, v] : g.landing) {
    if (!rename.count(v)) rename.emplace(v, static_cast<int>(rename.size()));
    os << ell << ">" << rename[v] << ";";
  }
  return os.str();
}

namespace {

cplx derivative_at(const std::vector<RootSpec>& rs, std::size_t i) {
  cplx d = 1.0;
  for (std::size_t j = 0; j < rs.size(); ++j)
    if (j != i) d *= std::pow(rs[i].location - rs[j].location, rs[j].multiplicity);
  return d;
}

std::vector<RootSpec> centered(std::vector<RootSpec> rs) {
  cplx moment = 0.0;
  int total = 0;
  for (const auto& r : rs) {
    moment += static_cast<double>(r.multiplicity) * r.location;
    total += r.multiplicity;
  }
  for (auto& r : rs) r.location -= moment / static_cast<double>(total);
  return rs;
}

// Gauss-Newton with minimum-norm steps on Re P'(zeta_c) = 0 over the free root coordinates.
bool project_centers(std::vector<RootSpec>& rs, const std::vector<std::size_t>& centers) {
  if (centers.empty()) return true;
  const std::size_t n = rs.size();
  auto residual = [&](const std::vector<RootSpec>& r) {
    Eigen::VectorXd f(centers.size());
    for (std::size_t c = 0; c < centers.size(); ++c) {
      cplx d = derivative_at(r, centers[c]);
      f[c] = d.real() / std::abs(d);
    }
    return f;
  };
  auto moved = [&](const Eigen::VectorXd& x) {
    std::vector<RootSpec> r = rs;
    for (std::size_t i = 0; i + 1 < n; ++i) r[i].location += cplx(x[2 * i], x[2 * i + 1]);
    return centered(r);
  };
  const int dim = 2 * static_cast<int>(n - 1);
  for (int it = 0; it < 60; ++it) {
    Eigen::VectorXd f = residual(rs);
    if (f.lpNorm<Eigen::Infinity>() < 1e-14) return true;
    Eigen::MatrixXd J(f.size(), dim);
    const double h = 1e-7;
    for (int c = 0; c < dim; ++c) {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
      x[c] = h;
      J.col(c) = (residual(moved(x)) - f) / h;
    }
    Eigen::VectorXd dx = J.completeOrthogonalDecomposition().solve(-f);
    rs = moved(dx);
  }
  return residual(rs).lpNorm<Eigen::Infinity>() < 1e-12;
}

}  // namespace

std::optional<Instance> find_instance(const SeparatrixGraph& target, const SearchOptions& opt) {
  DiskModel tm = decompose(target);
  std::vector<RootSpec> profile;
  std::vector<std::size_t> centers;
  for (const auto& e : tm.equilibria) {
    if (e.kind == EquilibriumKind::Center) centers.push_back(profile.size());
    profile.push_back({0.0, e.multiplicity});
  }
  const std::string want = shape_key(tm.graph);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(-opt.spread, opt.spread);
  for (int t = 1; t <= opt.max_tries; ++t) {
    auto rs = profile;
    for (auto& r : rs) r.location = cplx(u(rng), u(rng));
    rs = centered(rs);
    if (!project_centers(rs, centers)) continue;
    bool separated = true;
    for (std::size_t i = 0; i < rs.size(); ++i)
      for (std::size_t j = i + 1; j < rs.size(); ++j) separated = separated && std::abs(rs[i].location - rs[j].location) > 0.2;
    for (const auto& r : rs) separated = separated && std::abs(r.location) < 2.0 * opt.spread;
    if (!separated) continue;
    try {
      Polynomial p = from_roots(rs, 1e-7);
      auto eqs = roots(p).equilibria;
      if (eqs.size() != rs.size()) continue;
      SeparatrixGraph g = build_graph(p, eqs, opt.trace);
      if (shape_key(g) != want) continue;
      DiskModel m = decompose(g);
      return Instance{p, std::move(m), t};
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

}  // namespace cpvf
