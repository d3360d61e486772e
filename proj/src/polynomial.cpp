#include "cpvf/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cpvf/error.hpp"

namespace cpvf {

Polynomial::Polynomial(int degree, std::vector<cplx> lower) : degree_(degree), lower_(std::move(lower)) {
  if (degree < 2) throw std::invalid_argument("degree must be at least 2, got " + std::to_string(degree));
  if (static_cast<int>(lower_.size()) != degree - 1)
    throw std::invalid_argument("expected " + std::to_string(degree - 1) + " coefficients a_0..a_{d-2}, got " +
                                std::to_string(lower_.size()));
  for (const auto& a : lower_)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw std::invalid_argument("non-finite coefficient");
}

Polynomial Polynomial::monomial(int degree) { return Polynomial(degree, std::vector<cplx>(degree - 1)); }

std::vector<cplx> Polynomial::full_coefficients() const {
  std::vector<cplx> c(lower_);
  c.push_back(0.0);
  c.push_back(1.0);
  return c;
}

cplx Polynomial::operator()(cplx z) const {
  cplx p = z;
  for (int i = degree_ - 2; i >= 0; --i) p = p * z + lower_[i];
  return p;
}

void Polynomial::eval(cplx z, cplx& p, cplx& dp) const {
  p = 1.0;
  dp = 0.0;
  for (int i = degree_ - 1; i >= 0; --i) {
    cplx a = i == degree_ - 1 ? cplx(0.0) : lower_[i];
    dp = dp * z + p;
    p = p * z + a;
  }
}

cplx Polynomial::derivative(cplx z) const {
  cplx p, dp;
  eval(z, p, dp);
  return dp;
}

std::vector<cplx> Polynomial::taylor(cplx z0) const {
  std::vector<cplx> c = full_coefficients();
  const int d = degree_;
  for (int k = 0; k <= d; ++k)
    for (int i = d - 1; i >= k; --i) c[i] += z0 * c[i + 1];
  return c;
}

const char* to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::Sink: return "sink";
    case EquilibriumKind::Source: return "source";
    case EquilibriumKind::Center: return "center";
    case EquilibriumKind::Multiple: return "multiple";
  }
  return "?";
}

namespace {

Classification classify_residue(cplx r) {
  Classification c{EquilibriumKind::Center, r, false};
  if (std::abs(r.real()) < kCenterTolerance * (1.0 + std::abs(r))) {
    c.near_degenerate = r.real() != 0.0;
  } else {
    c.kind = r.real() < 0 ? EquilibriumKind::Sink : EquilibriumKind::Source;
  }
  return c;
}

std::vector<cplx> aberth(const Polynomial& p) {
  const int d = p.degree();
  double bound = 0.0;
  for (const auto& a : p.coefficients()) bound = std::max(bound, std::abs(a));
  const double radius = std::max(1.0, std::pow(bound, 1.0 / d)) * 1.5;
  std::vector<cplx> z(d);
  for (int k = 0; k < d; ++k) z[k] = std::polar(radius, 2.0 * std::numbers::pi * k / d + 0.4);

  const auto full = p.full_coefficients();
  auto scale_at = [&](cplx x) {
    double s = 0.0, r = 1.0;
    for (const auto& a : full) {
      s += std::abs(a) * r;
      r *= std::abs(x);
    }
    return std::max(s, 1.0);
  };

  bool converged = false;
  for (int iter = 0; iter < 2000 && !converged; ++iter) {
    converged = true;
    for (int k = 0; k < d; ++k) {
      cplx v, dv;
      p.eval(z[k], v, dv);
      if (std::abs(v) <= 4e-16 * scale_at(z[k])) continue;
      cplx ratio = v / dv;
      cplx sum = 0.0;
      for (int j = 0; j < d; ++j)
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      cplx corr = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(corr.real()) || !std::isfinite(corr.imag())) corr = ratio;
      z[k] -= corr;
      if (std::abs(corr) > 1e-15 * (1.0 + std::abs(z[k]))) converged = false;
    }
  }
  for (const auto& x : z) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw RootError("root iteration diverged");
    if (std::abs(p(x)) > 1e-6 * scale_at(x))
      throw RootError("root iteration failed to converge: |P(z)| = " + std::to_string(std::abs(p(x))));
  }
  return z;
}

}  // namespace

Classification classify(cplx zeta, int multiplicity, const Polynomial& p) {
  if (multiplicity > 1) return {EquilibriumKind::Multiple, cplx(0.0), false};
  return classify_residue(1.0 / p.derivative(zeta));
}

cplx residue_from_roots(std::span<const RootSpec> roots, std::size_t i) {
  const cplx z0 = roots[i].location;
  const int m = roots[i].multiplicity;
  // 1/Q with Q the cofactor; g' = L g with L = sum_j m_j / (zeta_j - z).
  cplx q = 1.0;
  for (std::size_t j = 0; j < roots.size(); ++j)
    if (j != i) q *= std::pow(z0 - roots[j].location, roots[j].multiplicity);
  std::vector<cplx> g(m), L(m);
  g[0] = 1.0 / q;
  for (int n = 0; n < m; ++n) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < roots.size(); ++j)
      if (j != i) s += static_cast<double>(roots[j].multiplicity) / std::pow(roots[j].location - z0, n + 1);
    L[n] = s;
  }
  for (int n = 0; n + 1 < m; ++n) {
    cplx s = 0.0;
    for (int k = 0; k <= n; ++k) s += L[k] * g[n - k];
    g[n + 1] = s / static_cast<double>(n + 1);
  }
  return g[m - 1];
}

std::vector<EquilibriumPoint> equilibria_from_roots(std::span<const RootSpec> roots) {
  std::vector<EquilibriumPoint> out;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    EquilibriumPoint e;
    e.location = roots[i].location;
    e.multiplicity = roots[i].multiplicity;
    e.residue = residue_from_roots(roots, i);
    if (e.multiplicity > 1) {
      e.kind = EquilibriumKind::Multiple;
    } else {
      auto c = classify_residue(e.residue);
      e.kind = c.kind;
      e.near_degenerate = c.near_degenerate;
    }
    out.push_back(e);
  }
  return out;
}

RootsResult roots(const Polynomial& p, double cluster_eps) {
  std::vector<cplx> z = aberth(p);
  const std::size_t d = z.size();
  // single linkage
  std::vector<std::size_t> parent(d);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b)
      if (std::abs(z[a] - z[b]) < cluster_eps) parent[find(a)] = find(b);

  RootsResult result;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b)
      if (find(a) != find(b) && std::abs(z[a] - z[b]) < 2.0 * cluster_eps) result.ambiguous_clustering = true;

  std::vector<RootSpec> specs;
  std::vector<std::size_t> reps;
  for (std::size_t a = 0; a < d; ++a) {
    std::size_t r = find(a);
    auto it = std::find(reps.begin(), reps.end(), r);
    if (it == reps.end()) {
      reps.push_back(r);
      specs.push_back({z[a], 1});
    } else {
      auto& s = specs[it - reps.begin()];
      s.location = (s.location * static_cast<double>(s.multiplicity) + z[a]) / static_cast<double>(s.multiplicity + 1);
      ++s.multiplicity;
    }
  }
  for (auto& s : specs) {
    if (s.multiplicity != 1) continue;
    for (int it = 0; it < 3; ++it) {
      cplx v, dv;
      p.eval(s.location, v, dv);
      if (dv == 0.0) break;
      s.location -= v / dv;
    }
  }
  std::sort(specs.begin(), specs.end(), [](const RootSpec& a, const RootSpec& b) {
    if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  result.equilibria = equilibria_from_roots(specs);
  for (auto& e : result.equilibria)
    if (e.multiplicity == 1) {
      auto c = classify(e.location, 1, p);
      e.residue = c.residue;
      e.kind = c.kind;
      e.near_degenerate = c.near_degenerate;
    }
  return result;
}

Polynomial from_roots(std::span<const RootSpec> roots, double centering_tol) {
  std::vector<cplx> c{1.0};
  cplx sum = 0.0;
  double scale = 0.0;
  for (const auto& r : roots) {
    if (r.multiplicity < 1) throw std::invalid_argument("multiplicity must be positive");
    for (int m = 0; m < r.multiplicity; ++m) {
      std::vector<cplx> next(c.size() + 1, 0.0);
      for (std::size_t i = 0; i < c.size(); ++i) {
        next[i + 1] += c[i];
        next[i] -= r.location * c[i];
      }
      c = std::move(next);
    }
    sum += static_cast<double>(r.multiplicity) * r.location;
    scale += r.multiplicity * std::abs(r.location);
  }
  const int d = static_cast<int>(c.size()) - 1;
  if (d < 2) throw std::invalid_argument("need total multiplicity at least 2");
  if (std::abs(sum) > centering_tol * (1.0 + scale))
    throw std::invalid_argument("roots are not centered: sum = " + std::to_string(std::abs(sum)));
  return Polynomial(d, std::vector<cplx>(c.begin(), c.begin() + (d - 1)));
}

double max_root_modulus(std::span<const EquilibriumPoint> eqs) {
  double m = 0.0;
  for (const auto& e : eqs) m = std::max(m, std::abs(e.location));
  return m;
}

}  // namespace cpvf
