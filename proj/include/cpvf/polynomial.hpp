#pragma once

#include <complex>
#include <span>
#include <vector>

namespace cpvf {

using cplx = std::complex<double>;

// Monic centered polynomial z^d + a_{d-2} z^{d-2} + ... + a_0.
class Polynomial {
 public:
  Polynomial() = default;
  // `lower` holds a_0..a_{d-2}.
  Polynomial(int degree, std::vector<cplx> lower);

  static Polynomial monomial(int degree);

  int degree() const { return degree_; }
  std::span<const cplx> coefficients() const { return lower_; }
  // a_0..a_d, with a_{d-1} = 0 and a_d = 1.
  std::vector<cplx> full_coefficients() const;

  cplx operator()(cplx z) const;
  cplx derivative(cplx z) const;
  void eval(cplx z, cplx& p, cplx& dp) const;
  // Taylor coefficients of P at z0, index n holds P^{(n)}(z0)/n!.
  std::vector<cplx> taylor(cplx z0) const;

  bool operator==(const Polynomial&) const = default;

 private:
  int degree_ = 0;
  std::vector<cplx> lower_;
};

enum class EquilibriumKind { Sink, Source, Center, Multiple };

const char* to_string(EquilibriumKind kind);

struct EquilibriumPoint {
  cplx location;
  int multiplicity = 1;
  cplx residue;
  EquilibriumKind kind = EquilibriumKind::Center;
  bool near_degenerate = false;
};

struct RootSpec {
  cplx location;
  int multiplicity = 1;
};

struct RootsResult {
  std::vector<EquilibriumPoint> equilibria;
  bool ambiguous_clustering = false;
};

constexpr double kDefaultClusterEps = 1e-7;
constexpr double kCenterTolerance = 1e-9;

RootsResult roots(const Polynomial& p, double cluster_eps = kDefaultClusterEps);

struct Classification {
  EquilibriumKind kind;
  cplx residue;
  bool near_degenerate = false;
};

// Residue of 1/P at a simple root.
Classification classify(cplx zeta, int multiplicity, const Polynomial& p);

Polynomial from_roots(std::span<const RootSpec> roots, double centering_tol = 1e-9);

// Residue of 1/P at roots[i], computed from the factorization.
cplx residue_from_roots(std::span<const RootSpec> roots, std::size_t i);

// Equilibria of the polynomial with exactly these roots, in the given order.
std::vector<EquilibriumPoint> equilibria_from_roots(std::span<const RootSpec> roots);

double max_root_modulus(std::span<const EquilibriumPoint> eqs);

}  // namespace cpvf
