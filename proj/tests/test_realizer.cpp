#include <numbers>
#include <random>

#include <Eigen/SVD>

#include "cpvf/error.hpp"
#include "cpvf/realizer.hpp"
#include "cpvf/tracer.hpp"
#include "doctest.h"

using namespace cpvf;
using std::numbers::pi;

namespace {
struct Base {
  Polynomial p;
  DiskModel m;
  InvariantData d;
};

Base base_of(const Polynomial& p) {
  auto m = decompose(build_graph(p));
  auto d = compute_invariants(p, m);
  return {p, m, d};
}

Polynomial random_poly(int deg, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> a(deg - 1);
  for (auto& x : a) x = {g(rng), g(rng)};
  return Polynomial(deg, a);
}

DeformationTarget zero_target(const InvariantData& d) {
  return {std::vector<cplx>(d.invariants.alphas.size()), std::vector<cplx>(d.invariants.taus.size())};
}
}  // namespace

TEST_CASE("zero target returns the base polynomial") {
  auto b = base_of(Polynomial(3, {cplx(0.2, 0.1), cplx(-1, 0.3)}));
  auto r = realize(b.p, b.d, zero_target(b.d));
  CHECK(r.polynomial == b.p);
  CHECK(r.iterations == 0);
}

TEST_CASE("z^2+1: tilting tau matches the residue formula") {
  auto b = base_of(Polynomial(2, {1.0}));
  for (double s : {1e-3, -1e-3}) {
    DeformationTarget t{{}, {cplx(0, s)}};
    auto r = realize(b.p, b.d, t);
    CHECK(r.residual < 1e-10);
    // P = z^2 - a^2, and the real-axis integral equals pi i / a for Im a > 0
    cplx a = std::sqrt(-r.polynomial.coefficients()[0]);
    if (a.imag() < 0) a = -a;
    cplx tau = cplx(0, pi) / a;
    CHECK(std::abs(tau - cplx(pi, s)) < 1e-8);
  }
}

TEST_CASE("random targets are hit") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 6; ++t) {
    auto b = base_of(random_poly(2 + t % 3, rng));
    const double eps = 0.2 * trust_radius(b.d);
    DeformationTarget tg = zero_target(b.d);
    for (auto& x : tg.delta_alphas) x = eps * cplx(u(rng), u(rng));
    for (auto& x : tg.delta_taus) x = eps * cplx(u(rng), u(rng));
    auto r = realize(b.p, b.d, tg);
    auto got = pseudo_invariants(r.polynomial, b.d);
    std::size_t s = tg.delta_alphas.size();
    for (std::size_t i = 0; i < s; ++i) CHECK(std::abs(got[i] - b.d.invariants.alphas[i] - tg.delta_alphas[i]) < 1e-8);
    for (std::size_t i = 0; i < tg.delta_taus.size(); ++i)
      CHECK(std::abs(got[s + i] - b.d.invariants.taus[i] - tg.delta_taus[i]) < 1e-8);
  }
}

TEST_CASE("target outside the trust radius is refused") {
  auto b = base_of(Polynomial(2, {1.0}));
  DeformationTarget t{{}, {cplx(0, 2 * trust_radius(b.d))}};
  CHECK_THROWS_AS(realize(b.p, b.d, t), RealizationError);
  CHECK_THROWS_AS(realize(b.p, b.d, DeformationTarget{{1e-4}, {}}), PreconditionError);
}

TEST_CASE("root chart keeps the sum centered") {
  RootChart c({{cplx(1, 1), 1}, {cplx(-2, 0), 2}, {cplx(3, -2), 1}});
  CHECK(c.dimension() == 4);
  Eigen::VectorXd x(4);
  x << 0.1, -0.2, 0.05, 0.3;
  auto r = c.at(x);
  cplx sum = 0.0;
  for (const auto& s : r) sum += double(s.multiplicity) * s.location;
  CHECK(std::abs(sum) < 1e-14);
  CHECK(std::abs(r[0].location - cplx(1.1, 0.8)) < 1e-14);
}

TEST_CASE("Jacobian has full rank") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 5; ++t) {
    auto b = base_of(random_poly(2 + t % 4, rng));
    RootChart chart(root_specs(b.p));
    Eigen::MatrixXd J = pseudo_jacobian(chart, b.d);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    auto sv = svd.singularValues();
    CHECK(sv(sv.size() - 1) > 1e-6 * sv(0));
  }
}

TEST_CASE("both events of z^2+1 are confirmed by re-tracing") {
  auto b = base_of(Polynomial(2, {1.0}));
  auto ev = enumerate_rank1(b.m);
  REQUIRE(ev.size() == 2);
  for (const auto& e : ev) {
    auto rep = verify_event(b.p, b.m, b.d, e);
    CHECK(rep.match);
    CHECK(rep.epsilon > 0);
    CHECK(same_labelled_graph(rep.predicted, rep.traced));
  }
}
