#include <omp.h>

#include <random>

#include "cpvf/realizer.hpp"
#include "cpvf/tracer.hpp"
#include "doctest.h"

using namespace cpvf;

namespace {
Polynomial random_poly(int deg, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> a(deg - 1);
  for (auto& x : a) x = {g(rng), g(rng)};
  return Polynomial(deg, a);
}
}  // namespace

TEST_CASE("parallel kernels agree with their serial versions") {
  omp_set_num_threads(4);
  std::mt19937_64 rng(31);
  for (int t = 0; t < 6; ++t) {
    Polynomial p = random_poly(3 + t % 4, rng);
    auto eqs = roots(p).equilibria;
    auto g = build_graph(p, eqs);
    auto gs = build_graph_serial(p, eqs);
    CHECK(labelled_key(g) == labelled_key(gs));
    REQUIRE(g.homoclinics.size() == gs.homoclinics.size());
    for (std::size_t i = 0; i < g.homoclinics.size(); ++i) {
      CHECK(g.homoclinics[i].tau == gs.homoclinics[i].tau);
      CHECK(g.homoclinics[i].polyline == gs.homoclinics[i].polyline);
    }

    auto d = compute_invariants(p, decompose(g));
    Polynomial q = from_roots([&] {
      auto r = root_specs(p);
      for (std::size_t i = 0; i + 1 < r.size(); ++i) r[i].location += cplx(1e-5, -2e-5) * double(i + 1);
      cplx sum = 0.0;
      for (std::size_t i = 0; i + 1 < r.size(); ++i) sum += double(r[i].multiplicity) * r[i].location;
      r.back().location = -sum / double(r.back().multiplicity);
      return r;
    }());
    CHECK(pseudo_invariants(q, d) == pseudo_invariants_serial(q, d));

    RootChart chart(root_specs(p));
    CHECK(pseudo_jacobian(chart, d) == pseudo_jacobian_serial(chart, d));
  }
}
