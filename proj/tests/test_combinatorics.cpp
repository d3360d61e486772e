#include <algorithm>
#include <random>
#include <set>

#include "cpvf/error.hpp"
#include "cpvf/model_generator.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace cpvf;

namespace {
using Pairs = std::vector<std::pair<int, int>>;

const BifurcationEvent* find_event(const std::vector<BifurcationEvent>& ev, const Pairs& broken, const Pairs& formed) {
  for (const auto& e : ev)
    if (e.broken == broken && e.formed == formed) return &e;
  return nullptr;
}

std::vector<Relation> rels(const InequalitySystem& s) { return s.rel; }
}  // namespace

TEST_CASE("H-graph of the seven-homoclinic model") {
  auto m = decompose(fx::seven_homoclinics());
  auto hg = build_hgraph(m);
  CHECK(hg.vertices.size() == 7);
  CHECK(hg.has_edge(5, 1));
  CHECK_FALSE(hg.has_edge(1, 5));
  CHECK(hg.has_edge(7, 17));
  CHECK(hg.has_edge(17, 7));
}

TEST_CASE("small models have no H-graph edges") {
  CHECK(build_hgraph(decompose(fx::cubic_cylinder())).edges.empty());
  CHECK(build_hgraph(decompose(fx::double_point())).edges.empty());
  CHECK(build_hgraph(decompose(fx::make(3, {}, {{0, 0}, {1, 1}, {2, 0}, {3, 2}}))).vertices.empty());
}

TEST_CASE("H-chain of length two in the five-fold model") {
  auto m = decompose(fx::strip_three_cylinders());
  auto c = can_form(m, 7, 5);
  if (!c) c = can_form(m, 5, 7);
  REQUIRE(c);
  REQUIRE(c->members.size() == 2);
  std::set<std::pair<int, int>> got(c->members.begin(), c->members.end());
  CHECK(got == std::set<std::pair<int, int>>{{7, 6}, {5, 4}});
}

TEST_CASE("can_form") {
  auto m = decompose(fx::simultaneous());
  auto c = can_form(m, 5, 13);
  REQUIRE(c);
  CHECK(c->members.front() == std::pair{5, 4});
  CHECK(c->members.back() == std::pair{13, 12});
  CHECK_FALSE(can_form(m, 5, 5));
  // the strip separates s_{1,2} from the cylinders on the other side
  auto strip3 = decompose(fx::strip_three_cylinders());
  CHECK_FALSE(can_form(strip3, 1, 5));
  CHECK_FALSE(can_form(strip3, 5, 1));
}

TEST_CASE("feasibility systems") {
  SUBCASE("itinerary + + + - - +") {
    HChain c;
    for (int i = 0; i < 7; ++i) c.members.emplace_back(2 * i + 1, 2 * i);
    c.itinerary = {'+', '+', '+', '-', '-', '+'};
    auto sys = feasibility(c);
    REQUIRE(sys.size() == 1);
    using R = Relation;
    CHECK(rels(sys[0]) == std::vector<R>{R::Less, R::Less, R::Less, R::Greater, R::Greater, R::Less, R::Equal});
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 7; ++j) CHECK(sys[0].lhs[i][j] == (j <= i ? 1.0 : 0.0));
    CHECK(satisfies(sys[0], sys[0].witness, 0.0));
    CHECK(max_margin(sys[0]).margin > 0.0);
  }
  SUBCASE("n = 2") {
    HChain c{{{1, 0}, {5, 4}}, {'+'}};
    auto sys = feasibility(c, 0.5);
    REQUIRE(sys.size() == 1);
    CHECK(rels(sys[0]) == std::vector<Relation>{Relation::Less, Relation::Equal});
    CHECK(sys[0].witness == std::vector<double>{-0.5, 0.5});
  }
  SUBCASE("n = 1") {
    HChain c{{{1, 0}}, {}};
    auto sys = feasibility(c);
    REQUIRE(sys.size() == 2);
    CHECK(sys[0].rel == std::vector<Relation>{Relation::Greater});
    CHECK(sys[1].rel == std::vector<Relation>{Relation::Less});
  }
  SUBCASE("contradictory rows have no margin") {
    InequalitySystem s{{1}, {{1.0}, {1.0}}, {Relation::Less, Relation::Greater}, {}, 0.0};
    CHECK(max_margin(s).margin <= 0.0);
  }
}

TEST_CASE("single homoclinic in degree three: two events") {
  auto m = decompose(fx::cubic_cylinder());
  auto ev = enumerate_rank1(m);
  REQUIRE(ev.size() == 2);
  CHECK(ev[0].sign != ev[1].sign);
  for (const auto& e : ev) {
    CHECK(e.broken == Pairs{{1, 0}});
    CHECK(e.formed.empty());
    auto after = apply_event(m, e);
    CHECK(after.counts.h == 0);
    const int center = 2;
    if (e.sign == '-') {
      CHECK(after.graph.landing.at(1) == center);
      CHECK(after.equilibrium(center).kind == EquilibriumKind::Sink);
      CHECK(after.graph.landing.at(0) == 0);
    } else {
      CHECK(after.graph.landing.at(0) == center);
      CHECK(after.equilibrium(center).kind == EquilibriumKind::Source);
      CHECK(after.graph.landing.at(1) == 1);
    }
  }
}

TEST_CASE("joining two cylinders forms s_{1,4}") {
  auto m = decompose(fx::joining_cylinders());
  auto ev = enumerate_rank1(m);
  auto e = find_event(ev, {{1, 0}, {5, 4}}, {{1, 4}});
  REQUIRE(e);
  auto after = apply_event(m, *e);
  REQUIRE(after.graph.homoclinics.size() == 1);
  CHECK(after.graph.homoclinics[0].k == 1);
  CHECK(after.graph.homoclinics[0].j == 4);
  REQUIRE(after.graph.landing.count(0));
  REQUIRE(after.graph.landing.count(5));
  int a = after.graph.landing.at(0), b = after.graph.landing.at(5);
  CHECK(m.equilibrium(a).kind == EquilibriumKind::Center);
  CHECK(m.equilibrium(b).kind == EquilibriumKind::Center);
  CHECK(after.equilibrium(a).kind == EquilibriumKind::Source);
  CHECK(after.equilibrium(b).kind == EquilibriumKind::Sink);
}

TEST_CASE("three break, two form") {
  auto ev = enumerate_rank1(decompose(fx::three_break()));
  CHECK(find_event(ev, {{1, 2}, {7, 14}, {11, 10}}, {{1, 14}, {7, 10}}));
}

TEST_CASE("every H-graph edge yields a single-edge formation") {
  auto m = decompose(fx::seven_homoclinics());
  auto hg = build_hgraph(m);
  auto ev = enumerate_rank1(m);
  for (const auto& e : hg.edges) {
    int ja = m.graph.homoclinic_k(e.from)->j, jb = m.graph.homoclinic_k(e.to)->j;
    CHECK(find_event(ev, {{e.from, ja}, {e.to, jb}}, {{e.from, jb}}));
  }
}

TEST_CASE("union verdicts") {
  auto m = decompose(fx::seven_homoclinics());
  auto hg = build_hgraph(m);
  auto accepted = validate_union(m, hg, fx::accepted_union(hg));
  CHECK(accepted.accepted);
  auto shared = validate_union(m, hg, fx::shared_end_union(hg));
  CHECK_FALSE(shared.accepted);
  CHECK(shared.reason == "shared-end");
  auto conflict = validate_union(m, hg, fx::conflict_union(hg));
  CHECK_FALSE(conflict.accepted);
  CHECK(conflict.reason == "direction-conflict");
}

TEST_CASE("simultaneous formation splits into two rank-one steps") {
  auto from = decompose(fx::simultaneous());
  auto to = decompose(fx::simultaneous_after());
  auto r = decompose_rank_k(from, to);
  REQUIRE(r.found);
  CHECK(r.steps.size() == 2);
  auto cur = from;
  for (const auto& e : r.steps) cur = apply_event(cur, e);
  CHECK(same_labelled_graph(cur.graph, to.graph));
}

TEST_CASE("rank-one target is reached in one step") {
  auto m = decompose(fx::joining_cylinders());
  for (const auto& e : enumerate_rank1(m)) {
    auto r = decompose_rank_k(m, apply_event(m, e));
    REQUIRE(r.found);
    CHECK(r.steps.size() == 1);
  }
}

TEST_CASE("unreachable target is a precondition violation") {
  auto a = decompose(fx::cubic_cylinder());
  auto b = decompose(fx::make(3, {}, {{0, 0}, {1, 0}, {2, 0}, {3, 0}}));
  CHECK_THROWS_AS(decompose_rank_k(a, b), PreconditionError);
  CHECK_THROWS_AS(decompose_rank_k(a, a), PreconditionError);
}

TEST_CASE("random models: event properties") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 150; ++t) {
    auto m = random_model(2 + t % 6, rng, 5);
    auto hg = build_hgraph(m);
    if (m.counts.h <= 1) CHECK(hg.edges.empty());
    auto ev = enumerate_rank1(m);
    std::set<std::string> keys;
    for (const auto& e : ev) {
      CHECK(keys.insert(e.key()).second);
      CHECK(e.broken.size() > e.formed.size());
      CHECK(e.rank == static_cast<int>(e.broken.size() - e.formed.size()));
      for (std::size_t i = 0; i + 1 < e.broken.size(); ++i) {
        CHECK(e.formed[i] == std::pair{e.broken[i].first, e.broken[i + 1].second});
        CHECK(can_form(m, e.broken[i].first, e.broken[i + 1].first));
      }
      auto after = apply_event(m, e);
      CHECK(after.counts.h == m.counts.h - e.rank);
      CHECK(after.counts.dim == m.counts.dim + e.rank);
      CHECK(after.counts.mstar == m.counts.mstar);
      CHECK(after.counts.N == m.counts.N);
    }
    if (m.counts.h <= 5) {
      auto bf = brute_force_chained(m, hg, 4);
      std::size_t chained = std::count_if(ev.begin(), ev.end(), [](const auto& e) { return e.broken.size() > 1; });
      CHECK(bf.size() == chained);
    }
  }
}

TEST_CASE("accepted random unions are acyclic") {
  std::mt19937_64 rng(43);
  int accepted = 0;
  for (int t = 0; t < 300; ++t) {
    auto m = random_model(3 + t % 5, rng);
    auto hg = build_hgraph(m);
    auto paths = admissible_paths(hg, 6);
    if (paths.empty()) continue;
    for (int u = 0; u < 10; ++u) {
      auto un = random_union(paths, rng);
      auto v = validate_union(m, hg, un);
      if (!v.accepted) continue;
      ++accepted;
      CHECK_FALSE(union_has_cycle(un));
      CHECK(satisfies(union_system(m, hg, un), max_margin(union_system(m, hg, un)).x, 0.0));
    }
  }
  CHECK(accepted > 50);
}
