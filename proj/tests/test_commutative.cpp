#include <catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "pomalg/commutative.hpp"

using namespace pomalg;
using fixtures::idx;
using fixtures::paper_S;
using fixtures::paper_U;

namespace {
  ActorPtr trivial() {
    static ActorPtr T = fixtures::shared(trivial_pomonoid());
    return T;
  }

  PoAmalgam over_itself(ActorPtr const& S) {
    std::vector<Elt> id(S->size());
    for (Elt s = 0; s < id.size(); ++s) {
      id[s] = s;
    }
    return PoAmalgam(S, S, S, id, id);
  }
}  // namespace

TEST_CASE("commutativity", "[commutative]") {
  CommutativityCheck c = is_commutative(*paper_S());
  REQUIRE_FALSE(c.holds);
  Pomonoid const& S = *paper_S();
  auto [s, t] = *c.witness;
  CHECK(S.mult(s, t) != S.mult(t, s));
  std::size_t clashes = 0;
  for (Elt x = 0; x < 5; ++x) {
    for (Elt y = 0; y < 5; ++y) {
      clashes += S.mult(x, y) != S.mult(y, x);
    }
  }
  CHECK(clashes > 0);
  for (std::size_t m = 0; m <= 5; ++m) {
    CHECK(is_commutative(max_chain(m)).holds);
  }
  CHECK(is_commutative(*trivial()).holds);
}

TEST_CASE("pocancellativity", "[commutative]") {
  CHECK(is_pocancellative(cyclic_group(3)).holds());
  CHECK(is_pocancellative(*trivial()).holds());
  Pomonoid                m = max_chain(3);
  PocancellativityCheck   p = is_pocancellative(m);
  REQUIRE_FALSE(p.holds());
  REQUIRE(p.witness);
  auto [side, s, x, y] = *p.witness;
  CHECK(m.leq(m.mult(s, x), m.mult(s, y)));
  CHECK_FALSE(m.leq(x, y));
  // s = 3: max(3, 1) <= max(3, 0) with 1 !<= 0
  CHECK(m.leq(m.mult(3, 1), m.mult(3, 0)));
}

TEST_CASE("group completion", "[commutative]") {
  ActorPtr Z2 = fixtures::shared(cyclic_group(2));
  GroupCompletion G = group_completion(Z2);
  CHECK(G.violations.empty());
  CHECK(G.group->size() == 2);
  CHECK(analyze_pomonoid_map(G.chi, *Z2, *G.group).order_embedding);
  CHECK_FALSE(pomonoid_isomorphisms(*Z2, *G.group).empty());
  for (Elt s = 0; s < 2; ++s) {
    CHECK(G.of(s, s) == G.group->identity());
  }

  GroupCompletion T = group_completion(trivial());
  CHECK(T.group->size() == 1);

  CHECK_THROWS_AS(group_completion(fixtures::shared(max_chain(2))), PreconditionFailed);
  CHECK_THROWS_AS(group_completion(paper_S()), PreconditionFailed);
}

TEST_CASE("completions of all small commutative pocancellative pomonoids",
          "[commutative]") {
  EnumerationLimits lim{6, 3};
  auto              all = enumerate_pomonoids_upto(6, lim, {true, true});
  CHECK(all.size() >= 7);
  for (auto const& P : all) {
    ActorPtr        S = fixtures::shared(P);
    GroupCompletion G = group_completion(S);
    INFO(S->label());
    CHECK(G.violations.empty());
    CHECK(G.group->size() == S->size());
    CHECK_FALSE(pomonoid_isomorphisms(*S, *G.group).empty());
  }
}

TEST_CASE("commutative amalgams", "[commutative]") {
  SECTION("U = S1 = S2") {
    ActorPtr                 S = fixtures::shared(max_chain(2));
    CommutativeAmalgamReport R = commutative_amalgam(over_itself(S));
    REQUIRE(R.product);
    CHECK(R.product->size() == S->size());
    CHECK_FALSE(pomonoid_isomorphisms(*S, *R.product).empty());
    CHECK(R.strongly_poembeddable);
    CHECK(R.hypotheses);
    CHECK_FALSE(R.contradiction);
  }

  SECTION("non-commutative input") {
    CHECK_THROWS_AS(commutative_amalgam(PoAmalgam::doubled(paper_U())), NotCommutative);
  }

  SECTION("tensor agrees with the tower") {
    std::vector<std::pair<ActorPtr, SubPomonoid>> subs;
    for (auto const& P : enumerate_pomonoids_upto(3, {}, {true, false})) {
      ActorPtr S = fixtures::shared(P);
      for (auto const& U : enumerate_subpomonoids(S)) {
        subs.emplace_back(S, U);
      }
    }
    SPosetCache cache;
    std::size_t pounitary = 0;
    for (auto const& [S1, U1] : subs) {
      for (auto const& [S2, U2] : subs) {
        for (auto const& psi : pomonoid_isomorphisms(*U1.pomonoid(), *U2.pomonoid())) {
          std::vector<Elt> phi2(psi.size());
          for (Elt u = 0; u < psi.size(); ++u) {
            phi2[u] = U2.embedding()[psi[u]];
          }
          PoAmalgam                A(U1.pomonoid(), S1, S2, U1.embedding(), phi2);
          CommutativeAmalgamReport R = commutative_amalgam(A, 2, &cache);
          INFO(S1->label() << " " << S2->label());
          CHECK(R.violations.empty());
          CHECK_FALSE(R.contradiction);
          EmbeddabilityReport E = embeddability_report(build_tower(A, 2));
          CHECK(E.k_embedding[0] == R.lambda1_embedding);
          CHECK(E.h_embedding[0] == R.lambda2_embedding);
          CHECK(E.strong_condition == R.strong_condition);
          SubPomonoid V2(S2, phi2);
          if (check_unitary_submonoid(U1).pounitary()
              && check_unitary_submonoid(V2).pounitary()) {
            ++pounitary;
            CHECK(R.strongly_poembeddable);
          }
        }
      }
    }
    CHECK(pounitary > 0);
  }

  SECTION("pocancellative factors over a group core") {
    ActorPtr Z2 = fixtures::shared(cyclic_group(2));
    ActorPtr Z4 = fixtures::shared(cyclic_group(4));
    // Z2 inside Z4 as {0, 2}
    PoAmalgam A(Z2, Z4, Z4, {0, 2}, {0, 2});
    CommutativeAmalgamReport R = commutative_amalgam(A);
    CHECK(R.core_is_group);
    REQUIRE(R.tensor_pocancellative);
    CHECK(*R.tensor_pocancellative);
    CHECK(R.strongly_poembeddable);
  }
}

TEST_CASE("completion amalgams", "[commutative]") {
  ActorPtr  T = trivial();
  CompletionAmalgam C = completion_amalgam(PoAmalgam(T, T, T, {0}, {0}));
  REQUIRE(C.amalgam);
  CHECK(C.core.group->size() == 1);
  CHECK(C.violations.empty());

  ActorPtr  Z2 = fixtures::shared(cyclic_group(2));
  CompletionAmalgam D = completion_amalgam(over_itself(Z2));
  REQUIRE(D.amalgam);
  CHECK(D.embeddings);
  CHECK(D.well_defined);
  CHECK(D.first.group->size() == 2);
  CHECK_FALSE(pomonoid_isomorphisms(*D.first.group, *D.second.group).empty());

  // Delta-related pairs go to Delta-related pairs
  ActorPtr  Z4 = fixtures::shared(cyclic_group(4));
  CompletionAmalgam E = completion_amalgam(PoAmalgam(Z2, Z4, Z4, {0, 2}, {0, 2}));
  CHECK(E.well_defined);
  CHECK(E.embeddings);

  ActorPtr M = fixtures::shared(max_chain(1));
  CHECK_THROWS_AS(completion_amalgam(over_itself(M)), PreconditionFailed);
}

TEST_CASE("open problem experiment", "[commutative]") {
  OpenProblemExperiment x = open_problem_experiment(4);
  CHECK(x.amalgams > 0);
  CHECK(x.message == "no counterexample found at this scale");
}
