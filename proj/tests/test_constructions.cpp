#include <catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pomalg/constructions.hpp"
#include "pomalg/enumerate.hpp"

using namespace pomalg;
using fixtures::idx;
using fixtures::paper_S;
using fixtures::paper_U;

namespace {
  ActorPtr trivial() {
    static ActorPtr T = fixtures::shared(trivial_pomonoid());
    return T;
  }

  SPosetMap morphism(SPosetPtr const& X, SPosetPtr const& Y, std::vector<Elt> f) {
    return analyze_map(std::move(f), X, Y);
  }

  // the apex order, recomputed on the coproduct by the naive closure
  void check_apex_against_oracle(PushoutResult const& P) {
    Pairs R = P.generators;
    for (auto [x, y] : P.generators) {
      R.emplace_back(y, x);
    }
    oracle::Rel ref = oracle::alpha(*P.sum.object, R);
    std::size_t n   = P.sum.object->size();
    for (Elt x = 0; x < n; ++x) {
      for (Elt y = 0; y < n; ++y) {
        REQUIRE(bool(ref[x][y])
                == P.apex->leq(P.rho.projection[x], P.rho.projection[y]));
      }
    }
    CHECK(P.apex->size() == oracle::class_count(ref));
  }
}  // namespace

TEST_CASE("coproducts", "[constructions]") {
  SPosetPtr pt = one_point(nullptr, trivial());
  Coproduct two = coproduct(pt, pt);
  CHECK(two.object->size() == 2);
  CHECK(!two.object->order().comparable(0, 1));
  CHECK(two.object->name(0) == "1:*");
  CHECK(two.object->name(1) == "2:*");

  SubPomonoid U  = paper_U();
  SPosetPtr   UU = regular_right(U.pomonoid());
  Coproduct   C  = coproduct(UU, UU);
  REQUIRE(C.object->size() == 6);
  for (Elt x = 0; x < 3; ++x) {
    for (Elt y = 0; y < 3; ++y) {
      CHECK(C.object->leq(x, y) == UU->leq(x, y));
      CHECK(C.object->leq(3 + x, 3 + y) == UU->leq(x, y));
      CHECK(!C.object->leq(x, 3 + y));
      CHECK(!C.object->leq(3 + x, y));
      CHECK(C.object->act_right(3 + x, y) == 3 + UU->act_right(x, y));
    }
  }
  CHECK(C.first.flags.order_embedding);
  CHECK(C.first.flags.convex);
  CHECK(C.second.flags.order_embedding);
  CHECK(C.second.flags.convex);

  CHECK_THROWS_AS(coproduct(UU, regular_right(paper_S())), ActorMismatch);
}

TEST_CASE("pushout of identities", "[constructions]") {
  SPosetPtr     A  = regular_right(paper_S());
  SPosetMap     id = identity_map(A);
  PushoutResult P  = pushout(id, id);
  CHECK(find_isomorphism(*P.apex, *A));
  CHECK(P.gamma.flags.order_embedding);
  CHECK(P.gamma.flags.surjective);
  check_apex_against_oracle(P);
  CHECK(check_pushout_lemmas(P).violations.empty());
}

TEST_CASE("two chains glued at the bottom", "[constructions]") {
  SPosetPtr     A = fixtures::trivial_act(trivial(), Poset::discrete({"p"}));
  SPosetPtr     B = fixtures::trivial_act(trivial(), Poset::chain(2));
  SPosetMap     f = morphism(A, B, {0});
  PushoutResult P = pushout(f, f);
  check_apex_against_oracle(P);
  REQUIRE(P.apex->size() == 3);
  CHECK(P.gamma(0) == P.delta(0));
  CHECK(P.apex->leq(P.gamma(0), P.delta(1)));
  CHECK(P.apex->leq(P.gamma(0), P.gamma(1)));
  CHECK(!P.apex->order().comparable(P.gamma(1), P.delta(1)));

  GapWitness w = pushout_gap_witnesses(P, 0, 1);
  CHECK(w.a == 0);
  CHECK(w.a_prime == 0);
  CHECK_THROWS_AS(pushout_gap_witnesses(P, 1, 0), PreconditionFailed);

  EqualityWitness e = pushout_equality_witnesses(P, 0, 0);
  CHECK(e.a1 == 0);
  CHECK(e.a2_prime == 0);

  PushoutLemmaReport r = check_pushout_lemmas(P);
  CHECK(r.violations.empty());
  CHECK(r.gap_instances > 0);
  CHECK_FALSE(pushout_universal_failure(P, B));
}

TEST_CASE("pushout lemmas on enumerated squares", "[constructions][slow]") {
  std::size_t squares = 0;
  for (auto const& S0 : enumerate_pomonoids_upto(2)) {
    ActorPtr               S = fixtures::shared(S0);
    std::vector<SPosetPtr> acts = enumerate_right_sposets_upto(S, 3);
    for (auto const& A : acts) {
      if (A->size() > 2) {
        continue;
      }
      for (auto const& B : acts) {
        auto fs = all_morphisms(*A, *B);
        for (auto const& C : acts) {
          auto gs = all_morphisms(*A, *C);
          for (auto const& f : fs) {
            for (auto const& g : gs) {
              PushoutResult P = pushout(morphism(A, B, f), morphism(A, C, g));
              PushoutLemmaReport r = check_pushout_lemmas(P);
              INFO(S->label() << " " << A->label() << " " << B->label() << " "
                              << C->label());
              REQUIRE(r.violations.empty());
              if (squares % 97 == 0) {
                check_apex_against_oracle(P);
              }
              ++squares;
            }
          }
        }
      }
    }
  }
  CHECK(squares >= 500);
}

TEST_CASE("pushout universal property", "[constructions]") {
  ActorPtr               S    = fixtures::shared(max_chain(2));
  std::vector<SPosetPtr> acts = enumerate_right_sposets_upto(S, 2);
  for (auto const& A : acts) {
    if (A->size() != 1) {
      continue;
    }
    for (auto const& B : acts) {
      for (auto const& f : all_morphisms(*A, *B)) {
        PushoutResult P = pushout(morphism(A, B, f), morphism(A, B, f));
        for (auto const& Z : acts) {
          CHECK_FALSE(pushout_universal_failure(P, Z));
        }
      }
    }
  }
}

TEST_CASE("direct limits of chains", "[constructions]") {
  SPosetPtr X = regular_right(paper_S());
  std::vector<Elt> id(X->size());
  for (Elt x = 0; x < id.size(); ++x) {
    id[x] = x;
  }

  SECTION("constant system") {
    DirectSystem sys = chain_system({X, X, X}, {id, id});
    DirectLimit  L   = direct_limit(sys);
    CHECK(find_isomorphism(*L.object, *X));
    CHECK(check_direct_limit_lemmas(sys, L).empty());
    CHECK(L.legs[0].flags.order_embedding);
  }

  SECTION("an embedding") {
    SPosetPtr two   = fixtures::trivial_act(trivial(), Poset::chain(2));
    SPosetPtr three = fixtures::trivial_act(trivial(), Poset::chain(3));
    DirectSystem sys = chain_system({two, three}, {{0, 2}});
    DirectLimit  L   = direct_limit(sys);
    REQUIRE(L.object->size() == 3);
    CHECK(L.legs[1].flags.order_embedding);
    CHECK(L.legs[1].flags.surjective);
    CHECK(L.legs[0].flags.order_embedding);
    CHECK(L.legs[0](0) == L.legs[1](0));
    CHECK(L.legs[0](1) == L.legs[1](2));
    CHECK(check_direct_limit_lemmas(sys, L).empty());
  }

  SECTION("a collapse") {
    SPosetPtr two = fixtures::trivial_act(trivial(), Poset::chain(2));
    SPosetPtr pt  = fixtures::trivial_act(trivial(), Poset::discrete({"p"}));
    DirectSystem sys = chain_system({two, two, pt}, {{0, 1}, {0, 0}});
    DirectLimit  L   = direct_limit(sys);
    CHECK(L.object->size() == 1);
    CHECK_FALSE(L.legs[0].flags.injective);
    CHECK_FALSE(L.legs[1].flags.injective);
    CHECK(L.legs[2].flags.injective);
    CHECK(check_direct_limit_lemmas(sys, L).empty());
  }

  SECTION("incoherent maps") {
    SPosetPtr    pt3 = fixtures::trivial_act(trivial(), Poset::discrete({"p", "q", "r"}));
    DirectSystem sys = chain_system({pt3, pt3, pt3}, {{1, 0, 2}, {1, 0, 2}});
    sys.maps[0][2]   = {1, 0, 2};
    CHECK_THROWS_AS(direct_limit(sys), SystemIncoherent);
  }
}

TEST_CASE("free extension along U = S", "[constructions]") {
  ActorPtr    S = paper_S();
  SubPomonoid whole(S, {0, 1, 2, 3, 4});
  SPosetPtr   X = regular_right(S);
  SPosetPtr   Y = restrict_right(*X, whole);
  std::vector<Elt> id(X->size());
  for (Elt x = 0; x < id.size(); ++x) {
    id[x] = x;
  }
  FreeExtension E = free_extension(whole, X, Y, id);
  auto iso = find_isomorphism(*E.F, *X);
  CHECK(iso);
  CHECK(check_free_extension_maps(E).empty());
  CHECK(check_free_extension_order(E).empty());
  CHECK(free_extension_pushout(E).isomorphic);
}

TEST_CASE("free extensions over the fixture core", "[constructions]") {
  SubPomonoid U = paper_U();
  ActorPtr    S = U.ambient();
  // X = S, Y = S restricted to U with f the identity, and X = point
  SPosetPtr X  = regular_right(S);
  SPosetPtr XU = restrict_right(*X, U);
  std::vector<Elt> id(X->size());
  for (Elt x = 0; x < id.size(); ++x) {
    id[x] = x;
  }
  FreeExtension E = free_extension(U, X, XU, id);
  CHECK(check_free_extension_maps(E).empty());
  CHECK(check_free_extension_order(E).empty());
  CHECK(free_extension_pushout(E).isomorphic);
  // every y lies in the image of f, so F is X again
  CHECK(find_isomorphism(*E.F, *X));

  // a U-poset with a point outside the image
  SPosetPtr pt = one_point(nullptr, S);
  std::vector<SPosetPtr> Ys = enumerate_right_sposets_upto(U.pomonoid(), 2);
  std::size_t built = 0;
  for (auto const& Y : Ys) {
    for (auto const& f : all_morphisms(*restrict_right(*pt, U), *Y)) {
      FreeExtension G = free_extension(U, pt, Y, f);
      CHECK(check_free_extension_maps(G).empty());
      CHECK(check_free_extension_order(G).empty());
      CHECK(free_extension_pushout(G).isomorphic);
      for (auto const& Z : enumerate_right_sposets_upto(S, 2)) {
        CHECK_FALSE(free_extension_universal_failure(G, Z));
      }
      ++built;
    }
  }
  CHECK(built >= Ys.size());
}

TEST_CASE("free extension of a non-image point", "[constructions]") {
  // U trivial inside the two-element chain monoid {1, 0} under max
  ActorPtr    S = fixtures::shared(max_chain(1));
  SubPomonoid U(S, {S->identity()});
  SPosetPtr   pt = one_point(nullptr, S);
  // Y: the point p = f(*) below a free point q
  SPosetPtr Y = fixtures::trivial_act(U.pomonoid(), Poset::chain(2));
  FreeExtension E = free_extension(U, pt, Y, {0});
  CHECK(check_free_extension_maps(E).empty());
  CHECK(check_free_extension_order(E).empty());
  CHECK(free_extension_pushout(E).isomorphic);
  CHECK(E.h.size() == 1);
  CHECK(E.g[0] != E.g[1]);
  for (auto const& Z : enumerate_right_sposets_upto(S, 3)) {
    CHECK_FALSE(free_extension_universal_failure(E, Z));
  }
}
