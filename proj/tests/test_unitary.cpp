#include <catch_amalgamated.hpp>

#include <algorithm>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pomalg/unitary.hpp"

using namespace pomalg;
using fixtures::idx;
using fixtures::paper_S;
using fixtures::paper_U;

namespace {
  bool has_triple(std::vector<TripleWitness> const& ws, Elt y, Elt u, Elt m) {
    return std::any_of(ws.begin(), ws.end(), [&](TripleWitness const& w) {
      return w.y == y && w.u == u && w.m == m;
    });
  }

  void check_diagram(SideVerdict const& v) {
    CHECK(v.srpu == (v.lsrpu && v.usrpu));
    if (v.lsrpu || v.usrpu) {
      CHECK(v.rpu);
    }
    if (v.rpu) {
      CHECK(v.ru);
    }
    CHECK(v.rpu == !v.chain.has_value());
  }

  // U as a sub-U-poset of S, on one or both sides
  SPosetMap inclusion(SubPomonoid const& U, bool right, bool left) {
    ActorPtr  Up = U.pomonoid();
    SPosetPtr src, dst;
    std::optional<Restriction> l, r;
    if (left) {
      l = same_actions(Up);
    }
    if (right) {
      r = same_actions(Up);
    }
    src = restrict_actions(*regular_bi(Up), l, r);
    std::optional<Restriction> l2, r2;
    if (left) {
      l2 = along(U);
    }
    if (right) {
      r2 = along(U);
    }
    dst = restrict_actions(*regular_bi(U.ambient()), l2, r2);
    return analyze_map(U.embedding(), src, dst);
  }
}  // namespace

TEST_CASE("fixture verdicts", "[unitary]") {
  SubPomonoid    U = paper_U();
  Pomonoid const& S = *U.ambient();
  UnitaryVerdict v = check_unitary_submonoid(U);
  REQUIRE(v.right);
  SideVerdict const& r = *v.right;
  CHECK(r.ru);
  CHECK(r.rpu);
  CHECK_FALSE(r.usrpu);
  CHECK_FALSE(r.lsrpu);
  CHECK_FALSE(r.srpu);
  Elt one = idx(S, "1"), e = idx(S, "e"), b = idx(S, "b"), a = idx(S, "a");
  // local index of e inside U
  Elt ue = 0;
  while (U.embedding()[ue] != e) {
    ++ue;
  }
  CHECK(has_triple(r.usrpu_violations, b, ue, one));
  CHECK(has_triple(r.lsrpu_violations, a, ue, one));
  for (auto const& w : r.usrpu_violations) {
    CHECK(S.leq(w.m, S.mult(w.y, U.embedding()[w.u])));
    CHECK_FALSE(U.contains(w.y));
  }
  check_diagram(r);
  REQUIRE(v.left);
  check_diagram(*v.left);
  CHECK(v.pounitary());
}

TEST_CASE("U = S is everything", "[unitary]") {
  ActorPtr    S = paper_S();
  SubPomonoid U(S, {0, 1, 2, 3, 4});
  UnitaryVerdict v = check_unitary_submonoid(U);
  for (auto const& side : {*v.right, *v.left}) {
    CHECK(side.ru);
    CHECK(side.rpu);
    CHECK(side.usrpu);
    CHECK(side.lsrpu);
    CHECK(side.srpu);
  }
}

TEST_CASE("max truncations", "[unitary]") {
  for (std::size_t m = 1; m <= 5; ++m) {
    ActorPtr S = fixtures::shared(max_chain(m));
    for (std::size_t n = 0; n < m; ++n) {
      std::vector<Elt> members;
      for (Elt i = 0; i <= n; ++i) {
        members.push_back(i);
      }
      SubPomonoid    U(S, members);
      UnitaryVerdict v = check_unitary_submonoid(U);
      CHECK(v.right->lsrpu);
      CHECK_FALSE(v.right->usrpu);
      check_diagram(*v.right);
      // the same scan by hand
      bool upper = true;
      for (Elt s = 0; s <= m; ++s) {
        for (Elt u = 0; u <= n; ++u) {
          for (Elt w = 0; w <= n; ++w) {
            if (w <= std::max(s, u) && s > n) {
              upper = false;
            }
          }
        }
      }
      CHECK(v.right->usrpu == upper);
    }
  }
}

TEST_CASE("chain witnesses replay", "[unitary]") {
  std::size_t failures = 0;
  for (auto const& S0 : enumerate_pomonoids_upto(4)) {
    ActorPtr S = fixtures::shared(S0);
    for (auto const& U : enumerate_subpomonoids(S)) {
      for (bool left : {false, true}) {
        MarkedAction G = marked_submonoid(U, left);
        SideVerdict  v = detail::decide_unitary(G);
        check_diagram(v);
        if (v.chain) {
          ++failures;
          INFO(S->label());
          CHECK(replay(*v.chain, G).empty());
        }
      }
    }
  }
  CHECK(failures > 0);
}

TEST_CASE("fixpoint agrees with chain enumeration", "[unitary]") {
  for (auto const& S0 : enumerate_pomonoids_upto(4)) {
    ActorPtr S = fixtures::shared(S0);
    for (auto const& U : enumerate_subpomonoids(S)) {
      UnitaryVerdict v = check_unitary_submonoid(U);
      INFO(S->label());
      CHECK(v.right->rpu == oracle::right_pounitary(*S, U.mask()));
      Pomonoid op = opposite(*S);
      CHECK(v.left->rpu == oracle::right_pounitary(op, U.mask()));
      if (v.right->srpu) {
        CHECK_FALSE(srpu_structure_failure(U));
      }
    }
  }
}

TEST_CASE("morphism verdicts", "[unitary]") {
  SubPomonoid    U   = paper_U();
  SPosetMap      inc = inclusion(U, true, true);
  UnitaryVerdict a   = check_unitary_morphism(inc);
  UnitaryVerdict b   = check_unitary_submonoid(U);
  for (auto [x, y] : {std::pair{a.right, b.right}, std::pair{a.left, b.left}}) {
    CHECK(x->ru == y->ru);
    CHECK(x->rpu == y->rpu);
    CHECK(x->usrpu == y->usrpu);
    CHECK(x->lsrpu == y->lsrpu);
  }
  CHECK(a.convex);

  SPosetPtr      X  = regular_right(paper_S());
  UnitaryVerdict id = check_unitary_morphism(identity_map(X));
  CHECK(id.right->rpu);
  CHECK(id.right->srpu);
  CHECK_FALSE(id.left);

  SPosetPtr two = fixtures::trivial_act(fixtures::shared(trivial_pomonoid()), Poset::chain(2));
  SPosetPtr pt  = fixtures::trivial_act(two->right_actor(), Poset::discrete({"p"}));
  SPosetPtr anti = fixtures::trivial_act(two->right_actor(), Poset::discrete(2));
  CHECK_THROWS_AS(check_unitary_morphism(analyze_map({0, 1}, anti, two)),
                  NotOrderEmbedding);
  CHECK(check_unitary_morphism(analyze_map({0}, pt, two)).right->rpu);
}

TEST_CASE("pounitary maps are convex", "[unitary]") {
  std::size_t seen = 0;
  for (auto const& S0 : enumerate_pomonoids_upto(2)) {
    ActorPtr S    = fixtures::shared(S0);
    auto     acts = enumerate_right_sposets_upto(S, 3);
    for (auto const& X : acts) {
      for (auto const& Y : acts) {
        for (auto const& f : all_morphisms(*X, *Y)) {
          SPosetMap m = analyze_map(f, X, Y);
          if (!m.flags.order_embedding) {
            continue;
          }
          UnitaryVerdict v = check_unitary_morphism(m);
          check_diagram(*v.right);
          if (v.right->rpu) {
            ++seen;
            CHECK(v.convex);
          }
        }
      }
    }
  }
  CHECK(seen > 0);
}

TEST_CASE("poextension", "[unitary]") {
  SubPomonoid U = paper_U();
  CHECK(check_poextension_for(U, regular_right(U.pomonoid())).order_embedding);
  CHECK(check_left_poextension_for(U, regular_left(U.pomonoid())).order_embedding);

  BoundedPoextVerdict bv = check_poextension_bounded(U, 3);
  CHECK(bv.holds);
  CHECK(bv.scope == "bounded");
  CHECK(bv.tested > 1);
  CHECK_THROWS_AS(check_poextension_bounded(U, 4), CapExceeded);

  ActorPtr    S = paper_S();
  SubPomonoid whole(S, {0, 1, 2, 3, 4});
  CHECK(check_poextension_bounded(whole, 2).holds);
  SPosetPtr X = regular_right(whole.pomonoid());
  SPosetPtr Y = regular_left(whole.pomonoid());
  CHECK(check_two_sided_poextension_for(whole, X, Y).order_embedding);
  CHECK(check_two_sided_poextension_for(U, regular_right(U.pomonoid()),
                                        regular_left(U.pomonoid()))
            .order_embedding);
}

TEST_CASE("left pounitary gives the right poextension property", "[unitary]") {
  SPosetCache cache;
  std::size_t checked = 0;
  for (auto const& S0 : enumerate_pomonoids_upto(3)) {
    ActorPtr S = fixtures::shared(S0);
    for (auto const& U : enumerate_subpomonoids(S)) {
      if (!check_unitary_submonoid(U).left->rpu) {
        continue;
      }
      ++checked;
      BoundedPoextVerdict v = check_poextension_bounded(U, 2, {}, &cache);
      INFO(S->label());
      CHECK(v.holds);
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("image rule in tensor products", "[unitary]") {
  for (std::size_t m = 1; m <= 3; ++m) {
    ActorPtr S = fixtures::shared(max_chain(m));
    for (std::size_t n = 0; n < m; ++n) {
      std::vector<Elt> members;
      for (Elt i = 0; i <= n; ++i) {
        members.push_back(i);
      }
      SubPomonoid U(S, members);
      SPosetMap   inc = inclusion(U, true, false);
      REQUIRE(check_unitary_morphism(inc).right->lsrpu);
      for (auto const& A0 : enumerate_right_sposets_upto(
               fixtures::shared(opposite(*U.pomonoid())), 2)) {
        SPosetPtr A = as_left_sposet(*A0, U.pomonoid());
        CHECK_FALSE(lemma_r2_check(inc, A));
      }
      CHECK_THROWS_AS(image_rule_failure(inc, regular_left(U.pomonoid()), false),
                      PreconditionFailed);
    }
  }
}

TEST_CASE("free extensions of strongly pounitary maps", "[unitary]") {
  // the identity of S is strongly pounitary; S strongly pounitary in itself
  ActorPtr    S = paper_S();
  SubPomonoid whole(S, {0, 1, 2, 3, 4});
  SPosetPtr   X = regular_right(S);
  SPosetPtr   Y = restrict_right(*X, whole);
  FreeExtension E = free_extension(whole, X, Y, {0, 1, 2, 3, 4});
  FreeExtensionEmbedding r = free_extension_embedding(E);
  CHECK(r.h_embedding);
  CHECK(r.g_embedding);
  CHECK(r.g_strong);
}
