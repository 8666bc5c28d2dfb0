#include <catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "pomalg/core.hpp"

using namespace pomalg;
using fixtures::idx;
using fixtures::paper_S;

namespace {
  bool has_kind(ValidationError const& e, std::string const& kind) {
    for (auto const& v : e.violations()) {
      if (v.kind == kind) {
        return true;
      }
    }
    return false;
  }

  // independent recomputation of map flags from the definitions
  MapFlags flags_by_definition(std::vector<Elt> const& f,
                               Poset const&            P,
                               Poset const&            Q) {
    MapFlags r;
    r.monotone = r.order_embedding = r.injective = true;
    for (Elt x = 0; x < P.size(); ++x) {
      for (Elt y = 0; y < P.size(); ++y) {
        if (P.leq(x, y) && !Q.leq(f[x], f[y])) {
          r.monotone = false;
        }
        if (P.leq(x, y) != Q.leq(f[x], f[y])) {
          r.order_embedding = false;
        }
        if (x != y && f[x] == f[y]) {
          r.injective = false;
        }
      }
    }
    r.surjective = true;
    for (Elt q = 0; q < Q.size(); ++q) {
      r.surjective = r.surjective && std::find(f.begin(), f.end(), q) != f.end();
    }
    r.convex = true;
    for (Elt x = 0; x < P.size(); ++x) {
      for (Elt y = 0; y < P.size(); ++y) {
        for (Elt z = 0; z < Q.size(); ++z) {
          if (Q.leq(f[x], z) && Q.leq(z, f[y])
              && std::find(f.begin(), f.end(), z) == f.end()) {
            r.convex = false;
          }
        }
      }
    }
    return r;
  }
}  // namespace

TEST_CASE("closure_order builds chains and rejects cycles", "[core]") {
  Poset p = closure_order(2, {{0, 1}}, {"x", "y"});
  CHECK(p.leq(0, 1));
  CHECK_FALSE(p.leq(1, 0));
  CHECK_THROWS_AS(closure_order(2, {{0, 1}, {1, 0}}), AntisymmetryViolation);

  Poset q = closure_order(3, {{0, 1}, {1, 2}});
  CHECK(q.leq(0, 2));
  std::vector<std::pair<Elt, Elt>> all;
  for (Elt a = 0; a < 3; ++a) {
    for (Elt b = 0; b < 3; ++b) {
      if (q.leq(a, b)) {
        all.emplace_back(a, b);
      }
    }
  }
  CHECK(closure_order(3, all) == q);  // idempotent
}

TEST_CASE("fixture order from its Hasse pairs", "[core]") {
  ActorPtr        S = paper_S();
  Poset const&    P = S->order();
  Elt a = idx(*S, "a"), b = idx(*S, "b"), e = idx(*S, "e"), f = idx(*S, "f"),
      one = idx(*S, "1");
  for (Elt x = 0; x < 5; ++x) {
    CHECK(P.leq(a, x));
    CHECK(P.leq(x, b));
  }
  CHECK_FALSE(P.comparable(one, e));
  CHECK_FALSE(P.comparable(one, f));
  CHECK_FALSE(P.comparable(e, f));
  CHECK(P.covers().size() == 6);
}

TEST_CASE("hasse_edges matches the definition", "[core]") {
  ActorPtr S = fixtures::shared(max_chain(4));
  auto     c = S->order().covers();
  CHECK(c.size() == 4);
  Poset d = Poset::discrete(4);
  CHECK(d.covers().empty());
}

TEST_CASE("validate_pomonoid", "[core]") {
  ActorPtr S = paper_S();
  CHECK(S->identity() == idx(*S, "1"));
  for (Elt s = 0; s < 5; ++s) {
    for (Elt t = 0; t < 5; ++t) {
      for (Elt u = 0; u < 5; ++u) {
        REQUIRE(S->mult(S->mult(s, t), u) == S->mult(s, S->mult(t, u)));
      }
    }
  }
  CHECK_NOTHROW(trivial_pomonoid());

  // adding 1 <= f breaks left compatibility: e1 = e but ef = f
  std::vector<std::pair<Elt, Elt>> pairs;
  for (auto p : S->order().covers()) {
    pairs.push_back(p);
  }
  pairs.emplace_back(idx(*S, "1"), idx(*S, "f"));
  PomonoidCandidate c{closure_order(5, pairs, S->names()), S->table(), {}};
  auto              v = pomonoid_violations(c);
  REQUIRE_FALSE(v.empty());
  CHECK(v[0].kind == "NotCompatible");
  CHECK_THROWS_AS(Pomonoid(c), ValidationError);

  // e <= f on top of the fixture order is compatible (checked by scan)
  pairs.pop_back();
  pairs.emplace_back(idx(*S, "e"), idx(*S, "f"));
  PomonoidCandidate ok{closure_order(5, pairs, S->names()), S->table(), {}};
  CHECK(pomonoid_violations(ok).empty());
}

TEST_CASE("validate_pomonoid reports each violated axiom", "[core]") {
  // no identity and not associative: x*y = y for x != y, x*x = 0
  std::vector<Elt> table{0, 1, 2, 0, 0, 2, 0, 1, 0};
  PomonoidCandidate c{Poset::discrete(3), table, {}};
  try {
    Pomonoid p(c);
    FAIL("expected a validation error");
  } catch (ValidationError const& e) {
    CHECK(has_kind(e, "NoIdentity"));
    CHECK(has_kind(e, "NotAssociative"));
  }
}

TEST_CASE("adjoin_identity", "[core]") {
  Posemigroup z{Poset::discrete({"z"}), {0}};
  Pomonoid    m = adjoin_identity(z);
  CHECK(m.size() == 2);
  CHECK(m.identity() == 1);
  CHECK_FALSE(m.order().comparable(0, 1));

  ActorPtr    S = paper_S();
  Posemigroup s{S->order(), S->table()};
  Pomonoid    t = adjoin_identity(s);
  CHECK(t.size() == 6);
  CHECK(t.identity() == 5);
  CHECK(t.identity() != idx(*S, "1"));
  for (Elt x = 0; x < 5; ++x) {
    CHECK_FALSE(t.order().comparable(x, 5));
    for (Elt y = 0; y < 5; ++y) {
      CHECK(t.leq(x, y) == S->leq(x, y));
      CHECK(t.mult(x, y) == S->mult(x, y));
    }
  }
}

TEST_CASE("subpomonoids", "[core]") {
  SubPomonoid U = fixtures::paper_U();
  CHECK(U.size() == 3);
  CHECK(U.pomonoid()->size() == 3);
  ActorPtr S = paper_S();
  CHECK_THROWS_AS(SubPomonoid(S, {idx(*S, "e"), idx(*S, "f")}),
                  ValidationError);
  // {1, b} is closed
  CHECK_NOTHROW(SubPomonoid(S, {idx(*S, "1"), idx(*S, "b")}));
  // {1, e, b}: eb = b, be = b, closed
  CHECK_NOTHROW(SubPomonoid(S, {idx(*S, "1"), idx(*S, "e"), idx(*S, "b")}));
}

TEST_CASE("validate_sposet", "[core]") {
  ActorPtr S = paper_S();
  CHECK_NOTHROW(regular_right(S));
  CHECK_NOTHROW(regular_left(S));
  CHECK_NOTHROW(regular_bi(S));
  CHECK_NOTHROW(one_point(nullptr, S));
  CHECK(one_point(S, S)->side() == Side::bi);

  // U = {1, e, f} acted on by all of S through the table: 1.b = b escapes
  SubPomonoid      U = fixtures::paper_U();
  std::vector<Elt> local(5, 99);
  for (Elt i = 0; i < U.size(); ++i) {
    local[U.members()[i]] = i;
  }
  std::vector<Elt> act;
  for (Elt u : U.members()) {
    for (Elt s = 0; s < 5; ++s) {
      act.push_back(local[S->mult(u, s)]);
    }
  }
  SPosetCandidate c{U.pomonoid()->order(), nullptr, {}, S, act};
  auto            v = sposet_violations(c);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == "ActionNotClosed");

  // chain 0 < 1 over max-chain {0,1} with action x.s = s: not unital
  ActorPtr         M = fixtures::shared(max_chain(1));
  SPosetCandidate  d{Poset::chain(2), nullptr, {}, M, {0, 1, 0, 1}};
  auto             w = sposet_violations(d);
  REQUIRE_FALSE(w.empty());
  CHECK(w[0].kind == "ActionNotUnital");

  // 2-chain reversed under max action: x.s = max(x, s) with order 1 < 0
  // fails monotonicity in the scalar
  BitMatrix rev(2);
  rev.set_diagonal();
  rev.set(1, 0);
  SPosetCandidate r{Poset(rev, {"0", "1"}), nullptr, {}, M, {0, 1, 1, 1}};
  auto            rv = sposet_violations(r);
  REQUIRE_FALSE(rv.empty());
  bool scalar = false;
  for (auto const& x : rv) {
    scalar = scalar || x.kind == "NotMonotoneInScalar";
  }
  CHECK(scalar);
}

TEST_CASE("analyze_map", "[core]") {
  ActorPtr  S  = paper_S();
  SPosetPtr SS = regular_right(S);
  SPosetMap id = identity_map(SS);
  CHECK(id.flags.order_embedding);
  CHECK(id.flags.convex);
  CHECK(id.flags.equivariant);
  CHECK(id.flags.surjective);

  // inclusion U -> S as right U-posets
  SubPomonoid U   = fixtures::paper_U();
  SPosetPtr   UU  = regular_right(U.pomonoid());
  SPosetPtr   SU  = restrict_actions(*SS, std::nullopt, along(U));
  SPosetMap   inc = analyze_map(U.members(), UU, SU);
  CHECK(inc.flags.order_embedding);
  CHECK(inc.flags.convex);
  CHECK_FALSE(inc.flags.surjective);
  MapFlags ref = flags_by_definition(U.members(), UU->order(), SU->order());
  CHECK(ref.convex == inc.flags.convex);
  CHECK(ref.order_embedding == inc.flags.order_embedding);

  // constant map to 1 is not equivariant: f(a) = 1 but 1.a = a
  std::vector<Elt> constant(5, idx(*S, "1"));
  CHECK_THROWS_AS(analyze_map(constant, SS, SS), NotEquivariant);
  // constant map to b is (b is a left zero)
  std::vector<Elt> to_b(5, idx(*S, "b"));
  SPosetMap        cb = analyze_map(to_b, SS, SS);
  CHECK(cb.flags.monotone);
  CHECK_FALSE(cb.flags.injective);

  CHECK_THROWS_AS(analyze_map(U.members(), UU, SS), ActorMismatch);
}

TEST_CASE("analyze_map flags agree with definitional scans", "[core]") {
  Poset            P = Poset::chain(3);
  Poset            Q = closure_order(4, {{0, 1}, {1, 3}, {0, 2}, {2, 3}});
  std::vector<Elt> f(3);
  for (f[0] = 0; f[0] < 4; ++f[0]) {
    for (f[1] = 0; f[1] < 4; ++f[1]) {
      for (f[2] = 0; f[2] < 4; ++f[2]) {
        MapFlags a = poset_map_flags(f, P, Q);
        MapFlags b = flags_by_definition(f, P, Q);
        CHECK(a.monotone == b.monotone);
        CHECK(a.order_embedding == b.order_embedding);
        CHECK(a.injective == b.injective);
        CHECK(a.surjective == b.surjective);
        CHECK(a.convex == b.convex);
      }
    }
  }
}

TEST_CASE("opposite and standard pomonoids", "[core]") {
  ActorPtr S  = paper_S();
  Pomonoid op = opposite(*S);
  CHECK(op.mult(idx(*S, "f"), idx(*S, "b")) == S->mult(idx(*S, "b"), idx(*S, "f")));
  CHECK(opposite(op) == *S);
  CHECK(cyclic_group(3).mult(2, 2) == 1);
  CHECK(max_chain(3).mult(1, 3) == 3);
}
