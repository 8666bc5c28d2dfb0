// pomalg: command line front end.
//
// Exit codes: 0 completed, 1 property refuted (witness in the report),
// 2 input error, 3 bound exhausted (Unknown).

#include <chrono>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pomalg/amalgam.hpp"
#include "pomalg/commutative.hpp"
#include "pomalg/congruence.hpp"
#include "pomalg/constructions.hpp"
#include "pomalg/structure_file.hpp"
#include "pomalg/tensor.hpp"
#include "pomalg/unitary.hpp"
#include "report.hpp"

using namespace pomalg;
using namespace pomalg::cli;

namespace {

  struct Options {
    std::string                file;
    std::size_t                depth = 8;
    std::size_t                tower = 4;
    std::optional<std::size_t> size_cap;
    bool                       verify = false;
    std::string                json_path;
    std::optional<std::uint64_t> seed;
    std::string                dot_path;
    // command arguments
    std::string left, right, lhs, rhs, sposet, pairs, f, g, sub, in, x, y, amalgam, pomonoid;
    bool        theta  = false;
    std::size_t sample = 0;
  };

  struct Run {
    Options const& opt;
    StructureFile  F;
    json           result   = json::object();
    json           verdicts = json::array();
    std::string    dot      = {};
  };

  Elt element(std::vector<std::string> const& names, std::string const& n) {
    auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end()) {
      throw UnresolvedReference(0, n);
    }
    return static_cast<Elt>(it - names.begin());
  }

  std::vector<std::string> split(std::string const& s) {
    std::istringstream       in(s);
    std::vector<std::string> out;
    std::string              w;
    while (in >> w) {
      out.push_back(w);
    }
    return out;
  }

  json names_of(std::vector<std::string> const& names, std::vector<Elt> const& f) {
    json out = json::array();
    for (Elt x : f) {
      out.push_back(names[x]);
    }
    return out;
  }

  json sposet_json(SPoset const& X) {
    json out{{"size", X.size()}, {"elements", X.names()}, {"covers", covers_json(X.order())}};
    if (X.right_actor()) {
      json rows = json::array();
      for (Elt a = 0; a < X.size(); ++a) {
        std::vector<Elt> row;
        for (Elt s = 0; s < X.right_actor()->size(); ++s) {
          row.push_back(X.act_right(a, s));
        }
        rows.push_back(names_of(X.names(), row));
      }
      out["act_right"] = rows;
    }
    if (X.left_actor()) {
      json rows = json::array();
      for (Elt a = 0; a < X.size(); ++a) {
        std::vector<Elt> row;
        for (Elt s = 0; s < X.left_actor()->size(); ++s) {
          row.push_back(X.act_left(s, a));
        }
        rows.push_back(names_of(X.names(), row));
      }
      out["act_left"] = rows;
    }
    return out;
  }

  json pomonoid_json(Pomonoid const& S) {
    json rows = json::array();
    for (Elt s = 0; s < S.size(); ++s) {
      std::vector<Elt> row;
      for (Elt t = 0; t < S.size(); ++t) {
        row.push_back(S.mult(s, t));
      }
      rows.push_back(names_of(S.names(), row));
    }
    return json{{"size", S.size()},
                {"elements", S.names()},
                {"identity", S.name(S.identity())},
                {"table", rows},
                {"covers", covers_json(S.order())}};
  }

  //! U named either by a map into S or by a pomonoid whose elements are
  //! named as in S.
  SubPomonoid submonoid(Run& r) {
    ActorPtr S = r.F.pomonoid(r.opt.in);
    if (r.F.kind(r.opt.sub) == BlockKind::map) {
      CoreEmbedding e = r.F.core_embedding(r.opt.sub);
      if (e.ambient() != S) {
        throw PreconditionFailed("--sub map does not end at " + r.opt.in);
      }
      return SubPomonoid(S, e.embedding());
    }
    ActorPtr         U = r.F.pomonoid(r.opt.sub);
    std::vector<Elt> members;
    for (auto const& n : U->names()) {
      members.push_back(element(S->names(), n));
    }
    SubPomonoid out(S, members);
    std::vector<Elt> hom;
    for (auto const& n : U->names()) {
      hom.push_back(element(out.pomonoid()->names(), n));
    }
    if (!analyze_pomonoid_map(hom, *U, *out.pomonoid()).order_embedding
        || !analyze_pomonoid_map(hom, *U, *out.pomonoid()).homomorphism) {
      throw PreconditionFailed(r.opt.sub + " is not the subpomonoid of " + r.opt.in
                               + " on its elements");
    }
    return out;
  }

  std::size_t guard(Options const& o) {
    return o.size_cap ? *o.size_cap : default_size_guard();
  }

  ////////////////////////////////////////////////////////////////////////
  // Certificates
  ////////////////////////////////////////////////////////////////////////

  json tensor_certificate(TensorCertificate const& c, TensorPoset const& T) {
    auto const& A = T.left_factor()->names();
    auto const& B = T.right_factor()->names();
    auto const& S = T.middle()->names();
    json        rows = json::array();
    for (auto const& row : c.rows) {
      rows.push_back({{"a", A[row.a]}, {"s", S[row.s]}, {"t", S[row.t]}, {"b_next", B[row.b_next]}});
    }
    return json{{"kind", "tensor-chain"},
                {"a", A[c.a]},
                {"b", B[c.b]},
                {"a_to", A[c.a_to]},
                {"b_to", B[c.b_to]},
                {"rows", rows}};
  }

  json word_certificate(PoAmalgam const& A, Word const& w, Word const& v, StepTrace const& t) {
    json steps = json::array();
    for (auto const& s : t) {
      steps.push_back({{"kind", std::string(1, step_char(s.kind))},
                       {"variant", s.variant ? std::string(1, s.variant) : ""},
                       {"pos", s.pos},
                       {"u", s.u},
                       {"a", s.a},
                       {"b", s.b},
                       {"from", to_string(A, s.from)},
                       {"to", to_string(A, s.to)}});
    }
    return json{{"kind", "word-trace"},
                {"lhs", to_string(A, w)},
                {"rhs", to_string(A, v)},
                {"steps", steps}};
  }

  json triple_json(MarkedAction const&,
                   SubPomonoid const&   U,
                   std::string const&   condition,
                   bool                 left,
                   TripleWitness const& w) {
    auto const& S = U.ambient()->names();
    return json{{"kind", "triple"},
                {"condition", condition},
                {"side", left ? "left" : "right"},
                {"y", S[w.y]},
                {"u", S[U.embedding()[w.u]]},
                {"m", S[w.m]}};
  }

  json chain_json(SubPomonoid const& U, bool left, ChainWitness const& w) {
    auto const& S = U.ambient()->names();
    json        u_in = json::array(), u_out = json::array();
    for (Elt u : w.u_in) {
      u_in.push_back(S[U.embedding()[u]]);
    }
    for (Elt u : w.u_out) {
      u_out.push_back(S[U.embedding()[u]]);
    }
    return json{{"kind", "chain"},
                {"side", left ? "left" : "right"},
                {"start", S[w.start]},
                {"ys", names_of(S, w.ys)},
                {"u_in", u_in},
                {"u_out", u_out},
                {"end", S[w.end]},
                {"bad", w.bad}};
  }

  //! Replays every certificate of a finished report against the input
  //! structures. Only tables and input orders are consulted.
  json verify_report(Run& r) {
    json        failures = json::array();
    std::size_t replayed = 0;
    auto        check    = [&](json const& c) {
      std::string kind = c.at("kind");
      std::string fail;
      if (kind == "tensor-chain") {
        SPosetPtr   A = r.F.right_sposet(r.opt.left);
        SPosetPtr   B = r.F.left_sposet(r.opt.right);
        auto const& S = A->right_actor()->names();
        TensorCertificate t{element(A->names(), c.at("a")),
                            element(B->names(), c.at("b")),
                            element(A->names(), c.at("a_to")),
                            element(B->names(), c.at("b_to")),
                            {}};
        for (auto const& row : c.at("rows")) {
          t.rows.push_back({element(A->names(), row.at("a")),
                            element(S, row.at("s")),
                            element(S, row.at("t")),
                            element(B->names(), row.at("b_next"))});
        }
        fail = replay(t, *A, *B);
      } else if (kind == "word-trace") {
        PoAmalgam A = r.F.amalgam(r.opt.amalgam);
        StepTrace t;
        for (auto const& s : c.at("steps")) {
          StepRecord rec;
          std::string k = s.at("kind");
          rec.kind      = k == "S" ? StepKind::S : k == "M" ? StepKind::M : k == "E" ? StepKind::E : StepKind::O;
          std::string var = s.at("variant");
          rec.variant     = var.empty() ? 0 : var[0];
          rec.pos         = s.at("pos");
          rec.u           = s.at("u");
          rec.a           = s.at("a");
          rec.b           = s.at("b");
          rec.from        = parse_word(A, s.at("from"));
          rec.to          = parse_word(A, s.at("to"));
          t.push_back(std::move(rec));
        }
        fail = replay(A, t, parse_word(A, c.at("lhs")), parse_word(A, c.at("rhs")));
      } else if (kind == "triple" || kind == "chain") {
        SubPomonoid     U    = submonoid(r);
        Pomonoid const& S    = *U.ambient();
        bool            left = c.at("side") == "left";
        MarkedAction    G    = marked_submonoid(U, left);
        auto local = [&](std::string const& n) {
          Elt s = element(S.names(), n);
          auto const& e = U.embedding();
          auto it = std::find(e.begin(), e.end(), s);
          if (it == e.end()) {
            throw PreconditionFailed("certificate scalar outside U");
          }
          return static_cast<Elt>(it - e.begin());
        };
        if (kind == "triple") {
          Elt         y = element(S.names(), c.at("y")), m = element(S.names(), c.at("m"));
          Elt         yu   = G.act(y, local(c.at("u")));
          std::string cond = c.at("condition");
          bool        ok   = !G.marked[y] && G.marked[m]
                    && (cond == "ru"      ? yu == m
                        : cond == "usrpu" ? G.leq(m, yu)
                                          : G.leq(yu, m));
          if (!ok) {
            fail = "triple does not realise " + cond;
          }
        } else {
          ChainWitness w;
          w.start = element(S.names(), c.at("start"));
          w.end   = element(S.names(), c.at("end"));
          w.bad   = c.at("bad");
          for (auto const& y : c.at("ys")) {
            w.ys.push_back(element(S.names(), y));
          }
          for (auto const& u : c.at("u_in")) {
            w.u_in.push_back(local(u));
          }
          for (auto const& u : c.at("u_out")) {
            w.u_out.push_back(local(u));
          }
          fail = replay(w, G);
        }
      } else if (kind == "gap") {
        MapDecl const& f = r.F.map(r.opt.f);
        MapDecl const& g = r.F.map(r.opt.g);
        SPosetPtr      B = r.F.sposet(f.target), C = r.F.sposet(g.target);
        SPosetPtr      A = r.F.sposet(f.source);
        Elt            b = element(B->names(), c.at("b")), cc = element(C->names(), c.at("c"));
        Elt            a = element(A->names(), c.at("a")), a2 = element(A->names(), c.at("a_prime"));
        bool           ok = c.at("direction") == "gamma<=delta"
                                ? B->leq(b, f.assignment[a]) && C->leq(g.assignment[a2], cc)
                                : C->leq(cc, g.assignment[a]) && B->leq(f.assignment[a2], b);
        if (!ok) {
          fail = "gap witness does not bracket the pair";
        }
      } else {
        fail = "unknown certificate kind " + kind;
      }
      ++replayed;
      if (!fail.empty()) {
        failures.push_back(fail);
      }
    };
    for (auto const& v : r.verdicts) {
      if (v.contains("certificate")) {
        check(v.at("certificate"));
      }
      if (v.contains("witnesses")) {
        for (auto const& w : v.at("witnesses")) {
          check(w);
        }
      }
    }
    if (r.result.contains("certificates")) {
      for (auto const& c : r.result.at("certificates")) {
        check(c);
      }
    }
    return json{{"replayed", replayed}, {"failures", failures}};
  }

  ////////////////////////////////////////////////////////////////////////
  // Commands
  ////////////////////////////////////////////////////////////////////////

  void cmd_validate(Run& r) {
    json blocks = json::array();
    for (auto const& [k, name] : r.F.blocks()) {
      json b{{"name", name}};
      switch (k) {
        case BlockKind::pomonoid:
          b["kind"] = "pomonoid";
          b["size"] = r.F.pomonoid(name)->size();
          break;
        case BlockKind::sposet:
          b["kind"] = "sposet";
          b["size"] = r.F.sposet(name)->size();
          b["side"] = side_name(r.F.sposet(name)->side());
          break;
        case BlockKind::map: {
          MapDecl const& m = r.F.map(name);
          b["kind"]        = "map";
          if (r.F.kind(m.source) == BlockKind::pomonoid) {
            auto rep = analyze_pomonoid_map(m.assignment, *r.F.pomonoid(m.source),
                                            *r.F.pomonoid(m.target));
            b["homomorphism"]    = rep.homomorphism;
            b["monotone"]        = rep.monotone;
            b["order_embedding"] = rep.order_embedding;
          } else {
            SPosetPtr X = r.F.sposet(m.source), Y = r.F.sposet(m.target);
            b["same_actors"] = same_actor(X->left_actor(), Y->left_actor())
                               && same_actor(X->right_actor(), Y->right_actor());
            b["monotone"]        = poset_map_flags(m.assignment, X->order(), Y->order()).monotone;
            b["order_embedding"] = poset_map_flags(m.assignment, X->order(), Y->order()).order_embedding;
          }
          break;
        }
        case BlockKind::amalgam:
          b["kind"] = "amalgam";
          r.F.amalgam(name);
          break;
      }
      blocks.push_back(b);
    }
    r.result["blocks"] = blocks;
    r.verdicts.push_back(verdict("valid", true));
  }

  void cmd_tensor(Run& r) {
    SPosetPtr   A = r.F.right_sposet(r.opt.left);
    SPosetPtr   B = r.F.left_sposet(r.opt.right);
    TensorPoset T = tensor(A, B, r.opt.left + "⊗" + r.opt.right);
    SPoset const& R = *T.result();
    json        classes = json::array();
    for (Elt c = 0; c < T.size(); ++c) {
      json members = json::array();
      for (Elt p : T.pair_preorder().classes[c]) {
        members.push_back(A->name(p / B->size()) + "⊗" + B->name(p % B->size()));
      }
      classes.push_back(members);
    }
    r.result["size"]    = T.size();
    r.result["classes"] = classes;
    r.result["covers"]  = covers_json(R.order());
    r.dot               = dot(R.order(), "tensor");
    if (r.opt.lhs.empty() && r.opt.rhs.empty()) {
      r.verdicts.push_back(verdict("computed", true));
      return;
    }
    auto l = split(r.opt.lhs), h = split(r.opt.rhs);
    if (l.size() != 2 || h.size() != 2) {
      throw Error("--lhs and --rhs take two element names 'a b'");
    }
    TensorVerdict v = tensor_leq(T, element(A->names(), l[0]), element(B->names(), l[1]),
                                 element(A->names(), h[0]), element(B->names(), h[1]));
    json out = verdict("leq", v.holds);
    out["query"] = l[0] + "⊗" + l[1] + " <= " + h[0] + "⊗" + h[1];
    if (v.certificate) {
      out["certificate"] = tensor_certificate(*v.certificate, T);
    }
    r.verdicts.push_back(out);
  }

  Pairs parse_pairs(std::vector<std::string> const& names, std::string const& text) {
    Pairs       out;
    std::string s = text;
    for (char& c : s) {
      if (c == ',' || c == ';') {
        c = '\n';
      }
    }
    std::istringstream in(s);
    std::string        line;
    while (std::getline(in, line)) {
      auto t = detail::tokenize(line);
      if (t.empty()) {
        continue;
      }
      if (t.size() != 3 || t[1].text != "<=") {
        throw Error("pairs are written 'x <= y', separated by commas");
      }
      out.emplace_back(element(names, t[0].text), element(names, t[2].text));
    }
    return out;
  }

  void cmd_quotient(Run& r) {
    SPosetPtr X = r.F.sposet(r.opt.sposet);
    Pairs     R = parse_pairs(X->names(), r.opt.pairs);
    Quotient  Q = r.opt.theta ? theta_congruence(X, R) : nu_congruence(X, R);
    json      classes = json::array();
    for (auto const& c : Q.classes) {
      classes.push_back(names_of(X->names(), c));
    }
    r.result["congruence"] = r.opt.theta ? "theta" : "nu";
    r.result["classes"]    = classes;
    r.result["quotient"]   = sposet_json(*Q.quotient);
    r.dot                  = dot(Q.quotient->order(), "quotient");
    r.verdicts.push_back(verdict("sposet-congruence",
                                 is_sposet_congruence(*X, Q.projection).holds));
  }

  void cmd_pushout(Run& r) {
    SPosetMap          f = r.F.sposet_map(r.opt.f);
    SPosetMap          g = r.F.sposet_map(r.opt.g);
    PushoutResult      P = pushout(f, g);
    PushoutLemmaReport L = check_pushout_lemmas(P);
    SPoset const&      B = *f.target;
    SPoset const&      C = *g.target;
    r.result["apex"]  = sposet_json(*P.apex);
    r.result["gamma"] = names_of(P.apex->names(), P.gamma.assignment);
    r.result["delta"] = names_of(P.apex->names(), P.delta.assignment);
    json certs        = json::array();
    auto const& A     = f.source->names();
    for (Elt b = 0; b < B.size(); ++b) {
      for (Elt c = 0; c < C.size(); ++c) {
        if (P.apex->leq(P.gamma(b), P.delta(c))) {
          GapWitness w = pushout_gap_witnesses(P, b, c);
          certs.push_back({{"kind", "gap"}, {"direction", "gamma<=delta"},
                           {"b", B.name(b)}, {"c", C.name(c)},
                           {"a", A[w.a]}, {"a_prime", A[w.a_prime]}});
        }
        if (P.apex->leq(P.delta(c), P.gamma(b))) {
          GapWitness w = pushout_gap_witnesses_dual(P, c, b);
          certs.push_back({{"kind", "gap"}, {"direction", "delta<=gamma"},
                           {"b", B.name(b)}, {"c", C.name(c)},
                           {"a", A[w.a]}, {"a_prime", A[w.a_prime]}});
        }
      }
    }
    r.result["certificates"] = certs;
    r.dot                    = dot(P.apex->order(), "pushout");
    json v                   = verdict("pushout-lemmas", L.violations.empty());
    v["violations"]          = L.violations;
    r.verdicts.push_back(v);
    json flags{{"gamma_order_embedding", P.gamma.flags.order_embedding},
               {"delta_order_embedding", P.delta.flags.order_embedding}};
    r.result["maps"] = flags;
  }

  void cmd_free_ext(Run& r) {
    CoreEmbedding  U = r.F.core_embedding(r.opt.sub);
    SPosetPtr      X = r.F.right_sposet(r.opt.x);
    SPosetPtr      Y = r.F.right_sposet(r.opt.y);
    MapDecl const& f = r.F.map(r.opt.f);
    FreeExtension  E = free_extension(U, X, Y, f.assignment, "F");
    auto           e = free_extension_embedding(E);
    std::vector<std::string> bad = check_free_extension_maps(E);
    for (auto const& s : check_free_extension_order(E)) {
      bad.push_back(s);
    }
    r.result["F"] = sposet_json(*E.F);
    r.result["g"] = names_of(E.F->names(), E.g);
    r.result["h"] = names_of(E.F->names(), E.h);
    r.dot         = dot(E.F->order(), "free-extension");
    json v        = verdict("free-extension-laws", bad.empty());
    v["violations"] = bad;
    r.verdicts.push_back(v);
    r.verdicts.push_back(verdict("h-order-embedding", e.h_embedding, "exact", false));
    r.verdicts.push_back(verdict("g-order-embedding", e.g_embedding, "exact", false));
    r.verdicts.push_back(verdict("g-strongly-pounitary", e.g_strong, "exact", false));
  }

  void cmd_unitary(Run& r) {
    SubPomonoid    U = submonoid(r);
    UnitaryVerdict v = check_unitary_submonoid(U);
    for (bool left : {false, true}) {
      SideVerdict const& s    = left ? *v.left : *v.right;
      MarkedAction       G    = marked_submonoid(U, left);
      std::string        side = left ? "left" : "right";
      auto add = [&](std::string const& cond, std::string const& name, bool holds,
                     std::vector<TripleWitness> const& ws) {
        json out = verdict(name, holds);
        if (!ws.empty()) {
          out["witnesses"] = json::array();
          for (std::size_t i = 0; i < ws.size() && i < 8; ++i) {
            out["witnesses"].push_back(triple_json(G, U, cond, left, ws[i]));
          }
          out["witness_count"] = ws.size();
        }
        r.verdicts.push_back(out);
      };
      add("ru", side + "-unitary", s.ru, s.ru_violations);
      json rpu = verdict(side + "-pounitary", s.rpu);
      if (s.chain) {
        rpu["witnesses"] = json::array({chain_json(U, left, *s.chain)});
      }
      r.verdicts.push_back(rpu);
      add("usrpu", "upper-strongly-" + side + "-pounitary", s.usrpu, s.usrpu_violations);
      add("lsrpu", "lower-strongly-" + side + "-pounitary", s.lsrpu, s.lsrpu_violations);
      r.verdicts.push_back(verdict("strongly-" + side + "-pounitary", s.srpu, "exact", false));
    }
    r.result["members"] = names_of(U.ambient()->names(), U.members());
  }

  void cmd_poext(Run& r) {
    SubPomonoid         U   = submonoid(r);
    std::size_t         cap = r.opt.size_cap.value_or(2);
    BoundedPoextVerdict v   = check_poextension_bounded(U, cap);
    json                out = verdict("right-poextension", v.holds, "bounded");
    out["cap"]              = v.cap;
    out["tested"]           = v.tested;
    if (v.failing) {
      out["failing_sposet"] = sposet_json(*v.failing);
      if (v.failure && v.failure->witness) {
        auto [x, x2]   = *v.failure->witness;
        out["witness"] = {{"x", v.failing->name(x)}, {"x_prime", v.failing->name(x2)}};
      }
    }
    r.verdicts.push_back(out);
    r.verdicts.push_back(
        verdict("left-pounitary", check_unitary_submonoid(U).left->rpu, "exact", false));
  }

  json tower_sizes(Tower const& T) {
    json out = json::array();
    for (std::size_t n = 1; n <= T.height(); ++n) {
      out.push_back(T.level(n).Y->size());
    }
    return out;
  }

  void cmd_amalgam(Run& r) {
    PoAmalgam           A = r.F.amalgam(r.opt.amalgam);
    Tower               T = build_tower(A, r.opt.tower, guard(r.opt));
    EmbeddabilityReport E = embeddability_report(T);
    r.result["levels"]      = tower_sizes(T);
    r.result["k_embedding"] = E.k_embedding;
    r.result["h_embedding"] = E.h_embedding;
    r.result["verdict"]     = verdict_name(E.verdict);
    r.dot                   = dot(T.level(T.height()).Y->order(), "Y");
    json v = verdict("po-embeddable-to-depth", !E.witness, "bounded");
    v["depth"] = E.depth;
    if (E.witness) {
      Pomonoid const& S = *A.factor(E.witness->factor);
      v["witness"]      = {{"n", E.witness->n},
                           {"factor", E.witness->factor},
                           {"s", S.name(E.witness->s)},
                           {"t", S.name(E.witness->t)},
                           {"s_leq_t", S.leq(E.witness->s, E.witness->t)}};
    }
    r.verdicts.push_back(v);
    json s = verdict("strong-condition", E.strong_condition, "exact", false);
    if (E.strong_witness) {
      s["witness"] = {{"s1", A.factor(1)->name(E.strong_witness->first)},
                      {"s2", A.factor(2)->name(E.strong_witness->second)}};
    }
    r.verdicts.push_back(s);
  }

  void cmd_word_le(Run& r) {
    PoAmalgam   A = r.F.amalgam(r.opt.amalgam);
    Word        w = parse_word(A, r.opt.lhs), v = parse_word(A, r.opt.rhs);
    WordVerdict res = WordSearch(A).leq(w, v, {r.opt.depth});
    json out = verdict("word-leq", res.yes ? Status::holds : Status::unknown, res.scope);
    out["depth"]  = r.opt.depth;
    out["states"] = res.states;
    if (res.yes) {
      out["certificate"] = word_certificate(A, w, v, res.trace);
    }
    r.verdicts.push_back(out);
  }

  void cmd_tower(Run& r) {
    PoAmalgam   A = r.F.amalgam(r.opt.amalgam);
    Tower       T = build_tower(A, r.opt.tower, guard(r.opt));
    std::vector<std::string> ident, mono;
    for (std::size_t n = 2; n <= T.height(); ++n) {
      for (auto& s : bracket_identity_failures(T, n)) {
        ident.push_back(s);
      }
      for (auto& s : bracket_monotone_failures(T, n)) {
        mono.push_back(s);
      }
    }
    r.result["levels"] = tower_sizes(T);
    r.dot              = dot(T.level(T.height()).Y->order(), "Y");
    json a = verdict("bracket-identity", ident.empty(), "bounded");
    a["failures"] = ident;
    json b = verdict("bracket-monotone", mono.empty(), "bounded");
    b["failures"] = mono;
    r.verdicts.push_back(a);
    r.verdicts.push_back(b);
    if (r.opt.sample > 0 && T.height() >= 2) {
      std::size_t       n = std::min<std::size_t>(T.height(), 3);
      std::mt19937_64   rng(r.opt.seed.value_or(0));
      TowerWordsReport  W = tower_vs_words(T, n, r.opt.depth, &rng, r.opt.sample);
      json c = verdict("words-agree",
                       W.replay_failures ? Status::refuted
                       : W.unknown       ? Status::unknown
                                         : Status::holds,
                       W.unknown ? "unknown" : "bounded");
      c["level"]   = n;
      c["pairs"]   = W.pairs;
      c["yes"]     = W.yes;
      c["unknown"] = W.unknown;
      r.verdicts.push_back(c);
    }
  }

  void cmd_gcomplete(Run& r) {
    ActorPtr        S = r.F.pomonoid(r.opt.pomonoid);
    GroupCompletion G = group_completion(S, "G(" + r.opt.pomonoid + ")");
    r.result["group"] = pomonoid_json(*G.group);
    r.result["chi"]   = names_of(G.group->names(), G.chi);
    r.dot             = dot(G.group->order(), "G");
    json v            = verdict("completion-laws", G.violations.empty());
    v["violations"]   = G.violations;
    r.verdicts.push_back(v);
    auto chi = analyze_pomonoid_map(G.chi, *S, *G.group);
    r.verdicts.push_back(verdict("chi-order-embedding", chi.order_embedding && chi.homomorphism));
    r.verdicts.push_back(verdict("isomorphic-to-completion",
                                 !pomonoid_isomorphisms(*S, *G.group).empty(), "exact", false));
  }

  void cmd_commutative(Run& r) {
    PoAmalgam                A = r.F.amalgam(r.opt.amalgam);
    CommutativeAmalgamReport R = commutative_amalgam(A, r.opt.size_cap.value_or(2));
    if (R.product) {
      r.result["product"] = pomonoid_json(*R.product);
      r.dot               = dot(R.product->order(), "product");
    }
    r.result["tensor_size"]          = R.tensor.size();
    r.result["lambda1_embedding"]    = R.lambda1_embedding;
    r.result["lambda2_embedding"]    = R.lambda2_embedding;
    r.result["convex"]               = {R.convex[0], R.convex[1]};
    r.result["poextension"]          = {R.poext[0], R.poext[1]};
    r.result["poextension_cap"]      = R.poext_cap;
    r.result["hypotheses"]           = R.hypotheses;
    r.result["core_is_group"]        = R.core_is_group;
    if (R.tensor_pocancellative) {
      r.result["tensor_pocancellative"] = *R.tensor_pocancellative;
    }
    json v = verdict("criterion-consistent", !R.contradiction && R.violations.empty(), "bounded");
    v["violations"] = R.violations;
    r.verdicts.push_back(v);
    json s = verdict("strongly-poembeddable", R.strongly_poembeddable, "exact", false);
    if (R.strong_witness) {
      s["witness"] = {{"s1", A.factor(1)->name(R.strong_witness->first)},
                      {"s2", A.factor(2)->name(R.strong_witness->second)}};
    }
    r.verdicts.push_back(s);
  }

  void cmd_experiment(Run& r) {
    OpenProblemExperiment x = open_problem_experiment(r.opt.size_cap.value_or(4));
    r.result["max_size"]   = x.max_size;
    r.result["pomonoids"]  = x.pomonoids;
    r.result["amalgams"]   = x.amalgams;
    r.result["candidates"] = x.candidates;
    r.result["message"]    = x.message;
    r.verdicts.push_back(verdict("experiment-completed", true, "bounded"));
  }

  json error_json(std::exception const& e) {
    json out{{"message", e.what()}};
    if (auto const* s = dynamic_cast<SyntaxError const*>(&e)) {
      out["type"]   = "SyntaxError";
      out["line"]   = s->line;
      out["column"] = s->column;
    } else if (auto const* u = dynamic_cast<UnresolvedReference const*>(&e)) {
      out["type"] = "UnresolvedReference";
      out["line"] = u->line;
    } else if (auto const* v = dynamic_cast<ValidationError const*>(&e)) {
      out["type"] = "ValidationError";
      json vs     = json::array();
      for (auto const& x : v->violations()) {
        vs.push_back({{"kind", x.kind}, {"witness", x.witness}, {"detail", x.detail}});
      }
      out["violations"] = vs;
    } else if (auto const* g = dynamic_cast<SizeGuardExceeded const*>(&e)) {
      out["type"]  = "SizeGuardExceeded";
      out["level"] = g->level;
      out["cells"] = g->size;
    } else {
      out["type"] = "Error";
    }
    return out;
  }

}  // namespace

int main(int argc, char** argv) {
  auto    start = std::chrono::steady_clock::now();
  Options opt;
  CLI::App app{"pomalg: finite pomonoids, S-posets, tensor products and amalgams"};
  app.require_subcommand(1);

  using Fn = void (*)(Run&);
  std::vector<std::pair<CLI::App*, Fn>> commands;
  auto command = [&](std::string const& name, std::string const& help, Fn fn, bool file = true) {
    CLI::App* c = app.add_subcommand(name, help);
    if (file) {
      c->add_option("file", opt.file, "structure file")->required()->check(CLI::ExistingFile);
    }
    c->add_option("--depth", opt.depth, "word search depth")->capture_default_str();
    c->add_option("--tower", opt.tower, "tower height")->capture_default_str();
    c->add_option("--size-cap", opt.size_cap, "size cap (poextension, experiment, tower cells)");
    c->add_flag("--verify", opt.verify, "replay every certificate of the report");
    c->add_option("--json", opt.json_path, "write the report here instead of stdout");
    c->add_option("--seed", opt.seed, "seed for sampling");
    c->add_option("--dot", opt.dot_path, "write the Hasse diagram of the result as DOT");
    commands.emplace_back(c, fn);
    return c;
  };

  command("validate", "parse and validate a structure file", cmd_validate);
  auto* t = command("tensor", "tensor product of a right and a left S-poset", cmd_tensor);
  t->add_option("--left", opt.left, "right S-poset (or pomonoid)")->required();
  t->add_option("--right", opt.right, "left S-poset (or pomonoid)")->required();
  t->add_option("--lhs", opt.lhs, "query 'a b' for a (x) b");
  t->add_option("--rhs", opt.rhs, "query 'a b' for a (x) b");
  auto* q = command("quotient", "quotient by the congruence generated by pairs", cmd_quotient);
  q->add_option("--sposet", opt.sposet)->required();
  q->add_option("--pairs", opt.pairs, "'x <= y, ...'")->required();
  q->add_flag("--theta", opt.theta, "symmetric generation");
  auto* p = command("pushout", "pushout of two S-poset maps with a common source", cmd_pushout);
  p->add_option("--f", opt.f)->required();
  p->add_option("--g", opt.g)->required();
  auto* fe = command("free-ext", "free extension of a U-map", cmd_free_ext);
  fe->add_option("--sub", opt.sub, "map U -> S")->required();
  fe->add_option("--x", opt.x, "right S-poset (or S)")->required();
  fe->add_option("--y", opt.y, "right U-poset (or U)")->required();
  fe->add_option("--f", opt.f, "map X -> Y")->required();
  for (auto [name, help, fn] : {std::tuple{"unitary", "unitary and pounitary verdicts", cmd_unitary},
                                std::tuple{"poext", "bounded poextension check", cmd_poext}}) {
    auto* c = command(name, help, fn);
    c->add_option("--sub", opt.sub, "submonoid: pomonoid or map")->required();
    c->add_option("--in", opt.in, "ambient pomonoid")->required();
  }
  for (auto [name, help, fn] :
       {std::tuple{"amalgam", "embeddability through the tower", cmd_amalgam},
        std::tuple{"word-le", "bounded search in the word order", cmd_word_le},
        std::tuple{"tower", "build the tower and check bracket laws", cmd_tower},
        std::tuple{"commutative-amalgam", "commutative amalgam through the tensor", cmd_commutative}}) {
    auto* c = command(name, help, fn);
    c->add_option("--amalgam", opt.amalgam)->required();
    if (std::string(name) == "word-le") {
      c->add_option("--lhs", opt.lhs, "word, e.g. '1:e 2:b'")->required();
      c->add_option("--rhs", opt.rhs)->required();
    }
    if (std::string(name) == "tower") {
      c->add_option("--sample", opt.sample, "compare this many pairs with the word order");
    }
  }
  auto* gc = command("gcomplete", "group completion", cmd_gcomplete);
  gc->add_option("--pomonoid", opt.pomonoid)->required();
  command("experiment-open-problem", "search commutative amalgams", cmd_experiment, false);

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return 2;
  }

  json report{{"schema", 1}};
  json echo = json::array();
  for (int i = 0; i < argc; ++i) {
    echo.push_back(argv[i]);
  }
  std::string name;
  Fn          fn = nullptr;
  for (auto [c, f] : commands) {
    if (c->parsed()) {
      name = c->get_name();
      fn   = f;
    }
  }
  report["command"] = name;
  report["argv"]    = echo;
  if (opt.seed) {
    report["seed"] = *opt.seed;
  }
  int code = 0;
  try {
    std::string text;
    if (!opt.file.empty()) {
      text                    = read_file(opt.file);
      report["inputs"]        = json::array({{{"path", opt.file}, {"fnv1a64", fnv1a64(text)}}});
      report["inputs_digest"] = fnv1a64(text);
    }
    Run r{opt, opt.file.empty() ? StructureFile{} : parse_structures(text)};
    fn(r);
    report["result"]   = r.result;
    report["verdicts"] = r.verdicts;
    code               = exit_code_of(r.verdicts);
    if (opt.verify) {
      json v           = verify_report(r);
      report["verify"] = v;
      if (!v["failures"].empty()) {
        code = 1;
      }
    }
    if (!opt.dot_path.empty() && !r.dot.empty()) {
      write_atomically(opt.dot_path, r.dot);
    }
  } catch (std::exception const& e) {
    report["error"] = error_json(e);
    code            = 2;
    std::cerr << "pomalg: " << e.what() << "\n";
  }
  report["exit_code"] = code;
  report["wall_time_s"]
      = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::string out = report.dump(2) + "\n";
  if (opt.json_path.empty()) {
    std::cout << out;
  } else {
    try {
      write_atomically(opt.json_path, out);
    } catch (std::exception const& e) {
      std::cerr << "pomalg: " << e.what() << "\n";
      return 2;
    }
    for (auto const& v : report.value("verdicts", json::array())) {
      std::cout << v.at("property").get<std::string>() << ": "
                << v.at("status").get<std::string>() << " (" << v.at("scope").get<std::string>()
                << ")\n";
    }
  }
  return code;
}
