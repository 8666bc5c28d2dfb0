// pomalg - finite partially ordered monoids and their acts
//
// Coproducts, pushouts, limits of finite direct chains and free
// S-extensions, together with checkers for the order-theoretic facts that
// hold of them. Every checker returns a list of violation messages; an empty
// list means the property held on the whole instance.

#ifndef POMALG_CONSTRUCTIONS_HPP_
#define POMALG_CONSTRUCTIONS_HPP_

#include <algorithm>  // for max
#include <cstddef>   // for size_t
#include <optional>  // for optional
#include <string>    // for string, to_string
#include <utility>   // for pair
#include <vector>    // for vector

#include "congruence.hpp"
#include "core.hpp"
#include "errors.hpp"
#include "morphisms.hpp"
#include "tensor.hpp"

namespace pomalg {

  ////////////////////////////////////////////////////////////////////////
  // Coproducts
  ////////////////////////////////////////////////////////////////////////

  struct Coproduct {
    SPosetPtr object;
    SPosetMap first;   // B -> B + C
    SPosetMap second;  // C -> B + C
  };

  //! Disjoint union with no order between the summands. Elements of B come
  //! first and are named "1:x", those of C "2:x".
  inline Coproduct coproduct(SPosetPtr const& B, SPosetPtr const& C) {
    detail::require_same_actions(*B, *C);
    std::size_t              nb = B->size(), nc = C->size(), n = nb + nc;
    BitMatrix                leq(n);
    std::vector<std::string> names;
    for (Elt x = 0; x < nb; ++x) {
      names.push_back("1:" + B->name(x));
      for (Elt y = 0; y < nb; ++y) {
        leq.set(x, y, B->leq(x, y));
      }
    }
    for (Elt x = 0; x < nc; ++x) {
      names.push_back("2:" + C->name(x));
      for (Elt y = 0; y < nc; ++y) {
        leq.set(nb + x, nb + y, C->leq(x, y));
      }
    }
    SPosetCandidate c{Poset(std::move(leq), std::move(names)),
                      B->left_actor(),
                      {},
                      B->right_actor(),
                      {}};
    if (ActorPtr const& L = B->left_actor()) {
      c.left_act.resize(L->size() * n);
      for (Elt s = 0; s < L->size(); ++s) {
        for (Elt x = 0; x < nb; ++x) {
          c.left_act[s * n + x] = B->act_left(s, x);
        }
        for (Elt x = 0; x < nc; ++x) {
          c.left_act[s * n + nb + x] = static_cast<Elt>(nb + C->act_left(s, x));
        }
      }
    }
    if (ActorPtr const& R = B->right_actor()) {
      std::size_t k = R->size();
      c.right_act.resize(n * k);
      for (Elt s = 0; s < k; ++s) {
        for (Elt x = 0; x < nb; ++x) {
          c.right_act[x * k + s] = B->act_right(x, s);
        }
        for (Elt x = 0; x < nc; ++x) {
          c.right_act[(nb + x) * k + s]
              = static_cast<Elt>(nb + C->act_right(x, s));
        }
      }
    }
    std::string label;
    if (!B->label().empty() && !C->label().empty()) {
      label = B->label() + "+" + C->label();
    }
    SPosetPtr        U = make_sposet(std::move(c), std::move(label));
    std::vector<Elt> i1(nb), i2(nc);
    for (Elt x = 0; x < nb; ++x) {
      i1[x] = x;
    }
    for (Elt x = 0; x < nc; ++x) {
      i2[x] = static_cast<Elt>(nb + x);
    }
    return Coproduct{U, analyze_map(std::move(i1), B, U), analyze_map(std::move(i2), C, U)};
  }

  ////////////////////////////////////////////////////////////////////////
  // Pushouts
  ////////////////////////////////////////////////////////////////////////

  struct PushoutResult {
    SPosetMap f;  // A -> B
    SPosetMap g;  // A -> C
    Coproduct sum;
    Pairs     generators;  // (f(a), g(a)) inside the coproduct
    Quotient  rho;
    SPosetPtr apex;
    SPosetMap gamma;  // B -> D
    SPosetMap delta;  // C -> D
  };

  namespace detail {
    inline bool same_sposet(SPosetPtr const& X, SPosetPtr const& Y) {
      if (X == Y) {
        return true;
      }
      if (X->size() != Y->size() || !(X->order() == Y->order())) {
        return false;
      }
      auto const& a = X->data();
      auto const& b = Y->data();
      return same_actor(a.left, b.left) && same_actor(a.right, b.right)
             && a.left_act == b.left_act && a.right_act == b.right_act;
    }
  }  // namespace detail

  //! (B + C)/theta(R) with R = {(f(a), g(a))}.
  inline PushoutResult pushout(SPosetMap const& f, SPosetMap const& g) {
    if (!detail::same_sposet(f.source, g.source)) {
      throw ActorMismatch("pushout: f and g do not share a source");
    }
    detail::require_same_actions(*f.target, *g.target);
    PushoutResult P{f, g, coproduct(f.target, g.target), {}, {}, nullptr, {}, {}};
    std::size_t   nb = f.target->size();
    for (Elt a = 0; a < f.source->size(); ++a) {
      P.generators.emplace_back(f(a), static_cast<Elt>(nb + g(a)));
    }
    P.rho  = theta_congruence(P.sum.object, P.generators);
    P.apex = P.rho.quotient;
    std::vector<Elt> gm(nb), dl(g.target->size());
    for (Elt b = 0; b < nb; ++b) {
      gm[b] = P.rho.projection[b];
    }
    for (Elt c = 0; c < dl.size(); ++c) {
      dl[c] = P.rho.projection[nb + c];
    }
    P.gamma = analyze_map(std::move(gm), f.target, P.apex);
    P.delta = analyze_map(std::move(dl), g.target, P.apex);
    return P;
  }

  struct GapWitness {
    Elt a;       // b <= f(a)
    Elt a_prime; // g(a') <= c
  };

  //! For gamma(b) <= delta(c): some a, a' with b <= f(a) and g(a') <= c.
  inline GapWitness pushout_gap_witnesses(PushoutResult const& P, Elt b, Elt c) {
    if (!P.apex->leq(P.gamma(b), P.delta(c))) {
      throw PreconditionFailed("pushout_gap_witnesses: gamma(b) <= delta(c) fails");
    }
    SPoset const&      A = *P.f.source;
    std::optional<Elt> up, down;
    for (Elt a = 0; a < A.size(); ++a) {
      if (!up && P.f.target->leq(b, P.f(a))) {
        up = a;
      }
      if (!down && P.g.target->leq(P.g(a), c)) {
        down = a;
      }
    }
    if (!up || !down) {
      throw WitnessNotFound("no gap witness for b = " + P.f.target->name(b)
                            + ", c = " + P.g.target->name(c));
    }
    return GapWitness{*up, *down};
  }

  //! The mirror image: delta(c) <= gamma(b) gives c <= g(a), f(a') <= b.
  inline GapWitness pushout_gap_witnesses_dual(PushoutResult const& P, Elt c, Elt b) {
    if (!P.apex->leq(P.delta(c), P.gamma(b))) {
      throw PreconditionFailed(
          "pushout_gap_witnesses_dual: delta(c) <= gamma(b) fails");
    }
    SPoset const&      A = *P.f.source;
    std::optional<Elt> up, down;
    for (Elt a = 0; a < A.size(); ++a) {
      if (!up && P.g.target->leq(c, P.g(a))) {
        up = a;
      }
      if (!down && P.f.target->leq(P.f(a), b)) {
        down = a;
      }
    }
    if (!up || !down) {
      throw WitnessNotFound("no gap witness for c = " + P.g.target->name(c)
                            + ", b = " + P.f.target->name(b));
    }
    return GapWitness{*up, *down};
  }

  struct EqualityWitness {
    Elt a1, a1_prime, a2, a2_prime;  // f(a1') <= b <= f(a1), g(a2') <= c <= g(a2)
  };

  inline EqualityWitness pushout_equality_witnesses(PushoutResult const& P,
                                                    Elt b, Elt c) {
    if (P.gamma(b) != P.delta(c)) {
      throw PreconditionFailed("pushout_equality_witnesses: gamma(b) != delta(c)");
    }
    GapWitness lo = pushout_gap_witnesses(P, b, c);
    GapWitness hi = pushout_gap_witnesses_dual(P, c, b);
    return EqualityWitness{lo.a, hi.a_prime, hi.a, lo.a_prime};
  }

  //! Checks the cocone identity, the gap witnesses in both directions, and
  //! the equality, embedding and convexity transfer properties of the
  //! square. `gap_instances` counts the comparisons gamma(b) <= delta(c) or
  //! delta(c) <= gamma(b) that were examined.
  struct PushoutLemmaReport {
    std::vector<std::string> violations;
    std::size_t              gap_instances = 0;
  };

  inline PushoutLemmaReport check_pushout_lemmas(PushoutResult const& P) {
    PushoutLemmaReport r;
    SPoset const&      A = *P.f.source;
    SPoset const&      B = *P.f.target;
    SPoset const&      C = *P.g.target;
    SPoset const&      D = *P.apex;
    auto               bad = [&](std::string s) { r.violations.push_back(std::move(s)); };
    for (Elt a = 0; a < A.size(); ++a) {
      if (P.gamma(P.f(a)) != P.delta(P.g(a))) {
        bad("cocone: gamma f != delta g at " + A.name(a));
      }
    }
    MapFlags const& ff = P.f.flags;
    MapFlags const& gf = P.g.flags;
    for (Elt b = 0; b < B.size(); ++b) {
      for (Elt c = 0; c < C.size(); ++c) {
        std::string at = " at b = " + B.name(b) + ", c = " + C.name(c);
        if (D.leq(P.gamma(b), P.delta(c))) {
          ++r.gap_instances;
          try {
            pushout_gap_witnesses(P, b, c);
          } catch (WitnessNotFound const&) {
            bad("gap witness missing" + at);
          }
        }
        if (D.leq(P.delta(c), P.gamma(b))) {
          ++r.gap_instances;
          try {
            pushout_gap_witnesses_dual(P, c, b);
          } catch (WitnessNotFound const&) {
            bad("dual gap witness missing" + at);
          }
        }
        if (P.gamma(b) != P.delta(c)) {
          continue;
        }
        try {
          pushout_equality_witnesses(P, b, c);
        } catch (WitnessNotFound const&) {
          bad("equality witnesses missing" + at);
        }
        std::vector<Elt> fb, gc, both;
        for (Elt a = 0; a < A.size(); ++a) {
          if (P.f(a) == b) {
            fb.push_back(a);
          }
          if (P.g(a) == c) {
            gc.push_back(a);
          }
          if (P.f(a) == b && P.g(a) == c) {
            both.push_back(a);
          }
        }
        if (ff.convex && gf.convex && (fb.empty() || gc.empty())) {
          bad("convex f, g but b or c outside the image" + at);
        }
        if (ff.convex && gf.convex && ff.order_embedding && gf.order_embedding
            && both.size() != 1) {
          bad("convex embeddings but " + std::to_string(both.size())
              + " common preimages" + at);
        }
      }
    }
    if (ff.order_embedding && !P.delta.flags.order_embedding) {
      bad("f is an order embedding but delta is not");
    }
    if (gf.order_embedding && !P.gamma.flags.order_embedding) {
      bad("g is an order embedding but gamma is not");
    }
    if (ff.convex && !P.delta.flags.convex) {
      bad("f is convex but delta is not");
    }
    if (gf.convex && !P.gamma.flags.convex) {
      bad("g is convex but gamma is not");
    }
    return r;
  }

  //! For every cocone (beta, epsilon) from the square into Z, counts the
  //! mediating maps D -> Z. Returns a description of the first cocone that
  //! does not have exactly one.
  inline std::optional<std::string>
  pushout_universal_failure(PushoutResult const& P, SPosetPtr const& Z) {
    std::optional<std::string> out;
    auto const&                betas = all_morphisms(*P.f.target, *Z);
    auto const&                eps   = all_morphisms(*P.g.target, *Z);
    for (auto const& beta : betas) {
      for (auto const& e : eps) {
        bool commutes = true;
        for (Elt a = 0; a < P.f.source->size() && commutes; ++a) {
          commutes = beta[P.f(a)] == e[P.g(a)];
        }
        if (!commutes) {
          continue;
        }
        std::vector<Elt> fixed(P.apex->size(), static_cast<Elt>(-1));
        bool             clash = false;
        for (Elt b = 0; b < beta.size(); ++b) {
          fixed[P.gamma(b)] = beta[b];
        }
        for (Elt c = 0; c < e.size(); ++c) {
          Elt& slot = fixed[P.delta(c)];
          if (slot != static_cast<Elt>(-1) && slot != e[c]) {
            clash = true;
          }
          slot = e[c];
        }
        std::size_t count = 0;
        if (!clash) {
          for_each_morphism(
              *P.apex,
              *Z,
              [&](std::vector<Elt> const&) { return ++count < 2; },
              fixed);
        }
        if (count != 1) {
          return "cocone into " + Z->label() + " has " + std::to_string(count)
                 + " mediating maps";
        }
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Direct limits of finite chains
  ////////////////////////////////////////////////////////////////////////

  //! Objects X_0, ..., X_{k-1} and connecting maps maps[i][j - i] : X_i ->
  //! X_j for i <= j.
  struct DirectSystem {
    std::vector<SPosetPtr>                     objects;
    std::vector<std::vector<std::vector<Elt>>> maps;

    std::vector<Elt> const& map(std::size_t i, std::size_t j) const {
      return maps[i][j - i];
    }
  };

  //! The system generated by consecutive maps step[i] : X_i -> X_{i+1}.
  inline DirectSystem chain_system(std::vector<SPosetPtr>        objects,
                                   std::vector<std::vector<Elt>> const& steps) {
    if (steps.size() + 1 != objects.size()) {
      throw Error("chain_system: need one step per consecutive pair");
    }
    DirectSystem sys{std::move(objects), {}};
    std::size_t  k = sys.objects.size();
    sys.maps.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<Elt> id(sys.objects[i]->size());
      for (Elt x = 0; x < id.size(); ++x) {
        id[x] = x;
      }
      sys.maps[i].push_back(std::move(id));
      for (std::size_t j = i + 1; j < k; ++j) {
        std::vector<Elt> next = sys.maps[i].back();
        for (Elt& x : next) {
          x = steps[j - 1][x];
        }
        sys.maps[i].push_back(std::move(next));
      }
    }
    return sys;
  }

  //! Throws SystemIncoherent unless every map is an S-poset morphism, the
  //! diagonal maps are identities and maps compose.
  inline void check_system(DirectSystem const& sys) {
    std::size_t k = sys.objects.size();
    if (sys.maps.size() != k) {
      throw SystemIncoherent("direct system: wrong number of map rows");
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (sys.maps[i].size() != k - i) {
        throw SystemIncoherent("direct system: wrong number of maps from X"
                               + std::to_string(i));
      }
      for (std::size_t j = i; j < k; ++j) {
        analyze_map(sys.map(i, j), sys.objects[i], sys.objects[j]);
      }
      for (Elt x = 0; x < sys.objects[i]->size(); ++x) {
        if (sys.map(i, i)[x] != x) {
          throw SystemIncoherent("direct system: map from X" + std::to_string(i)
                                 + " to itself is not the identity");
        }
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i; j < k; ++j) {
        for (std::size_t l = j; l < k; ++l) {
          for (Elt x = 0; x < sys.objects[i]->size(); ++x) {
            if (sys.map(j, l)[sys.map(i, j)[x]] != sys.map(i, l)[x]) {
              throw SystemIncoherent(
                  "direct system: maps do not compose at X" + std::to_string(i)
                  + " -> X" + std::to_string(j) + " -> X" + std::to_string(l)
                  + ", element " + sys.objects[i]->name(x));
            }
          }
        }
      }
    }
  }

  struct DirectLimit {
    SPosetPtr                object;
    std::vector<SPosetMap>   legs;
    std::vector<std::size_t> offsets;  // start of X_i in the disjoint union
    Quotient                 rho;
  };

  //! Quotient of the disjoint union of the objects by theta of
  //! {(x, phi_ij(x))}.
  inline DirectLimit direct_limit(DirectSystem const& sys) {
    check_system(sys);
    std::size_t k = sys.objects.size();
    if (k == 0) {
      throw Error("direct_limit: empty system");
    }
    SPosetPtr                sum = sys.objects[0];
    std::vector<std::size_t> off{0};
    for (std::size_t i = 1; i < k; ++i) {
      off.push_back(sum->size());
      sum = coproduct(sum, sys.objects[i]).object;
    }
    Pairs R;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        for (Elt x = 0; x < sys.objects[i]->size(); ++x) {
          R.emplace_back(static_cast<Elt>(off[i] + x),
                         static_cast<Elt>(off[j] + sys.map(i, j)[x]));
        }
      }
    }
    DirectLimit L{nullptr, {}, off, theta_congruence(sum, R)};
    L.object = L.rho.quotient;
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<Elt> leg(sys.objects[i]->size());
      for (Elt x = 0; x < leg.size(); ++x) {
        leg[x] = L.rho.projection[off[i] + x];
      }
      L.legs.push_back(analyze_map(std::move(leg), sys.objects[i], L.object));
    }
    return L;
  }

  //! Cocone identity, the order of the limit as eventual order, and
  //! injectivity and embedding of the legs against those of the maps.
  inline std::vector<std::string> check_direct_limit_lemmas(DirectSystem const& sys,
                                                            DirectLimit const&  L) {
    std::vector<std::string> out;
    std::size_t              k = sys.objects.size();
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i; j < k; ++j) {
        for (Elt x = 0; x < sys.objects[i]->size(); ++x) {
          if (L.legs[j](sys.map(i, j)[x]) != L.legs[i](x)) {
            out.push_back("cocone fails at X" + std::to_string(i) + " -> X"
                          + std::to_string(j));
          }
        }
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        std::size_t lo = std::max(i, j);
        for (Elt x = 0; x < sys.objects[i]->size(); ++x) {
          for (Elt y = 0; y < sys.objects[j]->size(); ++y) {
            bool limit = L.object->leq(L.legs[i](x), L.legs[j](y));
            bool eventual = false;
            for (std::size_t l = lo; l < k && !eventual; ++l) {
              eventual = sys.objects[l]->leq(sys.map(i, l)[x], sys.map(j, l)[y]);
            }
            if (limit != eventual) {
              out.push_back("limit order differs from eventual order at X"
                            + std::to_string(i) + ":" + sys.objects[i]->name(x)
                            + ", X" + std::to_string(j) + ":"
                            + sys.objects[j]->name(y));
            }
          }
        }
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      bool inj = true, emb = true;
      for (std::size_t l = i; l < k; ++l) {
        MapFlags fl = poset_map_flags(
            sys.map(i, l), sys.objects[i]->order(), sys.objects[l]->order());
        inj = inj && fl.injective;
        emb = emb && fl.order_embedding;
      }
      if (inj != L.legs[i].flags.injective) {
        out.push_back("leg " + std::to_string(i) + " injectivity disagrees");
      }
      if (emb != L.legs[i].flags.order_embedding) {
        out.push_back("leg " + std::to_string(i) + " embedding disagrees");
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Free extensions
  ////////////////////////////////////////////////////////////////////////

  //! A pomonoid embedding U -> S given by the images of the elements of U.
  class CoreEmbedding {
   public:
    CoreEmbedding(ActorPtr core, ActorPtr ambient, std::vector<Elt> hom)
        : _core(std::move(core)), _ambient(std::move(ambient)), _hom(std::move(hom)) {
      if (_hom.size() != _core->size()) {
        throw Error("CoreEmbedding: one image per core element required");
      }
      PomonoidMapReport r = analyze_pomonoid_map(_hom, *_core, *_ambient);
      if (!r.homomorphism || !r.order_embedding) {
        throw NotOrderEmbedding("CoreEmbedding: not an order-embedding homomorphism");
      }
    }

    CoreEmbedding(SubPomonoid const& U)  // NOLINT: implicit by design
        : _core(U.pomonoid()), _ambient(U.ambient()), _hom(U.embedding()) {}

    ActorPtr const& pomonoid() const noexcept {
      return _core;
    }

    ActorPtr const& ambient() const noexcept {
      return _ambient;
    }

    std::vector<Elt> const& embedding() const noexcept {
      return _hom;
    }

    Restriction restriction() const {
      return Restriction{_core, _hom};
    }

   private:
    ActorPtr         _core;
    ActorPtr         _ambient;
    std::vector<Elt> _hom;
  };

  //! X with its right action restricted along U -> S; a left action is kept.
  inline SPosetPtr restrict_right(SPoset const& X, CoreEmbedding const& U) {
    std::optional<Restriction> left;
    if (X.left_actor()) {
      left = same_actions(X.left_actor());
    }
    return restrict_actions(X, left, U.restriction());
  }

  inline SPosetPtr restrict_right(SPoset const& X, SubPomonoid const& U) {
    return restrict_right(X, CoreEmbedding(U));
  }

  //! S as a (U, S)-poset.
  inline SPosetPtr as_u_s_poset(CoreEmbedding const& U) {
    return restrict_actions(
        *regular_bi(U.ambient()), U.restriction(), same_actions(U.ambient()));
  }

  struct FreeExtension {
    CoreEmbedding    sub;
    SPosetPtr        X;   // right S-poset (possibly with a left action)
    SPosetPtr        XU;  // X with the right action restricted to U
    SPosetPtr        Y;   // right U-poset (possibly with a left action)
    SPosetMap        f;   // XU -> Y
    SPosetPtr        US;  // S as a (U, S)-poset
    TensorPoset      YS;  // (Y (x)_U S)/nu(R), computed on pairs
    Pairs            relations;  // generating edges; aux vertex |Y||S| + w for w in X
    SPosetPtr        F;
    std::vector<Elt> g;  // Y -> F, y |-> (y (x) 1)rho
    std::vector<Elt> h;  // X -> F, g f

    Elt cls(Elt y, Elt s) const noexcept {
      return YS.cls(y, s);
    }
  };

  //! (Y (x)_U S)/nu(R) with R = {(f(x) (x) s, f(x') (x) s') : xs <= x's'}.
  //! R is closed under translation, so the quotient is one closure on
  //! Y x S. R is generated through auxiliary vertices, one per element w of
  //! X: f(x) (x) s -> w whenever xs = w, w -> w' along the covers of X, and
  //! w -> f(x) (x) s again.
  inline FreeExtension free_extension(CoreEmbedding const& U,
                                      SPosetPtr const&     X,
                                      SPosetPtr const&     Y,
                                      std::vector<Elt>     f,
                                      std::string          label = {}) {
    ActorPtr const& S = U.ambient();
    if (!same_actor(X->right_actor(), S)) {
      throw ActorMismatch("free_extension: X must be a right S-poset");
    }
    if (!same_actor(Y->right_actor(), U.pomonoid())) {
      throw ActorMismatch("free_extension: Y must be a right U-poset");
    }
    FreeExtension E{U, X, restrict_right(*X, U), Y, {}, as_u_s_poset(U), {}, {}, nullptr, {}, {}};
    E.f = analyze_map(std::move(f), E.XU, Y);
    std::size_t k     = S->size();
    std::size_t pairs = Y->size() * k;
    auto        aux   = [&](Elt w) { return static_cast<Elt>(pairs + w); };
    for (Elt x = 0; x < X->size(); ++x) {
      for (Elt s = 0; s < k; ++s) {
        Elt p = static_cast<Elt>(E.f(x) * k + s);
        Elt w = X->act_right(x, s);
        E.relations.emplace_back(p, aux(w));
        E.relations.emplace_back(aux(w), p);
      }
    }
    for (auto [w, w2] : X->order().covers()) {
      E.relations.emplace_back(aux(w), aux(w2));
    }
    E.YS = tensor_with_relations(Y, E.US, E.relations, std::move(label), X->size());
    E.F  = E.YS.result();
    E.g.resize(Y->size());
    for (Elt y = 0; y < Y->size(); ++y) {
      E.g[y] = E.YS.cls(y, S->identity());
    }
    E.h.resize(X->size());
    for (Elt x = 0; x < X->size(); ++x) {
      E.h[x] = E.g[E.f(x)];
    }
    return E;
  }

  //! g is a U-map, h an S-map, and (y (x) s)rho = g(y)s.
  inline std::vector<std::string> check_free_extension_maps(FreeExtension const& E) {
    std::vector<std::string> out;
    SPosetPtr                FU = restrict_right(*E.F, E.sub);
    try {
      SPosetMap g = analyze_map(E.g, E.Y, FU);
      if (!g.flags.monotone) {
        out.push_back("g is not monotone");
      }
    } catch (NotEquivariant const& e) {
      out.push_back(std::string("g: ") + e.what());
    }
    try {
      SPosetMap h = analyze_map(E.h, E.X, E.F);
      if (!h.flags.monotone) {
        out.push_back("h is not monotone");
      }
    } catch (NotEquivariant const& e) {
      out.push_back(std::string("h: ") + e.what());
    }
    for (Elt y = 0; y < E.Y->size(); ++y) {
      for (Elt s = 0; s < E.sub.ambient()->size(); ++s) {
        if (E.cls(y, s) != E.F->act_right(E.g[y], s)) {
          out.push_back("(y (x) s)rho != g(y)s at y = " + E.Y->name(y)
                        + ", s = " + E.sub.ambient()->name(s));
        }
      }
    }
    return out;
  }

  //! y <= y' and s <= s' give (y (x) s)rho <= (y' (x) s')rho.
  inline std::vector<std::string> check_free_extension_order(FreeExtension const& E) {
    std::vector<std::string> out;
    Pomonoid const&          S = *E.sub.ambient();
    for (Elt y = 0; y < E.Y->size(); ++y) {
      for (Elt y2 = 0; y2 < E.Y->size(); ++y2) {
        if (!E.Y->leq(y, y2)) {
          continue;
        }
        for (Elt s = 0; s < S.size(); ++s) {
          for (Elt s2 = 0; s2 < S.size(); ++s2) {
            if (S.leq(s, s2) && !E.F->leq(E.cls(y, s), E.cls(y2, s2))) {
              out.push_back("order rule fails at " + E.Y->name(y) + " <= "
                            + E.Y->name(y2) + ", " + S.name(s)
                            + " <= " + S.name(s2));
            }
          }
        }
      }
    }
    return out;
  }

  //! For every U-map alpha : Y -> Z with alpha f an S-map, the number of
  //! S-maps psi : F -> Z with psi g = alpha must be one. Z must carry the
  //! same actions as F. Returns the first failure.
  inline std::optional<std::string>
  free_extension_universal_failure(FreeExtension const& E, SPosetPtr const& Z) {
    SPosetPtr                  ZU = restrict_right(*Z, E.sub);
    std::optional<std::string> out;
    for_each_morphism(*E.Y, *ZU, [&](std::vector<Elt> const& alpha) {
      std::vector<Elt> beta(E.X->size());
      for (Elt x = 0; x < beta.size(); ++x) {
        beta[x] = alpha[E.f(x)];
      }
      if (equivariance_failure(beta, *E.X, *Z)) {
        return true;
      }
      std::vector<Elt> fixed(E.F->size(), static_cast<Elt>(-1));
      for (Elt y = 0; y < E.Y->size(); ++y) {
        Elt& slot = fixed[E.g[y]];
        if (slot != static_cast<Elt>(-1) && slot != alpha[y]) {
          out = "alpha does not factor through g";
          return false;
        }
        slot = alpha[y];
      }
      std::size_t count = 0;
      for_each_morphism(
          *E.F, *Z, [&](std::vector<Elt> const&) { return ++count < 2; }, fixed);
      if (count != 1) {
        out = std::to_string(count) + " mediating maps into " + Z->label();
        return false;
      }
      return true;
    });
    return out;
  }

  //! The pushout of X (x)_U S -> Y (x)_U S (f (x) 1) and the evaluation
  //! X (x)_U S -> X, as right S-posets, and whether it is isomorphic to F
  //! by an isomorphism carrying the pushout legs to g and h.
  struct FreeExtensionPushout {
    PushoutResult    square;
    bool             isomorphic = false;
  };

  inline FreeExtensionPushout free_extension_pushout(FreeExtension const& E) {
    SPosetPtr   XU = forget_left(*E.XU);
    SPosetPtr   YR = forget_left(*E.Y);
    SPosetPtr   X  = forget_left(*E.X);
    SPosetPtr   F  = forget_left(*E.F);
    SPosetMap   f  = analyze_map(E.f.assignment, XU, YR);
    InducedMap  f1 = induced_map(f, E.US);
    TensorPoset const& XS = f1.source;
    std::vector<Elt>   ev(XS.size());
    for (Elt x = 0; x < X->size(); ++x) {
      for (Elt s = 0; s < E.sub.ambient()->size(); ++s) {
        ev[XS.cls(x, s)] = X->act_right(x, s);
      }
    }
    SPosetMap evaluation = analyze_map(std::move(ev), XS.result(), X);
    FreeExtensionPushout out{pushout(f1.map, evaluation), false};
    // the pushout's legs from Y (x) S and X must match (y (x) s) |-> class
    // and h under the isomorphism
    PushoutResult const& P = out.square;
    std::vector<Elt>     fixed(P.apex->size(), static_cast<Elt>(-1));
    TensorPoset const&   YS = f1.target;
    bool                 consistent = true;
    for (Elt y = 0; y < YR->size(); ++y) {
      for (Elt s = 0; s < E.sub.ambient()->size(); ++s) {
        Elt& slot = fixed[P.gamma(YS.cls(y, s))];
        Elt  want = E.cls(y, s);
        consistent = consistent && (slot == static_cast<Elt>(-1) || slot == want);
        slot = want;
      }
    }
    for (Elt x = 0; x < X->size(); ++x) {
      Elt& slot  = fixed[P.delta(x)];
      consistent = consistent
                   && (slot == static_cast<Elt>(-1) || slot == E.h[x]);
      slot = E.h[x];
    }
    if (consistent && P.apex->size() == F->size()) {
      for_each_morphism(
          *P.apex,
          *F,
          [&](std::vector<Elt> const& m) {
            MapFlags fl = poset_map_flags(m, P.apex->order(), F->order());
            out.isomorphic = fl.order_embedding && fl.surjective;
            return !out.isomorphic;
          },
          fixed);
    }
    return out;
  }

}  // namespace pomalg

#endif  // POMALG_CONSTRUCTIONS_HPP_
