// pomalg - finite partially ordered monoids and their acts
//
// The five (po)unitary conditions, for a subpomonoid U of S and for an order
// embedding f : X -> Y of U-posets, and the poextension property.
//
// Both cases are one computation: a poset Y acted on by U with a marked
// subset M (U itself, or im f). The strong and unitary conditions are triple
// scans. For the chain condition, call z reachable from y when y u' <= z u''
// for some u', u''. An element sits on some chain
//     m <= y1 u1, y1 u1' <= y2 u2, ..., yn un' <= m'
// exactly when it is reachable from a start {y : m <= y u} and reaches an end
// {y : y u' <= m'}, so the condition holds iff every such element is in M.

#ifndef POMALG_UNITARY_HPP_
#define POMALG_UNITARY_HPP_

#include <cstddef>     // for size_t
#include <functional>  // for function
#include <map>         // for map
#include <optional>    // for optional
#include <string>      // for string
#include <vector>      // for vector

#include "constructions.hpp"
#include "core.hpp"
#include "enumerate.hpp"
#include "errors.hpp"
#include "tensor.hpp"

namespace pomalg {

  //! y u against m: (y, u, m) realises m <= y u, y u <= m or y u = m as the
  //! condition requires, with y outside the marked set.
  struct TripleWitness {
    Elt y;
    Elt u;
    Elt m;
  };

  //! start <= ys[0] u_in[0], ys[i] u_out[i] <= ys[i+1] u_in[i+1], and
  //! ys.back() u_out.back() <= end; ys[bad] is outside the marked set.
  struct ChainWitness {
    Elt              start = 0;
    std::vector<Elt> ys;
    std::vector<Elt> u_in;
    std::vector<Elt> u_out;
    Elt              end = 0;
    std::size_t      bad = 0;
  };

  struct SideVerdict {
    bool                       ru    = true;
    bool                       rpu   = true;
    bool                       usrpu = true;
    bool                       lsrpu = true;
    bool                       srpu  = true;
    std::vector<TripleWitness> ru_violations;
    std::vector<TripleWitness> usrpu_violations;
    std::vector<TripleWitness> lsrpu_violations;
    std::optional<ChainWitness> chain;
  };

  struct UnitaryVerdict {
    std::optional<SideVerdict> right;
    std::optional<SideVerdict> left;
    bool                       convex = true;  // morphisms only
    std::string                scope  = "exact";

    //! Pounitary on both available sides.
    bool pounitary() const {
      return (!right || right->rpu) && (!left || left->rpu);
    }

    bool strongly_pounitary() const {
      return (!right || right->srpu) && (!left || left->srpu);
    }
  };

  //! A poset acted on by some scalars, with a marked subset.
  struct MarkedAction {
    std::size_t                    size    = 0;
    std::size_t                    scalars = 0;
    std::function<bool(Elt, Elt)>  leq;
    std::function<Elt(Elt, Elt)>   act;  // (y, u) -> y u
    std::vector<bool>              marked;
  };

  namespace detail {
    inline SideVerdict decide_unitary(MarkedAction const& G) {
      SideVerdict v;
      std::size_t n = G.size, k = G.scalars;
      for (Elt y = 0; y < n; ++y) {
        if (G.marked[y]) {
          continue;
        }
        for (Elt u = 0; u < k; ++u) {
          Elt yu = G.act(y, u);
          for (Elt m = 0; m < n; ++m) {
            if (!G.marked[m]) {
              continue;
            }
            if (yu == m) {
              v.ru_violations.push_back({y, u, m});
            }
            if (G.leq(m, yu)) {
              v.usrpu_violations.push_back({y, u, m});
            }
            if (G.leq(yu, m)) {
              v.lsrpu_violations.push_back({y, u, m});
            }
          }
        }
      }
      v.ru    = v.ru_violations.empty();
      v.usrpu = v.usrpu_violations.empty();
      v.lsrpu = v.lsrpu_violations.empty();
      v.srpu  = v.usrpu && v.lsrpu;

      // step (y -> z, u', u'') when y u' <= z u''
      struct Step {
        Elt from, u_out, u_in;
      };
      constexpr Elt NONE = static_cast<Elt>(-1);
      std::vector<std::optional<Step>> fwd(n), bwd(n);
      std::vector<std::pair<Elt, Elt>> start(n, {NONE, NONE});  // (m, u)
      std::vector<std::pair<Elt, Elt>> stop(n, {NONE, NONE});   // (u', m')
      std::vector<bool>                in_f(n, false), in_b(n, false);
      std::vector<Elt>                 queue;
      for (Elt y = 0; y < n; ++y) {
        for (Elt u = 0; u < k && !in_f[y]; ++u) {
          for (Elt m = 0; m < n; ++m) {
            if (G.marked[m] && G.leq(m, G.act(y, u))) {
              in_f[y]  = true;
              start[y] = {m, u};
              queue.push_back(y);
              break;
            }
          }
        }
      }
      for (std::size_t i = 0; i < queue.size(); ++i) {
        Elt y = queue[i];
        for (Elt z = 0; z < n; ++z) {
          if (in_f[z]) {
            continue;
          }
          for (Elt u1 = 0; u1 < k && !in_f[z]; ++u1) {
            for (Elt u2 = 0; u2 < k; ++u2) {
              if (G.leq(G.act(y, u1), G.act(z, u2))) {
                in_f[z] = true;
                fwd[z]  = Step{y, u1, u2};
                queue.push_back(z);
                break;
              }
            }
          }
        }
      }
      queue.clear();
      for (Elt y = 0; y < n; ++y) {
        for (Elt u = 0; u < k && !in_b[y]; ++u) {
          for (Elt m = 0; m < n; ++m) {
            if (G.marked[m] && G.leq(G.act(y, u), m)) {
              in_b[y] = true;
              stop[y] = {u, m};
              queue.push_back(y);
              break;
            }
          }
        }
      }
      for (std::size_t i = 0; i < queue.size(); ++i) {
        Elt z = queue[i];
        for (Elt y = 0; y < n; ++y) {
          if (in_b[y]) {
            continue;
          }
          for (Elt u1 = 0; u1 < k && !in_b[y]; ++u1) {
            for (Elt u2 = 0; u2 < k; ++u2) {
              if (G.leq(G.act(y, u1), G.act(z, u2))) {
                in_b[y] = true;
                bwd[y]  = Step{z, u1, u2};
                queue.push_back(y);
                break;
              }
            }
          }
        }
      }
      for (Elt y = 0; y < n; ++y) {
        if (!in_f[y] || !in_b[y] || G.marked[y]) {
          continue;
        }
        v.rpu = false;
        ChainWitness w;
        // walk back to a start
        std::vector<Elt> back{y};
        std::vector<Elt> in_scalar, out_scalar;
        Elt              z = y;
        while (fwd[z]) {
          back.push_back(fwd[z]->from);
          z = fwd[z]->from;
        }
        w.start = start[z].first;
        w.ys.assign(back.rbegin(), back.rend());
        w.bad = w.ys.size() - 1;
        // scalars along the forward part
        w.u_in.push_back(start[w.ys[0]].second);
        for (std::size_t i = 1; i < w.ys.size(); ++i) {
          Step const& s = *fwd[w.ys[i]];
          w.u_out.push_back(s.u_out);
          w.u_in.push_back(s.u_in);
        }
        // and forward to an end
        z = y;
        while (bwd[z]) {
          Step const& s = *bwd[z];
          w.u_out.push_back(s.u_out);
          w.u_in.push_back(s.u_in);
          w.ys.push_back(s.from);
          z = s.from;
        }
        w.u_out.push_back(stop[z].first);
        w.end   = stop[z].second;
        v.chain = std::move(w);
        break;
      }
      return v;
    }
  }  // namespace detail

  //! Empty when every inequality of the chain holds, its ends are marked and
  //! the flagged element is not.
  inline std::string replay(ChainWitness const& w, MarkedAction const& G) {
    std::size_t n = w.ys.size();
    if (n == 0 || w.u_in.size() != n || w.u_out.size() != n || w.bad >= n) {
      return "malformed chain";
    }
    if (!G.marked[w.start] || !G.marked[w.end]) {
      return "chain ends are not marked";
    }
    if (G.marked[w.ys[w.bad]]) {
      return "flagged element is marked";
    }
    if (!G.leq(w.start, G.act(w.ys[0], w.u_in[0]))) {
      return "first inequality fails";
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!G.leq(G.act(w.ys[i], w.u_out[i]), G.act(w.ys[i + 1], w.u_in[i + 1]))) {
        return "inequality " + std::to_string(i + 1) + " fails";
      }
    }
    if (!G.leq(G.act(w.ys[n - 1], w.u_out[n - 1]), w.end)) {
      return "last inequality fails";
    }
    return {};
  }

  //! S acted on by U from the right (or, with left = true, from the left),
  //! marked at U.
  inline MarkedAction marked_submonoid(SubPomonoid const& U, bool left) {
    ActorPtr         S   = U.ambient();
    std::vector<Elt> emb = U.embedding();
    MarkedAction     G;
    G.size    = S->size();
    G.scalars = U.size();
    G.leq     = [S](Elt a, Elt b) { return S->leq(a, b); };
    if (left) {
      G.act = [S, emb](Elt y, Elt u) { return S->mult(emb[u], y); };
    } else {
      G.act = [S, emb](Elt y, Elt u) { return S->mult(y, emb[u]); };
    }
    G.marked = U.mask();
    return G;
  }

  //! Y acted on by its right (or left) actor, marked at im f.
  inline MarkedAction marked_image(SPosetMap const& f, bool left) {
    SPosetPtr    Y = f.target;
    MarkedAction G;
    G.size    = Y->size();
    G.scalars = left ? Y->left_actor()->size() : Y->right_actor()->size();
    G.leq     = [Y](Elt a, Elt b) { return Y->leq(a, b); };
    if (left) {
      G.act = [Y](Elt y, Elt u) { return Y->act_left(u, y); };
    } else {
      G.act = [Y](Elt y, Elt u) { return Y->act_right(y, u); };
    }
    G.marked.assign(Y->size(), false);
    for (Elt x : f.assignment) {
      G.marked[x] = true;
    }
    return G;
  }

  inline UnitaryVerdict check_unitary_submonoid(SubPomonoid const& U) {
    UnitaryVerdict v;
    v.right = detail::decide_unitary(marked_submonoid(U, false));
    v.left  = detail::decide_unitary(marked_submonoid(U, true));
    return v;
  }

  //! f must be an order embedding; the sides reported are those on which
  //! the target is acted on.
  inline UnitaryVerdict check_unitary_morphism(SPosetMap const& f) {
    if (!f.flags.order_embedding) {
      throw NotOrderEmbedding("check_unitary_morphism: f is not an order embedding");
    }
    UnitaryVerdict v;
    if (f.target->right_actor()) {
      v.right = detail::decide_unitary(marked_image(f, false));
    }
    if (f.target->left_actor()) {
      v.left = detail::decide_unitary(marked_image(f, true));
    }
    v.convex = f.flags.convex;
    return v;
  }

  //! When U is strongly right pounitary, S \ U is closed under the right
  //! U-action and no order relation crosses between U and S \ U. Returns a
  //! description of the first failure.
  inline std::optional<std::string> srpu_structure_failure(SubPomonoid const& U) {
    Pomonoid const& S = *U.ambient();
    for (Elt s = 0; s < S.size(); ++s) {
      for (Elt t = 0; t < S.size(); ++t) {
        if (U.contains(s) != U.contains(t) && S.leq(s, t)) {
          return "order crosses between " + S.name(s) + " and " + S.name(t);
        }
      }
      if (U.contains(s)) {
        continue;
      }
      for (Elt u : U.members()) {
        if (U.contains(S.mult(s, u))) {
          return S.name(s) + S.name(u) + " falls into U";
        }
      }
    }
    return std::nullopt;
  }

  ////////////////////////////////////////////////////////////////////////
  // Poextension
  ////////////////////////////////////////////////////////////////////////

  struct PoextVerdict {
    bool                               order_embedding = true;
    bool                               injective       = true;
    std::optional<std::pair<Elt, Elt>> witness;  // x, x' with x (x) 1 <= x' (x) 1, x !<= x'
  };

  namespace detail {
    inline PoextVerdict poext_from_classes(Poset const&                  P,
                                           std::vector<Elt> const&       cls,
                                           std::function<bool(Elt, Elt)> leq) {
      PoextVerdict v;
      for (Elt x = 0; x < P.size(); ++x) {
        for (Elt y = 0; y < P.size(); ++y) {
          if (x != y && cls[x] == cls[y]) {
            v.injective = false;
          }
          if (leq(cls[x], cls[y]) && !P.leq(x, y)) {
            v.order_embedding = false;
            if (!v.witness) {
              v.witness = std::make_pair(x, y);
            }
          }
        }
      }
      return v;
    }
  }  // namespace detail

  //! x |-> x (x) 1 into X (x)_U S for a right U-poset X.
  inline PoextVerdict check_poextension_for(SubPomonoid const& U, SPosetPtr const& X) {
    if (!same_actor(X->right_actor(), U.pomonoid())) {
      throw ActorMismatch("check_poextension_for: X must be a right U-poset");
    }
    TensorPoset      T = tensor(forget_left(*X), as_u_s_poset(U));
    std::vector<Elt> cls(X->size());
    for (Elt x = 0; x < X->size(); ++x) {
      cls[x] = T.cls(x, U.ambient()->identity());
    }
    SPosetPtr const& R = T.result();
    return detail::poext_from_classes(
        X->order(), cls, [&R](Elt a, Elt b) { return R->leq(a, b); });
  }

  //! S as an (S, U)-poset.
  inline SPosetPtr as_s_u_poset(SubPomonoid const& U) {
    return restrict_actions(
        *regular_bi(U.ambient()), same_actions(U.ambient()), along(U));
  }

  //! x |-> 1 (x) x into S (x)_U X for a left U-poset X.
  inline PoextVerdict check_left_poextension_for(SubPomonoid const& U,
                                                 SPosetPtr const&   X) {
    if (!same_actor(X->left_actor(), U.pomonoid())) {
      throw ActorMismatch("check_left_poextension_for: X must be a left U-poset");
    }
    TensorPoset      T = tensor(as_s_u_poset(U), forget_right(*X));
    std::vector<Elt> cls(X->size());
    for (Elt x = 0; x < X->size(); ++x) {
      cls[x] = T.cls(U.ambient()->identity(), x);
    }
    SPosetPtr const& R = T.result();
    return detail::poext_from_classes(
        X->order(), cls, [&R](Elt a, Elt b) { return R->leq(a, b); });
  }

  //! x (x) y |-> x (x) 1 (x) y from X (x)_U Y into X (x)_U S (x)_U Y, for a
  //! right U-poset X and a left U-poset Y. The witness holds classes of
  //! X (x) Y.
  inline PoextVerdict check_two_sided_poextension_for(SubPomonoid const& U,
                                                      SPosetPtr const&   X,
                                                      SPosetPtr const&   Y) {
    SPosetPtr   XR = forget_left(*X);
    SPosetPtr   YL = forget_right(*Y);
    TensorPoset XY = tensor(XR, YL);
    SPosetPtr   SU = restrict_actions(*regular_bi(U.ambient()), along(U), along(U));
    TensorPoset XS  = tensor(XR, SU);
    TensorPoset XSY = tensor(XS.result(), YL);
    std::vector<Elt> cls(XY.size());
    for (Elt x = 0; x < X->size(); ++x) {
      for (Elt y = 0; y < Y->size(); ++y) {
        cls[XY.cls(x, y)] = XSY.cls(XS.cls(x, U.ambient()->identity()), y);
      }
    }
    SPosetPtr const& R = XSY.result();
    return detail::poext_from_classes(
        XY.result()->order(), cls, [&R](Elt a, Elt b) { return R->leq(a, b); });
  }

  //! The right poextension property tested on every right U-poset with at
  //! most `cap` elements, U itself first.
  struct BoundedPoextVerdict {
    bool                        holds  = true;
    std::string                 scope  = "bounded";
    std::size_t                 cap    = 0;
    std::size_t                 tested = 0;
    SPosetPtr                   failing;
    std::optional<PoextVerdict> failure;
  };

  //! Enumerations of right U-posets keyed by U's table and order.
  class SPosetCache {
   public:
    std::vector<SPosetPtr> const& right_sposets(ActorPtr const&   U,
                                                std::size_t       cap,
                                                EnumerationLimits lim) {
      auto key = std::make_pair(detail::canonical_form(U->size(), U->table(), &U->order().relation(), U->size()), cap);
      auto it  = _cache.find(key);
      if (it == _cache.end()) {
        it = _cache.emplace(key, enumerate_right_sposets_upto(U, cap, lim)).first;
      }
      return it->second;
    }

   private:
    std::map<std::pair<std::vector<Elt>, std::size_t>, std::vector<SPosetPtr>> _cache;
  };

  inline BoundedPoextVerdict check_poextension_bounded(SubPomonoid const& U,
                                                       std::size_t        cap,
                                                       EnumerationLimits  lim = {},
                                                       SPosetCache*       cache = nullptr) {
    if (cap > lim.max_sposet) {
      throw CapExceeded(cap, lim.max_sposet);
    }
    BoundedPoextVerdict out;
    out.cap = cap;
    auto test = [&](SPosetPtr const& X) {
      ++out.tested;
      PoextVerdict v = check_poextension_for(U, X);
      if (!v.order_embedding) {
        out.holds   = false;
        out.failing = X;
        out.failure = v;
      }
      return v.order_embedding;
    };
    if (!test(regular_right(U.pomonoid()))) {
      return out;
    }
    std::vector<SPosetPtr> local;
    if (cache == nullptr) {
      local = enumerate_right_sposets_upto(U.pomonoid(), cap, lim);
    }
    auto const& all = cache ? cache->right_sposets(U.pomonoid(), cap, lim) : local;
    for (auto const& X0 : all) {
      // the enumeration is over an isomorphic copy; rebind the actor
      SPosetPtr X = make_sposet(SPosetCandidate{X0->order(), nullptr, {}, U.pomonoid(), X0->data().right_act});
      if (!test(X)) {
        return out;
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Image rules in tensor products
  ////////////////////////////////////////////////////////////////////////

  struct ImageRuleWitness {
    Elt y, a, x, a_prime;
  };

  //! For a right U-map f : X -> Y and a left U-poset A: lower = true checks
  //! y (x) a <= f(x) (x) a' => y in im f (which holds when f is lower
  //! strongly right pounitary), lower = false checks f(x) (x) a <= y (x) a'
  //! => y in im f (upper). Throws PreconditionFailed if f lacks the
  //! corresponding strong property.
  inline std::optional<ImageRuleWitness>
  image_rule_failure(SPosetMap const& f, SPosetPtr const& A, bool lower) {
    UnitaryVerdict v = check_unitary_morphism(f);
    if (!v.right || !(lower ? v.right->lsrpu : v.right->usrpu)) {
      throw PreconditionFailed(std::string("image rule: f is not ")
                               + (lower ? "lower" : "upper")
                               + " strongly right pounitary");
    }
    SPosetPtr         Y = forget_left(*f.target);
    TensorPoset       T = tensor(Y, forget_right(*A));
    std::vector<bool> im(Y->size(), false);
    for (Elt x : f.assignment) {
      im[x] = true;
    }
    for (Elt y = 0; y < Y->size(); ++y) {
      if (im[y]) {
        continue;
      }
      for (Elt a = 0; a < A->size(); ++a) {
        for (Elt x = 0; x < f.source->size(); ++x) {
          for (Elt a2 = 0; a2 < A->size(); ++a2) {
            bool rel = lower ? T.leq(y, a, f(x), a2) : T.leq(f(x), a2, y, a);
            if (rel) {
              return ImageRuleWitness{y, a, x, a2};
            }
          }
        }
      }
    }
    return std::nullopt;
  }

  inline std::optional<ImageRuleWitness> lemma_r2_check(SPosetMap const& f,
                                                        SPosetPtr const& A) {
    return image_rule_failure(f, A, true);
  }

  ////////////////////////////////////////////////////////////////////////
  // Free extensions of strongly pounitary maps
  ////////////////////////////////////////////////////////////////////////

  struct FreeExtensionEmbedding {
    bool h_embedding = false;
    bool g_embedding = false;
    bool g_strong    = false;  // strongly pounitary on every side F is acted on by U
  };

  inline FreeExtensionEmbedding free_extension_embedding(FreeExtension const& E) {
    FreeExtensionEmbedding out;
    out.h_embedding = poset_map_flags(E.h, E.X->order(), E.F->order()).order_embedding;
    SPosetPtr FU = restrict_right(*E.F, E.sub);
    SPosetMap g  = analyze_map(E.g, E.Y, FU);
    out.g_embedding = g.flags.order_embedding;
    if (out.g_embedding) {
      out.g_strong = check_unitary_morphism(g).strongly_pounitary();
    }
    return out;
  }

}  // namespace pomalg

#endif  // POMALG_UNITARY_HPP_
