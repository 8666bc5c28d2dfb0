// pomalg - finite partially ordered monoids and their acts
//
// Tensor products of S-posets with certificate-producing order queries, and
// the canonical maps between tensor products.
//
// The order on A (x)_S B is usually presented by chains of unbounded length
//
//   a <= a1 s1,  s1 b <= t1 b2,  a1 t1 <= a2 s2,  ...,  an tn <= a'
//
// but on finite carriers it is the reflexive-transitive closure of a finite
// digraph on A x B with three kinds of edge: a cover step in A, a cover step
// in B, and the identification (as, b) <-> (a, sb) in both directions. Every
// chain above is a walk in that graph and every walk can be rewritten as
// such a chain, one row per edge with identity scalars padding the rest
// (see `certificate_from_walk`). So the tensor is one closure followed by a
// quotient by the strongly connected components.

#ifndef POMALG_TENSOR_HPP_
#define POMALG_TENSOR_HPP_

#include <optional>  // for optional
#include <string>    // for string
#include <utility>   // for pair, move
#include <vector>    // for vector

#include "core.hpp"
#include "errors.hpp"
#include "relation.hpp"

namespace pomalg {

  //! One row of the chain: a_i, s_i, t_i and b_{i+1}.
  struct TensorRow {
    Elt a;
    Elt s;
    Elt t;
    Elt b_next;
  };

  //! Witness that a (x) b <= a' (x) b'.
  struct TensorCertificate {
    Elt                    a;
    Elt                    b;
    Elt                    a_to;
    Elt                    b_to;
    std::vector<TensorRow> rows;
  };

  //! A (x)_S B. Pairs (a, b) are numbered a * |B| + b.
  class TensorPoset {
   public:
    TensorPoset() = default;

    SPosetPtr const& left_factor() const noexcept {
      return _a;
    }

    SPosetPtr const& right_factor() const noexcept {
      return _b;
    }

    ActorPtr const& middle() const noexcept {
      return _a->right_actor();
    }

    //! The classes as an S-poset, carrying the outer actions if present.
    SPosetPtr const& result() const noexcept {
      return _result;
    }

    std::size_t size() const noexcept {
      return _pre.num_classes();
    }

    Elt pair(Elt a, Elt b) const noexcept {
      return a * static_cast<Elt>(_b->size()) + b;
    }

    //! Class of a (x) b.
    Elt cls(Elt a, Elt b) const noexcept {
      return _pre.component[pair(a, b)];
    }

    //! A representative pair of a class.
    std::pair<Elt, Elt> representative(Elt c) const noexcept {
      Elt p = _pre.classes[c][0];
      Elt m = static_cast<Elt>(_b->size());
      return {p / m, p % m};
    }

    bool leq(Elt a, Elt b, Elt a2, Elt b2) const noexcept {
      return _pre.leq(pair(a, b), pair(a2, b2));
    }

    Preorder const& pair_preorder() const noexcept {
      return _pre;
    }

    //! Whether extra generating pairs were added beyond the tensor relations;
    //! such closures have no chain certificates.
    bool has_extra_relations() const noexcept {
      return _extra;
    }

    friend TensorPoset tensor_with_relations(SPosetPtr const&,
                                             SPosetPtr const&,
                                             Pairs const&,
                                             std::string,
                                             std::size_t);

   private:
    SPosetPtr _a;
    SPosetPtr _b;
    Preorder  _pre;
    SPosetPtr _result;
    bool      _extra = false;
  };

  namespace detail {
    inline void check_tensor_actors(SPoset const& A, SPoset const& B) {
      if (!A.right_actor() || !B.left_actor()) {
        throw ActorMismatch("tensor needs a right S-poset and a left S-poset");
      }
      if (!same_actor(A.right_actor(), B.left_actor())) {
        throw ActorMismatch(
            "the right actor of the left factor differs from the left actor "
            "of the right factor");
      }
    }

    // primitive edges of the tensor graph, as needed for certificates
    struct TensorEdges {
      std::vector<std::vector<Elt>> up_a;    // covers above each a
      std::vector<std::vector<Elt>> up_b;    // covers above each b
      // x -> every (a0, s) with a0 s = x
      std::vector<std::vector<std::pair<Elt, Elt>>> right_pre;
      // y -> every (s, y0) with s y0 = y
      std::vector<std::vector<std::pair<Elt, Elt>>> left_pre;
    };

    inline TensorEdges tensor_edges(SPoset const& A, SPoset const& B) {
      TensorEdges e;
      std::size_t k = A.right_actor()->size();
      e.up_a.resize(A.size());
      e.up_b.resize(B.size());
      for (auto [x, y] : A.order().covers()) {
        e.up_a[x].push_back(y);
      }
      for (auto [x, y] : B.order().covers()) {
        e.up_b[x].push_back(y);
      }
      e.right_pre.resize(A.size());
      for (Elt a = 0; a < A.size(); ++a) {
        for (Elt s = 0; s < k; ++s) {
          e.right_pre[A.act_right(a, s)].emplace_back(a, s);
        }
      }
      e.left_pre.resize(B.size());
      for (Elt s = 0; s < k; ++s) {
        for (Elt b = 0; b < B.size(); ++b) {
          e.left_pre[B.act_left(s, b)].emplace_back(s, b);
        }
      }
      return e;
    }

    enum class TensorStep { left_order, right_order, slide_right, slide_left };

    // slide_right: (a s, b) -> (a, s b); slide_left: (a, s b) -> (a s, b)
    struct TensorLabel {
      TensorStep kind = TensorStep::left_order;
      Elt        scalar = 0;
    };
  }  // namespace detail

  //! A (x)_S B with additional generating edges for the order. Vertices
  //! below |A||B| are pairs a |B| + b; the next `aux` vertices are auxiliary
  //! and only relay reachability between pairs. With no extra edges this is
  //! the tensor product; when the pairs related through the extra edges form
  //! a translate-closed relation R it is (A (x) B)/nu(R).
  inline TensorPoset tensor_with_relations(SPosetPtr const& A,
                                           SPosetPtr const& B,
                                           Pairs const&     extra,
                                           std::string      label = {},
                                           std::size_t      aux   = 0) {
    detail::check_tensor_actors(*A, *B);
    std::size_t na = A->size(), nb = B->size(), k = A->right_actor()->size();
    Digraph     g(na * nb + aux);
    auto        P = [nb](Elt a, Elt b) { return static_cast<Elt>(a * nb + b); };
    for (auto [x, y] : A->order().covers()) {
      for (Elt b = 0; b < nb; ++b) {
        g.add_edge(P(x, b), P(y, b));
      }
    }
    for (auto [x, y] : B->order().covers()) {
      for (Elt a = 0; a < na; ++a) {
        g.add_edge(P(a, x), P(a, y));
      }
    }
    for (Elt a = 0; a < na; ++a) {
      for (Elt s = 0; s < k; ++s) {
        Elt as = A->act_right(a, s);
        for (Elt b = 0; b < nb; ++b) {
          Elt sb = B->act_left(s, b);
          g.add_edge(P(as, b), P(a, sb));
          g.add_edge(P(a, sb), P(as, b));
        }
      }
    }
    for (auto [p, q] : extra) {
      g.add_edge(p, q);
    }

    TensorPoset T;
    T._a     = A;
    T._b     = B;
    T._extra = !extra.empty();
    T._pre   = aux == 0 ? reachability_preorder(g)
                        : restrict_preorder(reachability_preorder(g), na * nb);

    std::size_t              nc = T._pre.num_classes();
    std::vector<std::string> names;
    names.reserve(nc);
    for (Elt c = 0; c < nc; ++c) {
      auto [a, b] = T.representative(c);
      names.push_back(A->name(a) + "⊗" + B->name(b));
    }
    SPosetCandidate cand{
        Poset(T._pre.class_leq, std::move(names)), nullptr, {}, nullptr, {}};
    if (ActorPtr const& R = A->left_actor()) {
      cand.left = R;
      cand.left_act.resize(R->size() * nc);
      for (Elt r = 0; r < R->size(); ++r) {
        for (Elt c = 0; c < nc; ++c) {
          auto [a, b]                 = T.representative(c);
          cand.left_act[r * nc + c] = T.cls(A->act_left(r, a), b);
        }
      }
    }
    if (ActorPtr const& Tr = B->right_actor()) {
      cand.right = Tr;
      cand.right_act.resize(nc * Tr->size());
      for (Elt c = 0; c < nc; ++c) {
        auto [a, b] = T.representative(c);
        for (Elt t = 0; t < Tr->size(); ++t) {
          cand.right_act[c * Tr->size() + t] = T.cls(a, B->act_right(b, t));
        }
      }
    }
    if (label.empty() && !A->label().empty() && !B->label().empty()) {
      label = A->label() + "⊗" + B->label();
    }
    T._result = make_sposet(std::move(cand), std::move(label));
    return T;
  }

  //! A (x)_S B for a right S-poset A and a left S-poset B. Outer actions
  //! (A an (R,S)-poset, B an (S,T)-poset) carry over to the result.
  inline TensorPoset tensor(SPosetPtr const& A,
                            SPosetPtr const& B,
                            std::string      label = {}) {
    return tensor_with_relations(A, B, {}, std::move(label));
  }

  //! Rewrites a walk in the tensor graph as a chain, one row per run of
  //! order steps and one row per identification.
  inline TensorCertificate certificate_from_walk(
      TensorPoset const&                                        T,
      Elt                                                       a,
      Elt                                                       b,
      std::vector<std::pair<Elt, detail::TensorLabel>> const& walk) {
    SPoset const&     B   = *T.right_factor();
    Elt const         one = T.middle()->identity();
    Elt const         nb  = static_cast<Elt>(B.size());
    TensorCertificate cert{a, b, a, b, {}};
    Elt               x = a, y = b;
    bool              pending_order = false;
    auto              flush         = [&] {
      if (pending_order) {
        // x_prev <= x 1 and 1 y_prev <= 1 y
        cert.rows.push_back({x, one, one, y});
        pending_order = false;
      }
    };
    for (auto const& [v, label] : walk) {
      Elt nx = v / nb, ny = v % nb;
      switch (label.kind) {
        case detail::TensorStep::left_order:
        case detail::TensorStep::right_order:
          pending_order = true;
          break;
        case detail::TensorStep::slide_right:
          // (a0 s, y) -> (a0, s y): x <= a0 s, s y <= 1 (s y)
          flush();
          cert.rows.push_back({nx, label.scalar, one, ny});
          break;
        case detail::TensorStep::slide_left:
          // (a0, s y0) -> (a0 s, y0): x <= a0 1, 1 y <= s y0
          flush();
          cert.rows.push_back({x, one, label.scalar, ny});
          break;
      }
      x = nx;
      y = ny;
    }
    flush();
    if (cert.rows.empty()) {
      cert.rows.push_back({x, one, one, y});
    }
    cert.a_to = x;
    cert.b_to = y;
    return cert;
  }

  struct TensorVerdict {
    bool                             holds = false;
    std::optional<TensorCertificate> certificate;
  };

  //! Decides a (x) b <= a' (x) b'; on yes, a chain is rebuilt from a
  //! shortest walk in the generating graph.
  inline TensorVerdict
  tensor_leq(TensorPoset const& T, Elt a, Elt b, Elt a2, Elt b2) {
    TensorVerdict out;
    out.holds = T.leq(a, b, a2, b2);
    if (!out.holds || T.has_extra_relations()) {
      return out;
    }
    SPoset const&       A  = *T.left_factor();
    SPoset const&       B  = *T.right_factor();
    detail::TensorEdges e  = detail::tensor_edges(A, B);
    Elt const           nb = static_cast<Elt>(B.size());
    using detail::TensorLabel;
    using detail::TensorStep;
    auto walk = shortest_path<TensorLabel>(
        A.size() * B.size(), T.pair(a, b), T.pair(a2, b2), [&](Elt v, auto&& emit) {
          Elt x = v / nb, y = v % nb;
          for (Elt x2 : e.up_a[x]) {
            emit(x2 * nb + y, TensorLabel{TensorStep::left_order, 0});
          }
          for (Elt y2 : e.up_b[y]) {
            emit(x * nb + y2, TensorLabel{TensorStep::right_order, 0});
          }
          for (auto [a0, s] : e.right_pre[x]) {
            emit(a0 * nb + B.act_left(s, y),
                 TensorLabel{TensorStep::slide_right, s});
          }
          for (auto [s, y0] : e.left_pre[y]) {
            emit(A.act_right(x, s) * nb + y0,
                 TensorLabel{TensorStep::slide_left, s});
          }
        });
    if (!walk) {
      throw IsoCheckFailed("tensor_leq: closure and walk search disagree");
    }
    out.certificate = certificate_from_walk(T, a, b, *walk);
    return out;
  }

  //! Checks every inequality of a chain in its home structure, and that the
  //! endpoints are the queried pairs. Returns an empty string on success and
  //! a description of the first failure otherwise.
  inline std::string replay(TensorCertificate const& c,
                            SPoset const&            A,
                            SPoset const&            B) {
    if (c.rows.empty()) {
      return "empty chain";
    }
    std::size_t k = A.right_actor()->size();
    for (auto const& r : c.rows) {
      if (r.a >= A.size() || r.b_next >= B.size() || r.s >= k || r.t >= k) {
        return "index out of range";
      }
    }
    std::size_t n = c.rows.size();
    if (!A.leq(c.a, A.act_right(c.rows[0].a, c.rows[0].s))) {
      return "first row: a <= a1 s1 fails";
    }
    Elt b = c.b;
    for (std::size_t i = 0; i < n; ++i) {
      auto const& r = c.rows[i];
      if (!B.leq(B.act_left(r.s, b), B.act_left(r.t, r.b_next))) {
        return "row " + std::to_string(i + 1) + ": s b <= t b' fails";
      }
      b = r.b_next;
      if (i + 1 < n) {
        auto const& q = c.rows[i + 1];
        if (!A.leq(A.act_right(r.a, r.t), A.act_right(q.a, q.s))) {
          return "row " + std::to_string(i + 1) + ": a t <= a' s' fails";
        }
      }
    }
    if (b != c.b_to) {
      return "chain does not end at the queried right element";
    }
    auto const& last = c.rows.back();
    if (!A.leq(A.act_right(last.a, last.t), c.a_to)) {
      return "last row: an tn <= a' fails";
    }
    return {};
  }

  //! a (x) s |-> as, checked to be an order isomorphism A (x)_S S -> A.
  struct UnitIso {
    TensorPoset tensor;
    SPosetMap   map;
  };

  inline UnitIso unit_iso(SPosetPtr const& A) {
    if (!A->right_actor()) {
      throw ActorMismatch("unit_iso needs a right S-poset");
    }
    ActorPtr const& S = A->right_actor();
    UnitIso         out{tensor(A, regular_bi(S)), {}};
    TensorPoset const& T = out.tensor;
    std::vector<Elt>   f(T.size(), 0);
    std::vector<bool>  seen(T.size(), false);
    for (Elt a = 0; a < A->size(); ++a) {
      for (Elt s = 0; s < S->size(); ++s) {
        Elt c = T.cls(a, s), v = A->act_right(a, s);
        if (seen[c] && f[c] != v) {
          throw IsoCheckFailed("unit_iso: a (x) s |-> as is not well defined");
        }
        seen[c] = true;
        f[c]    = v;
      }
    }
    out.map = analyze_map(f, T.result(), A);
    if (!out.map.flags.order_embedding || !out.map.flags.surjective) {
      throw IsoCheckFailed("unit_iso: canonical map is not an order isomorphism");
    }
    return out;
  }

  //! s (x) a |-> sa, checked to be an order isomorphism S (x)_S A -> A.
  inline UnitIso left_unit_iso(SPosetPtr const& A) {
    if (!A->left_actor()) {
      throw ActorMismatch("left_unit_iso needs a left S-poset");
    }
    ActorPtr const&    S = A->left_actor();
    UnitIso            out{tensor(regular_bi(S), A), {}};
    TensorPoset const& T = out.tensor;
    std::vector<Elt>   f(T.size(), 0);
    std::vector<bool>  seen(T.size(), false);
    for (Elt s = 0; s < S->size(); ++s) {
      for (Elt a = 0; a < A->size(); ++a) {
        Elt c = T.cls(s, a), v = A->act_left(s, a);
        if (seen[c] && f[c] != v) {
          throw IsoCheckFailed("left_unit_iso: map is not well defined");
        }
        seen[c] = true;
        f[c]    = v;
      }
    }
    out.map = analyze_map(f, T.result(), A);
    if (!out.map.flags.order_embedding || !out.map.flags.surjective) {
      throw IsoCheckFailed("left_unit_iso: map is not an order isomorphism");
    }
    return out;
  }

  //! (a (x) b) (x) c |-> a (x) (b (x) c).
  struct AssocIso {
    TensorPoset      ab;
    TensorPoset      ab_c;
    TensorPoset      bc;
    TensorPoset      a_bc;
    std::vector<Elt> map;  // class of (A(x)B)(x)C -> class of A(x)(B(x)C)
  };

  inline AssocIso
  assoc_iso(SPosetPtr const& A, SPosetPtr const& B, SPosetPtr const& C) {
    AssocIso out;
    out.ab   = tensor(A, B);
    out.ab_c = tensor(out.ab.result(), C);
    out.bc   = tensor(B, C);
    out.a_bc = tensor(A, out.bc.result());
    std::size_t       n = out.ab_c.size();
    std::vector<bool> seen(n, false);
    out.map.assign(n, 0);
    for (Elt a = 0; a < A->size(); ++a) {
      for (Elt b = 0; b < B->size(); ++b) {
        for (Elt c = 0; c < C->size(); ++c) {
          Elt l = out.ab_c.cls(out.ab.cls(a, b), c);
          Elt r = out.a_bc.cls(a, out.bc.cls(b, c));
          if (seen[l] && out.map[l] != r) {
            throw IsoCheckFailed("assoc_iso: map is not well defined at ("
                                 + A->name(a) + ", " + B->name(b) + ", "
                                 + C->name(c) + ")");
          }
          seen[l]    = true;
          out.map[l] = r;
        }
      }
    }
    if (out.a_bc.size() != n) {
      throw IsoCheckFailed("assoc_iso: the two sides have different sizes");
    }
    MapFlags fl = poset_map_flags(
        out.map, out.ab_c.result()->order(), out.a_bc.result()->order());
    if (!fl.order_embedding || !fl.surjective) {
      throw IsoCheckFailed("assoc_iso: map is not an order isomorphism");
    }
    return out;
  }

  //! f (x) 1 : A (x) B -> A' (x) B.
  struct InducedMap {
    TensorPoset source;
    TensorPoset target;
    SPosetMap   map;
  };

  inline InducedMap induced_map(SPosetMap const& f, SPosetPtr const& B) {
    InducedMap out{tensor(f.source, B), tensor(f.target, B), {}};
    std::vector<Elt> g(out.source.size(), 0);
    for (Elt a = 0; a < f.source->size(); ++a) {
      for (Elt b = 0; b < B->size(); ++b) {
        g[out.source.cls(a, b)] = out.target.cls(f(a), b);
      }
    }
    for (Elt a = 0; a < f.source->size(); ++a) {
      for (Elt b = 0; b < B->size(); ++b) {
        if (g[out.source.cls(a, b)] != out.target.cls(f(a), b)) {
          throw IsoCheckFailed("induced_map: f (x) 1 is not well defined");
        }
      }
    }
    out.map = analyze_map(std::move(g), out.source.result(), out.target.result());
    return out;
  }

  //! 1 (x) f : A (x) B -> A (x) B'.
  inline InducedMap induced_map(SPosetPtr const& A, SPosetMap const& f) {
    InducedMap out{tensor(A, f.source), tensor(A, f.target), {}};
    std::vector<Elt> g(out.source.size(), 0);
    for (Elt a = 0; a < A->size(); ++a) {
      for (Elt b = 0; b < f.source->size(); ++b) {
        g[out.source.cls(a, b)] = out.target.cls(a, f(b));
      }
    }
    for (Elt a = 0; a < A->size(); ++a) {
      for (Elt b = 0; b < f.source->size(); ++b) {
        if (g[out.source.cls(a, b)] != out.target.cls(a, f(b))) {
          throw IsoCheckFailed("induced_map: 1 (x) f is not well defined");
        }
      }
    }
    out.map = analyze_map(std::move(g), out.source.result(), out.target.result());
    return out;
  }

}  // namespace pomalg

#endif  // POMALG_TENSOR_HPP_
