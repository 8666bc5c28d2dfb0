// pomalg - finite partially ordered monoids and their acts
//
// The preorder <=_alpha(R) induced on an S-poset by a relation R, the
// congruences nu(R) and theta(R), and quotients by them.
//
// <=_alpha(R) is the least preorder containing the order of A and every
// translate (t x s, t x' s) of a pair (x, x') in R. It is automatically
// closed under the action, since translates of translates are translates
// and the action is monotone. So the whole fixpoint is one reachability
// closure on the digraph whose edges are the Hasse covers of A plus the
// translated generators.

#ifndef POMALG_CONGRUENCE_HPP_
#define POMALG_CONGRUENCE_HPP_

#include <algorithm>  // for max
#include <optional>   // for optional
#include <string>    // for string
#include <utility>   // for pair
#include <vector>    // for vector

#include "core.hpp"
#include "errors.hpp"
#include "relation.hpp"

namespace pomalg {

  struct InducedPreorder {
    SPosetPtr base;
    Pairs     generators;
    Preorder  closure;

    bool leq(Elt a, Elt b) const noexcept {
      return closure.leq(a, b);
    }

    bool equivalent(Elt a, Elt b) const noexcept {
      return closure.equivalent(a, b);
    }

    BitMatrix relation() const {
      return closure.vertex_relation();
    }
  };

  namespace detail {
    //! Calls f(t x s) for every available combination of scalars.
    template <typename F>
    void for_each_translate(SPoset const& A, Elt x, F&& f) {
      std::size_t nl = A.left_actor() ? A.left_actor()->size() : 1;
      std::size_t nr = A.right_actor() ? A.right_actor()->size() : 1;
      for (Elt t = 0; t < nl; ++t) {
        Elt y = A.left_actor() ? A.act_left(t, x) : x;
        for (Elt s = 0; s < nr; ++s) {
          f(t, s, A.right_actor() ? A.act_right(y, s) : y);
        }
      }
    }

    inline Digraph alpha_graph(SPoset const& A, Pairs const& R) {
      Digraph g(A.size());
      for (auto [a, b] : A.order().covers()) {
        g.add_edge(a, b);
      }
      for (auto [x, y] : R) {
        if (x >= A.size() || y >= A.size()) {
          throw Error("generator pair outside the carrier");
        }
        std::vector<Elt> tx;
        for_each_translate(A, x, [&](Elt, Elt, Elt z) { tx.push_back(z); });
        std::size_t i = 0;
        for_each_translate(A, y, [&](Elt, Elt, Elt z) {
          g.add_edge(tx[i++], z);
        });
      }
      return g;
    }
  }  // namespace detail

  inline InducedPreorder alpha_preorder(SPosetPtr const& A, Pairs R) {
    Preorder pre = reachability_preorder(detail::alpha_graph(*A, R));
    return InducedPreorder{A, std::move(R), std::move(pre)};
  }

  //! A quotient of an S-poset by an S-poset congruence.
  struct Quotient {
    SPosetPtr                     base;
    SPosetPtr                     quotient;
    std::vector<Elt>              projection;  // element -> class
    std::vector<std::vector<Elt>> classes;

    std::size_t size() const noexcept {
      return classes.size();
    }

    SPosetMap projection_map() const {
      return analyze_map(projection, base, quotient);
    }
  };

  //! Quotient of A by the symmetrisation of a preorder that contains the
  //! order of A and is closed under the action(s). Classes are named after
  //! their least member.
  inline Quotient quotient_by_preorder(SPosetPtr const& A,
                                       Preorder const&  pre,
                                       std::string      label = {}) {
    std::size_t              k = pre.num_classes();
    std::vector<std::string> names;
    names.reserve(k);
    for (auto const& cls : pre.classes) {
      names.push_back(A->name(cls[0]));
    }
    SPosetCandidate c{Poset(pre.class_leq, std::move(names)),
                      A->left_actor(),
                      {},
                      A->right_actor(),
                      {}};
    if (A->left_actor()) {
      std::size_t m = A->left_actor()->size();
      c.left_act.resize(m * k);
      for (Elt s = 0; s < m; ++s) {
        for (Elt i = 0; i < k; ++i) {
          c.left_act[s * k + i]
              = pre.component[A->act_left(s, pre.classes[i][0])];
        }
      }
    }
    if (A->right_actor()) {
      std::size_t m = A->right_actor()->size();
      c.right_act.resize(k * m);
      for (Elt i = 0; i < k; ++i) {
        for (Elt s = 0; s < m; ++s) {
          c.right_act[i * m + s]
              = pre.component[A->act_right(pre.classes[i][0], s)];
        }
      }
    }
    return Quotient{A,
                    make_sposet(std::move(c), std::move(label)),
                    pre.component,
                    pre.classes};
  }

  inline Quotient nu_congruence(SPosetPtr const& A, Pairs R) {
    InducedPreorder pre = alpha_preorder(A, std::move(R));
    return quotient_by_preorder(A, pre.closure, A->label());
  }

  inline Quotient theta_congruence(SPosetPtr const& A, Pairs R) {
    std::size_t n = R.size();
    for (std::size_t i = 0; i < n; ++i) {
      R.emplace_back(R[i].second, R[i].first);
    }
    return nu_congruence(A, std::move(R));
  }

  struct CongruenceCheck {
    bool                               holds = true;
    std::optional<std::pair<Elt, Elt>> witness;
  };

  //! Whether the act congruence with the given classes (element -> class
  //! id) is an S-poset congruence: a ~ b whenever a <=_rho b <=_rho a. On
  //! failure the witness satisfies that and is not ~-related. Throws
  //! NotActCongruence when the partition is not compatible with the action.
  inline CongruenceCheck is_sposet_congruence(SPoset const&           A,
                                              std::vector<Elt> const& part) {
    std::size_t n = A.size();
    if (part.size() != n) {
      throw Error("is_sposet_congruence: partition has wrong length");
    }
    for (Elt a = 0; a < n; ++a) {
      for (Elt b = a + 1; b < n; ++b) {
        if (part[a] != part[b]) {
          continue;
        }
        if (A.right_actor()) {
          for (Elt s = 0; s < A.right_actor()->size(); ++s) {
            if (part[A.act_right(a, s)] != part[A.act_right(b, s)]) {
              throw NotActCongruence(
                  a, b, s, A.name(a) + " ~ " + A.name(b) + " but not after acting by "
                               + A.right_actor()->name(s));
            }
          }
        }
        if (A.left_actor()) {
          for (Elt s = 0; s < A.left_actor()->size(); ++s) {
            if (part[A.act_left(s, a)] != part[A.act_left(s, b)]) {
              throw NotActCongruence(
                  a, b, s, A.name(a) + " ~ " + A.name(b) + " but not after acting by "
                               + A.left_actor()->name(s));
            }
          }
        }
      }
    }
    Digraph g(n);
    for (auto [a, b] : A.order().covers()) {
      g.add_edge(a, b);
    }
    // chain each class into a cycle
    Elt m = 0;
    for (Elt c : part) {
      m = std::max(m, c + 1);
    }
    std::vector<std::optional<Elt>> first(m), last(m);
    for (Elt a = 0; a < n; ++a) {
      Elt c = part[a];
      if (last[c]) {
        g.add_edge(*last[c], a);
      } else {
        first[c] = a;
      }
      last[c] = a;
    }
    for (Elt c = 0; c < m; ++c) {
      if (first[c]) {
        g.add_edge(*last[c], *first[c]);
      }
    }
    Preorder        pre = reachability_preorder(g);
    CongruenceCheck out;
    for (auto const& cls : pre.classes) {
      for (Elt b : cls) {
        if (part[b] != part[cls[0]]) {
          out.holds   = false;
          out.witness = std::make_pair(cls[0], b);
          return out;
        }
      }
    }
    return out;
  }

}  // namespace pomalg

#endif  // POMALG_CONGRUENCE_HPP_
