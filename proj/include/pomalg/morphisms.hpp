// pomalg - finite partially ordered monoids and their acts
//
// Exhaustive search over S-poset morphisms, used by every universal-property
// check in the library.

#ifndef POMALG_MORPHISMS_HPP_
#define POMALG_MORPHISMS_HPP_

#include <cstddef>   // for size_t
#include <optional>  // for optional
#include <vector>    // for vector

#include "core.hpp"
#include "errors.hpp"

namespace pomalg {

  namespace detail {
    template <typename Visit>
    bool morphism_search(SPoset const&            X,
                         SPoset const&            Y,
                         std::vector<Elt>&        f,
                         std::vector<bool>&       set,
                         std::vector<Elt> const&  fixed,
                         Elt                      next,
                         Visit&                   visit) {
      constexpr Elt FREE = static_cast<Elt>(-1);
      std::size_t   n    = X.size();
      while (next < n && set[next]) {
        ++next;
      }
      if (next == n) {
        return visit(f);
      }
      for (Elt y = 0; y < Y.size(); ++y) {
        if (!fixed.empty() && fixed[next] != FREE && fixed[next] != y) {
          continue;
        }
        // assign next -> y and everything it forces through the actions
        std::vector<Elt> assigned;
        std::vector<Elt> work{next};
        f[next]   = y;
        set[next] = true;
        assigned.push_back(next);
        bool ok = true;
        while (ok && !work.empty()) {
          Elt x = work.back();
          work.pop_back();
          auto force = [&](Elt x2, Elt y2) {
            if (set[x2]) {
              ok = ok && f[x2] == y2;
            } else if (!fixed.empty() && fixed[x2] != FREE && fixed[x2] != y2) {
              ok = false;
            } else {
              f[x2]   = y2;
              set[x2] = true;
              assigned.push_back(x2);
              work.push_back(x2);
            }
          };
          if (X.right_actor()) {
            for (Elt s = 0; s < X.right_actor()->size() && ok; ++s) {
              force(X.act_right(x, s), Y.act_right(f[x], s));
            }
          }
          if (X.left_actor()) {
            for (Elt s = 0; s < X.left_actor()->size() && ok; ++s) {
              force(X.act_left(s, x), Y.act_left(s, f[x]));
            }
          }
        }
        if (ok) {
          for (Elt x : assigned) {
            for (Elt z = 0; z < n && ok; ++z) {
              if (!set[z]) {
                continue;
              }
              if (X.leq(x, z) && !Y.leq(f[x], f[z])) {
                ok = false;
              }
              if (X.leq(z, x) && !Y.leq(f[z], f[x])) {
                ok = false;
              }
            }
          }
        }
        if (ok && !morphism_search(X, Y, f, set, fixed, next + 1, visit)) {
          for (Elt x : assigned) {
            set[x] = false;
          }
          return false;
        }
        for (Elt x : assigned) {
          set[x] = false;
        }
      }
      return true;
    }
  }  // namespace detail

  //! Calls visit(f) for every monotone equivariant f: X -> Y (X and Y must
  //! carry the same actions), in lexicographic order of the assignment.
  //! `fixed[x]`, when given and not -1, pins the image of x. Returns false if
  //! visit stopped the search by returning false.
  template <typename Visit>
  bool for_each_morphism(SPoset const&           X,
                         SPoset const&           Y,
                         Visit&&                 visit,
                         std::vector<Elt> const& fixed = {}) {
    if (!same_actor(X.right_actor(), Y.right_actor())
        || !same_actor(X.left_actor(), Y.left_actor())) {
      throw ActorMismatch("morphism search between S-posets over different actors");
    }
    std::vector<Elt>  f(X.size(), 0);
    std::vector<bool> set(X.size(), false);
    auto              wrapped = [&](std::vector<Elt> const& g) -> bool {
      return visit(g);
    };
    return detail::morphism_search(X, Y, f, set, fixed, 0, wrapped);
  }

  inline std::vector<std::vector<Elt>> all_morphisms(SPoset const& X,
                                                     SPoset const& Y) {
    std::vector<std::vector<Elt>> out;
    for_each_morphism(X, Y, [&](std::vector<Elt> const& f) {
      out.push_back(f);
      return true;
    });
    return out;
  }

  //! An order isomorphism X -> Y commuting with the actions, if one exists.
  inline std::optional<std::vector<Elt>> find_isomorphism(SPoset const& X,
                                                          SPoset const& Y) {
    if (X.size() != Y.size()) {
      return std::nullopt;
    }
    std::optional<std::vector<Elt>> out;
    for_each_morphism(X, Y, [&](std::vector<Elt> const& f) {
      if (poset_map_flags(f, X.order(), Y.order()).order_embedding) {
        out = f;
        return false;
      }
      return true;
    });
    return out;
  }

}  // namespace pomalg

#endif  // POMALG_MORPHISMS_HPP_
