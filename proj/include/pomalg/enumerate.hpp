// pomalg - finite partially ordered monoids and their acts
//
// Exhaustive enumeration of small pomonoids, subpomonoids and S-posets, plus
// seeded random S-posets. These are the inputs of every bounded property
// suite. Pomonoids and S-posets are reported once per isomorphism class; the
// order of results is deterministic.

#ifndef POMALG_ENUMERATE_HPP_
#define POMALG_ENUMERATE_HPP_

#include <algorithm>  // for next_permutation, sort, min
#include <cstddef>    // for size_t
#include <cstdint>    // for uint64_t
#include <functional> // for function
#include <random>     // for mt19937_64, uniform_int_distribution
#include <set>        // for set
#include <vector>     // for vector

#include "congruence.hpp"
#include "core.hpp"
#include "errors.hpp"

namespace pomalg {

  struct EnumerationLimits {
    std::size_t max_pomonoid = 4;
    std::size_t max_sposet   = 3;
  };

  struct MonoidFilter {
    bool commutative  = false;
    bool cancellative = false;
  };

  namespace detail {
    // Smallest relabelling of a table (and optionally an order) over all
    // permutations fixing `fixed` elements at the front.
    inline std::vector<Elt> canonical_form(std::size_t             n,
                                           std::vector<Elt> const& table,
                                           BitMatrix const*        order,
                                           std::size_t             fixed) {
      std::vector<Elt> perm(n), inv(n), best, cur;
      for (Elt i = 0; i < n; ++i) {
        perm[i] = i;
      }
      do {
        for (Elt i = 0; i < n; ++i) {
          inv[perm[i]] = i;
        }
        cur.clear();
        for (Elt i = 0; i < n; ++i) {
          for (Elt j = 0; j < n; ++j) {
            cur.push_back(perm[table[inv[i] * n + inv[j]]]);
          }
        }
        if (order != nullptr) {
          for (Elt i = 0; i < n; ++i) {
            for (Elt j = 0; j < n; ++j) {
              cur.push_back(order->get(inv[i], inv[j]));
            }
          }
        }
        if (best.empty() || cur < best) {
          best = cur;
        }
      } while (std::next_permutation(perm.begin() + fixed, perm.end()));
      return best;
    }

    constexpr Elt UNSET = static_cast<Elt>(-1);

    inline bool partial_associative(std::size_t n, std::vector<Elt> const& t) {
      for (Elt x = 0; x < n; ++x) {
        for (Elt y = 0; y < n; ++y) {
          Elt xy = t[x * n + y];
          if (xy == UNSET) {
            continue;
          }
          for (Elt z = 0; z < n; ++z) {
            Elt yz = t[y * n + z];
            if (yz == UNSET) {
              continue;
            }
            Elt l = t[xy * n + z], r = t[x * n + yz];
            if (l != UNSET && r != UNSET && l != r) {
              return false;
            }
          }
        }
      }
      return true;
    }

    inline void monoid_search(std::size_t                    n,
                              MonoidFilter                   filter,
                              std::vector<Elt>&              t,
                              std::size_t                    cell,
                              std::vector<std::vector<Elt>>& out) {
      if (cell == n * n) {
        out.push_back(t);
        return;
      }
      Elt i = static_cast<Elt>(cell / n), j = static_cast<Elt>(cell % n);
      if (i == 0 || j == 0 || t[cell] != UNSET) {
        monoid_search(n, filter, t, cell + 1, out);
        return;
      }
      for (Elt v = 0; v < n; ++v) {
        if (filter.cancellative) {
          bool clash = false;
          for (Elt k = 0; k < n && !clash; ++k) {
            clash = (k != j && t[i * n + k] == v) || (k != i && t[k * n + j] == v);
          }
          if (clash) {
            continue;
          }
        }
        t[cell] = v;
        if (filter.commutative) {
          t[j * n + i] = v;
        }
        if (partial_associative(n, t)) {
          monoid_search(n, filter, t, cell + 1, out);
        }
        t[cell] = UNSET;
        if (filter.commutative) {
          t[j * n + i] = UNSET;
        }
      }
    }

    // Backtracking over the unordered pairs: each is left incomparable or
    // ordered one way, and every decision is closed under transitivity and
    // the given maps. Every partial order containing `forced` and closed
    // under the maps is produced exactly once.
    class OrderEnumerator {
     public:
      OrderEnumerator(std::size_t                   n,
                      std::vector<std::vector<Elt>> maps,
                      Pairs const&                  forced)
          : _n(n), _maps(std::move(maps)), _forced(forced) {}

      std::vector<BitMatrix> run() {
        std::vector<BitMatrix> out;
        BitMatrix              leq(_n);
        leq.set_diagonal();
        BitMatrix none(_n);
        for (auto [a, b] : _forced) {
          if (!add(leq, none, a, b)) {
            return out;
          }
        }
        search(leq, none, 0, 1, out);
        return out;
      }

     private:
      bool add(BitMatrix& leq, BitMatrix const& none, Elt a, Elt b) const {
        std::vector<std::pair<Elt, Elt>> work{{a, b}};
        while (!work.empty()) {
          auto [x, y] = work.back();
          work.pop_back();
          if (leq.get(x, y)) {
            continue;
          }
          // x <= y plus transitivity: c <= x and y <= d give c <= d
          for (Elt c = 0; c < _n; ++c) {
            if (!leq.get(c, x)) {
              continue;
            }
            for (Elt d = 0; d < _n; ++d) {
              if (!leq.get(y, d) || leq.get(c, d)) {
                continue;
              }
              if (leq.get(d, c) || none.get(std::min(c, d), std::max(c, d))) {
                return false;
              }
              leq.set(c, d);
              for (auto const& m : _maps) {
                work.emplace_back(m[c], m[d]);
              }
            }
          }
        }
        return true;
      }

      void search(BitMatrix&              leq,
                  BitMatrix&              none,
                  Elt                     i,
                  Elt                     j,
                  std::vector<BitMatrix>& out) const {
        while (i < _n && (j >= _n || leq.get(i, j) || leq.get(j, i))) {
          if (j >= _n) {
            ++i;
            j = i + 1;
          } else {
            ++j;
          }
        }
        if (i >= _n) {
          out.push_back(leq);
          return;
        }
        none.set(i, j);
        search(leq, none, i, j + 1, out);
        none.set(i, j, false);
        for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
          BitMatrix next = leq;
          if (add(next, none, a, b)) {
            search(next, none, i, j + 1, out);
          }
        }
      }

      std::size_t                   _n;
      std::vector<std::vector<Elt>> _maps;
      Pairs                         _forced;
    };
  }  // namespace detail

  //! Every monoid table on {0, ..., n-1} with identity 0, one per
  //! isomorphism class.
  inline std::vector<std::vector<Elt>> monoid_tables(std::size_t  n,
                                                     MonoidFilter filter = {}) {
    std::vector<std::vector<Elt>> out;
    if (n == 0) {
      return out;
    }
    std::vector<Elt> t(n * n, detail::UNSET);
    for (Elt x = 0; x < n; ++x) {
      t[x] = x;
      t[x * n] = x;
    }
    std::vector<std::vector<Elt>> raw;
    detail::monoid_search(n, filter, t, 0, raw);
    std::set<std::vector<Elt>> seen;
    for (auto& table : raw) {
      if (seen.insert(detail::canonical_form(n, table, nullptr, 1)).second) {
        out.push_back(std::move(table));
      }
    }
    return out;
  }

  //! Every partial order on a table's carrier compatible with both
  //! multiplications.
  inline std::vector<BitMatrix>
  compatible_orders(std::size_t n, std::vector<Elt> const& table) {
    std::vector<std::vector<Elt>> maps;
    for (Elt s = 0; s < n; ++s) {
      std::vector<Elt> l(n), r(n);
      for (Elt x = 0; x < n; ++x) {
        l[x] = table[s * n + x];
        r[x] = table[x * n + s];
      }
      maps.push_back(std::move(l));
      maps.push_back(std::move(r));
    }
    return detail::OrderEnumerator(n, std::move(maps), {}).run();
  }

  //! Every pomonoid with exactly n elements, one per isomorphism class.
  //! Element 0 is the identity. Throws CapExceeded above the configured
  //! maximum.
  inline std::vector<Pomonoid> enumerate_pomonoids(std::size_t       n,
                                                   EnumerationLimits lim = {},
                                                   MonoidFilter      filter = {}) {
    if (n > lim.max_pomonoid) {
      throw CapExceeded(n, lim.max_pomonoid);
    }
    std::vector<Pomonoid> out;
    // identity 1, the others a, b, c, ...
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
      names.push_back(i == 0 ? "1"
                      : i <= 26 ? std::string(1, static_cast<char>('a' + i - 1))
                                : "x" + std::to_string(i));
    }
    for (auto const& table : monoid_tables(n, filter)) {
      std::set<std::vector<Elt>> seen;
      for (auto& order : compatible_orders(n, table)) {
        if (!seen.insert(detail::canonical_form(n, table, &order, 1)).second) {
          continue;
        }
        out.emplace_back(
            PomonoidCandidate{Poset(std::move(order), names), table, 0},
            "P" + std::to_string(n) + "." + std::to_string(out.size()));
      }
    }
    return out;
  }

  //! Pomonoids of every size from 1 to n.
  inline std::vector<Pomonoid> enumerate_pomonoids_upto(std::size_t       n,
                                                        EnumerationLimits lim = {},
                                                        MonoidFilter filter = {}) {
    std::vector<Pomonoid> out;
    for (std::size_t k = 1; k <= n; ++k) {
      for (auto& p : enumerate_pomonoids(k, lim, filter)) {
        out.push_back(std::move(p));
      }
    }
    return out;
  }

  //! Every subpomonoid of S, ordered by member bitmask.
  inline std::vector<SubPomonoid> enumerate_subpomonoids(ActorPtr const& S) {
    std::size_t              n = S->size();
    std::vector<SubPomonoid> out;
    if (n > 20) {
      throw CapExceeded(n, 20);
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
      if (!((mask >> S->identity()) & 1U)) {
        continue;
      }
      bool closed = true;
      for (Elt s = 0; s < n && closed; ++s) {
        for (Elt t = 0; t < n && closed; ++t) {
          if (((mask >> s) & 1U) && ((mask >> t) & 1U)) {
            closed = (mask >> S->mult(s, t)) & 1U;
          }
        }
      }
      if (closed) {
        std::vector<Elt> members;
        for (Elt s = 0; s < n; ++s) {
          if ((mask >> s) & 1U) {
            members.push_back(s);
          }
        }
        out.emplace_back(S, std::move(members));
      }
    }
    return out;
  }

  //! Every isomorphism of pomonoids U -> V, as images of the elements of U.
  inline std::vector<std::vector<Elt>> pomonoid_isomorphisms(Pomonoid const& U,
                                                             Pomonoid const& V) {
    std::vector<std::vector<Elt>> out;
    if (U.size() != V.size()) {
      return out;
    }
    std::vector<Elt> perm(V.size());
    for (Elt i = 0; i < perm.size(); ++i) {
      perm[i] = i;
    }
    do {
      if (perm[U.identity()] != V.identity()) {
        continue;
      }
      bool ok = true;
      for (Elt a = 0; a < U.size() && ok; ++a) {
        for (Elt b = 0; b < U.size() && ok; ++b) {
          ok = V.mult(perm[a], perm[b]) == perm[U.mult(a, b)]
               && V.leq(perm[a], perm[b]) == U.leq(a, b);
        }
      }
      if (!ok) {
        continue;
      }
      PomonoidMapReport r = analyze_pomonoid_map(perm, U, V);
      if (r.homomorphism && r.order_embedding) {
        out.push_back(perm);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }

  namespace detail {
    inline void action_search(std::size_t                    n,
                              Pomonoid const&                S,
                              std::vector<Elt>&              act,
                              std::size_t                    cell,
                              std::vector<std::vector<Elt>>& out) {
      std::size_t k = S.size();
      if (cell == n * k) {
        out.push_back(act);
        return;
      }
      if (act[cell] != UNSET) {
        action_search(n, S, act, cell + 1, out);
        return;
      }
      for (Elt v = 0; v < n; ++v) {
        act[cell] = v;
        bool ok   = true;
        for (Elt a = 0; a < n && ok; ++a) {
          for (Elt s = 0; s < k && ok; ++s) {
            Elt as = act[a * k + s];
            if (as == UNSET) {
              continue;
            }
            for (Elt t = 0; t < k && ok; ++t) {
              Elt l = act[as * k + t], r = act[a * k + S.mult(s, t)];
              ok = l == UNSET || r == UNSET || l == r;
            }
          }
        }
        if (ok) {
          action_search(n, S, act, cell + 1, out);
        }
        act[cell] = UNSET;
      }
    }
  }  // namespace detail

  //! Every right S-poset with exactly n elements, one per isomorphism class
  //! (up to relabelling of the carrier).
  inline std::vector<SPosetPtr> enumerate_right_sposets(ActorPtr const&   S,
                                                        std::size_t       n,
                                                        EnumerationLimits lim = {}) {
    if (n > lim.max_sposet) {
      throw CapExceeded(n, lim.max_sposet);
    }
    std::vector<SPosetPtr> out;
    if (n == 0) {
      return out;
    }
    std::size_t      k = S->size();
    std::vector<Elt> act(n * k, detail::UNSET);
    for (Elt a = 0; a < n; ++a) {
      act[a * k + S->identity()] = a;
    }
    std::vector<std::vector<Elt>> actions;
    detail::action_search(n, *S, act, 0, actions);

    std::set<std::vector<Elt>> seen;
    for (auto const& table : actions) {
      std::vector<std::vector<Elt>> maps;
      for (Elt s = 0; s < k; ++s) {
        std::vector<Elt> m(n);
        for (Elt a = 0; a < n; ++a) {
          m[a] = table[a * k + s];
        }
        maps.push_back(std::move(m));
      }
      Pairs forced;
      for (Elt s = 0; s < k; ++s) {
        for (Elt t = 0; t < k; ++t) {
          if (s != t && S->leq(s, t)) {
            for (Elt a = 0; a < n; ++a) {
              forced.emplace_back(table[a * k + s], table[a * k + t]);
            }
          }
        }
      }
      for (auto& order :
           detail::OrderEnumerator(n, std::move(maps), forced).run()) {
        // canonical key: relabel carrier, compare action then order
        std::vector<Elt> perm(n), inv(n), best, cur;
        for (Elt i = 0; i < n; ++i) {
          perm[i] = i;
        }
        do {
          for (Elt i = 0; i < n; ++i) {
            inv[perm[i]] = i;
          }
          cur.clear();
          for (Elt a = 0; a < n; ++a) {
            for (Elt s = 0; s < k; ++s) {
              cur.push_back(perm[table[inv[a] * k + s]]);
            }
          }
          for (Elt a = 0; a < n; ++a) {
            for (Elt b = 0; b < n; ++b) {
              cur.push_back(order.get(inv[a], inv[b]));
            }
          }
          if (best.empty() || cur < best) {
            best = cur;
          }
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (!seen.insert(best).second) {
          continue;
        }
        out.push_back(make_sposet(
            SPosetCandidate{Poset(std::move(order), {}), nullptr, {}, S, table},
            "X" + std::to_string(n) + "." + std::to_string(out.size())));
      }
    }
    return out;
  }

  //! Right S-posets of every size from 1 to n.
  inline std::vector<SPosetPtr>
  enumerate_right_sposets_upto(ActorPtr const&   S,
                               std::size_t       n,
                               EnumerationLimits lim = {}) {
    std::vector<SPosetPtr> out;
    for (std::size_t k = 1; k <= n; ++k) {
      for (auto& x : enumerate_right_sposets(S, k, lim)) {
        out.push_back(std::move(x));
      }
    }
    return out;
  }

  //! The left S-poset with the same carrier and order as a right
  //! S^op-poset; `S` must be the opposite of X's actor.
  inline SPosetPtr as_left_sposet(SPoset const& X, ActorPtr const& S) {
    std::size_t      n = X.size(), k = S->size();
    std::vector<Elt> act(k * n);
    for (Elt s = 0; s < k; ++s) {
      for (Elt a = 0; a < n; ++a) {
        act[s * n + a] = X.act_right(a, s);
      }
    }
    return make_sposet(SPosetCandidate{X.order(), S, act, nullptr, {}},
                       X.label());
  }

  //! Every left S-poset with exactly n elements, up to isomorphism.
  inline std::vector<SPosetPtr> enumerate_left_sposets(ActorPtr const&   S,
                                                       std::size_t       n,
                                                       EnumerationLimits lim = {}) {
    ActorPtr               op = std::make_shared<Pomonoid const>(opposite(*S));
    std::vector<SPosetPtr> out;
    for (auto const& X : enumerate_right_sposets(op, n, lim)) {
      out.push_back(as_left_sposet(*X, S));
    }
    return out;
  }

  //! A random right S-poset with at most `max_size` elements: a quotient of
  //! one or two copies of S (or of a point) by nu of a few random pairs.
  template <typename Rng>
  SPosetPtr random_right_sposet(ActorPtr const& S, std::size_t max_size, Rng& rng) {
    std::size_t k = S->size();
    for (;;) {
      std::uniform_int_distribution<int> copies_dist(1, 2);
      std::size_t copies = static_cast<std::size_t>(copies_dist(rng));
      std::size_t n      = copies * k;
      // disjoint union of `copies` regular acts
      BitMatrix        leq(n);
      std::vector<Elt> act(n * k);
      for (std::size_t c = 0; c < copies; ++c) {
        for (Elt x = 0; x < k; ++x) {
          for (Elt y = 0; y < k; ++y) {
            leq.set(c * k + x, c * k + y, S->leq(x, y));
            act[(c * k + x) * k + y] = static_cast<Elt>(c * k + S->mult(x, y));
          }
        }
      }
      SPosetPtr base = make_sposet(
          SPosetCandidate{Poset(std::move(leq), {}), nullptr, {}, S, act});
      std::uniform_int_distribution<Elt> pick(0, static_cast<Elt>(n - 1));
      std::uniform_int_distribution<int> count(0, 3);
      Pairs                              R;
      for (int i = count(rng); i > 0; --i) {
        R.emplace_back(pick(rng), pick(rng));
      }
      Quotient q = nu_congruence(base, R);
      if (q.size() <= max_size) {
        return q.quotient;
      }
    }
  }

}  // namespace pomalg

#endif  // POMALG_ENUMERATE_HPP_
