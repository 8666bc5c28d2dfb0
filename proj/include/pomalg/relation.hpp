// pomalg - finite partially ordered monoids and their acts
//
// Dense boolean relations and the reflexive-transitive closure kernel that
// every order-generating construction in the library reduces to: order
// closure of user input, the preorders behind nu(R)/theta(R), tensor orders,
// pushouts, direct limits and free extensions.
//
// The closure is computed by condensing the strongly connected components of
// the generating digraph (Tarjan) and then propagating reachability bitsets
// over the condensation in reverse topological order. Every component of the
// result is a class of the symmetrised preorder; classes are numbered by
// their least member so that results are deterministic.

#ifndef POMALG_RELATION_HPP_
#define POMALG_RELATION_HPP_

#include <algorithm>  // for min, fill
#include <bit>        // for countr_zero
#include <cstddef>    // for size_t
#include <cstdint>    // for uint64_t
#include <deque>      // for deque
#include <limits>     // for numeric_limits
#include <optional>   // for optional
#include <utility>    // for pair
#include <vector>     // for vector

#include "errors.hpp"

namespace pomalg {

  //! Square boolean matrix stored as rows of 64-bit words.
  class BitMatrix {
   public:
    BitMatrix() = default;

    explicit BitMatrix(std::size_t n)
        : _n(n), _words((n + 63) / 64), _bits(n * _words, 0) {}

    std::size_t size() const noexcept {
      return _n;
    }

    bool get(std::size_t i, std::size_t j) const noexcept {
      return (_bits[i * _words + j / 64] >> (j % 64)) & 1U;
    }

    void set(std::size_t i, std::size_t j, bool value = true) noexcept {
      std::uint64_t mask = std::uint64_t(1) << (j % 64);
      if (value) {
        _bits[i * _words + j / 64] |= mask;
      } else {
        _bits[i * _words + j / 64] &= ~mask;
      }
    }

    std::uint64_t* row(std::size_t i) noexcept {
      return _bits.data() + i * _words;
    }

    std::uint64_t const* row(std::size_t i) const noexcept {
      return _bits.data() + i * _words;
    }

    std::size_t words_per_row() const noexcept {
      return _words;
    }

    //! row i |= row j
    void or_rows(std::size_t i, std::size_t j) noexcept {
      std::uint64_t*       dst = row(i);
      std::uint64_t const* src = row(j);
      for (std::size_t w = 0; w < _words; ++w) {
        dst[w] |= src[w];
      }
    }

    //! Calls f(j) for every set bit j of row i, in increasing order.
    template <typename F>
    void for_each_in_row(std::size_t i, F&& f) const {
      std::uint64_t const* r = row(i);
      for (std::size_t w = 0; w < _words; ++w) {
        std::uint64_t word = r[w];
        while (word != 0) {
          std::size_t bit = std::countr_zero(word);
          f(w * 64 + bit);
          word &= word - 1;
        }
      }
    }

    std::size_t count() const noexcept {
      std::size_t total = 0;
      for (auto w : _bits) {
        total += std::popcount(w);
      }
      return total;
    }

    void set_diagonal() noexcept {
      for (std::size_t i = 0; i < _n; ++i) {
        set(i, i);
      }
    }

    //! Warshall closure, bit-parallel over rows. O(n^3 / 64).
    void close_transitively() noexcept {
      for (std::size_t k = 0; k < _n; ++k) {
        for (std::size_t i = 0; i < _n; ++i) {
          if (i != k && get(i, k)) {
            or_rows(i, k);
          }
        }
      }
    }

    friend bool operator==(BitMatrix const& a, BitMatrix const& b) noexcept {
      return a._n == b._n && a._bits == b._bits;
    }

   private:
    std::size_t                _n     = 0;
    std::size_t                _words = 0;
    std::vector<std::uint64_t> _bits;
  };

  //! Covering pairs (a, b) of a reflexive partial order given as a matrix:
  //! a < b with nothing strictly between. Bit-parallel, O(n^3 / 64).
  inline std::vector<std::pair<Elt, Elt>> hasse_edges(BitMatrix const& leq) {
    std::size_t                      n = leq.size();
    std::size_t                      w = leq.words_per_row();
    std::vector<std::pair<Elt, Elt>> out;
    std::vector<std::uint64_t>       strict(w), above(w);
    for (std::size_t a = 0; a < n; ++a) {
      std::uint64_t const* up = leq.row(a);
      for (std::size_t k = 0; k < w; ++k) {
        strict[k] = up[k];
        above[k]  = 0;
      }
      strict[a / 64] &= ~(std::uint64_t(1) << (a % 64));
      leq.for_each_in_row(a, [&](std::size_t b) {
        if (b == a) {
          return;
        }
        std::uint64_t const* upb  = leq.row(b);
        std::uint64_t const  mask = std::uint64_t(1) << (b % 64);
        std::uint64_t const  keep = above[b / 64] & mask;
        for (std::size_t k = 0; k < w; ++k) {
          above[k] |= upb[k];
        }
        above[b / 64] = (above[b / 64] & ~mask) | keep;
      });
      for (std::size_t k = 0; k < w; ++k) {
        std::uint64_t word = strict[k] & ~above[k];
        while (word != 0) {
          std::size_t bit = std::countr_zero(word);
          out.emplace_back(static_cast<Elt>(a), static_cast<Elt>(k * 64 + bit));
          word &= word - 1;
        }
      }
    }
    return out;
  }

  //! Adjacency-list digraph on vertices 0..n-1.
  class Digraph {
   public:
    Digraph() = default;
    explicit Digraph(std::size_t n) : _adj(n) {}

    std::size_t size() const noexcept {
      return _adj.size();
    }

    void add_edge(Elt from, Elt to) {
      if (from != to) {
        _adj[from].push_back(to);
      }
    }

    std::vector<Elt> const& successors(Elt v) const noexcept {
      return _adj[v];
    }

    //! Adds an edge i -> j for every set entry of the relation.
    void add_relation(BitMatrix const& rel) {
      for (std::size_t i = 0; i < rel.size(); ++i) {
        rel.for_each_in_row(i, [&](std::size_t j) {
          add_edge(static_cast<Elt>(i), static_cast<Elt>(j));
        });
      }
    }

   private:
    std::vector<std::vector<Elt>> _adj;
  };

  //! The reflexive-transitive closure of a digraph, stored as a partial order
  //! on its strongly connected components.
  struct Preorder {
    //! vertex -> class index; classes are numbered by least member.
    std::vector<Elt> component;
    //! members of each class, sorted ascending.
    std::vector<std::vector<Elt>> classes;
    //! reflexive partial order on classes.
    BitMatrix class_leq;

    std::size_t size() const noexcept {
      return component.size();
    }

    std::size_t num_classes() const noexcept {
      return classes.size();
    }

    bool leq(Elt a, Elt b) const noexcept {
      return class_leq.get(component[a], component[b]);
    }

    bool equivalent(Elt a, Elt b) const noexcept {
      return component[a] == component[b];
    }

    //! The full preorder on vertices as a dense matrix.
    BitMatrix vertex_relation() const {
      std::size_t n = component.size();
      BitMatrix   rel(n);
      for (std::size_t a = 0; a < n; ++a) {
        class_leq.for_each_in_row(component[a], [&](std::size_t c) {
          for (Elt b : classes[c]) {
            rel.set(a, b);
          }
        });
      }
      return rel;
    }
  };

  namespace detail {
    // Iterative Tarjan. Components are emitted sinks first, i.e. in reverse
    // topological order of the condensation.
    inline std::vector<Elt> tarjan_components(Digraph const& g,
                                              std::size_t&   num_comps) {
      constexpr Elt   UNSEEN = std::numeric_limits<Elt>::max();
      std::size_t     n      = g.size();
      std::vector<Elt> index(n, UNSEEN), low(n, 0), comp(n, UNSEEN);
      std::vector<Elt> stack;
      std::vector<bool> on_stack(n, false);
      // (vertex, next successor position)
      std::vector<std::pair<Elt, std::size_t>> call;
      Elt                                      counter = 0;
      num_comps                                        = 0;

      for (Elt root = 0; root < n; ++root) {
        if (index[root] != UNSEEN) {
          continue;
        }
        call.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
          auto& [v, pos]  = call.back();
          auto const& succ = g.successors(v);
          if (pos < succ.size()) {
            Elt w = succ[pos++];
            if (index[w] == UNSEEN) {
              index[w] = low[w] = counter++;
              stack.push_back(w);
              on_stack[w] = true;
              call.emplace_back(w, 0);
            } else if (on_stack[w]) {
              low[v] = std::min(low[v], index[w]);
            }
          } else {
            Elt done = v;
            call.pop_back();
            if (low[done] == index[done]) {
              Elt w;
              do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp[w]     = static_cast<Elt>(num_comps);
              } while (w != done);
              ++num_comps;
            }
            if (!call.empty()) {
              Elt parent  = call.back().first;
              low[parent] = std::min(low[parent], low[done]);
            }
          }
        }
      }
      return comp;
    }
  }  // namespace detail

  //! Reflexive-transitive closure of g, condensed to its classes.
  inline Preorder reachability_preorder(Digraph const& g) {
    std::size_t      n = g.size();
    std::size_t      raw_count;
    std::vector<Elt> raw = detail::tarjan_components(g, raw_count);

    std::vector<std::vector<Elt>> raw_members(raw_count);
    for (Elt v = 0; v < n; ++v) {
      raw_members[raw[v]].push_back(v);
    }

    // raw components are in reverse topological order, so every successor
    // component of c has a smaller raw index and is already complete.
    BitMatrix reach(raw_count);
    for (std::size_t c = 0; c < raw_count; ++c) {
      reach.set(c, c);
      for (Elt v : raw_members[c]) {
        for (Elt w : g.successors(v)) {
          Elt d = raw[w];
          if (d != c && !reach.get(c, d)) {
            reach.or_rows(c, d);
          }
        }
      }
    }

    // renumber components by their least member
    std::vector<Elt> order(raw_count);
    {
      std::vector<bool> seen(raw_count, false);
      std::size_t       next = 0;
      for (Elt v = 0; v < n; ++v) {
        if (!seen[raw[v]]) {
          seen[raw[v]] = true;
          order[next++] = raw[v];
        }
      }
    }
    std::vector<Elt> renumber(raw_count);
    for (std::size_t i = 0; i < raw_count; ++i) {
      renumber[order[i]] = static_cast<Elt>(i);
    }

    Preorder result;
    result.component.resize(n);
    for (Elt v = 0; v < n; ++v) {
      result.component[v] = renumber[raw[v]];
    }
    result.classes.resize(raw_count);
    for (std::size_t i = 0; i < raw_count; ++i) {
      result.classes[i] = raw_members[order[i]];
    }
    result.class_leq = BitMatrix(raw_count);
    for (std::size_t i = 0; i < raw_count; ++i) {
      reach.for_each_in_row(order[i], [&](std::size_t d) {
        result.class_leq.set(i, renumber[d]);
      });
    }
    return result;
  }

  //! The preorder induced on the vertices 0..keep-1.
  inline Preorder restrict_preorder(Preorder const& P, std::size_t keep) {
    std::vector<Elt> old_of;
    std::vector<Elt> renumber(P.num_classes(), std::numeric_limits<Elt>::max());
    for (Elt c = 0; c < P.num_classes(); ++c) {
      if (P.classes[c][0] < keep) {
        renumber[c] = static_cast<Elt>(old_of.size());
        old_of.push_back(c);
      }
    }
    Preorder out;
    out.component.resize(keep);
    for (Elt v = 0; v < keep; ++v) {
      out.component[v] = renumber[P.component[v]];
    }
    for (Elt c : old_of) {
      std::vector<Elt> members;
      for (Elt v : P.classes[c]) {
        if (v < keep) {
          members.push_back(v);
        }
      }
      out.classes.push_back(std::move(members));
    }
    out.class_leq = BitMatrix(old_of.size());
    for (Elt i = 0; i < old_of.size(); ++i) {
      for (Elt j = 0; j < old_of.size(); ++j) {
        if (P.class_leq.get(old_of[i], old_of[j])) {
          out.class_leq.set(i, j);
        }
      }
    }
    return out;
  }

  //! Breadth-first search for a shortest path from `from` to `to` in the
  //! implicit graph whose out-edges are produced by `expand(v, emit)`; emit
  //! takes (successor, label). Returns the labels along the path.
  template <typename Label, typename Expand>
  std::optional<std::vector<std::pair<Elt, Label>>>
  shortest_path(std::size_t n, Elt from, Elt to, Expand&& expand) {
    if (from == to) {
      return std::vector<std::pair<Elt, Label>>{};
    }
    constexpr Elt               NONE = std::numeric_limits<Elt>::max();
    std::vector<Elt>            parent(n, NONE);
    std::vector<Label>          via(n);
    std::deque<Elt>             queue{from};
    parent[from] = from;
    bool found   = false;
    while (!queue.empty() && !found) {
      Elt v = queue.front();
      queue.pop_front();
      expand(v, [&](Elt w, Label const& label) {
        if (found || parent[w] != NONE) {
          return;
        }
        parent[w] = v;
        via[w]    = label;
        if (w == to) {
          found = true;
        } else {
          queue.push_back(w);
        }
      });
    }
    if (!found) {
      return std::nullopt;
    }
    std::vector<std::pair<Elt, Label>> path;
    for (Elt v = to; v != from; v = parent[v]) {
      path.emplace_back(v, via[v]);
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

}  // namespace pomalg

#endif  // POMALG_RELATION_HPP_
