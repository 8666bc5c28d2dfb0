// pomalg - finite partially ordered monoids and their acts
//
// Finite posets, pomonoids, subpomonoids, S-posets and the maps between
// them. Everything is stored by index; element names only matter for input
// and reports. All values are immutable once constructed, and every public
// constructor validates the axioms of the structure it builds.

#ifndef POMALG_CORE_HPP_
#define POMALG_CORE_HPP_

#include <algorithm>    // for find, sort, all_of
#include <bit>          // for countr_zero
#include <cstddef>      // for size_t
#include <memory>       // for shared_ptr, make_shared
#include <optional>     // for optional
#include <span>         // for span
#include <string>       // for string, to_string
#include <string_view>  // for string_view
#include <utility>      // for pair, move
#include <vector>       // for vector

#include "errors.hpp"
#include "relation.hpp"

namespace pomalg {

  using Pairs = std::vector<std::pair<Elt, Elt>>;

  inline std::vector<std::string> default_names(std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(std::to_string(i));
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Poset
  ////////////////////////////////////////////////////////////////////////

  //! A finite partial order stored as a dense reflexive relation matrix.
  class Poset {
   public:
    Poset() = default;

    //! Validates that `leq` is reflexive, antisymmetric and transitive.
    Poset(BitMatrix leq, std::vector<std::string> names)
        : _leq(std::move(leq)), _names(std::move(names)) {
      if (_names.empty()) {
        _names = default_names(_leq.size());
      }
      if (_names.size() != _leq.size()) {
        throw Error("Poset: " + std::to_string(_names.size())
                    + " names for " + std::to_string(_leq.size())
                    + " elements");
      }
      std::vector<Violation> v = violations(_leq);
      if (!v.empty()) {
        throw ValidationError("not a partial order", std::move(v));
      }
    }

    static Poset discrete(std::vector<std::string> names) {
      BitMatrix m(names.size());
      m.set_diagonal();
      return Poset(std::move(m), std::move(names));
    }

    static Poset discrete(std::size_t n) {
      return discrete(default_names(n));
    }

    //! 0 < 1 < ... < n-1
    static Poset chain(std::size_t n) {
      BitMatrix m(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
          m.set(i, j);
        }
      }
      return Poset(std::move(m), default_names(n));
    }

    static std::vector<Violation> violations(BitMatrix const& m) {
      std::vector<Violation> out;
      std::size_t            n = m.size();
      for (Elt a = 0; a < n; ++a) {
        if (!m.get(a, a)) {
          out.push_back({"NotReflexive", {a}, ""});
          break;
        }
      }
      for (Elt a = 0; a < n && out.size() < 2; ++a) {
        for (Elt b = a + 1; b < n; ++b) {
          if (m.get(a, b) && m.get(b, a)) {
            out.push_back({"NotAntisymmetric", {a, b}, ""});
            a = static_cast<Elt>(n);
            break;
          }
        }
      }
      // a <= b needs row b inside row a
      std::size_t words = m.words_per_row();
      for (Elt a = 0; a < n; ++a) {
        std::uint64_t const* ra = m.row(a);
        for (Elt b = 0; b < n; ++b) {
          if (!m.get(a, b)) {
            continue;
          }
          std::uint64_t const* rb = m.row(b);
          for (std::size_t w = 0; w < words; ++w) {
            if (std::uint64_t miss = rb[w] & ~ra[w]) {
              Elt c = static_cast<Elt>(w * 64 + std::countr_zero(miss));
              out.push_back({"NotTransitive", {a, b, c}, ""});
              return out;
            }
          }
        }
      }
      return out;
    }

    std::size_t size() const noexcept {
      return _leq.size();
    }

    bool leq(Elt a, Elt b) const noexcept {
      return _leq.get(a, b);
    }

    bool lt(Elt a, Elt b) const noexcept {
      return a != b && _leq.get(a, b);
    }

    bool comparable(Elt a, Elt b) const noexcept {
      return _leq.get(a, b) || _leq.get(b, a);
    }

    BitMatrix const& relation() const noexcept {
      return _leq;
    }

    std::vector<std::string> const& names() const noexcept {
      return _names;
    }

    std::string const& name(Elt a) const {
      return _names[a];
    }

    std::optional<Elt> find(std::string_view name) const {
      auto it = std::find(_names.begin(), _names.end(), name);
      if (it == _names.end()) {
        return std::nullopt;
      }
      return static_cast<Elt>(it - _names.begin());
    }

    //! Hasse diagram: pairs (a, b) with a < b and nothing strictly between.
    std::vector<std::pair<Elt, Elt>> covers() const {
      return hasse_edges(_leq);
    }

    //! Whether the subset (given as a membership mask) is convex.
    bool is_convex(std::vector<bool> const& member) const {
      std::size_t n = size();
      for (Elt x = 0; x < n; ++x) {
        if (!member[x]) {
          continue;
        }
        for (Elt y = 0; y < n; ++y) {
          if (!member[y] || !leq(x, y)) {
            continue;
          }
          for (Elt z = 0; z < n; ++z) {
            if (!member[z] && leq(x, z) && leq(z, y)) {
              return false;
            }
          }
        }
      }
      return true;
    }

    //! Structural equality; names are ignored.
    friend bool operator==(Poset const& a, Poset const& b) noexcept {
      return a._leq == b._leq;
    }

   private:
    BitMatrix                _leq;
    std::vector<std::string> _names;
  };

  //! Reflexive-transitive closure of `pairs` on {0, ..., n-1}. Throws
  //! AntisymmetryViolation naming two distinct elements forced equal.
  inline Poset closure_order(std::size_t                             n,
                             std::span<std::pair<Elt, Elt> const> pairs,
                             std::vector<std::string>                names = {}) {
    if (names.empty()) {
      names = default_names(n);
    }
    Digraph g(n);
    for (auto [a, b] : pairs) {
      if (a >= n || b >= n) {
        throw Error("closure_order: pair (" + std::to_string(a) + ", "
                    + std::to_string(b) + ") outside carrier of size "
                    + std::to_string(n));
      }
      g.add_edge(a, b);
    }
    Preorder pre = reachability_preorder(g);
    for (auto const& cls : pre.classes) {
      if (cls.size() > 1) {
        throw AntisymmetryViolation(
            cls[0],
            cls[1],
            names[cls[0]] + " <= " + names[cls[1]] + " <= " + names[cls[0]]);
      }
    }
    // every class is a singleton and classes are numbered by least member,
    // so class i is vertex i
    return Poset(pre.class_leq, std::move(names));
  }

  inline Poset closure_order(std::size_t                             n,
                             std::vector<std::pair<Elt, Elt>> const& pairs,
                             std::vector<std::string>                names = {}) {
    return closure_order(
        n, std::span<std::pair<Elt, Elt> const>(pairs), std::move(names));
  }

  ////////////////////////////////////////////////////////////////////////
  // Pomonoid
  ////////////////////////////////////////////////////////////////////////

  //! Unvalidated pomonoid data. Table entries >= n are reported as escaping
  //! the carrier.
  struct PomonoidCandidate {
    Poset              order;
    std::vector<Elt>   table;  // row-major: table[s * n + t] = st
    std::optional<Elt> identity;
  };

  namespace detail {
    inline std::vector<Violation>
    semigroup_violations(Poset const& order, std::vector<Elt> const& table) {
      std::vector<Violation> out;
      std::size_t            n = order.size();
      if (table.size() != n * n) {
        out.push_back({"TableNotTotal",
                       {},
                       std::to_string(table.size()) + " entries for "
                           + std::to_string(n) + " elements"});
        return out;
      }
      for (Elt s = 0; s < n; ++s) {
        for (Elt t = 0; t < n; ++t) {
          if (table[s * n + t] >= n) {
            out.push_back({"TableNotClosed", {s, t}, ""});
            return out;
          }
        }
      }
      auto m = [&](Elt s, Elt t) { return table[s * n + t]; };
      for (Elt s = 0; s < n; ++s) {
        for (Elt t = 0; t < n; ++t) {
          for (Elt u = 0; u < n; ++u) {
            if (m(m(s, t), u) != m(s, m(t, u))) {
              out.push_back({"NotAssociative",
                             {s, t, u},
                             "(" + order.name(s) + order.name(t) + ")"
                                 + order.name(u) + " != " + order.name(s)
                                 + "(" + order.name(t) + order.name(u)
                                 + ")"});
              goto compatibility;
            }
          }
        }
      }
    compatibility:
      bool left_done = false, right_done = false;
      for (Elt t = 0; t < n; ++t) {
        for (Elt u = 0; u < n; ++u) {
          if (t == u || !order.leq(t, u)) {
            continue;
          }
          for (Elt s = 0; s < n; ++s) {
            if (!left_done && !order.leq(m(s, t), m(s, u))) {
              left_done = true;
              out.push_back({"NotCompatible",
                             {s, t, u},
                             "left: " + order.name(t) + " <= " + order.name(u)
                                 + " but not " + order.name(s) + order.name(t)
                                 + " <= " + order.name(s) + order.name(u)});
            }
            if (!right_done && !order.leq(m(t, s), m(u, s))) {
              right_done = true;
              out.push_back({"NotCompatible",
                             {s, t, u},
                             "right: " + order.name(t) + " <= "
                                 + order.name(u) + " but not "
                                 + order.name(t) + order.name(s) + " <= "
                                 + order.name(u) + order.name(s)});
            }
          }
        }
      }
      return out;
    }

    inline std::optional<Elt> find_identity(std::size_t             n,
                                            std::vector<Elt> const& table) {
      for (Elt e = 0; e < n; ++e) {
        bool ok = true;
        for (Elt s = 0; s < n && ok; ++s) {
          ok = table[e * n + s] == s && table[s * n + e] == s;
        }
        if (ok) {
          return e;
        }
      }
      return std::nullopt;
    }
  }  // namespace detail

  //! Every violated pomonoid axiom, one witness per axiom (and per side).
  inline std::vector<Violation>
  pomonoid_violations(PomonoidCandidate const& c) {
    std::vector<Violation> out = detail::semigroup_violations(c.order, c.table);
    if (!out.empty() && (out[0].kind == "TableNotTotal"
                         || out[0].kind == "TableNotClosed")) {
      return out;
    }
    std::size_t n = c.order.size();
    if (n == 0) {
      out.push_back({"NoIdentity", {}, "empty carrier"});
      return out;
    }
    if (c.identity.has_value()) {
      Elt e = *c.identity;
      if (e >= n) {
        out.push_back({"NoIdentity", {}, "identity outside carrier"});
        return out;
      }
      for (Elt s = 0; s < n; ++s) {
        if (c.table[e * n + s] != s || c.table[s * n + e] != s) {
          out.push_back({"NoIdentity",
                         {e, s},
                         c.order.name(e) + " is not neutral for "
                             + c.order.name(s)});
          break;
        }
      }
    } else if (!detail::find_identity(n, c.table)) {
      out.push_back({"NoIdentity", {}, "no two-sided neutral element"});
    }
    return out;
  }

  //! A finite monoid with a partial order compatible with multiplication on
  //! both sides.
  class Pomonoid {
   public:
    //! Validates; throws ValidationError listing every violated axiom.
    explicit Pomonoid(PomonoidCandidate c, std::string label = {})
        : _order(std::move(c.order)),
          _table(std::move(c.table)),
          _label(std::move(label)) {
      PomonoidCandidate check{_order, _table, c.identity};
      std::vector<Violation> v = pomonoid_violations(check);
      if (!v.empty()) {
        throw ValidationError(
            "not a pomonoid" + (_label.empty() ? "" : " (" + _label + ")"),
            std::move(v));
      }
      _identity = c.identity ? *c.identity
                             : *detail::find_identity(size(), _table);
    }

    std::size_t size() const noexcept {
      return _order.size();
    }

    Elt mult(Elt s, Elt t) const noexcept {
      return _table[s * size() + t];
    }

    bool leq(Elt s, Elt t) const noexcept {
      return _order.leq(s, t);
    }

    Elt identity() const noexcept {
      return _identity;
    }

    Poset const& order() const noexcept {
      return _order;
    }

    std::vector<Elt> const& table() const noexcept {
      return _table;
    }

    std::vector<std::string> const& names() const noexcept {
      return _order.names();
    }

    std::string const& name(Elt s) const {
      return _order.name(s);
    }

    std::string const& label() const noexcept {
      return _label;
    }

    //! Structural equality; element names and labels are ignored.
    friend bool operator==(Pomonoid const& a, Pomonoid const& b) noexcept {
      return a._identity == b._identity && a._table == b._table
             && a._order == b._order;
    }

   private:
    Poset            _order;
    std::vector<Elt> _table;
    Elt              _identity = 0;
    std::string      _label;
  };

  using ActorPtr = std::shared_ptr<Pomonoid const>;

  inline Pomonoid validate_pomonoid(PomonoidCandidate c,
                                    std::string       label = {}) {
    return Pomonoid(std::move(c), std::move(label));
  }

  inline bool same_actor(ActorPtr const& a, ActorPtr const& b) noexcept {
    if (a == b) {
      return true;
    }
    if (!a || !b) {
      return false;
    }
    return *a == *b;
  }

  //! Builds a pomonoid from element names, rows of names, and order pairs
  //! (any generating subrelation of the order).
  inline Pomonoid
  pomonoid_from_names(std::vector<std::string> const&              names,
                      std::vector<std::vector<std::string>> const& rows,
                      std::vector<std::pair<std::string, std::string>> const&
                                  order,
                      std::string label = {}) {
    std::size_t n      = names.size();
    auto        lookup = [&](std::string const& x) -> Elt {
      auto it = std::find(names.begin(), names.end(), x);
      if (it == names.end()) {
        throw Error("unknown element '" + x + "'");
      }
      return static_cast<Elt>(it - names.begin());
    };
    if (rows.size() != n) {
      throw Error("pomonoid_from_names: expected " + std::to_string(n)
                  + " rows");
    }
    std::vector<Elt> table;
    for (auto const& row : rows) {
      if (row.size() != n) {
        throw Error("pomonoid_from_names: row of wrong length");
      }
      for (auto const& x : row) {
        table.push_back(lookup(x));
      }
    }
    std::vector<std::pair<Elt, Elt>> pairs;
    for (auto const& [a, b] : order) {
      pairs.emplace_back(lookup(a), lookup(b));
    }
    return Pomonoid(
        PomonoidCandidate{closure_order(n, pairs, names), table, std::nullopt},
        std::move(label));
  }

  //! The one-element pomonoid.
  inline Pomonoid trivial_pomonoid() {
    return Pomonoid(PomonoidCandidate{Poset::discrete({"1"}), {0}, 0},
                    "trivial");
  }

  //! {0, 1, ..., m} under max with the usual order; 0 is the identity.
  inline Pomonoid max_chain(std::size_t m) {
    std::size_t      n = m + 1;
    std::vector<Elt> table(n * n);
    for (Elt s = 0; s < n; ++s) {
      for (Elt t = 0; t < n; ++t) {
        table[s * n + t] = std::max(s, t);
      }
    }
    return Pomonoid(PomonoidCandidate{Poset::chain(n), table, 0},
                    "max-chain-" + std::to_string(m));
  }

  //! Z/n with the discrete order.
  inline Pomonoid cyclic_group(std::size_t n) {
    std::vector<Elt> table(n * n);
    for (Elt s = 0; s < n; ++s) {
      for (Elt t = 0; t < n; ++t) {
        table[s * n + t] = static_cast<Elt>((s + t) % n);
      }
    }
    return Pomonoid(PomonoidCandidate{Poset::discrete(n), table, 0},
                    "Z" + std::to_string(n));
  }

  //! Same order, multiplication reversed.
  inline Pomonoid opposite(Pomonoid const& S) {
    std::size_t      n = S.size();
    std::vector<Elt> table(n * n);
    for (Elt s = 0; s < n; ++s) {
      for (Elt t = 0; t < n; ++t) {
        table[s * n + t] = S.mult(t, s);
      }
    }
    return Pomonoid(PomonoidCandidate{S.order(), table, S.identity()},
                    S.label().empty() ? "" : S.label() + "^op");
  }

  ////////////////////////////////////////////////////////////////////////
  // Posemigroups and adjoining an identity
  ////////////////////////////////////////////////////////////////////////

  struct Posemigroup {
    Poset            order;
    std::vector<Elt> table;
  };

  inline std::vector<Violation> posemigroup_violations(Posemigroup const& s) {
    return detail::semigroup_violations(s.order, s.table);
  }

  //! Adjoins a new identity, incomparable to every old element, whether or
  //! not the input already has one. The new identity is the last element.
  inline Pomonoid adjoin_identity(Posemigroup const& S,
                                  std::string        identity_name = "1") {
    std::vector<Violation> v = posemigroup_violations(S);
    if (!v.empty()) {
      throw ValidationError("not a posemigroup", std::move(v));
    }
    std::size_t              n     = S.order.size();
    std::vector<std::string> names = S.order.names();
    while (std::find(names.begin(), names.end(), identity_name)
           != names.end()) {
      identity_name += "'";
    }
    names.push_back(identity_name);
    BitMatrix leq(n + 1);
    for (Elt a = 0; a < n; ++a) {
      for (Elt b = 0; b < n; ++b) {
        leq.set(a, b, S.order.leq(a, b));
      }
    }
    leq.set(n, n);
    std::vector<Elt> table((n + 1) * (n + 1));
    Elt const        one = static_cast<Elt>(n);
    for (Elt s = 0; s <= n; ++s) {
      for (Elt t = 0; t <= n; ++t) {
        Elt value;
        if (s == one) {
          value = t;
        } else if (t == one) {
          value = s;
        } else {
          value = S.table[s * n + t];
        }
        table[s * (n + 1) + t] = value;
      }
    }
    return Pomonoid(
        PomonoidCandidate{Poset(std::move(leq), std::move(names)), table, one});
  }

  ////////////////////////////////////////////////////////////////////////
  // Subpomonoids
  ////////////////////////////////////////////////////////////////////////

  //! A submonoid of a pomonoid with the inherited order. The standalone
  //! pomonoid() numbers members 0..k-1 in increasing ambient index.
  class SubPomonoid {
   public:
    SubPomonoid(ActorPtr ambient, std::vector<Elt> members)
        : _ambient(std::move(ambient)), _members(std::move(members)) {
      Pomonoid const& S = *_ambient;
      std::sort(_members.begin(), _members.end());
      _members.erase(std::unique(_members.begin(), _members.end()),
                     _members.end());
      _mask.assign(S.size(), false);
      for (Elt m : _members) {
        if (m >= S.size()) {
          throw Error("SubPomonoid: element index out of range");
        }
        _mask[m] = true;
      }
      std::vector<Violation> v;
      if (!_mask[S.identity()]) {
        v.push_back({"MissingIdentity", {S.identity()}, ""});
      }
      for (Elt s : _members) {
        for (Elt t : _members) {
          if (!_mask[S.mult(s, t)]) {
            v.push_back({"NotClosed",
                         {s, t},
                         S.name(s) + S.name(t) + " = "
                             + S.name(S.mult(s, t))});
            goto done;
          }
        }
      }
    done:
      if (!v.empty()) {
        throw ValidationError("not a subpomonoid", std::move(v));
      }
      std::size_t              k = _members.size();
      std::vector<Elt>         local(S.size(), 0);
      std::vector<std::string> names;
      for (Elt i = 0; i < k; ++i) {
        local[_members[i]] = i;
        names.push_back(S.name(_members[i]));
      }
      BitMatrix        leq(k);
      std::vector<Elt> table(k * k);
      for (Elt i = 0; i < k; ++i) {
        for (Elt j = 0; j < k; ++j) {
          leq.set(i, j, S.leq(_members[i], _members[j]));
          table[i * k + j] = local[S.mult(_members[i], _members[j])];
        }
      }
      _pomonoid = std::make_shared<Pomonoid const>(
          PomonoidCandidate{
              Poset(std::move(leq), std::move(names)), table, local[S.identity()]},
          S.label().empty() ? "" : "sub(" + S.label() + ")");
    }

    ActorPtr const& ambient() const noexcept {
      return _ambient;
    }

    //! Ambient indices of the members, ascending.
    std::vector<Elt> const& members() const noexcept {
      return _members;
    }

    bool contains(Elt s) const noexcept {
      return _mask[s];
    }

    std::vector<bool> const& mask() const noexcept {
      return _mask;
    }

    std::size_t size() const noexcept {
      return _members.size();
    }

    ActorPtr const& pomonoid() const noexcept {
      return _pomonoid;
    }

    //! Local index -> ambient index.
    std::vector<Elt> const& embedding() const noexcept {
      return _members;
    }

   private:
    ActorPtr          _ambient;
    std::vector<Elt>  _members;
    std::vector<bool> _mask;
    ActorPtr          _pomonoid;
  };

  //! Pomonoid morphism properties of f: U -> S.
  struct PomonoidMapReport {
    bool homomorphism    = false;
    bool monotone        = false;
    bool order_embedding = false;
    bool injective       = false;
  };

  inline PomonoidMapReport analyze_pomonoid_map(std::vector<Elt> const& f,
                                                Pomonoid const&         U,
                                                Pomonoid const&         S) {
    PomonoidMapReport r;
    if (f.size() != U.size()) {
      return r;
    }
    for (Elt x : f) {
      if (x >= S.size()) {
        return r;
      }
    }
    r.homomorphism = f[U.identity()] == S.identity();
    r.monotone = r.order_embedding = r.injective = true;
    for (Elt s = 0; s < U.size(); ++s) {
      for (Elt t = 0; t < U.size(); ++t) {
        if (f[U.mult(s, t)] != S.mult(f[s], f[t])) {
          r.homomorphism = false;
        }
        bool src = U.leq(s, t), dst = S.leq(f[s], f[t]);
        if (src && !dst) {
          r.monotone = false;
        }
        if (src != dst) {
          r.order_embedding = false;
        }
        if (s != t && f[s] == f[t]) {
          r.injective = false;
        }
      }
    }
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // S-posets
  ////////////////////////////////////////////////////////////////////////

  enum class Side { none, right, left, bi };

  inline char const* side_name(Side s) noexcept {
    switch (s) {
      case Side::none:
        return "none";
      case Side::right:
        return "right";
      case Side::left:
        return "left";
      case Side::bi:
        return "bi";
    }
    return "?";
  }

  //! Unvalidated S-poset data. An absent actor means no action on that side.
  //! Action entries >= n are reported as escaping the carrier.
  struct SPosetCandidate {
    Poset            order;
    ActorPtr         left;
    std::vector<Elt> left_act;  // left_act[s * n + a] = s a
    ActorPtr         right;
    std::vector<Elt> right_act;  // right_act[a * |S| + s] = a s
  };

  namespace detail {
    // Checks one side; `act(a, s)` is the action written so that the axiom
    // reads a(st) = (as)t for right actions. For a left action the caller
    // passes the opposite multiplication.
    template <typename Act, typename Mult>
    void action_violations(Poset const&            X,
                           Pomonoid const&         S,
                           Act&&                   act,
                           Mult&&                  mult,
                           std::string const&      side,
                           std::vector<Violation>& out) {
      std::size_t n = X.size(), k = S.size();
      for (Elt a = 0; a < n; ++a) {
        for (Elt s = 0; s < k; ++s) {
          if (act(a, s) >= n) {
            out.push_back({"ActionNotClosed",
                           {a, s},
                           side + ": " + X.name(a) + "." + S.name(s)
                               + " escapes the carrier"});
            return;
          }
        }
      }
      for (Elt a = 0; a < n; ++a) {
        if (act(a, S.identity()) != a) {
          out.push_back({"ActionNotUnital", {a}, side});
          break;
        }
      }
      for (Elt a = 0; a < n; ++a) {
        for (Elt s = 0; s < k; ++s) {
          for (Elt t = 0; t < k; ++t) {
            if (act(a, mult(s, t)) != act(act(a, s), t)) {
              out.push_back({"ActionNotAssociative", {a, s, t}, side});
              goto monotone_act;
            }
          }
        }
      }
    monotone_act:
      for (Elt a = 0; a < n; ++a) {
        std::uint64_t const* up    = X.relation().row(a);
        std::size_t          words = X.relation().words_per_row();
        for (std::size_t w = 0; w < words; ++w) {
          for (std::uint64_t bits = up[w]; bits != 0; bits &= bits - 1) {
            Elt b = static_cast<Elt>(w * 64 + std::countr_zero(bits));
            for (Elt s = 0; s < k; ++s) {
              if (!X.leq(act(a, s), act(b, s))) {
                out.push_back({"NotMonotoneInAct", {a, b, s}, side});
                goto monotone_scalar;
              }
            }
          }
        }
      }
    monotone_scalar:
      for (Elt s = 0; s < k; ++s) {
        for (Elt t = 0; t < k; ++t) {
          if (!S.leq(s, t)) {
            continue;
          }
          for (Elt a = 0; a < n; ++a) {
            if (!X.leq(act(a, s), act(a, t))) {
              out.push_back({"NotMonotoneInScalar", {a, s, t}, side});
              return;
            }
          }
        }
      }
    }
  }  // namespace detail

  inline std::vector<Violation> sposet_violations(SPosetCandidate const& c) {
    std::vector<Violation> out;
    std::size_t            n = c.order.size();
    if (n == 0) {
      out.push_back({"EmptyCarrier", {}, "S-posets are nonempty"});
      return out;
    }
    if (c.right) {
      Pomonoid const& S = *c.right;
      if (c.right_act.size() != n * S.size()) {
        out.push_back({"ActionNotTotal", {}, "right"});
      } else {
        detail::action_violations(
            c.order,
            S,
            [&](Elt a, Elt s) { return c.right_act[a * S.size() + s]; },
            [&](Elt s, Elt t) { return S.mult(s, t); },
            "right",
            out);
      }
    }
    if (c.left) {
      Pomonoid const& S = *c.left;
      if (c.left_act.size() != n * S.size()) {
        out.push_back({"ActionNotTotal", {}, "left"});
      } else {
        // a left action is a right action of the opposite monoid
        detail::action_violations(
            c.order,
            S,
            [&](Elt a, Elt s) { return c.left_act[s * n + a]; },
            [&](Elt s, Elt t) { return S.mult(t, s); },
            "left",
            out);
      }
    }
    if (c.left && c.right && out.empty()) {
      Pomonoid const& L = *c.left;
      Pomonoid const& R = *c.right;
      for (Elt s = 0; s < L.size(); ++s) {
        for (Elt a = 0; a < n; ++a) {
          for (Elt t = 0; t < R.size(); ++t) {
            Elt lhs = c.right_act[c.left_act[s * n + a] * R.size() + t];
            Elt rhs = c.left_act[s * n + c.right_act[a * R.size() + t]];
            if (lhs != rhs) {
              out.push_back({"ActionsNotCompatible", {s, a, t}, "(sa)t != s(at)"});
              return out;
            }
          }
        }
      }
    }
    return out;
  }

  //! A nonempty poset with monotone monoid action(s).
  class SPoset {
   public:
    explicit SPoset(SPosetCandidate c, std::string label = {})
        : _c(std::move(c)), _label(std::move(label)) {
      std::vector<Violation> v = sposet_violations(_c);
      if (!v.empty()) {
        throw ValidationError(
            "not an S-poset" + (_label.empty() ? "" : " (" + _label + ")"),
            std::move(v));
      }
    }

    Side side() const noexcept {
      if (_c.left && _c.right) {
        return Side::bi;
      }
      if (_c.left) {
        return Side::left;
      }
      if (_c.right) {
        return Side::right;
      }
      return Side::none;
    }

    std::size_t size() const noexcept {
      return _c.order.size();
    }

    bool leq(Elt a, Elt b) const noexcept {
      return _c.order.leq(a, b);
    }

    Poset const& order() const noexcept {
      return _c.order;
    }

    std::vector<std::string> const& names() const noexcept {
      return _c.order.names();
    }

    std::string const& name(Elt a) const {
      return _c.order.name(a);
    }

    ActorPtr const& left_actor() const noexcept {
      return _c.left;
    }

    ActorPtr const& right_actor() const noexcept {
      return _c.right;
    }

    Elt act_right(Elt a, Elt s) const noexcept {
      return _c.right_act[a * _c.right->size() + s];
    }

    Elt act_left(Elt s, Elt a) const noexcept {
      return _c.left_act[s * size() + a];
    }

    SPosetCandidate const& data() const noexcept {
      return _c;
    }

    std::string const& label() const noexcept {
      return _label;
    }

   private:
    SPosetCandidate _c;
    std::string     _label;
  };

  using SPosetPtr = std::shared_ptr<SPoset const>;

  inline SPoset validate_sposet(SPosetCandidate c, std::string label = {}) {
    return SPoset(std::move(c), std::move(label));
  }

  template <typename... Args>
  SPosetPtr make_sposet(Args&&... args) {
    return std::make_shared<SPoset const>(std::forward<Args>(args)...);
  }

  //! S acting on itself by right multiplication.
  inline SPosetPtr regular_right(ActorPtr const& S) {
    return make_sposet(
        SPosetCandidate{S->order(), nullptr, {}, S, S->table()},
        S->label().empty() ? "" : S->label() + "_S");
  }

  //! S acting on itself by left multiplication.
  inline SPosetPtr regular_left(ActorPtr const& S) {
    return make_sposet(
        SPosetCandidate{S->order(), S, S->table(), nullptr, {}},
        S->label().empty() ? "" : "_S" + S->label());
  }

  //! S as an (S, S)-poset.
  inline SPosetPtr regular_bi(ActorPtr const& S) {
    return make_sposet(
        SPosetCandidate{S->order(), S, S->table(), S, S->table()},
        S->label().empty() ? "" : "_S" + S->label() + "_S");
  }

  //! The one-point S-poset with the requested actions.
  inline SPosetPtr one_point(ActorPtr const& left, ActorPtr const& right) {
    SPosetCandidate c{Poset::discrete({"*"}), left, {}, right, {}};
    if (left) {
      c.left_act.assign(left->size(), 0);
    }
    if (right) {
      c.right_act.assign(right->size(), 0);
    }
    return make_sposet(std::move(c), "point");
  }

  //! A plain poset viewed as an S-poset with no action.
  inline SPosetPtr plain_poset(Poset P) {
    return make_sposet(SPosetCandidate{std::move(P), nullptr, {}, nullptr, {}});
  }

  //! Change of actors along monoid morphisms. `hom[u]` is the image in the
  //! old actor of element u of the new actor.
  struct Restriction {
    ActorPtr         actor;
    std::vector<Elt> hom;
  };

  //! The identity restriction S -> S.
  inline Restriction same_actions(ActorPtr const& S) {
    std::vector<Elt> id(S->size());
    for (Elt s = 0; s < S->size(); ++s) {
      id[s] = s;
    }
    return Restriction{S, std::move(id)};
  }

  //! Restriction along the inclusion of a subpomonoid.
  inline Restriction along(SubPomonoid const& U) {
    return Restriction{U.pomonoid(), U.embedding()};
  }

  //! Re-equips X with actions pulled back along the given morphisms; an
  //! empty optional drops that side's action.
  inline SPosetPtr restrict_actions(SPoset const&                     X,
                                    std::optional<Restriction> const& left,
                                    std::optional<Restriction> const& right,
                                    std::string                       label = {}) {
    SPosetCandidate c{X.order(), nullptr, {}, nullptr, {}};
    std::size_t     n = X.size();
    if (left) {
      if (!X.left_actor()) {
        throw ActorMismatch("restrict_actions: no left action to restrict");
      }
      c.left = left->actor;
      c.left_act.resize(left->actor->size() * n);
      for (Elt u = 0; u < left->actor->size(); ++u) {
        for (Elt a = 0; a < n; ++a) {
          c.left_act[u * n + a] = X.act_left(left->hom[u], a);
        }
      }
    }
    if (right) {
      if (!X.right_actor()) {
        throw ActorMismatch("restrict_actions: no right action to restrict");
      }
      std::size_t k = right->actor->size();
      c.right       = right->actor;
      c.right_act.resize(n * k);
      for (Elt a = 0; a < n; ++a) {
        for (Elt u = 0; u < k; ++u) {
          c.right_act[a * k + u] = X.act_right(a, right->hom[u]);
        }
      }
    }
    return make_sposet(std::move(c), label.empty() ? X.label() : label);
  }

  inline SPosetPtr forget_left(SPoset const& X) {
    if (!X.right_actor()) {
      return plain_poset(X.order());
    }
    return restrict_actions(X, std::nullopt, same_actions(X.right_actor()));
  }

  inline SPosetPtr forget_right(SPoset const& X) {
    if (!X.left_actor()) {
      return plain_poset(X.order());
    }
    return restrict_actions(X, same_actions(X.left_actor()), std::nullopt);
  }

  ////////////////////////////////////////////////////////////////////////
  // Maps
  ////////////////////////////////////////////////////////////////////////

  struct MapFlags {
    bool monotone        = false;
    bool order_embedding = false;
    bool convex          = false;
    bool injective       = false;
    bool surjective      = false;
    bool equivariant     = false;
  };

  //! Order-theoretic flags of f: P -> Q by exhaustive pair scan; the
  //! equivariant flag is left true.
  inline MapFlags poset_map_flags(std::vector<Elt> const& f,
                                  Poset const&            P,
                                  Poset const&            Q) {
    MapFlags r;
    r.monotone = r.order_embedding = r.injective = r.equivariant = true;
    std::size_t       n = P.size(), m = Q.size();
    std::vector<bool> image(m, false);
    for (Elt x = 0; x < n; ++x) {
      image[f[x]] = true;
      for (Elt y = 0; y < n; ++y) {
        bool src = P.leq(x, y), dst = Q.leq(f[x], f[y]);
        if (src && !dst) {
          r.monotone = false;
        }
        if (src != dst) {
          r.order_embedding = false;
        }
        if (x != y && f[x] == f[y]) {
          r.injective = false;
        }
      }
    }
    r.surjective = std::all_of(image.begin(), image.end(), [](bool b) {
      return b;
    });
    r.convex = Q.is_convex(image);
    return r;
  }

  namespace detail {
    inline void require_same_actions(SPoset const& X, SPoset const& Y) {
      if (!same_actor(X.right_actor(), Y.right_actor())
          || !same_actor(X.left_actor(), Y.left_actor())) {
        throw ActorMismatch("source (" + std::string(side_name(X.side()))
                            + ") and target ("
                            + std::string(side_name(Y.side()))
                            + ") do not carry the same actions");
      }
    }
  }  // namespace detail

  //! First (element, scalar, side) with f(xs) != f(x)s, or f(sx) != s f(x).
  struct EquivarianceFailure {
    Elt  element;
    Elt  scalar;
    bool on_left;
  };

  inline std::optional<EquivarianceFailure>
  equivariance_failure(std::vector<Elt> const& f,
                       SPoset const&           X,
                       SPoset const&           Y) {
    if (X.right_actor()) {
      for (Elt x = 0; x < X.size(); ++x) {
        for (Elt s = 0; s < X.right_actor()->size(); ++s) {
          if (f[X.act_right(x, s)] != Y.act_right(f[x], s)) {
            return EquivarianceFailure{x, s, false};
          }
        }
      }
    }
    if (X.left_actor()) {
      for (Elt x = 0; x < X.size(); ++x) {
        for (Elt s = 0; s < X.left_actor()->size(); ++s) {
          if (f[X.act_left(s, x)] != Y.act_left(s, f[x])) {
            return EquivarianceFailure{x, s, true};
          }
        }
      }
    }
    return std::nullopt;
  }

  //! A map between S-posets with its properties computed.
  class SPosetMap {
   public:
    SPosetMap() = default;
    SPosetMap(SPosetPtr src, SPosetPtr dst, std::vector<Elt> f, MapFlags fl)
        : source(std::move(src)),
          target(std::move(dst)),
          assignment(std::move(f)),
          flags(fl) {}

    Elt operator()(Elt x) const noexcept {
      return assignment[x];
    }

    std::vector<Elt> image() const {
      std::vector<Elt> out(assignment);
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }

    SPosetPtr        source;
    SPosetPtr        target;
    std::vector<Elt> assignment;
    MapFlags         flags;
  };

  //! Computes every flag by exhaustive scan. Throws NotEquivariant when f
  //! does not commute with the action(s), ActorMismatch when X and Y are not
  //! over the same pomonoid(s).
  inline SPosetMap
  analyze_map(std::vector<Elt> f, SPosetPtr const& X, SPosetPtr const& Y) {
    detail::require_same_actions(*X, *Y);
    if (f.size() != X->size()) {
      throw Error("analyze_map: assignment has wrong length");
    }
    for (Elt y : f) {
      if (y >= Y->size()) {
        throw Error("analyze_map: assignment leaves the target");
      }
    }
    if (auto bad = equivariance_failure(f, *X, *Y)) {
      auto const& actor = bad->on_left ? X->left_actor() : X->right_actor();
      throw NotEquivariant(
          bad->element,
          bad->scalar,
          std::string(bad->on_left ? "f(sx) != s f(x)" : "f(xs) != f(x)s")
              + " for x = " + X->name(bad->element)
              + ", s = " + actor->name(bad->scalar));
    }
    MapFlags flags    = poset_map_flags(f, X->order(), Y->order());
    flags.equivariant = true;
    return SPosetMap(X, Y, std::move(f), flags);
  }

  inline SPosetMap identity_map(SPosetPtr const& X) {
    std::vector<Elt> f(X->size());
    for (Elt x = 0; x < X->size(); ++x) {
      f[x] = x;
    }
    return analyze_map(std::move(f), X, X);
  }

  //! g after f.
  inline SPosetMap compose(SPosetMap const& g, SPosetMap const& f) {
    std::vector<Elt> h(f.assignment.size());
    for (Elt x = 0; x < h.size(); ++x) {
      h[x] = g(f(x));
    }
    return analyze_map(std::move(h), f.source, g.target);
  }

}  // namespace pomalg

#endif  // POMALG_CORE_HPP_
