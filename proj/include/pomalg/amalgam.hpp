// pomalg - finite partially ordered monoids and their acts
//
// Pomonoid amalgams [U; S1, S2]: words of the free product and the steps
// that generate its order, a bounded search for derivations, the tower of
// (U, U)-posets Y_n approximating S1 *_U S2, and embeddability verdicts.

#ifndef POMALG_AMALGAM_HPP_
#define POMALG_AMALGAM_HPP_

#include <algorithm>      // for max, reverse
#include <array>          // for array
#include <cstdlib>        // for getenv, strtoull
#include <cstring>        // for memcpy
#include <deque>          // for deque
#include <map>            // for map
#include <optional>       // for optional
#include <random>         // for mt19937_64
#include <sstream>        // for istringstream
#include <string>         // for string
#include <unordered_map>  // for unordered_map
#include <utility>        // for as_const, pair
#include <vector>         // for vector

#include "constructions.hpp"
#include "tensor.hpp"

namespace pomalg {

  class PoAmalgam {
   public:
    PoAmalgam(ActorPtr         core,
              ActorPtr         s1,
              ActorPtr         s2,
              std::vector<Elt> phi1,
              std::vector<Elt> phi2,
              std::string      label = {})
        : _core(core),
          _emb{CoreEmbedding(core, std::move(s1), std::move(phi1)),
               CoreEmbedding(core, std::move(s2), std::move(phi2))},
          _label(std::move(label)) {
      for (int i = 0; i < 2; ++i) {
        _pre[i].assign(_emb[i].ambient()->size(), NONE);
        for (Elt u = 0; u < _core->size(); ++u) {
          _pre[i][_emb[i].embedding()[u]] = u;
        }
      }
    }

    //! Both factors equal to S and U a subpomonoid, included twice.
    static PoAmalgam doubled(SubPomonoid const& U, std::string label = {}) {
      return PoAmalgam(U.pomonoid(), U.ambient(), U.ambient(), U.embedding(),
                       U.embedding(), std::move(label));
    }

    ActorPtr const& core() const noexcept {
      return _core;
    }

    //! Factor 1 or 2.
    ActorPtr const& factor(int i) const noexcept {
      return _emb[i - 1].ambient();
    }

    CoreEmbedding const& embedding(int i) const noexcept {
      return _emb[i - 1];
    }

    Elt phi(int i, Elt u) const noexcept {
      return _emb[i - 1].embedding()[u];
    }

    //! The core element mapped to s by phi_i, if any.
    std::optional<Elt> to_core(int i, Elt s) const noexcept {
      Elt u = _pre[i - 1][s];
      if (u == NONE) {
        return std::nullopt;
      }
      return u;
    }

    //! phi_j phi_i^{-1}(s) for the other factor j; s must lie in phi_i(U).
    Elt translate(int i, Elt s) const {
      auto u = to_core(i, s);
      if (!u) {
        throw PreconditionFailed("translate: element outside the core image");
      }
      return phi(3 - i, *u);
    }

    std::string const& label() const noexcept {
      return _label;
    }

   private:
    static constexpr Elt NONE = static_cast<Elt>(-1);

    ActorPtr                        _core;
    std::array<CoreEmbedding, 2>    _emb;
    std::array<std::vector<Elt>, 2> _pre;
    std::string                     _label;
  };

  ////////////////////////////////////////////////////////////////////////
  // Words
  ////////////////////////////////////////////////////////////////////////

  struct Letter {
    int factor = 1;
    Elt elt    = 0;

    auto operator<=>(Letter const&) const = default;
  };

  using Word = std::vector<Letter>;

  inline std::string to_string(PoAmalgam const& A, Word const& w) {
    if (w.empty()) {
      return "()";
    }
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i != 0) {
        out += ' ';
      }
      out += std::to_string(w[i].factor) + ":" + A.factor(w[i].factor)->name(w[i].elt);
    }
    return out;
  }

  //! Space separated "factor:element" tokens; "()" or "" is the empty word.
  inline Word parse_word(PoAmalgam const& A, std::string const& text) {
    Word               w;
    std::istringstream in(text);
    std::string        tok;
    while (in >> tok) {
      if (tok == "()") {
        continue;
      }
      auto colon = tok.find(':');
      if (colon == std::string::npos
          || (tok.substr(0, colon) != "1" && tok.substr(0, colon) != "2")) {
        throw Error("parse_word: expected factor:element, got '" + tok + "'");
      }
      int  f = tok[0] - '0';
      auto e = A.factor(f)->order().find(tok.substr(colon + 1));
      if (!e) {
        throw UnresolvedReference(0, tok);
      }
      w.push_back({f, *e});
    }
    return w;
  }

  //! Merge adjacent letters of one factor and drop identities.
  inline Word normalize(PoAmalgam const& A, Word const& w) {
    Word out;
    for (Letter l : w) {
      Pomonoid const& S = *A.factor(l.factor);
      if (!out.empty() && out.back().factor == l.factor) {
        l.elt = S.mult(out.back().elt, l.elt);
        out.pop_back();
      }
      if (l.elt != S.identity()) {
        out.push_back(l);
      }
    }
    return out;
  }

  inline Word word_mult(PoAmalgam const& A, Word const& w, Word const& v) {
    Word c = w;
    c.insert(c.end(), v.begin(), v.end());
    return normalize(A, c);
  }

  inline bool word_syntactic_leq(PoAmalgam const& A, Word const& w, Word const& v) {
    if (w.size() != v.size()) {
      return false;
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i].factor != v[i].factor
          || !A.factor(w[i].factor)->leq(w[i].elt, v[i].elt)) {
        return false;
      }
    }
    return true;
  }

  ////////////////////////////////////////////////////////////////////////
  // Steps
  ////////////////////////////////////////////////////////////////////////

  enum class StepKind { S, M, E, O };

  inline char step_char(StepKind k) noexcept {
    return "SMEO"[static_cast<int>(k)];
  }

  //! One step w -> w'. `variant` is 'a'..'f' for E-steps. `u` is a core
  //! element; `a` and `b` are the split parts of M- and E-steps and `a`
  //! the raised letter of an O-step.
  struct StepRecord {
    Word     from;
    Word     to;
    StepKind kind    = StepKind::O;
    char     variant = 0;
    std::size_t pos  = 0;
    Elt      u       = 0;
    Elt      a       = 0;
    Elt      b       = 0;
  };

  using StepTrace = std::vector<StepRecord>;

  namespace detail {
    //! A single identity letter is the empty word.
    inline Word canonical_word(PoAmalgam const& A, Word w) {
      if (w.size() == 1 && w[0].elt == A.factor(w[0].factor)->identity()) {
        w.clear();
      }
      return w;
    }

    //! Factorisations of each element of each factor through the core.
    struct Decompositions {
      // x = a phi(u) b
      std::array<std::vector<std::vector<std::array<Elt, 3>>>, 2> mid;
      // x = a phi(u)
      std::array<std::vector<std::vector<std::array<Elt, 2>>>, 2> right;
      // x = phi(u) b
      std::array<std::vector<std::vector<std::array<Elt, 2>>>, 2> left;
      std::array<std::vector<std::vector<Elt>>, 2>                up, down;

      explicit Decompositions(PoAmalgam const& A) {
        std::size_t nu = A.core()->size();
        for (int i = 0; i < 2; ++i) {
          Pomonoid const& S = *A.factor(i + 1);
          std::size_t     n = S.size();
          mid[i].resize(n);
          right[i].resize(n);
          left[i].resize(n);
          up[i].resize(n);
          down[i].resize(n);
          for (Elt u = 0; u < nu; ++u) {
            Elt p = A.phi(i + 1, u);
            for (Elt a = 0; a < n; ++a) {
              right[i][S.mult(a, p)].push_back({a, u});
              left[i][S.mult(p, a)].push_back({u, a});
              for (Elt b = 0; b < n; ++b) {
                mid[i][S.mult(S.mult(a, p), b)].push_back({a, u, b});
              }
            }
          }
          for (Elt x = 0; x < n; ++x) {
            for (Elt y = 0; y < n; ++y) {
              if (x != y && S.leq(x, y)) {
                up[i][x].push_back(y);
                down[i][y].push_back(x);
              }
            }
          }
        }
      }
    };

    inline int other(int f) noexcept {
      return 3 - f;
    }
  }  // namespace detail

  //! Applies the step described by r (ignoring r.to) to r.from; nullopt if
  //! the step does not fit the word.
  inline std::optional<Word> apply_step(PoAmalgam const& A, StepRecord const& r) {
    Word const& w = r.from;
    std::size_t n = w.size(), i = r.pos;
    if (r.u >= A.core()->size()) {
      return std::nullopt;
    }
    auto fits = [&](std::size_t k) { return k < n; };
    auto S    = [&](int f) -> Pomonoid const& { return *A.factor(f); };
    auto in_range = [&](int f, Elt x) { return x < S(f).size(); };
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (w[k].factor == w[k + 1].factor) {
        return std::nullopt;
      }
    }
    Word out;
    switch (r.kind) {
      case StepKind::S: {
        if (i == 0 || !fits(i + 1) || A.to_core(w[i].factor, w[i].elt) != r.u) {
          return std::nullopt;
        }
        int j = w[i - 1].factor;
        Elt m = S(j).mult(S(j).mult(w[i - 1].elt, A.phi(j, r.u)), w[i + 1].elt);
        out.assign(w.begin(), w.begin() + i - 1);
        out.push_back({j, m});
        out.insert(out.end(), w.begin() + i + 2, w.end());
        break;
      }
      case StepKind::M: {
        if (!fits(i)) {
          return std::nullopt;
        }
        int j = w[i].factor;
        if (!in_range(j, r.a) || !in_range(j, r.b)
            || S(j).mult(S(j).mult(r.a, A.phi(j, r.u)), r.b) != w[i].elt) {
          return std::nullopt;
        }
        out.assign(w.begin(), w.begin() + i);
        out.push_back({j, r.a});
        out.push_back({detail::other(j), A.phi(detail::other(j), r.u)});
        out.push_back({j, r.b});
        out.insert(out.end(), w.begin() + i + 1, w.end());
        break;
      }
      case StepKind::E: {
        out = w;
        switch (r.variant) {
          case 'a': {
            if (!fits(i + 1)) {
              return std::nullopt;
            }
            int j = w[i].factor, k = w[i + 1].factor;
            if (!in_range(j, r.a) || S(j).mult(r.a, A.phi(j, r.u)) != w[i].elt) {
              return std::nullopt;
            }
            out[i].elt     = r.a;
            out[i + 1].elt = S(k).mult(A.phi(k, r.u), w[i + 1].elt);
            break;
          }
          case 'b': {
            if (!fits(i + 1)) {
              return std::nullopt;
            }
            int j = w[i].factor, k = w[i + 1].factor;
            if (!in_range(k, r.b) || S(k).mult(A.phi(k, r.u), r.b) != w[i + 1].elt) {
              return std::nullopt;
            }
            out[i].elt     = S(j).mult(w[i].elt, A.phi(j, r.u));
            out[i + 1].elt = r.b;
            break;
          }
          case 'c': {
            if (n == 0 || i != n - 1) {
              return std::nullopt;
            }
            int j = w[i].factor;
            if (!in_range(j, r.a) || S(j).mult(r.a, A.phi(j, r.u)) != w[i].elt) {
              return std::nullopt;
            }
            out[i].elt = r.a;
            out.push_back({detail::other(j), A.phi(detail::other(j), r.u)});
            break;
          }
          case 'd': {
            if (n < 2 || i != n - 1 || A.to_core(w[i].factor, w[i].elt) != r.u) {
              return std::nullopt;
            }
            int j = w[i - 1].factor;
            out.pop_back();
            out.back().elt = S(j).mult(w[i - 1].elt, A.phi(j, r.u));
            break;
          }
          case 'e': {
            if (n == 0 || i != 0) {
              return std::nullopt;
            }
            int j = w[0].factor;
            if (!in_range(j, r.b) || S(j).mult(A.phi(j, r.u), r.b) != w[0].elt) {
              return std::nullopt;
            }
            out[0].elt = r.b;
            out.insert(out.begin(), Letter{detail::other(j), A.phi(detail::other(j), r.u)});
            break;
          }
          case 'f': {
            if (n < 2 || i != 0 || A.to_core(w[0].factor, w[0].elt) != r.u) {
              return std::nullopt;
            }
            int j = w[1].factor;
            out.erase(out.begin());
            out[0].elt = S(j).mult(A.phi(j, r.u), w[1].elt);
            break;
          }
          default:
            return std::nullopt;
        }
        break;
      }
      case StepKind::O: {
        if (!fits(i) || !in_range(w[i].factor, r.a)
            || !S(w[i].factor).leq(w[i].elt, r.a)) {
          return std::nullopt;
        }
        out        = w;
        out[i].elt = r.a;
        break;
      }
    }
    return detail::canonical_word(A, std::move(out));
  }

  namespace detail {
    //! The words reachable from w by one step; O-steps go up (or down when
    //! `down`). Every record has `to` filled in.
    inline void for_each_step(PoAmalgam const&      A,
                              Decompositions const& D,
                              Word const&           w0,
                              bool                  down,
                              auto&&                visit) {
      std::vector<Word> spellings;
      if (w0.empty()) {
        spellings.push_back({{1, A.factor(1)->identity()}});
        spellings.push_back({{2, A.factor(2)->identity()}});
      } else {
        spellings.push_back(w0);
      }
      for (Word const& w : spellings) {
        std::size_t n    = w.size();
        auto        emit = [&](StepRecord r) {
          r.from = w;
          auto to = apply_step(A, r);
          if (to) {
            r.to = std::move(*to);
            visit(r);
          }
        };
        for (std::size_t i = 0; i < n; ++i) {
          int f = w[i].factor - 1;
          Elt x = w[i].elt;
          if (i > 0 && i + 1 < n) {
            if (auto u = A.to_core(w[i].factor, x)) {
              emit({{}, {}, StepKind::S, 0, i, *u, 0, 0});
            }
          }
          for (auto [a, u, b] : D.mid[f][x]) {
            emit({{}, {}, StepKind::M, 0, i, u, a, b});
          }
          if (i + 1 < n) {
            for (auto [a, u] : D.right[f][x]) {
              emit({{}, {}, StepKind::E, 'a', i, u, a, 0});
            }
            for (auto [u, b] : D.left[w[i + 1].factor - 1][w[i + 1].elt]) {
              emit({{}, {}, StepKind::E, 'b', i, u, 0, b});
            }
          }
          for (Elt y : (down ? D.down : D.up)[f][x]) {
            if (!down) {
              emit({{}, {}, StepKind::O, 0, i, 0, y, 0});
            } else {
              // the step runs from the lowered word back up to w
              StepRecord r{{}, {}, StepKind::O, 0, i, 0, x, 0};
              r.from        = w;
              r.from[i].elt = y;
              r.from        = canonical_word(A, r.from);
              r.to          = canonical_word(A, w);
              visit(r);
            }
          }
        }
        if (n > 0) {
          int f = w[n - 1].factor - 1;
          for (auto [a, u] : D.right[f][w[n - 1].elt]) {
            emit({{}, {}, StepKind::E, 'c', n - 1, u, a, 0});
          }
          if (auto u = A.to_core(w[n - 1].factor, w[n - 1].elt); u && n >= 2) {
            emit({{}, {}, StepKind::E, 'd', n - 1, *u, 0, 0});
          }
          for (auto [u, b] : D.left[w[0].factor - 1][w[0].elt]) {
            emit({{}, {}, StepKind::E, 'e', 0, u, 0, b});
          }
          if (auto u = A.to_core(w[0].factor, w[0].elt); u && n >= 2) {
            emit({{}, {}, StepKind::E, 'f', 0, *u, 0, 0});
          }
        }
      }
    }
  }  // namespace detail

  //! All one-step successors of w.
  inline std::vector<StepRecord> step_neighbors(PoAmalgam const& A, Word const& w) {
    detail::Decompositions  D(A);
    std::vector<StepRecord> out;
    detail::for_each_step(A, D, detail::canonical_word(A, w), false,
                          [&](StepRecord const& r) { out.push_back(r); });
    return out;
  }

  //! Empty when every step applies and the trace runs from w to v.
  inline std::string replay(PoAmalgam const& A,
                            StepTrace const& t,
                            Word const&      w,
                            Word const&      v) {
    Word cur = detail::canonical_word(A, w);
    for (std::size_t k = 0; k < t.size(); ++k) {
      StepRecord const& r = t[k];
      if (detail::canonical_word(A, r.from) != cur) {
        return "step " + std::to_string(k) + " starts from the wrong word";
      }
      auto to = apply_step(A, r);
      if (!to || *to != r.to) {
        return "step " + std::to_string(k) + " (" + step_char(r.kind)
               + ") does not apply";
      }
      cur = *to;
    }
    if (cur != detail::canonical_word(A, v)) {
      return "trace ends at " + to_string(A, cur);
    }
    return {};
  }

  struct WordVerdict {
    bool        yes = false;
    StepTrace   trace;
    std::size_t states  = 0;
    std::string scope   = "unknown";  // "exact" for a Yes
  };

  struct WordSearchLimits {
    std::size_t depth      = 8;
    std::size_t max_states = 400000;
  };

  //! Searches for a derivation w -> ... -> v of at most `depth` steps.
  //! Words are capped in length; the cap grows from the longer input up to
  //! depth letters beyond it. No derivation within the bound is Unknown.
  class WordSearch {
   public:
    explicit WordSearch(PoAmalgam const& A) : _A(A), _D(A) {}

    WordVerdict leq(Word const& w0, Word const& v0, WordSearchLimits lim = {}) const {
      Word        w = detail::canonical_word(_A, w0), v = detail::canonical_word(_A, v0);
      WordVerdict out;
      if (w == v) {
        out.yes   = true;
        out.scope = "exact";
        return out;
      }
      std::size_t base = std::max(w.size(), v.size());
      for (std::size_t cap = base; cap <= base + lim.depth; cap += 2) {
        bool exhausted = false;
        auto path = search(w, v, lim.depth, cap, lim.max_states, out.states, exhausted);
        if (path) {
          out.yes   = true;
          out.scope = "exact";
          out.trace = to_trace(*path);
          return out;
        }
        if (exhausted) {
          break;
        }
      }
      return out;
    }

   private:
    using Parent = std::unordered_map<std::string, std::string>;

    static std::string key(Word const& w) {
      std::string k;
      for (Letter l : w) {
        k.push_back(static_cast<char>(l.factor));
        k.append(reinterpret_cast<char const*>(&l.elt), sizeof(Elt));
      }
      return k;
    }

    static Word unkey(std::string const& k) {
      Word w;
      for (std::size_t p = 0; p < k.size(); p += 1 + sizeof(Elt)) {
        Letter l;
        l.factor = k[p];
        std::memcpy(&l.elt, k.data() + p + 1, sizeof(Elt));
        w.push_back(l);
      }
      return w;
    }

    // bidirectional BFS; returns the words along a path
    std::optional<std::vector<Word>> search(Word const& w,
                                            Word const& v,
                                            std::size_t depth,
                                            std::size_t cap,
                                            std::size_t max_states,
                                            std::size_t& states,
                                            bool&        exhausted) const {
      Parent                   fwd, bwd;
      std::vector<std::string> ff{key(w)}, bf{key(v)};
      fwd.emplace(ff[0], std::string{});
      bwd.emplace(bf[0], std::string{});
      std::size_t used = 0;
      std::optional<std::string> meet;
      while (used < depth && !meet && !(ff.empty() && bf.empty())) {
        bool forward = !ff.empty() && (bf.empty() || ff.size() <= bf.size());
        std::vector<std::string>& frontier = forward ? ff : bf;
        Parent&                   mine     = forward ? fwd : bwd;
        Parent const&             theirs   = forward ? bwd : fwd;
        std::vector<std::string>  next;
        for (std::string const& k : frontier) {
          Word cur = unkey(k);
          detail::for_each_step(_A, _D, cur, !forward, [&](StepRecord const& r) {
            if (meet) {
              return;
            }
            Word const& nb = !forward && r.kind == StepKind::O ? r.from : r.to;
            if (nb.size() > cap) {
              return;
            }
            std::string nk = key(nb);
            if (mine.emplace(nk, k).second) {
              ++states;
              if (theirs.count(nk)) {
                meet = nk;
              }
              next.push_back(std::move(nk));
            }
          });
          if (meet) {
            break;
          }
          if (states > max_states) {
            exhausted = true;
            return std::nullopt;
          }
        }
        frontier = std::move(next);
        ++used;
      }
      if (!meet) {
        return std::nullopt;
      }
      std::vector<Word> path;
      for (std::string k = *meet; !k.empty(); k = fwd.at(k)) {
        path.push_back(unkey(k));
      }
      std::reverse(path.begin(), path.end());
      for (std::string k = bwd.at(*meet); !k.empty(); k = bwd.at(k)) {
        path.push_back(unkey(k));
      }
      return path;
    }

    StepTrace to_trace(std::vector<Word> const& path) const {
      StepTrace t;
      for (std::size_t p = 0; p + 1 < path.size(); ++p) {
        std::optional<StepRecord> found;
        detail::for_each_step(_A, _D, path[p], false, [&](StepRecord const& r) {
          if (!found && r.to == path[p + 1]) {
            found = r;
          }
        });
        if (!found) {
          throw Error("word search: path edge without a step");
        }
        t.push_back(*found);
      }
      return t;
    }

    PoAmalgam const&       _A;
    detail::Decompositions _D;
  };

  inline WordVerdict word_leq_bounded(PoAmalgam const& A,
                                      Word const&      w,
                                      Word const&      v,
                                      std::size_t      depth = 8) {
    return WordSearch(A).leq(w, v, {depth});
  }

  ////////////////////////////////////////////////////////////////////////
  // The tower Y_n
  ////////////////////////////////////////////////////////////////////////

  //! Size guard on the pair carrier |Y_{n-1}| |S_i| of a level;
  //! POMALG_MAX_CELLS overrides the default.
  inline std::size_t default_size_guard() {
    if (char const* e = std::getenv("POMALG_MAX_CELLS")) {
      if (auto v = std::strtoull(e, nullptr, 10); v > 0) {
        return v;
      }
    }
    return 2000;
  }

  struct TowerLevel {
    std::size_t      n = 1;
    SPosetPtr        Y;       // (U, S_i)-poset, i = 1 for odd n, 2 for even n
    SPosetPtr        YU;      // Y as a (U, U)-poset
    TensorPoset      pairs;   // Y_{n-1} (x) S_i, classes of Y_n (n >= 2)
    std::vector<Elt> k;       // k_{n-1} : Y_{n-1} -> Y_n
    std::vector<Elt> k_from1; // k^{n-1} : S1 -> Y_n
    std::vector<Elt> h;       // h^{n-1} : S2 -> Y_n
  };

  class Tower {
   public:
    Tower(PoAmalgam A) : _A(std::move(A)) {}

    PoAmalgam const& amalgam() const noexcept {
      return _A;
    }

    std::size_t height() const noexcept {
      return _levels.size();
    }

    //! Level n, 1-based.
    TowerLevel const& level(std::size_t n) const {
      return _levels.at(n - 1);
    }

    //! Factor of the n-th letter of a bracket.
    static int factor_at(std::size_t n) noexcept {
      return n % 2 == 1 ? 1 : 2;
    }

    //! [s_1, ..., s_n] in Y_n.
    Elt bracket(std::vector<Elt> const& s) const {
      if (s.empty() || s.size() > height()) {
        throw PreconditionFailed("bracket: length outside the built tower");
      }
      Elt y = s[0];
      for (std::size_t m = 2; m <= s.size(); ++m) {
        y = level(m).pairs.cls(y, s[m - 1]);
      }
      return y;
    }

    //! The word (s_1, ..., s_n) of a bracket.
    static Word word_of(std::vector<Elt> const& s) {
      Word w;
      for (std::size_t m = 1; m <= s.size(); ++m) {
        w.push_back({factor_at(m), s[m - 1]});
      }
      return w;
    }

    //! Every tuple of length n, odd places from S1, even from S2.
    void for_each_tuple(std::size_t n, auto&& visit) const {
      if (n == 0) {
        return;
      }
      std::vector<Elt> s(n, 0);
      while (true) {
        visit(std::as_const(s));
        std::size_t m = n;
        while (true) {
          if (m == 0) {
            return;
          }
          --m;
          if (++s[m] < _A.factor(factor_at(m + 1))->size()) {
            break;
          }
          s[m] = 0;
        }
      }
    }

   private:
    friend Tower build_tower(PoAmalgam const&, std::size_t, std::size_t);

    PoAmalgam               _A;
    std::vector<TowerLevel> _levels;
  };

  inline Tower build_tower(PoAmalgam const& A,
                           std::size_t      N,
                           std::size_t      guard = default_size_guard()) {
    if (N == 0) {
      throw PreconditionFailed("build_tower: need at least one level");
    }
    Tower T(A);
    auto  uu = [&](SPosetPtr const& Y, int i) {
      return restrict_right(*Y, A.embedding(i));
    };
    TowerLevel one;
    one.Y  = as_u_s_poset(A.embedding(1));
    one.YU = uu(one.Y, 1);
    one.k_from1.resize(A.factor(1)->size());
    for (Elt s = 0; s < one.k_from1.size(); ++s) {
      one.k_from1[s] = s;
    }
    T._levels.push_back(std::move(one));
    for (std::size_t n = 2; n <= N; ++n) {
      int               i    = Tower::factor_at(n);
      TowerLevel const& prev = T._levels.back();
      std::size_t       cells = prev.Y->size() * A.factor(i)->size();
      if (cells > guard) {
        throw SizeGuardExceeded(n, cells, guard);
      }
      TowerLevel L;
      L.n = n;
      std::string label = "Y" + std::to_string(n);
      if (n == 2) {
        L.pairs = tensor(prev.YU, as_u_s_poset(A.embedding(2)), label);
        L.Y     = L.pairs.result();
        L.k.resize(prev.Y->size());
        for (Elt s = 0; s < L.k.size(); ++s) {
          L.k[s] = L.pairs.cls(s, A.factor(2)->identity());
        }
        L.h.resize(A.factor(2)->size());
        for (Elt s = 0; s < L.h.size(); ++s) {
          L.h[s] = L.pairs.cls(A.factor(1)->identity(), s);
        }
      } else {
        TowerLevel const& before = T._levels[n - 3];
        FreeExtension     E = free_extension(
            A.embedding(i), before.Y, prev.YU, prev.k, label);
        L.pairs = E.YS;
        L.Y     = E.F;
        L.k     = E.g;
        L.h.resize(prev.h.size());
        for (Elt s = 0; s < L.h.size(); ++s) {
          L.h[s] = L.k[prev.h[s]];
        }
      }
      L.YU = uu(L.Y, i);
      L.k_from1.resize(prev.k_from1.size());
      for (Elt s = 0; s < L.k_from1.size(); ++s) {
        L.k_from1[s] = L.k[prev.k_from1[s]];
      }
      T._levels.push_back(std::move(L));
    }
    return T;
  }

  //! The identity [.., s_{i-1}, 1, s_{i+1}, ..] = [.., s_{i-1}s_{i+1}, .., 1, 1]
  //! at level n; returns the failing instances.
  inline std::vector<std::string> bracket_identity_failures(Tower const& T, std::size_t n) {
    std::vector<std::string> out;
    PoAmalgam const&         A = T.amalgam();
    T.for_each_tuple(n, [&](std::vector<Elt> const& s) {
      for (std::size_t i = 2; i + 1 <= n; ++i) {
        Pomonoid const& Si = *A.factor(Tower::factor_at(i));
        if (s[i - 1] != Si.identity()) {
          continue;
        }
        Pomonoid const&  Sj = *A.factor(Tower::factor_at(i - 1));
        std::vector<Elt> t(s.begin(), s.begin() + (i - 1));
        t.back() = Sj.mult(s[i - 2], s[i]);
        t.insert(t.end(), s.begin() + (i + 1), s.end());
        t.push_back(A.factor(Tower::factor_at(n - 1))->identity());
        t.push_back(A.factor(Tower::factor_at(n))->identity());
        if (T.bracket(s) != T.bracket(t)) {
          out.push_back(to_string(A, Tower::word_of(s)) + " vs "
                        + to_string(A, Tower::word_of(t)));
        }
      }
    });
    return out;
  }

  //! Raising one letter at a position i >= 2 raises the bracket.
  inline std::vector<std::string> bracket_monotone_failures(Tower const& T, std::size_t n) {
    std::vector<std::string> out;
    PoAmalgam const&         A = T.amalgam();
    T.for_each_tuple(n, [&](std::vector<Elt> const& s) {
      Elt y = T.bracket(s);
      for (std::size_t i = 2; i <= n; ++i) {
        Pomonoid const& Si = *A.factor(Tower::factor_at(i));
        for (Elt t = 0; t < Si.size(); ++t) {
          if (t == s[i - 1] || !Si.leq(s[i - 1], t)) {
            continue;
          }
          std::vector<Elt> r = s;
          r[i - 1]           = t;
          if (!T.level(n).Y->leq(y, T.bracket(r))) {
            out.push_back(to_string(A, Tower::word_of(s)) + " !<= "
                          + to_string(A, Tower::word_of(r)));
          }
        }
      }
    });
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Embeddability
  ////////////////////////////////////////////////////////////////////////

  enum class EmbedVerdict { weak_to_depth, strong_to_depth, refuted, unknown };

  inline char const* verdict_name(EmbedVerdict v) noexcept {
    switch (v) {
      case EmbedVerdict::weak_to_depth:
        return "weak-po-embeddable-to-depth-N";
      case EmbedVerdict::strong_to_depth:
        return "strongly-po-embeddable-to-depth-N";
      case EmbedVerdict::refuted:
        return "refuted";
      default:
        return "unknown";
    }
  }

  //! s <= t fails in the factor while its images compare, or the reverse.
  struct EmbeddingWitness {
    std::size_t n      = 0;  // Y_{n+1} receives k^n / h^n
    int         factor = 1;
    Elt         s      = 0;
    Elt         t      = 0;
  };

  struct EmbeddabilityReport {
    std::size_t                     depth = 0;
    std::vector<bool>               k_embedding;  // k^n, n = 1..depth-1
    std::vector<bool>               h_embedding;  // h^n
    bool                            strong_condition = false;
    std::optional<std::pair<Elt, Elt>> strong_witness;  // s1 (x) 1 = 1 (x) s2
    EmbedVerdict                    verdict = EmbedVerdict::unknown;
    std::optional<EmbeddingWitness> witness;
  };

  namespace detail {
    inline std::optional<EmbeddingWitness> embedding_failure(Pomonoid const& S,
                                                             Poset const&    Y,
                                                             std::vector<Elt> const& m) {
      for (Elt s = 0; s < S.size(); ++s) {
        for (Elt t = 0; t < S.size(); ++t) {
          if (S.leq(s, t) != Y.leq(m[s], m[t])) {
            return EmbeddingWitness{0, 0, s, t};
          }
        }
      }
      return std::nullopt;
    }
  }  // namespace detail

  //! s1 (x) 1 = 1 (x) s2 in Y_2 only for s1 = phi1(u), s2 = phi2(u).
  inline std::optional<std::pair<Elt, Elt>> strong_condition_failure(Tower const& T) {
    PoAmalgam const& A  = T.amalgam();
    TensorPoset const& Y2 = T.level(2).pairs;
    Elt                one1 = A.factor(1)->identity(), one2 = A.factor(2)->identity();
    for (Elt s1 = 0; s1 < A.factor(1)->size(); ++s1) {
      for (Elt s2 = 0; s2 < A.factor(2)->size(); ++s2) {
        if (Y2.cls(s1, one2) != Y2.cls(one1, s2)) {
          continue;
        }
        auto u = A.to_core(1, s1);
        if (!u || A.phi(2, *u) != s2) {
          return std::pair{s1, s2};
        }
      }
    }
    return std::nullopt;
  }

  inline EmbeddabilityReport embeddability_report(Tower const& T) {
    EmbeddabilityReport r;
    PoAmalgam const&    A = T.amalgam();
    r.depth               = T.height();
    if (r.depth < 2) {
      return r;
    }
    for (std::size_t n = 2; n <= r.depth; ++n) {
      TowerLevel const& L = T.level(n);
      auto kf = detail::embedding_failure(*A.factor(1), L.Y->order(), L.k_from1);
      auto hf = detail::embedding_failure(*A.factor(2), L.Y->order(), L.h);
      r.k_embedding.push_back(!kf);
      r.h_embedding.push_back(!hf);
      if (!r.witness && (kf || hf)) {
        r.witness         = kf ? *kf : *hf;
        r.witness->n      = n - 1;
        r.witness->factor = kf ? 1 : 2;
      }
    }
    r.strong_witness   = strong_condition_failure(T);
    r.strong_condition = !r.strong_witness;
    if (r.witness) {
      r.verdict = EmbedVerdict::refuted;
    } else {
      r.verdict = r.strong_condition ? EmbedVerdict::strong_to_depth
                                     : EmbedVerdict::weak_to_depth;
    }
    return r;
  }

  //! Whether the witness shows k^n (or h^n) failing to be an order embedding.
  inline bool replay(Tower const& T, EmbeddingWitness const& w) {
    if (w.n + 1 > T.height() || w.n == 0) {
      return false;
    }
    TowerLevel const&       L = T.level(w.n + 1);
    Pomonoid const&         S = *T.amalgam().factor(w.factor);
    std::vector<Elt> const& m = w.factor == 1 ? L.k_from1 : L.h;
    return S.leq(w.s, w.t) != L.Y->leq(m[w.s], m[w.t]);
  }

  struct TowerWordsReport {
    std::size_t pairs   = 0;  // tuple pairs with [s..] <= [t..]
    std::size_t yes     = 0;
    std::size_t unknown = 0;
    std::size_t replay_failures = 0;
    std::vector<std::pair<Word, Word>> unknown_pairs;
  };

  //! For tuple pairs with [s..] <= [t..] in Y_n, searches the word order.
  //! With a sample size, that many pairs are drawn with `rng`; otherwise
  //! every pair is tried. Unknown means no derivation within the bound.
  template <typename Rng = std::mt19937_64>
  TowerWordsReport tower_vs_words(Tower const& T,
                                  std::size_t  n,
                                  std::size_t  depth,
                                  Rng*         rng    = nullptr,
                                  std::size_t  sample = 0) {
    TowerWordsReport              r;
    PoAmalgam const&              A = T.amalgam();
    WordSearch                    search(A);
    std::vector<std::vector<Elt>> tuples;
    std::vector<Elt>              cls;
    T.for_each_tuple(n, [&](std::vector<Elt> const& s) {
      tuples.push_back(s);
      cls.push_back(T.bracket(s));
    });
    Poset const& Y = T.level(n).Y->order();
    std::vector<std::pair<std::size_t, std::size_t>> todo;
    for (std::size_t p = 0; p < tuples.size(); ++p) {
      for (std::size_t q = 0; q < tuples.size(); ++q) {
        if (Y.leq(cls[p], cls[q])) {
          todo.emplace_back(p, q);
        }
      }
    }
    if (rng && sample > 0 && sample < todo.size()) {
      std::vector<std::pair<std::size_t, std::size_t>> picked;
      for (std::size_t c = 0; c < sample; ++c) {
        picked.push_back(todo[(*rng)() % todo.size()]);
      }
      todo = std::move(picked);
    }
    std::map<std::pair<Word, Word>, bool> seen;
    for (auto [p, q] : todo) {
      ++r.pairs;
      Word w = Tower::word_of(tuples[p]), v = Tower::word_of(tuples[q]);
      auto [it, fresh] = seen.try_emplace({w, v}, false);
      if (fresh) {
        WordVerdict wv = search.leq(w, v, {depth});
        it->second     = wv.yes;
        if (wv.yes && !replay(A, wv.trace, w, v).empty()) {
          ++r.replay_failures;
        }
      }
      if (it->second) {
        ++r.yes;
      } else {
        ++r.unknown;
        r.unknown_pairs.emplace_back(w, v);
      }
    }
    return r;
  }

}  // namespace pomalg

#endif  // POMALG_AMALGAM_HPP_
