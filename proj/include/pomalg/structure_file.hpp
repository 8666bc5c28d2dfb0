// pomalg - finite partially ordered monoids and their acts
//
// Line-oriented structure files. Grammar (one statement per line, `#` starts
// a comment, tokens are separated by whitespace; `<=`, `->` and `:` need no
// surrounding spaces):
//
//   pomonoid NAME
//     elements X1 X2 ...
//     identity X                  (optional)
//     table                       (one row per element, in element order)
//       X X ...
//     order                       (pairs or chains generating the order)
//       X <= Y [<= Z ...]
//   end
//
//   sposet NAME over POMONOID side right|left|bi
//     elements A1 A2 ...
//     act right|left              (one row per element, one column per scalar;
//       A A ...                    "act" alone means the only side)
//     order
//       A <= B
//   end
//
//   map NAME : SOURCE -> TARGET   (pomonoids or sposets)
//     X -> Y
//   end
//
//   amalgam NAME core POMONOID via MAP1 MAP2

#ifndef POMALG_STRUCTURE_FILE_HPP_
#define POMALG_STRUCTURE_FILE_HPP_

#include <cctype>    // for isspace
#include <fstream>   // for ifstream
#include <map>       // for map
#include <optional>  // for optional
#include <sstream>   // for ostringstream
#include <string>    // for string
#include <utility>   // for pair
#include <vector>    // for vector

#include "amalgam.hpp"
#include "core.hpp"
#include "errors.hpp"

namespace pomalg {

  enum class BlockKind { pomonoid, sposet, map, amalgam };

  struct MapDecl {
    std::string      name;
    std::string      source;
    std::string      target;
    std::vector<Elt> assignment;
    std::size_t      line = 0;
  };

  struct AmalgamDecl {
    std::string name;
    std::string core;
    std::string map1;
    std::string map2;
    std::size_t line = 0;
  };

  class StructureFile {
   public:
    std::vector<std::pair<BlockKind, std::string>> const& blocks() const noexcept {
      return _blocks;
    }

    bool has(std::string const& name) const {
      return _kinds.count(name) != 0;
    }

    std::optional<BlockKind> kind(std::string const& name) const {
      auto it = _kinds.find(name);
      if (it == _kinds.end()) {
        return std::nullopt;
      }
      return it->second;
    }

    ActorPtr const& pomonoid(std::string const& name) const {
      return find(_pomonoids, name);
    }

    SPosetPtr const& sposet(std::string const& name) const {
      return find(_sposets, name);
    }

    MapDecl const& map(std::string const& name) const {
      return find(_maps, name);
    }

    AmalgamDecl const& amalgam_decl(std::string const& name) const {
      return find(_amalgams, name);
    }

    //! A pomonoid read as a right (or left) S-poset over itself.
    SPosetPtr right_sposet(std::string const& name) const {
      if (kind(name) == BlockKind::pomonoid) {
        return regular_right(pomonoid(name));
      }
      return sposet(name);
    }

    SPosetPtr left_sposet(std::string const& name) const {
      if (kind(name) == BlockKind::pomonoid) {
        return regular_left(pomonoid(name));
      }
      return sposet(name);
    }

    //! A map between pomonoids as an order-embedding homomorphism.
    CoreEmbedding core_embedding(std::string const& name) const {
      MapDecl const& m = map(name);
      return CoreEmbedding(pomonoid(m.source), pomonoid(m.target), m.assignment);
    }

    //! A map between sposets; both must be over the same pomonoid(s).
    SPosetMap sposet_map(std::string const& name) const {
      MapDecl const& m = map(name);
      return analyze_map(m.assignment, sposet(m.source), sposet(m.target));
    }

    PoAmalgam amalgam(std::string const& name) const {
      AmalgamDecl const& a = amalgam_decl(name);
      MapDecl const&     m1 = map(a.map1);
      MapDecl const&     m2 = map(a.map2);
      if (m1.source != a.core || m2.source != a.core) {
        throw PreconditionFailed("amalgam " + name + ": maps must start at " + a.core);
      }
      return PoAmalgam(pomonoid(a.core), pomonoid(m1.target), pomonoid(m2.target),
                       m1.assignment, m2.assignment, name);
    }

    //! Element names of a pomonoid or sposet.
    std::vector<std::string> const& names(std::string const& name) const {
      if (kind(name) == BlockKind::pomonoid) {
        return pomonoid(name)->names();
      }
      return sposet(name)->names();
    }

    void add(std::string const& name, ActorPtr p) {
      _pomonoids[name] = std::move(p);
      record(BlockKind::pomonoid, name);
    }

    void add(std::string const& name, SPosetPtr x) {
      _sposets[name] = std::move(x);
      record(BlockKind::sposet, name);
    }

    void add(MapDecl m) {
      std::string name = m.name;
      _maps[name]      = std::move(m);
      record(BlockKind::map, name);
    }

    void add(AmalgamDecl a) {
      std::string name = a.name;
      _amalgams[name]  = std::move(a);
      record(BlockKind::amalgam, name);
    }

   private:
    template <typename T>
    static T const& find(std::map<std::string, T> const& m, std::string const& name) {
      auto it = m.find(name);
      if (it == m.end()) {
        throw UnresolvedReference(0, name);
      }
      return it->second;
    }

    void record(BlockKind k, std::string const& name) {
      _kinds[name] = k;
      _blocks.emplace_back(k, name);
    }

    std::map<std::string, ActorPtr>               _pomonoids;
    std::map<std::string, SPosetPtr>              _sposets;
    std::map<std::string, MapDecl>                _maps;
    std::map<std::string, AmalgamDecl>            _amalgams;
    std::map<std::string, BlockKind>              _kinds;
    std::vector<std::pair<BlockKind, std::string>> _blocks;
  };

  namespace detail {
    struct Token {
      std::string text;
      std::size_t col;
    };

    struct Line {
      std::size_t        number;
      std::vector<Token> tokens;
    };

    inline std::vector<Token> tokenize(std::string const& s) {
      std::vector<Token> out;
      std::size_t        i = 0, n = s.size();
      while (i < n) {
        char c = s[i];
        if (c == '#') {
          break;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
          ++i;
          continue;
        }
        if (s.compare(i, 2, "<=") == 0 || s.compare(i, 2, "->") == 0) {
          out.push_back({s.substr(i, 2), i + 1});
          i += 2;
          continue;
        }
        if (c == ':') {
          out.push_back({":", i + 1});
          ++i;
          continue;
        }
        std::size_t j = i;
        while (j < n && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '#'
               && s[j] != ':' && s.compare(j, 2, "<=") != 0
               && s.compare(j, 2, "->") != 0) {
          ++j;
        }
        out.push_back({s.substr(i, j - i), i + 1});
        i = j;
      }
      return out;
    }

    inline bool is_keyword(std::string const& w) {
      static char const* const kw[] = {"pomonoid", "sposet", "map",   "amalgam",
                                       "elements", "identity", "table", "order",
                                       "act",      "end",      "over",  "side",
                                       "core",     "via"};
      for (char const* k : kw) {
        if (w == k) {
          return true;
        }
      }
      return false;
    }

    class Parser {
     public:
      explicit Parser(std::string const& text) {
        std::istringstream in(text);
        std::string        s;
        std::size_t        ln = 0;
        while (std::getline(in, s)) {
          ++ln;
          auto t = tokenize(s);
          if (!t.empty()) {
            _lines.push_back({ln, std::move(t)});
          }
        }
      }

      StructureFile run() {
        while (_pos < _lines.size()) {
          Line const& L    = _lines[_pos];
          std::string head = L.tokens[0].text;
          if (head == "pomonoid") {
            pomonoid_block();
          } else if (head == "sposet") {
            sposet_block();
          } else if (head == "map") {
            map_block();
          } else if (head == "amalgam") {
            amalgam_line();
          } else {
            throw SyntaxError(L.number, L.tokens[0].col, "expected a block, got '" + head + "'");
          }
        }
        return std::move(_out);
      }

     private:
      [[noreturn]] static void fail(Line const& L, std::size_t i, std::string const& what) {
        std::size_t col = i < L.tokens.size() ? L.tokens[i].col : L.tokens.back().col;
        throw SyntaxError(L.number, col, what);
      }

      static void expect(Line const& L, std::size_t i, std::string const& w) {
        if (i >= L.tokens.size() || L.tokens[i].text != w) {
          fail(L, i, "expected '" + w + "'");
        }
      }

      static void arity(Line const& L, std::size_t n) {
        if (L.tokens.size() != n) {
          fail(L, std::min(n, L.tokens.size() - 1), "wrong number of tokens");
        }
      }

      std::string new_name(Line const& L, std::size_t i) {
        if (i >= L.tokens.size()) {
          fail(L, i, "missing name");
        }
        std::string const& n = L.tokens[i].text;
        if (is_keyword(n) || n == "<=" || n == "->" || n == ":") {
          fail(L, i, "'" + n + "' cannot be a name");
        }
        if (_out.has(n)) {
          fail(L, i, "duplicate block name '" + n + "'");
        }
        return n;
      }

      static std::vector<std::string> element_names(Line const& L) {
        std::vector<std::string> names;
        for (std::size_t i = 1; i < L.tokens.size(); ++i) {
          std::string const& n = L.tokens[i].text;
          if (is_keyword(n) || n == "<=" || n == "->" || n == ":") {
            fail(L, i, "'" + n + "' cannot be an element name");
          }
          if (std::find(names.begin(), names.end(), n) != names.end()) {
            fail(L, i, "duplicate element '" + n + "'");
          }
          names.push_back(n);
        }
        if (names.empty()) {
          fail(L, 0, "no elements");
        }
        return names;
      }

      static Elt lookup(std::vector<std::string> const& names, Line const& L, std::size_t i) {
        auto it = std::find(names.begin(), names.end(), L.tokens[i].text);
        if (it == names.end()) {
          throw UnresolvedReference(L.number, L.tokens[i].text);
        }
        return static_cast<Elt>(it - names.begin());
      }

      static void order_line(std::vector<std::string> const& names,
                             Line const&                     L,
                             std::vector<std::pair<Elt, Elt>>& pairs) {
        if (L.tokens.size() < 3 || L.tokens.size() % 2 == 0) {
          fail(L, 0, "expected 'x <= y'");
        }
        for (std::size_t i = 1; i < L.tokens.size(); i += 2) {
          expect(L, i, "<=");
        }
        for (std::size_t i = 0; i + 2 < L.tokens.size(); i += 2) {
          pairs.emplace_back(lookup(names, L, i), lookup(names, L, i + 2));
        }
      }

      // Collects the lines up to `end`, split by section keywords.
      std::map<std::string, std::vector<Line const*>> sections(Line const&                     head,
                                                               std::vector<std::string> const& keys,
                                                               std::map<std::string, Line const*>& key_lines) {
        std::map<std::string, std::vector<Line const*>> out;
        std::string                                     current;
        ++_pos;
        while (true) {
          if (_pos >= _lines.size()) {
            fail(head, 0, "block not closed by 'end'");
          }
          Line const&        L = _lines[_pos++];
          std::string const& w = L.tokens[0].text;
          if (w == "end") {
            arity(L, 1);
            return out;
          }
          if (w == "pomonoid" || w == "sposet" || w == "map" || w == "amalgam") {
            fail(L, 0, "block not closed by 'end'");
          }
          std::string key = w;
          if (w == "act") {
            key = L.tokens.size() > 1 ? "act " + L.tokens[1].text : "act";
          }
          if (std::find(keys.begin(), keys.end(), key) != keys.end()) {
            if (key_lines.count(key)) {
              fail(L, 0, "repeated section '" + key + "'");
            }
            key_lines[key] = &L;
            current        = key;
            out[key];
            continue;
          }
          if (current.empty() || current == "elements" || current == "identity") {
            fail(L, 0, "unexpected '" + w + "'");
          }
          out[current].push_back(&L);
        }
      }

      static std::vector<Elt> rows(std::vector<Line const*> const& body,
                                   std::vector<std::string> const& row_names,
                                   std::vector<std::string> const& value_names,
                                   std::size_t                     width,
                                   Line const&                     header) {
        if (body.size() != row_names.size()) {
          fail(header, 0, "expected " + std::to_string(row_names.size()) + " rows, got "
                              + std::to_string(body.size()));
        }
        std::vector<Elt> out;
        for (Line const* L : body) {
          if (L->tokens.size() != width) {
            fail(*L, std::min(width, L->tokens.size() - 1),
                 "expected " + std::to_string(width) + " entries");
          }
          for (std::size_t i = 0; i < width; ++i) {
            out.push_back(lookup(value_names, *L, i));
          }
        }
        return out;
      }

      void pomonoid_block() {
        Line const& head = _lines[_pos];
        arity(head, 2);
        std::string                        name = new_name(head, 1);
        std::map<std::string, Line const*> keys;
        auto secs = sections(head, {"elements", "identity", "table", "order"}, keys);
        if (!keys.count("elements")) {
          fail(head, 0, "pomonoid without 'elements'");
        }
        auto names = element_names(*keys["elements"]);
        if (!keys.count("table")) {
          fail(head, 0, "pomonoid without 'table'");
        }
        std::optional<Elt> id;
        if (keys.count("identity")) {
          Line const& L = *keys["identity"];
          arity(L, 2);
          id = lookup(names, L, 1);
        }
        std::vector<Elt> table = rows(secs["table"], names, names, names.size(), *keys["table"]);
        std::vector<std::pair<Elt, Elt>> pairs;
        for (Line const* L : secs["order"]) {
          order_line(names, *L, pairs);
        }
        Poset order = closure_order(names.size(), pairs, names);
        _out.add(name, std::make_shared<Pomonoid const>(
                           PomonoidCandidate{std::move(order), std::move(table), id}, name));
      }

      void sposet_block() {
        Line const& head = _lines[_pos];
        arity(head, 6);
        std::string name = new_name(head, 1);
        expect(head, 2, "over");
        expect(head, 4, "side");
        std::string const& actor = head.tokens[3].text;
        if (_out.kind(actor) != BlockKind::pomonoid) {
          throw UnresolvedReference(head.number, actor);
        }
        ActorPtr           S    = _out.pomonoid(actor);
        std::string const& side = head.tokens[5].text;
        if (side != "right" && side != "left" && side != "bi") {
          fail(head, 5, "side must be right, left or bi");
        }
        std::map<std::string, Line const*> keys;
        auto secs = sections(head, {"elements", "act", "act right", "act left", "order"}, keys);
        if (!keys.count("elements")) {
          fail(head, 0, "sposet without 'elements'");
        }
        if (keys.count("act") && side == "bi") {
          fail(*keys["act"], 0, "a bi-sposet needs 'act right' and 'act left'");
        }
        if (keys.count("act") && (keys.count("act right") || keys.count("act left"))) {
          fail(*keys["act"], 0, "mixed 'act' sections");
        }
        auto names = element_names(*keys["elements"]);
        auto table = [&](std::string const& which) -> std::vector<Elt> {
          std::string key = keys.count("act") ? "act" : "act " + which;
          if (!keys.count(key)) {
            fail(head, 0, "missing 'act " + which + "'");
          }
          Line const& h = *keys[key];
          arity(h, key == "act" ? 1 : 2);
          return rows(secs[key], names, names, S->size(), h);
        };
        SPosetCandidate c;
        if (side != "left") {
          c.right     = S;
          c.right_act = table("right");
        }
        if (side != "right") {
          // rows are per element; stored scalar-major
          std::vector<Elt> t = table("left");
          std::size_t      n = names.size(), k = S->size();
          c.left = S;
          c.left_act.resize(n * k);
          for (Elt a = 0; a < n; ++a) {
            for (Elt s = 0; s < k; ++s) {
              c.left_act[s * n + a] = t[a * k + s];
            }
          }
        }
        if (side == "right" && keys.count("act left")) {
          fail(*keys["act left"], 0, "left action on a right sposet");
        }
        if (side == "left" && keys.count("act right")) {
          fail(*keys["act right"], 0, "right action on a left sposet");
        }
        std::vector<std::pair<Elt, Elt>> pairs;
        for (Line const* L : secs["order"]) {
          order_line(names, *L, pairs);
        }
        c.order = closure_order(names.size(), pairs, names);
        _out.add(name, make_sposet(std::move(c), name));
      }

      void map_block() {
        Line const& head = _lines[_pos];
        arity(head, 6);
        MapDecl m;
        m.name = new_name(head, 1);
        m.line = head.number;
        expect(head, 2, ":");
        expect(head, 4, "->");
        m.source = head.tokens[3].text;
        m.target = head.tokens[5].text;
        for (std::size_t i : {3u, 5u}) {
          auto k = _out.kind(head.tokens[i].text);
          if (k != BlockKind::pomonoid && k != BlockKind::sposet) {
            throw UnresolvedReference(head.number, head.tokens[i].text);
          }
        }
        if (_out.kind(m.source) != _out.kind(m.target)) {
          fail(head, 5, "a map joins two pomonoids or two sposets");
        }
        auto const&              src = _out.names(m.source);
        auto const&              dst = _out.names(m.target);
        std::vector<bool>        seen(src.size(), false);
        m.assignment.assign(src.size(), 0);
        ++_pos;
        while (true) {
          if (_pos >= _lines.size()) {
            fail(head, 0, "block not closed by 'end'");
          }
          Line const& L = _lines[_pos++];
          if (L.tokens[0].text == "end") {
            arity(L, 1);
            break;
          }
          arity(L, 3);
          expect(L, 1, "->");
          Elt x = lookup(src, L, 0);
          if (seen[x]) {
            fail(L, 0, "'" + src[x] + "' assigned twice");
          }
          seen[x]         = true;
          m.assignment[x] = lookup(dst, L, 2);
        }
        for (Elt x = 0; x < src.size(); ++x) {
          if (!seen[x]) {
            fail(head, 3, "no image for '" + src[x] + "'");
          }
        }
        if (_out.kind(m.source) == BlockKind::sposet) {
          SPosetPtr X = _out.sposet(m.source), Y = _out.sposet(m.target);
          if (same_actor(X->left_actor(), Y->left_actor())
              && same_actor(X->right_actor(), Y->right_actor())) {
            analyze_map(m.assignment, X, Y);
          }
        }
        _out.add(std::move(m));
      }

      void amalgam_line() {
        Line const& L = _lines[_pos++];
        arity(L, 7);
        AmalgamDecl a;
        a.name = new_name(L, 1);
        a.line = L.number;
        expect(L, 2, "core");
        expect(L, 4, "via");
        a.core = L.tokens[3].text;
        a.map1 = L.tokens[5].text;
        a.map2 = L.tokens[6].text;
        if (_out.kind(a.core) != BlockKind::pomonoid) {
          throw UnresolvedReference(L.number, a.core);
        }
        for (std::size_t i : {5u, 6u}) {
          std::string const& m = L.tokens[i].text;
          if (_out.kind(m) != BlockKind::map) {
            throw UnresolvedReference(L.number, m);
          }
          MapDecl const& d = _out.map(m);
          if (d.source != a.core || _out.kind(d.target) != BlockKind::pomonoid) {
            fail(L, i, "'" + m + "' is not a map from " + a.core + " to a pomonoid");
          }
        }
        _out.add(std::move(a));
        _out.amalgam(L.tokens[1].text);
      }

      std::vector<Line> _lines;
      std::size_t       _pos = 0;
      StructureFile     _out;
    };
  }  // namespace detail

  inline StructureFile parse_structures(std::string const& text) {
    return detail::Parser(text).run();
  }

  inline StructureFile load_structures(std::string const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw Error("cannot read '" + path + "'");
    }
    std::ostringstream s;
    s << in.rdbuf();
    return parse_structures(s.str());
  }

  namespace detail {
    inline void write_order(std::ostream& out, Poset const& P) {
      auto covers = P.covers();
      if (covers.empty()) {
        return;
      }
      out << "  order\n";
      for (auto [a, b] : covers) {
        out << "    " << P.name(a) << " <= " << P.name(b) << "\n";
      }
    }

    inline void write_names(std::ostream& out, std::vector<std::string> const& names) {
      out << "  elements";
      for (auto const& n : names) {
        out << ' ' << n;
      }
      out << "\n";
    }
  }  // namespace detail

  //! Writes every block back in declaration order; the order is given by its
  //! covers.
  inline std::string serialize(StructureFile const& F) {
    std::ostringstream out;
    bool               first = true;
    for (auto const& [k, name] : F.blocks()) {
      if (!first && k != BlockKind::amalgam) {
        out << "\n";
      }
      first = false;
      switch (k) {
        case BlockKind::pomonoid: {
          Pomonoid const& S = *F.pomonoid(name);
          out << "pomonoid " << name << "\n";
          detail::write_names(out, S.names());
          out << "  identity " << S.name(S.identity()) << "\n  table\n";
          for (Elt s = 0; s < S.size(); ++s) {
            out << "   ";
            for (Elt t = 0; t < S.size(); ++t) {
              out << ' ' << S.name(S.mult(s, t));
            }
            out << "\n";
          }
          detail::write_order(out, S.order());
          out << "end\n";
          break;
        }
        case BlockKind::sposet: {
          SPoset const& X    = *F.sposet(name);
          ActorPtr      S    = X.right_actor() ? X.right_actor() : X.left_actor();
          std::string   over = name;
          for (auto const& [k2, n2] : F.blocks()) {
            if (k2 == BlockKind::pomonoid && F.pomonoid(n2) == S) {
              over = n2;
            }
          }
          out << "sposet " << name << " over " << over << " side " << side_name(X.side())
              << "\n";
          detail::write_names(out, X.names());
          auto act = [&](bool right) {
            out << "  act " << (right ? "right" : "left") << "\n";
            for (Elt a = 0; a < X.size(); ++a) {
              out << "   ";
              for (Elt s = 0; s < S->size(); ++s) {
                out << ' ' << X.name(right ? X.act_right(a, s) : X.act_left(s, a));
              }
              out << "\n";
            }
          };
          if (X.right_actor()) {
            act(true);
          }
          if (X.left_actor()) {
            act(false);
          }
          detail::write_order(out, X.order());
          out << "end\n";
          break;
        }
        case BlockKind::map: {
          MapDecl const& m   = F.map(name);
          auto const&    src = F.names(m.source);
          auto const&    dst = F.names(m.target);
          out << "map " << name << " : " << m.source << " -> " << m.target << "\n";
          for (Elt x = 0; x < src.size(); ++x) {
            out << "  " << src[x] << " -> " << dst[m.assignment[x]] << "\n";
          }
          out << "end\n";
          break;
        }
        case BlockKind::amalgam: {
          AmalgamDecl const& a = F.amalgam_decl(name);
          out << "amalgam " << name << " core " << a.core << " via " << a.map1 << ' '
              << a.map2 << "\n";
          break;
        }
      }
    }
    return out.str();
  }

  //! Same blocks with the same names, tables, orders, actions and maps.
  inline bool same_structures(StructureFile const& a, StructureFile const& b) {
    if (a.blocks() != b.blocks()) {
      return false;
    }
    for (auto const& [k, name] : a.blocks()) {
      switch (k) {
        case BlockKind::pomonoid:
          if (!(*a.pomonoid(name) == *b.pomonoid(name))
              || a.pomonoid(name)->names() != b.pomonoid(name)->names()) {
            return false;
          }
          break;
        case BlockKind::sposet: {
          auto const& x = a.sposet(name)->data();
          auto const& y = b.sposet(name)->data();
          if (!(x.order == y.order) || x.order.names() != y.order.names()
              || x.left_act != y.left_act || x.right_act != y.right_act
              || !same_actor(x.left, y.left) || !same_actor(x.right, y.right)) {
            return false;
          }
          break;
        }
        case BlockKind::map: {
          auto const& x = a.map(name);
          auto const& y = b.map(name);
          if (x.source != y.source || x.target != y.target || x.assignment != y.assignment) {
            return false;
          }
          break;
        }
        case BlockKind::amalgam: {
          auto const& x = a.amalgam_decl(name);
          auto const& y = b.amalgam_decl(name);
          if (x.core != y.core || x.map1 != y.map1 || x.map2 != y.map2) {
            return false;
          }
          break;
        }
      }
    }
    return true;
  }

}  // namespace pomalg

#endif  // POMALG_STRUCTURE_FILE_HPP_
