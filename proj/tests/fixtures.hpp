// Shared test structures.

#ifndef POMALG_TESTS_FIXTURES_HPP_
#define POMALG_TESTS_FIXTURES_HPP_

#include <memory>
#include <string>
#include <vector>

#include "pomalg/core.hpp"

namespace fixtures {
  using namespace pomalg;

  // The five-element pomonoid with U = {1, e, f}; element order a f b e 1
  // follows the printed table.
  inline ActorPtr paper_S() {
    static ActorPtr const S = std::make_shared<Pomonoid const>(
        pomonoid_from_names({"a", "f", "b", "e", "1"},
                            {{"a", "a", "a", "a", "a"},
                             {"a", "f", "b", "f", "f"},
                             {"b", "b", "b", "b", "b"},
                             {"a", "f", "b", "e", "e"},
                             {"a", "f", "b", "e", "1"}},
                            {{"a", "1"},
                             {"a", "e"},
                             {"a", "f"},
                             {"1", "b"},
                             {"e", "b"},
                             {"f", "b"}},
                            "S"));
    return S;
  }

  inline Elt idx(Pomonoid const& S, std::string const& name) {
    return *S.order().find(name);
  }

  inline SubPomonoid paper_U() {
    ActorPtr S = paper_S();
    return SubPomonoid(S, {idx(*S, "1"), idx(*S, "e"), idx(*S, "f")});
  }

  inline ActorPtr shared(Pomonoid p) {
    return std::make_shared<Pomonoid const>(std::move(p));
  }

  // 2-element antichain / chain as plain right acts over a given actor with
  // trivial action.
  inline SPosetPtr trivial_act(ActorPtr const& S, Poset P) {
    std::size_t      n = P.size();
    std::vector<Elt> act(n * S->size());
    for (Elt a = 0; a < n; ++a) {
      for (Elt s = 0; s < S->size(); ++s) {
        act[a * S->size() + s] = a;
      }
    }
    return make_sposet(SPosetCandidate{std::move(P), nullptr, {}, S, act});
  }

  inline SPosetPtr trivial_left_act(ActorPtr const& S, Poset P) {
    std::size_t      n = P.size();
    std::vector<Elt> act(n * S->size());
    for (Elt s = 0; s < S->size(); ++s) {
      for (Elt a = 0; a < n; ++a) {
        act[s * n + a] = a;
      }
    }
    return make_sposet(SPosetCandidate{std::move(P), S, act, nullptr, {}});
  }
}  // namespace fixtures

#endif
