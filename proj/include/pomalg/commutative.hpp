// pomalg - finite partially ordered monoids and their acts
//
// Commutative pomonoids: commutativity and pocancellativity scans, the
// group completion G(S) = (S x S)/Delta, and commutative amalgams through
// the tensor product S1 (x)_U S2.

#ifndef POMALG_COMMUTATIVE_HPP_
#define POMALG_COMMUTATIVE_HPP_

#include <numeric>   // for iota
#include <optional>  // for optional
#include <string>    // for string
#include <utility>   // for pair
#include <vector>    // for vector

#include "amalgam.hpp"
#include "enumerate.hpp"
#include "tensor.hpp"
#include "unitary.hpp"

namespace pomalg {

  struct CommutativityCheck {
    bool                               holds = true;
    std::optional<std::pair<Elt, Elt>> witness;  // st != ts
  };

  inline CommutativityCheck is_commutative(Pomonoid const& S) {
    CommutativityCheck out;
    for (Elt s = 0; s < S.size() && out.holds; ++s) {
      for (Elt t = s + 1; t < S.size(); ++t) {
        if (S.mult(s, t) != S.mult(t, s)) {
          out.holds   = false;
          out.witness = std::pair{s, t};
          break;
        }
      }
    }
    return out;
  }

  //! sx <= sy with x !<= y (left), or xs <= ys with x !<= y (right).
  struct CancellationWitness {
    Side side = Side::left;
    Elt  s = 0, x = 0, y = 0;
  };

  struct PocancellativityCheck {
    bool                               left  = true;
    bool                               right = true;
    std::optional<CancellationWitness> witness;

    bool holds() const noexcept {
      return left && right;
    }
  };

  inline PocancellativityCheck is_pocancellative(Pomonoid const& S) {
    PocancellativityCheck out;
    for (Elt s = 0; s < S.size(); ++s) {
      for (Elt x = 0; x < S.size(); ++x) {
        for (Elt y = 0; y < S.size(); ++y) {
          if (S.leq(x, y)) {
            continue;
          }
          if (out.left && S.leq(S.mult(s, x), S.mult(s, y))) {
            out.left = false;
            if (!out.witness) {
              out.witness = CancellationWitness{Side::left, s, x, y};
            }
          }
          if (out.right && S.leq(S.mult(x, s), S.mult(y, s))) {
            out.right = false;
            if (!out.witness) {
              out.witness = CancellationWitness{Side::right, s, x, y};
            }
          }
        }
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Group completion
  ////////////////////////////////////////////////////////////////////////

  struct GroupCompletion {
    ActorPtr         source;
    ActorPtr         group;
    std::vector<Elt> cls;  // pair (s, t), index s |S| + t, to its class
    std::vector<Elt> chi;  // s |-> [(s, 1)]
    std::vector<std::string> violations;

    Elt of(Elt s, Elt t) const noexcept {
      return cls[s * source->size() + t];
    }
  };

  //! (S x S)/Delta with Delta = {((s1,t1),(s2,t2)) : s1 t2 = s2 t1} and
  //! [(s,t)] <= [(s',t')] iff s t' <= s' t. Every law of the construction is
  //! checked and failures land in `violations`.
  inline GroupCompletion group_completion(ActorPtr const& Sp, std::string label = {}) {
    Pomonoid const& S = *Sp;
    if (!is_commutative(S).holds) {
      throw PreconditionFailed("group_completion: S is not commutative");
    }
    if (!is_pocancellative(S).holds()) {
      throw PreconditionFailed("group_completion: S is not pocancellative");
    }
    std::size_t n = S.size(), m = n * n;
    auto        delta = [&](Elt p, Elt q) {
      return S.mult(p / n, q % n) == S.mult(q / n, p % n);
    };
    GroupCompletion G;
    G.source = Sp;
    G.cls.assign(m, static_cast<Elt>(-1));
    std::vector<Elt> reps;
    for (Elt p = 0; p < m; ++p) {
      if (G.cls[p] != static_cast<Elt>(-1)) {
        continue;
      }
      Elt c = static_cast<Elt>(reps.size());
      reps.push_back(p);
      for (Elt q = p; q < m; ++q) {
        if (G.cls[q] == static_cast<Elt>(-1) && delta(p, q)) {
          G.cls[q] = c;
        }
      }
    }
    // Delta must coincide with "same class"
    for (Elt p = 0; p < m; ++p) {
      for (Elt q = 0; q < m; ++q) {
        if (delta(p, q) != (G.cls[p] == G.cls[q])) {
          G.violations.push_back("Delta is not an equivalence");
          p = static_cast<Elt>(m);
          break;
        }
      }
    }
    std::size_t      k = reps.size();
    std::vector<Elt> table(k * k);
    BitMatrix        leq(k);
    auto             prod = [&](Elt p, Elt q) {
      return G.cls[S.mult(p / n, q / n) * n + S.mult(p % n, q % n)];
    };
    auto below = [&](Elt p, Elt q) {
      return S.leq(S.mult(p / n, q % n), S.mult(q / n, p % n));
    };
    for (Elt i = 0; i < k; ++i) {
      for (Elt j = 0; j < k; ++j) {
        table[i * k + j] = prod(reps[i], reps[j]);
        leq.set(i, j, below(reps[i], reps[j]));
      }
    }
    bool product_ok = true, order_ok = true;
    for (Elt p = 0; p < m; ++p) {
      for (Elt q = 0; q < m; ++q) {
        Elt i = G.cls[p], j = G.cls[q];
        product_ok = product_ok && table[i * k + j] == prod(p, q);
        order_ok   = order_ok && leq.get(i, j) == below(p, q);
      }
    }
    if (!product_ok) {
      G.violations.push_back("Delta is not compatible with the product");
    }
    if (!order_ok) {
      G.violations.push_back("order on classes depends on representatives");
    }
    std::vector<std::string> names;
    for (Elt r : reps) {
      names.push_back("[" + S.name(r / n) + "," + S.name(r % n) + "]");
    }
    Elt one = G.cls[S.identity() * n + S.identity()];
    try {
      G.group = std::make_shared<Pomonoid const>(
          PomonoidCandidate{Poset(std::move(leq), std::move(names)), table, one},
          label.empty() ? "G(" + S.label() + ")" : std::move(label));
    } catch (ValidationError const& e) {
      G.violations.push_back(std::string("G(S) is not a pomonoid: ") + e.what());
      return G;
    }
    Pomonoid const& P = *G.group;
    for (Elt s = 0; s < n; ++s) {
      if (G.cls[s * n + s] != P.identity()) {
        G.violations.push_back("[(s,s)] is not the identity");
      }
      for (Elt t = 0; t < n; ++t) {
        if (P.mult(G.of(s, t), G.of(t, s)) != P.identity()) {
          G.violations.push_back("[(t,s)] is not inverse to [(s,t)]");
        }
        for (Elt p = 0; p < n; ++p) {
          for (Elt q = 0; q < n; ++q) {
            if (G.of(s, t) != P.mult(G.of(S.mult(s, q), S.mult(t, p)), G.of(p, q))) {
              G.violations.push_back("[(s,t)] != [(sq,tp)][(p,q)]");
            }
          }
        }
      }
    }
    G.chi.resize(n);
    for (Elt s = 0; s < n; ++s) {
      G.chi[s] = G.of(s, S.identity());
    }
    PomonoidMapReport r = analyze_pomonoid_map(G.chi, S, P);
    if (!r.homomorphism) {
      G.violations.push_back("chi is not a homomorphism");
    }
    if (!r.order_embedding) {
      G.violations.push_back("chi is not an order embedding");
    }
    for (Elt x = 0; x < P.size(); ++x) {
      for (Elt y = 0; y < P.size(); ++y) {
        if (x != y && P.leq(x, y)) {
          G.violations.push_back("a finite pogroup with a non-discrete order");
          x = static_cast<Elt>(P.size());
          break;
        }
      }
    }
    return G;
  }

  ////////////////////////////////////////////////////////////////////////
  // Commutative amalgams
  ////////////////////////////////////////////////////////////////////////

  struct CommutativeAmalgamReport {
    TensorPoset      tensor;  // S1 (x)_U S2
    ActorPtr         product; // the tensor as a commutative pomonoid
    std::vector<Elt> lambda1, lambda2;
    bool             product_well_defined = true;
    bool             lambda1_embedding    = false;
    bool             lambda2_embedding    = false;
    bool             strong_condition     = false;
    std::optional<std::pair<Elt, Elt>> strong_witness;
    bool             strongly_poembeddable = false;
    // hypotheses of the convex poextension criterion, each factor
    bool             convex[2]  = {false, false};
    bool             poext[2]   = {false, false};
    std::size_t      poext_cap  = 0;
    bool             hypotheses = false;
    bool             contradiction = false;
    // pocancellativity of the tensor, meaningful for pocancellative factors
    // over a group core
    bool             core_is_group = false;
    std::optional<bool> tensor_pocancellative;
    std::vector<std::string> violations;
  };

  namespace detail {
    inline bool is_group(Pomonoid const& U) {
      for (Elt u = 0; u < U.size(); ++u) {
        bool inv = false;
        for (Elt v = 0; v < U.size() && !inv; ++v) {
          inv = U.mult(u, v) == U.identity() && U.mult(v, u) == U.identity();
        }
        if (!inv) {
          return false;
        }
      }
      return true;
    }
  }  // namespace detail

  //! S1 (x)_U S2 as a pomonoid with the legs lambda_i, and the strong
  //! condition lambda1(s1) = lambda2(s2) => s1 = phi1(u), s2 = phi2(u).
  //! When U is convex in both factors and passes the bounded poextension
  //! test in both, a verdict other than strongly poembeddable is recorded
  //! as a contradiction.
  inline CommutativeAmalgamReport commutative_amalgam(PoAmalgam const& A,
                                                      std::size_t      poext_cap = 2,
                                                      SPosetCache*     cache     = nullptr) {
    for (auto const& [P, what] : {std::pair{A.core(), "core"},
                                  std::pair{A.factor(1), "first factor"},
                                  std::pair{A.factor(2), "second factor"}}) {
      auto c = is_commutative(*P);
      if (!c.holds) {
        throw NotCommutative(std::string(what) + ": " + P->name(c.witness->first) + P->name(c.witness->second)
                             + " != " + P->name(c.witness->second) + P->name(c.witness->first));
      }
    }
    CommutativeAmalgamReport R;
    Pomonoid const&          S1 = *A.factor(1);
    Pomonoid const&          S2 = *A.factor(2);
    SPosetPtr left  = restrict_actions(*regular_bi(A.factor(1)), std::nullopt,
                                       A.embedding(1).restriction());
    SPosetPtr right = restrict_actions(*regular_bi(A.factor(2)),
                                       A.embedding(2).restriction(), std::nullopt);
    R.tensor = tensor(left, right, "S1(x)S2");
    TensorPoset const& T = R.tensor;
    std::size_t        k = T.size();
    std::vector<Elt>   table(k * k, static_cast<Elt>(-1));
    for (Elt a = 0; a < S1.size(); ++a) {
      for (Elt b = 0; b < S2.size(); ++b) {
        for (Elt c = 0; c < S1.size(); ++c) {
          for (Elt d = 0; d < S2.size(); ++d) {
            Elt  prod = T.cls(S1.mult(a, c), S2.mult(b, d));
            Elt& slot = table[T.cls(a, b) * k + T.cls(c, d)];
            if (slot != static_cast<Elt>(-1) && slot != prod) {
              R.product_well_defined = false;
            }
            slot = prod;
          }
        }
      }
    }
    if (R.product_well_defined) {
      BitMatrix                leq(k);
      std::vector<std::string> names;
      for (Elt x = 0; x < k; ++x) {
        names.push_back(T.result()->name(x));
        for (Elt y = 0; y < k; ++y) {
          leq.set(x, y, T.result()->leq(x, y));
        }
      }
      try {
        R.product = std::make_shared<Pomonoid const>(
            PomonoidCandidate{Poset(std::move(leq), std::move(names)), table,
                              T.cls(S1.identity(), S2.identity())},
            "S1(x)S2");
      } catch (ValidationError const& e) {
        R.violations.push_back(std::string("tensor is not a pomonoid: ") + e.what());
      }
    } else {
      R.violations.push_back("tensor product is not well defined");
    }
    R.lambda1.resize(S1.size());
    R.lambda2.resize(S2.size());
    for (Elt s = 0; s < S1.size(); ++s) {
      R.lambda1[s] = T.cls(s, S2.identity());
    }
    for (Elt s = 0; s < S2.size(); ++s) {
      R.lambda2[s] = T.cls(S1.identity(), s);
    }
    Poset const& order = T.result()->order();
    R.lambda1_embedding = poset_map_flags(R.lambda1, S1.order(), order).order_embedding;
    R.lambda2_embedding = poset_map_flags(R.lambda2, S2.order(), order).order_embedding;
    R.strong_condition  = true;
    for (Elt s1 = 0; s1 < S1.size() && R.strong_condition; ++s1) {
      for (Elt s2 = 0; s2 < S2.size(); ++s2) {
        if (R.lambda1[s1] != R.lambda2[s2]) {
          continue;
        }
        auto u = A.to_core(1, s1);
        if (!u || A.phi(2, *u) != s2) {
          R.strong_condition = false;
          R.strong_witness   = std::pair{s1, s2};
          break;
        }
      }
    }
    R.strongly_poembeddable = R.product && R.lambda1_embedding && R.lambda2_embedding
                              && R.strong_condition;

    R.poext_cap = poext_cap;
    for (int i = 0; i < 2; ++i) {
      SubPomonoid U(A.factor(i + 1), A.embedding(i + 1).embedding());
      R.convex[i] = A.factor(i + 1)->order().is_convex(U.mask());
      R.poext[i]  = check_poextension_bounded(U, poext_cap, {}, cache).holds;
    }
    R.hypotheses    = R.convex[0] && R.convex[1] && R.poext[0] && R.poext[1];
    R.contradiction = R.hypotheses && !R.strongly_poembeddable;

    R.core_is_group = detail::is_group(*A.core());
    if (R.core_is_group && R.product && is_pocancellative(S1).holds()
        && is_pocancellative(S2).holds()) {
      R.tensor_pocancellative = is_pocancellative(*R.product).holds();
    }
    return R;
  }

  struct CompletionAmalgam {
    GroupCompletion                core, first, second;
    std::vector<Elt>               phi1, phi2;  // G(U) -> G(S_i)
    bool                           well_defined = true;
    bool                           embeddings   = false;
    std::optional<PoAmalgam>       amalgam;
    std::vector<std::string>       violations;
  };

  //! [G(U); G(S1), G(S2); phi'_i] with phi'_i[(u,v)] = [(phi_i u, phi_i v)].
  inline CompletionAmalgam completion_amalgam(PoAmalgam const& A) {
    for (ActorPtr const& P : {A.core(), A.factor(1), A.factor(2)}) {
      if (!is_commutative(*P).holds || !is_pocancellative(*P).holds()) {
        throw PreconditionFailed("completion_amalgam: " + P->label()
                                 + " is not commutative and pocancellative");
      }
    }
    CompletionAmalgam C{group_completion(A.core()),
                        group_completion(A.factor(1)),
                        group_completion(A.factor(2)),
                        {}, {}, true, false, std::nullopt, {}};
    for (auto const* G : {&C.core, &C.first, &C.second}) {
      for (auto const& v : G->violations) {
        C.violations.push_back(G->source->label() + ": " + v);
      }
    }
    Pomonoid const& U = *A.core();
    std::size_t     n = U.size();
    for (int i = 1; i <= 2; ++i) {
      GroupCompletion const& Gi  = i == 1 ? C.first : C.second;
      std::vector<Elt>&      phi = i == 1 ? C.phi1 : C.phi2;
      phi.assign(C.core.group->size(), static_cast<Elt>(-1));
      for (Elt u = 0; u < n; ++u) {
        for (Elt v = 0; v < n; ++v) {
          Elt  img  = Gi.of(A.phi(i, u), A.phi(i, v));
          Elt& slot = phi[C.core.of(u, v)];
          if (slot != static_cast<Elt>(-1) && slot != img) {
            C.well_defined = false;
          }
          slot = img;
        }
      }
    }
    if (!C.well_defined) {
      C.violations.push_back("phi' is not well defined");
      return C;
    }
    try {
      C.amalgam.emplace(C.core.group, C.first.group, C.second.group, C.phi1, C.phi2,
                        "G(" + A.label() + ")");
      C.embeddings = true;
    } catch (NotOrderEmbedding const&) {
      C.violations.push_back("phi' is not an order embedding");
    }
    return C;
  }

  ////////////////////////////////////////////////////////////////////////
  // Strong poembedding into a commutative pomonoid: bounded experiment
  ////////////////////////////////////////////////////////////////////////

  struct OpenProblemExperiment {
    std::size_t max_size  = 0;
    std::size_t pomonoids = 0;
    std::size_t amalgams  = 0;
    std::size_t candidates = 0;  // not strongly poembedded in S1 (x)_U S2
    std::string message;
  };

  //! Runs commutative_amalgam over every commutative pocancellative amalgam
  //! with factors of at most max_size elements and counts the instances
  //! whose tensor does not strongly poembed them. The summary never claims
  //! more than the searched scale.
  inline OpenProblemExperiment open_problem_experiment(std::size_t       max_size,
                                                       EnumerationLimits lim = {}) {
    OpenProblemExperiment out;
    out.max_size = max_size;
    lim.max_pomonoid = std::max(lim.max_pomonoid, max_size);
    std::vector<ActorPtr> all;
    for (auto const& P : enumerate_pomonoids_upto(max_size, lim, {true, true})) {
      all.push_back(std::make_shared<Pomonoid const>(P));
    }
    out.pomonoids = all.size();
    std::vector<std::pair<ActorPtr, SubPomonoid>> subs;
    for (auto const& S : all) {
      for (auto const& U : enumerate_subpomonoids(S)) {
        if (is_pocancellative(*U.pomonoid()).holds()) {
          subs.emplace_back(S, U);
        }
      }
    }
    SPosetCache cache;
    for (auto const& [S1, U1] : subs) {
      for (auto const& [S2, U2] : subs) {
        for (auto const& psi : pomonoid_isomorphisms(*U1.pomonoid(), *U2.pomonoid())) {
          std::vector<Elt> phi2(psi.size());
          for (Elt u = 0; u < psi.size(); ++u) {
            phi2[u] = U2.embedding()[psi[u]];
          }
          PoAmalgam A(U1.pomonoid(), S1, S2, U1.embedding(), phi2);
          ++out.amalgams;
          if (!commutative_amalgam(A, 1, &cache).strongly_poembeddable) {
            ++out.candidates;
          }
        }
      }
    }
    out.message = out.candidates == 0
                      ? "no counterexample found at this scale"
                      : std::to_string(out.candidates)
                            + " candidate instance(s) not strongly poembedded in "
                              "S1 (x)_U S2; no general conclusion drawn";
    return out;
  }

}  // namespace pomalg

#endif  // POMALG_COMMUTATIVE_HPP_
