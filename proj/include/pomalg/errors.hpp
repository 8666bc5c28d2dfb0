// pomalg - finite partially ordered monoids and their acts
//
// Exception types shared by every module. Structural validation collects
// every violated axiom before throwing, so callers can report all of them.

#ifndef POMALG_ERRORS_HPP_
#define POMALG_ERRORS_HPP_

#include <cstddef>    // for size_t
#include <cstdint>    // for uint32_t
#include <stdexcept>  // for runtime_error
#include <string>     // for string
#include <utility>    // for move
#include <vector>     // for vector

namespace pomalg {

  //! Index of an element inside a finite carrier.
  using Elt = std::uint32_t;

  //! Base class of every exception thrown by the library.
  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  //! One violated axiom together with the elements that exhibit it.
  struct Violation {
    std::string      kind;
    std::vector<Elt> witness;
    std::string      detail;
  };

  class ValidationError : public Error {
   public:
    ValidationError(std::string const& what, std::vector<Violation> v)
        : Error(what + ": " + summarize(v)), _violations(std::move(v)) {}

    std::vector<Violation> const& violations() const noexcept {
      return _violations;
    }

   private:
    static std::string summarize(std::vector<Violation> const& v) {
      std::string out;
      for (std::size_t i = 0; i < v.size() && i < 4; ++i) {
        if (i != 0) {
          out += "; ";
        }
        out += v[i].kind;
        if (!v[i].detail.empty()) {
          out += " (" + v[i].detail + ")";
        }
      }
      if (v.size() > 4) {
        out += "; ... " + std::to_string(v.size() - 4) + " more";
      }
      return out;
    }

    std::vector<Violation> _violations;
  };

  class AntisymmetryViolation : public Error {
   public:
    AntisymmetryViolation(Elt a, Elt b, std::string const& detail)
        : Error("AntisymmetryViolation: " + detail), first(a), second(b) {}
    Elt first;
    Elt second;
  };

  class NotEquivariant : public Error {
   public:
    NotEquivariant(Elt x, Elt s, std::string const& detail)
        : Error("NotEquivariant: " + detail), element(x), scalar(s) {}
    Elt element;
    Elt scalar;
  };

  class ActorMismatch : public Error {
   public:
    explicit ActorMismatch(std::string const& detail)
        : Error("ActorMismatch: " + detail) {}
  };

  class CapExceeded : public Error {
   public:
    CapExceeded(std::size_t requested, std::size_t maximum)
        : Error("CapExceeded: requested size " + std::to_string(requested)
                + " exceeds configured maximum " + std::to_string(maximum)) {}
  };

  class SizeGuardExceeded : public Error {
   public:
    SizeGuardExceeded(std::size_t lvl, std::size_t sz, std::size_t guard)
        : Error("SizeGuardExceeded: level " + std::to_string(lvl) + " needs "
                + std::to_string(sz) + " cells, guard is "
                + std::to_string(guard)),
          level(lvl),
          size(sz) {}
    std::size_t level;
    std::size_t size;
  };

  class PreconditionFailed : public Error {
   public:
    explicit PreconditionFailed(std::string const& detail)
        : Error("PreconditionFailed: " + detail) {}
  };

  //! Thrown when a check that the theory guarantees fails; always a bug.
  class IsoCheckFailed : public Error {
   public:
    explicit IsoCheckFailed(std::string const& detail)
        : Error("IsoCheckFailed: " + detail) {}
  };

  class SystemIncoherent : public Error {
   public:
    explicit SystemIncoherent(std::string const& detail)
        : Error("SystemIncoherent: " + detail) {}
  };

  class WitnessNotFound : public Error {
   public:
    explicit WitnessNotFound(std::string const& detail)
        : Error("WitnessNotFound: " + detail) {}
  };

  class NotOrderEmbedding : public Error {
   public:
    explicit NotOrderEmbedding(std::string const& detail)
        : Error("NotOrderEmbedding: " + detail) {}
  };

  class NotCommutative : public Error {
   public:
    explicit NotCommutative(std::string const& detail)
        : Error("NotCommutative: " + detail) {}
  };

  class NotActCongruence : public Error {
   public:
    NotActCongruence(Elt a, Elt b, Elt s, std::string const& detail)
        : Error("NotActCongruence: " + detail), first(a), second(b), scalar(s) {}
    Elt first;
    Elt second;
    Elt scalar;
  };

  //! Malformed structure file; line and column are 1-based.
  class SyntaxError : public Error {
   public:
    SyntaxError(std::size_t ln, std::size_t col, std::string const& detail)
        : Error("SyntaxError at " + std::to_string(ln) + ":"
                + std::to_string(col) + ": " + detail),
          line(ln),
          column(col) {}
    std::size_t line;
    std::size_t column;
  };

  class UnresolvedReference : public Error {
   public:
    UnresolvedReference(std::size_t ln, std::string const& name)
        : Error("UnresolvedReference at line " + std::to_string(ln) + ": '"
                + name + "'"),
          line(ln) {}
    std::size_t line;
  };

}  // namespace pomalg

#endif  // POMALG_ERRORS_HPP_
