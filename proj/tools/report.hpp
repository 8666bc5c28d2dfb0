// JSON reports for the command line tool.

#ifndef POMALG_TOOLS_REPORT_HPP_
#define POMALG_TOOLS_REPORT_HPP_

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "pomalg/core.hpp"

namespace pomalg::cli {

  using json = nlohmann::ordered_json;

  inline std::string fnv1a64(std::string const& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  inline std::string read_file(std::string const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw Error("cannot read '" + path + "'");
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  //! Writes to a sibling temporary and renames it over the target.
  inline void write_atomically(std::string const& path, std::string const& text) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) {
        throw Error("cannot write '" + tmp.string() + "'");
      }
      out << text;
      if (!out.flush()) {
        throw Error("cannot write '" + tmp.string() + "'");
      }
    }
    std::filesystem::rename(tmp, target);
  }

  enum class Status { holds, refuted, unknown };

  inline char const* status_name(Status s) {
    switch (s) {
      case Status::holds:
        return "holds";
      case Status::refuted:
        return "refuted";
      default:
        return "unknown";
    }
  }

  //! A primary verdict decides the exit code: any refuted one gives 1, else
  //! any unknown one gives 3.
  inline json verdict(std::string const& property,
                      Status             s,
                      std::string const& scope,
                      bool               primary = true) {
    return json{{"property", property},
                {"status", status_name(s)},
                {"scope", scope},
                {"primary", primary}};
  }

  inline json verdict(std::string const& property,
                      bool               holds,
                      std::string const& scope   = "exact",
                      bool               primary = true) {
    return verdict(property, holds ? Status::holds : Status::refuted, scope, primary);
  }

  inline int exit_code_of(json const& verdicts) {
    bool unknown = false;
    for (auto const& v : verdicts) {
      if (!v.value("primary", false)) {
        continue;
      }
      std::string s = v.at("status");
      if (s == "refuted") {
        return 1;
      }
      unknown = unknown || s == "unknown";
    }
    return unknown ? 3 : 0;
  }

  inline std::string dot(Poset const& P, std::string const& name) {
    std::ostringstream out;
    out << "digraph \"" << name << "\" {\n  rankdir=BT;\n";
    for (Elt a = 0; a < P.size(); ++a) {
      out << "  n" << a << " [label=\"" << P.name(a) << "\"];\n";
    }
    for (auto [a, b] : P.covers()) {
      out << "  n" << a << " -> n" << b << ";\n";
    }
    out << "}\n";
    return out.str();
  }

  inline json covers_json(Poset const& P) {
    json out = json::array();
    for (auto [a, b] : P.covers()) {
      out.push_back({P.name(a), P.name(b)});
    }
    return out;
  }

}  // namespace pomalg::cli

#endif
