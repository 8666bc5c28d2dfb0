#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "json.hpp"
#include "pomalg/enumerate.hpp"
#include "pomalg/structure_file.hpp"

using namespace pomalg;
using json = nlohmann::json;

namespace {
  std::string const dir = POMALG_FIXTURE_DIR;

  std::string quote(std::string const& s) {
    std::string out = "'";
    for (char c : s) {
      out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    }
    return out + "'";
  }

  struct Result {
    int  code = -1;
    json report;
  };

  // Runs the executable from the fixture directory; the report goes to a
  // temporary file.
  Result run(std::vector<std::string> const& args) {
    char const* cli = std::getenv("POMALG_CLI");
    REQUIRE(cli != nullptr);
    auto        out = std::filesystem::temp_directory_path()
               / ("pomalg-test-" + std::to_string(::getpid()) + ".json");
    std::string cmd = "cd " + quote(dir) + " && " + quote(cli);
    for (auto const& a : args) {
      cmd += " " + quote(a);
    }
    cmd += " --json " + quote(out.string()) + " >/dev/null 2>&1";
    int    st = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    std::ifstream in(out);
    if (in) {
      in >> r.report;
    }
    std::filesystem::remove(out);
    return r;
  }

  int code_from_verdicts(json const& report) {
    if (report.contains("error")) {
      return 2;
    }
    bool unknown = false;
    for (auto const& v : report["verdicts"]) {
      if (!v["primary"].get<bool>()) {
        continue;
      }
      if (v["status"] == "refuted") {
        return 1;
      }
      unknown = unknown || v["status"] == "unknown";
    }
    return unknown ? 3 : 0;
  }

  json const* find_verdict(json const& report, std::string const& property) {
    for (auto const& v : report["verdicts"]) {
      if (v["property"] == property) {
        return &v;
      }
    }
    return nullptr;
  }

  template <typename E>
  E parse_error(std::string const& text) {
    try {
      parse_structures(text);
    } catch (E const& e) {
      return e;
    }
    FAIL("no error for:\n" << text);
    throw;
  }
}  // namespace

TEST_CASE("fixture file", "[cli]") {
  StructureFile F = load_structures(dir + "/fixture.pom");
  ActorPtr      S = F.pomonoid("S");
  CHECK(*S == *fixtures::paper_S());
  CHECK(S->names() == fixtures::paper_S()->names());
  PoAmalgam A = F.amalgam("A");
  CHECK(A.core()->size() == 3);
  CHECK(F.core_embedding("i").embedding().size() == 3);
}

TEST_CASE("parse errors", "[cli]") {
  SECTION("duplicate element") {
    auto e = parse_error<SyntaxError>("pomonoid T\n  elements x y x\n  table\n"
                                      "    x y x\n    y y y\n    x y x\nend\n");
    CHECK(e.line == 2);
    CHECK(e.column == 16);
  }
  SECTION("unknown element in the order") {
    auto e = parse_error<UnresolvedReference>(
        "pomonoid T\n  elements 1\n  table\n    1\n  order\n    1 <= z\nend\n");
    CHECK(e.line == 6);
  }
  SECTION("unknown pomonoid") {
    auto e = parse_error<UnresolvedReference>("sposet X over Q side right\n  elements x\nend\n");
    CHECK(e.line == 1);
  }
  SECTION("missing end") {
    auto e = parse_error<SyntaxError>("pomonoid T\n  elements 1\n  table\n    1\n");
    CHECK(e.line == 1);
  }
  SECTION("row of the wrong length") {
    auto e = parse_error<SyntaxError>("pomonoid T\n  elements 1 a\n  table\n    1 a\n    a\nend\n");
    CHECK(e.line == 5);
  }
  SECTION("keyword as a name") {
    parse_error<SyntaxError>("pomonoid end\n  elements 1\n  table\n    1\nend\n");
  }
  SECTION("validation is forwarded") {
    CHECK_THROWS_AS(parse_structures("pomonoid T\n  elements 1 a\n  table\n    1 a\n    a a\n"
                                     "  order\n    1 <= a <= 1\nend\n"),
                    AntisymmetryViolation);
    CHECK_THROWS_AS(parse_structures("pomonoid T\n  elements 1 a\n  table\n    1 1\n    a a\nend\n"),
                    ValidationError);
  }
}

TEST_CASE("whitespace and comments", "[cli]") {
  std::string tight = "pomonoid T # trailing\n\n elements 0   1\ntable\n0 1\n1 1\norder\n0<=1\nend\n"
                      "map m:T->T\n0->0\n1->1\nend\n";
  StructureFile F = parse_structures(tight);
  CHECK(F.pomonoid("T")->leq(0, 1));
  CHECK(F.map("m").assignment == std::vector<Elt>{0, 1});
}

TEST_CASE("round trip", "[cli]") {
  for (auto const& name : {"fixture.pom", "max.pom", "acts.pom", "groups.pom"}) {
    StructureFile F = load_structures(dir + "/" + name);
    std::string   s = serialize(F);
    StructureFile G = parse_structures(s);
    INFO(name << "\n" << s);
    CHECK(same_structures(F, G));
    CHECK(serialize(G) == s);
  }

  // every pomonoid of size at most 3 with a bi-act over itself
  std::size_t count = 0;
  for (auto const& P : enumerate_pomonoids_upto(3)) {
    StructureFile F;
    ActorPtr      S = fixtures::shared(P);
    F.add("S", S);
    F.add("X", regular_bi(S));
    MapDecl m{"id", "S", "S", {}, 0};
    for (Elt s = 0; s < S->size(); ++s) {
      m.assignment.push_back(s);
    }
    F.add(m);
    StructureFile G = parse_structures(serialize(F));
    CHECK(same_structures(F, G));
    ++count;
  }
  CHECK(count > 20);
}

TEST_CASE("unitary command", "[cli]") {
  Result r = run({"unitary", "fixture.pom", "--sub", "U", "--in", "S", "--verify"});
  CHECK(r.code == 1);
  for (auto [p, s] : {std::pair{"right-unitary", "holds"},
                      {"right-pounitary", "holds"},
                      {"upper-strongly-right-pounitary", "refuted"},
                      {"lower-strongly-right-pounitary", "refuted"}}) {
    json const* v = find_verdict(r.report, p);
    REQUIRE(v);
    CHECK((*v)["status"] == s);
  }
  bool found = false;
  for (auto const& w : (*find_verdict(r.report, "upper-strongly-right-pounitary"))["witnesses"]) {
    found = found || (w["y"] == "b" && w["u"] == "e" && w["m"] == "1");
  }
  CHECK(found);
  CHECK(r.report["verify"]["failures"].empty());
  CHECK(r.report["schema"] == 1);
  CHECK(r.report["inputs_digest"].get<std::string>().size() == 16);
}

TEST_CASE("word-le command", "[cli]") {
  Result r = run({"word-le", "fixture.pom", "--amalgam", "A", "--lhs", "1:e", "--rhs", "1:b",
                  "--depth", "2", "--verify"});
  CHECK(r.code == 0);
  json const* v = find_verdict(r.report, "word-leq");
  REQUIRE(v);
  auto const& steps = (*v)["certificate"]["steps"];
  REQUIRE(steps.size() == 1);
  CHECK(steps[0]["kind"] == "O");
  CHECK(r.report["verify"]["replayed"] == 1);
  CHECK(r.report["verify"]["failures"].empty());
}

TEST_CASE("size guard", "[cli]") {
  auto   t0 = std::chrono::steady_clock::now();
  Result r  = run({"tower", "fixture.pom", "--amalgam", "A", "--tower", "99"});
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(10));
  CHECK(r.code == 2);
  CHECK(r.report["error"]["type"] == "SizeGuardExceeded");
}

TEST_CASE("input errors", "[cli]") {
  auto bad = std::filesystem::temp_directory_path() / "pomalg-bad.pom";
  {
    std::ofstream out(bad);
    out << "pomonoid T\n  elements 1 1\nend\n";
  }
  Result r = run({"validate", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.report["error"]["type"] == "SyntaxError");
  CHECK(r.report["error"]["line"] == 2);
  std::filesystem::remove(bad);
  CHECK(run({"unitary", "fixture.pom", "--sub", "nope", "--in", "S"}).code == 2);
}

TEST_CASE("golden commands", "[cli]") {
  std::ifstream in(dir + "/golden.tsv");
  REQUIRE(in);
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream        s(line);
    std::string              f;
    while (std::getline(s, f, '\t')) {
      fields.push_back(f);
    }
    int expected = std::stoi(fields[0]);
    fields.erase(fields.begin());
    fields.push_back("--verify");
    Result r = run(fields);
    INFO(line);
    CHECK(r.code == expected);
    CHECK(r.report["exit_code"] == r.code);
    CHECK(code_from_verdicts(r.report) == r.code);
    if (r.report.contains("verify")) {
      CHECK(r.report["verify"]["failures"].empty());
    }
    ++count;
  }
  CHECK(count >= 20);
}

TEST_CASE("seeded sampling is reproducible", "[cli]") {
  std::vector<std::string> args{"tower", "fixture.pom", "--amalgam", "A", "--tower", "3",
                                "--sample", "25", "--seed", "5"};
  Result a = run(args), b = run(args);
  CHECK(a.report["seed"] == 5);
  CHECK(a.report["verdicts"] == b.report["verdicts"]);
}

TEST_CASE("dot output", "[cli]") {
  auto path = std::filesystem::temp_directory_path() / "pomalg-test.dot";
  Result r  = run({"gcomplete", "groups.pom", "--pomonoid", "Z4", "--dot", path.string()});
  CHECK(r.code == 0);
  std::ifstream in(path);
  std::string   text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.rfind("digraph", 0) == 0);
  std::filesystem::remove(path);
}
