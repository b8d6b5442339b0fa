#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <json.hpp>
#include <string>

using Json = nlohmann::json;

namespace {

std::string bin() {
  const char* b = std::getenv("DGTK_BIN");
  REQUIRE(b != nullptr);
  return b;
}

std::string datafile(const std::string& name) {
  const char* d = std::getenv("DGTK_DATA");
  REQUIRE(d != nullptr);
  return std::string(d) + "/" + name;
}

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  RunResult r;
  std::string cmd = bin() + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

}  // namespace

TEST_CASE("tannaka-dual on the dual numbers: free coalgebra dims, stamped artifact") {
  RunResult r = run("tannaka-dual " + datafile("dual_numbers.json") + " --max-level 6 --normalised");
  REQUIRE(r.status == 0);
  Json j = Json::parse(r.out);
  CHECK(j["signs"] == "signs-v1");
  CHECK(j["command"] == "tannaka-dual");
  CHECK(j["ok"] == true);
  for (auto& [path, hash] : j["inputs"].items())
    CHECK(hash.get<std::string>().size() == 16);
  auto& basis = j["coalgebra"]["underlying"]["basis"];
  for (int n = 0; n <= 6; ++n) {
    REQUIRE(basis.contains(std::to_string(-n)));
    CHECK(basis[std::to_string(-n)].size() == 1);
  }
  CHECK(j["params"]["max_level"] == 6);
}

TEST_CASE("validate: all bundled presentations pass, the corrupted one names a triple") {
  for (std::string f : {"k.json", "dual_numbers.json", "a2.json", "kx3.json"})
    CHECK(run("validate " + datafile(f)).status == 0);
  for (std::string f : {"one_arrow.json", "t_square_zero.json", "t_square_s.json",
                        "a2_positive.json", "two_term.json"})
    CHECK(run("validate " + datafile(f)).status == 0);

  RunResult r = run("validate " + datafile("corrupted.json"));
  CHECK(r.status == 1);
  Json j = Json::parse(r.out);
  CHECK(j["ok"] == false);
  bool named = false;
  for (auto& l : j["failures"])
    if (l.get<std::string>().find("associativity") != std::string::npos) named = true;
  CHECK(named);
}

TEST_CASE("koszul-check: unit on the one-cogenerator coalgebra, counit on the algebras") {
  RunResult r = run("koszul-check " + datafile("one_arrow.json") + " --max-level 3 --window 0 3");
  REQUIRE(r.status == 0);
  Json j = Json::parse(r.out);
  CHECK(j["cert"]["all_true"] == true);
  CHECK(j["cert"]["window"] == Json::array({0, 3}));
  CHECK(j["direction"].get<std::string>().rfind("unit", 0) == 0);

  for (std::string f : {"t_square_zero.json", "t_square_s.json", "a2_positive.json"}) {
    RunResult c = run("koszul-check " + datafile(f) + " --max-level 4 --window 0 4");
    CHECK(c.status == 0);
    Json cj = Json::parse(c.out);
    CHECK(cj["cert"]["all_true"] == true);
    CHECK(cj["direction"].get<std::string>().rfind("counit", 0) == 0);
  }
}

TEST_CASE("bar/cobar artifacts round-trip through the serializers") {
  RunResult r = run("bar " + datafile("t_square_s.json") + " --max-level 4");
  REQUIRE(r.status == 0);
  Json j = Json::parse(r.out);
  CHECK(j["coalgebra"]["schema"] == "coalgebra.json");
  // write the bar output back and run cobar on it
  std::string tmp = "/tmp/dgtk_bar_roundtrip.json";
  FILE* f = fopen(tmp.c_str(), "w");
  REQUIRE(f != nullptr);
  std::string text = j["coalgebra"].dump(2) + "\n";
  fwrite(text.data(), 1, text.size(), f);
  fclose(f);
  RunResult c = run("cobar " + tmp + " --max-level 3");
  CHECK(c.status == 0);
  Json cj = Json::parse(c.out);
  CHECK(cj["algebra"]["schema"] == "algebra.json");
  std::remove(tmp.c_str());
}

TEST_CASE("cohomology and text rendering") {
  RunResult r = run("cohomology " + datafile("two_term.json") + " --window 0 1");
  REQUIRE(r.status == 0);
  Json j = Json::parse(r.out);
  CHECK(j["dims"]["0"] == 0);
  CHECK(j["dims"]["1"] == 0);

  RunResult t = run("cohomology " + datafile("two_term.json") + " --window 0 1 --format text");
  CHECK(t.status == 0);
  CHECK(t.out.find("signs: signs-v1") != std::string::npos);
}

TEST_CASE("byte-identical outputs on repeated runs") {
  for (std::string cmd :
       {"tannaka-dual " + datafile("dual_numbers.json") + " --max-level 4 --normalised",
        "koszul-check " + datafile("one_arrow.json") + " --max-level 3 --window 0 3",
        "bialgebra " + datafile("kx3.json") + " --max-level 3",
        "universal-coalgebra " + datafile("a2.json") + " --max-level 3"}) {
    RunResult a = run(cmd), b = run(cmd);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
  }
}

TEST_CASE("exit statuses: usage and parse errors are 2, math failures are 1") {
  CHECK(run("tannaka-dual " + datafile("dual_numbers.json")).status == 2);  // missing L
  CHECK(run("validate /nonexistent.json").status == 2);
  CHECK(run("koszul-check " + datafile("two_term.json") + " --max-level 3 --window 0 3").status == 2);
  CHECK(run("cohomology " + datafile("two_term.json") + " --window 2 1").status == 2);
}

TEST_CASE("antipode-check and counit-check run green on the dual numbers") {
  RunResult a = run("antipode-check " + datafile("dual_numbers.json") + " --max-level 3");
  REQUIRE(a.status == 0);
  Json aj = Json::parse(a.out);
  CHECK(aj["h0_failures"].empty());

  RunResult c =
      run("counit-check " + datafile("dual_numbers.json") + " --max-level 3 --window -2 2 --depth 2");
  REQUIRE(c.status == 0);
  Json cj = Json::parse(c.out);
  CHECK(cj["trivial"]["all_true"] == true);
  CHECK(cj["coalgebra"]["all_true"] == true);
  CHECK(cj["params"]["depth"] == 2);
}
