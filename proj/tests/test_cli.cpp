#include <doctest.h>

#include <sstream>

#include "rtcalc/cli.hpp"
#include "rtcalc/io.hpp"

using namespace rtcalc;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kChain =
    R"({"vertices":[{"genus":"g","legs":[]},{"genus":0,"legs":["4"]},{"genus":0,"legs":["1","2","3"]}],)"
    R"("edges":[[1,0],[2,1]],"exp_half":{"h1":1},"exp_leg":{}})";

}  // namespace

TEST_CASE("JSON round trips") {
  for (const auto& t : enumerate_trees0(4)) CHECK(tree_from_json(tree_to_json(t)) == t);
  for (const auto& t : enumerate_rt_graphs(4)) {
    bool g = false;
    CHECK(tree_from_json(tree_to_json(t, true), &g) == t);
    CHECK(g);
  }
  const Class0 z = z_cycle(4, 2, 1);
  CHECK(class_from_json(class_to_json(z)) == z);
  const RtClass f = f_class(3);
  CHECK(rt_from_json(rt_to_json(f)) == f);
  CHECK(rt_from_json(json::parse(rt_to_json(f).dump())) == f);
}

TEST_CASE("malformed trees are rejected") {
  CHECK_THROWS_AS((void)tree_from_json(json::parse(R"({"vertices":[{"legs":["1"]},{"legs":["2"]}],"edges":[]})")),
                  invalid_argument);
  CHECK_THROWS_AS(
      (void)tree_from_json(json::parse(R"({"vertices":[{"legs":["1","1"]}],"edges":[]})")), invalid_argument);
}

TEST_CASE("coeff prints 42 for the chain") {
  const auto r = call({"coeff", "--graph", kChain});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.rfind("42\n", 0) == 0);
}

TEST_CASE("zcycle latex carries the display coefficients") {
  const auto r = call({"zcycle", "--n", "4", "--i", "3", "--j", "2", "--format", "latex"});
  CHECK(r.code == cli::kOk);
  for (const char* c : {"-75", "+ 21", "+ 18", "- 9", "- 3"}) CHECK(r.out.find(c) != std::string::npos);
}

TEST_CASE("verify exit codes and determinism") {
  const auto a = call({"verify", "vanishing", "--max-n", "4"});
  CHECK(a.code == cli::kOk);
  CHECK(a.out.find("FAIL") == std::string::npos);
  const auto b = call({"verify", "vanishing", "--max-n", "4"});
  CHECK(a.out == b.out);
  CHECK(call({"verify", "expansions"}).code == cli::kOk);
  CHECK(call({"verify", "frec", "--max-n", "3", "--format", "json"}).code == cli::kOk);
}

TEST_CASE("pair prints the exact value") {
  const std::string cls =
      R"({"ambient":["h0","1","2","3"],"terms":[{"tree":{"vertices":[{"genus":0,"legs":["h0","1","2","3"]}],"edges":[]},)"
      R"("decoration":{"exp_half":{},"exp_leg":{"h0":1}},"coeff":"1/2"}]})";
  const std::string pt = R"({"vertices":[{"genus":0,"legs":["h0","1","2","3"]}],"edges":[]})";
  const auto r = call({"pair", "--class", cls, "--stratum", pt});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "1/2\n");
}

TEST_CASE("usage errors exit 2") {
  CHECK(call({}).code == cli::kUsage);
  CHECK(call({"frobnicate"}).code == cli::kUsage);
  CHECK(call({"zcycle", "--n", "4"}).code == cli::kUsage);
  CHECK(call({"zcycle", "--n", "2", "--i", "1", "--j", "1"}).code == cli::kUsage);
  CHECK(call({"verify", "nonsense"}).code == cli::kUsage);
  CHECK(call({"fclass", "--k", "x", "--n", "2"}).code == cli::kUsage);
  CHECK(call({"coeff", "--graph", "{not json"}).code == cli::kUsage);
  CHECK(call({"relations", "--g", "3", "--n", "4"}).code == cli::kUsage);
}

TEST_CASE("fclass symbolic and numeric k") {
  const auto s = call({"fclass", "--k", "sym", "--g", "2", "--n", "2", "--format", "json"});
  CHECK(s.code == cli::kOk);
  CHECK(rt_from_json(json::parse(s.out)) == f_class(2));
  CHECK(call({"fclass", "--k", "1", "--g", "2", "--multiplicities", "2,1"}).code == cli::kOk);
}

TEST_CASE("a failing check exits 1 with its witness on stderr") {
  cli::RunConfig c;
  c.suite = "synthetic";
  const std::vector<cli::Task> tasks = {
      [] { return VerificationReport{"ok", {1}, true, "", "fine", 0}; },
      [] { return VerificationReport{"bad", {2}, false, "stratum X pairs to 1", "", 0}; },
      [] { return VerificationReport{"ok", {3}, true, "", "fine", 0}; },
  };
  std::ostringstream out, err;
  CHECK(cli::run_tasks(tasks, c, out, err) == cli::kVerifyFailed);
  CHECK(err.str().find("stratum X pairs to 1") != std::string::npos);
  CHECK(out.str().find("PASS ok(3)") != std::string::npos);  // full grid by default

  c.fail_fast = true;
  std::ostringstream out2, err2;
  CHECK(cli::run_tasks(tasks, c, out2, err2) == cli::kVerifyFailed);
  CHECK(out2.str().find("ok(3)") == std::string::npos);
}
