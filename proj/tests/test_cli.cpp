#include "support.hpp"

#include "bratteli/cli.hpp"
#include "bratteli/classify.hpp"
#include "bratteli/diagram.hpp"
#include "bratteli/dsl.hpp"
#include "bratteli/findim.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sstream>

using namespace bratteli;
using test_support::data_path;
using test_support::load;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  std::ostringstream out, err;
  std::istringstream in(input);
  int code = run_cli(args, out, err, in);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("verify on the worked example passes at every level") {
  Run r = run({"verify", "--depth", "3", data_path("worked_example.txt")});
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("level 1 PASS") != std::string::npos);
  CHECK(r.out.find("level 2 PASS") != std::string::npos);
  CHECK(r.out.find("level 3 PASS") != std::string::npos);
  CHECK(r.out.find("result PASS") != std::string::npos);
}

TEST_CASE("classify a region example") {
  Run r = run({"classify", data_path("regions/f_unital.txt")});
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("EL: member") != std::string::npos);
  CHECK(r.out.find("graph: non_member") != std::string::npos);
}

TEST_CASE("telescope three levels") {
  Run r = run({"telescope", "--keep", "1,3", data_path("three_levels.txt")});
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("edges 1: a0->a2:2 a0->c2:2 c0->c2:1\n") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == exit_usage);
  CHECK(run({"frobnicate"}).code == exit_usage);
  CHECK(run({"verify"}, "").code == exit_usage);
  CHECK(run({"validate"}, "diagram D\nlevel 1: v=0\n").code == exit_usage);
  Run bad = run({"validate"}, "diagram D\nlevel 1: a=2 b=1\nlevel 2: c=5\nedges 1: a->c\n");
  CHECK(bad.code == exit_fail);
  CHECK(bad.out.find("line 2, column 14") != std::string::npos);
  CHECK(run({"verify", "--depth", "3", "--row-finite", data_path("worked_example.txt")}).code == exit_fail);
  CHECK(run({"decompose-sinks", data_path("infinitely_many_sinks.txt")}).code == exit_fail);
  Run realized = run({"realize", "--depth", "3", data_path("worked_example.txt")});
  REQUIRE(realized.code == exit_ok);
  CHECK(run({"find-chain", "--n", "8"}, realized.out).code == exit_unknown);
  CHECK(run({"simulate", "--depth", "5"}, realized.out).code == exit_unknown);
  CHECK(run({"classify"}, "descriptor A\nflag stable = yes\nflag unital = yes\nflag nonzero = yes\n").code ==
        exit_fail);
  CHECK(run({"--help"}).code == exit_ok);
}

TEST_CASE("commands print what the library computes") {
  Document doc = load("worked_example.txt");
  CHECK(run({"realize", "--depth", "3", data_path("worked_example.txt")}).out ==
        print(make_document(build_ultragraph(doc.diagram, 3, *doc.injections))));
  CHECK(run({"classify", data_path("regions/c_unital.txt")}).out ==
        classify(load("regions/c_unital.txt").descriptor).to_text());
  CHECK(run({"telescope", "--keep", "1,3", data_path("three_levels.txt")}).out ==
        print(telescope(load("three_levels.txt").diagram, {1, 3})));
  CHECK(run({"verify", "--depth", "3", data_path("worked_example.txt")}).out ==
        verify_roundtrip(doc.diagram, 3, *doc.injections).to_text());
  Run realized = run({"realize", "--depth", "4", data_path("worked_example.txt")});
  Run simulated = run({"simulate", "--depth", "3"}, realized.out);
  CHECK(simulated.code == exit_ok);
  CHECK(parse(simulated.out).diagram == truncate(doc.diagram, 3));
}

TEST_CASE("pipelines compose through text") {
  Run g = run({"generate", "--seed", "4", "--kind", "strict"});
  REQUIRE(g.code == exit_ok);
  Run v = run({"verify", "--depth", "1", "--row-finite"}, g.out);
  CHECK(v.code == exit_ok);
  Run e = run({"realize", "--depth", "2", "--row-finite"}, g.out);
  REQUIRE(e.code == exit_ok);
  Run m = run({"to-matrix"}, e.out);
  CHECK(m.code == exit_ok);
  CHECK(run({"expand"}, m.out).code == exit_ok);
  Run u = run({"m2-unitize"}, m.out);
  CHECK(u.code == exit_ok);
  CHECK(parse(u.out).kind == DocKind::ultragraph);
}

TEST_CASE("output is deterministic") {
  for (int i = 0; i < 2; ++i)
    CHECK(run({"generate", "--seed", "9", "--kind", "tailed"}).out ==
          run({"generate", "--seed", "9", "--kind", "tailed"}).out);
}

TEST_CASE("json output") {
  Run r = run({"--format", "json", "classify", data_path("regions/e_nonunital.txt")});
  REQUIRE(r.code == exit_ok);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["classes"]["RFNS"]["status"] == "member");
  Run d = run({"verify", "--depth", "3", "--format", "json", data_path("worked_example.txt")});
  CHECK(nlohmann::json::parse(d.out)["result"] == "PASS");
  Run s = run({"decompose-sinks", "--format", "json", data_path("two_sinks.txt")});
  auto sj = nlohmann::json::parse(s.out);
  CHECK(sj["summands"].size() == 2);
  CHECK(sj["summands"][0]["size"] == 2);
}

TEST_CASE("quotients command") {
  Run r = run({"quotients", "--depth", "4", data_path("af_example.txt")});
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("has_C_quotient yes") != std::string::npos);
  Run lim = run({"--limit", "2", "quotients", "--depth", "3", data_path("worked_example.txt")});
  CHECK(lim.code == exit_fail);
}
