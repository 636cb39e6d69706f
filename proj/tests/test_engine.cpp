#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "engine.hpp"
#include "helpers.hpp"

using namespace scalex;

static const Json& item_for(const Json& report, const std::string& task) {
  for (auto& r : report.at("reports"))
    if (r.at("task") == task) return r;
  static Json none;
  FAIL("no report item for task ", task);
  return none;
}

TEST_CASE("full task suites of the shipped presets pass") {
  for (auto& name : preset_names()) {
    CAPTURE(name);
    Workspace ws = parse_workspace(preset_workspace(name));
    for (auto& cmd : engine_commands()) {
      if (cmd == "dim-search") continue;       // covered separately, it is the slow one
      if (cmd == "verify-witness") continue;   // takes a witness file, not a workspace
      CAPTURE(cmd);
      EngineResult r = run_command(ws, cmd);
      CHECK(r.exit == 0);
      CHECK(r.report.at("pass") == true);
      CHECK(r.report.at("schema") == "scalex-report/1");
      CHECK(r.report.at("command") == cmd);
    }
  }
}

TEST_CASE("report items are sorted by task name") {
  Workspace ws = parse_workspace(preset_workspace("an2-q"));
  EngineResult r = run_command(ws, "dim-search");
  REQUIRE(r.exit == 0);
  std::vector<std::string> names;
  for (auto& item : r.report.at("reports")) names.push_back(item.at("task"));
  CHECK(std::is_sorted(names.begin(), names.end()));
  CHECK(names == std::vector<std::string>{"dimsearch-C01", "dimsearch-V0", "dimsearch-V1"});
}

TEST_CASE("validate synthesizes a whole-workspace task when none is declared") {
  Workspace ws = parse_workspace(build_example_workspace("dual_numbers", "F3", 2));
  ws.tasks.clear();
  EngineResult r = run_command(ws, "validate");
  CHECK(r.exit == 0);
  CHECK(r.report.at("reports").size() == 1);
  EngineResult h = run_command(ws, "h0");
  CHECK(h.exit == 0);
  CHECK(h.report.at("reports").size() == 1);
  // no extension fields, no twisted complexes: nothing for the others to do
  EngineResult g = run_command(ws, "galois");
  CHECK(g.exit == 0);
  CHECK(g.report.at("reports").empty());
  EngineResult c = run_command(ws, "cone");
  CHECK(c.exit == 0);
  CHECK(c.report.at("reports").empty());
}

TEST_CASE("a broken category turns into a counterexample item") {
  auto Q = Field::rationals();
  FiniteDgCategory s = testutil::sign_cat(Q);
  s.add_composition_entry(0, 0, 0, 2, 2, 2, Q->one());
  Workspace ws;
  ws.field_names.push_back("Q");
  ws.fields["Q"] = Q;
  ws.category_names.push_back("sign");
  ws.categories.emplace("sign", s);
  EngineResult r = run_command(ws, "validate");
  CHECK(r.exit == 1);
  CHECK(r.report.at("pass") == false);
  const Json& item = r.report.at("reports").at(0);
  CHECK(item.at("pass") == false);
  REQUIRE(item.contains("counterexample"));
  CHECK(item.at("counterexample").at("check") == "leibniz_rule");
  CHECK(item.at("counterexample").at("detail").get<std::string>().find("Hom^") !=
        std::string::npos);
}

TEST_CASE("galois reports the group structure") {
  Workspace ws = parse_workspace(preset_workspace("point-f2-f4"));
  EngineResult r = run_command(ws, "galois");
  REQUIRE(r.exit == 0);
  const Json& item = item_for(r.report, "galois-group");
  CHECK(item.at("order") == 2);
  CHECK(item.at("is_galois") == true);
  CHECK(item.at("elements").size() == 2);
}

TEST_CASE("star tasks honor the expected verdict") {
  Workspace ws = parse_workspace(preset_workspace("point-q-sqrt2"));
  EngineResult r = run_command(ws, "star");
  CHECK(r.exit == 0);
  // flip the expectation: the condition's failure now counts as a check failure
  for (auto& t : ws.tasks)
    if (t.command == "star") t.args["expect"] = true;
  EngineResult bad = run_command(ws, "star");
  CHECK(bad.exit == 1);
}

TEST_CASE("dim-search outcomes and exit codes") {
  Workspace ws = parse_workspace(preset_workspace("dual-q"));

  EngineResult found = run_command(ws, "dim-search");
  CHECK(found.exit == 0);
  const Json& item = item_for(found.report, "dimsearch-ce-k2");
  CHECK(item.at("k") == 2);
  CHECK(item.at("witness").at(0).at("outcome") == "found");
  REQUIRE(item.at("witness").at(0).contains("witness_file"));

  EngineOptions tiny;
  tiny.budget_nodes = 2;
  EngineResult stalled = run_command(ws, "dim-search", tiny);
  CHECK(stalled.exit == 2);
  CHECK(item_for(stalled.report, "dimsearch-ce-k2").at("witness").at(0).at("outcome") ==
        "budget-exhausted");

  // k = 1 cannot reach cone(eps) no matter the budget: a definitive miss
  // once the node budget covers the whole level-1 candidate space
  for (auto& t : ws.tasks)
    if (t.command == "dim-search") t.args["k"] = 1;
  EngineOptions wide;
  wide.budget_nodes = 50000;
  EngineResult miss = run_command(ws, "dim-search", wide);
  CHECK(miss.exit == 1);
  CHECK(item_for(miss.report, "dimsearch-ce-k2").at("witness").at(0).at("outcome") ==
        "not-found");
}

TEST_CASE("emitted witness files verify and reject corruption") {
  Workspace ws = parse_workspace(preset_workspace("an2-q"));
  EngineResult r = run_command(ws, "dim-search");
  REQUIRE(r.exit == 0);
  for (auto& item : r.report.at("reports")) {
    for (auto& t : item.at("witness")) {
      REQUIRE(t.contains("witness_file"));
      std::string text = t.at("witness_file").dump(2) + "\n";
      EngineResult v = verify_witness_text(ws, text);
      CHECK(v.exit == 0);
      CHECK(v.report.at("pass") == true);

      // digest failure
      std::string evil = text;
      auto pos = evil.find("\"digest\"");
      REQUIRE(pos != std::string::npos);
      evil[evil.find(':', pos) + 3] ^= 1;
      EngineResult dv = verify_witness_text(ws, evil);
      CHECK(dv.exit == 1);
      CHECK(dv.report.at("reports").at(0).at("outcome") == "digest-mismatch");
    }
  }
}

TEST_CASE("unknown commands and misdirected verify-witness are input errors") {
  Workspace ws = parse_workspace(preset_workspace("dual-q"));
  CHECK_THROWS_AS((void)run_command(ws, "frobnicate"), Error);
  CHECK_THROWS_AS((void)run_command(ws, "verify-witness"), Error);
}

TEST_CASE("task errors become report items with severity, not crashes") {
  Workspace ws = parse_workspace(preset_workspace("dual-q"));
  Workspace::Task t;
  t.name = "broken";
  t.command = "cone";
  t.args = Json{{"category", "dual"}, {"source", "missing"}, {"target", "missing"},
                {"map", Json{{"degree", 0}, {"c", Json::object()}}}};
  ws.tasks.push_back(t);
  EngineResult r = run_command(ws, "cone");
  CHECK(r.exit == 3);
  const Json& item = item_for(r.report, "broken");
  CHECK(item.at("pass") == false);
  CHECK(item.at("outcome") == "error");
  CHECK(item.at("error").get<std::string>().find("InputError") != std::string::npos);
  // the healthy sibling task still ran
  CHECK(item_for(r.report, "cone-eps").at("pass") == true);
}

TEST_CASE("reports are deterministic and seed-independent") {
  Workspace ws = parse_workspace(preset_workspace("an2-q"));
  EngineOptions a, b;
  b.seed = 123456789;
  std::string ra = run_command(ws, "dim-search", a).report.dump(2);
  std::string rb = run_command(ws, "dim-search", b).report.dump(2);
  CHECK(ra == rb);
  std::string rc = run_command(ws, "dim-search", a).report.dump(2);
  CHECK(ra == rc);
}

TEST_CASE("basechange and hull report the dimension tables") {
  Workspace ws = parse_workspace(preset_workspace("point-q-sqrt2"));
  EngineResult bc = run_command(ws, "basechange");
  REQUIRE(bc.exit == 0);
  const Json& b = item_for(bc.report, "basechange-end");
  CHECK(b.at("pairs").at("0->0").at("k_dims").at("0") == 2);
  CHECK(b.at("pairs").at("0->0").at("l_dims").at("0") == 1);
  EngineResult hull = run_command(ws, "hull");
  REQUIRE(hull.exit == 0);
  const Json& h = item_for(hull.report, "hull-point");
  CHECK(h.at("p_star").at("pt").at("end_l_dims").at("0") == 1);
}
