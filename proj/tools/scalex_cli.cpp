#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "scalex.h"

namespace {

struct RunFlags {
  std::string workspace;
  int budget_shifts = 2;
  int budget_nodes = 200;
  long seed = 0;
  bool json = false;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    std::exit(3);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Owned {
  char* p = nullptr;
  ~Owned() { sx_string_free(p); }
};

void render_human(const std::string& report_text) {
  auto j = nlohmann::ordered_json::parse(report_text);
  for (auto& r : j.at("reports")) {
    bool pass = r.value("pass", false);
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << r.at("task").get<std::string>();
    if (r.contains("outcome")) std::cout << " (" << r.at("outcome").get<std::string>() << ")";
    if (r.contains("error")) std::cout << " " << r.at("error").get<std::string>();
    if (r.contains("counterexample") && r.at("counterexample").is_object()) {
      auto& c = r.at("counterexample");
      std::cout << " -- " << c.value("check", c.value("node", std::string()));
      std::string detail = c.value("detail", std::string());
      if (!detail.empty()) std::cout << ": " << detail;
    }
    if (r.contains("k")) std::cout << " k=" << r.at("k").get<int>();
    std::cout << "\n";
    if (r.contains("witness") && r.at("witness").is_array()) {
      for (auto& t : r.at("witness")) {
        if (t.is_object() && t.contains("target") && t.contains("outcome"))
          std::cout << "  " << t.at("target").get<std::string>() << ": "
                    << t.at("outcome").get<std::string>() << "\n";
      }
    }
  }
  std::cout << (j.value("pass", false) ? "all checks passed" : "checks failed") << "\n";
}

int run_engine_command(const std::string& command, const RunFlags& f) {
  sx_workspace* ws = nullptr;
  if (sx_workspace_load(f.workspace.c_str(), &ws) != SX_OK) {
    std::cerr << "error: " << sx_last_error() << "\n";
    return 3;
  }
  nlohmann::ordered_json opts;
  opts["budget_shifts"] = f.budget_shifts;
  opts["budget_nodes"] = f.budget_nodes;
  opts["seed"] = f.seed;
  Owned report;
  sx_status st = sx_run(ws, command.c_str(), opts.dump().c_str(), &report.p);
  sx_workspace_free(ws);
  if (!report.p) {
    std::cerr << "error: " << sx_last_error() << "\n";
    return (int)st;
  }
  if (f.json)
    std::cout << report.p;
  else
    render_human(report.p);
  return (int)st;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact scalar-extension engine for DG-enhanced triangulated categories"};
  app.set_version_flag("--version", sx_version());
  app.require_subcommand(1);

  static const char* kEngineCommands[] = {"validate",   "h0",     "basechange", "hull",
                                          "cone",       "adjunction", "galois", "descent",
                                          "projection", "star",   "dim-search"};
  std::map<std::string, RunFlags> flags;
  for (const char* cmd : kEngineCommands) {
    auto* sub = app.add_subcommand(cmd, std::string("run ") + cmd + " tasks of a workspace");
    RunFlags& f = flags[cmd];
    sub->add_option("--workspace", f.workspace, "workspace JSON file")->required();
    sub->add_option("--budget-shifts", f.budget_shifts, "search shift window");
    sub->add_option("--budget-nodes", f.budget_nodes, "search node limit");
    sub->add_option("--seed", f.seed, "exploration seed (never affects verification)");
    sub->add_flag("--json", f.json, "emit the JSON report");
    sub->callback([cmd, &f]() { std::exit(run_engine_command(cmd, f)); });
  }

  {
    auto* sub = app.add_subcommand("verify-witness", "re-verify a stored generation witness");
    static RunFlags f;
    static std::string witness_path;
    sub->add_option("--workspace", f.workspace, "workspace JSON file")->required();
    sub->add_option("--witness", witness_path, "witness JSON file")->required();
    sub->add_flag("--json", f.json, "emit the JSON report");
    sub->callback([]() {
      sx_workspace* ws = nullptr;
      if (sx_workspace_load(f.workspace.c_str(), &ws) != SX_OK) {
        std::cerr << "error: " << sx_last_error() << "\n";
        std::exit(3);
      }
      std::string text = slurp(witness_path);
      Owned report;
      sx_status st = sx_verify_witness(ws, text.c_str(), &report.p);
      sx_workspace_free(ws);
      if (!report.p) {
        std::cerr << "error: " << sx_last_error() << "\n";
        std::exit((int)st);
      }
      if (f.json)
        std::cout << report.p;
      else
        render_human(report.p);
      std::exit((int)st);
    });
  }

  {
    auto* sub = app.add_subcommand("examples", "emit built-in example workspaces");
    static std::string name, field = "Q", preset, out_path;
    static int n = 2;
    sub->add_option("name", name, "category: point, matrix_algebra, dual_numbers, path_algebra_An");
    sub->add_option("--field", field, "base field (Q or Fp, e.g. F2)");
    sub->add_option("--n", n, "size parameter where applicable");
    sub->add_option("--preset", preset, "full preset workspace instead of a bare category");
    sub->add_option("--out", out_path, "write to a file instead of stdout");
    sub->callback([]() {
      Owned text;
      sx_status st;
      if (!preset.empty())
        st = sx_preset_workspace(preset.c_str(), &text.p);
      else if (!name.empty())
        st = sx_build_example(name.c_str(), field.c_str(), n, &text.p);
      else {
        Owned names;
        sx_preset_names(&names.p);
        std::cout << "categories: point, matrix_algebra, dual_numbers, path_algebra_An\n"
                  << "presets:\n"
                  << names.p;
        std::exit(0);
      }
      if (st != SX_OK) {
        std::cerr << "error: " << sx_last_error() << "\n";
        std::exit((int)st);
      }
      if (out_path.empty()) {
        std::cout << text.p;
      } else {
        std::ofstream o(out_path, std::ios::binary);
        o << text.p;
      }
      std::exit(0);
    });
  }

  CLI11_PARSE(app, argc, argv);
  return 0;
}
