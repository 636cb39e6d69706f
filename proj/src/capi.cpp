#include "scalex.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "engine.hpp"

using namespace scalex;

struct sx_workspace {
  Workspace ws;
};

static thread_local std::string g_last_error;

static char* dup_string(const std::string& s) {
  char* out = (char*)std::malloc(s.size() + 1);
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

static sx_status status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::budget_exhausted:
      return SX_BUDGET_EXHAUSTED;
    default:
      return SX_INPUT_ERROR;
  }
}

template <typename Fn>
static sx_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const Error& e) {
    g_last_error = std::string(error_code_name(e.code)) + ": " + e.what();
    return status_of(e.code);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SX_INPUT_ERROR;
  }
}

extern "C" {

const char* sx_version(void) { return kToolVersion; }

sx_status sx_workspace_parse(const char* json_text, sx_workspace** out) {
  if (!json_text || !out) {
    g_last_error = "null argument";
    return SX_INPUT_ERROR;
  }
  *out = nullptr;
  return guarded([&]() {
    auto* w = new sx_workspace{parse_workspace(json_text)};
    *out = w;
    return SX_OK;
  });
}

sx_status sx_workspace_load(const char* path, sx_workspace** out) {
  if (!path || !out) {
    g_last_error = "null argument";
    return SX_INPUT_ERROR;
  }
  *out = nullptr;
  return guarded([&]() {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::input_error, std::string("cannot open '") + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    auto* w = new sx_workspace{parse_workspace(buf.str())};
    *out = w;
    return SX_OK;
  });
}

void sx_workspace_free(sx_workspace* ws) { delete ws; }

sx_status sx_workspace_serialize(const sx_workspace* ws, char** json_out) {
  if (!ws || !json_out) {
    g_last_error = "null argument";
    return SX_INPUT_ERROR;
  }
  return guarded([&]() {
    *json_out = dup_string(serialize_workspace(ws->ws));
    return SX_OK;
  });
}

static EngineOptions options_from(const char* options_json) {
  EngineOptions opt;
  if (!options_json || !*options_json) return opt;
  Json j;
  try {
    j = Json::parse(options_json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::input_error, std::string("options: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::input_error, "options must be a JSON object");
  if (j.contains("budget_shifts")) opt.budget_shifts = j.at("budget_shifts").get<int>();
  if (j.contains("budget_nodes")) opt.budget_nodes = j.at("budget_nodes").get<int>();
  if (j.contains("seed")) opt.seed = j.at("seed").get<long>();
  if (opt.budget_shifts < 0 || opt.budget_nodes < 1)
    throw Error(ErrorCode::input_error, "budgets must be positive");
  return opt;
}

sx_status sx_run(const sx_workspace* ws, const char* command, const char* options_json,
                 char** report_out) {
  if (!ws || !command || !report_out) {
    g_last_error = "null argument";
    return SX_INPUT_ERROR;
  }
  *report_out = nullptr;
  return guarded([&]() {
    EngineResult r = run_command(ws->ws, command, options_from(options_json));
    *report_out = dup_string(r.report.dump(2) + "\n");
    return (sx_status)r.exit;
  });
}

sx_status sx_verify_witness(const sx_workspace* ws, const char* witness_json,
                            char** report_out) {
  if (!ws || !witness_json || !report_out) {
    g_last_error = "null argument";
    return SX_INPUT_ERROR;
  }
  *report_out = nullptr;
  return guarded([&]() {
    EngineResult r = verify_witness_text(ws->ws, witness_json);
    *report_out = dup_string(r.report.dump(2) + "\n");
    return (sx_status)r.exit;
  });
}

sx_status sx_build_example(const char* name, const char* field, int n, char** json_out) {
  if (!name || !field || !json_out) {
    g_last_error = "null argument";
    return SX_INPUT_ERROR;
  }
  return guarded([&]() {
    *json_out = dup_string(build_example_workspace(name, field, n));
    return SX_OK;
  });
}

sx_status sx_preset_workspace(const char* preset, char** json_out) {
  if (!preset || !json_out) {
    g_last_error = "null argument";
    return SX_INPUT_ERROR;
  }
  return guarded([&]() {
    *json_out = dup_string(preset_workspace(preset));
    return SX_OK;
  });
}

sx_status sx_preset_names(char** names_out) {
  if (!names_out) {
    g_last_error = "null argument";
    return SX_INPUT_ERROR;
  }
  return guarded([&]() {
    std::string all;
    for (auto& n : preset_names()) {
      all += n;
      all += "\n";
    }
    *names_out = dup_string(all);
    return SX_OK;
  });
}

const char* sx_last_error(void) { return g_last_error.c_str(); }

void sx_string_free(char* s) { std::free(s); }

}  // extern "C"
