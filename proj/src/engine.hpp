#pragma once

#include "workspace.hpp"

namespace scalex {

extern const char* kToolVersion;

struct EngineOptions {
  int budget_shifts = 2;
  int budget_nodes = 200;
  long seed = 0;  // accepted for interface stability; exploration order is fixed
};

/// exit: 0 pass, 1 check failure, 2 budget exhausted, 3 input error.
struct EngineResult {
  int exit = 0;
  Json report;
};

/// Runs every task of the workspace whose command matches; `validate`, `h0`
/// and `galois` synthesize whole-workspace default tasks when none are
/// declared. Reports are ordered by task name.
EngineResult run_command(const Workspace& ws, const std::string& command,
                         const EngineOptions& opt = {});

/// Digest check plus full independent re-verification of a witness file.
EngineResult verify_witness_text(const Workspace& ws, const std::string& witness_text);

std::vector<std::string> engine_commands();

}  // namespace scalex
