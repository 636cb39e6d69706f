/* C interface to the scalar-extension engine.
 *
 * All functions returning sx_status use the exit-code contract of the CLI:
 * SX_OK on success, SX_CHECK_FAILED when a mathematical check fails,
 * SX_BUDGET_EXHAUSTED when a bounded search ran out of budget, and
 * SX_INPUT_ERROR for malformed input. On any non-OK status a thread-local
 * message is available from sx_last_error(). Strings returned through
 * out-parameters are owned by the caller and released with sx_string_free().
 */
#ifndef SCALEX_H
#define SCALEX_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct sx_workspace sx_workspace;

typedef enum sx_status {
  SX_OK = 0,
  SX_CHECK_FAILED = 1,
  SX_BUDGET_EXHAUSTED = 2,
  SX_INPUT_ERROR = 3
} sx_status;

const char* sx_version(void);

/* Parse a workspace from JSON text / load one from a file. */
sx_status sx_workspace_parse(const char* json_text, sx_workspace** out);
sx_status sx_workspace_load(const char* path, sx_workspace** out);
void sx_workspace_free(sx_workspace* ws);

/* Canonical serialization (byte-stable; parse-serialize is the identity on
 * files this library produced). */
sx_status sx_workspace_serialize(const sx_workspace* ws, char** json_out);

/* Run one engine command over the workspace's tasks. options_json may be
 * NULL or a JSON object with any of: "budget_shifts", "budget_nodes",
 * "seed". A JSON report is always produced when the command is known. */
sx_status sx_run(const sx_workspace* ws, const char* command, const char* options_json,
                 char** report_out);

/* Digest check plus independent re-verification of a witness file. */
sx_status sx_verify_witness(const sx_workspace* ws, const char* witness_json,
                            char** report_out);

/* Workspace text for a built-in example category over a named base field
 * ("Q" or "Fp", e.g. "F2"); n selects the size where it applies. */
sx_status sx_build_example(const char* name, const char* field, int n, char** json_out);

/* Complete shipped preset workspaces; sx_preset_names yields a
 * newline-separated list. */
sx_status sx_preset_workspace(const char* preset, char** json_out);
sx_status sx_preset_names(char** names_out);

const char* sx_last_error(void);
void sx_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SCALEX_H */
