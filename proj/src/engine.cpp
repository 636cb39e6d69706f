#include "engine.hpp"

#include <algorithm>

namespace scalex {

const char* kToolVersion = "scalex 1.0.0";

static Error task_error(const std::string& what) {
  return Error(ErrorCode::input_error, what);
}

static std::string req_string(const Json& args, const char* key) {
  auto it = args.find(key);
  if (it == args.end() || !it->is_string())
    throw task_error(std::string("task needs a string argument '") + key + "'");
  return it->get<std::string>();
}

static const FiniteDgCategory& task_category(const Workspace& ws, const Json& args) {
  return ws.category(req_string(args, "category"));
}

static TwistedComplex resolve_twisted(const Workspace& ws, const FiniteDgCategory& a,
                                      const Json& ref, const std::string& what) {
  if (ref.is_string()) {
    std::string name = ref.get<std::string>();
    if (auto* nt = ws.find_twisted(name)) return nt->t;
    return embed_psi(a, a.object_index(name));
  }
  if (ref.is_object()) return twisted_from_json(a, ref, what);
  throw task_error(what + ": expected a twisted-complex name, object label, or inline object");
}

static const ModuleStructure& resolve_structure(const Workspace& ws, const Json& args,
                                                const char* key) {
  std::string name = req_string(args, key);
  auto* s = ws.find_structure(name);
  if (!s) throw task_error("unknown module structure '" + name + "'");
  return s->s;
}

static Json dims_json(const std::map<int, int>& dims) {
  Json out = Json::object();
  for (auto& [n, d] : dims) out[std::to_string(n)] = d;
  return out;
}

static Json counterexample_json(const CheckReport& r) {
  for (auto& item : r.items)
    if (!item.ok) {
      Json c = Json::object();
      c["check"] = item.check;
      c["detail"] = item.detail;
      return c;
    }
  return Json();
}

// ---------------------------------------------------------------------------
// individual task bodies; each fills `item` and may raise `severity`

static void run_validate(const Workspace& ws, const Json& args, Json& item, int& severity) {
  CheckReport all;
  auto one_category = [&](const std::string& name) {
    const FiniteDgCategory& a = ws.category(name);
    all.merge(validate_dg_category(a));
    for (auto& s : ws.structures)
      if (s.category == name) all.merge(validate_module_structure(a, s.s));
    for (auto& t : ws.twisted)
      if (t.category == name) all.merge(validate_twisted(a, t.t));
  };
  if (args.contains("category"))
    one_category(req_string(args, "category"));
  else
    for (auto& name : ws.category_names) one_category(name);
  item["pass"] = all.ok();
  item["checks"] = (int)all.items.size();
  if (!all.ok()) {
    item["counterexample"] = counterexample_json(all);
    severity = std::max(severity, 1);
  }
}

static void run_h0(const Workspace& ws, const Json& args, Json& item, int&) {
  Json cats = Json::object();
  auto one_category = [&](const std::string& name) {
    const FiniteDgCategory& a = ws.category(name);
    H0Category h = h0_category(a);
    Json pairs = Json::object();
    for (auto& [xy, dim] : h.hom_dim)
      pairs[a.objects[xy.first] + "->" + a.objects[xy.second]] = dim;
    Json graded = Json::object();
    for (auto& [xy, table] : graded_category(a))
      graded[a.objects[xy.first] + "->" + a.objects[xy.second]] = dims_json(table);
    Json c = Json::object();
    c["h0_dims"] = pairs;
    c["cohomology"] = graded;
    cats[name] = c;
  };
  if (args.contains("category"))
    one_category(req_string(args, "category"));
  else
    for (auto& name : ws.category_names) one_category(name);
  item["pass"] = true;
  item["categories"] = cats;
}

static std::vector<ModuleStructure> matching_structures(const Workspace& ws,
                                                        const std::string& category,
                                                        const std::string& extension,
                                                        const Json& args) {
  std::vector<ModuleStructure> out;
  if (args.contains("structures")) {
    if (!args.at("structures").is_array())
      throw task_error("'structures' must be an array of names");
    for (auto& n : args.at("structures"))
      out.push_back(resolve_structure(ws, Json{{"s", n}}, "s"));
    return out;
  }
  for (auto& s : ws.structures)
    if (s.category == category && s.extension == extension) out.push_back(s.s);
  if (out.empty())
    throw task_error("no module structures declared for category '" + category +
                     "' over '" + extension + "'");
  return out;
}

static void run_basechange(const Workspace& ws, const Json& args, Json& item, int&) {
  std::string cat = req_string(args, "category");
  std::string ext = req_string(args, "extension");
  const FiniteDgCategory& a = ws.category(cat);
  FieldPtr L = ws.field(ext);
  auto structures = matching_structures(ws, cat, ext, args);
  BaseChangeCategory bcc = build_base_change_category(a, L, structures);
  Json pairs = Json::object();
  for (auto& [ij, pd] : bcc.pairs) {
    Json p = Json::object();
    p["k_dims"] = dims_json(pd.sub.complex.dims);
    p["l_dims"] = dims_json(bcc.cat.hom(ij.first, ij.second).dims);
    pairs[std::to_string(ij.first) + "->" + std::to_string(ij.second)] = p;
  }
  item["pass"] = true;
  item["objects"] = (int)structures.size();
  item["pairs"] = pairs;
}

static void run_hull(const Workspace& ws, const Json& args, Json& item, int&) {
  std::string cat = req_string(args, "category");
  std::string ext = req_string(args, "extension");
  const FiniteDgCategory& a = ws.category(cat);
  FieldPtr L = ws.field(ext);
  HullContext h = hull_of_base_change(a, L);
  Json ends = Json::object();
  for (int obj = 0; obj < a.size(); ++obj) {
    int idx = h.pstar_of_object[obj];
    Json e = Json::object();
    e["structure"] = idx;
    e["end_l_dims"] = dims_json(h.bcc.cat.hom(idx, idx).dims);
    ends[a.objects[obj]] = e;
  }
  item["pass"] = true;
  item["structures"] = (int)h.bcc.structures.size();
  item["p_star"] = ends;
}

static void run_cone(const Workspace& ws, const Json& args, Json& item, int& severity) {
  const FiniteDgCategory& a = task_category(ws, args);
  TwistedComplex s = resolve_twisted(ws, a, args.contains("source") ? args.at("source") : Json(),
                                     "source");
  TwistedComplex t = resolve_twisted(ws, a, args.contains("target") ? args.at("target") : Json(),
                                     "target");
  if (!args.contains("map")) throw task_error("cone task needs a 'map' argument");
  TwMorphism u = morphism_from_json(a, s, t, args.at("map"), "map");
  ConeData cd = tw_cone(a, s, t, u);
  CheckReport r = validate_twisted(a, cd.cone);
  item["pass"] = r.ok();
  item["cone"] = twisted_to_json(a, cd.cone);
  if (!r.ok()) {
    item["counterexample"] = counterexample_json(r);
    severity = std::max(severity, 1);
  }
}

static void run_adjunction(const Workspace& ws, const Json& args, Json& item, int& severity) {
  const FiniteDgCategory& a = task_category(ws, args);
  FieldPtr L = ws.field(req_string(args, "extension"));
  int obj = a.object_index(req_string(args, "object"));
  const ModuleStructure& t = resolve_structure(ws, args, "structure");
  AdjunctionReport r = adjunction_check(a, L, obj, t);
  item["pass"] = r.report.ok();
  item["left_dims"] = dims_json(r.left_dims);
  item["right_dims"] = dims_json(r.right_dims);
  if (!r.report.ok()) {
    item["counterexample"] = counterexample_json(r.report);
    severity = std::max(severity, 1);
  }
}

static void run_galois(const Workspace& ws, const Json& args, Json& item, int&) {
  FieldPtr L = ws.field(req_string(args, "extension"));
  AutomorphismGroup g = automorphism_group(L);
  Json elems = Json::array();
  for (auto& s : g.elements) elems.push_back(L->to_string(s.gen_image));
  item["pass"] = true;
  item["order"] = (int)g.elements.size();
  item["is_galois"] = g.is_galois;
  item["elements"] = elems;
}

static void run_projection(const Workspace& ws, const Json& args, Json& item, int& severity) {
  const FiniteDgCategory& a = task_category(ws, args);
  FieldPtr L = ws.field(req_string(args, "extension"));
  const ModuleStructure& s = resolve_structure(ws, args, "structure");
  AutomorphismGroup g = automorphism_group(L);
  ProjectionFormulaReport r = projection_formula_check(a, g, s);
  item["pass"] = r.report.ok();
  Json w = Json::object();
  w["iso"] = morphism_to_json(a, r.iso);
  w["iso_inv"] = morphism_to_json(a, r.iso_inv);
  item["witness"] = w;
  if (!r.report.ok()) {
    item["counterexample"] = counterexample_json(r.report);
    severity = std::max(severity, 1);
  }
}

static void run_star(const Workspace& ws, const Json& args, Json& item, int& severity) {
  const FiniteDgCategory& a = task_category(ws, args);
  const ModuleStructure& s = resolve_structure(ws, args, "s");
  const ModuleStructure& t = resolve_structure(ws, args, "t");
  bool holds = star_condition_check(a, s, t);
  item["holds"] = holds;
  bool pass = true;
  if (args.contains("expect")) {
    if (!args.at("expect").is_boolean()) throw task_error("'expect' must be a boolean");
    pass = holds == args.at("expect").get<bool>();
  }
  item["pass"] = pass;
  if (!pass) severity = std::max(severity, 1);
}

static void run_descent(const Workspace& ws, const Json& args, Json& item, int& severity) {
  const FiniteDgCategory& a = task_category(ws, args);
  FieldPtr L = ws.field(req_string(args, "extension"));
  TwistedComplex x = resolve_twisted(ws, a, args.contains("object") ? args.at("object") : Json(),
                                     "object");
  AutomorphismGroup g = automorphism_group(L);
  GaloisEquivariantObject e = canonical_equivariant_pstar(a, g, x);
  CheckReport vr = validate_equivariant(a, g, e);
  DescentResult dr = descend(a, g, e);
  bool pass = vr.ok() && dr.report.ok();
  item["pass"] = pass;
  item["descended"] = twisted_to_json(a, dr.descended);
  if (!pass) {
    CheckReport merged = vr;
    merged.merge(dr.report);
    item["counterexample"] = counterexample_json(merged);
    severity = std::max(severity, 1);
  }
}

static void run_dim_search(const Workspace& ws, const Json& args, const EngineOptions& opt,
                           const std::string& category_name, Json& item, int& severity) {
  const FiniteDgCategory& a = ws.category(category_name);
  TwistedComplex e = resolve_twisted(
      ws, a, args.contains("generator") ? args.at("generator") : Json(), "generator");
  SearchBudget budget;
  budget.shift_window = opt.budget_shifts;
  budget.node_limit = opt.budget_nodes;

  std::vector<std::pair<std::string, TwistedComplex>> targets;
  if (args.contains("target"))
    targets.push_back({args.at("target").is_string() ? args.at("target").get<std::string>()
                                                     : std::string("target"),
                       resolve_twisted(ws, a, args.at("target"), "target")});
  if (args.contains("targets")) {
    if (!args.at("targets").is_array()) throw task_error("'targets' must be an array");
    for (auto& t : args.at("targets"))
      targets.push_back({t.is_string() ? t.get<std::string>() : std::string("target"),
                         resolve_twisted(ws, a, t, "targets")});
  }
  if (targets.empty()) throw task_error("dim-search needs 'target' or 'targets'");

  if (args.contains("k")) {
    long k = args.at("k").is_number_integer() ? args.at("k").get<long>() : 0;
    if (k < 1) throw task_error("'k' must be a positive integer");
    Json found = Json::array();
    bool all_found = true, exhausted = false;
    for (auto& [name, m] : targets) {
      SearchOutcome out = search_generation_ex(a, e, m, (int)k, budget);
      Json f = Json::object();
      f["target"] = name;
      if (out.witness) {
        WitnessCheck chk = verify_generation_witness(a, e, *out.witness);
        if (!chk.ok) {
          f["outcome"] = "unsound-witness";
          f["detail"] = chk.node + ": " + chk.detail;
          all_found = false;
          severity = std::max(severity, 1);
        } else {
          f["outcome"] = "found";
          f["witness_file"] =
              Json::parse(witness_file_text(a, category_name, e, *out.witness));
        }
      } else if (out.budget_exhausted) {
        f["outcome"] = "budget-exhausted";
        all_found = false;
        exhausted = true;
      } else {
        f["outcome"] = "not-found";
        all_found = false;
      }
      found.push_back(f);
    }
    item["pass"] = all_found;
    item["k"] = (int)k;
    item["witness"] = found;
    if (!all_found) severity = std::max(severity, exhausted ? 2 : 1);
    return;
  }

  std::vector<TwistedComplex> objects;
  for (auto& [name, m] : targets) objects.push_back(m);
  auto bound = dimension_upper_bound(a, e, objects, budget);
  if (!bound) {
    item["pass"] = false;
    item["outcome"] = "budget-exhausted";
    severity = std::max(severity, 2);
    return;
  }
  Json files = Json::array();
  for (size_t i = 0; i < bound->witnesses.size(); ++i) {
    Json f = Json::object();
    f["target"] = targets[i].first;
    f["witness_file"] =
        Json::parse(witness_file_text(a, category_name, e, bound->witnesses[i]));
    files.push_back(f);
  }
  item["pass"] = true;
  item["k"] = bound->k;
  item["witness"] = files;
}

// ---------------------------------------------------------------------------
// dispatch

std::vector<std::string> engine_commands() {
  return {"validate", "h0",         "basechange", "hull",       "cone",
          "adjunction", "galois",   "descent",    "projection", "star",
          "dim-search", "verify-witness"};
}

static int severity_of(ErrorCode c) {
  return c == ErrorCode::budget_exhausted ? 2 : 3;
}

static EngineResult make_result(const std::string& command, std::vector<Json> items,
                                int severity) {
  std::stable_sort(items.begin(), items.end(), [](const Json& a, const Json& b) {
    return a.at("task").get<std::string>() < b.at("task").get<std::string>();
  });
  Json rep = Json::object();
  rep["schema"] = "scalex-report/1";
  rep["tool"] = kToolVersion;
  rep["command"] = command;
  rep["pass"] = severity == 0;
  Json arr = Json::array();
  for (auto& i : items) arr.push_back(i);
  rep["reports"] = arr;
  return {severity, rep};
}

EngineResult run_command(const Workspace& ws, const std::string& command,
                         const EngineOptions& opt) {
  auto known = engine_commands();
  if (std::find(known.begin(), known.end(), command) == known.end())
    throw Error(ErrorCode::input_error, "unknown command '" + command + "'");
  if (command == "verify-witness")
    throw Error(ErrorCode::input_error, "verify-witness consumes a witness file");

  std::vector<Workspace::Task> todo;
  for (auto& t : ws.tasks)
    if (t.command == command) todo.push_back(t);
  if (todo.empty()) {
    if (command == "validate" || command == "h0")
      todo.push_back({command, command, Json::object()});
    else if (command == "galois")
      for (auto& name : ws.field_names)
        if (ws.fields.at(name)->is_extension()) {
          Json args = Json::object();
          args["extension"] = name;
          todo.push_back({"galois-" + name, "galois", args});
        }
  }

  int severity = 0;
  std::vector<Json> items;
  for (auto& task : todo) {
    Json item = Json::object();
    item["task"] = task.name;
    item["check"] = task.command;
    try {
      if (command == "validate")
        run_validate(ws, task.args, item, severity);
      else if (command == "h0")
        run_h0(ws, task.args, item, severity);
      else if (command == "basechange")
        run_basechange(ws, task.args, item, severity);
      else if (command == "hull")
        run_hull(ws, task.args, item, severity);
      else if (command == "cone")
        run_cone(ws, task.args, item, severity);
      else if (command == "adjunction")
        run_adjunction(ws, task.args, item, severity);
      else if (command == "galois")
        run_galois(ws, task.args, item, severity);
      else if (command == "projection")
        run_projection(ws, task.args, item, severity);
      else if (command == "star")
        run_star(ws, task.args, item, severity);
      else if (command == "descent")
        run_descent(ws, task.args, item, severity);
      else if (command == "dim-search")
        run_dim_search(ws, task.args, opt, req_string(task.args, "category"), item, severity);
    } catch (const Error& e) {
      item["pass"] = false;
      item["outcome"] = e.code == ErrorCode::budget_exhausted ? "budget-exhausted" : "error";
      item["error"] = std::string(error_code_name(e.code)) + ": " + e.what();
      severity = std::max(severity, severity_of(e.code));
    }
    items.push_back(item);
  }
  return make_result(command, std::move(items), severity);
}

EngineResult verify_witness_text(const Workspace& ws, const std::string& witness_text) {
  Json item = Json::object();
  item["task"] = "verify-witness";
  item["check"] = "verify-witness";
  int severity = 0;
  try {
    WitnessFile wf = parse_witness_file(ws, witness_text);
    if (!wf.digest_ok) {
      item["pass"] = false;
      item["outcome"] = "digest-mismatch";
      severity = 1;
    } else {
      const FiniteDgCategory& a = ws.category(wf.category);
      WitnessCheck chk = verify_generation_witness(a, wf.generator, wf.witness);
      item["pass"] = chk.ok;
      if (!chk.ok) {
        Json c = Json::object();
        c["node"] = chk.node;
        c["detail"] = chk.detail;
        item["counterexample"] = c;
        severity = 1;
      }
    }
  } catch (const Error& e) {
    item["pass"] = false;
    item["outcome"] = "error";
    item["error"] = std::string(error_code_name(e.code)) + ": " + e.what();
    severity = severity_of(e.code);
  }
  return make_result("verify-witness", {item}, severity);
}

}  // namespace scalex
