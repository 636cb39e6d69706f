#include "workspace.hpp"

#include <cstdio>

namespace scalex {

// ---------------------------------------------------------------------------
// json access with path context

static Error schema_error(const std::string& path, const std::string& what) {
  return Error(ErrorCode::input_error, path + ": " + what);
}

static const Json& member(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw schema_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw schema_error(path, std::string("missing key '") + key + "'");
  return *it;
}

static std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw schema_error(path, "expected a string");
  return j.get<std::string>();
}

static long as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw schema_error(path, "expected an integer");
  return j.get<long>();
}

static const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw schema_error(path, "expected an array");
  return j;
}

static const Json& as_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw schema_error(path, "expected an object");
  return j;
}

static int parse_int_key(const std::string& s, const std::string& path) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw schema_error(path, "bad integer key '" + s + "'");
  }
}

static std::string key_ij(int i, int j) {
  return std::to_string(i) + "," + std::to_string(j);
}

static std::pair<int, int> parse_ij(const std::string& s, const std::string& path) {
  auto c = s.find(',');
  if (c == std::string::npos) throw schema_error(path, "bad index pair '" + s + "'");
  return {parse_int_key(s.substr(0, c), path), parse_int_key(s.substr(c + 1), path)};
}

static Scalar scalar_from(const FieldPtr& F, const Json& j, const std::string& path) {
  std::string s = as_string(j, path);
  try {
    return F->parse(s);
  } catch (const Error& e) {
    throw schema_error(path, e.what());
  }
}

// ---------------------------------------------------------------------------
// matrices and coordinate columns

Json matrix_to_json(const FieldPtr& F, const Mat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(F->to_string(m.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Mat matrix_from_json(const FieldPtr& F, int rows, int cols, const Json& j,
                     const std::string& path) {
  as_array(j, path);
  if ((int)j.size() != rows) throw schema_error(path, "expected " + std::to_string(rows) + " rows");
  Mat m(F, rows, cols);
  for (int i = 0; i < rows; ++i) {
    const Json& row = j.at(i);
    as_array(row, path);
    if ((int)row.size() != cols)
      throw schema_error(path, "expected " + std::to_string(cols) + " columns");
    for (int c = 0; c < cols; ++c)
      m.at(i, c) = scalar_from(F, row.at(c), path + "[" + std::to_string(i) + "]");
  }
  return m;
}

static Json column_to_json(const FieldPtr& F, const Mat& m) {
  Json out = Json::array();
  for (int i = 0; i < m.rows(); ++i) out.push_back(F->to_string(m.at(i, 0)));
  return out;
}

static Mat column_from_json(const FieldPtr& F, int rows, const Json& j,
                            const std::string& path) {
  as_array(j, path);
  if ((int)j.size() != rows)
    throw schema_error(path, "expected " + std::to_string(rows) + " coordinates");
  Mat m(F, rows, 1);
  for (int i = 0; i < rows; ++i) m.at(i, 0) = scalar_from(F, j.at(i), path);
  return m;
}

// ---------------------------------------------------------------------------
// fields

static Json base_ref_json(const FieldPtr& b) {
  if (b->kind == Field::Kind::rationals) return Json("Q");
  Json o = Json::object();
  o["Fp"] = (long long)b->charac;
  return o;
}

static Json field_to_json(const std::string& name, const FieldPtr& f) {
  Json out = Json::object();
  out["name"] = name;
  if (!f->is_extension()) {
    out["base"] = base_ref_json(f);
    return out;
  }
  out["base"] = base_ref_json(f->base);
  Json mp = Json::array();
  for (auto& c : f->minpoly) mp.push_back(f->base->to_string(c));
  out["minpoly"] = mp;
  out["trusted"] = f->cert.kind == IrreducibilityCertificate::Kind::trusted;
  return out;
}

static FieldPtr base_ref_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "Q") return Field::rationals();
    throw schema_error(path, "unknown base field '" + j.get<std::string>() + "'");
  }
  if (j.is_object() && j.contains("Fp")) {
    long p = as_int(j.at("Fp"), path + ".Fp");
    if (p < 2) throw schema_error(path, "Fp needs a prime p");
    return Field::prime((std::uint64_t)p);
  }
  throw schema_error(path, "expected \"Q\" or {\"Fp\": p}");
}

static std::pair<std::string, FieldPtr> field_from_json(const Json& j, const std::string& path) {
  std::string name = as_string(member(j, "name", path), path + ".name");
  FieldPtr base = base_ref_from_json(member(j, "base", path), path + ".base");
  if (!j.contains("minpoly")) return {name, base};
  const Json& mp = as_array(j.at("minpoly"), path + ".minpoly");
  std::vector<Scalar> coeffs;
  for (size_t i = 0; i < mp.size(); ++i)
    coeffs.push_back(scalar_from(base, mp.at(i), path + ".minpoly"));
  bool trusted = j.contains("trusted") && j.at("trusted").is_boolean() && j.at("trusted").get<bool>();
  try {
    return {name, Field::extension(base, coeffs, trusted, name)};
  } catch (const Error& e) {
    throw schema_error(path, e.what());
  }
}

// ---------------------------------------------------------------------------
// categories

static std::string field_name_of(const Workspace& ws, const FieldPtr& f,
                                 const std::string& path) {
  for (auto& name : ws.field_names)
    if (ws.fields.at(name).get() == f.get()) return name;
  for (auto& name : ws.field_names)
    if (ws.fields.at(name)->same_field(*f)) return name;
  throw schema_error(path, "coefficient field is not declared in the workspace");
}

static Json category_to_json(const Workspace& ws, const std::string& name,
                             const FiniteDgCategory& a) {
  Json out = Json::object();
  out["name"] = name;
  out["field"] = field_name_of(ws, a.F, "categories." + name);
  Json objs = Json::array();
  for (auto& o : a.objects) objs.push_back(o);
  out["objects"] = objs;

  Json homs = Json::array();
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < a.size(); ++y) {
      const CochainComplex& c = a.hom(x, y);
      if (c.dims.empty()) continue;
      Json h = Json::object();
      h["source"] = a.objects[x];
      h["target"] = a.objects[y];
      Json dims = Json::object();
      for (auto& [n, dim] : c.dims) dims[std::to_string(n)] = dim;
      h["dims"] = dims;
      Json diffs = Json::object();
      for (auto& [n, m] : c.d)
        if (!m.is_zero()) diffs[std::to_string(n)] = matrix_to_json(a.F, m);
      if (!diffs.empty()) h["differentials"] = diffs;
      homs.push_back(h);
    }
  out["homs"] = homs;

  std::map<std::array<int, 3>, std::vector<std::array<long, 3>>> triples;
  std::map<std::array<int, 3>, std::vector<std::string>> triple_vals;
  for (auto& key : a.comp_block_keys()) {
    auto [x, y, z, m, n] = key;
    Mat b = a.comp_block(x, y, z, m, n);
    int d1 = a.hom(x, y).dim(m), d2 = a.hom(y, z).dim(n);
    for (int i1 = 0; i1 < d1; ++i1)
      for (int i2 = 0; i2 < d2; ++i2)
        for (int r = 0; r < b.rows(); ++r) {
          const Scalar& v = b.at(r, i1 * d2 + i2);
          if (v.is_zero()) continue;
          std::array<int, 3> t{x, y, z};
          triples[t].push_back({a.flat_of(x, y, m, i1), a.flat_of(y, z, n, i2),
                                a.flat_of(x, z, m + n, r)});
          triple_vals[t].push_back(a.F->to_string(v));
        }
  }
  Json comps = Json::array();
  for (auto& [t, entries] : triples) {
    std::vector<size_t> order(entries.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t p, size_t q) { return entries[p] < entries[q]; });
    Json c = Json::object();
    c["objects"] = Json::array({a.objects[t[0]], a.objects[t[1]], a.objects[t[2]]});
    Json es = Json::array();
    for (size_t i : order)
      es.push_back(Json::array({entries[i][0], entries[i][1], entries[i][2],
                                triple_vals[t][i]}));
    c["entries"] = es;
    comps.push_back(c);
  }
  out["compositions"] = comps;

  Json ids = Json::array();
  for (int x = 0; x < a.size(); ++x) {
    Json e = Json::object();
    e["object"] = a.objects[x];
    e["coords"] = column_to_json(a.F, a.identity_coords(x));
    ids.push_back(e);
  }
  out["identities"] = ids;
  return out;
}

static int object_ref(const FiniteDgCategory& a, const Json& j, const std::string& path) {
  std::string label = as_string(j, path);
  try {
    return a.object_index(label);
  } catch (const Error& e) {
    throw schema_error(path, e.what());
  }
}

static std::pair<std::string, FiniteDgCategory> category_from_json(const Workspace& ws,
                                                                   const Json& j,
                                                                   const std::string& path) {
  std::string name = as_string(member(j, "name", path), path + ".name");
  FiniteDgCategory a;
  a.F = ws.field(as_string(member(j, "field", path), path + ".field"));
  for (auto& o : as_array(member(j, "objects", path), path + ".objects")) {
    try {
      a.add_object(as_string(o, path + ".objects"));
    } catch (const Error& e) {
      throw schema_error(path + ".objects", e.what());
    }
  }
  if (j.contains("homs")) {
    const Json& homs = as_array(j.at("homs"), path + ".homs");
    for (size_t i = 0; i < homs.size(); ++i) {
      std::string hp = path + ".homs[" + std::to_string(i) + "]";
      const Json& h = homs.at(i);
      int x = object_ref(a, member(h, "source", hp), hp + ".source");
      int y = object_ref(a, member(h, "target", hp), hp + ".target");
      CochainComplex c;
      c.F = a.F;
      for (auto& [k, v] : as_object(member(h, "dims", hp), hp + ".dims").items()) {
        int deg = parse_int_key(k, hp + ".dims");
        long dim = as_int(v, hp + ".dims." + k);
        if (dim < 0) throw schema_error(hp + ".dims." + k, "negative dimension");
        if (dim > 0) c.dims[deg] = (int)dim;
      }
      if (h.contains("differentials")) {
        for (auto& [k, v] : as_object(h.at("differentials"), hp + ".differentials").items()) {
          int deg = parse_int_key(k, hp + ".differentials");
          c.d[deg] = matrix_from_json(a.F, c.dim(deg + 1), c.dim(deg), v,
                                      hp + ".differentials." + k);
        }
      }
      a.set_hom(x, y, c);
    }
  }
  if (j.contains("compositions")) {
    const Json& comps = as_array(j.at("compositions"), path + ".compositions");
    for (size_t i = 0; i < comps.size(); ++i) {
      std::string cp = path + ".compositions[" + std::to_string(i) + "]";
      const Json& c = comps.at(i);
      const Json& objs = as_array(member(c, "objects", cp), cp + ".objects");
      if (objs.size() != 3) throw schema_error(cp + ".objects", "expected three object labels");
      int x = object_ref(a, objs.at(0), cp + ".objects");
      int y = object_ref(a, objs.at(1), cp + ".objects");
      int z = object_ref(a, objs.at(2), cp + ".objects");
      const Json& es = as_array(member(c, "entries", cp), cp + ".entries");
      for (size_t k = 0; k < es.size(); ++k) {
        std::string ep = cp + ".entries[" + std::to_string(k) + "]";
        const Json& e = as_array(es.at(k), ep);
        if (e.size() != 4) throw schema_error(ep, "expected [in1, in2, out, scalar]");
        try {
          a.add_composition_entry(x, y, z, (int)as_int(e.at(0), ep), (int)as_int(e.at(1), ep),
                                  (int)as_int(e.at(2), ep), scalar_from(a.F, e.at(3), ep));
        } catch (const Error& err) {
          throw schema_error(ep, err.what());
        }
      }
    }
  }
  if (j.contains("identities")) {
    const Json& ids = as_array(j.at("identities"), path + ".identities");
    for (size_t i = 0; i < ids.size(); ++i) {
      std::string ip = path + ".identities[" + std::to_string(i) + "]";
      const Json& e = ids.at(i);
      int x = object_ref(a, member(e, "object", ip), ip + ".object");
      Mat coords = column_from_json(a.F, a.hom(x, x).dim(0), member(e, "coords", ip),
                                    ip + ".coords");
      try {
        a.set_identity(x, coords);
      } catch (const Error& err) {
        throw schema_error(ip, err.what());
      }
    }
  }
  try {
    a.finalize();
  } catch (const Error& e) {
    throw schema_error(path, e.what());
  }
  return {name, std::move(a)};
}

// ---------------------------------------------------------------------------
// twisted complexes and hull morphisms

Json twisted_to_json(const FiniteDgCategory& a, const TwistedComplex& t) {
  Json out = Json::object();
  Json es = Json::array();
  for (auto& e : t.entries) es.push_back(Json::array({a.objects[e.obj], e.shift}));
  out["entries"] = es;
  Json q = Json::object();
  for (auto& [ij, h] : t.q)
    if (!h.is_zero()) q[key_ij(ij.first, ij.second)] = column_to_json(a.F, h.coords);
  out["q"] = q;
  return out;
}

TwistedComplex twisted_from_json(const FiniteDgCategory& a, const Json& j,
                                 const std::string& path) {
  TwistedComplex t;
  const Json& es = as_array(member(j, "entries", path), path + ".entries");
  for (size_t i = 0; i < es.size(); ++i) {
    std::string ep = path + ".entries[" + std::to_string(i) + "]";
    const Json& e = as_array(es.at(i), ep);
    if (e.size() != 2) throw schema_error(ep, "expected [object, shift]");
    t.entries.push_back({object_ref(a, e.at(0), ep), (int)as_int(e.at(1), ep)});
  }
  if (j.contains("q")) {
    for (auto& [k, v] : as_object(j.at("q"), path + ".q").items()) {
      std::string qp = path + ".q." + k;
      auto [i, jdx] = parse_ij(k, qp);
      if (i < 0 || jdx >= t.size() || i >= jdx)
        throw schema_error(qp, "q indices must satisfy 0 <= i < j < entry count");
      int deg = tw_q_degree(t, i, jdx);
      int dim = a.hom_dim(t.entries[jdx].obj, t.entries[i].obj, deg);
      DgHom h = a.zero_hom(t.entries[jdx].obj, t.entries[i].obj, deg);
      h.coords = column_from_json(a.F, dim, v, qp);
      if (!h.is_zero()) t.q[{i, jdx}] = h;
    }
  }
  return t;
}

Json morphism_to_json(const FiniteDgCategory& a, const TwMorphism& u) {
  Json out = Json::object();
  out["degree"] = u.degree;
  Json c = Json::object();
  for (auto& [ij, h] : u.c)
    if (!h.is_zero()) c[key_ij(ij.first, ij.second)] = column_to_json(a.F, h.coords);
  out["c"] = c;
  return out;
}

TwMorphism morphism_from_json(const FiniteDgCategory& a, const TwistedComplex& src,
                              const TwistedComplex& dst, const Json& j,
                              const std::string& path) {
  TwMorphism u;
  u.degree = (int)as_int(member(j, "degree", path), path + ".degree");
  if (j.contains("c")) {
    for (auto& [k, v] : as_object(j.at("c"), path + ".c").items()) {
      std::string cp = path + ".c." + k;
      auto [i, jdx] = parse_ij(k, cp);
      if (i < 0 || i >= dst.size() || jdx < 0 || jdx >= src.size())
        throw schema_error(cp, "component indices out of range");
      int deg = u.degree + dst.entries[i].shift - src.entries[jdx].shift;
      int dim = a.hom_dim(src.entries[jdx].obj, dst.entries[i].obj, deg);
      DgHom h = a.zero_hom(src.entries[jdx].obj, dst.entries[i].obj, deg);
      h.coords = column_from_json(a.F, dim, v, cp);
      if (!h.is_zero()) u.c[{i, jdx}] = h;
    }
  }
  return u;
}

// ---------------------------------------------------------------------------
// module structures

static Json structure_to_json(const Workspace& ws, const Workspace::NamedStructure& ns) {
  const FiniteDgCategory& a = ws.category(ns.category);
  Json out = Json::object();
  out["name"] = ns.name;
  out["category"] = ns.category;
  out["object"] = twisted_to_json(a, ns.s.x);
  out["extension"] = ns.extension;
  out["phi"] = morphism_to_json(a, ns.s.phi);
  return out;
}

static Workspace::NamedStructure structure_from_json(const Workspace& ws, const Json& j,
                                                     const std::string& path) {
  Workspace::NamedStructure ns;
  ns.name = as_string(member(j, "name", path), path + ".name");
  ns.category = as_string(member(j, "category", path), path + ".category");
  const FiniteDgCategory& a = ws.category(ns.category);
  ns.extension = as_string(member(j, "extension", path), path + ".extension");
  FieldPtr L = ws.field(ns.extension);

  if (j.contains("p_star")) {
    const Json& tgt = j.at("p_star");
    TwistedComplex x;
    if (tgt.is_string()) {
      std::string label = tgt.get<std::string>();
      if (auto* nt = ws.find_twisted(label))
        x = nt->t;
      else
        x = embed_psi(a, object_ref(a, tgt, path + ".p_star"));
    } else {
      x = twisted_from_json(a, tgt, path + ".p_star");
    }
    ns.s = p_star_structure(a, L, x);
    return ns;
  }

  const Json& obj = member(j, "object", path);
  if (obj.is_string()) {
    std::string label = obj.get<std::string>();
    if (auto* nt = ws.find_twisted(label))
      ns.s.x = nt->t;
    else
      ns.s.x = embed_psi(a, object_ref(a, obj, path + ".object"));
  } else {
    ns.s.x = twisted_from_json(a, obj, path + ".object");
  }
  ns.s.ext = L;
  const Json& phi = member(j, "phi", path);
  if (phi.is_array()) {
    int nsize = ns.s.x.size();
    Mat m = matrix_from_json(a.F, nsize, nsize, phi, path + ".phi");
    try {
      ns.s.phi = scalar_matrix_morphism(a, ns.s.x, ns.s.x, m);
    } catch (const Error& e) {
      throw schema_error(path + ".phi", e.what());
    }
  } else {
    ns.s.phi = morphism_from_json(a, ns.s.x, ns.s.x, phi, path + ".phi");
  }
  return ns;
}

// ---------------------------------------------------------------------------
// workspace

FieldPtr Workspace::field(const std::string& name) const {
  auto it = fields.find(name);
  if (it == fields.end())
    throw Error(ErrorCode::input_error, "unknown field '" + name + "'");
  return it->second;
}

const FiniteDgCategory& Workspace::category(const std::string& name) const {
  auto it = categories.find(name);
  if (it == categories.end())
    throw Error(ErrorCode::input_error, "unknown category '" + name + "'");
  return it->second;
}

const Workspace::NamedTwisted* Workspace::find_twisted(const std::string& name) const {
  for (auto& t : twisted)
    if (t.name == name) return &t;
  return nullptr;
}

const Workspace::NamedStructure* Workspace::find_structure(const std::string& name) const {
  for (auto& s : structures)
    if (s.name == name) return &s;
  return nullptr;
}

static const char* kWorkspaceSchema = "scalex-workspace/1";
static const char* kWitnessSchema = "scalex-witness/1";

Workspace parse_workspace(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::input_error, std::string("JSON parse error: ") + e.what());
  }
  if (!j.is_object() || as_string(member(j, "schema", "$"), "$.schema") != kWorkspaceSchema)
    throw Error(ErrorCode::input_error,
                std::string("$.schema: expected \"") + kWorkspaceSchema + "\"");
  Workspace ws;
  if (j.contains("fields")) {
    const Json& fs = as_array(j.at("fields"), "$.fields");
    for (size_t i = 0; i < fs.size(); ++i) {
      auto [name, f] = field_from_json(fs.at(i), "$.fields[" + std::to_string(i) + "]");
      if (ws.fields.count(name))
        throw schema_error("$.fields", "duplicate field name '" + name + "'");
      ws.field_names.push_back(name);
      ws.fields[name] = f;
    }
  }
  if (j.contains("categories")) {
    const Json& cs = as_array(j.at("categories"), "$.categories");
    for (size_t i = 0; i < cs.size(); ++i) {
      auto [name, a] = category_from_json(ws, cs.at(i), "$.categories[" + std::to_string(i) + "]");
      if (ws.categories.count(name))
        throw schema_error("$.categories", "duplicate category name '" + name + "'");
      ws.category_names.push_back(name);
      ws.categories.emplace(name, std::move(a));
    }
  }
  if (j.contains("twisted")) {
    const Json& ts = as_array(j.at("twisted"), "$.twisted");
    for (size_t i = 0; i < ts.size(); ++i) {
      std::string tp = "$.twisted[" + std::to_string(i) + "]";
      const Json& t = ts.at(i);
      Workspace::NamedTwisted nt;
      nt.name = as_string(member(t, "name", tp), tp + ".name");
      nt.category = as_string(member(t, "category", tp), tp + ".category");
      nt.t = twisted_from_json(ws.category(nt.category), t, tp);
      if (ws.find_twisted(nt.name))
        throw schema_error(tp, "duplicate twisted complex name '" + nt.name + "'");
      ws.twisted.push_back(std::move(nt));
    }
  }
  if (j.contains("structures")) {
    const Json& ss = as_array(j.at("structures"), "$.structures");
    for (size_t i = 0; i < ss.size(); ++i) {
      std::string sp = "$.structures[" + std::to_string(i) + "]";
      auto ns = structure_from_json(ws, ss.at(i), sp);
      if (ws.find_structure(ns.name))
        throw schema_error(sp, "duplicate structure name '" + ns.name + "'");
      ws.structures.push_back(std::move(ns));
    }
  }
  if (j.contains("tasks")) {
    const Json& ts = as_array(j.at("tasks"), "$.tasks");
    for (size_t i = 0; i < ts.size(); ++i) {
      std::string tp = "$.tasks[" + std::to_string(i) + "]";
      const Json& t = ts.at(i);
      Workspace::Task task;
      task.name = as_string(member(t, "name", tp), tp + ".name");
      task.command = as_string(member(t, "command", tp), tp + ".command");
      task.args = t.contains("args") ? as_object(t.at("args"), tp + ".args") : Json::object();
      for (auto& existing : ws.tasks)
        if (existing.name == task.name)
          throw schema_error(tp, "duplicate task name '" + task.name + "'");
      ws.tasks.push_back(std::move(task));
    }
  }
  return ws;
}

std::string serialize_workspace(const Workspace& ws) {
  Json out = Json::object();
  out["schema"] = kWorkspaceSchema;
  Json fs = Json::array();
  for (auto& name : ws.field_names) fs.push_back(field_to_json(name, ws.fields.at(name)));
  out["fields"] = fs;
  Json cs = Json::array();
  for (auto& name : ws.category_names)
    cs.push_back(category_to_json(ws, name, ws.categories.at(name)));
  out["categories"] = cs;
  Json ts = Json::array();
  for (auto& nt : ws.twisted) {
    Json t = Json::object();
    t["name"] = nt.name;
    t["category"] = nt.category;
    Json body = twisted_to_json(ws.category(nt.category), nt.t);
    t["entries"] = body["entries"];
    t["q"] = body["q"];
    ts.push_back(t);
  }
  out["twisted"] = ts;
  Json ss = Json::array();
  for (auto& nsn : ws.structures) ss.push_back(structure_to_json(ws, nsn));
  out["structures"] = ss;
  Json tk = Json::array();
  for (auto& task : ws.tasks) {
    Json t = Json::object();
    t["name"] = task.name;
    t["command"] = task.command;
    t["args"] = task.args;
    tk.push_back(t);
  }
  out["tasks"] = tk;
  return out.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// witnesses

Json witness_to_json(const FiniteDgCategory& a, const GenerationWitness& w) {
  Json out = Json::object();
  out["level"] = w.level;
  out["target"] = twisted_to_json(a, w.target);
  Json sum = Json::object();
  for (auto& [s, c] : w.sum.copies) sum[std::to_string(s)] = c;
  out["sum"] = sum;
  Json ch = Json::array();
  for (auto& c : w.children) ch.push_back(witness_to_json(a, c));
  out["children"] = ch;
  out["gamma"] = morphism_to_json(a, w.gamma);
  out["complement"] = twisted_to_json(a, w.complement);
  out["iso"] = morphism_to_json(a, w.iso);
  out["v"] = morphism_to_json(a, w.inv.v);
  out["h1"] = morphism_to_json(a, w.inv.h1);
  out["h2"] = morphism_to_json(a, w.inv.h2);
  return out;
}

static GenerationWitness witness_node_from_json(const FiniteDgCategory& a,
                                                const TwistedComplex& generator,
                                                const Json& j, const std::string& path) {
  GenerationWitness w;
  w.level = (int)as_int(member(j, "level", path), path + ".level");
  if (w.level < 1) throw schema_error(path + ".level", "level must be at least 1");
  w.target = twisted_from_json(a, member(j, "target", path), path + ".target");
  for (auto& [k, v] : as_object(member(j, "sum", path), path + ".sum").items()) {
    long c = as_int(v, path + ".sum." + k);
    if (c < 0) throw schema_error(path + ".sum." + k, "negative multiplicity");
    if (c > 0) w.sum.copies[parse_int_key(k, path + ".sum")] = (int)c;
  }
  const Json& ch = as_array(member(j, "children", path), path + ".children");
  for (size_t i = 0; i < ch.size(); ++i)
    w.children.push_back(witness_node_from_json(a, generator, ch.at(i),
                                                path + ".children[" + std::to_string(i) + "]"));
  w.complement = twisted_from_json(a, member(j, "complement", path), path + ".complement");

  TwistedComplex comparison;
  if (w.level == 1) {
    if (!w.children.empty()) throw schema_error(path, "a level-1 node cannot have children");
    const Json& g = member(j, "gamma", path);
    w.gamma = tw_zero_morphism((int)as_int(member(g, "degree", path + ".gamma"),
                                           path + ".gamma.degree"));
    if (g.contains("c") && !as_object(g.at("c"), path + ".gamma.c").empty())
      throw schema_error(path + ".gamma", "a level-1 node carries no connecting map");
    comparison = sum_spec_object(a, generator, w.sum);
  } else {
    if (w.children.size() != 2)
      throw schema_error(path, "a higher node needs exactly two children");
    TwistedComplex sb = tw_sigma(a, w.children[1].target, -1);
    const TwistedComplex& hd = w.children[0].target;
    w.gamma = morphism_from_json(a, sb, hd, member(j, "gamma", path), path + ".gamma");
    try {
      comparison = tw_cone(a, sb, hd, w.gamma).cone;
    } catch (const Error& e) {
      throw schema_error(path + ".gamma", e.what());
    }
  }
  TwistedComplex x = tw_direct_sum(a, w.target, w.complement);
  w.iso = morphism_from_json(a, x, comparison, member(j, "iso", path), path + ".iso");
  w.inv.v = morphism_from_json(a, comparison, x, member(j, "v", path), path + ".v");
  w.inv.h1 = morphism_from_json(a, comparison, comparison, member(j, "h1", path), path + ".h1");
  w.inv.h2 = morphism_from_json(a, x, x, member(j, "h2", path), path + ".h2");
  return w;
}

GenerationWitness witness_from_json(const FiniteDgCategory& a, const TwistedComplex& generator,
                                    const Json& j, const std::string& path) {
  return witness_node_from_json(a, generator, j, path);
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

static std::string hex16(std::uint64_t v) {
  char b[17];
  std::snprintf(b, sizeof b, "%016llx", (unsigned long long)v);
  return b;
}

std::string witness_file_text(const FiniteDgCategory& a, const std::string& category_name,
                              const TwistedComplex& generator, const GenerationWitness& w) {
  Json core = Json::object();
  core["category"] = category_name;
  core["generator"] = twisted_to_json(a, generator);
  core["witness"] = witness_to_json(a, w);
  std::string digest = hex16(fnv1a64(core.dump(2)));
  Json out = Json::object();
  out["schema"] = kWitnessSchema;
  for (auto& [k, v] : core.items()) out[k] = v;
  out["digest"] = digest;
  return out.dump(2) + "\n";
}

WitnessFile parse_witness_file(const Workspace& ws, const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::input_error, std::string("JSON parse error: ") + e.what());
  }
  if (!j.is_object() || as_string(member(j, "schema", "$"), "$.schema") != kWitnessSchema)
    throw Error(ErrorCode::input_error,
                std::string("$.schema: expected \"") + kWitnessSchema + "\"");
  Json core = Json::object();
  core["category"] = member(j, "category", "$");
  core["generator"] = member(j, "generator", "$");
  core["witness"] = member(j, "witness", "$");
  WitnessFile out;
  out.category = as_string(j.at("category"), "$.category");
  out.digest_ok = as_string(member(j, "digest", "$"), "$.digest") == hex16(fnv1a64(core.dump(2)));
  if (!out.digest_ok) return out;
  const FiniteDgCategory& a = ws.category(out.category);
  out.generator = twisted_from_json(a, j.at("generator"), "$.generator");
  out.witness = witness_node_from_json(a, out.generator, j.at("witness"), "$.witness");
  return out;
}

// ---------------------------------------------------------------------------
// shipped examples and presets

static FieldPtr named_base_field(const std::string& field) {
  if (field == "Q") return Field::rationals();
  if (field.size() >= 2 && field[0] == 'F') {
    try {
      size_t pos = 0;
      long p = std::stol(field.substr(1), &pos);
      if (pos == field.size() - 1 && p >= 2) return Field::prime((std::uint64_t)p);
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorCode::input_error,
              "unknown base field '" + field + "' (use Q or Fp, e.g. F2)");
}

std::string build_example_workspace(const std::string& name, const std::string& field,
                                    int n) {
  Workspace ws;
  FieldPtr F = named_base_field(field);
  ws.field_names.push_back(field);
  ws.fields[field] = F;
  ws.category_names.push_back(name);
  ws.categories.emplace(name, example_category(name, F, n));
  Workspace::Task t;
  t.name = "validate-" + name;
  t.command = "validate";
  t.args = Json::object();
  t.args["category"] = name;
  ws.tasks.push_back(t);
  return serialize_workspace(ws);
}

static Workspace::Task make_task(const std::string& name, const std::string& command,
                                 Json args) {
  Workspace::Task t;
  t.name = name;
  t.command = command;
  t.args = std::move(args);
  return t;
}

static Workspace point_tower_preset(const std::string& base_name, FieldPtr base,
                                    std::vector<Scalar> minpoly,
                                    const std::string& ext_name) {
  Workspace ws;
  ws.field_names = {base_name, ext_name};
  ws.fields[base_name] = base;
  ws.fields[ext_name] = Field::extension(base, std::move(minpoly), false, ext_name);
  ws.category_names = {"point"};
  ws.categories.emplace("point", example_category("point", base, 0));
  const FiniteDgCategory& a = ws.categories.at("point");

  Workspace::NamedTwisted pt{"P", "point", embed_psi(a, 0)};
  ws.twisted.push_back(pt);

  Workspace::NamedStructure ppt;
  ppt.name = "ppt";
  ppt.category = "point";
  ppt.extension = ext_name;
  ppt.s = p_star_object(a, ws.fields.at(ext_name), 0);
  ws.structures.push_back(ppt);

  Json common = Json::object();
  common["category"] = "point";
  common["extension"] = ext_name;
  {
    Json ar = common;
    ar["object"] = "pt";
    ar["structure"] = "ppt";
    ws.tasks.push_back(make_task("adjunction-pt", "adjunction", ar));
  }
  ws.tasks.push_back(make_task("basechange-end", "basechange", common));
  {
    Json ar = common;
    ar["object"] = "pt";
    ws.tasks.push_back(make_task("descent-pt", "descent", ar));
  }
  {
    Json ar = Json::object();
    ar["extension"] = ext_name;
    ws.tasks.push_back(make_task("galois-group", "galois", ar));
  }
  ws.tasks.push_back(make_task("hull-point", "hull", common));
  {
    Json ar = common;
    ar["structure"] = "ppt";
    ws.tasks.push_back(make_task("projection-ppt", "projection", ar));
  }
  {
    Json ar = Json::object();
    ar["category"] = "point";
    ar["s"] = "ppt";
    ar["t"] = "ppt";
    ar["expect"] = false;
    ws.tasks.push_back(make_task("star-ppt", "star", ar));
  }
  {
    Json ar = Json::object();
    ar["category"] = "point";
    ws.tasks.push_back(make_task("validate-point", "validate", ar));
  }
  return ws;
}

static Workspace dual_q_preset() {
  Workspace ws;
  FieldPtr Q = Field::rationals();
  ws.field_names = {"Q"};
  ws.fields["Q"] = Q;
  ws.category_names = {"dual"};
  ws.categories.emplace("dual", example_category("dual_numbers", Q, 0));
  const FiniteDgCategory& a = ws.categories.at("dual");

  ws.twisted.push_back({"P", "dual", embed_psi(a, 0)});
  TwistedComplex ce;
  ce.entries = {{0, 0}, {0, 1}};
  DgHom eps = a.basis_hom(0, 0, 0, 1);
  ce.q[{0, 1}] = eps;
  ws.twisted.push_back({"CE", "dual", ce});

  {
    Json ar = Json::object();
    ar["category"] = "dual";
    ws.tasks.push_back(make_task("validate-dual", "validate", ar));
  }
  {
    Json ar = Json::object();
    ar["category"] = "dual";
    ws.tasks.push_back(make_task("h0-dual", "h0", ar));
  }
  {
    Json ar = Json::object();
    ar["category"] = "dual";
    ar["source"] = "P";
    ar["target"] = "P";
    Json mp = Json::object();
    mp["degree"] = 0;
    Json c = Json::object();
    c["0,0"] = Json::array({"0", "1"});
    mp["c"] = c;
    ar["map"] = mp;
    ws.tasks.push_back(make_task("cone-eps", "cone", ar));
  }
  {
    Json ar = Json::object();
    ar["category"] = "dual";
    ar["generator"] = "P";
    ar["target"] = "CE";
    ar["k"] = 2;
    ws.tasks.push_back(make_task("dimsearch-ce-k2", "dim-search", ar));
  }
  return ws;
}

static Workspace an2_q_preset() {
  Workspace ws;
  FieldPtr Q = Field::rationals();
  ws.field_names = {"Q"};
  ws.fields["Q"] = Q;
  ws.category_names = {"an2"};
  ws.categories.emplace("an2", example_category("path_algebra_An", Q, 2));
  const FiniteDgCategory& a = ws.categories.at("an2");

  ws.twisted.push_back({"V0", "an2", embed_psi(a, 0)});
  ws.twisted.push_back({"V1", "an2", embed_psi(a, 1)});
  TwistedComplex c01;
  c01.entries = {{1, 0}, {0, 1}};
  c01.q[{0, 1}] = a.basis_hom(0, 1, 0, 0);
  ws.twisted.push_back({"C01", "an2", c01});
  TwistedComplex e = tw_direct_sum(a, tw_direct_sum(a, embed_psi(a, 0), embed_psi(a, 1)), c01);
  ws.twisted.push_back({"E", "an2", e});

  {
    Json ar = Json::object();
    ar["category"] = "an2";
    ws.tasks.push_back(make_task("validate-an2", "validate", ar));
  }
  {
    Json ar = Json::object();
    ar["category"] = "an2";
    ws.tasks.push_back(make_task("h0-an2", "h0", ar));
  }
  for (const char* tgt : {"V0", "V1", "C01"}) {
    Json ar = Json::object();
    ar["category"] = "an2";
    ar["generator"] = "E";
    ar["target"] = tgt;
    ar["k"] = 1;
    ws.tasks.push_back(make_task(std::string("dimsearch-") + tgt, "dim-search", ar));
  }
  return ws;
}

static Workspace plain_category_preset(const std::string& cat_name,
                                       const std::string& example,
                                       const std::string& field_name, int n) {
  Workspace ws;
  FieldPtr F = named_base_field(field_name);
  ws.field_names = {field_name};
  ws.fields[field_name] = F;
  ws.category_names = {cat_name};
  ws.categories.emplace(cat_name, example_category(example, F, n));
  {
    Json ar = Json::object();
    ar["category"] = cat_name;
    ws.tasks.push_back(make_task("validate-" + cat_name, "validate", ar));
  }
  {
    Json ar = Json::object();
    ar["category"] = cat_name;
    ws.tasks.push_back(make_task("h0-" + cat_name, "h0", ar));
  }
  return ws;
}

std::string preset_workspace(const std::string& preset) {
  FieldPtr Q = Field::rationals();
  FieldPtr F2 = Field::prime(2);
  if (preset == "point-q-sqrt2") {
    std::vector<Scalar> mp{Q->from_int(-2), Q->zero(), Q->one()};
    return serialize_workspace(point_tower_preset("Q", Q, mp, "L"));
  }
  if (preset == "point-f2-f4") {
    std::vector<Scalar> mp{F2->one(), F2->one(), F2->one()};
    return serialize_workspace(point_tower_preset("F2", F2, mp, "F4"));
  }
  if (preset == "dual-q") return serialize_workspace(dual_q_preset());
  if (preset == "an2-q") return serialize_workspace(an2_q_preset());
  if (preset == "an3-q")
    return serialize_workspace(plain_category_preset("an3", "path_algebra_An", "Q", 3));
  if (preset == "matrix2-f2")
    return serialize_workspace(plain_category_preset("m2", "matrix_algebra", "F2", 2));
  throw Error(ErrorCode::input_error, "unknown preset '" + preset + "'");
}

std::vector<std::string> preset_names() {
  return {"point-q-sqrt2", "point-f2-f4", "dual-q", "an2-q", "an3-q", "matrix2-f2"};
}

}  // namespace scalex
