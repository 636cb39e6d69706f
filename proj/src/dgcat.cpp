#include "dgcat.hpp"

#include <set>
#include <sstream>

namespace scalex {

int FiniteDgCategory::object_index(const std::string& label) const {
  for (int i = 0; i < (int)objects.size(); ++i)
    if (objects[i] == label) return i;
  throw Error(ErrorCode::input_error, "unknown object label: " + label);
}

const CochainComplex& FiniteDgCategory::hom(int x, int y) const {
  auto it = homs_.find({x, y});
  if (it != homs_.end()) return it->second;
  if (empty_.F == nullptr) const_cast<FiniteDgCategory*>(this)->empty_ = CochainComplex{F, {}, {}};
  return empty_;
}

void FiniteDgCategory::add_object(const std::string& label) {
  for (auto& o : objects)
    if (o == label) throw Error(ErrorCode::input_error, "duplicate object label: " + label);
  objects.push_back(label);
}

void FiniteDgCategory::set_hom(int x, int y, CochainComplex c) {
  if (x < 0 || x >= size() || y < 0 || y >= size())
    throw Error(ErrorCode::input_error, "hom pair out of range");
  homs_[{x, y}] = std::move(c);
}

int FiniteDgCategory::flat_dim(int x, int y) const { return hom(x, y).total_dim(); }

int FiniteDgCategory::flat_of(int x, int y, int degree, int idx) const {
  const auto& c = hom(x, y);
  int off = 0;
  for (auto& [n, dim] : c.dims) {
    if (n == degree) {
      if (idx < 0 || idx >= dim) throw Error(ErrorCode::input_error, "basis index out of range");
      return off + idx;
    }
    off += dim;
  }
  throw Error(ErrorCode::input_error, "no such degree in hom complex");
}

std::pair<int, int> FiniteDgCategory::degree_of_flat(int x, int y, int flat) const {
  const auto& c = hom(x, y);
  int off = 0;
  for (auto& [n, dim] : c.dims) {
    if (flat < off + dim) return {n, flat - off};
    off += dim;
  }
  throw Error(ErrorCode::input_error, "flat index out of range");
}

void FiniteDgCategory::add_composition_entry(int x, int y, int z, int flat1, int flat2,
                                             int flat_out, const Scalar& c) {
  auto [m, i1] = degree_of_flat(x, y, flat1);
  auto [n, i2] = degree_of_flat(y, z, flat2);
  auto [nout, iout] = degree_of_flat(x, z, flat_out);
  if (nout != m + n)
    throw Error(ErrorCode::input_error, "composition entry violates degree additivity");
  int d1 = hom(x, y).dim(m), d2 = hom(y, z).dim(n), dout = hom(x, z).dim(nout);
  auto key = std::make_tuple(x, y, z, m, n);
  auto it = comp_.find(key);
  if (it == comp_.end()) it = comp_.emplace(key, Mat(F, dout, d1 * d2)).first;
  Scalar cur = it->second.at(iout, i1 * d2 + i2);
  it->second.at(iout, i1 * d2 + i2) = F->add(cur, c);
}

void FiniteDgCategory::set_identity(int x, Mat coords_deg0) {
  if (coords_deg0.rows() != hom(x, x).dim(0) || coords_deg0.cols() != 1)
    throw Error(ErrorCode::input_error, "identity coordinates have wrong shape");
  ids_.insert_or_assign(x, std::move(coords_deg0));
}

void FiniteDgCategory::finalize() {
  for (int x = 0; x < size(); ++x)
    if (!ids_.count(x))
      throw Error(ErrorCode::input_error, "missing identity for object " + objects[x]);
}

Mat FiniteDgCategory::comp_block(int x, int y, int z, int m, int n) const {
  auto it = comp_.find(std::make_tuple(x, y, z, m, n));
  if (it != comp_.end()) return it->second;
  return Mat(F, hom(x, z).dim(m + n), hom(x, y).dim(m) * hom(y, z).dim(n));
}

std::vector<std::tuple<int, int, int, int, int>> FiniteDgCategory::comp_block_keys() const {
  std::vector<std::tuple<int, int, int, int, int>> keys;
  for (auto& [k, b] : comp_) keys.push_back(k);
  return keys;
}

DgHom FiniteDgCategory::zero_hom(int x, int y, int degree) const {
  return {x, y, degree, Mat(F, hom(x, y).dim(degree), 1)};
}

DgHom FiniteDgCategory::basis_hom(int x, int y, int degree, int idx) const {
  DgHom h = zero_hom(x, y, degree);
  h.coords.at(idx, 0) = F->one();
  return h;
}

const Mat& FiniteDgCategory::identity_coords(int x) const {
  auto it = ids_.find(x);
  if (it == ids_.end()) throw Error(ErrorCode::input_error, "missing identity");
  return it->second;
}

DgHom FiniteDgCategory::identity(int x) const { return {x, x, 0, identity_coords(x)}; }

DgHom FiniteDgCategory::add_homs(const DgHom& a, const DgHom& b) const {
  if (a.src != b.src || a.dst != b.dst || a.degree != b.degree)
    throw Error(ErrorCode::shape_mismatch, "cannot add morphisms of different type");
  return {a.src, a.dst, a.degree, a.coords + b.coords};
}

DgHom FiniteDgCategory::scale_hom(const Scalar& c, const DgHom& a) const {
  return {a.src, a.dst, a.degree, a.coords.scaled(c)};
}

DgHom FiniteDgCategory::negate(const DgHom& a) const { return {a.src, a.dst, a.degree, -a.coords}; }

DgHom FiniteDgCategory::compose(const DgHom& f, const DgHom& g) const {
  if (f.dst != g.src) throw Error(ErrorCode::shape_mismatch, "composition endpoints do not match");
  int x = f.src, y = f.dst, z = g.dst;
  int m = f.degree, n = g.degree;
  DgHom out = zero_hom(x, z, m + n);
  int d2 = hom(y, z).dim(n);
  if (hom(x, y).dim(m) == 0 || d2 == 0 || out.coords.rows() == 0) return out;
  Mat b = comp_block(x, y, z, m, n);
  Mat kron(F, b.cols(), 1);
  for (int i1 = 0; i1 < f.coords.rows(); ++i1)
    for (int i2 = 0; i2 < d2; ++i2)
      kron.at(i1 * d2 + i2, 0) = F->mul(f.coords.at(i1, 0), g.coords.at(i2, 0));
  out.coords = b * kron;
  return out;
}

DgHom FiniteDgCategory::differential(const DgHom& f) const {
  const auto& c = hom(f.src, f.dst);
  DgHom out = zero_hom(f.src, f.dst, f.degree + 1);
  out.coords = c.diff(f.degree) * f.coords;
  return out;
}

bool FiniteDgCategory::equal(const DgHom& a, const DgHom& b) const {
  return a.src == b.src && a.dst == b.dst && a.degree == b.degree && a.coords == b.coords;
}

// ---------------------------------------------------------------------------

CheckReport validate_dg_category(const FiniteDgCategory& a) {
  CheckReport rep;
  int n = a.size();
  rep.add("objects_nonempty", n > 0, n > 0 ? "" : "category has no objects");

  bool complexes_ok = true;
  std::string complex_detail;
  for (int x = 0; x < n && complexes_ok; ++x)
    for (int y = 0; y < n && complexes_ok; ++y) {
      try {
        a.hom(x, y).validate();
      } catch (const Error& e) {
        complexes_ok = false;
        complex_detail = "hom(" + a.objects[x] + "," + a.objects[y] + "): " + e.what();
      }
    }
  rep.add("hom_complexes", complexes_ok, complex_detail);
  if (!complexes_ok) return rep;

  bool ids_ok = true;
  std::string ids_detail;
  for (int x = 0; x < n && ids_ok; ++x) {
    DgHom id = a.identity(x);
    if (!a.differential(id).is_zero()) {
      ids_ok = false;
      ids_detail = "identity of " + a.objects[x] + " is not closed";
      break;
    }
  }
  rep.add("identities_closed", ids_ok, ids_detail);

  bool unit_ok = true;
  std::string unit_detail;
  for (int x = 0; x < n && unit_ok; ++x)
    for (int y = 0; y < n && unit_ok; ++y) {
      const auto& c = a.hom(x, y);
      for (auto& [deg, dim] : c.dims) {
        for (int i = 0; i < dim && unit_ok; ++i) {
          DgHom f = a.basis_hom(x, y, deg, i);
          if (!a.equal(a.compose(f, a.identity(y)), f) ||
              !a.equal(a.compose(a.identity(x), f), f)) {
            unit_ok = false;
            std::ostringstream os;
            os << "unit law fails on basis element " << i << " of Hom^" << deg << "("
               << a.objects[x] << "," << a.objects[y] << ")";
            unit_detail = os.str();
          }
        }
        if (!unit_ok) break;
      }
    }
  rep.add("unit_laws", unit_ok, unit_detail);

  bool leib_ok = true;
  std::string leib_detail;
  for (int x = 0; x < n && leib_ok; ++x)
    for (int y = 0; y < n && leib_ok; ++y)
      for (int z = 0; z < n && leib_ok; ++z) {
        const auto& cf = a.hom(x, y);
        const auto& cg = a.hom(y, z);
        for (auto& [m, dimf] : cf.dims) {
          for (auto& [nd, dimg] : cg.dims) {
            for (int i = 0; i < dimf && leib_ok; ++i)
              for (int j = 0; j < dimg && leib_ok; ++j) {
                DgHom f = a.basis_hom(x, y, m, i);
                DgHom g = a.basis_hom(y, z, nd, j);
                DgHom lhs = a.differential(a.compose(f, g));
                DgHom rhs = a.compose(f, a.differential(g));
                DgHom second = a.compose(a.differential(f), g);
                if (nd % 2 != 0) second = a.negate(second);
                rhs = a.add_homs(rhs, second);
                if (!a.equal(lhs, rhs)) {
                  leib_ok = false;
                  std::ostringstream os;
                  os << "Leibniz fails for f = e" << i << " in Hom^" << m << "(" << a.objects[x]
                     << "," << a.objects[y] << "), g = e" << j << " in Hom^" << nd << "("
                     << a.objects[y] << "," << a.objects[z] << ")";
                  leib_detail = os.str();
                }
              }
            if (!leib_ok) break;
          }
          if (!leib_ok) break;
        }
      }
  rep.add("leibniz_rule", leib_ok, leib_detail);

  bool assoc_ok = true;
  std::string assoc_detail;
  for (int w = 0; w < n && assoc_ok; ++w)
    for (int x = 0; x < n && assoc_ok; ++x)
      for (int y = 0; y < n && assoc_ok; ++y)
        for (int z = 0; z < n && assoc_ok; ++z) {
          const auto& cf = a.hom(w, x);
          const auto& cg = a.hom(x, y);
          const auto& ch = a.hom(y, z);
          for (auto& [m1, d1] : cf.dims)
            for (auto& [m2, d2] : cg.dims)
              for (auto& [m3, d3] : ch.dims)
                for (int i = 0; i < d1 && assoc_ok; ++i)
                  for (int j = 0; j < d2 && assoc_ok; ++j)
                    for (int k = 0; k < d3 && assoc_ok; ++k) {
                      DgHom f = a.basis_hom(w, x, m1, i);
                      DgHom g = a.basis_hom(x, y, m2, j);
                      DgHom h = a.basis_hom(y, z, m3, k);
                      DgHom lhs = a.compose(a.compose(f, g), h);
                      DgHom rhs = a.compose(f, a.compose(g, h));
                      if (!a.equal(lhs, rhs)) {
                        assoc_ok = false;
                        std::ostringstream os;
                        os << "associativity fails at (" << a.objects[w] << "," << a.objects[x]
                           << "," << a.objects[y] << "," << a.objects[z] << ") degrees (" << m1
                           << "," << m2 << "," << m3 << ") indices (" << i << "," << j << "," << k
                           << ")";
                        assoc_detail = os.str();
                      }
                    }
        }
  rep.add("associativity", assoc_ok, assoc_detail);
  return rep;
}

// ---------------------------------------------------------------------------

H0Category h0_category(const FiniteDgCategory& a) {
  H0Category h;
  h.objects = a.objects;
  int n = a.size();
  std::map<std::pair<int, int>, Cohomology> coh;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      Cohomology c = cohomology(a.hom(x, y), 0);
      h.hom_dim[{x, y}] = c.dim;
      h.representatives[{x, y}] = c.representatives;
      coh[{x, y}] = c;
    }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        int d1 = h.hom_dim[{x, y}], d2 = h.hom_dim[{y, z}], dout = h.hom_dim[{x, z}];
        Mat b(a.F, dout, d1 * d2);
        for (int i = 0; i < d1; ++i)
          for (int j = 0; j < d2; ++j) {
            DgHom f{x, y, 0, h.representatives[{x, y}].column(i)};
            DgHom g{y, z, 0, h.representatives[{y, z}].column(j)};
            Mat cl = cohomology_class(a.hom(x, z), 0, a.compose(f, g).coords);
            for (int r = 0; r < dout; ++r) b.at(r, i * d2 + j) = cl.at(r, 0);
          }
        h.comp[std::make_tuple(x, y, z)] = b;
      }
  for (int x = 0; x < n; ++x)
    h.ids[x] = cohomology_class(a.hom(x, x), 0, a.identity_coords(x));
  return h;
}

std::map<std::pair<int, int>, std::map<int, int>> graded_category(const FiniteDgCategory& a) {
  std::map<std::pair<int, int>, std::map<int, int>> out;
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < a.size(); ++y) out[{x, y}] = cohomology_dims(a.hom(x, y));
  return out;
}

// ---------------------------------------------------------------------------

DgHom dg_apply_functor(const FiniteDgCategory& a, const FiniteDgCategory& b,
                       const DgFunctor& f, const DgHom& u) {
  int fx = f.object_map[u.src], fy = f.object_map[u.dst];
  DgHom out{fx, fy, u.degree, Mat(b.F, b.hom(fx, fy).dim(u.degree), 1)};
  auto it = f.hom_maps.find({u.src, u.dst});
  if (it == f.hom_maps.end()) return out;
  auto c = it->second.comp.find(u.degree);
  if (c == it->second.comp.end()) return out;
  out.coords = c->second * u.coords;
  return out;
}

CheckReport validate_dg_functor(const FiniteDgCategory& a, const FiniteDgCategory& b,
                                const DgFunctor& f) {
  CheckReport rep;
  bool objs_ok = (int)f.object_map.size() == a.size();
  for (int v : f.object_map)
    if (v < 0 || v >= b.size()) objs_ok = false;
  rep.add("object_map", objs_ok, objs_ok ? "" : "object map is not a total map into the target");
  if (!objs_ok) return rep;

  bool shape_ok = true, chain_ok = true;
  std::string shape_detail, chain_detail;
  for (int x = 0; x < a.size() && shape_ok; ++x)
    for (int y = 0; y < a.size() && shape_ok; ++y) {
      const auto& ca = a.hom(x, y);
      const auto& cb = b.hom(f.object_map[x], f.object_map[y]);
      GradedMap m;
      auto it = f.hom_maps.find({x, y});
      if (it != f.hom_maps.end()) m = it->second;
      if (m.degree != 0) {
        shape_ok = false;
        shape_detail = "hom map has nonzero degree";
        break;
      }
      for (auto& [deg, mat] : m.comp)
        if (mat.rows() != cb.dim(deg) || mat.cols() != ca.dim(deg)) {
          shape_ok = false;
          shape_detail = "hom map component has wrong shape at (" + a.objects[x] + "," +
                         a.objects[y] + ") degree " + std::to_string(deg);
        }
      if (!shape_ok) break;
      for (auto& [deg, dim] : ca.dims) {
        for (int i = 0; i < dim; ++i) {
          DgHom e = a.basis_hom(x, y, deg, i);
          DgHom lhs = dg_apply_functor(a, b, f, a.differential(e));
          DgHom rhs = b.differential(dg_apply_functor(a, b, f, e));
          if (!(lhs.coords == rhs.coords)) {
            chain_ok = false;
            chain_detail = "hom map at (" + a.objects[x] + "," + a.objects[y] +
                           ") does not commute with the differential";
          }
        }
      }
    }
  rep.add("hom_map_shapes", shape_ok, shape_detail);
  if (!shape_ok) return rep;
  rep.add("chain_maps", chain_ok, chain_detail);

  bool id_ok = true;
  std::string id_detail;
  for (int x = 0; x < a.size() && id_ok; ++x) {
    DgHom img = dg_apply_functor(a, b, f, a.identity(x));
    if (!(img.coords == b.identity_coords(f.object_map[x]))) {
      id_ok = false;
      id_detail = "functor does not preserve the identity of " + a.objects[x];
    }
  }
  rep.add("preserves_identities", id_ok, id_detail);

  bool comp_ok = true;
  std::string comp_detail;
  for (int x = 0; x < a.size() && comp_ok; ++x)
    for (int y = 0; y < a.size() && comp_ok; ++y)
      for (int z = 0; z < a.size() && comp_ok; ++z) {
        const auto& cf = a.hom(x, y);
        const auto& cg = a.hom(y, z);
        for (auto& [m, dimf] : cf.dims)
          for (auto& [nd, dimg] : cg.dims)
            for (int i = 0; i < dimf && comp_ok; ++i)
              for (int j = 0; j < dimg && comp_ok; ++j) {
                DgHom e1 = a.basis_hom(x, y, m, i);
                DgHom e2 = a.basis_hom(y, z, nd, j);
                DgHom lhs = dg_apply_functor(a, b, f, a.compose(e1, e2));
                DgHom rhs = b.compose(dg_apply_functor(a, b, f, e1), dg_apply_functor(a, b, f, e2));
                if (!(lhs.coords == rhs.coords)) {
                  comp_ok = false;
                  comp_detail = "functor is not compatible with composition at (" + a.objects[x] +
                                "," + a.objects[y] + "," + a.objects[z] + ")";
                }
              }
      }
  rep.add("preserves_composition", comp_ok, comp_detail);
  return rep;
}

bool is_quasi_fully_faithful(const FiniteDgCategory& a, const FiniteDgCategory& b,
                             const DgFunctor& f) {
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < a.size(); ++y) {
      const auto& ca = a.hom(x, y);
      const auto& cb = b.hom(f.object_map[x], f.object_map[y]);
      std::map<int, int> da = cohomology_dims(ca), db = cohomology_dims(cb);
      std::set<int> degrees;
      for (auto& [n, d] : da) degrees.insert(n);
      for (auto& [n, d] : db) degrees.insert(n);
      for (int n : degrees) {
        int dimA = da.count(n) ? da[n] : 0;
        int dimB = db.count(n) ? db[n] : 0;
        if (dimA != dimB) return false;
        if (dimA == 0) continue;
        Cohomology ha = cohomology(ca, n);
        Mat induced(b.F, dimB, dimA);
        for (int i = 0; i < dimA; ++i) {
          DgHom e{x, y, n, ha.representatives.column(i)};
          Mat cl = cohomology_class(cb, n, dg_apply_functor(a, b, f, e).coords);
          for (int r = 0; r < dimB; ++r) induced.at(r, i) = cl.at(r, 0);
        }
        if (!inverse(induced)) return false;
      }
    }
  return true;
}

bool is_h0_essentially_surjective(const FiniteDgCategory& a, const FiniteDgCategory& b,
                                  const DgFunctor& f, int max_support) {
  for (int yb = 0; yb < b.size(); ++yb) {
    bool hit = false;
    for (int xa = 0; xa < a.size() && !hit; ++xa) {
      int fx = f.object_map[xa];
      Cohomology c = cohomology(b.hom(fx, yb), 0);
      std::vector<Mat> candidates;
      for (int i = 0; i < c.dim; ++i) candidates.push_back(c.representatives.column(i));
      if (max_support >= 2)
        for (int i = 0; i < c.dim; ++i)
          for (int j = i + 1; j < c.dim; ++j)
            candidates.push_back(c.representatives.column(i) + c.representatives.column(j));
      for (auto& cand : candidates) {
        DgHom u{fx, yb, 0, cand};
        if (is_h0_invertible(b, u)) {
          hit = true;
          break;
        }
      }
    }
    if (!hit) return false;
  }
  return true;
}

bool is_quasi_equivalence(const FiniteDgCategory& a, const FiniteDgCategory& b, const DgFunctor& f,
                          int max_support) {
  return is_quasi_fully_faithful(a, b, f) && is_h0_essentially_surjective(a, b, f, max_support);
}

// ---------------------------------------------------------------------------

std::optional<InvertibilityWitness> is_h0_invertible(const FiniteDgCategory& a, const DgHom& u) {
  if (u.degree != 0) throw Error(ErrorCode::input_error, "H0-invertibility needs degree 0");
  if (!a.differential(u).is_zero()) return std::nullopt;
  int x = u.src, y = u.dst;
  int nv = a.hom(y, x).dim(0);
  int n1 = a.hom(y, y).dim(-1);
  int n2 = a.hom(x, x).dim(-1);
  int dyy = a.hom(y, y).dim(0), dxx = a.hom(x, x).dim(0);
  Mat dv = a.hom(y, x).diff(0);            // closedness of v
  Mat d1 = a.hom(y, y).diff(-1);           //h1 -> Hom^0(y,y)
  Mat d2m = a.hom(x, x).diff(-1);          // h2 -> Hom^0(x,x)

  // L: v |-> u∘v  and  R: v |-> v∘u, columns from the structure constants.
  Mat lmat(a.F, dyy, nv), rmat(a.F, dxx, nv);
  for (int k = 0; k < nv; ++k) {
    DgHom e = a.basis_hom(y, x, 0, k);
    Mat uv = a.compose(e, u).coords;   // u∘e : y -> y
    Mat vu = a.compose(u, e).coords;   // e∘u : x -> x
    for (int r = 0; r < dyy; ++r) lmat.at(r, k) = uv.at(r, 0);
    for (int r = 0; r < dxx; ++r) rmat.at(r, k) = vu.at(r, 0);
  }

  int rows = dv.rows() + dyy + dxx;
  int cols = nv + n1 + n2;
  Mat sys(a.F, rows, cols), rhs(a.F, rows, 1);
  for (int r = 0; r < dv.rows(); ++r)
    for (int c = 0; c < nv; ++c) sys.at(r, c) = dv.at(r, c);
  int base = dv.rows();
  for (int r = 0; r < dyy; ++r) {
    for (int c = 0; c < nv; ++c) sys.at(base + r, c) = lmat.at(r, c);
    for (int c = 0; c < n1; ++c) sys.at(base + r, nv + c) = a.F->neg(d1.at(r, c));
    rhs.at(base + r, 0) = a.identity_coords(y).at(r, 0);
  }
  base += dyy;
  for (int r = 0; r < dxx; ++r) {
    for (int c = 0; c < nv; ++c) sys.at(base + r, c) = rmat.at(r, c);
    for (int c = 0; c < n2; ++c) sys.at(base + r, nv + n1 + c) = a.F->neg(d2m.at(r, c));
    rhs.at(base + r, 0) = a.identity_coords(x).at(r, 0);
  }

  auto sol = solve(sys, rhs);
  if (!sol) return std::nullopt;
  InvertibilityWitness w;
  w.v = {y, x, 0, sol->submatrix(0, 0, nv, 1)};
  w.h1 = {y, y, -1, sol->submatrix(nv, 0, n1, 1)};
  w.h2 = {x, x, -1, sol->submatrix(nv + n1, 0, n2, 1)};

  // defensive re-check of the witness identities
  if (!a.differential(w.v).is_zero()) return std::nullopt;
  Mat e1 = a.compose(w.v, u).coords - a.identity_coords(y) - a.differential(w.h1).coords;
  Mat e2 = a.compose(u, w.v).coords - a.identity_coords(x) - a.differential(w.h2).coords;
  if (!e1.is_zero() || !e2.is_zero()) return std::nullopt;
  return w;
}

}  // namespace scalex
