#include "tw.hpp"

#include <sstream>

namespace scalex {

int tw_q_degree(const TwistedComplex& t, int i, int j) {
  return 1 + t.entries[i].shift - t.entries[j].shift;
}

DgHom tw_q_at(const FiniteDgCategory& a, const TwistedComplex& t, int i, int j) {
  auto it = t.q.find({i, j});
  if (it != t.q.end()) return it->second;
  return a.zero_hom(t.entries[j].obj, t.entries[i].obj, tw_q_degree(t, i, j));
}

DgHom tw_component(const FiniteDgCategory& a, const TwistedComplex& s, const TwistedComplex& t,
                   const TwMorphism& u, int i, int j) {
  auto it = u.c.find({i, j});
  if (it != u.c.end()) return it->second;
  return a.zero_hom(s.entries[j].obj, t.entries[i].obj,
                    u.degree + t.entries[i].shift - s.entries[j].shift);
}

TwistedComplex tw_normalize(const FiniteDgCategory& a, TwistedComplex t) {
  (void)a;
  for (auto it = t.q.begin(); it != t.q.end();)
    it = it->second.is_zero() ? t.q.erase(it) : std::next(it);
  return t;
}

TwMorphism tw_morphism_normalize(TwMorphism u) {
  for (auto it = u.c.begin(); it != u.c.end();)
    it = it->second.is_zero() ? u.c.erase(it) : std::next(it);
  return u;
}

bool tw_equal_objects(const FiniteDgCategory& a, const TwistedComplex& s, const TwistedComplex& t) {
  if (!(s.entries == t.entries)) return false;
  TwistedComplex sn = tw_normalize(a, s), tn = tw_normalize(a, t);
  if (sn.q.size() != tn.q.size()) return false;
  for (auto& [k, h] : sn.q) {
    auto it = tn.q.find(k);
    if (it == tn.q.end() || !(it->second.coords == h.coords)) return false;
  }
  return true;
}

bool tw_equal_morphisms(const FiniteDgCategory& a, const TwistedComplex& s,
                        const TwistedComplex& t, const TwMorphism& u, const TwMorphism& v) {
  if (u.degree != v.degree) return false;
  for (int i = 0; i < t.size(); ++i)
    for (int j = 0; j < s.size(); ++j)
      if (!(tw_component(a, s, t, u, i, j).coords == tw_component(a, s, t, v, i, j).coords))
        return false;
  return true;
}

CheckReport validate_twisted(const FiniteDgCategory& a, const TwistedComplex& t) {
  CheckReport rep;
  int n = t.size();
  bool entries_ok = true;
  for (auto& e : t.entries)
    if (e.obj < 0 || e.obj >= a.size()) entries_ok = false;
  rep.add("entries", entries_ok, entries_ok ? "" : "entry object out of range");
  if (!entries_ok) return rep;

  bool tri_ok = true;
  std::string tri_detail;
  for (auto& [k, h] : t.q)
    if (!(k.first >= 0 && k.first < k.second && k.second < n)) {
      tri_ok = false;
      tri_detail = "q has a component at (" + std::to_string(k.first) + "," +
                   std::to_string(k.second) + ") outside the strict upper triangle";
    }
  rep.add("triangular", tri_ok, tri_detail);
  if (!tri_ok) return rep;

  bool shape_ok = true;
  std::string shape_detail;
  for (auto& [k, h] : t.q) {
    auto [i, j] = k;
    int want = tw_q_degree(t, i, j);
    if (h.src != t.entries[j].obj || h.dst != t.entries[i].obj || h.degree != want ||
        h.coords.rows() != a.hom(h.src, h.dst).dim(want) || h.coords.cols() != 1) {
      shape_ok = false;
      shape_detail = "q component at (" + std::to_string(i) + "," + std::to_string(j) +
                     ") has wrong endpoints or degree";
    }
  }
  rep.add("component_shapes", shape_ok, shape_detail);
  if (!shape_ok) return rep;

  bool mc_ok = true;
  std::string mc_detail;
  for (int i = 0; i < n && mc_ok; ++i)
    for (int k = i + 1; k < n && mc_ok; ++k) {
      DgHom acc = a.differential(tw_q_at(a, t, i, k));
      if (t.entries[i].shift % 2 != 0) acc = a.negate(acc);
      for (int j = i + 1; j < k; ++j)
        acc = a.add_homs(acc, a.compose(tw_q_at(a, t, j, k), tw_q_at(a, t, i, j)));
      if (!acc.is_zero()) {
        mc_ok = false;
        mc_detail = "Maurer-Cartan equation fails at entry pair (" + std::to_string(i) + "," +
                    std::to_string(k) + ")";
      }
    }
  rep.add("maurer_cartan", mc_ok, mc_detail);
  return rep;
}

TwistedComplex embed_psi(const FiniteDgCategory& a, int obj) {
  if (obj < 0 || obj >= a.size()) throw Error(ErrorCode::input_error, "object index out of range");
  TwistedComplex t;
  t.entries.push_back({obj, 0});
  return t;
}

TwMorphism embed_psi_hom(const FiniteDgCategory& a, const DgHom& f) {
  (void)a;
  TwMorphism u;
  u.degree = f.degree;
  if (!f.coords.is_zero()) u.c[{0, 0}] = f;
  return u;
}

TwistedComplex tw_shift(const TwistedComplex& t, int k) {
  TwistedComplex r = t;
  for (auto& e : r.entries) e.shift += k;
  return r;
}

TwistedComplex tw_sigma(const FiniteDgCategory& a, const TwistedComplex& t, int k) {
  TwistedComplex r = tw_shift(t, k);
  if (k % 2 != 0)
    for (auto& [key, h] : r.q) h = a.negate(h);
  return r;
}

TwistedComplex tw_direct_sum(const FiniteDgCategory& a, const TwistedComplex& s,
                             const TwistedComplex& t) {
  (void)a;
  TwistedComplex r = s;
  int n = s.size();
  r.entries.insert(r.entries.end(), t.entries.begin(), t.entries.end());
  for (auto& [k, h] : t.q) r.q[{k.first + n, k.second + n}] = h;
  return r;
}

TwMorphism tw_morphism_direct_sum(const FiniteDgCategory& a, const TwistedComplex& s1,
                                  const TwistedComplex& t1, const TwMorphism& u1,
                                  const TwistedComplex& s2, const TwistedComplex& t2,
                                  const TwMorphism& u2) {
  (void)a;
  (void)s2;
  if (u1.degree != u2.degree)
    throw Error(ErrorCode::shape_mismatch, "direct sum needs morphisms of equal degree");
  TwMorphism r = u1;
  int dn = t1.size(), sn = s1.size();
  for (auto& [k, h] : u2.c) r.c[{k.first + dn, k.second + sn}] = h;
  return r;
}

TwMorphism tw_zero_morphism(int degree) {
  TwMorphism u;
  u.degree = degree;
  return u;
}

TwMorphism tw_identity(const FiniteDgCategory& a, const TwistedComplex& t) {
  TwMorphism u;
  for (int i = 0; i < t.size(); ++i) u.c[{i, i}] = a.identity(t.entries[i].obj);
  return u;
}

TwMorphism tw_add(const FiniteDgCategory& a, const TwistedComplex& s, const TwistedComplex& t,
                  const TwMorphism& u, const TwMorphism& v) {
  if (u.degree != v.degree) throw Error(ErrorCode::shape_mismatch, "degree mismatch in sum");
  TwMorphism r = u;
  for (auto& [k, h] : v.c) {
    auto it = r.c.find(k);
    if (it == r.c.end())
      r.c[k] = h;
    else
      it->second = a.add_homs(it->second, h);
  }
  return tw_morphism_normalize(r);
}

TwMorphism tw_scale(const FiniteDgCategory& a, const Scalar& c, const TwMorphism& u) {
  TwMorphism r = u;
  for (auto& [k, h] : r.c) h = a.scale_hom(c, h);
  return tw_morphism_normalize(r);
}

TwMorphism tw_negate(const FiniteDgCategory& a, const TwMorphism& u) {
  TwMorphism r = u;
  for (auto& [k, h] : r.c) h = a.negate(h);
  return r;
}

static void tw_accumulate(const FiniteDgCategory& a, std::map<std::pair<int, int>, DgHom>& acc,
                          std::pair<int, int> key, const DgHom& h) {
  auto it = acc.find(key);
  if (it == acc.end())
    acc[key] = h;
  else
    it->second = a.add_homs(it->second, h);
}

TwMorphism tw_compose(const FiniteDgCategory& a, const TwistedComplex& s, const TwistedComplex& t,
                      const TwistedComplex& u_obj, const TwMorphism& f, const TwMorphism& g) {
  (void)s;
  (void)t;
  (void)u_obj;
  TwMorphism r;
  r.degree = f.degree + g.degree;
  for (auto& [kg, gh] : g.c)
    for (auto& [kf, fh] : f.c)
      if (kg.second == kf.first)
        tw_accumulate(a, r.c, {kg.first, kf.second}, a.compose(fh, gh));
  return tw_morphism_normalize(r);
}

TwMorphism tw_differential(const FiniteDgCategory& a, const TwistedComplex& s,
                           const TwistedComplex& t, const TwMorphism& u) {
  TwMorphism r;
  r.degree = u.degree + 1;
  for (auto& [k, h] : u.c) {
    DgHom dh = a.differential(h);
    if (t.entries[k.first].shift % 2 != 0) dh = a.negate(dh);
    tw_accumulate(a, r.c, k, dh);
  }
  for (auto& [kq, qh] : t.q)
    for (auto& [ku, uh] : u.c)
      if (kq.second == ku.first)
        tw_accumulate(a, r.c, {kq.first, ku.second}, a.compose(uh, qh));
  bool flip = (u.degree % 2 == 0);  // -(-1)^l : negate for even l
  for (auto& [ku, uh] : u.c)
    for (auto& [kq, qh] : s.q)
      if (ku.second == kq.first) {
        DgHom term = a.compose(qh, uh);
        if (flip) term = a.negate(term);
        tw_accumulate(a, r.c, {ku.first, kq.second}, term);
      }
  return tw_morphism_normalize(r);
}

TwHomComplex tw_hom_complex(const FiniteDgCategory& a, const TwistedComplex& s,
                            const TwistedComplex& t) {
  TwHomComplex h;
  for (int i = 0; i < t.size(); ++i)
    for (int j = 0; j < s.size(); ++j) {
      const auto& amb = a.hom(s.entries[j].obj, t.entries[i].obj);
      int delta = t.entries[i].shift - s.entries[j].shift;
      for (auto& [deg, dim] : amb.dims) {
        TwHomComplex::Block b{i, j, deg, dim, 0};
        h.blocks[deg - delta].push_back(b);
      }
    }
  CochainComplex c;
  c.F = a.F;
  for (auto& [l, bl] : h.blocks) {
    int off = 0;
    for (auto& b : bl) {
      b.offset = off;
      off += b.dim;
    }
    c.dims[l] = off;
  }
  h.complex = c;  // dims fixed before building differentials
  for (auto& [l, bl] : h.blocks) {
    int rows = h.complex.dim(l + 1), cols = h.complex.dim(l);
    Mat d(a.F, rows, cols);
    for (auto& b : bl)
      for (int e = 0; e < b.dim; ++e) {
        TwMorphism unit;
        unit.degree = l;
        unit.c[{b.i, b.j}] =
            a.basis_hom(s.entries[b.j].obj, t.entries[b.i].obj, b.amb_degree, e);
        Mat col = h.flatten(a, s, t, tw_differential(a, s, t, unit));
        for (int r = 0; r < rows; ++r) d.at(r, b.offset + e) = col.at(r, 0);
      }
    if (rows > 0 && cols > 0) c.d[l] = d;
  }
  h.complex = std::move(c);
  return h;
}

Mat TwHomComplex::flatten(const FiniteDgCategory& a, const TwistedComplex& s,
                          const TwistedComplex& t, const TwMorphism& u) const {
  (void)s;
  (void)t;
  int total = complex.dim(u.degree);
  Mat out(a.F, total, 1);
  auto it = blocks.find(u.degree);
  if (it == blocks.end()) {
    for (auto& [k, h] : u.c)
      if (!h.coords.is_zero())
        throw Error(ErrorCode::shape_mismatch, "morphism has components outside the hom complex");
    return out;
  }
  std::map<std::pair<int, int>, const Block*> index;
  for (auto& b : it->second) index[{b.i, b.j}] = &b;
  for (auto& [k, h] : u.c) {
    if (h.coords.rows() == 0) continue;
    auto bi = index.find(k);
    if (bi == index.end()) {
      if (!h.coords.is_zero())
        throw Error(ErrorCode::shape_mismatch, "morphism has components outside the hom complex");
      continue;
    }
    for (int r = 0; r < h.coords.rows(); ++r) out.at(bi->second->offset + r, 0) = h.coords.at(r, 0);
  }
  return out;
}

TwMorphism TwHomComplex::unflatten(const FiniteDgCategory& a, const TwistedComplex& s,
                                   const TwistedComplex& t, int degree, const Mat& coords) const {
  TwMorphism u;
  u.degree = degree;
  auto it = blocks.find(degree);
  if (it == blocks.end()) return u;
  for (auto& b : it->second) {
    DgHom h = a.zero_hom(s.entries[b.j].obj, t.entries[b.i].obj, b.amb_degree);
    bool nz = false;
    for (int r = 0; r < b.dim; ++r) {
      h.coords.at(r, 0) = coords.at(b.offset + r, 0);
      nz = nz || !h.coords.at(r, 0).is_zero();
    }
    if (nz) u.c[{b.i, b.j}] = h;
  }
  return u;
}

bool tw_is_closed(const FiniteDgCategory& a, const TwistedComplex& s, const TwistedComplex& t,
                  const TwMorphism& u) {
  return tw_differential(a, s, t, u).c.empty();
}

ConeData tw_cone(const FiniteDgCategory& a, const TwistedComplex& s, const TwistedComplex& t,
                 const TwMorphism& u) {
  if (u.degree != 0) throw Error(ErrorCode::input_error, "cone needs a degree-0 morphism");
  if (!tw_is_closed(a, s, t, u))
    throw Error(ErrorCode::input_error, "cone needs a closed morphism");
  ConeData out;
  int nt = t.size();
  out.cone.entries = t.entries;
  for (auto& e : s.entries) out.cone.entries.push_back({e.obj, e.shift + 1});
  out.cone.q = t.q;
  for (auto& [k, h] : u.c)
    if (!h.coords.is_zero()) out.cone.q[{k.first, nt + k.second}] = h;
  for (auto& [k, h] : s.q) out.cone.q[{nt + k.first, nt + k.second}] = a.negate(h);
  for (int i = 0; i < nt; ++i) out.iota.c[{i, i}] = a.identity(t.entries[i].obj);
  for (int j = 0; j < s.size(); ++j) out.pi.c[{j, nt + j}] = a.identity(s.entries[j].obj);
  return out;
}

std::optional<TwMorphism> tw_solve_null_homotopy(const FiniteDgCategory& a,
                                                 const TwistedComplex& s,
                                                 const TwistedComplex& t, const TwMorphism& u) {
  TwHomComplex h = tw_hom_complex(a, s, t);
  Mat z = h.flatten(a, s, t, u);
  auto sol = solve(h.complex.diff(u.degree - 1), z);
  if (!sol) return std::nullopt;
  return h.unflatten(a, s, t, u.degree - 1, *sol);
}

std::optional<TwInvertibility> tw_is_h0_iso(const FiniteDgCategory& a, const TwistedComplex& s,
                                            const TwistedComplex& t, const TwMorphism& u) {
  if (u.degree != 0) throw Error(ErrorCode::input_error, "H0-iso test needs degree 0");
  if (!tw_is_closed(a, s, t, u))
    throw Error(ErrorCode::input_error, "H0-iso test needs a closed morphism");
  TwHomComplex hts = tw_hom_complex(a, t, s);
  TwHomComplex htt = tw_hom_complex(a, t, t);
  TwHomComplex hss = tw_hom_complex(a, s, s);
  int nv = hts.complex.dim(0);
  int n1 = htt.complex.dim(-1), n2 = hss.complex.dim(-1);
  int dtt = htt.complex.dim(0), dss = hss.complex.dim(0);
  Mat dv = hts.complex.diff(0);
  Mat d1 = htt.complex.diff(-1), d2 = hss.complex.diff(-1);

  Mat lmat(a.F, dtt, nv), rmat(a.F, dss, nv);
  for (int k = 0; k < nv; ++k) {
    Mat e(a.F, nv, 1);
    e.at(k, 0) = a.F->one();
    TwMorphism v = hts.unflatten(a, t, s, 0, e);
    Mat uv = htt.flatten(a, t, t, tw_compose(a, t, s, t, v, u));
    Mat vu = hss.flatten(a, s, s, tw_compose(a, s, t, s, u, v));
    for (int r = 0; r < dtt; ++r) lmat.at(r, k) = uv.at(r, 0);
    for (int r = 0; r < dss; ++r) rmat.at(r, k) = vu.at(r, 0);
  }
  Mat idt = htt.flatten(a, t, t, tw_identity(a, t));
  Mat ids = hss.flatten(a, s, s, tw_identity(a, s));

  int rows = dv.rows() + dtt + dss, cols = nv + n1 + n2;
  Mat sys(a.F, rows, cols), rhs(a.F, rows, 1);
  for (int r = 0; r < dv.rows(); ++r)
    for (int c = 0; c < nv; ++c) sys.at(r, c) = dv.at(r, c);
  int base = dv.rows();
  for (int r = 0; r < dtt; ++r) {
    for (int c = 0; c < nv; ++c) sys.at(base + r, c) = lmat.at(r, c);
    for (int c = 0; c < n1; ++c) sys.at(base + r, nv + c) = a.F->neg(d1.at(r, c));
    rhs.at(base + r, 0) = idt.at(r, 0);
  }
  base += dtt;
  for (int r = 0; r < dss; ++r) {
    for (int c = 0; c < nv; ++c) sys.at(base + r, c) = rmat.at(r, c);
    for (int c = 0; c < n2; ++c) sys.at(base + r, nv + n1 + c) = a.F->neg(d2.at(r, c));
    rhs.at(base + r, 0) = ids.at(r, 0);
  }
  auto sol = solve(sys, rhs);
  if (!sol) return std::nullopt;

  TwInvertibility w;
  w.v = hts.unflatten(a, t, s, 0, sol->submatrix(0, 0, nv, 1));
  w.h1 = htt.unflatten(a, t, t, -1, sol->submatrix(nv, 0, n1, 1));
  w.h2 = hss.unflatten(a, s, s, -1, sol->submatrix(nv + n1, 0, n2, 1));

  if (!tw_is_closed(a, t, s, w.v)) return std::nullopt;
  TwMorphism e1 = tw_add(a, t, t, tw_compose(a, t, s, t, w.v, u),
                         tw_negate(a, tw_add(a, t, t, tw_identity(a, t),
                                             tw_differential(a, t, t, w.h1))));
  TwMorphism e2 = tw_add(a, s, s, tw_compose(a, s, t, s, u, w.v),
                         tw_negate(a, tw_add(a, s, s, tw_identity(a, s),
                                             tw_differential(a, s, s, w.h2))));
  if (!e1.c.empty() || !e2.c.empty()) return std::nullopt;
  return w;
}

std::optional<TwMorphism> tw_contraction(const FiniteDgCategory& a, const TwistedComplex& t) {
  return tw_solve_null_homotopy(a, t, t, tw_identity(a, t));
}

std::optional<TwMorphism> tw_strict_inverse(const FiniteDgCategory& a, const TwistedComplex& s,
                                            const TwistedComplex& t, const TwMorphism& u) {
  if (u.degree != 0) throw Error(ErrorCode::input_error, "strict inverse needs degree 0");
  TwHomComplex hts = tw_hom_complex(a, t, s);
  TwHomComplex htt = tw_hom_complex(a, t, t);
  TwHomComplex hss = tw_hom_complex(a, s, s);
  int nv = hts.complex.dim(0);
  int dtt = htt.complex.dim(0), dss = hss.complex.dim(0);
  Mat sys(a.F, dtt + dss, nv), rhs(a.F, dtt + dss, 1);
  for (int k = 0; k < nv; ++k) {
    Mat e(a.F, nv, 1);
    e.at(k, 0) = a.F->one();
    TwMorphism v = hts.unflatten(a, t, s, 0, e);
    Mat uv = htt.flatten(a, t, t, tw_compose(a, t, s, t, v, u));
    Mat vu = hss.flatten(a, s, s, tw_compose(a, s, t, s, u, v));
    for (int r = 0; r < dtt; ++r) sys.at(r, k) = uv.at(r, 0);
    for (int r = 0; r < dss; ++r) sys.at(dtt + r, k) = vu.at(r, 0);
  }
  Mat idt = htt.flatten(a, t, t, tw_identity(a, t));
  Mat ids = hss.flatten(a, s, s, tw_identity(a, s));
  for (int r = 0; r < dtt; ++r) rhs.at(r, 0) = idt.at(r, 0);
  for (int r = 0; r < dss; ++r) rhs.at(dtt + r, 0) = ids.at(r, 0);
  auto sol = solve(sys, rhs);
  if (!sol) return std::nullopt;
  return hts.unflatten(a, t, s, 0, *sol);
}

TwistedComplex tw_apply_functor(const FiniteDgCategory& a, const FiniteDgCategory& b,
                                const DgFunctor& f, const TwistedComplex& t) {
  TwistedComplex r;
  for (auto& e : t.entries) r.entries.push_back({f.object_map[e.obj], e.shift});
  for (auto& [k, h] : t.q) {
    DgHom img = dg_apply_functor(a, b, f, h);
    if (!img.coords.is_zero()) r.q[k] = img;
  }
  return r;
}

TwMorphism tw_apply_functor_hom(const FiniteDgCategory& a, const FiniteDgCategory& b,
                                const DgFunctor& f, const TwistedComplex& s,
                                const TwistedComplex& t, const TwMorphism& u) {
  (void)s;
  (void)t;
  TwMorphism r;
  r.degree = u.degree;
  for (auto& [k, h] : u.c) {
    DgHom img = dg_apply_functor(a, b, f, h);
    if (!img.coords.is_zero()) r.c[k] = img;
  }
  return r;
}

}  // namespace scalex
