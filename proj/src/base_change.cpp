#include "base_change.hpp"

#include <set>
#include <sstream>

namespace scalex {

int bc_degree(const FieldPtr& k, const FieldPtr& l) {
  if (l->same_field(*k)) return 1;
  if (!l->is_extension() || !l->base || !l->base->same_field(*k))
    throw Error(ErrorCode::unsupported_tower, "extension is not over the ambient field");
  return l->degree();
}

std::vector<Scalar> bc_coords(const FieldPtr& k, const FieldPtr& l, const Scalar& v) {
  if (l->same_field(*k)) return {v};
  return l->coords(v);
}

static Scalar bc_from_coords(const FieldPtr& k, const FieldPtr& l,
                             const std::vector<Scalar>& cs) {
  if (l->same_field(*k)) return cs.at(0);
  return l->from_coords(cs);
}

static Scalar bc_generator(const FieldPtr& k, const FieldPtr& l) {
  if (l->same_field(*k)) return k->one();
  return l->generator();
}

static std::vector<Scalar> bc_minpoly(const FieldPtr& k, const FieldPtr& l) {
  if (l->same_field(*k)) return {k->from_int(-1), k->one()};
  return l->minpoly;
}

static Scalar bc_embed(const FieldPtr& k, const FieldPtr& l, const Scalar& v) {
  if (l->same_field(*k)) return v;
  return l->embed(v);
}

CheckReport validate_module_structure(const FiniteDgCategory& a, const ModuleStructure& s) {
  CheckReport rep;
  bool ext_ok = true;
  std::string ext_detail;
  try {
    bc_degree(a.F, s.ext);
  } catch (const Error& e) {
    ext_ok = false;
    ext_detail = e.what();
  }
  rep.add("extension", ext_ok, ext_detail);
  if (!ext_ok) return rep;

  CheckReport under = validate_twisted(a, s.x);
  std::string detail;
  for (auto& it : under.items)
    if (!it.ok) detail = it.check + ": " + it.detail;
  rep.add("underlying", under.ok(), detail);
  if (!under.ok()) return rep;

  bool shape_ok = (s.phi.degree == 0);
  std::string shape_detail = shape_ok ? "" : "phi must have degree 0";
  int n = s.x.size();
  for (auto& [k, h] : s.phi.c) {
    if (k.first < 0 || k.first >= n || k.second < 0 || k.second >= n) {
      shape_ok = false;
      shape_detail = "phi component out of range";
      break;
    }
    int want = s.x.entries[k.first].shift - s.x.entries[k.second].shift;
    if (h.src != s.x.entries[k.second].obj || h.dst != s.x.entries[k.first].obj ||
        h.degree != want || h.coords.rows() != a.hom(h.src, h.dst).dim(want) ||
        h.coords.cols() != 1) {
      shape_ok = false;
      shape_detail = "phi component has wrong endpoints or degree";
      break;
    }
  }
  rep.add("phi_shape", shape_ok, shape_detail);
  if (!shape_ok) return rep;

  bool closed = tw_is_closed(a, s.x, s.x, s.phi);
  rep.add("phi_closed", closed, closed ? "" : "d(phi) is nonzero");

  std::vector<Scalar> m = bc_minpoly(a.F, s.ext);
  TwMorphism acc = tw_zero_morphism(0);
  TwMorphism pw = tw_identity(a, s.x);
  for (size_t j = 0; j < m.size(); ++j) {
    acc = tw_add(a, s.x, s.x, acc, tw_scale(a, m[j], pw));
    if (j + 1 < m.size()) pw = tw_compose(a, s.x, s.x, s.x, pw, s.phi);
  }
  bool min_ok = acc.c.empty();
  rep.add("phi_minpoly", min_ok, min_ok ? "" : "minimal polynomial does not annihilate phi");
  return rep;
}

TwMorphism module_scalar_action(const FiniteDgCategory& a, const ModuleStructure& s,
                                const Scalar& l) {
  std::vector<Scalar> cs = bc_coords(a.F, s.ext, l);
  TwMorphism acc = tw_zero_morphism(0);
  TwMorphism pw = tw_identity(a, s.x);
  for (size_t j = 0; j < cs.size(); ++j) {
    acc = tw_add(a, s.x, s.x, acc, tw_scale(a, cs[j], pw));
    if (j + 1 < cs.size()) pw = tw_compose(a, s.x, s.x, s.x, pw, s.phi);
  }
  return acc;
}

ModuleStructure p_star_structure(const FiniteDgCategory& a, const FieldPtr& l,
                                 const TwistedComplex& x) {
  int d = bc_degree(a.F, l);
  ModuleStructure s;
  s.ext = l;
  for (int k = 0; k < d; ++k) s.x = tw_direct_sum(a, s.x, x);
  Mat r = (d == 1) ? Mat::identity(a.F, 1) : regular_representation(bc_generator(a.F, l));
  int n = x.size();
  s.phi.degree = 0;
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q) {
      if (r.at(p, q).is_zero()) continue;
      for (int i = 0; i < n; ++i)
        s.phi.c[{p * n + i, q * n + i}] = a.scale_hom(r.at(p, q), a.identity(x.entries[i].obj));
    }
  return s;
}

ModuleStructure p_star_object(const FiniteDgCategory& a, const FieldPtr& l, int obj) {
  return p_star_structure(a, l, embed_psi(a, obj));
}

TwMorphism p_star_hom(const FiniteDgCategory& a, const FieldPtr& l, const TwistedComplex& src,
                      const TwistedComplex& dst, const TwMorphism& u) {
  int d = bc_degree(a.F, l);
  int ns = src.size(), nd = dst.size();
  TwMorphism r;
  r.degree = u.degree;
  for (int k = 0; k < d; ++k)
    for (auto& [key, h] : u.c) r.c[{k * nd + key.first, k * ns + key.second}] = h;
  return r;
}

TwistedComplex p_lower(const ModuleStructure& s) { return s.x; }

ModuleStructure galois_act(const FiniteDgCategory& a, const FieldAutomorphism& sigma,
                           const ModuleStructure& s) {
  if (s.ext->same_field(*a.F)) return s;
  if (!sigma.field->same_field(*s.ext))
    throw Error(ErrorCode::input_error, "automorphism acts on the wrong field");
  ModuleStructure r = s;
  r.phi = module_scalar_action(a, s, sigma.apply(s.ext->generator()));
  return r;
}

ModuleStructure orbit_sum(const FiniteDgCategory& a, const AutomorphismGroup& g,
                          const ModuleStructure& s) {
  ModuleStructure r;
  r.ext = s.ext;
  int n = s.x.size();
  for (size_t idx = 0; idx < g.elements.size(); ++idx) {
    r.x = tw_direct_sum(a, r.x, s.x);
    ModuleStructure twisted = galois_act(a, g.elements[idx], s);
    for (auto& [k, h] : twisted.phi.c)
      r.phi.c[{(int)idx * n + k.first, (int)idx * n + k.second}] = h;
  }
  return r;
}

/// Matrix of φ ↦ φ∘f_s(α) - f_t(α)∘φ on the flattened ambient hom space.
static Mat intertwiner_defect(const FiniteDgCategory& a, const ModuleStructure& s,
                              const ModuleStructure& t, const TwHomComplex& amb, int degree) {
  int dim = amb.complex.dim(degree);
  Mat out(a.F, dim, dim);
  for (int c = 0; c < dim; ++c) {
    Mat e(a.F, dim, 1);
    e.at(c, 0) = a.F->one();
    TwMorphism phi = amb.unflatten(a, s.x, t.x, degree, e);
    TwMorphism lhs = tw_compose(a, s.x, s.x, t.x, s.phi, phi);
    TwMorphism rhs = tw_compose(a, s.x, t.x, t.x, phi, t.phi);
    Mat col = amb.flatten(a, s.x, t.x, tw_add(a, s.x, t.x, lhs, tw_negate(a, rhs)));
    for (int r = 0; r < dim; ++r) out.at(r, c) = col.at(r, 0);
  }
  return out;
}

HomSubcomplex hom_subcomplex(const FiniteDgCategory& a, const ModuleStructure& s,
                             const ModuleStructure& t) {
  if (!s.ext->same_field(*t.ext))
    throw Error(ErrorCode::input_error, "module structures over different extensions");
  HomSubcomplex h;
  h.ambient = tw_hom_complex(a, s.x, t.x);
  h.complex.F = a.F;
  for (auto& [n, dim] : h.ambient.complex.dims) {
    Mat defect = intertwiner_defect(a, s, t, h.ambient, n);
    Mat basis = kernel_basis(defect);
    h.basis[n] = basis;
    if (basis.cols() > 0) h.complex.dims[n] = basis.cols();
  }
  for (auto& [n, dim] : h.complex.dims) {
    const Mat& bn = h.basis[n];
    int up = h.complex.dim(n + 1);
    Mat d(a.F, up, dim);
    for (int c = 0; c < dim; ++c) {
      TwMorphism phi = h.ambient.unflatten(a, s.x, t.x, n, bn.column(c));
      Mat img = h.ambient.flatten(a, s.x, t.x, tw_differential(a, s.x, t.x, phi));
      Mat target = up > 0 ? h.basis[n + 1] : Mat(a.F, img.rows(), 0);
      auto sol = solve(target, img);
      if (!sol)
        throw Error(ErrorCode::internal_error,
                    "differential does not restrict to the equivariant subcomplex");
      for (int r = 0; r < up; ++r) d.at(r, c) = sol->at(r, 0);
    }
    if (up > 0 && dim > 0) h.complex.d[n] = d;
  }
  return h;
}

// ---------------------------------------------------------------------------

int BaseChangeCategory::index_of(const ModuleStructure& s) const {
  for (int i = 0; i < (int)structures.size(); ++i) {
    const ModuleStructure& o = structures[i];
    if (!o.ext->same_field(*s.ext)) continue;
    if (!tw_equal_objects(ambient, o.x, s.x)) continue;
    if (!tw_equal_morphisms(ambient, o.x, o.x, o.phi, s.phi)) continue;
    return i;
  }
  return -1;
}

Mat BaseChangeCategory::to_l_coords(int i, int j, int degree, const Mat& amb_flat) const {
  const PairData& p = pairs.at({i, j});
  int d = bc_degree(ambient.F, L);
  auto it = p.span.find(degree);
  if (it == p.span.end() || it->second.cols() == 0) {
    if (!amb_flat.is_zero())
      throw Error(ErrorCode::shape_mismatch, "morphism is not in the equivariant subcomplex");
    return Mat(L, 0, 1);
  }
  auto sol = solve(it->second, amb_flat);
  if (!sol)
    throw Error(ErrorCode::shape_mismatch, "morphism is not in the equivariant subcomplex");
  int m = it->second.cols() / d;
  Mat out(L, m, 1);
  for (int c = 0; c < m; ++c) {
    std::vector<Scalar> cs;
    for (int pw = 0; pw < d; ++pw) cs.push_back(sol->at(c * d + pw, 0));
    out.at(c, 0) = bc_from_coords(ambient.F, L, cs);
  }
  return out;
}

TwMorphism BaseChangeCategory::to_ambient(int i, int j, const DgHom& h) const {
  const PairData& p = pairs.at({i, j});
  int d = bc_degree(ambient.F, L);
  int dim = p.sub.ambient.complex.dim(h.degree);
  Mat flat(ambient.F, dim, 1);
  auto it = p.span.find(h.degree);
  if (it != p.span.end())
    for (int c = 0; c < h.coords.rows(); ++c) {
      std::vector<Scalar> cs = bc_coords(ambient.F, L, h.coords.at(c, 0));
      for (int pw = 0; pw < d; ++pw) {
        if (cs[pw].is_zero()) continue;
        for (int r = 0; r < dim; ++r) {
          Scalar cur = flat.at(r, 0);
          flat.at(r, 0) = ambient.F->add(
              cur, ambient.F->mul(cs[pw], it->second.at(r, c * d + pw)));
        }
      }
    }
  return p.sub.ambient.unflatten(ambient, structures[i].x, structures[j].x, h.degree, flat);
}

DgHom BaseChangeCategory::from_ambient(int i, int j, const TwMorphism& u) const {
  const PairData& p = pairs.at({i, j});
  Mat flat = p.sub.ambient.flatten(ambient, structures[i].x, structures[j].x, u);
  Mat coords = to_l_coords(i, j, u.degree, flat);
  return DgHom{i, j, u.degree, coords};
}

BaseChangeCategory build_base_change_category(const FiniteDgCategory& a, const FieldPtr& l,
                                              const std::vector<ModuleStructure>& structures,
                                              const std::vector<std::string>& names) {
  BaseChangeCategory b;
  b.ambient = a;
  b.L = l;
  b.structures = structures;
  int d = bc_degree(a.F, l);
  for (size_t i = 0; i < structures.size(); ++i) {
    if (!structures[i].ext->same_field(*l))
      throw Error(ErrorCode::input_error, "module structure over a different extension");
    CheckReport rep = validate_module_structure(a, structures[i]);
    if (!rep.ok()) {
      std::string detail;
      for (auto& it : rep.items)
        if (!it.ok) detail = it.check + (it.detail.empty() ? "" : ": " + it.detail);
      throw Error(ErrorCode::input_error,
                  "invalid module structure " + std::to_string(i) + " (" + detail + ")");
    }
  }

  int m = (int)structures.size();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      BaseChangeCategory::PairData p;
      p.sub = hom_subcomplex(a, structures[i], structures[j]);
      for (auto& [n, dim] : p.sub.complex.dims) {
        const Mat& basis = p.sub.basis[n];
        int ambdim = p.sub.ambient.complex.dim(n);
        // right-action matrix v -> v∘f_i(α) on the flattened ambient space
        Mat ract(a.F, ambdim, ambdim);
        TwMorphism falpha = module_scalar_action(a, structures[i], bc_generator(a.F, l));
        for (int c = 0; c < ambdim; ++c) {
          Mat e(a.F, ambdim, 1);
          e.at(c, 0) = a.F->one();
          TwMorphism phi =
              p.sub.ambient.unflatten(a, structures[i].x, structures[j].x, n, e);
          TwMorphism img = tw_compose(a, structures[i].x, structures[i].x, structures[j].x,
                                      falpha, phi);
          Mat col = p.sub.ambient.flatten(a, structures[i].x, structures[j].x, img);
          for (int r = 0; r < ambdim; ++r) ract.at(r, c) = col.at(r, 0);
        }
        std::vector<int> chosen;
        Mat span(a.F, ambdim, 0);
        for (int c = 0; c < basis.cols(); ++c) {
          Mat col = basis.column(c);
          if (span.cols() > 0 && solve(span, col)) continue;
          if (span.cols() == 0 && col.is_zero()) continue;
          chosen.push_back(c);
          Mat cur = col;
          for (int pw = 0; pw < d; ++pw) {
            span = Mat::hstack(span, cur);
            cur = ract * cur;
          }
        }
        if ((int)chosen.size() * d != dim)
          throw Error(ErrorCode::internal_error,
                      "equivariant hom space is not free over the extension");
        p.chosen[n] = chosen;
        p.span[n] = span;
      }
      b.pairs[{i, j}] = p;
    }

  b.cat.F = l;
  for (int i = 0; i < m; ++i)
    b.cat.add_object(i < (int)names.size() ? names[i] : "s" + std::to_string(i));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const auto& p = b.pairs.at({i, j});
      CochainComplex c;
      c.F = l;
      for (auto& [n, chosen] : p.chosen)
        if (!chosen.empty()) c.dims[n] = (int)chosen.size();
      for (auto& [n, chosen] : p.chosen) {
        int up = c.dim(n + 1);
        if (up == 0 || chosen.empty()) continue;
        Mat dmat(l, up, (int)chosen.size());
        for (size_t cc = 0; cc < chosen.size(); ++cc) {
          Mat amb = p.span.at(n).column((int)cc * d);
          TwMorphism phi =
              p.sub.ambient.unflatten(a, b.structures[i].x, b.structures[j].x, n, amb);
          Mat img = p.sub.ambient.flatten(a, b.structures[i].x, b.structures[j].x,
                                          tw_differential(a, b.structures[i].x,
                                                          b.structures[j].x, phi));
          Mat lc = b.to_l_coords(i, j, n + 1, img);
          for (int r = 0; r < up; ++r) dmat.at(r, (int)cc) = lc.at(r, 0);
        }
        c.d[n] = dmat;
      }
      b.cat.set_hom(i, j, c);
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const auto& pij = b.pairs.at({i, j});
        const auto& pjk = b.pairs.at({j, k});
        for (auto& [dm, ch1] : pij.chosen)
          for (auto& [dn, ch2] : pjk.chosen) {
            for (size_t u = 0; u < ch1.size(); ++u)
              for (size_t v = 0; v < ch2.size(); ++v) {
                TwMorphism f = pij.sub.ambient.unflatten(
                    a, b.structures[i].x, b.structures[j].x, dm,
                    pij.span.at(dm).column((int)u * d));
                TwMorphism g = pjk.sub.ambient.unflatten(
                    a, b.structures[j].x, b.structures[k].x, dn,
                    pjk.span.at(dn).column((int)v * d));
                TwMorphism gf = tw_compose(a, b.structures[i].x, b.structures[j].x,
                                           b.structures[k].x, f, g);
                Mat flat = b.pairs.at({i, k}).sub.ambient.flatten(
                    a, b.structures[i].x, b.structures[k].x, gf);
                Mat lc = b.to_l_coords(i, k, dm + dn, flat);
                for (int r = 0; r < lc.rows(); ++r) {
                  if (lc.at(r, 0).is_zero()) continue;
                  b.cat.add_composition_entry(i, j, k, b.cat.flat_of(i, j, dm, (int)u),
                                              b.cat.flat_of(j, k, dn, (int)v),
                                              b.cat.flat_of(i, k, dm + dn, r), lc.at(r, 0));
                }
              }
          }
      }
  for (int i = 0; i < m; ++i) {
    Mat flat = b.pairs.at({i, i}).sub.ambient.flatten(a, b.structures[i].x, b.structures[i].x,
                                                      tw_identity(a, b.structures[i].x));
    b.cat.set_identity(i, b.to_l_coords(i, i, 0, flat));
  }
  b.cat.finalize();
  return b;
}

// ---------------------------------------------------------------------------

AdjunctionReport adjunction_check(const FiniteDgCategory& a, const FieldPtr& l, int obj,
                                  const ModuleStructure& t) {
  AdjunctionReport out;
  int d = bc_degree(a.F, l);
  ModuleStructure s = p_star_object(a, l, obj);
  HomSubcomplex left = hom_subcomplex(a, s, t);
  TwistedComplex psi = embed_psi(a, obj);
  TwHomComplex right = tw_hom_complex(a, psi, t.x);

  TwMorphism iota1;  // first-coordinate inclusion psi -> s.x
  iota1.c[{0, 0}] = a.identity(obj);

  std::vector<Scalar> alpha_pow;
  Scalar alpha = bc_generator(a.F, l->same_field(*a.F) ? a.F : l);
  Scalar pw = l->same_field(*a.F) ? a.F->one() : l->one();
  for (int j = 0; j < d; ++j) {
    alpha_pow.push_back(pw);
    if (j + 1 < d) pw = l->mul(pw, alpha);
  }

  std::set<int> degrees;
  for (auto& [n, dim] : left.complex.dims) degrees.insert(n);
  for (auto& [n, dim] : right.complex.dims) degrees.insert(n);
  bool dims_ok = true, inv_ok = true;
  std::string dims_detail, inv_detail;
  for (int n : degrees) {
    int ld = left.complex.dim(n), rd = right.complex.dim(n);
    out.left_dims[n] = ld;
    out.right_dims[n] = rd;
    if (ld != rd) {
      dims_ok = false;
      dims_detail = "dimension mismatch in degree " + std::to_string(n);
      continue;
    }
    if (ld == 0) continue;
    Mat fwd(a.F, rd, ld);
    for (int c = 0; c < ld; ++c) {
      TwMorphism beta = left.ambient.unflatten(a, s.x, t.x, n, left.basis[n].column(c));
      TwMorphism res = tw_compose(a, psi, s.x, t.x, iota1, beta);
      Mat col = right.flatten(a, psi, t.x, res);
      for (int r = 0; r < rd; ++r) fwd.at(r, c) = col.at(r, 0);
    }
    Mat bwd(a.F, ld, rd);
    for (int c = 0; c < rd; ++c) {
      Mat e(a.F, rd, 1);
      e.at(c, 0) = a.F->one();
      TwMorphism u = right.unflatten(a, psi, t.x, n, e);
      TwMorphism util;
      util.degree = n;
      for (int j = 0; j < d; ++j) {
        TwMorphism fj = module_scalar_action(a, t, alpha_pow[j]);
        TwMorphism comp = tw_compose(a, psi, t.x, t.x, u, fj);
        for (auto& [key, h] : comp.c) util.c[{key.first, j}] = h;
      }
      Mat flat = left.ambient.flatten(a, s.x, t.x, util);
      auto sol = solve(left.basis[n], flat);
      if (!sol) {
        inv_ok = false;
        inv_detail = "transposed morphism is not equivariant in degree " + std::to_string(n);
        break;
      }
      for (int r = 0; r < ld; ++r) bwd.at(r, c) = sol->at(r, 0);
    }
    if (!inv_ok) break;
    if (!((fwd * bwd) == Mat::identity(a.F, rd)) || !((bwd * fwd) == Mat::identity(a.F, ld))) {
      inv_ok = false;
      inv_detail = "bijection candidates are not mutually inverse in degree " + std::to_string(n);
    }
  }
  out.report.add("dimensions_match", dims_ok, dims_detail);
  out.report.add("mutually_inverse", inv_ok, inv_detail);
  return out;
}

// ---------------------------------------------------------------------------

ProjectionFormulaReport projection_formula_check(const FiniteDgCategory& a,
                                                 const AutomorphismGroup& g,
                                                 const ModuleStructure& s) {
  if (!g.is_galois) throw Error(ErrorCode::not_galois, "projection formula needs L/K Galois");
  if (!g.field->same_field(*s.ext))
    throw Error(ErrorCode::input_error, "group acts on a different field");
  ProjectionFormulaReport out;
  const FieldPtr l = s.ext;
  int d = bc_degree(a.F, l);
  int n = s.x.size();
  out.lhs = p_star_structure(a, l, s.x);
  out.rhs = orbit_sum(a, g, s);

  std::vector<Scalar> alpha_pow;
  Scalar pw = l->one();
  for (int j = 0; j < d; ++j) {
    alpha_pow.push_back(pw);
    if (j + 1 < d) pw = l->mul(pw, l->generator());
  }

  out.iso.degree = 0;
  for (int gi = 0; gi < d; ++gi)
    for (int j = 0; j < d; ++j) {
      TwMorphism blk = module_scalar_action(a, s, g.elements[gi].apply(alpha_pow[j]));
      for (auto& [key, h] : blk.c) out.iso.c[{gi * n + key.first, j * n + key.second}] = h;
    }

  Mat vl(l, d, d);
  for (int gi = 0; gi < d; ++gi)
    for (int j = 0; j < d; ++j) vl.at(gi, j) = g.elements[gi].apply(alpha_pow[j]);
  auto w = inverse(vl);
  bool char_ok = w.has_value();
  out.report.add("character_matrix_invertible", char_ok,
                 char_ok ? "" : "Galois character matrix is singular");
  if (!char_ok) return out;

  out.iso_inv.degree = 0;
  for (int j = 0; j < d; ++j)
    for (int gi = 0; gi < d; ++gi) {
      TwMorphism blk = module_scalar_action(a, s, w->at(j, gi));
      for (auto& [key, h] : blk.c) out.iso_inv.c[{j * n + key.first, gi * n + key.second}] = h;
    }

  bool closed = tw_is_closed(a, out.lhs.x, out.rhs.x, out.iso);
  out.report.add("iso_closed", closed, closed ? "" : "intertwiner is not closed");

  TwMorphism lhs1 = tw_compose(a, out.lhs.x, out.lhs.x, out.rhs.x, out.lhs.phi, out.iso);
  TwMorphism rhs1 = tw_compose(a, out.lhs.x, out.rhs.x, out.rhs.x, out.iso, out.rhs.phi);
  bool inter = tw_equal_morphisms(a, out.lhs.x, out.rhs.x, lhs1, rhs1);
  out.report.add("intertwines", inter, inter ? "" : "U∘phi differs from phi∘U");

  TwMorphism ui = tw_compose(a, out.lhs.x, out.rhs.x, out.lhs.x, out.iso, out.iso_inv);
  TwMorphism iu = tw_compose(a, out.rhs.x, out.lhs.x, out.rhs.x, out.iso_inv, out.iso);
  bool inv_ok = tw_equal_morphisms(a, out.lhs.x, out.lhs.x, ui, tw_identity(a, out.lhs.x)) &&
                tw_equal_morphisms(a, out.rhs.x, out.rhs.x, iu, tw_identity(a, out.rhs.x));
  out.report.add("strict_inverse", inv_ok, inv_ok ? "" : "inverse candidate fails");

  GaloisEquivariantObject el = canonical_equivariant_pstar(a, g, s.x);
  GaloisEquivariantObject er = canonical_equivariant_orbit(a, g, s);
  bool equi = true;
  for (size_t idx = 0; idx < g.elements.size() && equi; ++idx) {
    TwMorphism left = tw_compose(a, out.lhs.x, out.lhs.x, out.rhs.x, el.lambda[idx], out.iso);
    TwMorphism right = tw_compose(a, out.lhs.x, out.rhs.x, out.rhs.x, out.iso, er.lambda[idx]);
    equi = tw_equal_morphisms(a, out.lhs.x, out.rhs.x, left, right);
  }
  out.report.add("equivariant", equi, equi ? "" : "intertwiner is not equivariant");
  return out;
}

// ---------------------------------------------------------------------------

bool star_condition_check(const FiniteDgCategory& a, const ModuleStructure& s,
                          const ModuleStructure& t) {
  TwHomComplex amb = tw_hom_complex(a, s.x, t.x);
  for (auto& [n, dim] : amb.complex.dims) {
    if (dim == 0) continue;
    Mat tn = intertwiner_defect(a, s, t, amb, n);
    Mat tn1 = intertwiner_defect(a, s, t, amb, n + 1);
    Mat premise = tn1 * amb.complex.diff(n);
    Mat ker = kernel_basis(premise);
    if (!(tn * ker).is_zero()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

FiniteDgCategory tensor_with_one_l(const FiniteDgCategory& a, const FieldPtr& l) {
  bc_degree(a.F, l);  // validates the tower
  FiniteDgCategory b;
  b.F = l;
  for (auto& o : a.objects) b.add_object(o);
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < a.size(); ++y) {
      const CochainComplex& c = a.hom(x, y);
      if (c.dims.empty()) continue;
      CochainComplex e;
      e.F = l;
      e.dims = c.dims;
      for (auto& [n, mat] : c.d) {
        Mat em(l, mat.rows(), mat.cols());
        for (int r = 0; r < mat.rows(); ++r)
          for (int cc = 0; cc < mat.cols(); ++cc) em.at(r, cc) = bc_embed(a.F, l, mat.at(r, cc));
        e.d[n] = em;
      }
      b.set_hom(x, y, e);
    }
  for (auto& key : a.comp_block_keys()) {
    auto [x, y, z, m, n] = key;
    Mat blk = a.comp_block(x, y, z, m, n);
    int d2 = a.hom(y, z).dim(n);
    for (int r = 0; r < blk.rows(); ++r)
      for (int c = 0; c < blk.cols(); ++c) {
        if (blk.at(r, c).is_zero()) continue;
        int i1 = c / d2, i2 = c % d2;
        b.add_composition_entry(x, y, z, b.flat_of(x, y, m, i1), b.flat_of(y, z, n, i2),
                                b.flat_of(x, z, m + n, r), bc_embed(a.F, l, blk.at(r, c)));
      }
  }
  for (int x = 0; x < a.size(); ++x) {
    const Mat& id = a.identity_coords(x);
    Mat e(l, id.rows(), 1);
    for (int r = 0; r < id.rows(); ++r) e.at(r, 0) = bc_embed(a.F, l, id.at(r, 0));
    b.set_identity(x, e);
  }
  b.finalize();
  return b;
}

// ---------------------------------------------------------------------------

CheckReport validate_equivariant(const FiniteDgCategory& a, const AutomorphismGroup& g,
                                 const GaloisEquivariantObject& e) {
  CheckReport rep;
  bool size_ok = e.lambda.size() == g.elements.size();
  rep.add("lambda_count", size_ok, size_ok ? "" : "one isomorphism per group element required");
  if (!size_ok) return rep;
  CheckReport srep = validate_module_structure(a, e.s);
  rep.add("structure", srep.ok());
  if (!srep.ok()) return rep;

  bool closed_ok = true, inter_ok = true, inv_ok = true;
  std::string inter_detail;
  for (size_t idx = 0; idx < g.elements.size(); ++idx) {
    const TwMorphism& lam = e.lambda[idx];
    if (lam.degree != 0 || !tw_is_closed(a, e.s.x, e.s.x, lam)) closed_ok = false;
    ModuleStructure twisted = galois_act(a, g.elements[idx], e.s);
    TwMorphism lhs = tw_compose(a, e.s.x, e.s.x, e.s.x, twisted.phi, lam);
    TwMorphism rhs = tw_compose(a, e.s.x, e.s.x, e.s.x, lam, e.s.phi);
    if (!tw_equal_morphisms(a, e.s.x, e.s.x, lhs, rhs)) {
      inter_ok = false;
      inter_detail = "λ does not intertwine the twisted structure at element " +
                     std::to_string(idx);
    }
    if (!tw_strict_inverse(a, e.s.x, e.s.x, lam)) inv_ok = false;
  }
  rep.add("lambda_closed", closed_ok, closed_ok ? "" : "a λ is not closed of degree 0");
  rep.add("lambda_intertwines", inter_ok, inter_detail);
  rep.add("lambda_invertible", inv_ok, inv_ok ? "" : "a λ has no strict inverse");

  bool unit_ok = tw_equal_morphisms(a, e.s.x, e.s.x, e.lambda[0], tw_identity(a, e.s.x));
  rep.add("lambda_identity", unit_ok, unit_ok ? "" : "λ at the identity is not id");

  bool coc_ok = true;
  std::string coc_detail;
  for (size_t i = 0; i < g.elements.size() && coc_ok; ++i)
    for (size_t j = 0; j < g.elements.size() && coc_ok; ++j) {
      int w = g.compose_index((int)i, (int)j);
      TwMorphism rhs = tw_compose(a, e.s.x, e.s.x, e.s.x, e.lambda[i], e.lambda[j]);
      if (!tw_equal_morphisms(a, e.s.x, e.s.x, e.lambda[w], rhs)) {
        coc_ok = false;
        coc_detail = "cocycle fails at pair (" + std::to_string(i) + "," + std::to_string(j) + ")";
      }
    }
  rep.add("cocycle", coc_ok, coc_detail);
  return rep;
}

GaloisEquivariantObject canonical_equivariant_pstar(const FiniteDgCategory& a,
                                                    const AutomorphismGroup& g,
                                                    const TwistedComplex& x) {
  GaloisEquivariantObject e;
  e.s = p_star_structure(a, g.field, x);
  int n = x.size();
  for (size_t idx = 0; idx < g.elements.size(); ++idx) {
    Mat sm = automorphism_matrix(g.elements[g.inverse_index((int)idx)]);
    TwMorphism lam;
    for (int p = 0; p < sm.rows(); ++p)
      for (int q = 0; q < sm.cols(); ++q) {
        if (sm.at(p, q).is_zero()) continue;
        for (int i = 0; i < n; ++i)
          lam.c[{p * n + i, q * n + i}] =
              a.scale_hom(sm.at(p, q), a.identity(x.entries[i].obj));
      }
    e.lambda.push_back(lam);
  }
  return e;
}

GaloisEquivariantObject canonical_equivariant_orbit(const FiniteDgCategory& a,
                                                    const AutomorphismGroup& g,
                                                    const ModuleStructure& s) {
  GaloisEquivariantObject e;
  e.s = orbit_sum(a, g, s);
  int n = s.x.size();
  for (size_t idx = 0; idx < g.elements.size(); ++idx) {
    int inv = g.inverse_index((int)idx);
    TwMorphism lam;
    for (size_t ai = 0; ai < g.elements.size(); ++ai) {
      int bi = g.compose_index((int)ai, inv);
      for (int i = 0; i < n; ++i)
        lam.c[{(int)ai * n + i, bi * n + i}] = a.identity(s.x.entries[i].obj);
    }
    e.lambda.push_back(lam);
  }
  return e;
}

// ---------------------------------------------------------------------------

bool is_full_matrix_category(const FiniteDgCategory& a, int* block_size) {
  if (a.size() != 1) return false;
  const CochainComplex& c = a.hom(0, 0);
  if (c.dims.size() != 1 || !c.dims.count(0)) return false;
  int m = c.dim(0);
  int n = 0;
  while (n * n < m) ++n;
  if (n * n != m) return false;
  if (!c.d.empty() && !c.diff(0).is_zero()) return false;
  Mat blk = a.comp_block(0, 0, 0, 0, 0);
  for (int i1 = 0; i1 < m; ++i1)
    for (int i2 = 0; i2 < m; ++i2) {
      int r1 = i1 / n, c1 = i1 % n, r2 = i2 / n, c2 = i2 % n;
      for (int r = 0; r < m; ++r) {
        bool want = (c2 == r1) && (r == r2 * n + c1);  // e_{r2c2}∘e_{r1c1}
        const Scalar& v = blk.at(r, i1 * m + i2);
        if (want != !v.is_zero()) return false;
        if (want && !(v == a.F->one())) return false;
      }
    }
  const Mat& id = a.identity_coords(0);
  for (int r = 0; r < n; ++r)
    for (int cc = 0; cc < n; ++cc)
      if (!(id.at(r * n + cc, 0) == (r == cc ? a.F->one() : a.F->zero()))) return false;
  if (block_size) *block_size = n;
  return true;
}

Mat sum_morphism_matrix(const FiniteDgCategory& a, const TwistedComplex& s,
                        const TwistedComplex& t, const TwMorphism& u) {
  int n = 0;
  if (!is_full_matrix_category(a, &n))
    throw Error(ErrorCode::unsupported_ambient, "matrix form needs a full matrix category");
  if (u.degree != 0) throw Error(ErrorCode::input_error, "matrix form needs degree 0");
  for (auto& en : s.entries)
    if (en.shift != 0) throw Error(ErrorCode::unsupported_ambient, "matrix form needs shift 0");
  for (auto& en : t.entries)
    if (en.shift != 0) throw Error(ErrorCode::unsupported_ambient, "matrix form needs shift 0");
  Mat big(a.F, t.size() * n, s.size() * n);
  for (auto& [k, h] : u.c)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        big.at(k.first * n + r, k.second * n + c) = h.coords.at(r * n + c, 0);
  return big;
}

TwMorphism sum_morphism_from_matrix(const FiniteDgCategory& a, const TwistedComplex& s,
                                    const TwistedComplex& t, const Mat& m) {
  int n = 0;
  if (!is_full_matrix_category(a, &n))
    throw Error(ErrorCode::unsupported_ambient, "matrix form needs a full matrix category");
  if (m.rows() != t.size() * n || m.cols() != s.size() * n)
    throw Error(ErrorCode::shape_mismatch, "matrix has the wrong size");
  TwMorphism u;
  for (int i = 0; i < t.size(); ++i)
    for (int j = 0; j < s.size(); ++j) {
      DgHom h = a.zero_hom(s.entries[j].obj, t.entries[i].obj, 0);
      bool nz = false;
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          h.coords.at(r * n + c, 0) = m.at(i * n + r, j * n + c);
          nz = nz || !m.at(i * n + r, j * n + c).is_zero();
        }
      if (nz) u.c[{i, j}] = h;
    }
  return u;
}

// Flat matrix of the degree-0 components of a block map between two entry
// subsets of matrix-model sums.
static Mat entry_subset_matrix(const FiniteDgCategory& a, int n,
                               const std::map<std::pair<int, int>, DgHom>& comps,
                               const std::vector<int>& rows, const std::vector<int>& cols) {
  std::map<int, int> rpos, cpos;
  for (size_t i = 0; i < rows.size(); ++i) rpos[rows[i]] = (int)i;
  for (size_t j = 0; j < cols.size(); ++j) cpos[cols[j]] = (int)j;
  Mat m(a.F, (int)rows.size() * n, (int)cols.size() * n);
  for (auto& [k, h] : comps) {
    auto ri = rpos.find(k.first);
    auto cj = cpos.find(k.second);
    if (ri == rpos.end() || cj == cpos.end()) continue;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        m.at(ri->second * n + r, cj->second * n + c) = h.coords.at(r * n + c, 0);
  }
  return m;
}

namespace {
struct GroupDescent {
  int kprime = 0;  // descended entries contributed by this shift group
  Mat u, uinv;     // reconstruction in the flat model, copy-major columns
};
}  // namespace

static GroupDescent descend_group(const FiniteDgCategory& a, const AutomorphismGroup& g,
                                  const FieldPtr& ext, int n, int cnt, const Mat& phi,
                                  const std::vector<Mat>& lambda_flat, CheckReport& report) {
  int d = (int)g.elements.size();
  int big = cnt * n;
  Mat stacked(a.F, 0, big);
  for (int idx = 1; idx < d; ++idx)
    stacked =
        Mat::vstack(stacked, lambda_flat[g.inverse_index(idx)] - Mat::identity(a.F, big));
  Mat fixed = kernel_basis(stacked);
  bool dim_ok = fixed.cols() * d == big;
  report.add("fixed_space_dimension", dim_ok,
             dim_ok ? "" : "fixed space has dimension " + std::to_string(fixed.cols()));
  if (!dim_ok) throw Error(ErrorCode::cocycle_failure, "fixed space has the wrong dimension");
  if (fixed.cols() % n != 0)
    throw Error(ErrorCode::unsupported_ambient,
                "descended object is not free; idempotent completion is not modeled");
  GroupDescent out;
  out.kprime = fixed.cols() / n;

  Mat u(a.F, big, 0);
  Mat pw = Mat::identity(a.F, big);
  for (int j = 0; j < d; ++j) {
    u = Mat::hstack(u, pw * fixed);
    pw = phi * pw;  // next power of f(α)
  }
  auto uinv = inverse(u);
  bool rec_ok = uinv.has_value();
  report.add("reconstruction_invertible", rec_ok,
             rec_ok ? "" : "reconstruction matrix is singular");
  if (!rec_ok) throw Error(ErrorCode::cocycle_failure, "reconstruction matrix is singular");

  TwistedComplex nn;
  for (int i = 0; i < out.kprime; ++i) nn.entries.push_back({0, 0});
  ModuleStructure ps = p_star_structure(a, ext, nn);
  Mat phip = sum_morphism_matrix(a, ps.x, ps.x, ps.phi);
  bool inter_ok = (u * phip) == (phi * u);
  report.add("reconstruction_intertwines", inter_ok,
             inter_ok ? "" : "reconstruction does not intertwine the structures");
  out.u = u;
  out.uinv = *uinv;
  return out;
}

DescentResult descend(const FiniteDgCategory& a, const AutomorphismGroup& g,
                      const GaloisEquivariantObject& e) {
  int n = 0;
  if (!is_full_matrix_category(a, &n))
    throw Error(ErrorCode::unsupported_ambient,
                "descent is implemented for full matrix-algebra ambients");
  if (!g.is_galois) throw Error(ErrorCode::not_galois, "descent needs L/K Galois");
  CheckReport vrep = validate_equivariant(a, g, e);
  if (!vrep.ok()) {
    std::string detail;
    for (auto& it : vrep.items)
      if (!it.ok) detail = it.check + (it.detail.empty() ? "" : ": " + it.detail);
    throw Error(ErrorCode::cocycle_failure, "invalid equivariant structure (" + detail + ")");
  }

  DescentResult out;
  out.report.merge(vrep);
  int d = (int)g.elements.size();

  // φ and the λ's are degree-0, so they never connect entries with different
  // shifts; each shift group descends on its own, and the twist — which lives
  // between adjacent groups — is transported afterwards.
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < e.s.x.size(); ++i) groups[e.s.x.entries[i].shift].push_back(i);

  std::map<int, GroupDescent> gd;
  for (auto& [shift, idx] : groups) {
    Mat phi = entry_subset_matrix(a, n, e.s.phi.c, idx, idx);
    std::vector<Mat> lam;
    lam.reserve(e.lambda.size());
    for (auto& l : e.lambda) lam.push_back(entry_subset_matrix(a, n, l.c, idx, idx));
    gd.emplace(shift, descend_group(a, g, e.s.ext, n, (int)idx.size(), phi, lam, out.report));
  }

  std::map<int, int> out_off;
  int total = 0;
  for (auto& [shift, gdi] : gd) {
    out_off[shift] = total;
    for (int i = 0; i < gdi.kprime; ++i) out.descended.entries.push_back({0, shift});
    total += gdi.kprime;
  }

  // The transported twist commutes with the canonical module structure and
  // the canonical semilinear action, so it has to be copy-diagonal with one
  // repeated block: the p*-image of the descended twist.
  for (auto& [shift, idx] : groups) {
    auto src = groups.find(shift + 1);
    if (src == groups.end()) continue;
    Mat q = entry_subset_matrix(a, n, e.s.x.q, idx, src->second);
    if (q.is_zero()) continue;
    const GroupDescent& gt = gd.at(shift);
    const GroupDescent& gs = gd.at(shift + 1);
    Mat m = gt.uinv * (q * gs.u);
    int rb = gt.kprime * n, cb = gs.kprime * n;
    Mat h(a.F, rb, cb);
    for (int r = 0; r < rb; ++r)
      for (int c = 0; c < cb; ++c) h.at(r, c) = m.at(r, c);
    bool diag_ok = true;
    for (int p = 0; p < d && diag_ok; ++p)
      for (int pp = 0; pp < d && diag_ok; ++pp)
        for (int r = 0; r < rb && diag_ok; ++r)
          for (int c = 0; c < cb && diag_ok; ++c) {
            const Scalar& v = m.at(p * rb + r, pp * cb + c);
            diag_ok = (p == pp) ? (v == h.at(r, c)) : v.is_zero();
          }
    out.report.add("twist_descends", diag_ok,
                   diag_ok ? "" : "transported twist is not a p*-image");
    if (!diag_ok) throw Error(ErrorCode::cocycle_failure, "twist does not descend");
    for (int bi = 0; bi < gt.kprime; ++bi)
      for (int bj = 0; bj < gs.kprime; ++bj) {
        DgHom hm = a.zero_hom(0, 0, 0);
        bool nz = false;
        for (int r = 0; r < n; ++r)
          for (int c = 0; c < n; ++c) {
            hm.coords.at(r * n + c, 0) = h.at(bi * n + r, bj * n + c);
            nz = nz || !h.at(bi * n + r, bj * n + c).is_zero();
          }
        if (nz) out.descended.q[{out_off.at(shift) + bi, out_off.at(shift + 1) + bj}] = hm;
      }
  }

  CheckReport mc = validate_twisted(a, out.descended);
  out.report.merge(mc);
  if (!mc.ok())
    throw Error(ErrorCode::internal_error, "descended twist fails Maurer-Cartan");

  // global reconstruction isomorphism, copy-major like p*
  ModuleStructure ps = p_star_structure(a, e.s.ext, out.descended);
  out.iso.degree = 0;
  out.iso_inv.degree = 0;
  for (auto& [shift, idx] : groups) {
    const GroupDescent& gg = gd.at(shift);
    int kp = gg.kprime;
    for (int c = 0; c < d; ++c)
      for (int bi = 0; bi < kp; ++bi) {
        int ps_entry = c * total + out_off.at(shift) + bi;
        for (size_t ii = 0; ii < idx.size(); ++ii) {
          DgHom hm = a.zero_hom(0, 0, 0);
          bool nz = false;
          DgHom hv = a.zero_hom(0, 0, 0);
          bool nzv = false;
          for (int r = 0; r < n; ++r)
            for (int cc = 0; cc < n; ++cc) {
              const Scalar& vf = gg.u.at((int)ii * n + r, (c * kp + bi) * n + cc);
              hm.coords.at(r * n + cc, 0) = vf;
              nz = nz || !vf.is_zero();
              const Scalar& vb = gg.uinv.at((c * kp + bi) * n + r, (int)ii * n + cc);
              hv.coords.at(r * n + cc, 0) = vb;
              nzv = nzv || !vb.is_zero();
            }
          if (nz) out.iso.c[{idx[ii], ps_entry}] = hm;
          if (nzv) out.iso_inv.c[{ps_entry, idx[ii]}] = hv;
        }
      }
  }

  bool closed_ok =
      tw_is_closed(a, ps.x, e.s.x, out.iso) && tw_is_closed(a, e.s.x, ps.x, out.iso_inv);
  out.report.add("reconstruction_closed", closed_ok,
                 closed_ok ? "" : "reconstruction is not a closed morphism");
  TwMorphism rt = tw_compose(a, ps.x, e.s.x, ps.x, out.iso, out.iso_inv);
  TwMorphism lf = tw_compose(a, e.s.x, ps.x, e.s.x, out.iso_inv, out.iso);
  bool iso_ok = tw_equal_morphisms(a, ps.x, ps.x, rt, tw_identity(a, ps.x)) &&
                tw_equal_morphisms(a, e.s.x, e.s.x, lf, tw_identity(a, e.s.x));
  out.report.add("reconstruction_strict_iso", iso_ok,
                 iso_ok ? "" : "composites are not the identities");
  TwMorphism lhs = tw_compose(a, ps.x, ps.x, e.s.x, ps.phi, out.iso);
  TwMorphism rhs = tw_compose(a, ps.x, e.s.x, e.s.x, out.iso, e.s.phi);
  bool inter_ok = tw_equal_morphisms(a, ps.x, e.s.x, lhs, rhs);
  out.report.add("reconstruction_intertwines", inter_ok,
                 inter_ok ? "" : "reconstruction does not intertwine the structures");
  return out;
}

// ---------------------------------------------------------------------------

HullContext hull_of_base_change(const FiniteDgCategory& a, const FieldPtr& l,
                                const std::vector<ModuleStructure>& extra) {
  HullContext h;
  std::vector<ModuleStructure> structures;
  std::vector<std::string> names;
  for (int i = 0; i < a.size(); ++i) {
    structures.push_back(p_star_object(a, l, i));
    names.push_back("p*(" + a.objects[i] + ")");
    h.pstar_of_object.push_back(i);
  }
  int extra_idx = 0;
  for (auto& s : extra) {
    structures.push_back(s);
    names.push_back("m" + std::to_string(extra_idx++));
  }
  h.bcc = build_base_change_category(a, l, structures, names);
  return h;
}

TwistedComplex hull_p_star(const HullContext& h, const TwistedComplex& t) {
  const FiniteDgCategory& a = h.bcc.ambient;
  TwistedComplex r;
  for (auto& en : t.entries) r.entries.push_back({h.pstar_of_object[en.obj], en.shift});
  for (auto& [k, u] : t.q) {
    int srco = t.entries[k.second].obj, dsto = t.entries[k.first].obj;
    TwMorphism kk = p_star_hom(a, h.bcc.L, embed_psi(a, srco), embed_psi(a, dsto),
                               embed_psi_hom(a, u));
    DgHom img = h.bcc.from_ambient(h.pstar_of_object[srco], h.pstar_of_object[dsto], kk);
    if (!img.coords.is_zero()) r.q[k] = img;
  }
  return r;
}

TwMorphism hull_p_star_hom(const HullContext& h, const TwistedComplex& s, const TwistedComplex& t,
                           const TwMorphism& u) {
  const FiniteDgCategory& a = h.bcc.ambient;
  TwMorphism r;
  r.degree = u.degree;
  for (auto& [k, comp] : u.c) {
    int srco = s.entries[k.second].obj, dsto = t.entries[k.first].obj;
    TwMorphism kk = p_star_hom(a, h.bcc.L, embed_psi(a, srco), embed_psi(a, dsto),
                               embed_psi_hom(a, comp));
    DgHom img = h.bcc.from_ambient(h.pstar_of_object[srco], h.pstar_of_object[dsto], kk);
    if (!img.coords.is_zero()) r.c[k] = img;
  }
  return r;
}

}  // namespace scalex
