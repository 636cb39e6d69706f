#include "generation.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace scalex {

// ---------------------------------------------------------------------------
// sums of shifted generator copies

int SumSpec::total() const {
  int t = 0;
  for (auto& [s, m] : copies) t += m;
  return t;
}

TwistedComplex sum_spec_object(const FiniteDgCategory& a, const TwistedComplex& e,
                               const SumSpec& spec) {
  TwistedComplex out;
  for (auto& [s, m] : spec.copies)
    for (int c = 0; c < m; ++c) out = tw_direct_sum(a, out, tw_sigma(a, e, s));
  return out;
}

// ---------------------------------------------------------------------------
// q-connected entry components

std::vector<std::vector<int>> q_components(const TwistedComplex& t) {
  int n = t.size();
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (auto& [key, h] : t.q) {
    if (h.is_zero()) continue;
    parent[find(key.first)] = find(key.second);
  }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::map<int, std::vector<int>> by_min;
  for (auto& [root, v] : groups) by_min[v.front()] = v;
  std::vector<std::vector<int>> out;
  for (auto& [mn, v] : by_min) out.push_back(v);
  return out;
}

TwistedComplex component_object(const TwistedComplex& t, const std::vector<int>& entries) {
  TwistedComplex out;
  std::map<int, int> newidx;
  for (int i : entries) {
    newidx[i] = out.size();
    out.entries.push_back(t.entries[i]);
  }
  for (auto& [key, h] : t.q) {
    auto a = newidx.find(key.first), b = newidx.find(key.second);
    if (a == newidx.end() || b == newidx.end()) continue;
    out.q[{a->second, b->second}] = h;
  }
  return out;
}

// ---------------------------------------------------------------------------
// entry permutations as strict isomorphisms

static std::vector<int> perm_inverse(const std::vector<int>& p) {
  std::vector<int> inv(p.size());
  for (int i = 0; i < (int)p.size(); ++i) inv[p[i]] = i;
  return inv;
}

// dst.entries[i] must equal src.entries[perm[i]]; identity components.
static TwMorphism perm_morphism(const FiniteDgCategory& a, const TwistedComplex& src,
                                const TwistedComplex& dst, const std::vector<int>& perm) {
  if ((int)perm.size() != dst.size() || src.size() != dst.size())
    throw Error(ErrorCode::internal_error, "entry permutation has the wrong length");
  TwMorphism u;
  u.degree = 0;
  for (int i = 0; i < dst.size(); ++i) {
    if (!(dst.entries[i] == src.entries[perm[i]]))
      throw Error(ErrorCode::internal_error, "entry permutation mismatches the entry lists");
    u.c[{i, perm[i]}] = a.identity(dst.entries[i].obj);
  }
  return u;
}

// ---------------------------------------------------------------------------
// verification

// The object the witness compares target ⊕ complement against: the shifted
// sum at level 1, the cone of the connecting map above.
static TwistedComplex comparison_object(const FiniteDgCategory& a, const TwistedComplex& e,
                                        const GenerationWitness& w) {
  if (w.level == 1) return sum_spec_object(a, e, w.sum);
  TwistedComplex sb = tw_sigma(a, w.children[1].target, -1);
  return tw_cone(a, sb, w.children[0].target, w.gamma).cone;
}

static void verify_node(const FiniteDgCategory& a, const TwistedComplex& e,
                        const GenerationWitness& w, const std::string& path,
                        WitnessCheck& out) {
  if (!out.ok) return;
  auto fail = [&](const std::string& detail) {
    out.ok = false;
    out.node = path;
    out.detail = detail;
  };
  try {
    if (w.level < 1) return fail("level must be at least 1");
    if (!validate_twisted(a, w.target).ok()) return fail("target is not a valid twisted complex");
    if (!validate_twisted(a, w.complement).ok())
      return fail("complement is not a valid twisted complex");
    if (w.level == 1) {
      if (!w.children.empty()) return fail("a level-1 node carries no children");
      for (auto& [s, m] : w.sum.copies)
        if (m <= 0) return fail("sum multiplicities must be positive");
    } else {
      if (w.children.size() != 2) return fail("a composite node needs exactly two children");
      if (w.children[0].level != w.level - 1)
        return fail("first child must sit one level below its parent");
      if (w.children[1].level != 1) return fail("second child must be a level-1 node");
      verify_node(a, e, w.children[0], path + ".base", out);
      verify_node(a, e, w.children[1], path + ".step", out);
      if (!out.ok) return;
      TwistedComplex sb = tw_sigma(a, w.children[1].target, -1);
      if (w.gamma.degree != 0) return fail("connecting map must have degree 0");
      if (!tw_is_closed(a, sb, w.children[0].target, w.gamma))
        return fail("connecting map is not closed");
    }
    TwistedComplex s_obj = comparison_object(a, e, w);
    TwistedComplex x = tw_direct_sum(a, w.target, w.complement);
    if (w.iso.degree != 0 || w.inv.v.degree != 0)
      return fail("comparison maps must have degree 0");
    if (w.inv.h1.degree != -1 || w.inv.h2.degree != -1)
      return fail("homotopies must have degree -1");
    if (!tw_is_closed(a, x, s_obj, w.iso)) return fail("comparison map is not closed");
    if (!tw_is_closed(a, s_obj, x, w.inv.v)) return fail("inverse comparison map is not closed");
    TwMorphism uv = tw_compose(a, s_obj, x, s_obj, w.inv.v, w.iso);
    TwMorphism lhs1 = tw_add(a, s_obj, s_obj, uv, tw_negate(a, tw_identity(a, s_obj)));
    if (!tw_equal_morphisms(a, s_obj, s_obj, lhs1,
                            tw_differential(a, s_obj, s_obj, w.inv.h1)))
      return fail("u*v - id is not the boundary of the first homotopy");
    TwMorphism vu = tw_compose(a, x, s_obj, x, w.iso, w.inv.v);
    TwMorphism lhs2 = tw_add(a, x, x, vu, tw_negate(a, tw_identity(a, x)));
    if (!tw_equal_morphisms(a, x, x, lhs2, tw_differential(a, x, x, w.inv.h2)))
      return fail("v*u - id is not the boundary of the second homotopy");
  } catch (const Error& err) {
    fail(std::string("structural error: ") + err.what());
  }
}

WitnessCheck verify_generation_witness(const FiniteDgCategory& a, const TwistedComplex& e,
                                       const GenerationWitness& w) {
  WitnessCheck out;
  verify_node(a, e, w, "root", out);
  return out;
}

// ---------------------------------------------------------------------------
// mechanical transforms

static GenerationWitness zero_leaf_witness() {
  GenerationWitness w;
  w.level = 1;
  w.iso = tw_zero_morphism(0);
  w.inv.v = tw_zero_morphism(0);
  w.inv.h1 = tw_zero_morphism(-1);
  w.inv.h2 = tw_zero_morphism(-1);
  return w;
}

static GenerationWitness identity_leaf(const FiniteDgCategory& a, const TwistedComplex& e,
                                       const SumSpec& spec) {
  GenerationWitness w;
  w.level = 1;
  w.sum = spec;
  w.target = sum_spec_object(a, e, spec);
  w.iso = tw_identity(a, w.target);
  w.inv.v = w.iso;
  w.inv.h1 = tw_zero_morphism(-1);
  w.inv.h2 = tw_zero_morphism(-1);
  return w;
}

GenerationWitness pad_witness(const FiniteDgCategory& a, const GenerationWitness& w) {
  // cone of the zero map out of the empty complex is the target itself, so
  // the extra level is witnessed by identities
  GenerationWitness r;
  r.level = w.level + 1;
  r.target = w.target;
  r.children = {w, zero_leaf_witness()};
  r.gamma = tw_zero_morphism(0);
  r.iso = tw_identity(a, w.target);
  r.inv.v = r.iso;
  r.inv.h1 = tw_zero_morphism(-1);
  r.inv.h2 = tw_zero_morphism(-1);
  return r;
}

GenerationWitness shift_witness(const FiniteDgCategory& a, const GenerationWitness& w, int j) {
  // sigma^j scales both q and the entrywise differential sign by (-1)^j, so
  // component matrices of closed maps transfer unchanged while homotopies
  // and connecting maps pick up the sign
  GenerationWitness r;
  r.level = w.level;
  r.target = tw_sigma(a, w.target, j);
  r.complement = tw_sigma(a, w.complement, j);
  bool odd = ((j % 2) + 2) % 2 == 1;
  if (w.level == 1) {
    for (auto& [s, m] : w.sum.copies) r.sum.copies[s + j] = m;
  } else {
    r.children = {shift_witness(a, w.children[0], j), shift_witness(a, w.children[1], j)};
    r.gamma = odd ? tw_negate(a, w.gamma) : w.gamma;
  }
  r.iso = w.iso;
  r.inv.v = w.inv.v;
  r.inv.h1 = odd ? tw_negate(a, w.inv.h1) : w.inv.h1;
  r.inv.h2 = odd ? tw_negate(a, w.inv.h2) : w.inv.h2;
  return r;
}

// blocks [0|1|2|3] rearranged to [0|2|1|3]
static std::vector<int> interleave_perm(int n0, int n1, int n2, int n3) {
  std::vector<int> perm;
  perm.reserve(n0 + n1 + n2 + n3);
  for (int i = 0; i < n0; ++i) perm.push_back(i);
  for (int i = 0; i < n2; ++i) perm.push_back(n0 + n1 + i);
  for (int i = 0; i < n1; ++i) perm.push_back(n0 + i);
  for (int i = 0; i < n3; ++i) perm.push_back(n0 + n1 + n2 + i);
  return perm;
}

// copies of two sum objects merged into the canonical shift-ascending order
// (within one shift: first summand's copies first)
static std::vector<int> merge_sum_perm(const SumSpec& sa, const SumSpec& sb, int esize) {
  std::vector<std::pair<int, int>> slots;  // (shift, slot index in sa ++ sb)
  int idx = 0;
  for (auto& [s, m] : sa.copies)
    for (int c = 0; c < m; ++c) slots.push_back({s, idx++});
  for (auto& [s, m] : sb.copies)
    for (int c = 0; c < m; ++c) slots.push_back({s, idx++});
  std::stable_sort(slots.begin(), slots.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<int> perm;
  for (auto& [s, orig] : slots)
    for (int k = 0; k < esize; ++k) perm.push_back(orig * esize + k);
  return perm;
}

GenerationWitness sum_witness(const FiniteDgCategory& a, const TwistedComplex& e,
                              const GenerationWitness& wa0, const GenerationWitness& wb0) {
  GenerationWitness wa = wa0, wb = wb0;
  while (wa.level < wb.level) wa = pad_witness(a, wa);
  while (wb.level < wa.level) wb = pad_witness(a, wb);

  GenerationWitness r;
  r.level = wa.level;
  r.target = tw_direct_sum(a, wa.target, wb.target);
  r.complement = tw_direct_sum(a, wa.complement, wb.complement);

  TwistedComplex xa = tw_direct_sum(a, wa.target, wa.complement);
  TwistedComplex xb = tw_direct_sum(a, wb.target, wb.complement);
  TwistedComplex xcat = tw_direct_sum(a, xa, xb);
  TwistedComplex xnew = tw_direct_sum(a, r.target, r.complement);
  std::vector<int> qperm = interleave_perm(wa.target.size(), wa.complement.size(),
                                           wb.target.size(), wb.complement.size());
  TwMorphism qmor = perm_morphism(a, xcat, xnew, qperm);
  TwMorphism qinv = perm_morphism(a, xnew, xcat, perm_inverse(qperm));

  TwistedComplex sa = comparison_object(a, e, wa);
  TwistedComplex sb = comparison_object(a, e, wb);
  TwistedComplex scat = tw_direct_sum(a, sa, sb);
  TwistedComplex snew;
  std::vector<int> pperm;
  if (wa.level == 1) {
    r.sum = wa.sum;
    for (auto& [s, m] : wb.sum.copies) r.sum.copies[s] += m;
    snew = sum_spec_object(a, e, r.sum);
    pperm = merge_sum_perm(wa.sum, wb.sum, e.size());
  } else {
    r.children = {sum_witness(a, e, wa.children[0], wb.children[0]),
                  sum_witness(a, e, wa.children[1], wb.children[1])};
    const TwistedComplex& aa = wa.children[0].target;
    const TwistedComplex& ab = wb.children[0].target;
    TwistedComplex sba = tw_sigma(a, wa.children[1].target, -1);
    TwistedComplex sbb = tw_sigma(a, wb.children[1].target, -1);
    r.gamma = tw_morphism_direct_sum(a, sba, aa, wa.gamma, sbb, ab, wb.gamma);
    TwistedComplex acat = tw_direct_sum(a, aa, ab);
    TwistedComplex sbcat = tw_direct_sum(a, sba, sbb);
    snew = tw_cone(a, sbcat, acat, r.gamma).cone;
    pperm = interleave_perm(aa.size(), sba.size(), ab.size(), sbb.size());
  }
  TwMorphism pmor = perm_morphism(a, scat, snew, pperm);
  TwMorphism pinv = perm_morphism(a, snew, scat, perm_inverse(pperm));

  TwMorphism ucat = tw_morphism_direct_sum(a, xa, sa, wa.iso, xb, sb, wb.iso);
  TwMorphism vcat = tw_morphism_direct_sum(a, sa, xa, wa.inv.v, sb, xb, wb.inv.v);
  TwMorphism h1cat = tw_morphism_direct_sum(a, sa, sa, wa.inv.h1, sb, sb, wb.inv.h1);
  TwMorphism h2cat = tw_morphism_direct_sum(a, xa, xa, wa.inv.h2, xb, xb, wb.inv.h2);

  r.iso = tw_compose(a, xnew, xcat, snew, qinv, tw_compose(a, xcat, scat, snew, ucat, pmor));
  TwMorphism t1 = tw_compose(a, snew, scat, xcat, pinv, vcat);
  r.inv.v = tw_compose(a, snew, xcat, xnew, t1, qmor);
  TwMorphism t2 = tw_compose(a, snew, scat, scat, pinv, h1cat);
  r.inv.h1 = tw_compose(a, snew, scat, snew, t2, pmor);
  TwMorphism t3 = tw_compose(a, xnew, xcat, xcat, qinv, h2cat);
  r.inv.h2 = tw_compose(a, xnew, xcat, xnew, t3, qmor);
  return r;
}

// ---------------------------------------------------------------------------
// search

namespace {
struct NodeBudget {
  long long left = 0;
  bool exhausted = false;
  bool take() {
    if (left <= 0) {
      exhausted = true;
      return false;
    }
    --left;
    return true;
  }
};
}  // namespace

// A one-entry generator with endomorphisms of total dimension one splits
// every complex built on it into its cohomology: the entries of m form a
// plain cochain complex of multiplicity spaces, and bases of coboundaries,
// representatives and a completion assemble into an explicit projection.
static std::optional<GenerationWitness> exceptional_split(const FiniteDgCategory& a,
                                                          const TwistedComplex& e,
                                                          const TwistedComplex& m) {
  if (e.size() != 1 || !e.q.empty()) return std::nullopt;
  int x0 = e.entries[0].obj;
  int r0 = e.entries[0].shift;
  const CochainComplex& end = a.hom(x0, x0);
  if (end.total_dim() != 1 || end.dim(0) != 1) return std::nullopt;
  for (auto& en : m.entries)
    if (en.obj != x0) return std::nullopt;

  const FieldPtr& F = a.F;
  Scalar idc = a.identity_coords(x0).at(0, 0);
  auto scalar_of = [&](const DgHom& h) {
    return h.coords.rows() == 0 ? F->zero() : F->div(h.coords.at(0, 0), idc);
  };

  // multiplicity complex: degree n collects the entries with shift r0 - n
  std::map<int, std::vector<int>> pos;
  for (int i = 0; i < m.size(); ++i) pos[r0 - m.entries[i].shift].push_back(i);
  std::map<int, int> dims;
  std::map<int, std::map<int, int>> colof;
  for (auto& [n, v] : pos) {
    dims[n] = (int)v.size();
    for (int c = 0; c < (int)v.size(); ++c) colof[n][v[c]] = c;
  }
  std::map<int, Mat> dmat;
  for (auto& [n, v] : pos)
    if (pos.count(n + 1)) dmat[n] = Mat(F, (int)pos[n + 1].size(), (int)v.size());
  for (auto& [key, h] : m.q) {
    Scalar c = scalar_of(h);
    if (c.is_zero()) continue;
    int nj = r0 - m.entries[key.second].shift;  // a nonzero component raises degree
    dmat[nj].at(colof[nj + 1][key.first], colof[nj][key.second]) = c;
  }
  CochainComplex mult = make_complex(F, dims, dmat);

  GenerationWitness w;
  w.level = 1;
  w.target = m;
  w.iso = tw_zero_morphism(0);
  w.inv.v = tw_zero_morphism(0);
  w.inv.h1 = tw_zero_morphism(-1);
  w.inv.h2 = tw_zero_morphism(-1);

  // degreewise: T = [coboundary basis | representatives | completion], the
  // projection is the representative rows of T^{-1}
  std::map<int, Mat> reps, proj;
  for (auto& [n, dim] : dims) {
    Mat dprev = mult.diff(n - 1), dn = mult.diff(n);
    std::vector<int> piv;
    rref(dprev, &piv);
    Mat basis(F, dim, 0);
    for (int p : piv) basis = Mat::hstack(basis, dprev.column(p));
    int b = basis.cols();
    Mat withreps = basis;
    Mat z = kernel_basis(dn);
    for (int c = 0; c < z.cols(); ++c) {
      Mat col = z.column(c);
      if (withreps.cols() > 0 && solve(withreps, col)) continue;
      withreps = Mat::hstack(withreps, col);
    }
    int h = withreps.cols() - b;
    Mat full = withreps;
    for (int c = 0; c < dim && full.cols() < dim; ++c) {
      Mat col(F, dim, 1);
      col.at(c, 0) = F->one();
      if (full.cols() > 0 && solve(full, col)) continue;
      full = Mat::hstack(full, col);
    }
    auto tinv = inverse(full);
    if (!tinv) return std::nullopt;
    if (h > 0) {
      reps[n] = withreps.submatrix(0, b, dim, h);
      proj[n] = tinv->submatrix(b, 0, h, dim);
      w.sum.copies[-n] = h;
    }
  }

  std::map<int, int> base;  // shift -> first slot of its copies in the sum
  {
    int off = 0;
    for (auto& [s, cnt] : w.sum.copies) {
      base[s] = off;
      off += cnt;
    }
  }
  for (auto& [n, p] : proj) {
    const std::vector<int>& v = pos[n];
    for (int c = 0; c < p.rows(); ++c)
      for (int k = 0; k < (int)v.size(); ++k) {
        if (p.at(c, k).is_zero()) continue;
        w.iso.c[{base[-n] + c, v[k]}] = a.scale_hom(p.at(c, k), a.identity(x0));
      }
  }
  for (auto& [n, rm] : reps) {
    const std::vector<int>& v = pos[n];
    for (int k = 0; k < (int)v.size(); ++k)
      for (int c = 0; c < rm.cols(); ++c) {
        if (rm.at(k, c).is_zero()) continue;
        w.inv.v.c[{v[k], base[-n] + c}] = a.scale_hom(rm.at(k, c), a.identity(x0));
      }
  }

  TwistedComplex s_obj = sum_spec_object(a, e, w.sum);
  TwMorphism vu = tw_compose(a, m, s_obj, m, w.iso, w.inv.v);
  TwMorphism lhs = tw_add(a, m, m, vu, tw_negate(a, tw_identity(a, m)));
  auto h2 = tw_solve_null_homotopy(a, m, m, lhs);
  if (!h2) return std::nullopt;
  w.inv.h2 = *h2;
  return w;
}

static bool entry_multiset_eq(const TwistedComplex& x, const TwistedComplex& s) {
  if (x.size() != s.size()) return false;
  std::multiset<std::pair<int, int>> mx, ms;
  for (auto& en : x.entries) mx.insert({en.obj, en.shift});
  for (auto& en : s.entries) ms.insert({en.obj, en.shift});
  return mx == ms;
}

static bool equal_q_components(const FiniteDgCategory& a, const TwistedComplex& x,
                               const std::vector<int>& cx, const TwistedComplex& s,
                               const std::vector<int>& cs) {
  if (cx.size() != cs.size()) return false;
  for (size_t k = 0; k < cx.size(); ++k)
    if (!(x.entries[cx[k]] == s.entries[cs[k]])) return false;
  for (size_t p = 0; p < cx.size(); ++p)
    for (size_t r = p + 1; r < cx.size(); ++r)
      if (!a.equal(tw_q_at(a, x, cx[p], cx[r]), tw_q_at(a, s, cs[p], cs[r]))) return false;
  return true;
}

// strict matching of q-connected components, greedy in component order
static std::optional<std::vector<int>> component_perm(const FiniteDgCategory& a,
                                                      const TwistedComplex& x,
                                                      const TwistedComplex& s) {
  if (x.size() != s.size()) return std::nullopt;
  auto cx = q_components(x);
  auto cs = q_components(s);
  if (cx.size() != cs.size()) return std::nullopt;
  std::vector<bool> used(cs.size(), false);
  std::vector<int> perm(s.size(), -1);
  for (auto& comp : cx) {
    bool hit = false;
    for (size_t t = 0; t < cs.size(); ++t) {
      if (used[t] || !equal_q_components(a, x, comp, s, cs[t])) continue;
      used[t] = true;
      for (size_t k = 0; k < comp.size(); ++k) perm[cs[t][k]] = comp[k];
      hit = true;
      break;
    }
    if (!hit) return std::nullopt;
  }
  return perm;
}

static bool next_combination(std::vector<int>& idx, int n) {
  int k = (int)idx.size();
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - (k - i)) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// candidate coefficients for class combinations: +-1 first, then the
// nonzero coordinates found in the q entries of the generator and the
// target, with their negatives.  After base change the stored twists can
// be non-trivial unit multiples of the chosen hom bases, and only the
// harvested values reach them.
static std::vector<Scalar> coefficient_pool(const FiniteDgCategory& a,
                                            const TwistedComplex& e,
                                            const TwistedComplex& m) {
  std::vector<Scalar> pool;
  auto push = [&](const Scalar& c) {
    for (auto& p : pool)
      if (p == c) return;
    pool.push_back(c);
  };
  push(a.F->one());
  push(a.F->neg(a.F->one()));
  auto harvest = [&](const TwistedComplex& t) {
    for (auto& [ij, u] : t.q)
      for (int i = 0; i < u.coords.rows(); ++i) {
        const Scalar& c = u.coords.at(i, 0);
        if (c.is_zero()) continue;
        push(c);
        push(a.F->neg(c));
      }
  };
  harvest(m);
  harvest(e);
  if (pool.size() > 12) pool.resize(12);
  return pool;
}

// odometer over `sup` coefficient slots; returns false once wrapped around
static bool next_digits(std::vector<int>& digits, int base) {
  for (auto& d : digits) {
    if (++d < base) return true;
    d = 0;
  }
  return false;
}

// candidate maps u: x -> s as coefficient combinations of degree-0
// cohomology classes, support size ascending
static std::optional<std::pair<TwMorphism, TwInvertibility>> combo_iso(
    const FiniteDgCategory& a, const TwistedComplex& x, const TwistedComplex& s,
    const std::vector<Scalar>& pool, const SearchBudget& budget, NodeBudget& nodes) {
  TwHomComplex hc = tw_hom_complex(a, x, s);
  Cohomology h0 = cohomology(hc.complex, 0);
  std::vector<TwMorphism> reps;
  reps.reserve(h0.dim);
  for (int c = 0; c < h0.dim; ++c)
    reps.push_back(hc.unflatten(a, x, s, 0, h0.representatives.column(c)));
  int maxsup = std::min({budget.max_coefficient_support, h0.dim, 16});
  for (int sup = 0; sup <= maxsup; ++sup) {
    std::vector<int> idx(sup);
    for (int i = 0; i < sup; ++i) idx[i] = i;
    bool more = true;
    while (more) {
      std::vector<int> digits(sup, 0);
      bool cmore = true;
      while (cmore) {
        if (!nodes.take()) return std::nullopt;
        TwMorphism u = tw_zero_morphism(0);
        for (int i = 0; i < sup; ++i)
          u = tw_add(a, x, s, u, tw_scale(a, pool[digits[i]], reps[idx[i]]));
        if (auto inv = tw_is_h0_iso(a, x, s, u)) return std::make_pair(u, *inv);
        cmore = next_digits(digits, (int)pool.size());
      }
      more = next_combination(idx, h0.dim);
    }
  }
  return std::nullopt;
}

// count vectors over `options` slots, ordered by total ascending then
// lexicographically
static std::vector<std::vector<int>> bounded_multisets(int options, int max_total) {
  std::vector<std::vector<int>> out;
  if (options == 0) {
    out.push_back({});
    return out;
  }
  std::vector<int> cur(options, 0);
  std::function<void(int, int)> rec = [&](int p, int left) {
    if (p == options - 1) {
      cur[p] = left;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[p] = v;
      rec(p + 1, left - v);
    }
  };
  for (int t = 0; t <= max_total; ++t) rec(0, t);
  return out;
}

namespace {
struct LeafCandidates {
  std::vector<std::pair<SumSpec, TwistedComplex>> sums;
  std::vector<TwistedComplex> complements;  // first entry is the empty complex
};
}  // namespace

static LeafCandidates leaf_candidates(const FiniteDgCategory& a, const TwistedComplex& e,
                                      const SearchBudget& budget) {
  LeafCandidates out;
  int w = budget.shift_window;
  int span = 2 * w + 1;
  for (auto& counts : bounded_multisets(span, budget.max_multiplicity)) {
    SumSpec spec;
    for (int i = 0; i < span; ++i)
      if (counts[i] > 0) spec.copies[i - w] = counts[i];
    out.sums.push_back({spec, sum_spec_object(a, e, spec)});
  }
  std::vector<TwistedComplex> pool;
  for (auto& comp : q_components(e)) pool.push_back(component_object(e, comp));
  int opts = (int)pool.size() * span;
  for (auto& counts : bounded_multisets(opts, budget.max_multiplicity)) {
    TwistedComplex c;
    for (int i = 0; i < opts; ++i)
      for (int k = 0; k < counts[i]; ++k)
        c = tw_direct_sum(a, c, tw_sigma(a, pool[i / span], i % span - w));
    out.complements.push_back(c);
  }
  return out;
}

static std::optional<GenerationWitness> search_level1(const FiniteDgCategory& a,
                                                      const TwistedComplex& e,
                                                      const TwistedComplex& m,
                                                      const SearchBudget& budget,
                                                      NodeBudget& nodes) {
  if (auto w = exceptional_split(a, e, m)) return w;
  LeafCandidates cand = leaf_candidates(a, e, budget);
  std::vector<Scalar> pool = coefficient_pool(a, e, m);
  // structural pass first: strict matching after an entry-multiset filter
  for (auto& [spec, s_obj] : cand.sums) {
    for (auto& extra : cand.complements) {
      TwistedComplex x = tw_direct_sum(a, m, extra);
      if (!entry_multiset_eq(x, s_obj)) continue;
      if (!nodes.take()) return std::nullopt;
      auto perm = component_perm(a, x, s_obj);
      if (!perm) continue;
      GenerationWitness w;
      w.level = 1;
      w.target = m;
      w.sum = spec;
      w.complement = extra;
      w.iso = perm_morphism(a, x, s_obj, *perm);
      w.inv.v = perm_morphism(a, s_obj, x, perm_inverse(*perm));
      w.inv.h1 = tw_zero_morphism(-1);
      w.inv.h2 = tw_zero_morphism(-1);
      return w;
    }
  }
  for (auto& [spec, s_obj] : cand.sums) {
    for (auto& extra : cand.complements) {
      TwistedComplex x = tw_direct_sum(a, m, extra);
      if (auto hit = combo_iso(a, x, s_obj, pool, budget, nodes)) {
        GenerationWitness w;
        w.level = 1;
        w.target = m;
        w.sum = spec;
        w.complement = extra;
        w.iso = hit->first;
        w.inv = hit->second;
        return w;
      }
      if (nodes.exhausted) return std::nullopt;
    }
  }
  return std::nullopt;
}

static GenerationWitness pad_to_level(const FiniteDgCategory& a, GenerationWitness w,
                                       int level) {
  while (w.level < level) w = pad_witness(a, w);
  return w;
}

static std::optional<GenerationWitness> search_higher(const FiniteDgCategory& a,
                                                      const TwistedComplex& e,
                                                      const TwistedComplex& m, int k,
                                                      const SearchBudget& budget,
                                                      NodeBudget& nodes) {
  int w = budget.shift_window;
  int span = 2 * w + 1;
  std::vector<std::vector<std::vector<int>>> by_total(budget.max_multiplicity + 1);
  for (auto& counts : bounded_multisets(span, budget.max_multiplicity)) {
    int t = 0;
    for (int v : counts) t += v;
    by_total[t].push_back(counts);
  }
  auto spec_of = [&](const std::vector<int>& counts) {
    SumSpec s;
    for (int i = 0; i < span; ++i)
      if (counts[i] > 0) s.copies[i - w] = counts[i];
    return s;
  };
  LeafCandidates cand = leaf_candidates(a, e, budget);
  std::vector<Scalar> pool = coefficient_pool(a, e, m);

  // mode 0: strict component matching of m (⊕ small complement) with the
  // cone; mode 1: bounded cohomology-class combinations, no complement
  for (int mode = 0; mode < 2; ++mode) {
    for (int total = 0; total <= 2 * budget.max_multiplicity; ++total) {
      for (int ta = std::max(0, total - budget.max_multiplicity);
           ta <= std::min(total, budget.max_multiplicity); ++ta) {
        for (auto& ac : by_total[ta]) {
          for (auto& bc : by_total[total - ta]) {
            SumSpec aspec = spec_of(ac), bspec = spec_of(bc);
            TwistedComplex hd = sum_spec_object(a, e, aspec);
            TwistedComplex tl = sum_spec_object(a, e, bspec);
            TwistedComplex sb = tw_sigma(a, tl, -1);
            TwHomComplex hcg = tw_hom_complex(a, sb, hd);
            Cohomology h0g = cohomology(hcg.complex, 0);
            std::vector<TwMorphism> reps;
            for (int c = 0; c < h0g.dim; ++c)
              reps.push_back(hcg.unflatten(a, sb, hd, 0, h0g.representatives.column(c)));
            int maxsup = std::min({budget.max_coefficient_support, h0g.dim, 16});
            for (int sup = 0; sup <= maxsup; ++sup) {
              std::vector<int> idx(sup);
              for (int i = 0; i < sup; ++i) idx[i] = i;
              bool more = true;
              while (more) {
                std::vector<int> digits(sup, 0);
                bool cmore = true;
                while (cmore) {
                  if (!nodes.take()) return std::nullopt;
                  TwMorphism gamma = tw_zero_morphism(0);
                  for (int i = 0; i < sup; ++i)
                    gamma = tw_add(a, sb, hd, gamma,
                                   tw_scale(a, pool[digits[i]], reps[idx[i]]));
                  TwistedComplex cone = tw_cone(a, sb, hd, gamma).cone;
                  TwMorphism iso;
                  TwInvertibility inv;
                  TwistedComplex extra;
                  bool found = false;
                  if (mode == 0) {
                    for (auto& cpl : cand.complements) {
                      TwistedComplex x = tw_direct_sum(a, m, cpl);
                      if (!entry_multiset_eq(x, cone)) continue;
                      if (!nodes.take()) return std::nullopt;
                      auto perm = component_perm(a, x, cone);
                      if (!perm) continue;
                      iso = perm_morphism(a, x, cone, *perm);
                      inv.v = perm_morphism(a, cone, x, perm_inverse(*perm));
                      inv.h1 = tw_zero_morphism(-1);
                      inv.h2 = tw_zero_morphism(-1);
                      extra = cpl;
                      found = true;
                      break;
                    }
                  } else {
                    if (auto hit = combo_iso(a, m, cone, pool, budget, nodes)) {
                      iso = hit->first;
                      inv = hit->second;
                      found = true;
                    }
                    if (!found && nodes.exhausted) return std::nullopt;
                  }
                  if (found) {
                    GenerationWitness out;
                    out.level = k;
                    out.target = m;
                    out.children = {pad_to_level(a, identity_leaf(a, e, aspec), k - 1),
                                    identity_leaf(a, e, bspec)};
                    out.gamma = gamma;
                    out.complement = extra;
                    out.iso = iso;
                    out.inv = inv;
                    return out;
                  }
                  cmore = next_digits(digits, (int)pool.size());
                }
                more = next_combination(idx, h0g.dim);
              }
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

SearchOutcome search_generation_ex(const FiniteDgCategory& a, const TwistedComplex& e,
                                   const TwistedComplex& m, int k,
                                   const SearchBudget& budget) {
  if (k < 1) throw Error(ErrorCode::input_error, "generation level must be at least 1");
  NodeBudget nodes{budget.node_limit};
  SearchOutcome out;
  out.witness = k == 1 ? search_level1(a, e, m, budget, nodes)
                       : search_higher(a, e, m, k, budget, nodes);
  out.budget_exhausted = !out.witness && nodes.exhausted;
  return out;
}

std::optional<GenerationWitness> search_generation(const FiniteDgCategory& a,
                                                   const TwistedComplex& e,
                                                   const TwistedComplex& m, int k,
                                                   const SearchBudget& budget) {
  return search_generation_ex(a, e, m, k, budget).witness;
}

// ---------------------------------------------------------------------------
// transport along the forgetful functor

namespace {
struct FlattenContext {
  const HullContext* h = nullptr;
  int d = 1;
  std::vector<int> amb_of;  // structure index -> ambient object, -1 outside p*
};
}  // namespace

static FlattenContext flatten_context(const HullContext& h) {
  FlattenContext fc;
  fc.h = &h;
  fc.d = bc_degree(h.bcc.ambient.F, h.bcc.L);
  fc.amb_of.assign(h.bcc.structures.size(), -1);
  for (int obj = 0; obj < (int)h.pstar_of_object.size(); ++obj)
    fc.amb_of[h.pstar_of_object[obj]] = obj;
  return fc;
}

static int underlying_size(const FlattenContext& fc, int structure) {
  if (structure < 0 || structure >= (int)fc.amb_of.size() || fc.amb_of[structure] < 0)
    throw Error(ErrorCode::cocycle_failure,
                "hull node outside the image of p*; no underlying object over the base");
  return fc.h->bcc.structures[structure].x.size();
}

static TwistedComplex flatten_object(const FlattenContext& fc, const TwistedComplex& t) {
  const HullContext& h = *fc.h;
  TwistedComplex out;
  std::vector<int> base(t.size(), 0);
  for (int i = 0; i < t.size(); ++i) {
    underlying_size(fc, t.entries[i].obj);
    base[i] = out.size();
    const TwistedComplex& under = h.bcc.structures[t.entries[i].obj].x;
    for (auto& en : under.entries)
      out.entries.push_back({en.obj, en.shift + t.entries[i].shift});
  }
  for (auto& [key, hom] : t.q) {
    if (hom.is_zero()) continue;
    TwMorphism amb =
        h.bcc.to_ambient(t.entries[key.second].obj, t.entries[key.first].obj, hom);
    for (auto& [ck, comp] : amb.c) {
      if (comp.is_zero()) continue;
      out.q[{base[key.first] + ck.first, base[key.second] + ck.second}] = comp;
    }
  }
  return out;
}

static TwMorphism flatten_hom(const FlattenContext& fc, const TwistedComplex& s,
                              const TwistedComplex& t, const TwMorphism& u) {
  const HullContext& h = *fc.h;
  std::vector<int> sbase(s.size(), 0), tbase(t.size(), 0);
  int off = 0;
  for (int i = 0; i < s.size(); ++i) {
    sbase[i] = off;
    off += underlying_size(fc, s.entries[i].obj);
  }
  off = 0;
  for (int i = 0; i < t.size(); ++i) {
    tbase[i] = off;
    off += underlying_size(fc, t.entries[i].obj);
  }
  TwMorphism out;
  out.degree = u.degree;
  for (auto& [key, hom] : u.c) {
    if (hom.is_zero()) continue;
    TwMorphism amb =
        h.bcc.to_ambient(s.entries[key.second].obj, t.entries[key.first].obj, hom);
    for (auto& [ck, comp] : amb.c) {
      if (comp.is_zero()) continue;
      out.c[{tbase[key.first] + ck.first, sbase[key.second] + ck.second}] = comp;
    }
  }
  return out;
}

TwistedComplex hull_flatten_object(const HullContext& h, const TwistedComplex& t) {
  return flatten_object(flatten_context(h), t);
}

TwMorphism hull_flatten_hom(const HullContext& h, const TwistedComplex& s,
                            const TwistedComplex& t, const TwMorphism& u) {
  return flatten_hom(flatten_context(h), s, t, u);
}

// flatten(⊕_s sigma^s(p*(e))^{m_s}) rearranged into ⊕_s sigma^s(e)^{m_s d}:
// the (copy j, base index c) slice of a flattened hull copy becomes plain
// copy j*d + c.
static std::vector<int> leaf_perm(const FlattenContext& fc, const TwistedComplex& ek,
                                  const SumSpec& spec) {
  int d = fc.d;
  int ne = ek.size();
  std::vector<int> perm;
  int flat_base = 0;
  for (auto& [s, m] : spec.copies) {
    for (int m2 = 0; m2 < m * d; ++m2) {
      int j = m2 / d, c = m2 % d;
      for (int t = 0; t < ne; ++t) perm.push_back(flat_base + j * ne * d + t * d + c);
    }
    flat_base += m * ne * d;
  }
  return perm;
}

static GenerationWitness transport_node(const FlattenContext& fc, const TwistedComplex& ek,
                                        const TwistedComplex& el, const GenerationWitness& w) {
  const FiniteDgCategory& amb = fc.h->bcc.ambient;
  const FiniteDgCategory& hull = fc.h->bcc.cat;
  GenerationWitness r;
  r.level = w.level;
  r.target = flatten_object(fc, w.target);
  r.complement = flatten_object(fc, w.complement);
  TwistedComplex xl = tw_direct_sum(hull, w.target, w.complement);
  TwistedComplex xk = tw_direct_sum(amb, r.target, r.complement);
  if (w.level == 1) {
    for (auto& [s, m] : w.sum.copies) r.sum.copies[s] = m * fc.d;
    TwistedComplex sl = sum_spec_object(hull, el, w.sum);
    TwistedComplex flat_sl = flatten_object(fc, sl);
    TwistedComplex sk = sum_spec_object(amb, ek, r.sum);
    std::vector<int> perm = leaf_perm(fc, ek, w.sum);
    TwMorphism p = perm_morphism(amb, flat_sl, sk, perm);
    TwMorphism pinv = perm_morphism(amb, sk, flat_sl, perm_inverse(perm));
    TwMorphism fu = flatten_hom(fc, xl, sl, w.iso);
    r.iso = tw_compose(amb, xk, flat_sl, sk, fu, p);
    TwMorphism fv = flatten_hom(fc, sl, xl, w.inv.v);
    r.inv.v = tw_compose(amb, sk, flat_sl, xk, pinv, fv);
    TwMorphism fh1 = flatten_hom(fc, sl, sl, w.inv.h1);
    TwMorphism t1 = tw_compose(amb, sk, flat_sl, flat_sl, pinv, fh1);
    r.inv.h1 = tw_compose(amb, sk, flat_sl, sk, t1, p);
    r.inv.h2 = flatten_hom(fc, xl, xl, w.inv.h2);
  } else {
    r.children = {transport_node(fc, ek, el, w.children[0]),
                  transport_node(fc, ek, el, w.children[1])};
    TwistedComplex sbl = tw_sigma(hull, w.children[1].target, -1);
    r.gamma = flatten_hom(fc, sbl, w.children[0].target, w.gamma);
    TwistedComplex sl = tw_cone(hull, sbl, w.children[0].target, w.gamma).cone;
    r.iso = flatten_hom(fc, xl, sl, w.iso);
    r.inv.v = flatten_hom(fc, sl, xl, w.inv.v);
    r.inv.h1 = flatten_hom(fc, sl, sl, w.inv.h1);
    r.inv.h2 = flatten_hom(fc, xl, xl, w.inv.h2);
  }
  return r;
}

GenerationWitness galois_transport_witness(const HullContext& h, const AutomorphismGroup& g,
                                           const TwistedComplex& e, const TwistedComplex& m,
                                           const GenerationWitness& w) {
  const FiniteDgCategory& amb = h.bcc.ambient;
  FlattenContext fc = flatten_context(h);
  if (fc.d > 1) {
    if (!g.field->same_field(*h.bcc.L))
      throw Error(ErrorCode::input_error,
                  "automorphism group does not act on the extension field");
    if (!g.is_galois)
      throw Error(ErrorCode::not_galois, "witness transport needs a Galois extension");
  }
  TwistedComplex el = hull_p_star(h, e);
  TwistedComplex pm = hull_p_star(h, m);
  if (!tw_equal_objects(h.bcc.cat, pm, w.target))
    throw Error(ErrorCode::input_error,
                "witness target is not the scalar extension of the given object");

  GenerationWitness r = transport_node(fc, e, el, w);

  // root target in copy-major layout m ⊕ ... ⊕ m
  TwistedComplex md;
  for (int c = 0; c < fc.d; ++c) md = tw_direct_sum(amb, md, m);
  std::vector<int> rp;
  for (int c = 0; c < fc.d; ++c)
    for (int t = 0; t < m.size(); ++t) rp.push_back(t * fc.d + c);
  TwMorphism rmor = perm_morphism(amb, r.target, md, rp);
  TwMorphism rinv = perm_morphism(amb, md, r.target, perm_inverse(rp));
  TwistedComplex xold = tw_direct_sum(amb, r.target, r.complement);
  TwistedComplex xnew = tw_direct_sum(amb, md, r.complement);
  TwMorphism idc = tw_identity(amb, r.complement);
  TwMorphism fwd = tw_morphism_direct_sum(amb, md, r.target, rinv, r.complement,
                                          r.complement, idc);  // xnew -> xold
  TwMorphism bwd = tw_morphism_direct_sum(amb, r.target, md, rmor, r.complement,
                                          r.complement, idc);  // xold -> xnew
  TwistedComplex sk = comparison_object(amb, e, r);
  r.iso = tw_compose(amb, xnew, xold, sk, fwd, r.iso);
  r.inv.v = tw_compose(amb, sk, xold, xnew, r.inv.v, bwd);
  TwMorphism t1 = tw_compose(amb, xnew, xold, xold, fwd, r.inv.h2);
  r.inv.h2 = tw_compose(amb, xnew, xold, xnew, t1, bwd);
  r.target = md;
  return r;
}

// ---------------------------------------------------------------------------
// dimension bound

std::optional<DimensionBound> dimension_upper_bound(const FiniteDgCategory& a,
                                                    const TwistedComplex& e,
                                                    const std::vector<TwistedComplex>& objects,
                                                    const SearchBudget& budget) {
  std::vector<std::optional<GenerationWitness>> found(objects.size());
  for (int k = 1; k <= budget.node_limit; ++k) {
    bool all = true;
    for (size_t i = 0; i < objects.size(); ++i) {
      if (found[i]) continue;
      if (auto w = search_generation(a, e, objects[i], k, budget))
        found[i] = w;
      else
        all = false;
    }
    if (all) {
      DimensionBound out;
      out.k = k;
      for (auto& w : found) out.witnesses.push_back(pad_to_level(a, *w, k));
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace scalex
