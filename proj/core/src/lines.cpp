#include "cubiq/lines.hpp"

#include "cubiq/enumerate.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cubiq {

namespace {

// ---- K-vector helpers -------------------------------------------------------

FieldElem fe_add(const FieldSpec& F, const FieldElem& x, const FieldElem& y) {
  (void)F;
  return FieldElem(x.num * y.den + y.num * x.den, x.den * y.den);
}

FieldElem fe_mul(const FieldSpec& F, const FieldElem& x, const FieldElem& y) {
  return FieldElem(F.mul(x.num, y.num), x.den * y.den);
}

FieldElem fe_div(const FieldSpec& F, const FieldElem& x, const FieldElem& y) {
  if (y.is_zero()) throw std::invalid_argument("division by zero in K");
  // 1/(n/d) = d conj(n) / Norm(n)
  AlgInt num = F.mul(x.num, F.conj(y.num));
  return FieldElem(num * y.den, x.den * F.norm(y.num));
}

FieldElem fe_neg(const FieldElem& x) { return FieldElem(-x.num, x.den); }

using KVec = std::vector<FieldElem>;

KVec to_kvec(const std::vector<AlgInt>& v) {
  KVec out;
  out.reserve(v.size());
  for (const auto& c : v) out.emplace_back(c, Int(1));
  return out;
}

// Gaussian elimination over K; returns the rank, optionally keeping the
// reduced rows for back-substitution.
int k_rank(const FieldSpec& F, std::vector<KVec> rows) {
  std::size_t cols = rows.empty() ? 0 : rows[0].size();
  int rank_out = 0;
  std::size_t lead = 0;
  for (std::size_t r = 0; r < rows.size() && lead < cols; ++lead) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][lead].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    FieldElem inv = fe_div(F, FieldElem(AlgInt::one(), 1), rows[r][lead]);
    for (std::size_t c = lead; c < cols; ++c) rows[r][c] = fe_mul(F, rows[r][c], inv);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][lead].is_zero()) continue;
      FieldElem f = rows[i][lead];
      for (std::size_t c = lead; c < cols; ++c)
        rows[i][c] = fe_add(F, rows[i][c], fe_neg(fe_mul(F, f, rows[r][c])));
    }
    ++r;
    ++rank_out;
  }
  return rank_out;
}

// integral representative of a K-vector: clear denominators, divide content
std::vector<AlgInt> integralize(const KVec& v) {
  Int den = 1;
  for (const auto& c : v) den = boost::multiprecision::lcm(den, c.den);
  std::vector<AlgInt> out;
  Int content = 0;
  for (const auto& c : v) {
    AlgInt z = c.num * (den / c.den);
    out.push_back(z);
    content = boost::multiprecision::gcd(content, boost::multiprecision::gcd(abs_int(z.a), abs_int(z.b)));
  }
  if (content > 1)
    for (auto& z : out) { z.a /= content; z.b /= content; }
  return out;
}

std::vector<AlgInt> conj_vec(const FieldSpec& F, const std::vector<AlgInt>& v) {
  std::vector<AlgInt> out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(F.conj(c));
  return out;
}

bool vec_is_rational(const std::vector<AlgInt>& v) {
  for (const auto& c : v)
    if (c.b != 0) return false;
  return true;
}

// rational vectors spanning the same conjugation-invariant space: for each
// basis vector u take u + u* and (u - u*)/(2 w2 - s1)
std::vector<std::vector<AlgInt>> rational_spanning_set(const FieldSpec& F,
                                                       const std::vector<std::vector<AlgInt>>& basis) {
  std::vector<std::vector<AlgInt>> cands;
  for (const auto& u : basis) {
    std::vector<AlgInt> plus(u.size()), imag(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      AlgInt c = u[i], cc = F.conj(u[i]);
      plus[i] = c + cc;                  // 2a + s1 b, rational
      imag[i] = AlgInt(c.b, 0);          // (c - conj c)/(2 w2 - s1) = b
    }
    cands.push_back(plus);
    cands.push_back(imag);
  }
  return cands;
}

// greedy extraction of an independent subset over K of the given size
std::vector<std::vector<AlgInt>> independent_subset(const FieldSpec& F,
                                                    const std::vector<std::vector<AlgInt>>& cands,
                                                    int want) {
  std::vector<std::vector<AlgInt>> picked;
  std::vector<KVec> rows;
  for (const auto& v : cands) {
    bool zero = true;
    for (const auto& c : v)
      if (!c.is_zero()) { zero = false; break; }
    if (zero) continue;
    rows.push_back(to_kvec(v));
    if (k_rank(F, rows) == int(picked.size()) + 1) picked.push_back(v);
    else rows.pop_back();
    if (int(picked.size()) == want) break;
  }
  return picked;
}

// ---- small multivariate polynomials over O -----------------------------------

using Exp = std::vector<int>;

struct Poly {
  const FieldSpec* F;
  std::map<Exp, AlgInt> terms;

  explicit Poly(const FieldSpec& f) : F(&f) {}
  void add(const Exp& e, const AlgInt& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms.emplace(e, c);
    if (!fresh) {
      it->second = it->second + c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }
  bool is_zero() const { return terms.empty(); }
};

Poly poly_mul(const Poly& x, const Poly& y) {
  Poly out(*x.F);
  for (const auto& [ex, cx] : x.terms)
    for (const auto& [ey, cy] : y.terms) {
      Exp e(ex.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ex[i] + ey[i];
      out.add(e, x.F->mul(cx, cy));
    }
  return out;
}

// C composed with the linear substitution x = sum_j y_j basis[j]
Poly compose(const CubicForm& C, const std::vector<std::vector<AlgInt>>& basis) {
  int nv = int(basis.size());
  Poly out(C.field);
  for (const auto& [t, a] : C.monomials) {
    // product of the three linear forms in y for variables t[0], t[1], t[2]
    Poly prod(C.field);
    prod.add(Exp(std::size_t(nv), 0), a);
    for (int pos = 0; pos < 3; ++pos) {
      Poly lin(C.field);
      for (int j = 0; j < nv; ++j) {
        const AlgInt& coef = basis[std::size_t(j)][std::size_t(t[std::size_t(pos)] - 1)];
        if (coef.is_zero()) continue;
        Exp e(std::size_t(nv), 0);
        e[std::size_t(j)] = 1;
        lin.add(e, coef);
      }
      prod = poly_mul(prod, lin);
    }
    for (const auto& [e, c] : prod.terms) out.add(e, c);
  }
  return out;
}

// divide by the variable var: fails (returns false) if some term lacks it
bool divide_by_variable(Poly& p, int var) {
  for (const auto& [e, c] : p.terms)
    if (e[std::size_t(var)] == 0) return false;
  std::map<Exp, AlgInt> next;
  for (const auto& [e, c] : p.terms) {
    Exp e2 = e;
    --e2[std::size_t(var)];
    next.emplace(std::move(e2), c);
  }
  p.terms = std::move(next);
  return true;
}

}  // namespace

PencilExpansion expand_pencil(const CubicForm& C, const std::vector<AlgInt>& v,
                              const std::vector<std::vector<AlgInt>>& w) {
  int m = int(w.size());
  std::vector<std::vector<AlgInt>> basis;
  basis.push_back(v);
  for (const auto& wi : w) basis.push_back(wi);
  Poly p = compose(C, basis);  // variables: y0 (for v), y1..ym (for t_i)

  PencilExpansion out;
  out.quad.assign(std::size_t(m), AlgInt());
  for (const auto& [e, c] : p.terms) {
    // record the full t-polynomial (t-exponents only; y0 degree is implied
    // by homogeneity)
    Exp te(e.begin() + 1, e.end());
    auto [it, fresh] = out.full.emplace(te, c);
    if (!fresh) it->second = it->second + c;

    int d0 = e[0];
    if (d0 == 3) out.c0 = c;
    else if (d0 == 2) {
      for (int i = 0; i < m; ++i)
        if (e[std::size_t(i + 1)] == 1) out.quad[std::size_t(i)] = c;
    } else if (d0 == 1) {
      int fi = -1, fj = -1;
      for (int i = 0; i < m; ++i) {
        if (e[std::size_t(i + 1)] == 2) { fi = fj = i; }
        if (e[std::size_t(i + 1)] == 1) (fi < 0 ? fi : fj) = i;
      }
      out.lin[{std::min(fi, fj) + 1, std::max(fi, fj) + 1}] = c;
    } else {
      out.tail[te] = c;
    }
  }
  return out;
}

std::optional<LinearSpace> find_line_bounded(const CubicForm& C, std::int64_t B,
                                             const Budget& budget) {
  for (const auto& [t, a] : C.monomials)
    if (a.b != 0) throw std::invalid_argument("find_line_bounded: form must be rational");
  const int s = C.s;
  // candidate rational points of height <= B, by shells then lexicographic
  std::vector<std::vector<Int>> pts;
  {
    Odometer od;
    for (int i = 0; i < s; ++i) od.ranges.push_back({-B, B});
    budget.charge(od.count() * od.count());
    std::vector<std::vector<Int>> all;
    od.for_each([&](const std::vector<std::int64_t>& cur) {
      std::vector<Int> v(cur.begin(), cur.end());
      bool zero = true;
      Int h = 0;
      for (const auto& c : v) {
        if (c != 0) zero = false;
        h = std::max(h, abs_int(c));
      }
      if (!zero) all.push_back(v);
    });
    std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
      Int hx = 0, hy = 0;
      for (const auto& c : x) hx = std::max(hx, abs_int(c));
      for (const auto& c : y) hy = std::max(hy, abs_int(c));
      return hx < hy;
    });
    pts = std::move(all);
  }
  auto to_alg = [&](const std::vector<Int>& v) {
    std::vector<AlgInt> out;
    for (const auto& c : v) out.emplace_back(c, Int(0));
    return out;
  };
  auto independent = [&](const std::vector<Int>& x, const std::vector<Int>& y) {
    for (int i = 0; i < s; ++i)
      for (int j = i + 1; j < s; ++j)
        if (x[std::size_t(i)] * y[std::size_t(j)] != x[std::size_t(j)] * y[std::size_t(i)])
          return true;
    return false;
  };
  for (const auto& v : pts) {
    std::vector<AlgInt> va = to_alg(v);
    if (!C.eval(va).is_zero()) continue;
    for (const auto& w : pts) {
      std::vector<AlgInt> wa = to_alg(w);
      if (!C.eval(wa).is_zero()) continue;
      if (!independent(v, w)) continue;
      PencilExpansion pe = expand_pencil(C, va, {wa});
      bool ok = pe.quad[0].is_zero();
      if (ok)
        for (const auto& [ij, c] : pe.lin) ok = ok && c.is_zero();
      if (!ok) continue;
      LinearSpace line;
      line.dim = 1;
      line.basis = {va, wa};
      return line;
    }
  }
  return std::nullopt;
}

LinearSpace conjugate_descent(const CubicForm& C, const LinearSpace& V) {
  const FieldSpec& F = C.field;
  for (const auto& [t, a] : C.monomials)
    if (a.b != 0) throw std::invalid_argument("conjugate_descent: form must be rational");
  const int m = V.dim;
  if (int(V.basis.size()) != m + 1)
    throw std::invalid_argument("conjugate_descent: basis size must be dim + 1");

  // rational space: nothing to do
  if (V.is_rational()) return V;
  {
    // V may still be conjugation-invariant with a non-rational basis
    std::vector<KVec> rows;
    for (const auto& u : V.basis) rows.push_back(to_kvec(u));
    int rk = k_rank(F, rows);
    if (rk != m + 1) throw std::invalid_argument("conjugate_descent: basis not independent");
    std::vector<KVec> both = rows;
    for (const auto& u : V.basis) both.push_back(to_kvec(conj_vec(F, u)));
    if (k_rank(F, both) == m + 1) {
      // conjugation-invariant: extract a rational basis directly
      LinearSpace out;
      out.dim = m;
      out.basis = independent_subset(F, rational_spanning_set(F, V.basis), m + 1);
      if (int(out.basis.size()) != m + 1)
        throw std::logic_error("conjugate_descent: rational basis extraction failed");
      return out;
    }
  }

  // W = span(V, V*) must have dimension m + 2
  std::vector<std::vector<AlgInt>> vb = V.basis;
  std::vector<std::vector<AlgInt>> vbc;
  for (const auto& u : vb) vbc.push_back(conj_vec(F, u));
  {
    std::vector<KVec> all;
    for (const auto& u : vb) all.push_back(to_kvec(u));
    for (const auto& u : vbc) all.push_back(to_kvec(u));
    if (k_rank(F, all) != m + 2)
      throw std::invalid_argument("conjugate_descent: span(V, V*) does not have dim m+2");
  }

  // shared rational subspace V intersect V* has dimension m; find it by
  // solving sum c_i v_i = sum c'_i v*_i over K
  std::vector<std::vector<AlgInt>> shared;
  {
    // kernel of [vb | -vbc] acting on coefficient space, over K
    int s = C.s;
    int n = 2 * (m + 1);
    // build the matrix with columns = basis vectors
    std::vector<KVec> rows(static_cast<std::size_t>(s), KVec(static_cast<std::size_t>(n)));
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j <= m; ++j) {
        rows[std::size_t(i)][std::size_t(j)] = FieldElem(vb[std::size_t(j)][std::size_t(i)], 1);
        rows[std::size_t(i)][std::size_t(m + 1 + j)] =
            FieldElem(-vbc[std::size_t(j)][std::size_t(i)], 1);
      }
    }
    // elimination with column bookkeeping: find the nullspace over K
    // (small sizes; direct reduced-row-echelon approach)
    std::vector<KVec> R = rows;
    std::vector<int> pivot_col;
    std::size_t r = 0;
    for (int c = 0; c < n && r < R.size(); ++c) {
      std::size_t piv = r;
      while (piv < R.size() && R[piv][std::size_t(c)].is_zero()) ++piv;
      if (piv == R.size()) continue;
      std::swap(R[r], R[piv]);
      FieldElem inv = fe_div(F, FieldElem(AlgInt::one(), 1), R[r][std::size_t(c)]);
      for (int cc = 0; cc < n; ++cc) R[r][std::size_t(cc)] = fe_mul(F, R[r][std::size_t(cc)], inv);
      for (std::size_t i = 0; i < R.size(); ++i) {
        if (i == r || R[i][std::size_t(c)].is_zero()) continue;
        FieldElem f = R[i][std::size_t(c)];
        for (int cc = 0; cc < n; ++cc)
          R[i][std::size_t(cc)] = fe_add(F, R[i][std::size_t(cc)], fe_neg(fe_mul(F, f, R[r][std::size_t(cc)])));
      }
      pivot_col.push_back(c);
      ++r;
    }
    // free columns give nullspace vectors
    std::vector<bool> is_pivot(std::size_t(n), false);
    for (int c : pivot_col) is_pivot[std::size_t(c)] = true;
    for (int free = 0; free < n; ++free) {
      if (is_pivot[std::size_t(free)]) continue;
      KVec coef(static_cast<std::size_t>(n), FieldElem());
      coef[std::size_t(free)] = FieldElem(AlgInt::one(), 1);
      for (std::size_t pr = 0; pr < pivot_col.size(); ++pr) {
        // pivot var = -R[pr][free]
        coef[std::size_t(pivot_col[pr])] = fe_neg(R[pr][std::size_t(free)]);
      }
      // intersection vector = sum_j coef_j vb_j
      KVec vec(static_cast<std::size_t>(s), FieldElem());
      for (int j = 0; j <= m; ++j)
        for (int i = 0; i < s; ++i)
          vec[std::size_t(i)] = fe_add(F, vec[std::size_t(i)],
                                       fe_mul(F, coef[std::size_t(j)],
                                              FieldElem(vb[std::size_t(j)][std::size_t(i)], 1)));
      bool zero = true;
      for (const auto& cc : vec)
        if (!cc.is_zero()) { zero = false; break; }
      if (!zero) shared.push_back(integralize(vec));
    }
    shared = independent_subset(F, shared, m);
    if (int(shared.size()) != m)
      throw std::invalid_argument("conjugate_descent: V and V* do not share an m-dim subspace");
  }
  // the shared subspace is conjugation invariant; rationalize its basis
  shared = independent_subset(F, rational_spanning_set(F, shared), m);

  // pick v in V outside the shared subspace
  std::vector<AlgInt> vpick;
  for (const auto& u : vb) {
    std::vector<KVec> rows;
    for (const auto& sh : shared) rows.push_back(to_kvec(sh));
    rows.push_back(to_kvec(u));
    if (k_rank(F, rows) == m + 1) { vpick = u; break; }
  }
  if (vpick.empty()) throw std::logic_error("conjugate_descent: no spanning vector found");

  // W-coordinates: y0 -> v, y1 -> v*, y2.. -> shared rational basis
  std::vector<std::vector<AlgInt>> wbasis;
  wbasis.push_back(vpick);
  wbasis.push_back(conj_vec(F, vpick));
  for (const auto& sh : shared) wbasis.push_back(sh);

  Poly cw = compose(C, wbasis);
  if (cw.is_zero()) {
    // C vanishes on all of W: any rational m-subspace of W works
    LinearSpace out;
    out.dim = m;
    out.degenerate_flag = true;
    auto cands = rational_spanning_set(F, wbasis);
    out.basis = independent_subset(F, cands, m + 1);
    if (int(out.basis.size()) != m + 1)
      throw std::logic_error("conjugate_descent: degenerate branch has no rational subspace");
    return out;
  }

  // C|_W must be divisible by y1 (C vanishes on V = {y1 = 0}) and then by
  // y0 (C vanishes on V* = {y0 = 0}); nonzero remainders mean the input
  // was not actually on the hypersurface
  Poly q = cw;
  if (!divide_by_variable(q, 1))
    throw std::invalid_argument("conjugate_descent: C does not vanish on V");
  if (!divide_by_variable(q, 0))
    throw std::invalid_argument("conjugate_descent: C does not vanish on V*");
  // q is now a linear form g in the W-coordinates
  for (const auto& [e, c] : q.terms) {
    int deg = 0;
    for (int d : e) deg += d;
    if (deg != 1) throw std::logic_error("conjugate_descent: third factor is not linear");
  }
  // kernel of g inside W: m+1 independent solutions
  KVec g(static_cast<std::size_t>(m + 2), FieldElem());
  for (const auto& [e, c] : q.terms)
    for (int j = 0; j < m + 2; ++j)
      if (e[std::size_t(j)] == 1) g[std::size_t(j)] = FieldElem(c, 1);
  std::vector<std::vector<AlgInt>> kernel_vecs;
  {
    int pivot = -1;
    for (int j = 0; j < m + 2; ++j)
      if (!g[std::size_t(j)].is_zero()) { pivot = j; break; }
    if (pivot < 0) throw std::logic_error("conjugate_descent: zero linear factor");
    for (int j = 0; j < m + 2; ++j) {
      if (j == pivot) continue;
      // vector e_j - (g_j / g_pivot) e_pivot in W-coordinates
      KVec coef(static_cast<std::size_t>(m + 2), FieldElem());
      coef[std::size_t(j)] = FieldElem(AlgInt::one(), 1);
      coef[std::size_t(pivot)] = fe_neg(fe_div(F, g[std::size_t(j)], g[std::size_t(pivot)]));
      KVec amb(static_cast<std::size_t>(C.s), FieldElem());
      for (int t = 0; t < m + 2; ++t)
        for (int i = 0; i < C.s; ++i)
          amb[std::size_t(i)] = fe_add(F, amb[std::size_t(i)],
                                       fe_mul(F, coef[std::size_t(t)],
                                              FieldElem(wbasis[std::size_t(t)][std::size_t(i)], 1)));
      kernel_vecs.push_back(integralize(amb));
    }
  }
  // rationalize; the kernel is conjugation-invariant when g is (up to scale)
  auto rational_basis = independent_subset(F, rational_spanning_set(F, kernel_vecs), m + 1);
  if (int(rational_basis.size()) != m + 1)
    throw std::invalid_argument(
        "conjugate_descent: third component is not conjugation-invariant");
  LinearSpace out;
  out.dim = m;
  out.basis = rational_basis;
  // exact vanishing of C on the output
  Poly check = compose(C, out.basis);
  if (!check.is_zero())
    throw std::logic_error("conjugate_descent: C does not vanish on the output space");
  return out;
}

NormalizedLine normalize_line(const CubicForm& C, const std::vector<Int>& a,
                              const std::vector<Int>& b) {
  const int s = C.s;
  if (int(a.size()) != s || int(b.size()) != s)
    throw std::invalid_argument("normalize_line: dimension mismatch");
  // the input must be a genuine line on C
  {
    std::vector<AlgInt> va, vb;
    for (const auto& c : a) va.emplace_back(c, Int(0));
    for (const auto& c : b) vb.emplace_back(c, Int(0));
    bool indep = false;
    for (int i = 0; i < s && !indep; ++i)
      for (int j = i + 1; j < s && !indep; ++j)
        indep = a[std::size_t(i)] * b[std::size_t(j)] != a[std::size_t(j)] * b[std::size_t(i)];
    if (!indep) throw std::invalid_argument("normalize_line: a and b are dependent");
    PencilExpansion pe = expand_pencil(C, va, {vb});
    bool ok = pe.c0.is_zero() && pe.quad[0].is_zero();
    for (const auto& [ij, c] : pe.lin) ok = ok && c.is_zero();
    for (const auto& [e, c] : pe.tail) ok = ok && c.is_zero();
    if (!ok) throw std::invalid_argument("normalize_line: C(a t + b u) is not identically 0");
  }

  NormalizedLine out;
  out.degenerate.assign(std::size_t(s), false);
  std::vector<Int> aw = a, bw = b;
  for (int i = 0; i < s; ++i)
    if (a[std::size_t(i)] == 0 && b[std::size_t(i)] == 0) out.degenerate[std::size_t(i)] = true;

  // make every effective a_i nonzero by the basis change a <- a + k b
  bool need_shift = false;
  for (int i = 0; i < s; ++i)
    if (!out.degenerate[std::size_t(i)] && aw[std::size_t(i)] == 0) need_shift = true;
  if (need_shift) {
    for (Int k = 1;; ++k) {
      for (const Int& kk : {Int(k), Int(-k)}) {
        bool good = true;
        for (int i = 0; i < s && good; ++i)
          if (!out.degenerate[std::size_t(i)])
            good = aw[std::size_t(i)] + kk * bw[std::size_t(i)] != 0;
        if (good) {
          for (int i = 0; i < s; ++i) aw[std::size_t(i)] += kk * bw[std::size_t(i)];
          need_shift = false;
          break;
        }
      }
      if (!need_shift) break;
    }
  }
  // c_i = a_i; b'_i = b_i * L / a_i with L = lcm of the effective a_i,
  // then the common factor of the b'_i is absorbed into u
  Int L = 1;
  for (int i = 0; i < s; ++i)
    if (!out.degenerate[std::size_t(i)]) L = boost::multiprecision::lcm(L, abs_int(aw[std::size_t(i)]));
  out.c.assign(std::size_t(s), Int(1));
  out.b.assign(std::size_t(s), Int(0));
  Int g = 0;
  for (int i = 0; i < s; ++i) {
    if (out.degenerate[std::size_t(i)]) continue;
    out.c[std::size_t(i)] = aw[std::size_t(i)];
    out.b[std::size_t(i)] = bw[std::size_t(i)] * (L / aw[std::size_t(i)]);
    g = boost::multiprecision::gcd(g, abs_int(out.b[std::size_t(i)]));
  }
  if (g > 1)
    for (int i = 0; i < s; ++i) out.b[std::size_t(i)] /= g;
  // canonical sign: first nonzero shift positive
  for (int i = 0; i < s; ++i) {
    if (out.b[std::size_t(i)] == 0) continue;
    if (out.b[std::size_t(i)] < 0)
      for (int j = 0; j < s; ++j) out.b[std::size_t(j)] = -out.b[std::size_t(j)];
    break;
  }
  // divide the scale factors by their content so they end up coprime
  Int cg = 0;
  for (int i = 0; i < s; ++i) cg = boost::multiprecision::gcd(cg, abs_int(out.c[std::size_t(i)]));
  if (cg > 1)
    for (int i = 0; i < s; ++i) out.c[std::size_t(i)] /= cg;

  // recheck: C(c_1 (t + b_1 u), ...) = 0 identically
  {
    std::vector<AlgInt> va(static_cast<std::size_t>(s)), vb(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) {
      va[std::size_t(i)] = AlgInt(out.c[std::size_t(i)], 0);
      if (!out.degenerate[std::size_t(i)])
        vb[std::size_t(i)] = AlgInt(out.c[std::size_t(i)] * out.b[std::size_t(i)], 0);
    }
    // degenerate slots do not move with t or u; they were identically zero
    // on the input line, so drop them from the parametrization here
    for (int i = 0; i < s; ++i)
      if (out.degenerate[std::size_t(i)]) va[std::size_t(i)] = AlgInt();
    PencilExpansion pe = expand_pencil(C, va, {vb});
    bool ok = pe.c0.is_zero() && pe.quad[0].is_zero();
    for (const auto& [ij, c] : pe.lin) ok = ok && c.is_zero();
    for (const auto& [e, c] : pe.tail) ok = ok && c.is_zero();
    if (!ok) throw std::logic_error("normalize_line: rescaled identity failed");
  }
  return out;
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  for (Int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  Int d = n - 1;
  int r = 0;
  while (d % 2 == 0) { d /= 2; ++r; }
  for (Int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    Int x = boost::multiprecision::powm(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 0; i < r - 1 && witness; ++i) {
      x = x * x % n;
      if (x == n - 1) witness = false;
    }
    if (witness) return false;
  }
  return true;
}

std::optional<std::pair<Int, Int>> prime_ap_sieve(int M, const Int& bound) {
  if (M < 1 || 2 * M + 1 > 9)
    throw std::invalid_argument("prime_ap_sieve: 2M+1 <= 9 required at desk scale");
  if (bound > 1'000'000'000)
    throw std::invalid_argument("prime_ap_sieve: bound capped at 1e9");
  std::int64_t n = bound.convert_to<std::int64_t>();
  if (n < 2) return std::nullopt;
  std::vector<bool> comp(std::size_t(n) + 1, false);
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (!comp[std::size_t(p)])
      for (std::int64_t q = p * p; q <= n; q += p) comp[std::size_t(q)] = true;
  auto prime_at = [&](std::int64_t v) { return v >= 2 && !comp[std::size_t(v)]; };
  const int len = 2 * M + 1;
  for (std::int64_t start = 2; start <= n; ++start) {
    if (!prime_at(start)) continue;
    for (std::int64_t d = 1; start + std::int64_t(len - 1) * d <= n; ++d) {
      bool all = true;
      for (int k = 1; k < len && all; ++k) all = prime_at(start + k * d);
      if (all) return std::make_pair(Int(start + M * d), Int(d));
    }
  }
  return std::nullopt;
}

AlmostPrimeSolution almost_prime_solution(const CubicForm& C, const std::vector<Int>& a,
                                          const std::vector<Int>& b, const Int& sieve_bound) {
  NormalizedLine line = normalize_line(C, a, b);
  const int s = C.s;
  Int maxb = 0;
  for (int i = 0; i < s; ++i)
    if (!line.degenerate[std::size_t(i)]) maxb = std::max(maxb, abs_int(line.b[std::size_t(i)]));
  Int M_int = 2 * maxb + 1;
  if (2 * M_int + 1 > 9) {
    std::ostringstream os;
    os << "almost_prime_solution: needs a prime progression of length " << (2 * M_int + 1)
       << ", beyond the desk-scale sieve (max supported length 9)";
    throw std::invalid_argument(os.str());
  }
  int M = M_int.convert_to<int>();
  auto ap = prime_ap_sieve(M, sieve_bound);
  if (!ap) throw std::runtime_error("almost_prime_solution: sieve exhausted below bound");
  auto [ell, d] = *ap;

  AlmostPrimeSolution sol;
  sol.c = line.c;
  sol.M = M;
  sol.ap_center = ell;
  sol.ap_step = d;
  sol.p.assign(std::size_t(s), ell);
  sol.x.assign(std::size_t(s), Int(0));
  for (int i = 0; i < s; ++i) {
    if (!line.degenerate[std::size_t(i)]) sol.p[std::size_t(i)] = ell + line.b[std::size_t(i)] * d;
    sol.x[std::size_t(i)] = sol.c[std::size_t(i)] * sol.p[std::size_t(i)];
  }
  // exact verification
  std::vector<AlgInt> xv;
  for (const auto& xi : sol.x) xv.emplace_back(xi, Int(0));
  if (!C.eval(xv).is_zero())
    throw std::logic_error("almost_prime_solution: C does not vanish at the solution");
  bool all_equal = true;
  for (int i = 1; i < s; ++i) all_equal = all_equal && sol.p[std::size_t(i)] == sol.p[0];
  if (all_equal) throw std::logic_error("almost_prime_solution: primes are all equal");
  for (const auto& p : sol.p)
    if (!is_prime(p)) throw std::logic_error("almost_prime_solution: non-prime entry");
  return sol;
}

Int beta_threshold(int m, int d) {
  Int v = 2 * Int(m) * m + Int(d) * (m + 1);
  if (m % 2 == 1) v += 2;
  return v;
}

Int lines_variable_threshold(int m) {
  // smallest s with s > (5m^2 + 29m)/2 + {13 even / 15 odd}
  Int twice = 5 * Int(m) * m + 29 * Int(m) + 2 * (m % 2 == 0 ? 13 : 15);
  return twice / 2 + 1;
}

}  // namespace cubiq
