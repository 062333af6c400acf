#include "cubiq/lattices.hpp"

#include "cubiq/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cubiq {

namespace {

std::int64_t strict_bound64(const Rat& x) {
  Int f = rat_floor(x);
  if (Rat(f) == x) f -= 1;
  if (f < 0) return -1;
  return f.convert_to<std::int64_t>();
}

Int count_shrink(const std::vector<std::vector<Rat>>& L, const Rat& a, const Rat& X,
                 const Budget& budget) {
  int m = int(L.size());
  std::int64_t bound = strict_bound64(a * X);
  Odometer od;
  for (int i = 0; i < m; ++i) od.ranges.push_back({-bound, bound});
  budget.charge(od.count());
  Rat lim = X / a;
  Int count = 0;
  od.for_each([&](const std::vector<std::int64_t>& u) {
    for (int i = 0; i < m; ++i) {
      Rat v = 0;
      for (int j = 0; j < m; ++j) v += L[std::size_t(i)][std::size_t(j)] * u[std::size_t(j)];
      if (!(rat_torus(v) < lim)) return;
    }
    ++count;
  });
  return count;
}

}  // namespace

ShrinkResult shrink_check(const std::vector<std::vector<Rat>>& L, const Rat& a, const Rat& Z,
                          const Budget& budget) {
  int m = int(L.size());
  if (m < 1 || m > 6) throw std::invalid_argument("shrink_check: 1 <= m <= 6 required");
  for (const auto& row : L)
    if (int(row.size()) != m) throw std::invalid_argument("shrink_check: L must be square");
  if (a <= 0 || Z <= 0 || Z > 1)
    throw std::invalid_argument("shrink_check: need a > 0 and Z in (0,1]");
  ShrinkResult r;
  r.n1 = count_shrink(L, a, 1, budget);
  r.nz = count_shrink(L, a, Z, budget);
  Rat zm = 1;
  for (int i = 0; i < m; ++i) zm *= Z;
  // N(Z) >= 1 always: the origin satisfies both conditions
  r.ratio = rat_to_double(Rat(r.n1) * zm / Rat(r.nz));
  return r;
}

DivisibilityReport divisibility_check(const FieldSpec& F, const ResidueClass& gamma,
                                      const KVal& theta, const Rat& M, const Rat& P0,
                                      const Rat& A, const AlgInt& m) {
  DivisibilityReport rep;
  const Int N = gamma.denom_ideal.norm;
  Rat th = theta.height();

  auto fail_hyp = [&](const char* why) {
    rep.status = DivisibilityStatus::hypotheses_not_met;
    rep.detail = why;
    return rep;
  };
  if (Rat(m.height()) > M) return fail_hyp("|m| > M");
  if (M * M * th * th * Rat(N) > A * A) return fail_hyp("M |theta| N^{1/2} > A");
  if (A * A * P0 * P0 < Rat(N)) return fail_hyp("A P0 < N^{1/2}");
  KVal alpha = gamma.gamma.to_kval() + theta;
  for (int j = 0; j < 2; ++j) {
    AlgInt wj = j == 0 ? AlgInt(1, 0) : AlgInt(0, 1);
    KVal prod = F.mul(m, F.mul(wj, alpha));
    Rat t = F.trace(prod) / Rat(F.delta);
    if (!(rat_torus(t) * P0 < 1)) return fail_hyp("trace condition fails");
  }

  rep.membership_ok = F.ideal_contains(gamma.denom_ideal, m);
  rep.cond1_applies = (M * M <= A * A * Rat(N));
  rep.cond2_applies = (A * A * th * th * Rat(N) * P0 * P0 >= 1);
  bool zero_ok = (!rep.cond1_applies && !rep.cond2_applies) || m.is_zero();
  rep.status = (rep.membership_ok && zero_ok) ? DivisibilityStatus::ok
                                              : DivisibilityStatus::counterexample;
  if (rep.status == DivisibilityStatus::counterexample) {
    std::ostringstream os;
    os << "m=(" << m.a << "," << m.b << ") N=" << N << " membership=" << rep.membership_ok
       << " cond1=" << rep.cond1_applies << " cond2=" << rep.cond2_applies;
    rep.detail = os.str();
  }
  return rep;
}

DivisibilitySweep divisibility_sweep(const FieldSpec& F, const Int& norm_bound,
                                     std::int64_t m_height, int grid, const Rat& A) {
  DivisibilitySweep sweep;
  const Rat M(m_height);
  const Rat A2 = A * A;
  for (const auto& gamma : enumerate_residues(Rat(norm_bound), F)) {
    const Int N = gamma.denom_ideal.norm;
    for (int gi = -grid / 2; gi < grid / 2; ++gi) {
      for (int gj = -grid / 2; gj < grid / 2; ++gj) {
        KVal theta(Rat(gi, grid), Rat(gj, grid));
        Rat th = theta.height();
        // hypothesis M |theta| N^{1/2} <= A, squared
        if (M * M * th * th * Rat(N) > A2) continue;
        // P0 is the tightest admissible N^{1/2}/A; conditions squared
        bool cond1 = (M * M <= A2 * Rat(N));
        bool cond2 = (th * Rat(N) >= 1);  // A|theta| >= A/N
        KVal alpha = gamma.gamma.to_kval() + theta;
        for (std::int64_t ma = -m_height; ma <= m_height; ++ma)
          for (std::int64_t mb = -m_height; mb <= m_height; ++mb) {
            AlgInt m(ma, mb);
            bool trace_ok = true;
            for (int j = 0; j < 2 && trace_ok; ++j) {
              AlgInt wj = j == 0 ? AlgInt(1, 0) : AlgInt(0, 1);
              Rat t = F.trace(F.mul(m, F.mul(wj, alpha))) / Rat(F.delta);
              Rat d = rat_torus(t);
              trace_ok = (d * d * Rat(N) < A2);  // ||.|| < P0^{-1} = A/N^{1/2}
            }
            if (!trace_ok) continue;
            ++sweep.tested;
            if (cond1 || cond2) ++sweep.cond_zero_checks;
            bool ok = F.ideal_contains(gamma.denom_ideal, m) &&
                      ((!cond1 && !cond2) || m.is_zero());
            if (!ok) ++sweep.counterexamples;
          }
      }
    }
  }
  return sweep;
}

Rat calibrate_divisibility_constant(const FieldSpec& F, const Int& norm_bound,
                                    std::int64_t m_height, int grid, int bisections) {
  // coarse pass over powers of two to bracket the failure threshold
  Rat lo = 0, hi = 0;
  for (int k = -12; k <= 6; ++k) {
    Rat A = k >= 0 ? Rat(Int(1) << k) : Rat(1, Int(1) << (-k));
    auto sweep = divisibility_sweep(F, norm_bound, m_height, grid, A);
    if (sweep.counterexamples == 0) lo = A;
    else { hi = A; break; }
  }
  if (hi == 0) hi = lo * 2;
  for (int it = 0; it < bisections; ++it) {
    Rat mid = (lo + hi) / 2;
    auto sweep = divisibility_sweep(F, norm_bound, m_height, grid, mid);
    if (sweep.counterexamples == 0) lo = mid;
    else hi = mid;
  }
  return lo / 2;  // halved for safety
}

IntegerLattice lambda_h(const CubicForm& C, const std::vector<AlgInt>& h,
                        const IdealRep& q2) {
  if (C.s > 3) throw std::invalid_argument("lambda_h: s <= 3 required (dim = 2s <= 6)");
  const FieldSpec& F = C.field;
  HessianMatrix M = hessian(C, h);
  // integer matrix of w -> (6 Delta B_i(w, h))_i on basis coordinates
  int n = 2 * C.s;
  IMat L(n, n);
  for (int i = 0; i < C.s; ++i)
    for (int k = 0; k < C.s; ++k) {
      AlgInt e = M.at(i, k) * Int(6 * F.delta);
      IMat blk = F.mul_matrix(e);
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) L.at(2 * i + r, 2 * k + c) = blk.at(r, c);
    }
  IMat HL(n, n);
  for (int i = 0; i < C.s; ++i)
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) HL.at(2 * i + r, 2 * i + c) = q2.hnf.at(r, c);
  IntegerLattice lat;
  lat.dim = n;
  lat.basis = preimage_lattice(L, HL);
  lat.provenance = IntegerLattice::Provenance::lambda_h;
  lat.h = h;
  lat.q2 = q2;
  return lat;
}

int lambda_h_rank_exponent(const CubicForm& C, const std::vector<AlgInt>& h,
                           const IdealRep& q2) {
  if (q2.is_unit()) return 0;
  int r = C.s;
  for (const auto& [p, e] : C.field.factor_ideal(q2))
    r = std::min(r, rank_mod(C, h, p));
  return r;
}

namespace {

// coefficient-space box that covers all lattice points with |x| <= R
Odometer coeff_box(const IntegerLattice& lat, const Int& R) {
  int n = lat.dim;
  // |c_i| <= R * sum_j |adj_ij| / |det|
  Int d = abs_int(det(lat.basis));
  Odometer od;
  for (int i = 0; i < n; ++i) {
    Int rowsum = 0;
    for (int j = 0; j < n; ++j) {
      // adj entry (i, j) = cofactor(j, i)
      IMat minor(n - 1, n - 1);
      for (int r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (int c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor.at(rr, cc) = lat.basis.at(r, c);
          ++cc;
        }
        ++rr;
      }
      rowsum += abs_int(det(minor));
    }
    Int bound = (R * rowsum) / d + 1;
    std::int64_t b = bound.convert_to<std::int64_t>();
    od.ranges.push_back({-b, b});
  }
  return od;
}

}  // namespace

MinimaReport successive_minima(const IntegerLattice& lat, const Budget& budget) {
  if (lat.dim < 1 || lat.dim > 6)
    throw std::invalid_argument("successive_minima: dim <= 6 required");
  int n = lat.dim;
  // the basis columns themselves bound lambda_n
  Int R = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) R = std::max(R, abs_int(lat.basis.at(i, j)));
  Odometer od = coeff_box(lat, R);
  budget.charge(od.count());

  std::vector<std::pair<Int, std::vector<Int>>> pts;  // (sup norm, point)
  od.for_each([&](const std::vector<std::int64_t>& c) {
    std::vector<Int> x(std::size_t(n), 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) x[std::size_t(i)] += lat.basis.at(i, j) * c[std::size_t(j)];
    Int norm = 0;
    for (const auto& xi : x) norm = std::max(norm, abs_int(xi));
    if (norm == 0 || norm > R) return;
    pts.push_back({norm, x});
  });
  std::sort(pts.begin(), pts.end());

  MinimaReport rep;
  IMat acc(n, 0);
  for (const auto& [norm, x] : pts) {
    if (int(rep.lambdas.size()) == n) break;
    IMat trial(n, acc.cols + 1);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < acc.cols; ++j) trial.at(i, j) = acc.at(i, j);
      trial.at(i, acc.cols) = x[std::size_t(i)];
    }
    if (rank(trial) > acc.cols) {
      acc = trial;
      rep.lambdas.push_back(norm);
      rep.witnesses.push_back(x);
    }
  }
  if (int(rep.lambdas.size()) != n)
    throw std::logic_error("successive_minima: basis radius did not span the lattice");
  return rep;
}

Int count_points(const IntegerLattice& lat, const Int& B, const Budget& budget) {
  if (lat.dim < 1 || lat.dim > 6)
    throw std::invalid_argument("count_points: dim <= 6 required");
  int n = lat.dim;
  Odometer od = coeff_box(lat, B);
  budget.charge(od.count());
  Int count = 0;
  od.for_each([&](const std::vector<std::int64_t>& c) {
    for (int i = 0; i < n; ++i) {
      Int xi = 0;
      for (int j = 0; j < n; ++j) xi += lat.basis.at(i, j) * c[std::size_t(j)];
      if (abs_int(xi) > B) return;
    }
    ++count;
  });
  return count;
}

}  // namespace cubiq
