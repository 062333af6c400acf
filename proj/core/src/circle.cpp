#include "cubiq/circle.hpp"

#include "cubiq/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cubiq {

namespace {

// floor(P^{p/q}) for rational P >= 1 and exponent p/q > 0, exactly
Int floor_rational_power(const Rat& P, const Rat& expo) {
  Int p = rat_num(expo), q = rat_den(expo);
  // largest k with k^q <= P^p
  Rat target = 1;
  for (Int i = 0; i < p; ++i) target *= P;
  Int k = 1;
  while (true) {
    Rat kq = 1;
    for (Int i = 0; i < q; ++i) kq *= Rat(k + 1);
    if (kq <= target) ++k;
    else break;
  }
  return k;
}

// exact test of h < P^{nu-3}: h^q * P^{(3q-p)} < 1 with nu = p/q
bool inside_radius(const Rat& h, const Rat& P, const Rat& nu) {
  if (h == 0) return true;
  Int p = rat_num(nu), q = rat_den(nu);
  Rat lhs = 1;
  for (Int i = 0; i < q; ++i) lhs *= h;
  Int e = 3 * q - p;
  for (Int i = 0; i < e; ++i) lhs *= P;
  return lhs < 1;
}

Rat torus_coord_dist(const Rat& x) { return rat_torus(x); }

Rat torus_height(const KVal& x) {
  return std::max(torus_coord_dist(x.a), torus_coord_dist(x.b));
}

}  // namespace

ArcParams::ArcParams(Rat P_, Rat nu_, Rat Q_exp_)
    : P(std::move(P_)), nu(std::move(nu_)), Q_exp(std::move(Q_exp_)) {
  if (P < 1) throw std::invalid_argument("ArcParams: P >= 1 required");
  if (nu <= 0 || nu >= Rat(1, 6))
    throw std::invalid_argument("ArcParams: nu must lie in (0, 1/6)");
  if (Q_exp > Rat(3, 2)) throw std::invalid_argument("ArcParams: Q exponent above P^{3/2}");
}

Int ArcParams::norm_cutoff() const { return floor_rational_power(P, nu); }

ArcClassification classify_arc(const KVal& alpha, const ArcParams& params,
                               const FieldSpec& F) {
  ArcClassification out;
  int matches = 0;
  for (const auto& gamma : enumerate_residues(Rat(params.norm_cutoff()), F)) {
    Rat dist = torus_height(alpha - gamma.gamma.to_kval());
    if (inside_radius(dist, params.P, params.nu)) {
      ++matches;
      out.major = true;
      out.gamma = gamma;
    }
  }
  if (matches > 1)
    throw std::logic_error("classify_arc: arcs overlap at these parameters");
  return out;
}

bool arcs_disjoint(const ArcParams& params, const FieldSpec& F) {
  auto res = enumerate_residues(Rat(params.norm_cutoff()), F);
  Int p = rat_num(params.nu), q = rat_den(params.nu);
  for (std::size_t i = 0; i < res.size(); ++i)
    for (std::size_t j = i + 1; j < res.size(); ++j) {
      Rat h = torus_height(res[i].gamma.to_kval() - res[j].gamma.to_kval());
      // disjoint iff h >= 2 P^{nu-3}: h^q P^{3q-p} >= 2^q
      Rat lhs = 1;
      for (Int t = 0; t < q; ++t) lhs *= h;
      Int e = 3 * q - p;
      for (Int t = 0; t < e; ++t) lhs *= params.P;
      Rat rhs = 1;
      for (Int t = 0; t < q; ++t) rhs *= 2;
      if (lhs < rhs) return false;
    }
  return true;
}

SingularSeriesResult singular_series(const CubicForm& C, const Rat& R,
                                     const Budget& budget) {
  SingularSeriesResult out;
  double re = 0, im = 0;
  auto residues = enumerate_residues(R, C.field);
  std::size_t i = 0;
  while (i < residues.size()) {
    Int k = residues[i].denom_ideal.norm;
    SeriesRow row;
    row.norm = k;
    row.class_count = 0;
    row.term_abs_sum = 0;
    while (i < residues.size() && residues[i].denom_ideal.norm == k) {
      SumReport s = complete_sum(C, residues[i], budget);
      double scale = std::pow(k.convert_to<double>(), -2.0 * C.s);
      re += s.value.real() * scale;
      im += s.value.imag() * scale;
      row.term_abs_sum += std::abs(s.value) * scale;
      ++row.class_count;
      ++i;
    }
    row.partial = {re, im};
    out.per_norm.push_back(row);
  }
  out.partial_sum = {re, im};
  return out;
}

namespace {

// flattened monomials with double coefficients for sampling kernels
struct FlatForm {
  struct Term {
    int i, j, k;
    double ca, cb;
  };
  std::vector<Term> terms;
  const FieldSpec* F;

  explicit FlatForm(const CubicForm& C) : F(&C.field) {
    for (const auto& [t, a] : C.monomials)
      terms.push_back({t[0] - 1, t[1] - 1, t[2] - 1, a.a.convert_to<double>(),
                       a.b.convert_to<double>()});
  }
  KApprox eval(const std::vector<KApprox>& x) const {
    KApprox acc;
    for (const auto& t : terms) {
      KApprox m = F->mul(F->mul(x[std::size_t(t.i)], x[std::size_t(t.j)]), x[std::size_t(t.k)]);
      KApprox p = F->mul(KApprox{t.ca, t.cb}, m);
      acc.a += p.a;
      acc.b += p.b;
    }
    return acc;
  }
};

}  // namespace

SingularIntegralResult singular_integral_density(const CubicForm& C, const Box& box,
                                                 const DensityIntegralParams& params) {
  if (box.s != C.s) throw std::invalid_argument("singular_integral: box dimension");
  if (box.kind == Box::Kind::centered_at_z) box.validate_center(C);
  const int levels = params.delta_levels;
  std::vector<double> deltas(static_cast<std::size_t>(levels));
  for (int k = 0; k < levels; ++k) deltas[std::size_t(k)] = params.initial_delta / double(1 << k);

  FlatForm flat(C);
  CounterRng rng(params.seed);
  const int nc = 2 * C.s;
  std::vector<double> lo(static_cast<std::size_t>(nc)), wid(static_cast<std::size_t>(nc));
  for (int i = 0; i < nc; ++i) {
    lo[std::size_t(i)] = rat_to_double(box.bounds[std::size_t(i)].first);
    wid[std::size_t(i)] = rat_to_double(box.bounds[std::size_t(i)].second) -
                          lo[std::size_t(i)];
  }
  std::vector<std::uint64_t> hits(static_cast<std::size_t>(levels), 0);
  std::vector<KApprox> xi(std::size_t(C.s));
  for (std::uint64_t n = 0; n < params.samples; ++n) {
    for (int i = 0; i < C.s; ++i) {
      double a = lo[std::size_t(2 * i)] + wid[std::size_t(2 * i)] * rng.uniform(n * nc + 2 * i);
      double b = lo[std::size_t(2 * i + 1)] +
                 wid[std::size_t(2 * i + 1)] * rng.uniform(n * nc + 2 * i + 1);
      xi[std::size_t(i)] = {a, b};
    }
    KApprox u = flat.eval(xi);
    double m = std::max(std::abs(u.a), std::abs(u.b));
    for (int k = 0; k < levels; ++k)
      if (m < deltas[std::size_t(k)]) ++hits[std::size_t(k)];
  }

  const double vol = rat_to_double(box.volume());
  const double dd = std::abs(double(C.field.delta));
  SingularIntegralResult res;
  for (int k = 0; k < levels; ++k) {
    double p = double(hits[std::size_t(k)]) / double(params.samples);
    double scale = vol / (4.0 * deltas[std::size_t(k)] * deltas[std::size_t(k)] * dd);
    res.per_delta.push_back(p * scale);
    double se = std::sqrt(std::max(p * (1.0 - p), 1e-300) / double(params.samples)) * scale;
    res.per_delta_err.push_back(se);
  }
  // linear-in-delta extrapolation from the two finest levels
  double vK = res.per_delta[std::size_t(levels - 1)];
  double vK1 = res.per_delta[std::size_t(levels - 2)];
  res.value = 2.0 * vK - vK1;
  res.std_error = std::sqrt(4.0 * res.per_delta_err[std::size_t(levels - 1)] *
                                res.per_delta_err[std::size_t(levels - 1)] +
                            res.per_delta_err[std::size_t(levels - 2)] *
                                res.per_delta_err[std::size_t(levels - 2)]);
  res.converged =
      std::abs(vK - vK1) <= 4.0 * (res.per_delta_err[std::size_t(levels - 1)] +
                                   res.per_delta_err[std::size_t(levels - 2)]) +
                              0.05 * std::abs(vK) + 1e-12;
  return res;
}

double singular_integral_oscillatory(const CubicForm& C, const Box& box, const Rat& R,
                                     const Rat& nu, int nodes_per_axis,
                                     const Budget& budget) {
  if (box.s != C.s) throw std::invalid_argument("singular_integral: box dimension");
  const int nc = 2 * C.s;
  Int total = 1;
  for (int i = 0; i < nc; ++i) total *= nodes_per_axis;
  budget.charge(total);

  // zeta-integral over |zeta| < A done analytically per node:
  // prod_j sin(2 pi A v_j) / (pi v_j) with v = T u
  const double A = std::pow(rat_to_double(R), rat_to_double(nu));
  FlatForm flat(C);
  const double t11 = double(C.field.trace_form[0][0]), t12 = double(C.field.trace_form[0][1]);
  const double t21 = double(C.field.trace_form[1][0]), t22 = double(C.field.trace_form[1][1]);

  std::vector<double> lo(static_cast<std::size_t>(nc)), step(static_cast<std::size_t>(nc));
  double cell = 1.0;
  for (int i = 0; i < nc; ++i) {
    double l = rat_to_double(box.bounds[std::size_t(i)].first);
    double h = rat_to_double(box.bounds[std::size_t(i)].second);
    lo[std::size_t(i)] = l;
    step[std::size_t(i)] = (h - l) / nodes_per_axis;
    cell *= step[std::size_t(i)];
  }
  auto sinc_factor = [&](double v) {
    if (std::abs(v) < 1e-12) return 2.0 * A;
    return std::sin(2.0 * std::numbers::pi * A * v) / (std::numbers::pi * v);
  };
  Odometer od;
  for (int i = 0; i < nc; ++i) od.ranges.push_back({0, nodes_per_axis - 1});
  double acc = 0, comp = 0;
  std::vector<KApprox> xi(std::size_t(C.s));
  od.for_each([&](const std::vector<std::int64_t>& idx) {
    for (int i = 0; i < C.s; ++i) {
      double a = lo[std::size_t(2 * i)] + (idx[std::size_t(2 * i)] + 0.5) * step[std::size_t(2 * i)];
      double b = lo[std::size_t(2 * i + 1)] +
                 (idx[std::size_t(2 * i + 1)] + 0.5) * step[std::size_t(2 * i + 1)];
      xi[std::size_t(i)] = {a, b};
    }
    KApprox u = flat.eval(xi);
    double v1 = t11 * u.a + t12 * u.b;
    double v2 = t21 * u.a + t22 * u.b;
    double term = sinc_factor(v1) * sinc_factor(v2) * cell;
    // Neumaier
    double t = acc + term;
    if (std::abs(acc) >= std::abs(term)) comp += (acc - t) + term;
    else comp += (term - t) + acc;
    acc = t;
  });
  return acc + comp;
}

namespace {

struct HalfValues {
  std::vector<std::pair<std::int64_t, std::int64_t>> values;
};

// int64 evaluation of a diagonal form over a subset of variables
HalfValues half_values(const CubicForm& C, const Rat& P, const Box& box, int var_lo,
                       int var_hi) {
  const std::int64_t s0 = C.field.sq_const, s1 = C.field.sq_lin;
  auto diag = C.diagonal_coeffs();
  Odometer full = box.lattice_ranges(P);
  Odometer od;
  for (int i = var_lo; i < var_hi; ++i) {
    od.ranges.push_back(full.ranges[std::size_t(2 * i)]);
    od.ranges.push_back(full.ranges[std::size_t(2 * i + 1)]);
  }
  HalfValues out;
  out.values.reserve(std::size_t(od.count().convert_to<std::int64_t>()));
  auto mul64 = [&](std::int64_t xa, std::int64_t xb, std::int64_t ya, std::int64_t yb) {
    return std::pair<std::int64_t, std::int64_t>(xa * ya + s0 * xb * yb,
                                                 xa * yb + xb * ya + s1 * xb * yb);
  };
  od.for_each([&](const std::vector<std::int64_t>& cur) {
    std::int64_t va = 0, vb = 0;
    for (int i = 0; i < var_hi - var_lo; ++i) {
      std::int64_t xa = cur[std::size_t(2 * i)], xb = cur[std::size_t(2 * i + 1)];
      auto x2 = mul64(xa, xb, xa, xb);
      auto x3 = mul64(x2.first, x2.second, xa, xb);
      const AlgInt& a = diag[std::size_t(var_lo + i)];
      auto t = mul64(a.a.convert_to<std::int64_t>(), a.b.convert_to<std::int64_t>(), x3.first,
                     x3.second);
      va += t.first;
      vb += t.second;
    }
    out.values.push_back({va, vb});
  });
  return out;
}

}  // namespace

Int brute_count(const CubicForm& C, const Rat& P, const Box& box, CountPath path,
                const Budget& budget) {
  if (box.s != C.s) throw std::invalid_argument("brute_count: box dimension mismatch");
  bool use_hash = false;
  if (path == CountPath::hash_join) use_hash = true;
  else if (path == CountPath::automatic && C.is_diagonal() && C.s >= 2) {
    // half-enumeration must also fit the budget
    Odometer full = box.lattice_ranges(P);
    Int half = 1;
    for (int i = 0; i < C.s; ++i) half *= Int(full.ranges[std::size_t(2 * i)].second -
                                              full.ranges[std::size_t(2 * i)].first + 1);
    use_hash = true;
    (void)half;
  }

  if (use_hash) {
    if (!C.is_diagonal())
      throw std::invalid_argument("brute_count: join path needs a diagonal form");
    // int64 value-range guard
    Odometer full = box.lattice_ranges(P);
    Int maxc = 1;
    for (const auto& [l, h] : full.ranges)
      maxc = std::max(maxc, std::max(abs_int(Int(l)), abs_int(Int(h))));
    Int mbound = 0;
    for (const auto& a : C.diagonal_coeffs())
      mbound += (abs_int(a.a) + abs_int(a.b)) * maxc * maxc * maxc * 16;
    if (mbound >= (Int(1) << 60))
      throw std::invalid_argument("brute_count: values exceed the int64 join range");

    int mid = C.s / 2;
    Int work = 1;
    for (int i = 0; i < C.s; ++i) {
      Int w(full.ranges[std::size_t(2 * i)].second - full.ranges[std::size_t(2 * i)].first + 1);
      Int w2(full.ranges[std::size_t(2 * i + 1)].second -
             full.ranges[std::size_t(2 * i + 1)].first + 1);
      work = std::max(work, Int(w * w2));
    }
    HalfValues left = half_values(C, P, box, 0, mid);
    HalfValues right = half_values(C, P, box, mid, C.s);
    budget.charge(Int(left.values.size()) + Int(right.values.size()));
    std::sort(left.values.begin(), left.values.end());
    Int count = 0;
    for (const auto& v : right.values) {
      std::pair<std::int64_t, std::int64_t> target(-v.first, -v.second);
      auto range = std::equal_range(left.values.begin(), left.values.end(), target);
      count += Int(range.second - range.first);
    }
    return count;
  }

  Odometer od = box.lattice_ranges(P);
  budget.charge(od.count());
  Int count = 0;
  std::vector<AlgInt> x(std::size_t(C.s));
  od.for_each([&](const std::vector<std::int64_t>& cur) {
    for (int i = 0; i < C.s; ++i) x[std::size_t(i)] = AlgInt(cur[2 * i], cur[2 * i + 1]);
    if (C.eval(x).is_zero()) ++count;
  });
  return count;
}

AsymptoticReport asymptotic_report(const CubicForm& C, const std::vector<Rat>& Ps,
                                   const Box& box, const Rat& nu,
                                   const DensityIntegralParams& mc, const Budget& budget) {
  AsymptoticReport rep;
  auto integral = singular_integral_density(C, box, mc);
  rep.integral_value = integral.value;
  rep.integral_err = integral.std_error;
  for (const Rat& P : Ps) {
    AsymptoticRow row;
    row.P = P;
    row.NP = brute_count(C, P, box, CountPath::automatic, budget);
    double ppow = std::pow(rat_to_double(P), 2.0 * (C.s - 3));
    row.np_scaled = row.NP.convert_to<double>() / ppow;
    ArcParams params(P, nu);
    auto series = singular_series(C, Rat(params.norm_cutoff()), budget);
    row.sigma_hat = series.partial_sum.real() * integral.value;
    row.ratio = row.sigma_hat != 0 ? row.np_scaled / row.sigma_hat : 0;
    rep.rows.push_back(row);
  }
  return rep;
}

ASumResult a_sum(const CubicForm& C, const KVal& theta, const Rat& R, std::int64_t H,
                 const Rat& P, const Budget& budget) {
  ASumResult out;
  // dyadic shell N(a_gamma)^{1/2} ~ R, i.e. R^2 < N <= 4 R^2
  Rat r2 = R * R;
  auto residues = enumerate_residues(std::max(Rat(1), Rat(4 * r2)), C.field);
  Odometer hbox;
  for (int i = 0; i < 2 * C.s; ++i) hbox.ranges.push_back({-H, H});
  for (const auto& gamma : residues) {
    if (Rat(gamma.denom_ideal.norm) <= r2 || Rat(gamma.denom_ideal.norm) > 4 * r2) continue;
    ++out.gamma_count;
    KVal alpha = gamma.gamma.to_kval() + theta;
    std::vector<AlgInt> h(std::size_t(C.s));
    hbox.for_each([&](const std::vector<std::int64_t>& cur) {
      for (int i = 0; i < C.s; ++i) h[std::size_t(i)] = AlgInt(cur[2 * i], cur[2 * i + 1]);
      Int cnt = count_N_h(C, alpha, P, h, false, budget);
      out.value += std::sqrt(cnt.convert_to<double>());
    });
  }
  // the paper-shaped bound at eps = 0.1 with eta = |theta| + 1/(P^2 H)
  double th = rat_to_double(theta.height());
  double Pd = rat_to_double(P), Rd = rat_to_double(R), Hd = double(H);
  double eta = th + 1.0 / (Pd * Pd * Hd);
  double s = double(C.s);
  double inner = 1.0 + std::pow(Rd * Hd * Hd * Hd * eta, s / 2.0) +
                 std::pow(Hd, s) / std::pow(Rd * Pd * Pd * eta, s / 2.0) *
                     std::min(1.0, Pd * Pd * eta);
  out.bound_shape = std::pow(Rd * Rd * std::pow(Pd, s / 2.0 + 0.1) * inner, 2.0);
  return out;
}

// --- exponent ledger -----------------------------------------------------------

namespace {

LedgerEntry mk(std::string name, Rat lhs, Rat rhs, char dir, std::string anchor,
               bool expect_fail = false) {
  return LedgerEntry{std::move(name), std::move(lhs), std::move(rhs), dir,
                     std::move(anchor), expect_fail};
}

// exponent of the V-sum maximum over S = P^sigma, sigma in [0, rho]:
// max (rho - sigma) + (r/2) min(-(rho + 2 + eta_exp), sigma - rho)
Rat v_sum_max_exponent(int r, const Rat& rho, const Rat& eta_exp) {
  Rat breakpoint = -2 - eta_exp;  // where the two min-branches meet
  std::vector<Rat> cands = {Rat(0), rho};
  if (breakpoint > 0 && breakpoint < rho) cands.push_back(breakpoint);
  Rat best;
  bool first = true;
  for (const Rat& sg : cands) {
    Rat m = std::min(Rat(-(rho + 2 + eta_exp)), Rat(sg - rho));
    Rat val = (rho - sg) + Rat(r, 2) * m;
    if (first || val > best) { best = val; first = false; }
  }
  return best;
}

// the claimed closed form R (R P^2 eta)^{-r/2} min(1, P^2 eta)^{e(r)}
Rat v_sum_claimed_exponent(int r, const Rat& rho, const Rat& eta_exp) {
  Rat e_r = r == 0 ? Rat(0) : (r == 1 ? Rat(1, 2) : Rat(1));
  return rho - Rat(r, 2) * (rho + 2 + eta_exp) + e_r * std::min(Rat(0), Rat(2 + eta_exp));
}

}  // namespace

std::vector<LedgerEntry> ledger_entries() {
  std::vector<LedgerEntry> v;
  const Rat q(13, 11);  // exponent of Q

  v.push_back(mk("q-below-three-halves", q, Rat(3, 2), '<',
                 "We thus choose $Q=P^{13/11}$ ... also satisfies our earlier rough "
                 "assumption $Q \\le P^{3/2}$"));
  v.push_back(mk("small-phi-window-q", q, Rat(11, 9), '<',
                 "This bound is satisfactory if $Q \\ll P^{11/9-\\varepsilon}$"));
  v.push_back(mk("small-phi-second-term", q * Rat(9, 7), Rat(11, 7), '<',
                 "$\\ll P^{\\varepsilon} \\cdot (Q/P^2 + Q^{9/7}/P^{11/7})$"));
  v.push_back(mk("small-phi-first-term", q, Rat(2), '<',
                 "$\\ll P^{\\varepsilon} \\cdot (Q/P^2 + Q^{9/7}/P^{11/7})$"));
  v.push_back(mk("large-phi-window-q", Rat(15, 13), q, '<',
                 "which is satisfactory if $Q \\gg P^{15/13+\\varepsilon}$"));
  // H <= P feasibility at the extreme point R = Q, phi = 1/(QR)
  v.push_back(mk("H-feasible-quadratic", 4 * q - 4 * q, Rat(8), '<',
                 "we require $R^4\\phi^2 \\ll P^{8-\\varepsilon}$"));
  v.push_back(mk("H-feasible-linear", 2 * q, Rat(11), '<',
                 "as well as $R^4\\phi \\ll P^{11-\\varepsilon}$"));

  // phi_0 = P^{-(4r+31)/15}, phi_1 = P^{9r/10-3}, phi_2 = P^{-43/25-7r/10}
  auto phi0 = [](const Rat& r) { return -(4 * r + 31) / 15; };
  auto phi1 = [](const Rat& r) { return Rat(9, 10) * r - 3; };
  auto phi2 = [](const Rat& r) { return Rat(-43, 25) - Rat(7, 10) * r; };
  // thresholds solved exactly: both orderings flip at r = 4/5
  // phi0 <= phi1  <=>  28 <= 35 r
  v.push_back(mk("phi0-phi1-threshold", Rat(28, 35), Rat(4, 5), '=',
                 "Letting $R_0=P^{4/5+\\varepsilon}$, a quick computation shows that "
                 "$\\phi_2 \\le \\phi_0 \\le \\phi_1$ if $R \\ge R_0$"));
  // phi2 <= phi0  <=>  52 <= 65 r
  v.push_back(mk("phi2-phi0-threshold", Rat(52, 65), Rat(4, 5), '=',
                 "whereas $P^{-\\varepsilon}\\phi_1 \\le \\phi_0 \\le \\phi_2 "
                 "P^{\\varepsilon}$ if $R \\le R_0$"));
  v.push_back(mk("sandwich-above-R0-upper", phi0(1), phi1(1), 'l',
                 "$\\phi_2 \\le \\phi_0 \\le \\phi_1$ if $R \\ge R_0$"));
  v.push_back(mk("sandwich-above-R0-lower", phi2(1), phi0(1), 'l',
                 "$\\phi_2 \\le \\phi_0 \\le \\phi_1$ if $R \\ge R_0$"));
  v.push_back(mk("sandwich-below-R0-upper", phi1(Rat(1, 2)), phi0(Rat(1, 2)), 'l',
                 "$P^{-\\varepsilon}\\phi_1 \\le \\phi_0 \\le \\phi_2 P^{\\varepsilon}$ "
                 "if $R \\le R_0$"));
  v.push_back(mk("sandwich-below-R0-lower", phi0(Rat(1, 2)), phi2(Rat(1, 2)), 'l',
                 "$P^{-\\varepsilon}\\phi_1 \\le \\phi_0 \\le \\phi_2 P^{\\varepsilon}$ "
                 "if $R \\le R_0$"));

  v.push_back(mk("R0-below-weyl-limit", Rat(4, 5), Rat(346, 365), '<',
                 "the second one is satisfied for $R \\ll P^{\\frac{346}{365}-\\varepsilon}$ "
                 "which is indeed true under the assumption $R \\le R_0$"));
  // Weyl window compatibility: phi_1 >= R^{1/3} P^{-3} for r in [0, q]
  v.push_back(mk("weyl-window-lower-r0", Rat(-3), phi1(0), 'l',
                 "$\\phi_1 \\gg \\frac{R^{1/3+\\varepsilon}}{P^3}$"));
  v.push_back(mk("weyl-window-lower-rq", q / 3 - 3, phi1(q), 'l',
                 "$\\phi_1 \\gg \\frac{R^{1/3+\\varepsilon}}{P^3}$"));
  // phi_2 <= P^{-12/11} R^{-15/11} solves to r <= 346/365
  {
    // (15/11 - 7/10) r <= 43/25 - 12/11
    Rat solved = (Rat(43, 25) - Rat(12, 11)) / (Rat(15, 11) - Rat(7, 10));
    v.push_back(mk("weyl-window-upper-threshold", solved, Rat(346, 365), '=',
                   "$\\phi_2 \\ll \\frac{1}{P^{12/11+\\varepsilon} R^{15/11}}$"));
  }
  v.push_back(mk("tiny-theta-contribution", 3 * q, Rat(22), '<',
                 "the contribution to the minor arcs coming from $|\\theta| \\le "
                 "\\frac{1}{P^s}$ is $O(Q^{n+1})$"));

  // e-exponents of the V-sum maximization, checked in two eta regimes
  struct Regime { Rat rho, eta_exp; const char* tag; };
  for (const Regime& reg : {Regime{Rat(1), Rat(-5, 2), "small-eta"},
                            Regime{Rat(1), Rat(-3, 2), "large-eta"}}) {
    for (int r = 0; r <= 2; ++r) {
      std::ostringstream name;
      name << "v-sum-e-exponent-r" << r << "-" << reg.tag;
      v.push_back(mk(name.str(), v_sum_max_exponent(r, reg.rho, reg.eta_exp),
                     v_sum_claimed_exponent(r, reg.rho, reg.eta_exp), '=',
                     "$e(0)=0$, $e(1)=\\frac{1}{2}$ and $e(r)=1$ for $r \\ge 2$"));
    }
  }

  // corrupted sentinel: must fail visibly (17/11 is not below 3/2)
  v.push_back(mk("sentinel-corrupted-q", Rat(17, 11), Rat(3, 2), '<',
                 "deliberately corrupted copy of the $Q = P^{13/11}$ check", true));
  return v;
}

std::vector<LedgerVerdict> exponent_ledger() {
  std::vector<LedgerVerdict> out;
  for (const auto& e : ledger_entries()) {
    bool pass = e.direction == '<'   ? e.lhs_exponent < e.rhs_exponent
                : e.direction == 'l' ? e.lhs_exponent <= e.rhs_exponent
                                     : e.lhs_exponent == e.rhs_exponent;
    out.push_back({e, pass, pass != e.expect_fail});
  }
  return out;
}

std::string ledger_tsv() {
  std::ostringstream os;
  os << "name\tlhs\trhs\tdirection\texpect_fail\tanchor\n";
  for (const auto& e : ledger_entries()) {
    os << e.name << "\t" << e.lhs_exponent << "\t" << e.rhs_exponent << "\t"
       << (e.direction == 'l' ? "<=" : std::string(1, e.direction)) << "\t"
       << (e.expect_fail ? 1 : 0) << "\t" << e.paper_anchor << "\n";
  }
  return os.str();
}

}  // namespace cubiq
