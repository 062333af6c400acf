#include "cubiq/sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cubiq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Neumaier-compensated complex accumulator for reproducible summation.
struct Kahan {
  double s = 0, c = 0;
  void add(double v) {
    double t = s + v;
    if (std::abs(s) >= std::abs(v)) c += (s - t) + v;
    else c += (v - t) + s;
    s = t;
  }
  double get() const { return s + c; }
};

struct ComplexAcc {
  Kahan re, im;
  void add_phase(double t) {
    re.add(std::cos(kTwoPi * t));
    im.add(std::sin(kTwoPi * t));
  }
  std::complex<double> get() const { return {re.get(), im.get()}; }
};

// exact fractional part of (n1*a + n2*b)/D as a double in [0,1)
double phase_from_scaled(const Int& n1, const Int& n2, const AlgInt& m, const Int& D) {
  Int num = (n1 * m.a + n2 * m.b) % D;
  if (num < 0) num += D;
  return num.convert_to<double>() / D.convert_to<double>();
}

// trace pairing vector w = T * alpha as scaled integers over denominator D
struct TracePairing {
  Int n1, n2, D;
  bool exact;
  double w1, w2;  // used when not exact
};

TracePairing trace_pairing(const FieldSpec& F, const KVal& alpha, Int extra_mult = 1) {
  TracePairing tp;
  Rat t1 = (Rat(F.trace_form[0][0]) * alpha.a + Rat(F.trace_form[0][1]) * alpha.b) * extra_mult;
  Rat t2 = (Rat(F.trace_form[1][0]) * alpha.a + Rat(F.trace_form[1][1]) * alpha.b) * extra_mult;
  tp.exact = alpha.exact;
  if (tp.exact) {
    Int d1 = rat_den(t1), d2 = rat_den(t2);
    Int g = boost::multiprecision::gcd(d1, d2);
    tp.D = d1 / g * d2;
    tp.n1 = rat_num(t1) * (tp.D / d1);
    tp.n2 = rat_num(t2) * (tp.D / d2);
    tp.w1 = tp.w2 = 0;
  } else {
    tp.D = 1;
    tp.w1 = rat_to_double(t1);
    tp.w2 = rat_to_double(t2);
  }
  return tp;
}

double phase_of(const TracePairing& tp, const AlgInt& m) {
  if (tp.exact) return phase_from_scaled(tp.n1, tp.n2, m, tp.D);
  double t = tp.w1 * m.a.convert_to<double>() + tp.w2 * m.b.convert_to<double>();
  return t - std::floor(t);
}

std::int64_t floor_rat(const Rat& r) { return rat_floor(r).convert_to<std::int64_t>(); }
std::int64_t ceil_rat(const Rat& r) { return rat_ceil(r).convert_to<std::int64_t>(); }

// largest integer strictly below P in absolute-value sense: |m| < P
std::int64_t strict_bound(const Rat& P) {
  Int f = rat_floor(P);
  if (Rat(f) == P) f -= 1;
  return f.convert_to<std::int64_t>();
}

}  // namespace

Box Box::centered(const std::vector<KApprox>& z, const Rat& halfwidth) {
  Box b;
  b.kind = Kind::centered_at_z;
  b.s = int(z.size());
  b.center = z;
  for (const auto& zi : z) {
    Rat za(zi.a), zb(zi.b);
    b.bounds.push_back({za - halfwidth, za + halfwidth});
    b.bounds.push_back({zb - halfwidth, zb + halfwidth});
  }
  return b;
}

Odometer Box::lattice_ranges(const Rat& P) const {
  Odometer od;
  for (const auto& [lo, hi] : bounds)
    od.ranges.push_back({ceil_rat(P * lo), floor_rat(P * hi)});
  return od;
}

Rat Box::volume() const {
  Rat v = 1;
  for (const auto& [lo, hi] : bounds) v *= (hi - lo);
  return v;
}

void Box::validate_center(const CubicForm& C, double tol) const {
  if (kind != Kind::centered_at_z)
    throw std::invalid_argument("validate_center: box is not centered");
  if (int(center.size()) != C.s) throw std::invalid_argument("validate_center: dimension");
  KApprox v = C.eval(center);
  if (std::hypot(v.a, v.b) > tol)
    throw std::invalid_argument("validate_center: C(z) is not zero");
  for (const auto& zi : center)
    if (std::hypot(zi.a, zi.b) < tol)
      throw std::invalid_argument("validate_center: center has a zero coordinate");
  // dC/dx1(z) via the bilinear forms: 3 * c_{1jk} z_j z_k = B_1(z,z)/2 scale
  // is awkward numerically; use a central finite difference instead
  std::vector<KApprox> zp = center, zm = center;
  double h = 1e-5;
  zp[0].a += h;
  zm[0].a -= h;
  KApprox fp = C.eval(zp), fm = C.eval(zm);
  if (std::hypot(fp.a - fm.a, fp.b - fm.b) / (2 * h) < tol)
    throw std::invalid_argument("validate_center: dC/dx1(z) vanishes");
}

SumReport weyl_sum(const CubicForm& C, const KVal& alpha, const Rat& P, const Box& box,
                   const Budget& budget) {
  if (box.s != C.s) throw std::invalid_argument("weyl_sum: box dimension mismatch");
  Odometer od = box.lattice_ranges(P);
  budget.charge(od.count());
  TracePairing tp = trace_pairing(C.field, alpha);
  ComplexAcc acc;
  Int terms = 0;
  std::vector<AlgInt> x(std::size_t(C.s));
  od.for_each([&](const std::vector<std::int64_t>& cur) {
    for (int i = 0; i < C.s; ++i) x[std::size_t(i)] = AlgInt(cur[2 * i], cur[2 * i + 1]);
    acc.add_phase(phase_of(tp, C.eval(x)));
    ++terms;
  });
  SumReport r;
  r.value = acc.get();
  r.terms = terms;
  std::ostringstream ps;
  ps << "weyl_sum P=" << P << " alpha=(" << alpha.a << "," << alpha.b << ")";
  r.params = ps.str();
  return r;
}

SumReport complete_sum(const CubicForm& C, const ResidueClass& gamma, const Budget& budget,
                       bool force_generic) {
  const Int N = gamma.denom_ideal.norm;
  std::int64_t n = N.convert_to<std::int64_t>();
  SumReport r;
  std::ostringstream ps;
  ps << "complete_sum N=" << N << " gamma=(" << gamma.gamma.num.a << "+"
     << gamma.gamma.num.b << "w)/" << gamma.gamma.den;
  r.params = ps.str();

  TracePairing tp = trace_pairing(C.field, gamma.gamma.to_kval());
  if (C.is_diagonal() && !force_generic) {
    // product of one-variable complete sums
    Int per_var = N * N;
    budget.charge(per_var * C.s);
    std::complex<double> prod(1, 0);
    auto diag = C.diagonal_coeffs();
    for (int i = 0; i < C.s; ++i) {
      ComplexAcc acc;
      for (std::int64_t a = 0; a < n; ++a)
        for (std::int64_t b = 0; b < n; ++b) {
          AlgInt x(a, b);
          AlgInt v = C.field.mul(diag[std::size_t(i)],
                                 C.field.mul(x, C.field.mul(x, x)));
          acc.add_phase(phase_of(tp, v));
        }
      prod *= acc.get();
    }
    r.value = prod;
    r.terms = 1;
    for (int i = 0; i < 2 * C.s; ++i) r.terms *= N;
    return r;
  }

  Odometer od;
  for (int i = 0; i < 2 * C.s; ++i) od.ranges.push_back({0, n - 1});
  budget.charge(od.count());
  ComplexAcc acc;
  Int terms = 0;
  std::vector<AlgInt> x(std::size_t(C.s));
  od.for_each([&](const std::vector<std::int64_t>& cur) {
    for (int i = 0; i < C.s; ++i) x[std::size_t(i)] = AlgInt(cur[2 * i], cur[2 * i + 1]);
    acc.add_phase(phase_of(tp, C.eval(x)));
    ++terms;
  });
  r.value = acc.get();
  r.terms = terms;
  return r;
}

namespace {

// shared helper: all 2s torus conditions ||tr(mult * beta w_j B_i)|| < 1/P
bool bilinear_conditions_hold(const CubicForm& C, const TracePairing tp[2],
                              const std::vector<AlgInt>& bvals, const Rat& P) {
  // condition: torus distance of phase < 1/P, exact integer arithmetic:
  // with t = (n1 m.a + n2 m.b) mod D in [0,D), require min(t, D-t) * P < D
  for (int i = 0; i < int(bvals.size()); ++i) {
    for (int j = 0; j < 2; ++j) {
      const TracePairing& t = tp[j];
      if (t.exact) {
        Int num = (t.n1 * bvals[std::size_t(i)].a + t.n2 * bvals[std::size_t(i)].b) % t.D;
        if (num < 0) num += t.D;
        Int dist = std::min(num, Int(t.D - num));
        if (!(Rat(dist) * P < Rat(t.D))) return false;
      } else {
        double v = t.w1 * bvals[std::size_t(i)].a.convert_to<double>() +
                   t.w2 * bvals[std::size_t(i)].b.convert_to<double>();
        double fr = v - std::floor(v);
        double dist = std::min(fr, 1.0 - fr);
        if (!(dist < 1.0 / rat_to_double(P))) return false;
      }
    }
  }
  return true;
}

// trace pairings for beta*w_1 and beta*w_2 (the two basis multipliers)
void make_bilinear_pairings(const FieldSpec& F, const KVal& beta, bool literal_six,
                            TracePairing out[2]) {
  Int mult = literal_six ? 6 : 1;
  KVal bw1 = beta;
  KVal bw2 = F.mul(AlgInt(0, 1), beta);
  out[0] = trace_pairing(F, bw1, mult);
  out[1] = trace_pairing(F, bw2, mult);
}

}  // namespace

Int count_N(const CubicForm& C, const KVal& alpha, const Rat& P, bool literal_six,
            const Budget& budget) {
  std::int64_t B = strict_bound(P);
  Odometer od;
  for (int i = 0; i < 4 * C.s; ++i) od.ranges.push_back({-B, B});
  budget.charge(od.count());
  TracePairing tp[2];
  make_bilinear_pairings(C.field, alpha, literal_six, tp);
  Int count = 0;
  std::vector<AlgInt> x(std::size_t(C.s)), y(std::size_t(C.s)), bv(std::size_t(C.s));
  od.for_each([&](const std::vector<std::int64_t>& cur) {
    for (int i = 0; i < C.s; ++i) {
      x[std::size_t(i)] = AlgInt(cur[2 * i], cur[2 * i + 1]);
      y[std::size_t(i)] = AlgInt(cur[2 * C.s + 2 * i], cur[2 * C.s + 2 * i + 1]);
    }
    for (int i = 1; i <= C.s; ++i) bv[std::size_t(i - 1)] = bilinear(C, i, x, y);
    if (bilinear_conditions_hold(C, tp, bv, P)) ++count;
  });
  return count;
}

Int count_N_h(const CubicForm& C, const KVal& beta, const Rat& P,
              const std::vector<AlgInt>& h, bool literal_six, const Budget& budget) {
  std::int64_t B = strict_bound(P);
  Odometer od;
  for (int i = 0; i < 2 * C.s; ++i) od.ranges.push_back({-B, B});
  budget.charge(od.count());
  TracePairing tp[2];
  make_bilinear_pairings(C.field, beta, literal_six, tp);
  HessianMatrix M = hessian(C, h);
  Int count = 0;
  std::vector<AlgInt> w(std::size_t(C.s)), bv(std::size_t(C.s));
  od.for_each([&](const std::vector<std::int64_t>& cur) {
    for (int i = 0; i < C.s; ++i) w[std::size_t(i)] = AlgInt(cur[2 * i], cur[2 * i + 1]);
    // B_i(w, h) = (M(h) w)_i
    for (int i = 0; i < C.s; ++i) {
      AlgInt acc;
      for (int k = 0; k < C.s; ++k) acc = acc + C.field.mul(M.at(i, k), w[std::size_t(k)]);
      bv[std::size_t(i)] = acc;
    }
    if (bilinear_conditions_hold(C, tp, bv, P)) ++count;
  });
  return count;
}

SumReport t_sum(const CubicForm& C, const std::vector<AlgInt>& h, const KVal& beta,
                const Rat& P, const Box& box, const Budget& budget) {
  Odometer od = box.lattice_ranges(P);
  // restrict to y with y + h also in the box
  for (int i = 0; i < C.s; ++i) {
    std::int64_t ha = h[std::size_t(i)].a.convert_to<std::int64_t>();
    std::int64_t hb = h[std::size_t(i)].b.convert_to<std::int64_t>();
    auto& ra = od.ranges[std::size_t(2 * i)];
    auto& rb = od.ranges[std::size_t(2 * i + 1)];
    ra = {std::max(ra.first, ra.first - ha), std::min(ra.second, ra.second - ha)};
    rb = {std::max(rb.first, rb.first - hb), std::min(rb.second, rb.second - hb)};
  }
  budget.charge(od.count());
  TracePairing tp = trace_pairing(C.field, beta);
  ComplexAcc acc;
  Int terms = 0;
  std::vector<AlgInt> y(std::size_t(C.s)), yh(std::size_t(C.s));
  od.for_each([&](const std::vector<std::int64_t>& cur) {
    for (int i = 0; i < C.s; ++i) {
      y[std::size_t(i)] = AlgInt(cur[2 * i], cur[2 * i + 1]);
      yh[std::size_t(i)] = y[std::size_t(i)] + h[std::size_t(i)];
    }
    acc.add_phase(phase_of(tp, C.eval(yh) - C.eval(y)));
    ++terms;
  });
  SumReport r;
  r.value = acc.get();
  r.terms = terms;
  std::ostringstream ps;
  ps << "t_sum P=" << P;
  r.params = ps.str();
  return r;
}

namespace {

// histogram of form values over the dilated box
std::map<std::pair<Int, Int>, Int> value_histogram(const CubicForm& C, const Rat& P,
                                                   const Box& box, const Budget& budget,
                                                   Int& points) {
  Odometer od = box.lattice_ranges(P);
  budget.charge(od.count());
  std::map<std::pair<Int, Int>, Int> hist;
  points = 0;
  std::vector<AlgInt> x(std::size_t(C.s));
  od.for_each([&](const std::vector<std::int64_t>& cur) {
    for (int i = 0; i < C.s; ++i) x[std::size_t(i)] = AlgInt(cur[2 * i], cur[2 * i + 1]);
    AlgInt v = C.eval(x);
    ++hist[{v.a, v.b}];
    ++points;
  });
  return hist;
}

// integer trace coordinates tr(w_j m) of a value m
std::pair<Int, Int> trace_coords(const FieldSpec& F, const Int& ma, const Int& mb) {
  Int t1 = F.trace_form[0][0] * ma + F.trace_form[0][1] * mb;
  Int t2 = F.trace_form[1][0] * ma + F.trace_form[1][1] * mb;
  return {t1, t2};
}

}  // namespace

std::complex<double> torus_integral_S(const CubicForm& C, const Rat& P, const Box& box,
                                      int nodes, const Budget& budget) {
  Int points;
  auto hist = value_histogram(C, P, box, budget, points);
  // required resolution: strictly more than the largest |frequency|
  Int fmax = 0;
  for (const auto& [m, cnt] : hist) {
    auto [t1, t2] = trace_coords(C.field, m.first, m.second);
    fmax = std::max(fmax, std::max(abs_int(t1), abs_int(t2)));
  }
  int n = nodes > 0 ? nodes : int(2 * fmax.convert_to<std::int64_t>() + 1);
  // midpoint sums g(f) = (1/n) sum_k e(f (k + 1/2)/n), factored per axis
  std::map<Int, std::complex<double>> gcache;
  auto g = [&](const Int& f) {
    auto it = gcache.find(f);
    if (it != gcache.end()) return it->second;
    ComplexAcc acc;
    double fd = f.convert_to<double>();
    for (int k = 0; k < n; ++k) acc.add_phase(fd * (k + 0.5) / n);
    std::complex<double> v = acc.get() / double(n);
    gcache.emplace(f, v);
    return v;
  };
  Kahan re, im;
  for (const auto& [m, cnt] : hist) {
    auto [t1, t2] = trace_coords(C.field, m.first, m.second);
    std::complex<double> v = g(t1) * g(t2) * cnt.convert_to<double>();
    re.add(v.real());
    im.add(v.imag());
  }
  return {re.get(), im.get()};
}

MeanSquareResult mean_square(const CubicForm& C, const KVal& alpha, const Rat& kappa,
                             const Rat& P, const Box& box, const GridSpec& grid,
                             const Budget& budget) {
  if (kappa <= 0 || kappa >= 1)
    throw std::invalid_argument("mean_square: kappa must be in (0,1)");
  Int points;
  auto hist = value_histogram(C, P, box, budget, points);

  MeanSquareResult res;
  bool full_torus = (2 * kappa >= 1);
  Int fmax = 0;
  for (const auto& [m, cnt] : hist) {
    auto [t1, t2] = trace_coords(C.field, m.first, m.second);
    fmax = std::max(fmax, std::max(abs_int(t1), abs_int(t2)));
  }
  int n = grid.nodes;
  if (n == 0) {
    if (full_torus) {
      n = int(4 * fmax.convert_to<std::int64_t>() + 1);  // resolves |S|^2 frequencies
      res.exact_resolution = true;
    } else {
      // resolution rule: at least 8 nodes per oscillation length P^-3
      Rat needed = 16 * kappa * P * P * P;
      n = std::max<std::int64_t>(64, rat_ceil(needed).convert_to<std::int64_t>());
    }
  }
  if (n > grid.max_nodes && !res.exact_resolution)
    throw BudgetExceeded(std::uint64_t(n), std::uint64_t(grid.max_nodes));

  if (res.exact_resolution) {
    // factor the exactly-resolved quadrature through the pair histogram:
    // integral of |S|^2 = sum over value pairs of g(dt1) g(dt2)
    std::map<Int, std::complex<double>> gcache;
    auto g = [&](const Int& f) {
      auto it = gcache.find(f);
      if (it != gcache.end()) return it->second;
      ComplexAcc acc;
      double fd = f.convert_to<double>();
      for (int k = 0; k < n; ++k) acc.add_phase(fd * (k + 0.5) / n);
      std::complex<double> v = acc.get() / double(n);
      gcache.emplace(f, v);
      return v;
    };
    double scale = rat_to_double(2 * kappa) * rat_to_double(2 * kappa);
    Kahan total;
    for (const auto& [m, cnt] : hist)
      for (const auto& [m2, cnt2] : hist) {
        auto [t1, t2] = trace_coords(C.field, m.first - m2.first, m.second - m2.second);
        std::complex<double> gg = g(t1) * g(t2);
        total.add(gg.real() * cnt.convert_to<double>() * cnt2.convert_to<double>());
      }
    res.value = total.get() * scale;
    res.err_est = 1e-9 * std::abs(res.value);
    res.nodes_per_axis = n;
    return res;
  }

  // S(beta) on the node grid from the value histogram
  auto eval_M = [&](int nn) {
    double a0 = rat_to_double(alpha.a), b0 = rat_to_double(alpha.b);
    double k = rat_to_double(kappa);
    double t11 = double(C.field.trace_form[0][0]), t12 = double(C.field.trace_form[0][1]);
    double t21 = double(C.field.trace_form[1][0]), t22 = double(C.field.trace_form[1][1]);
    Kahan total;
    double cell = (2 * k / nn) * (2 * k / nn);
    for (int u = 0; u < nn; ++u)
      for (int v = 0; v < nn; ++v) {
        double ba = a0 - k + (u + 0.5) * (2 * k / nn);
        double bb = b0 - k + (v + 0.5) * (2 * k / nn);
        // w = T * beta
        double w1 = t11 * ba + t12 * bb;
        double w2 = t21 * ba + t22 * bb;
        ComplexAcc s;
        for (const auto& [m, cnt] : hist) {
          double t = w1 * m.first.convert_to<double>() + w2 * m.second.convert_to<double>();
          double c = cnt.convert_to<double>();
          t -= std::floor(t);
          s.re.add(c * std::cos(kTwoPi * t));
          s.im.add(c * std::sin(kTwoPi * t));
        }
        total.add(std::norm(s.get()) * cell);
      }
    return total.get();
  };
  res.value = eval_M(n);
  res.nodes_per_axis = n;
  if (grid.refine && !res.exact_resolution && 2 * n <= grid.max_nodes) {
    double m2 = eval_M(2 * n);
    res.err_est = std::abs(m2 - res.value) / 3.0;
    res.value = m2;
    res.nodes_per_axis = 2 * n;
  }
  return res;
}

std::vector<WeylBoundRow> verify_weyl_bound(const CubicForm& C,
                                            const std::vector<WeylSample>& samples,
                                            const Box& box, double eps,
                                            const Budget& budget) {
  std::vector<WeylBoundRow> rows;
  for (const auto& smp : samples) {
    Rat N(smp.gamma.denom_ideal.norm);
    Rat P = smp.P;
    if (N > P * P * P)
      throw std::invalid_argument("verify_weyl_bound: hypothesis N^{1/2} <= P^{3/2} violated");
    KVal alpha = smp.gamma.gamma.to_kval() + smp.theta;
    SumReport s = weyl_sum(C, alpha, P, box, budget);
    WeylBoundRow row;
    row.denom_norm = N;
    row.theta_height = rat_to_double(smp.theta.height());
    row.P = rat_to_double(P);
    row.measured = std::abs(s.value);
    double n12 = std::sqrt(rat_to_double(N));
    double th = row.theta_height;
    double inner;
    if (th == 0) inner = std::numeric_limits<double>::infinity();
    else inner = n12 * th + 1.0 / (n12 * th * std::pow(row.P, 3));
    row.rhs = std::pow(row.P, 2.0 * C.s + eps) * std::pow(inner, 2.0 * C.s / 8.0);
    row.ratio = std::isinf(row.rhs) ? 0.0 : row.measured / row.rhs;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cubiq
