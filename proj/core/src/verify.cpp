#include "cubiq/verify.hpp"

#include "cubiq/circle.hpp"
#include "cubiq/field.hpp"
#include "cubiq/forms.hpp"
#include "cubiq/lattices.hpp"
#include "cubiq/lines.hpp"
#include "cubiq/sums.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace cubiq {

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

CubicForm diag_form(const FieldSpec& F, std::vector<AlgInt> a) {
  std::map<std::array<int, 3>, AlgInt> mons;
  for (int i = 0; i < int(a.size()); ++i) mons[{i + 1, i + 1, i + 1}] = a[std::size_t(i)];
  return CubicForm::from_monomials(F, int(a.size()), mons);
}

const char* kFourCubes =
    "field d=1\nvars s=4\nx1^3 : 1\nx2^3 : 1\nx3^3 : 1\nx4^3 : 1\n";

}  // namespace

CheckResult acceptance_dirichlet(bool quick) {
  Timer timer;
  CheckResult r{1, "dirichlet-approximation", true, "", 0};
  const int grid = quick ? 20 : 100;
  const int qmax = quick ? 4 : 8;
  long integral_checked = 0, fractional_checked = 0;
  for (auto d : {1, 3}) {
    FieldSpec F = make_field(d);
    for (int gx = 0; gx < grid && r.pass; ++gx)
      for (int gy = 0; gy < grid && r.pass; ++gy) {
        KVal a(Rat(gx, grid), Rat(gy, grid));
        for (int Q = 1; Q <= qmax && r.pass; ++Q) {
          auto ri = dirichlet_integral(a, Q, F);
          if (!(ri.error_height * Q <= 1) || ri.q.height() < 1 || ri.q.height() > Q) {
            r.pass = false;
            r.detail = "integral contract violated";
            break;
          }
          ++integral_checked;
          auto rf = dirichlet_fractional(a, Q, F);
          Rat N(rf.gamma.denom_ideal.norm);
          if (N > Rat(Q) * Q ||
              rf.error_height * rf.error_height * N * Q * Q > F.frac_c_sq) {
            r.pass = false;
            r.detail = "fractional contract violated";
            break;
          }
          ++fractional_checked;
        }
      }
  }
  if (r.pass) {
    std::ostringstream os;
    os << integral_checked << " integral + " << fractional_checked
       << " fractional instances over Q(i), Q(sqrt(-3)); C^2 = 2, 3";
    r.detail = os.str();
  }
  r.seconds = timer.elapsed();
  return r;
}

CheckResult acceptance_denominator_counts(bool quick) {
  Timer timer;
  CheckResult r{2, "denominator-ideal-class-counts", true, "", 0};
  FieldSpec F = make_field(1);
  Int bound = quick ? 20 : 60;
  Int classes = 0;
  for (const IdealRep& J : F.ideals_up_to(bound)) {
    auto cls = residues_with_denominator(J, F);
    classes += Int(cls.size());
    if (Int(cls.size()) > J.norm) {
      std::ostringstream os;
      os << "violation at ideal of norm " << J.norm << ": " << cls.size() << " classes";
      r.pass = false;
      r.detail = os.str();
      break;
    }
  }
  if (r.pass) {
    std::ostringstream os;
    os << classes << " classes over all ideals of norm <= " << bound << ", zero violations";
    r.detail = os.str();
  }
  r.seconds = timer.elapsed();
  return r;
}

CheckResult acceptance_divisibility(bool quick) {
  Timer timer;
  CheckResult r{3, "divisibility-lemma-sweep", true, "", 0};
  Int counterexamples = 0, tested = 0;
  for (auto d : {1, 3}) {
    FieldSpec F = make_field(d);
    auto sweep = divisibility_sweep(F, quick ? 10 : 25, quick ? 3 : 6, quick ? 10 : 20,
                                    F.divisibility_a0);
    counterexamples += sweep.counterexamples;
    tested += sweep.tested;
  }
  r.pass = counterexamples == 0;
  std::ostringstream os;
  os << tested << " hypothesis-satisfying instances, " << counterexamples
     << " counterexamples at the shipped A0";
  r.detail = os.str();
  r.seconds = timer.elapsed();
  return r;
}

CheckResult acceptance_shrinking(bool quick) {
  Timer timer;
  CheckResult r{4, "shrinking-lemma-suite", true, "", 0};
  // frozen regression constants per dimension, measured on this seeded suite
  const double c_m[5] = {0, 2.5, 4.0, 14.0, 16.0};
  std::mt19937 rng(101);
  std::uniform_int_distribution<int> unum(-6, 6), uden(1, 9);
  const int maps = quick ? 40 : 200;
  double worst = 0;
  for (int t = 0; t < maps && r.pass; ++t) {
    int m = 1 + int(rng() % 4);
    std::vector<std::vector<Rat>> L(static_cast<std::size_t>(m),
                                    std::vector<Rat>(static_cast<std::size_t>(m)));
    for (auto& row : L)
      for (auto& v : row) v = Rat(unum(rng), uden(rng));
    Rat Z(1, 1 << (1 + int(rng() % 3)));
    Rat a = std::vector<Rat>{Rat(1, 2), Rat(1), Rat(2), Rat(10)}[rng() % 4];
    auto res = shrink_check(L, a, Z);
    worst = std::max(worst, res.ratio / c_m[m]);
    if (res.ratio > c_m[std::size_t(m)]) {
      std::ostringstream os;
      os << "ratio " << res.ratio << " exceeds frozen C_" << m;
      r.pass = false;
      r.detail = os.str();
    }
    // reproducibility: permuting the condition rows leaves the counts fixed
    std::vector<std::vector<Rat>> LP(L.rbegin(), L.rend());
    auto res2 = shrink_check(LP, a, Z);
    if (res.n1 != res2.n1 || res.nz != res2.nz) {
      r.pass = false;
      r.detail = "counts changed under a permuted enumeration";
    }
  }
  if (r.pass) {
    std::ostringstream os;
    os << maps << " maps, worst ratio at " << worst << " of the frozen constants";
    r.detail = os.str();
  }
  r.seconds = timer.elapsed();
  return r;
}

CheckResult acceptance_multilinear(bool quick) {
  Timer timer;
  CheckResult r{5, "multilinear-identity", true, "", 0};
  std::mt19937 rng(103);
  const int trials = quick ? 5000 : 100000;
  std::uniform_int_distribution<int> uc(-5, 5), us(1, 4), uco(-8, 8);
  FieldSpec F1 = make_field(1), F3 = make_field(3);
  for (int t = 0; t < trials && r.pass; ++t) {
    const FieldSpec& F = (t % 2 == 0) ? F1 : F3;
    int s = us(rng);
    std::map<std::array<int, 3>, AlgInt> mons;
    std::uniform_int_distribution<int> uv(1, s);
    for (int k = 0; k < 4; ++k) {
      std::array<int, 3> t3 = {uv(rng), uv(rng), uv(rng)};
      std::sort(t3.begin(), t3.end());
      mons[t3] = AlgInt(uc(rng), uc(rng));
    }
    CubicForm C = CubicForm::from_monomials(F, s, mons);
    auto rv = [&]() {
      std::vector<AlgInt> v(static_cast<std::size_t>(s));
      for (auto& x : v) x = AlgInt(uco(rng), uco(rng));
      return v;
    };
    if (!multilinear_check(C, rv(), rv(), rv())) {
      r.pass = false;
      r.detail = "identity failed";
    }
  }
  if (r.pass) {
    std::ostringstream os;
    os << trials << " random exact triples, zero failures";
    r.detail = os.str();
  }
  r.seconds = timer.elapsed();
  return r;
}

CheckResult acceptance_sgamma_bound(bool quick) {
  Timer timer;
  CheckResult r{6, "sgamma-bound", true, "", 0};
  FieldSpec F = make_field(1);
  // diagonal s = 2 test family over Q(i)
  std::vector<CubicForm> forms = {
      diag_form(F, {AlgInt(1, 0), AlgInt(1, 0)}),
      diag_form(F, {AlgInt(1, 0), AlgInt(2, 0)}),
      diag_form(F, {AlgInt(1, 1), AlgInt(1, 0)}),
  };
  const double frozen = 2.0;  // |S_gamma| N^{-(2s - s/6)}, measured max 1.588 frozen with headroom
  const Int bound = quick ? 12 : 40;
  double worst = 0;
  auto residues = enumerate_residues(Rat(bound), F);
  for (const auto& C : forms) {
    for (const auto& gamma : residues) {
      auto s = complete_sum(C, gamma);
      double N = gamma.denom_ideal.norm.convert_to<double>();
      double scaled = std::abs(s.value) * std::pow(N, -(2.0 * C.s - C.s / 6.0));
      worst = std::max(worst, scaled);
      if (scaled > frozen) {
        std::ostringstream os;
        os << "scaled |S_gamma| = " << scaled << " at N = " << N;
        r.pass = false;
        r.detail = os.str();
      }
    }
    // representative independence, exhaustively for N <= 10
    for (const auto& gamma : enumerate_residues(10, F)) {
      auto fast = complete_sum(C, gamma);
      auto slow = complete_sum(C, gamma, {}, /*force_generic=*/true);
      if (std::abs(fast.value - slow.value) > 1e-7 * (1.0 + std::abs(fast.value))) {
        r.pass = false;
        r.detail = "diagonal and generic paths disagree";
      }
    }
  }
  if (r.pass) {
    std::ostringstream os;
    os << forms.size() << " forms, all classes N <= " << bound << "; max scaled value "
       << worst << " <= " << frozen;
    r.detail = os.str();
  }
  r.seconds = timer.elapsed();
  return r;
}

CheckResult acceptance_desk_asymptotic(bool quick) {
  Timer timer;
  CheckResult r{7, "desk-scale-asymptotic", false, "", 0};
  CubicForm C = parse_form(kFourCubes);
  Box box = Box::symmetric(4);
  DensityIntegralParams mc;
  mc.samples = quick ? 500'000 : 4'000'000;
  std::vector<Rat> Ps = quick ? std::vector<Rat>{Rat(5), Rat(10)}
                              : std::vector<Rat>{Rat(5), Rat(10), Rat(15), Rat(20)};
  auto rep = asymptotic_report(C, Ps, box, Rat(1, 7), mc);
  const AsymptoticRow& last = rep.rows.back();
  double lo = last.sigma_hat / 3.0, hi = 3.0 * last.sigma_hat;
  r.pass = last.np_scaled >= lo && last.np_scaled <= hi;
  std::ostringstream os;
  os << "N(" << last.P << ") = " << last.NP << ", N/P^2 = " << last.np_scaled
     << ", sigma_hat = " << last.sigma_hat << " (J = " << rep.integral_value << " +- "
     << rep.integral_err << "), window [" << lo << ", " << hi << "]"
     << "; the symmetric box is dominated by the rational linear subspaces "
        "x_j = -x_i (about 3(2P+1)^4 points), outside the theorem's s >= 14 regime";
  r.detail = os.str();
  r.seconds = timer.elapsed();
  return r;
}

CheckResult acceptance_ledger(bool quick) {
  (void)quick;
  Timer timer;
  CheckResult r{8, "exponent-ledger", true, "", 0};
  int entries = 0, sentinel = 0;
  for (const auto& v : exponent_ledger()) {
    ++entries;
    if (v.entry.expect_fail) {
      ++sentinel;
      if (v.pass) {
        r.pass = false;
        r.detail = "sentinel entry unexpectedly passed";
      }
    } else if (!v.pass) {
      r.pass = false;
      r.detail = "entry failed: " + v.entry.name;
    }
  }
  if (sentinel != 1) {
    r.pass = false;
    r.detail = "expected exactly one sentinel entry";
  }
  if (r.pass) {
    std::ostringstream os;
    os << entries - 1 << " exact rational inequalities pass; the corrupted sentinel fails";
    r.detail = os.str();
  }
  r.seconds = timer.elapsed();
  return r;
}

CheckResult acceptance_lines(bool quick) {
  (void)quick;
  Timer timer;
  CheckResult r{9, "lines-end-to-end", true, "", 0};
  CubicForm C4 = parse_form(kFourCubes);
  auto line = find_line_bounded(C4, 1);
  if (!line) {
    r.pass = false;
    r.detail = "no line found at height 1";
  } else {
    PencilExpansion pe = expand_pencil(C4, line->basis[0], {line->basis[1]});
    bool vanish = pe.c0.is_zero() && pe.quad[0].is_zero();
    for (const auto& [ij, c] : pe.lin) vanish = vanish && c.is_zero();
    for (const auto& [e, c] : pe.tail) vanish = vanish && c.is_zero();
    if (!vanish) {
      r.pass = false;
      r.detail = "found pair is not a line";
    }
  }
  if (r.pass) {
    CubicForm Cc = parse_form("field d=1\nvars s=3\nx1*x2^2 : 1\nx1*x3^2 : 1\n");
    LinearSpace V;
    V.dim = 1;
    V.basis = {{AlgInt(1, 0), AlgInt(0, 0), AlgInt(0, 0)},
               {AlgInt(0, 0), AlgInt(0, 1), AlgInt(1, 0)}};
    LinearSpace L = conjugate_descent(Cc, V);
    if (!L.is_rational() || L.dim != 1) {
      r.pass = false;
      r.detail = "descent output not a rational line";
    } else {
      PencilExpansion pe = expand_pencil(Cc, L.basis[0], {L.basis[1]});
      bool vanish = pe.c0.is_zero() && pe.quad[0].is_zero();
      for (const auto& [ij, c] : pe.lin) vanish = vanish && c.is_zero();
      for (const auto& [e, c] : pe.tail) vanish = vanish && c.is_zero();
      if (!vanish) {
        r.pass = false;
        r.detail = "descent output does not lie on the hypersurface";
      }
    }
  }
  if (r.pass) {
    auto sol = almost_prime_solution(C4, {Int(1), Int(-1), Int(1), Int(-1)},
                                     {Int(0), Int(0), Int(1), Int(-1)}, 1000);
    bool ok = sol.ap_center == 457 && sol.ap_step == 150;
    Int sum = 0;
    for (const auto& x : sol.x) sum += x * x * x;
    ok = ok && sum == 0;
    for (const auto& p : sol.p) ok = ok && is_prime(p);
    if (!ok) {
      r.pass = false;
      r.detail = "almost-prime solution invalid";
    } else {
      std::ostringstream os;
      os << "line found at B=1; descent returns {x1=0}; solution with AP (457, 150), "
            "all entries prime, exact zero";
      r.detail = os.str();
    }
  }
  r.seconds = timer.elapsed();
  return r;
}

CheckResult acceptance_orthogonality(bool quick) {
  Timer timer;
  CheckResult r{10, "orthogonality-sanity", true, "", 0};
  CubicForm C = parse_form("field d=1\nvars s=1\nx1^3 : 1\n");
  Box box = Box::symmetric(1);
  std::ostringstream os;
  for (long P = 2; P <= (quick ? 3 : 4); ++P) {
    Int exact = brute_count(C, P, box, CountPath::generic);
    auto q = torus_integral_S(C, P, box);
    double err = std::abs(q.real() - exact.convert_to<double>()) /
                 std::max(1.0, exact.convert_to<double>());
    os << "P=" << P << ": quadrature " << q.real() << " vs count " << exact << "; ";
    if (err > 0.01 || std::abs(q.imag()) > 0.01) {
      r.pass = false;
      r.detail = "quadrature disagrees with the exact count";
    }
  }
  if (r.pass) r.detail = os.str();
  r.seconds = timer.elapsed();
  return r;
}

std::vector<CheckResult> run_acceptance(bool quick) {
  std::vector<CheckResult> out;
  out.push_back(acceptance_dirichlet(quick));
  out.push_back(acceptance_denominator_counts(quick));
  out.push_back(acceptance_divisibility(quick));
  out.push_back(acceptance_shrinking(quick));
  out.push_back(acceptance_multilinear(quick));
  out.push_back(acceptance_sgamma_bound(quick));
  out.push_back(acceptance_desk_asymptotic(quick));
  out.push_back(acceptance_ledger(quick));
  out.push_back(acceptance_lines(quick));
  out.push_back(acceptance_orthogonality(quick));
  return out;
}

}  // namespace cubiq
