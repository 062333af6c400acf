#include "cubiq/forms.hpp"

#include "cubiq/enumerate.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace cubiq {

namespace {

std::array<int, 3> sorted_triple(int i, int j, int k) {
  std::array<int, 3> t = {i, j, k};
  std::sort(t.begin(), t.end());
  return t;
}

// number of distinct permutations of the index multiset
int multiplicity(const std::array<int, 3>& t) {
  if (t[0] == t[1] && t[1] == t[2]) return 1;
  if (t[0] == t[1] || t[1] == t[2]) return 3;
  return 6;
}

}  // namespace

CubicForm CubicForm::zero(const FieldSpec& F, int s) {
  CubicForm c;
  c.field = F;
  c.s = s;
  return c;
}

CubicForm CubicForm::from_monomials(const FieldSpec& F, int s,
                                    const std::map<std::array<int, 3>, AlgInt>& mons) {
  if (s < 1) throw std::invalid_argument("cubic form needs at least one variable");
  CubicForm c;
  c.field = F;
  c.s = s;
  for (const auto& [t, a] : mons) {
    if (t[0] < 1 || t[2] > s) throw std::invalid_argument("monomial index out of range");
    if (a.is_zero()) continue;
    c.monomials[t] = a;
    // 6C spread uniformly over the distinct permutations of (i,j,k)
    Int m(multiplicity(t));
    c.tensor[t] = AlgInt(6 * a.a / m, 6 * a.b / m);
  }
  return c;
}

const AlgInt& CubicForm::coeff(int i, int j, int k) const {
  static const AlgInt zero_coeff;
  auto it = tensor.find(sorted_triple(i, j, k));
  return it == tensor.end() ? zero_coeff : it->second;
}

AlgInt CubicForm::eval(const std::vector<AlgInt>& x) const {
  AlgInt acc;
  for (const auto& [t, a] : monomials) {
    AlgInt m = field.mul(field.mul(x[t[0] - 1], x[t[1] - 1]), x[t[2] - 1]);
    acc = acc + field.mul(a, m);
  }
  return acc;
}

KVal CubicForm::eval(const std::vector<KVal>& x) const {
  KVal acc(Rat(0), Rat(0), true);
  for (const auto& [t, a] : monomials) {
    KVal m = field.mul(field.mul(x[t[0] - 1], x[t[1] - 1]), x[t[2] - 1]);
    acc = acc + field.mul(KVal::of(a), m);
  }
  return acc;
}

KApprox CubicForm::eval(const std::vector<KApprox>& x) const {
  KApprox acc;
  for (const auto& [t, a] : monomials) {
    KApprox m = field.mul(field.mul(x[t[0] - 1], x[t[1] - 1]), x[t[2] - 1]);
    KApprox am{double(a.a.convert_to<double>()), double(a.b.convert_to<double>())};
    KApprox p = field.mul(am, m);
    acc.a += p.a;
    acc.b += p.b;
  }
  return acc;
}

AlgInt CubicForm::contract(const std::vector<AlgInt>& x) const {
  AlgInt acc;
  for (const auto& [t, c] : tensor) {
    AlgInt m = field.mul(field.mul(x[t[0] - 1], x[t[1] - 1]), x[t[2] - 1]);
    acc = acc + (field.mul(c, m) * Int(multiplicity(t)));
  }
  return acc;
}

bool CubicForm::is_diagonal() const {
  for (const auto& [t, a] : monomials)
    if (!(t[0] == t[1] && t[1] == t[2])) return false;
  return true;
}

std::vector<AlgInt> CubicForm::diagonal_coeffs() const {
  if (!is_diagonal()) throw std::invalid_argument("diagonal_coeffs: form is not diagonal");
  std::vector<AlgInt> out(static_cast<std::size_t>(s));
  for (const auto& [t, a] : monomials) out[std::size_t(t[0] - 1)] = a;
  return out;
}

// --- parsing -----------------------------------------------------------------

namespace {

void strip_spaces(std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  s = out;
}

// coefficient grammar: term (('+'|'-') term)*, term = int | [int'*']'w'
AlgInt parse_coeff(const std::string& text) {
  AlgInt acc;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    Int sign = 1;
    if (text[pos] == '+') { ++pos; }
    else if (text[pos] == '-') { sign = -1; ++pos; }
    else if (!first) throw std::invalid_argument("malformed coefficient: " + text);
    first = false;
    Int mag;
    bool have_digits = false;
    std::string digits;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      digits += text[pos++];
    if (!digits.empty()) { mag = Int(digits); have_digits = true; }
    bool is_w = false;
    if (pos < text.size() && (text[pos] == 'w' || text[pos] == '*')) {
      if (text[pos] == '*') {
        ++pos;
        if (pos >= text.size() || text[pos] != 'w')
          throw std::invalid_argument("malformed coefficient: " + text);
      }
      is_w = true;
      ++pos;
    }
    if (!have_digits && !is_w) throw std::invalid_argument("malformed coefficient: " + text);
    if (!have_digits) mag = 1;
    if (is_w) acc.b += sign * mag;
    else acc.a += sign * mag;
  }
  if (first) throw std::invalid_argument("empty coefficient");
  return acc;
}

// monomial grammar: factor ('*' factor)*, factor = x<idx>['^'<exp>]
std::array<int, 3> parse_monomial(const std::string& text, int s) {
  std::vector<int> idx;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] != 'x') throw std::invalid_argument("non-cubic monomial: " + text);
    ++pos;
    std::string digits;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      digits += text[pos++];
    if (digits.empty()) throw std::invalid_argument("malformed variable in: " + text);
    int v = std::stoi(digits);
    if (v < 1 || v > s) throw std::invalid_argument("variable index out of range in: " + text);
    int e = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      std::string ed;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
        ed += text[pos++];
      if (ed.empty()) throw std::invalid_argument("malformed exponent in: " + text);
      e = std::stoi(ed);
    }
    for (int t = 0; t < e; ++t) idx.push_back(v);
    if (pos < text.size()) {
      if (text[pos] != '*') throw std::invalid_argument("malformed monomial: " + text);
      ++pos;
    }
  }
  if (idx.size() != 3) throw std::invalid_argument("non-cubic monomial: " + text);
  return sorted_triple(idx[0], idx[1], idx[2]);
}

}  // namespace

CubicForm parse_form(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  long d = -1;
  int s = -1;
  std::map<std::array<int, 3>, AlgInt> mons;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    strip_spaces(line);
    if (line.empty()) continue;
    if (line.rfind("fieldd=", 0) == 0) {
      d = std::stol(line.substr(7));
      continue;
    }
    if (line.rfind("varss=", 0) == 0) {
      s = std::stoi(line.substr(6));
      continue;
    }
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("malformed form line: " + line);
    if (d < 0 || s < 0)
      throw std::invalid_argument("form file must declare field and vars before monomials");
    auto t = parse_monomial(line.substr(0, colon), s);
    AlgInt a = parse_coeff(line.substr(colon + 1));
    auto [it, fresh] = mons.emplace(t, a);
    if (!fresh) it->second = it->second + a;
  }
  if (d < 0 || s < 0) throw std::invalid_argument("form file must declare field and vars");
  return CubicForm::from_monomials(make_field(d), s, mons);
}

std::string print_form(const CubicForm& C) {
  std::ostringstream out;
  out << "field d=" << C.field.d << "\n";
  out << "vars s=" << C.s << "\n";
  for (const auto& [t, a] : C.monomials) {
    // monomial
    out << "x" << t[0];
    if (t[1] == t[0]) {
      if (t[2] == t[0]) out << "^3";
      else out << "^2*x" << t[2];
    } else {
      if (t[2] == t[1]) out << "*x" << t[1] << "^2";
      else out << "*x" << t[1] << "*x" << t[2];
    }
    out << " : ";
    // coefficient a + b*w
    if (a.b == 0) out << a.a;
    else {
      if (a.a != 0) {
        out << a.a;
        if (a.b > 0) out << "+";
      }
      if (a.b == -1) out << "-";
      else if (a.b != 1) out << a.b << "*";
      out << "w";
    }
    out << "\n";
  }
  return out.str();
}

// --- bilinear forms, Hessian, ranks -------------------------------------------

AlgInt bilinear(const CubicForm& C, int i, const std::vector<AlgInt>& x,
                const std::vector<AlgInt>& y) {
  if (i < 1 || i > C.s) throw std::invalid_argument("bilinear: index out of range");
  AlgInt acc;
  for (int j = 1; j <= C.s; ++j) {
    if (x[std::size_t(j - 1)].is_zero()) continue;
    for (int k = 1; k <= C.s; ++k) {
      const AlgInt& c = C.coeff(i, j, k);
      if (c.is_zero() || y[std::size_t(k - 1)].is_zero()) continue;
      acc = acc + C.field.mul(c, C.field.mul(x[std::size_t(j - 1)], y[std::size_t(k - 1)]));
    }
  }
  return acc;
}

HessianMatrix hessian(const CubicForm& C, const std::vector<AlgInt>& x) {
  HessianMatrix m;
  m.base_point = x;
  m.s = C.s;
  m.entries.assign(std::size_t(C.s) * C.s, AlgInt());
  for (const auto& [t, c] : C.tensor) {
    // distribute c over all permutations (i; j, k) of the triple
    std::array<std::array<int, 3>, 6> perms = {{{t[0], t[1], t[2]},
                                                {t[0], t[2], t[1]},
                                                {t[1], t[0], t[2]},
                                                {t[1], t[2], t[0]},
                                                {t[2], t[0], t[1]},
                                                {t[2], t[1], t[0]}}};
    int np = multiplicity(t);
    // unique permutations only: dedupe via a tiny linear scan
    std::array<std::array<int, 3>, 6> seen{};
    int nseen = 0;
    for (const auto& p : perms) {
      bool dup = false;
      for (int q = 0; q < nseen; ++q)
        if (seen[std::size_t(q)] == p) { dup = true; break; }
      if (dup) continue;
      seen[std::size_t(nseen++)] = p;
      m.entries[std::size_t(p[1] - 1) * C.s + (p[2] - 1)] =
          m.entries[std::size_t(p[1] - 1) * C.s + (p[2] - 1)] +
          C.field.mul(c, x[std::size_t(p[0] - 1)]);
    }
    (void)np;
  }
  return m;
}

namespace {

// Bareiss fraction-free rank over O (exact divisions by previous pivots).
int bareiss_rank(const FieldSpec& F, std::vector<AlgInt> m, int n) {
  int rank_out = 0;
  AlgInt prev = AlgInt::one();
  auto at = [&](int i, int j) -> AlgInt& { return m[std::size_t(i) * n + j]; };
  int k = 0;
  while (k < n) {
    int pi = -1, pj = -1;
    for (int i = k; i < n && pi < 0; ++i)
      for (int j = k; j < n; ++j)
        if (!at(i, j).is_zero()) { pi = i; pj = j; break; }
    if (pi < 0) break;
    if (pi != k)
      for (int j = 0; j < n; ++j) std::swap(at(pi, j), at(k, j));
    if (pj != k)
      for (int i = 0; i < n; ++i) std::swap(at(i, pj), at(i, k));
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        AlgInt num = F.mul(at(i, j), at(k, k)) - F.mul(at(i, k), at(k, j));
        auto q = F.divide_exact(num, prev);
        if (!q) throw std::logic_error("bareiss: inexact division");
        at(i, j) = *q;
      }
    prev = at(k, k);
    ++rank_out;
    ++k;
  }
  return rank_out;
}

// residue field of a prime ideal: either F_p via a linear map or F_{p^2}
struct ResidueField {
  const FieldSpec* F;
  Int p;       // rational prime below
  bool deg2;   // inert prime: arithmetic mod p on both coordinates
  Int bshift;  // degree-1 case: x -> x.a - bshift * x.b (mod p)

  AlgInt reduce(const AlgInt& x) const {
    if (deg2) {
      Int a = x.a % p, b = x.b % p;
      if (a < 0) a += p;
      if (b < 0) b += p;
      return AlgInt(a, b);
    }
    Int a = (x.a - bshift * x.b) % p;
    if (a < 0) a += p;
    return AlgInt(a, 0);
  }
  bool is_zero(const AlgInt& x) const { return x.a == 0 && x.b == 0; }
  AlgInt mul(const AlgInt& x, const AlgInt& y) const { return reduce(F->mul(x, y)); }
  AlgInt sub(const AlgInt& x, const AlgInt& y) const { return reduce(x - y); }
  AlgInt inv(const AlgInt& x) const {
    // inverse via conj / norm; norm inverse mod p by Fermat
    AlgInt c = deg2 ? F->conj(x) : x;
    Int n = deg2 ? (F->norm(x) % p) : x.a;
    if (n < 0) n += p;
    // modular inverse by extended euclid
    Int a = n, b = p, x0 = 1, x1 = 0;
    while (b != 0) {
      Int q = a / b;
      Int t = a - q * b; a = b; b = t;
      t = x0 - q * x1; x0 = x1; x1 = t;
    }
    Int ninv = x0 % p;
    if (ninv < 0) ninv += p;
    return reduce(AlgInt(c.a * ninv, c.b * ninv));
  }
};

ResidueField make_residue_field(const FieldSpec& F, const IdealRep& p) {
  if (!F.is_prime_ideal(p)) throw std::invalid_argument("rank_mod: ideal is not prime");
  ResidueField rf;
  rf.F = &F;
  if (p.hnf.at(1, 1) == 1) {
    rf.p = p.hnf.at(0, 0);
    rf.deg2 = false;
    rf.bshift = p.hnf.at(0, 1);
  } else {
    rf.p = p.hnf.at(0, 0);
    rf.deg2 = true;
    rf.bshift = 0;
  }
  return rf;
}

}  // namespace

int rank_at(const CubicForm& C, const std::vector<AlgInt>& x) {
  HessianMatrix m = hessian(C, x);
  return bareiss_rank(C.field, m.entries, C.s);
}

int rank_mod(const CubicForm& C, const std::vector<AlgInt>& h, const IdealRep& p) {
  ResidueField rf = make_residue_field(C.field, p);
  HessianMatrix hm = hessian(C, h);
  std::vector<AlgInt> m(hm.entries.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = rf.reduce(hm.entries[i]);
  int n = C.s;
  auto at = [&](int i, int j) -> AlgInt& { return m[std::size_t(i) * n + j]; };
  int rank_out = 0;
  for (int k = 0; k < n; ++k) {
    int pi = -1, pj = -1;
    for (int i = k; i < n && pi < 0; ++i)
      for (int j = k; j < n; ++j)
        if (!rf.is_zero(at(i, j))) { pi = i; pj = j; break; }
    if (pi < 0) break;
    if (pi != k)
      for (int j = 0; j < n; ++j) std::swap(at(pi, j), at(k, j));
    if (pj != k)
      for (int i = 0; i < n; ++i) std::swap(at(i, pj), at(i, k));
    AlgInt pinv = rf.inv(at(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (rf.is_zero(at(i, k))) continue;
      AlgInt f = rf.mul(at(i, k), pinv);
      for (int j = k; j < n; ++j) at(i, j) = rf.sub(at(i, j), rf.mul(f, at(k, j)));
    }
    ++rank_out;
  }
  return rank_out;
}

GeometricScanResult geometric_condition_scan(const CubicForm& C, std::int64_t H,
                                             const Budget& budget) {
  if (H < 1) throw std::invalid_argument("geometric_condition_scan: H must be >= 1");
  Odometer od;
  for (int i = 0; i < 2 * C.s; ++i) od.ranges.push_back({-(H - 1), H - 1});
  budget.charge(od.count());
  GeometricScanResult res;
  std::vector<AlgInt> x(std::size_t(C.s));
  od.for_each([&](const std::vector<std::int64_t>& cur) {
    for (int i = 0; i < C.s; ++i) x[std::size_t(i)] = AlgInt(cur[2 * i], cur[2 * i + 1]);
    ++res.counts[rank_at(C, x)];
    ++res.total;
  });
  for (const auto& [r, cnt] : res.counts)
    res.ratios[r] = cnt.convert_to<double>() / std::pow(double(H), 2.0 * r);
  return res;
}

bool multilinear_check(const CubicForm& C, const std::vector<AlgInt>& w,
                       const std::vector<AlgInt>& h, const std::vector<AlgInt>& z) {
  auto c6 = [&](const std::vector<AlgInt>& v) { return C.contract(v); };
  auto add = [&](const std::vector<AlgInt>& x, const std::vector<AlgInt>& y) {
    std::vector<AlgInt> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
  };
  auto phi = [&](const std::vector<AlgInt>& zz) {
    AlgInt v = c6(add(add(w, h), zz)) - c6(add(w, zz)) - c6(add(h, zz)) + c6(zz);
    for (int i = 1; i <= C.s; ++i)
      v = v - (C.field.mul(zz[std::size_t(i - 1)], bilinear(C, i, w, h)) * Int(6));
    return v;
  };
  std::vector<AlgInt> zero(std::size_t(C.s));
  return phi(z) == phi(zero);
}

}  // namespace cubiq
