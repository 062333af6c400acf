#include "cli_app.hpp"

#include "cubiq/json_io.hpp"
#include "cubiq/version.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cubiq_cli {

using namespace cubiq;

namespace {

struct GlobalOpts {
  bool csv = false;
  std::string out_dir;
  std::uint64_t seed = 1;
  std::uint64_t max_points = 100'000'000;
  std::vector<std::string> argv_echo;
  std::vector<std::pair<std::string, std::string>> input_hashes;
};

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string read_file(GlobalOpts& g, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  std::string data = os.str();
  std::ostringstream hex;
  hex << "fnv1a64:" << std::hex << fnv1a64(data);
  g.input_hashes.push_back({path, hex.str()});
  return data;
}

CubicForm load_form(GlobalOpts& g, const std::string& path) {
  return parse_form(read_file(g, path));
}

void emit(const GlobalOpts& g, const Json& result, const std::string& csv = "") {
  if (g.csv && !csv.empty()) std::cout << csv;
  else std::cout << result.dump(2) << "\n";
  if (!g.out_dir.empty()) {
    std::filesystem::create_directories(g.out_dir);
    {
      std::ofstream out(g.out_dir + "/output.json", std::ios::binary);
      out << result.dump(2) << "\n";
    }
    if (!csv.empty()) {
      std::ofstream out(g.out_dir + "/output.csv", std::ios::binary);
      out << csv;
    }
    Json manifest;
    manifest["argv"] = g.argv_echo;
    manifest["version"] = cubiq::kVersion;
    manifest["seed"] = g.seed;
    manifest["max_points"] = g.max_points;
    Json inputs = Json::object();
    for (const auto& [p, h] : g.input_hashes) inputs[p] = h;
    manifest["inputs"] = inputs;
    std::ofstream out(g.out_dir + "/manifest.json", std::ios::binary);
    out << manifest.dump(2) << "\n";
  }
}

Budget budget_of(const GlobalOpts& g) {
  Budget b;
  b.max_points = g.max_points;
  return b;
}

KVal parse_kval(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("expected two comma-separated coordinates: " + text);
  return KVal(rat_from_string(text.substr(0, comma)), rat_from_string(text.substr(comma + 1)));
}

std::vector<AlgInt> parse_alg_vec(const std::string& text) {
  std::vector<AlgInt> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    auto comma = part.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("expected a,b pairs separated by ';': " + text);
    out.emplace_back(Int(part.substr(0, comma)), Int(part.substr(comma + 1)));
  }
  return out;
}

std::vector<Int> parse_int_vec(const std::string& text) {
  std::vector<Int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) out.emplace_back(part);
  return out;
}

ResidueClass parse_residue(const std::string& text, const FieldSpec& F) {
  std::stringstream ss(text);
  std::string na, nb, den;
  if (!std::getline(ss, na, ',') || !std::getline(ss, nb, ',') || !std::getline(ss, den))
    throw std::invalid_argument("expected gamma as na,nb,den: " + text);
  return make_residue(FieldElem(AlgInt(Int(na), Int(nb)), Int(den)), F);
}

Box parse_box(const std::string& kind, int s) {
  if (kind == "symmetric") return Box::symmetric(s);
  if (kind == "unit") return Box::unit(s);
  throw std::invalid_argument("box must be 'unit' or 'symmetric'");
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"circle-method computations for cubic forms over imaginary quadratic fields"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOpts g;
  g.argv_echo = args;
  if (const char* env = std::getenv("CUBIQ_MAX_POINTS")) g.max_points = std::strtoull(env, nullptr, 10);
  app.add_flag("--csv", g.csv, "emit CSV instead of JSON where available");
  app.add_option("--out", g.out_dir, "directory for output.json/csv plus a run manifest");
  app.add_option("--seed", g.seed, "seed for randomized verifiers (default 1)");
  app.add_option("--max-points", g.max_points, "enumeration budget (env CUBIQ_MAX_POINTS)");

  // --- field ------------------------------------------------------------
  auto* field = app.add_subcommand("field", "field and ideal arithmetic");
  field->require_subcommand(1);
  {
    auto* make = field->add_subcommand("make", "construct a field spec");
    auto d = std::make_shared<std::int64_t>(1);
    make->add_option("--d", *d, "squarefree d of Q(sqrt(-d))")->required();
    make->callback([&g, d] { emit(g, json_of(make_field(*d))); });

    auto* res = field->add_subcommand("residues", "classes with N(a_gamma) <= R");
    auto rd = std::make_shared<std::int64_t>(1);
    auto rr = std::make_shared<std::string>("1");
    res->add_option("--d", *rd)->required();
    res->add_option("--R", *rr)->required();
    res->callback([&g, rd, rr] {
      FieldSpec F = make_field(*rd);
      Json out = Json::array();
      for (const auto& r : enumerate_residues(rat_from_string(*rr), F)) out.push_back(json_of(r));
      emit(g, out);
    });

    auto* dir = field->add_subcommand("dirichlet", "Dirichlet approximation of alpha");
    auto dd = std::make_shared<std::int64_t>(1);
    auto alpha = std::make_shared<std::string>();
    auto Q = std::make_shared<std::string>("1");
    auto frac = std::make_shared<bool>(false);
    dir->add_option("--d", *dd)->required();
    dir->add_option("--alpha", *alpha, "coordinates a,b (rationals)")->required();
    dir->add_option("--Q", *Q)->required();
    dir->add_flag("--fractional", *frac, "use the fractional form");
    dir->callback([&g, dd, alpha, Q, frac] {
      FieldSpec F = make_field(*dd);
      KVal a = parse_kval(*alpha);
      auto r = *frac ? dirichlet_fractional(a, rat_from_string(*Q), F)
                     : dirichlet_integral(a, rat_from_string(*Q), F);
      emit(g, json_of(r));
    });

    auto* sh = field->add_subcommand("shortest", "shortest nonzero element of an ideal");
    auto sd = std::make_shared<std::int64_t>(1);
    auto hnf = std::make_shared<std::string>();
    sh->add_option("--d", *sd)->required();
    sh->add_option("--ideal", *hnf, "HNF as JSON [[a,b],[0,c]]")->required();
    sh->callback([&g, sd, hnf] {
      FieldSpec F = make_field(*sd);
      IdealRep J = ideal_from_json(Json::parse(*hnf), F);
      emit(g, json_of(shortest_element(J, F)));
    });

    auto* it = field->add_subcommand("integral-check", "trace-form integrality test");
    auto id = std::make_shared<std::int64_t>(1);
    auto ia = std::make_shared<std::string>();
    it->add_option("--d", *id)->required();
    it->add_option("--alpha", *ia)->required();
    it->callback([&g, id, ia] {
      FieldSpec F = make_field(*id);
      auto rep = is_integral_by_trace(parse_kval(*ia), F);
      emit(g, Json{{"integral", rep.verdict == IntegralityVerdict::premise_holds_and_integral},
                   {"failing_index", rep.failing_index}});
    });
  }

  // --- forms ------------------------------------------------------------
  auto* forms = app.add_subcommand("forms", "cubic forms, Hessians, rank scans");
  forms->require_subcommand(1);
  {
    auto* pf = forms->add_subcommand("parse", "parse and echo a form file");
    auto path = std::make_shared<std::string>();
    pf->add_option("--form", *path)->required();
    pf->callback([&g, path] {
      CubicForm C = load_form(g, *path);
      Json tensor = Json::object();
      for (const auto& [t, c] : C.tensor) {
        std::ostringstream key;
        key << t[0] << "," << t[1] << "," << t[2];
        tensor[key.str()] = json_of(c);
      }
      emit(g, Json{{"s", C.s}, {"field", json_of(C.field)}, {"canonical", print_form(C)},
                   {"tensor", tensor}, {"diagonal", C.is_diagonal()}});
    });

    auto* scan = forms->add_subcommand("scan", "rank distribution of |x| < H");
    auto path2 = std::make_shared<std::string>();
    auto H = std::make_shared<std::int64_t>(2);
    scan->add_option("--form", *path2)->required();
    scan->add_option("--H", *H)->required();
    scan->callback([&g, path2, H] {
      CubicForm C = load_form(g, *path2);
      auto res = geometric_condition_scan(C, *H, budget_of(g));
      emit(g, json_of(res), csv_of(res));
    });

    auto* rk = forms->add_subcommand("rank", "rank of the Hessian at a point");
    auto path3 = std::make_shared<std::string>();
    auto x = std::make_shared<std::string>();
    auto prime_over = std::make_shared<std::int64_t>(0);
    auto prime_index = std::make_shared<int>(0);
    rk->add_option("--form", *path3)->required();
    rk->add_option("--x", *x, "point as a1,b1;a2,b2;...")->required();
    rk->add_option("--prime-over", *prime_over, "also reduce modulo a prime over p");
    rk->add_option("--prime-index", *prime_index, "which prime over p (0 or 1)");
    rk->callback([&g, path3, x, prime_over, prime_index] {
      CubicForm C = load_form(g, *path3);
      auto xv = parse_alg_vec(*x);
      Json out{{"rank", rank_at(C, xv)}};
      if (*prime_over > 0) {
        auto primes = C.field.primes_above(*prime_over);
        out["rank_mod"] = rank_mod(C, xv, primes.at(std::size_t(*prime_index)));
      }
      emit(g, out);
    });
  }

  // --- sums -------------------------------------------------------------
  auto* sums = app.add_subcommand("sums", "exponential sums and counting functions");
  sums->require_subcommand(1);
  {
    auto* wy = sums->add_subcommand("weyl", "S(alpha; P)");
    auto path = std::make_shared<std::string>();
    auto alpha = std::make_shared<std::string>();
    auto P = std::make_shared<std::string>("4");
    auto box = std::make_shared<std::string>("symmetric");
    wy->add_option("--form", *path)->required();
    wy->add_option("--alpha", *alpha)->required();
    wy->add_option("--P", *P)->required();
    wy->add_option("--box", *box, "unit | symmetric");
    wy->callback([&g, path, alpha, P, box] {
      CubicForm C = load_form(g, *path);
      auto r = weyl_sum(C, parse_kval(*alpha), rat_from_string(*P), parse_box(*box, C.s),
                        budget_of(g));
      emit(g, json_of(r));
    });

    auto* cs = sums->add_subcommand("complete", "S_gamma over residues mod N(a_gamma)");
    auto path2 = std::make_shared<std::string>();
    auto gamma = std::make_shared<std::string>();
    cs->add_option("--form", *path2)->required();
    cs->add_option("--gamma", *gamma, "na,nb,den")->required();
    cs->callback([&g, path2, gamma] {
      CubicForm C = load_form(g, *path2);
      auto r = complete_sum(C, parse_residue(*gamma, C.field), budget_of(g));
      emit(g, json_of(r));
    });

    auto* cn = sums->add_subcommand("count-n", "N(alpha, P) or N(alpha, P, h)");
    auto path3 = std::make_shared<std::string>();
    auto alpha3 = std::make_shared<std::string>();
    auto P3 = std::make_shared<std::string>("3");
    auto h3 = std::make_shared<std::string>();
    auto lit = std::make_shared<bool>(false);
    cn->add_option("--form", *path3)->required();
    cn->add_option("--alpha", *alpha3)->required();
    cn->add_option("--P", *P3)->required();
    cn->add_option("--hvec", *h3, "shift vector a,b;...: switches to N(alpha,P,h)");
    cn->add_flag("--literal-six", *lit, "use the literal factor-6 normalization");
    cn->callback([&g, path3, alpha3, P3, h3, lit] {
      CubicForm C = load_form(g, *path3);
      KVal a = parse_kval(*alpha3);
      Rat P = rat_from_string(*P3);
      Int count = h3->empty() ? count_N(C, a, P, *lit, budget_of(g))
                              : count_N_h(C, a, P, parse_alg_vec(*h3), *lit, budget_of(g));
      emit(g, Json{{"count", str_of(count)}});
    });

    auto* ts = sums->add_subcommand("t-sum", "differenced sum T(h, beta)");
    auto path4 = std::make_shared<std::string>();
    auto beta = std::make_shared<std::string>();
    auto h4 = std::make_shared<std::string>();
    auto P4 = std::make_shared<std::string>("4");
    auto box4 = std::make_shared<std::string>("symmetric");
    ts->add_option("--form", *path4)->required();
    ts->add_option("--beta", *beta)->required();
    ts->add_option("--hvec", *h4)->required();
    ts->add_option("--P", *P4)->required();
    ts->add_option("--box", *box4);
    ts->callback([&g, path4, beta, h4, P4, box4] {
      CubicForm C = load_form(g, *path4);
      auto r = t_sum(C, parse_alg_vec(*h4), parse_kval(*beta), rat_from_string(*P4),
                     parse_box(*box4, C.s), budget_of(g));
      emit(g, json_of(r));
    });

    auto* ms = sums->add_subcommand("mean-square", "M(alpha, kappa)");
    auto path5 = std::make_shared<std::string>();
    auto alpha5 = std::make_shared<std::string>();
    auto kappa = std::make_shared<std::string>("1/8");
    auto P5 = std::make_shared<std::string>("3");
    auto nodes = std::make_shared<int>(0);
    auto box5 = std::make_shared<std::string>("symmetric");
    ms->add_option("--form", *path5)->required();
    ms->add_option("--alpha", *alpha5)->required();
    ms->add_option("--kappa", *kappa)->required();
    ms->add_option("--P", *P5)->required();
    ms->add_option("--nodes", *nodes, "nodes per axis (0 = resolution rule)");
    ms->add_option("--box", *box5);
    ms->callback([&g, path5, alpha5, kappa, P5, nodes, box5] {
      CubicForm C = load_form(g, *path5);
      GridSpec grid;
      grid.nodes = *nodes;
      auto r = mean_square(C, parse_kval(*alpha5), rat_from_string(*kappa),
                           rat_from_string(*P5), parse_box(*box5, C.s), grid, budget_of(g));
      emit(g, json_of(r));
    });

    auto* vw = sums->add_subcommand("verify-weyl", "measured vs Weyl bound");
    auto path6 = std::make_shared<std::string>();
    auto gamma6 = std::make_shared<std::string>();
    auto theta6 = std::make_shared<std::string>("0,0");
    auto P6 = std::make_shared<std::string>("3");
    auto eps = std::make_shared<double>(0.1);
    vw->add_option("--form", *path6)->required();
    vw->add_option("--gamma", *gamma6)->required();
    vw->add_option("--theta", *theta6);
    vw->add_option("--P", *P6);
    vw->add_option("--eps", *eps);
    vw->callback([&g, path6, gamma6, theta6, P6, eps] {
      CubicForm C = load_form(g, *path6);
      std::vector<WeylSample> samples = {{parse_residue(*gamma6, C.field),
                                          parse_kval(*theta6), rat_from_string(*P6)}};
      auto rows = verify_weyl_bound(C, samples, Box::symmetric(C.s), *eps, budget_of(g));
      Json out = Json::array();
      for (const auto& r : rows) out.push_back(json_of(r));
      emit(g, out, csv_of(rows));
    });
  }

  // --- lattices -----------------------------------------------------------
  auto* lat = app.add_subcommand("lattices", "shrinking, divisibility, Lambda(h), minima");
  lat->require_subcommand(1);
  {
    auto* shr = lat->add_subcommand("shrink", "Davenport shrinking-lemma counts");
    auto L = std::make_shared<std::string>();
    auto a = std::make_shared<std::string>("1");
    auto Z = std::make_shared<std::string>("1/2");
    shr->add_option("--L", *L, "rows as r11,r12;r21,r22 (rationals)")->required();
    shr->add_option("--a", *a);
    shr->add_option("--Z", *Z);
    shr->callback([&g, L, a, Z] {
      std::vector<std::vector<Rat>> rows;
      std::stringstream ss(*L);
      std::string rowtext;
      while (std::getline(ss, rowtext, ';')) {
        std::vector<Rat> row;
        std::stringstream rs(rowtext);
        std::string cell;
        while (std::getline(rs, cell, ',')) row.push_back(rat_from_string(cell));
        rows.push_back(row);
      }
      emit(g, json_of(shrink_check(rows, rat_from_string(*a), rat_from_string(*Z),
                                   budget_of(g))));
    });

    auto* divq = lat->add_subcommand("divisibility", "single divisibility-lemma instance");
    auto dd = std::make_shared<std::int64_t>(1);
    auto gam = std::make_shared<std::string>();
    auto th = std::make_shared<std::string>("0,0");
    auto M = std::make_shared<std::string>("1");
    auto P0 = std::make_shared<std::string>("1");
    auto A = std::make_shared<std::string>();
    auto m = std::make_shared<std::string>("0,0");
    divq->add_option("--d", *dd)->required();
    divq->add_option("--gamma", *gam)->required();
    divq->add_option("--theta", *th);
    divq->add_option("--M", *M);
    divq->add_option("--P0", *P0);
    divq->add_option("--A", *A, "defaults to the shipped A0");
    divq->add_option("--m", *m);
    divq->callback([&g, dd, gam, th, M, P0, A, m] {
      FieldSpec F = make_field(*dd);
      auto mv = parse_alg_vec(*m);
      Rat Aval = A->empty() ? F.divisibility_a0 : rat_from_string(*A);
      auto rep = divisibility_check(F, parse_residue(*gam, F), parse_kval(*th),
                                    rat_from_string(*M), rat_from_string(*P0), Aval, mv.at(0));
      emit(g, json_of(rep));
    });

    auto* sw = lat->add_subcommand("sweep", "exhaustive divisibility sweep");
    auto sd = std::make_shared<std::int64_t>(1);
    auto nb = std::make_shared<std::int64_t>(25);
    auto mh = std::make_shared<std::int64_t>(6);
    auto grid = std::make_shared<int>(20);
    auto AA = std::make_shared<std::string>();
    sw->add_option("--d", *sd)->required();
    sw->add_option("--norm-bound", *nb);
    sw->add_option("--m-height", *mh);
    sw->add_option("--grid", *grid);
    sw->add_option("--A", *AA, "defaults to the shipped A0");
    sw->callback([&g, sd, nb, mh, grid, AA] {
      FieldSpec F = make_field(*sd);
      Rat Aval = AA->empty() ? F.divisibility_a0 : rat_from_string(*AA);
      emit(g, json_of(divisibility_sweep(F, *nb, *mh, *grid, Aval)));
    });

    auto* cal = lat->add_subcommand("calibrate", "binary-search the divisibility constant");
    auto cd = std::make_shared<std::int64_t>(1);
    auto cnb = std::make_shared<std::int64_t>(25);
    auto cmh = std::make_shared<std::int64_t>(6);
    auto cgrid = std::make_shared<int>(20);
    cal->add_option("--d", *cd)->required();
    cal->add_option("--norm-bound", *cnb);
    cal->add_option("--m-height", *cmh);
    cal->add_option("--grid", *cgrid);
    cal->callback([&g, cd, cnb, cmh, cgrid] {
      FieldSpec F = make_field(*cd);
      Rat a0 = calibrate_divisibility_constant(F, *cnb, *cmh, *cgrid);
      emit(g, Json{{"A0", str_of(a0)}});
    });

    auto* lh = lat->add_subcommand("lambda-h", "the bilinear divisibility lattice");
    auto path = std::make_shared<std::string>();
    auto h = std::make_shared<std::string>();
    auto q2 = std::make_shared<std::string>();
    lh->add_option("--form", *path)->required();
    lh->add_option("--hvec", *h)->required();
    lh->add_option("--q2", *q2, "ideal HNF as JSON")->required();
    lh->callback([&g, path, h, q2] {
      CubicForm C = load_form(g, *path);
      IdealRep q = ideal_from_json(Json::parse(*q2), C.field);
      auto latr = lambda_h(C, parse_alg_vec(*h), q);
      Json out = json_of(latr);
      out["rank_exponent"] = lambda_h_rank_exponent(C, parse_alg_vec(*h), q);
      emit(g, out);
    });

    auto* mn = lat->add_subcommand("minima", "successive minima and point counts");
    auto basis = std::make_shared<std::string>();
    auto countB = std::make_shared<std::string>("");
    mn->add_option("--basis", *basis, "square matrix as JSON")->required();
    mn->add_option("--count-B", *countB, "also count |x| <= B");
    mn->callback([&g, basis, countB] {
      IntegerLattice l;
      l.basis = hnf_cols_upper(imat_from_json(Json::parse(*basis)));
      l.dim = l.basis.rows;
      Json out = json_of(successive_minima(l, budget_of(g)));
      if (!countB->empty())
        out["count"] = str_of(count_points(l, int_from_string(*countB), budget_of(g)));
      emit(g, out);
    });
  }

  // --- circle ---------------------------------------------------------------
  auto* circ = app.add_subcommand("circle", "arcs, singular series/integral, N(P), ledger");
  circ->require_subcommand(1);
  {
    auto* cls = circ->add_subcommand("classify", "major/minor arc membership");
    auto d = std::make_shared<std::int64_t>(1);
    auto alpha = std::make_shared<std::string>();
    auto P = std::make_shared<std::string>("20");
    auto nu = std::make_shared<std::string>("1/7");
    cls->add_option("--d", *d)->required();
    cls->add_option("--alpha", *alpha)->required();
    cls->add_option("--P", *P);
    cls->add_option("--nu", *nu);
    cls->callback([&g, d, alpha, P, nu] {
      FieldSpec F = make_field(*d);
      ArcParams params(rat_from_string(*P), rat_from_string(*nu));
      auto c = classify_arc(parse_kval(*alpha), params, F);
      Json out{{"major", c.major}};
      if (c.gamma) out["gamma"] = json_of(*c.gamma);
      out["disjoint"] = arcs_disjoint(params, F);
      emit(g, out);
    });

    auto* ser = circ->add_subcommand("series", "truncated singular series");
    auto path = std::make_shared<std::string>();
    auto R = std::make_shared<std::string>("8");
    ser->add_option("--form", *path)->required();
    ser->add_option("--R", *R)->required();
    ser->callback([&g, path, R] {
      CubicForm C = load_form(g, *path);
      auto res = singular_series(C, rat_from_string(*R), budget_of(g));
      emit(g, json_of(res), csv_of(res));
    });

    auto* integ = circ->add_subcommand("integral", "singular integral (density default)");
    auto path2 = std::make_shared<std::string>();
    auto box2 = std::make_shared<std::string>("symmetric");
    auto samples = std::make_shared<std::uint64_t>(2'000'000);
    auto osc = std::make_shared<bool>(false);
    auto R2 = std::make_shared<std::string>("16384");
    auto nodes2 = std::make_shared<int>(24);
    integ->add_option("--form", *path2)->required();
    integ->add_option("--box", *box2);
    integ->add_option("--samples", *samples);
    integ->add_flag("--oscillatory", *osc, "evaluate the truncated oscillatory J(R)");
    integ->add_option("--R", *R2, "truncation for the oscillatory method");
    integ->add_option("--nodes", *nodes2);
    integ->callback([&g, path2, box2, samples, osc, R2, nodes2] {
      CubicForm C = load_form(g, *path2);
      Box box = parse_box(*box2, C.s);
      if (*osc) {
        double v = singular_integral_oscillatory(C, box, rat_from_string(*R2), Rat(1, 7),
                                                 *nodes2, budget_of(g));
        emit(g, Json{{"value", v}, {"method", "oscillatory"}});
      } else {
        DensityIntegralParams params;
        params.samples = *samples;
        params.seed = g.seed;
        emit(g, json_of(singular_integral_density(C, box, params)));
      }
    });

    auto* cnt = circ->add_subcommand("count", "exact N(P)");
    auto path3 = std::make_shared<std::string>();
    auto P3 = std::make_shared<std::string>("5");
    auto box3 = std::make_shared<std::string>("symmetric");
    auto pathsel = std::make_shared<std::string>("auto");
    cnt->add_option("--form", *path3)->required();
    cnt->add_option("--P", *P3)->required();
    cnt->add_option("--box", *box3);
    cnt->add_option("--path", *pathsel, "auto | generic | hash");
    cnt->callback([&g, path3, P3, box3, pathsel] {
      CubicForm C = load_form(g, *path3);
      CountPath cp = *pathsel == "generic" ? CountPath::generic
                     : *pathsel == "hash"  ? CountPath::hash_join
                                           : CountPath::automatic;
      Int n = brute_count(C, rat_from_string(*P3), parse_box(*box3, C.s), cp, budget_of(g));
      emit(g, Json{{"P", *P3}, {"count", str_of(n)}});
    });

    auto* rep = circ->add_subcommand("report", "N(P) vs sigma-hat sweep");
    auto path4 = std::make_shared<std::string>();
    auto Ps = std::make_shared<std::string>("5,10,15,20");
    auto box4 = std::make_shared<std::string>("symmetric");
    auto samples4 = std::make_shared<std::uint64_t>(2'000'000);
    rep->add_option("--form", *path4)->required();
    rep->add_option("--P", *Ps, "comma-separated list");
    rep->add_option("--box", *box4);
    rep->add_option("--samples", *samples4);
    rep->callback([&g, path4, Ps, box4, samples4] {
      CubicForm C = load_form(g, *path4);
      std::vector<Rat> plist;
      std::stringstream ss(*Ps);
      std::string part;
      while (std::getline(ss, part, ',')) plist.push_back(rat_from_string(part));
      DensityIntegralParams mc;
      mc.samples = *samples4;
      mc.seed = g.seed;
      auto res = asymptotic_report(C, plist, parse_box(*box4, C.s), Rat(1, 7), mc,
                                   budget_of(g));
      emit(g, json_of(res), csv_of(res));
    });

    auto* led = circ->add_subcommand("ledger", "exact exponent ledger");
    auto tsv = std::make_shared<bool>(false);
    led->add_flag("--tsv", *tsv, "emit the versioned TSV form");
    led->callback([&g, tsv] {
      if (*tsv) {
        std::cout << ledger_tsv();
        return;
      }
      auto verdicts = exponent_ledger();
      Json out = Json::array();
      for (const auto& v : verdicts) out.push_back(json_of(v));
      emit(g, out, csv_of(verdicts));
    });

    auto* asum = circ->add_subcommand("a-sum", "A(theta, R, H, P)");
    auto path5 = std::make_shared<std::string>();
    auto theta = std::make_shared<std::string>("0,0");
    auto R5 = std::make_shared<std::string>("2");
    auto H5 = std::make_shared<std::int64_t>(1);
    auto P5 = std::make_shared<std::string>("4");
    asum->add_option("--form", *path5)->required();
    asum->add_option("--theta", *theta);
    asum->add_option("--R", *R5);
    asum->add_option("--H", *H5);
    asum->add_option("--P", *P5);
    asum->callback([&g, path5, theta, R5, H5, P5] {
      CubicForm C = load_form(g, *path5);
      emit(g, json_of(a_sum(C, parse_kval(*theta), rat_from_string(*R5), *H5,
                            rat_from_string(*P5), budget_of(g))));
    });
  }

  // --- lines ------------------------------------------------------------------
  auto* lines = app.add_subcommand("lines", "rational lines and almost-prime solutions");
  lines->require_subcommand(1);
  {
    auto* find = lines->add_subcommand("find", "bounded exhaustive line search");
    auto path = std::make_shared<std::string>();
    auto bound = std::make_shared<std::int64_t>(1);
    find->add_option("--form", *path)->required();
    find->add_option("--bound", *bound)->required();
    find->callback([&g, path, bound] {
      CubicForm C = load_form(g, *path);
      auto line = find_line_bounded(C, *bound, budget_of(g));
      if (line) emit(g, Json{{"found", true}, {"line", json_of(*line)}});
      else emit(g, Json{{"found", false}, {"certified_height", *bound}});
    });

    auto* exp = lines->add_subcommand("expand", "pencil expansion pieces");
    auto path2 = std::make_shared<std::string>();
    auto v = std::make_shared<std::string>();
    auto w = std::make_shared<std::string>();
    exp->add_option("--form", *path2)->required();
    exp->add_option("--v", *v)->required();
    exp->add_option("--w", *w, "one or more vectors separated by '|'")->required();
    exp->callback([&g, path2, v, w] {
      CubicForm C = load_form(g, *path2);
      std::vector<std::vector<AlgInt>> ws;
      std::stringstream ss(*w);
      std::string part;
      while (std::getline(ss, part, '|')) ws.push_back(parse_alg_vec(part));
      emit(g, json_of(expand_pencil(C, parse_alg_vec(*v), ws)));
    });

    auto* desc = lines->add_subcommand("descend", "conjugate descent to a rational space");
    auto path3 = std::make_shared<std::string>();
    auto vline = std::make_shared<std::string>();
    desc->add_option("--form", *path3)->required();
    desc->add_option("--vline", *vline, "basis vectors separated by '|'")->required();
    desc->callback([&g, path3, vline] {
      CubicForm C = load_form(g, *path3);
      LinearSpace V;
      std::stringstream ss(*vline);
      std::string part;
      while (std::getline(ss, part, '|')) V.basis.push_back(parse_alg_vec(part));
      V.dim = int(V.basis.size()) - 1;
      emit(g, json_of(conjugate_descent(C, V)));
    });

    auto* norm = lines->add_subcommand("normalize", "line normalization");
    auto path4 = std::make_shared<std::string>();
    auto av = std::make_shared<std::string>();
    auto bv = std::make_shared<std::string>();
    norm->add_option("--form", *path4)->required();
    norm->add_option("--a", *av)->required();
    norm->add_option("--b", *bv)->required();
    norm->callback([&g, path4, av, bv] {
      CubicForm C = load_form(g, *path4);
      auto n = normalize_line(C, parse_int_vec(*av), parse_int_vec(*bv));
      Json c = Json::array(), b = Json::array(), deg = Json::array();
      for (const auto& x : n.c) c.push_back(str_of(x));
      for (const auto& x : n.b) b.push_back(str_of(x));
      for (bool x : n.degenerate) deg.push_back(x);
      emit(g, Json{{"c", c}, {"b", b}, {"degenerate", deg}});
    });

    auto* sieve = lines->add_subcommand("sieve", "prime arithmetic progression");
    auto M = std::make_shared<int>(1);
    auto bound2 = std::make_shared<std::string>("1000");
    sieve->add_option("--M", *M)->required();
    sieve->add_option("--bound", *bound2);
    sieve->callback([&g, M, bound2] {
      auto ap = prime_ap_sieve(*M, int_from_string(*bound2));
      if (ap)
        emit(g, Json{{"found", true}, {"center", str_of(ap->first)}, {"step", str_of(ap->second)}});
      else emit(g, Json{{"found", false}});
    });

    auto* ap = lines->add_subcommand("almost-prime", "verified almost-prime solution");
    auto path5 = std::make_shared<std::string>();
    auto av5 = std::make_shared<std::string>();
    auto bv5 = std::make_shared<std::string>();
    auto bound5 = std::make_shared<std::string>("1000000");
    ap->add_option("--form", *path5)->required();
    ap->add_option("--a", *av5)->required();
    ap->add_option("--b", *bv5)->required();
    ap->add_option("--bound", *bound5);
    ap->callback([&g, path5, av5, bv5, bound5] {
      CubicForm C = load_form(g, *path5);
      emit(g, json_of(almost_prime_solution(C, parse_int_vec(*av5), parse_int_vec(*bv5),
                                            int_from_string(*bound5))));
    });

    auto* beta = lines->add_subcommand("beta", "variable-count thresholds");
    auto m = std::make_shared<int>(1);
    auto dpar = std::make_shared<int>(0);
    beta->add_option("--m", *m)->required();
    beta->add_option("--dim", *dpar, "target linear-space dimension d");
    beta->callback([&g, m, dpar] {
      emit(g, Json{{"beta", str_of(beta_threshold(*m, *dpar))},
                   {"lines_threshold", str_of(lines_variable_threshold(*m))}});
    });
  }

  // --- verify-all ---------------------------------------------------------------
  auto* verify = app.add_subcommand("verify-all", "run the acceptance criteria");
  auto quick = std::make_shared<bool>(false);
  verify->add_flag("--quick", *quick, "reduced-scale tier");
  verify->callback([&g, quick] {
    auto results = run_acceptance(*quick);
    Json out = Json::array();
    int failures = 0;
    for (const auto& r : results) {
      out.push_back(json_of(r));
      std::cerr << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << "  " << r.name
                << "  " << r.detail << "\n";
      if (!r.pass) ++failures;
    }
    emit(g, out);
    if (failures > 0) throw CLI::RuntimeError(1);
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace cubiq_cli
