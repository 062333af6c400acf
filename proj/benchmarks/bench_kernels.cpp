// Microbenchmarks for the enumeration-heavy kernels.

#include <benchmark/benchmark.h>

#include "cubiq/circle.hpp"
#include "cubiq/field.hpp"
#include "cubiq/forms.hpp"
#include "cubiq/lattices.hpp"
#include "cubiq/sums.hpp"

using namespace cubiq;

namespace {

const char* kFourCubes =
    "field d=1\nvars s=4\nx1^3 : 1\nx2^3 : 1\nx3^3 : 1\nx4^3 : 1\n";
const char* kTwoCubes = "field d=1\nvars s=2\nx1^3 : 1\nx2^3 : 1\n";

void BM_dirichlet_integral(benchmark::State& state) {
  FieldSpec F = make_field(1);
  KVal alpha(Rat(37, 100), Rat(41, 100));
  for (auto _ : state)
    benchmark::DoNotOptimize(dirichlet_integral(alpha, state.range(0), F));
}
BENCHMARK(BM_dirichlet_integral)->Arg(4)->Arg(8)->Arg(16);

void BM_dirichlet_fractional(benchmark::State& state) {
  FieldSpec F = make_field(1);
  KVal alpha(Rat(37, 100), Rat(41, 100));
  for (auto _ : state)
    benchmark::DoNotOptimize(dirichlet_fractional(alpha, state.range(0), F));
}
BENCHMARK(BM_dirichlet_fractional)->Arg(4)->Arg(8);

void BM_denominator_ideal(benchmark::State& state) {
  FieldSpec F = make_field(1);
  FieldElem g(AlgInt(17, 23), 40);
  for (auto _ : state) benchmark::DoNotOptimize(denominator_ideal(g, F));
}
BENCHMARK(BM_denominator_ideal);

void BM_brute_count_join(benchmark::State& state) {
  CubicForm C = parse_form(kFourCubes);
  Box box = Box::symmetric(4);
  for (auto _ : state)
    benchmark::DoNotOptimize(brute_count(C, state.range(0), box, CountPath::hash_join));
}
BENCHMARK(BM_brute_count_join)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_brute_count_generic(benchmark::State& state) {
  CubicForm C = parse_form(kFourCubes);
  Box box = Box::symmetric(4);
  for (auto _ : state)
    benchmark::DoNotOptimize(brute_count(C, state.range(0), box, CountPath::generic));
}
BENCHMARK(BM_brute_count_generic)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_complete_sum_diagonal(benchmark::State& state) {
  CubicForm C = parse_form(kTwoCubes);
  FieldSpec F = C.field;
  ResidueClass g = make_residue(FieldElem(AlgInt(1, 2), state.range(0)), F);
  for (auto _ : state) benchmark::DoNotOptimize(complete_sum(C, g));
}
BENCHMARK(BM_complete_sum_diagonal)->Arg(8)->Arg(16)->Arg(32);

void BM_complete_sum_generic(benchmark::State& state) {
  CubicForm C = parse_form(kTwoCubes);
  FieldSpec F = C.field;
  ResidueClass g = make_residue(FieldElem(AlgInt(1, 2), state.range(0)), F);
  for (auto _ : state)
    benchmark::DoNotOptimize(complete_sum(C, g, {}, /*force_generic=*/true));
}
BENCHMARK(BM_complete_sum_generic)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_weyl_sum(benchmark::State& state) {
  CubicForm C = parse_form(kTwoCubes);
  Box box = Box::symmetric(2);
  KVal alpha(Rat(1, 3), Rat(2, 7));
  for (auto _ : state)
    benchmark::DoNotOptimize(weyl_sum(C, alpha, state.range(0), box));
}
BENCHMARK(BM_weyl_sum)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_geometric_scan(benchmark::State& state) {
  CubicForm C = parse_form(kTwoCubes);
  for (auto _ : state)
    benchmark::DoNotOptimize(geometric_condition_scan(C, state.range(0)));
}
BENCHMARK(BM_geometric_scan)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_successive_minima(benchmark::State& state) {
  FieldSpec F = make_field(1);
  CubicForm C = parse_form(kTwoCubes);
  IdealRep q2 = F.primes_above(13)[0];
  auto lat = lambda_h(C, {AlgInt(2, 1), AlgInt(1, -1)}, q2);
  for (auto _ : state) benchmark::DoNotOptimize(successive_minima(lat));
}
BENCHMARK(BM_successive_minima)->Unit(benchmark::kMillisecond);

void BM_singular_integral_mc(benchmark::State& state) {
  CubicForm C = parse_form(kFourCubes);
  Box box = Box::symmetric(4);
  DensityIntegralParams params;
  params.samples = std::uint64_t(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(singular_integral_density(C, box, params));
}
BENCHMARK(BM_singular_integral_mc)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
