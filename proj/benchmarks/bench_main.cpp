#include <benchmark/benchmark.h>

#include "flatrat/commensurator.hpp"
#include "flatrat/dichotomy.hpp"
#include "flatrat/flat.hpp"
#include "flatrat/glz.hpp"
#include "flatrat/singular.hpp"

using namespace flatrat;
using E = RatExpr<Mat2>;

namespace {

E star(const Mat2& g) { return E::star(E::atom(g)); }
E star(E e) { return E::star(std::move(e)); }

FlatExpr single(FlatBranch b) {
  FlatExpr e;
  e.branches.push_back(std::move(b));
  return e;
}

}  // namespace

static void BM_SmithForm(benchmark::State& state) {
  Mat2 g(Rational(-27, 4), Rational(13, 6), Rational(29, 9), Rational(-8, 7));
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(g));
}
BENCHMARK(BM_SmithForm);

static void BM_GlzFromExpr(benchmark::State& state) {
  E e = E::concat({star(mats::T()), E::atom(mats::S()), star(E::union_of({E::atom(mats::L()), E::atom(mats::J())}))});
  for (auto _ : state) benchmark::DoNotOptimize(glz_from_expr(e));
}
BENCHMARK(BM_GlzFromExpr);

static void BM_GlzMember(benchmark::State& state) {
  GlzRat l = glz_from_expr(E::concat({star(mats::T()), E::atom(mats::S()), star(mats::L())}));
  Mat2 g = mat_pow(mats::T(), 7) * mats::S() * mat_pow(mats::L(), 5);
  for (auto _ : state) benchmark::DoNotOptimize(glz_member(g, l));
}
BENCHMARK(BM_GlzMember);

static void BM_EntrySet(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(entry_set(1, 2, state.range(0)));
}
BENCHMARK(BM_EntrySet)->Arg(0)->Arg(2);

static void BM_CosetReps(benchmark::State& state) {
  Mat2 g = Mat2::diag(1, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hg_coset_reps(g).size());
}
BENCHMARK(BM_CosetReps)->Arg(2)->Arg(6)->Arg(12);

static void BM_NormalizeFlat(benchmark::State& state) {
  FlatExpr e = single(FlatBranch::of(star(E::union_of({E::atom(mats::J()), E::atom(mats::S()), E::atom(mats::L())})))
                          .then(Mat2::diag(2, 1), E::atom(mats::S()))
                          .then(Mat2(1, 1, 0, 3), star(mats::T())));
  for (auto _ : state) benchmark::DoNotOptimize(normalize_flat(e).parts.size());
}
BENCHMARK(BM_NormalizeFlat)->Unit(benchmark::kMillisecond);

static void BM_FloDecide(benchmark::State& state) {
  FlatExpr e = single(FlatBranch::of(star(E::union_of({E::atom(Mat2::diag(1, 2)), E::atom(Mat2(1, 1, 0, 2))}))));
  Mat2 target = mat_pow(Mat2(1, 1, 0, 2), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(flo_decide(target, e).member);
}
BENCHMARK(BM_FloDecide)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_SingularMember(benchmark::State& state) {
  FlatExpr e = single(FlatBranch::of(E::concat({star(mats::L()), E::atom(mats::s0()), star(mats::L()),
                                                E::atom(Mat2(2, 1, 1, 1)), E::atom(mats::s0()), star(mats::T())})));
  for (auto _ : state) benchmark::DoNotOptimize(singular_member(Mat2(2, 6, 4, 12), e));
}
BENCHMARK(BM_SingularMember)->Unit(benchmark::kMillisecond);

static void BM_Classify(benchmark::State& state) {
  std::vector<Mat2> gens{Mat2::diag(2, 2), Mat2::diag(3, 3), Mat2::diag(6, 6), mats::T()};
  for (auto _ : state) benchmark::DoNotOptimize(classify_extension(gens).k);
}
BENCHMARK(BM_Classify);

BENCHMARK_MAIN();
