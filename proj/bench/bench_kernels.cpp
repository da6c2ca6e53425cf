// Serial reference against the OpenMP kernels on the same inputs.

#include <benchmark/benchmark.h>

#include <memory>

#include "shapekit/homology.hpp"
#include "shapekit/lifting.hpp"
#include "shapekit/nerve.hpp"
#include "shapekit/random.hpp"
#include "shapekit/shape.hpp"
#include "shapekit/simplicial.hpp"

using namespace shapekit;

namespace {

Exec mode(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

ComplexPtr share(Complex c) { return std::make_shared<const Complex>(std::move(c)); }

// Twice subdivided, so the chain complexes have a few thousand cells.
Complex fine(std::uint64_t seed) { return *subdivide(subdivide(share(random_complex(seed, 3, 30))).complex).complex; }

void BM_nerve(benchmark::State& state) {
  const auto c = simplex_category(2);
  for (auto _ : state) benchmark::DoNotOptimize(nerve(c, 4, 1u << 24, mode(state)));
}

void BM_chain_complex(benchmark::State& state) {
  const auto x = fine(8);
  for (auto _ : state) benchmark::DoNotOptimize(chain_complex(x, 3, mode(state)));
}

void BM_homology(benchmark::State& state) {
  const auto x = fine(8);
  for (auto _ : state) benchmark::DoNotOptimize(homology(x, 3, mode(state)));
}

void BM_enumerate_maps(benchmark::State& state) {
  const auto s = share(boundary(3));
  const auto t = share(subdivided_simplex(2));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_maps(s, t, 1u << 24, mode(state)));
}

void BM_boxslash(benchmark::State& state) {
  const auto tri = share(simplex(2));
  const auto h = share(horn(2, 1));
  const auto target = share(subdivided_simplex(2));
  const auto edge = share(simplex(1));
  // sd of the triangle collapsed onto an edge by its first vertex.
  const auto maps = enumerate_maps(target, edge);
  const ComplexMap p = maps[maps.size() / 2];
  for (auto _ : state) benchmark::DoNotOptimize(boxslash(inclusion(h, tri), p, 1u << 24, mode(state)));
}

void BM_shape(benchmark::State& state) {
  const auto base = std::make_shared<const FiniteCategory>(simplex_category(4, true));
  const auto x = presheaf_of(random_complex(8, 3, 30), base);
  for (auto _ : state) benchmark::DoNotOptimize(shape_invariants(x, 3, 1u << 24, mode(state)));
}

}  // namespace

BENCHMARK(BM_nerve)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_chain_complex)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_homology)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_enumerate_maps)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_boxslash)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_shape)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
