#include <benchmark/benchmark.h>

#include <numbers>

#include "uaext/boundary.hpp"
#include "uaext/cole.hpp"

using namespace uaext;

namespace {

FunctionSystem disk_system(std::size_t boundary, int cap) {
  std::vector<std::vector<Complex>> raw;
  for (std::size_t j = 0; j < boundary; ++j)
    raw.push_back({std::polar(1.0, 2.0 * std::numbers::pi * double(j) / double(boundary))});
  for (double r : {0.2, 0.45, 0.7})
    for (std::size_t j = 0; j < boundary / 2; ++j)
      raw.push_back({std::polar(r, 2.0 * std::numbers::pi * (double(j) + 0.25) / double(boundary / 2))});
  const auto s = make_space(raw);
  CVector z(static_cast<Eigen::Index>(s->size()));
  for (std::size_t i = 0; i < s->size(); ++i) z[static_cast<Eigen::Index>(i)] = s->coord(i, 0);
  return generate_system(s, {FunctionTable(s, z, "z")}, cap);
}

void BM_ChoquetSerial(benchmark::State& state) {
  const auto sys = disk_system(static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(choquet_scan_serial(sys));
}

void BM_ChoquetParallel(benchmark::State& state) {
  const auto sys = disk_system(static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(choquet_scan(sys));
}

// Cubic t^3 - z t - 1/2 over every point of the grid.
std::vector<FunctionTable> cubic_coefficients(std::size_t boundary) {
  const auto sys = disk_system(boundary, 1);
  const auto& s = sys.space();
  const auto n = static_cast<Eigen::Index>(s->size());
  CVector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = s->coord(std::size_t(i), 0);
  return {FunctionTable(s, CVector::Constant(n, -0.5), "h0"), FunctionTable(s, -z, "h1"),
          FunctionTable(s, CVector::Zero(n), "h2")};
}

void BM_RootSlotsSerial(benchmark::State& state) {
  const auto h = cubic_coefficients(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(root_slots_serial(h));
}

void BM_RootSlotsParallel(benchmark::State& state) {
  const auto h = cubic_coefficients(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(root_slots(h));
}

}  // namespace

BENCHMARK(BM_RootSlotsSerial)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RootSlotsParallel)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChoquetSerial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChoquetParallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
