#include <benchmark/benchmark.h>

#include <fstream>
#include <iterator>
#include <string>

#include "cloudcost/elasticity.hpp"
#include "cloudcost/engine.hpp"
#include "cloudcost/model.hpp"
#include "cloudcost/pricing.hpp"

using namespace cloudcost;

namespace {

std::string data(const std::string& name) {
  std::ifstream in(std::string(CLOUDCOST_DATA_DIR) + "/" + name, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void BM_ParsePattern(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_pattern("temp: every jun-aug on weekends /2"));
  }
}
BENCHMARK(BM_ParsePattern);

void BM_MonthlySeries(benchmark::State& state) {
  const UsageSchedule s{QuantityClass::stock, 100,
                        parse_pattern_block("perm: every month +10, temp: every jun-aug on weekends /2, "
                                            "temp: every dec on 25-30 *2")};
  const YearMonth start(2011, 1);
  const YearMonth end = start.plus(static_cast<int>(state.range(0)) - 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(monthly_series(s, start, end));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonthlySeries)->Arg(12)->Arg(36)->Arg(120);

void BM_TieredPrice(benchmark::State& state) {
  RateEntry e{"p", "r", Dimension::data_out_gb, std::nullopt, TransferScope::internet, TieredPricing{}};
  auto& tiers = std::get<TieredPricing>(e.pricing).tiers;
  for (int i = 1; i <= 8; ++i) tiers.push_back({Quantity::from_units(i * 1000), Money::parse("0.15")});
  tiers.push_back({std::nullopt, Money::parse("0.05")});
  const Quantity q = Quantity::parse("7654.321");
  for (auto _ : state) {
    benchmark::DoNotOptimize(price_quantity(e, q));
  }
}
BENCHMARK(BM_TieredPrice);

void BM_SimulateDigitalLibrary(benchmark::State& state) {
  const DeploymentModel model = parse_model(data("digital_library.json"));
  const PriceCatalog catalog = load_catalog(data("demo_catalog.json"));
  const PurchasePlan plan = parse_purchase_plan(data("digital_library_plan.json"));
  const SimulationWindow window{YearMonth(2011, 1), YearMonth(2013, 12)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(model, catalog, window, plan));
  }
}
BENCHMARK(BM_SimulateDigitalLibrary)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
