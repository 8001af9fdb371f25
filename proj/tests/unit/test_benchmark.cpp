#include "doctest.h"
#include "helpers.hpp"

#include "mocondg/benchmark.hpp"
#include "mocondg/errors.hpp"
#include "mocondg/registry.hpp"

#include <filesystem>

using namespace mocondg;
namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("mocondg_" + name);
  fs::remove_all(d);
  return d.string();
}

BenchmarkConfig small_config(const std::string& out) {
  BenchmarkConfig c;
  c.problems = {"BK1", "VU2"};
  c.starts = 3;
  c.seed = 5;
  c.out_dir = out;
  c.resume = false;
  return c;
}

}  // namespace

TEST_CASE("starting points") {
  const auto box = make_problem("BK1").box;
  const auto a = generate_starts(box, 100, 3), b = generate_starts(box, 100, 3);
  CHECK(a == b);
  for (const auto& x : a) CHECK(box.contains(x));

  const auto many = generate_starts(box, 10000, 4);
  Vector mean = Vector::Zero(2);
  for (const auto& x : many) mean += x;
  mean /= 10000.0;
  // uniform on [-5, 10]: sigma of the mean is 15 / sqrt(12 * 10^4)
  const double sigma = 15.0 / std::sqrt(12.0 * 10000.0);
  for (int i = 0; i < 2; ++i) CHECK(std::abs(mean(i) - 2.5) <= 3.0 * sigma);
}

TEST_CASE("instance plan") {
  const auto c = small_config("unused");
  const auto plan = plan_instances(c);
  CHECK(plan.size() == 12);
  CHECK(plan[0].problem == "BK1");
  CHECK(plan[0].solver == Method::CondG);
  CHECK(plan[3].solver == Method::ProxGrad);
}

TEST_CASE("config json") {
  auto c = small_config("x");
  c.delta_bars = {0.02, 0.1};
  c.dims["JOS1"] = 10;
  const auto back = BenchmarkConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  auto j = nlohmann::json(c.to_json());
  j["bogus"] = 1;
  CHECK_THROWS_AS(BenchmarkConfig::from_json(j), InvalidArgument);
  BenchmarkConfig bad;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("benchmark run, rerun and resume") {
  const std::string out = temp_dir("bench_unit");
  auto c = small_config(out);
  const auto r1 = run_benchmark(c);
  REQUIRE(r1.instances.size() == 12);
  CHECK(fs::exists(fs::path(out) / "results" / "manifest.json"));
  const auto r2 = run_benchmark(c);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(r1.instances[i].success == r2.instances[i].success);
    CHECK(r1.instances[i].iterations == r2.instances[i].iterations);
    CHECK(r1.instances[i].F_final == r2.instances[i].F_final);
  }
  int success = 0;
  for (const auto& r : r1.instances) success += r.success;
  CHECK(success >= 11);

  // resumed runs come from disk with the same content
  c.resume = true;
  int fresh = 0;
  const auto r3 = run_benchmark(c, [&](const InstanceResult&, std::size_t, std::size_t) { ++fresh; });
  for (std::size_t i = 0; i < 12; ++i) CHECK(r3.instances[i].F_final == r1.instances[i].F_final);

  const auto loaded = load_results(out);
  CHECK(loaded.instances.size() == 12);
  CHECK(loaded.instances[5].iterations == r1.instances[5].iterations);
  fs::remove_all(out);
}
