#include "doctest.h"
#include "support.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "oqsim/errors.hpp"
#include "oqsim/experiments.hpp"

using namespace oqsim;
using namespace testing;

namespace {

ExperimentConfig make(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  c.finalize();
  return c;
}

const TimeSeries& find(const std::vector<TimeSeries>& all, const std::string& label) {
  for (const auto& s : all)
    if (s.label == label) return s;
  throw std::runtime_error("missing series " + label);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("experiment names") {
  for (auto e : {Experiment::Reservoir, Experiment::Collisional, Experiment::AmplitudeDamping,
                 Experiment::Depolarizing, Experiment::PauliWork, Experiment::Capacity})
    CHECK(experiment_from_name(experiment_name(e)) == e);
  CHECK_THROWS_AS(experiment_from_name("teleport"), ArgumentError);
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  c.shots = 0;
  CHECK_THROWS_AS(c.finalize(), ArgumentError);
  c = ExperimentConfig{};
  c.p_grid = {0.2, 1.3};
  CHECK_THROWS_AS(c.finalize(), ArgumentError);
  c = ExperimentConfig{};
  c.n_max = 0;
  CHECK_THROWS_AS(c.finalize(), ArgumentError);
  c = ExperimentConfig{};
  c.ratios = {-1.0};
  CHECK_THROWS_AS(c.finalize(), ArgumentError);
  c = ExperimentConfig{};
  c.experiment = Experiment::PauliWork;
  c.t_max = kPi / 4;
  CHECK_THROWS_AS(c.finalize(), ArgumentError);
  c.t_max = 0.7;
  CHECK_NOTHROW(c.finalize());
  c = ExperimentConfig{};
  c.noise.eps2 = 2.0;
  CHECK_THROWS_AS(c.finalize(), ArgumentError);

  const auto ad = make(Experiment::AmplitudeDamping);
  CHECK(ad.ratios == std::vector<double>{0.2, 100.0});
  CHECK(make(Experiment::Capacity).ratios == std::vector<double>{100.0, 200.0, 400.0});
  CHECK(make(Experiment::Reservoir).p_grid.size() == 11);
}

TEST_CASE("config and noise JSON round trip") {
  ExperimentConfig c;
  c.experiment = Experiment::Capacity;
  c.shots = 777;
  c.seed = 0xfedcba9876543210ULL;
  c.mitigate = true;
  c.threads = 3;
  c.ratios = {100, 250};
  c.t_max = 1.5;
  c.points = 12;
  c.noise.eps1 = 0.002;
  c.noise.readout = {confusion_matrix(0.01, 0.03), confusion_matrix(0.02, 0.04)};
  c.noise_source = "custom.json";
  c.finalize();
  const ExperimentConfig back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(back.seed == c.seed);
  CHECK(back.noise.readout.size() == 2);

  // A manifest wraps the configuration under "config".
  const auto manifest = nlohmann::json{{"config", nlohmann::json::parse(config_to_json(c))}, {"version", "x"}};
  CHECK(config_to_json(config_from_json(manifest.dump())) == config_to_json(c));

  const NoiseModel n = noise_model_from_json(R"({"eps1": 0.0, "eps2": 0.02, "readout": [[[0.9, 0.2], [0.1, 0.8]]]})");
  CHECK(n.eps2 == 0.02);
  CHECK(n.readout[0](0, 1) == doctest::Approx(0.2));
  CHECK_THROWS_AS(noise_model_from_json(R"({"eps1": 0.0, "eps2": 0.02, "readout": [[[0.9, 0.2], [0.2, 0.8]]]})"),
                  ArgumentError);
  CHECK_THROWS_AS(noise_model_from_json("{"), ArgumentError);
  CHECK_THROWS_AS(config_from_json(R"({"experiment": "nope"})"), ArgumentError);
}

TEST_CASE("reservoir without noise stays within shot noise of theory") {
  ExperimentConfig c = make(Experiment::Reservoir);
  c.noise = NoiseModel::none();
  const auto r = run_experiment(c);
  REQUIRE(r.theory.size() == 4);
  for (const auto& th : r.theory) {
    const auto& sim = find(r.simulated, th.label);
    for (std::size_t i = 0; i < th.values.size(); ++i) {
      const double p = th.values[i];
      // Average of four runs of `shots` each; concavity bounds the spread.
      const double sigma = std::sqrt(std::max(0.0, p * (1 - p)) / (4.0 * static_cast<double>(c.shots)));
      CHECK(std::abs(sim.values[i] - p) <= 3 * sigma + 1e-12);
    }
  }
  const auto& psim = find(r.theory, "psi_minus");
  CHECK(psim.values.front() == doctest::Approx(0.25));
  CHECK(psim.values.back() == doctest::Approx(1.0));
}

TEST_CASE("collisional theory columns") {
  const auto r = run_experiment(make(Experiment::Collisional));
  const auto& corr = find(r.theory, "correlated");
  const auto& sep = find(r.theory, "separable");
  REQUIRE(corr.values.size() == 7);
  for (int n = 1; n <= 7; ++n) {
    CHECK(corr.times[static_cast<std::size_t>(n - 1)] == n);
    CHECK(corr.values[static_cast<std::size_t>(n - 1)] == doctest::Approx(std::cos(2 * n * kPi / 6)).epsilon(1e-12));
    CHECK(sep.values[static_cast<std::size_t>(n - 1)] == doctest::Approx(std::pow(0.5, n)).epsilon(1e-12));
  }
  // Under default noise the correlated series still oscillates.
  CHECK_FALSE(detect_revivals(find(r.simulated, "correlated"), 0.05).empty());
}

TEST_CASE("capacity theory has a zero interval followed by a revival") {
  ExperimentConfig c = make(Experiment::Capacity);
  c.ratios = {100};
  c.points = 200;
  const auto r = run_experiment(c);
  const auto& q = r.theory.front().values;
  CHECK(q.front() == doctest::Approx(1.0));
  const auto z = std::find(q.begin(), q.end(), 0.0);
  REQUIRE(z != q.end());
  CHECK(*std::max_element(z, q.end()) > 0.01);
}

TEST_CASE("amplitude damping and depolarizing without noise converge to theory") {
  for (auto e : {Experiment::AmplitudeDamping, Experiment::Depolarizing}) {
    ExperimentConfig c = make(e);
    c.noise = NoiseModel::none();
    c.shots = 1'000'000;
    c.points = 6;
    const auto r = run_experiment(c);
    for (const auto& th : r.theory) {
      const auto& sim = find(r.simulated, th.label);
      for (std::size_t i = 0; i < th.values.size(); ++i) {
        // Every simulated value is a mean of ±1 outcomes or a frequency, or a
        // smooth function of at most three such estimates.
        CHECK(std::abs(sim.values[i] - th.values[i]) <= 5 * 3 / std::sqrt(1'000'000.0));
      }
    }
  }
}

TEST_CASE("pauli-work theory") {
  const auto r = run_experiment(make(Experiment::PauliWork));
  const auto& eternal = find(r.theory, "eternal");
  CHECK(eternal.values.front() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(detect_revivals(eternal, 1e-6).empty());
  CHECK(find(r.theory, "tan").times.back() < kPi / 4);
}

TEST_CASE("results do not depend on the thread count") {
  for (auto e : {Experiment::Reservoir, Experiment::AmplitudeDamping, Experiment::PauliWork}) {
    ExperimentConfig a = make(e);
    a.shots = 1000;
    a.points = 8;
    a.mitigate = true;
    ExperimentConfig b = a;
    b.threads = 4;
    const auto ra = run_experiment(a), rb = run_experiment(b);
    CHECK(to_csv(ra.simulated) == to_csv(rb.simulated));
    CHECK(to_csv(ra.theory) == to_csv(rb.theory));
    ExperimentConfig other = a;
    other.seed = a.seed + 1;
    CHECK(to_csv(run_experiment(other).simulated) != to_csv(ra.simulated));
  }
}

TEST_CASE("write_outputs produces the bundle and the manifest replays") {
  const auto dir = std::filesystem::temp_directory_path() / "oqsim_test_outputs";
  std::filesystem::remove_all(dir);
  ExperimentConfig c = make(Experiment::Depolarizing);
  c.shots = 500;
  c.plot = c.dump_circuits = c.dump_channels = true;
  const auto r = run_experiment(c);
  write_outputs(c, r, dir.string(), 0.5);
  for (const char* f : {"theory.csv", "simulated.csv", "manifest.json", "plot.svg", "circuits.json", "channels.json"})
    CHECK(std::filesystem::exists(dir / f));
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest.at("version") == version());
  CHECK(manifest.at("wall_time_seconds") == 0.5);
  const ExperimentConfig replay = config_from_json(slurp(dir / "manifest.json"));
  CHECK(to_csv(run_experiment(replay).simulated) == slurp(dir / "simulated.csv"));
  const auto circuits = nlohmann::json::parse(slurp(dir / "circuits.json"));
  CHECK(circuits.size() == c.p_grid.size());
  std::filesystem::remove_all(dir);
}
