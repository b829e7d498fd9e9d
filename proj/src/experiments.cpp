#include "oqsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <thread>

#include "json.hpp"

#include "oqsim/decomp.hpp"
#include "oqsim/errors.hpp"
#include "oqsim/plot.hpp"
#include "oqsim/tomomit.hpp"

namespace oqsim {

using nlohmann::json;

std::string version() { return "0.1.0"; }

namespace {

constexpr std::pair<Experiment, const char*> kNames[] = {
    {Experiment::Reservoir, "reservoir"},       {Experiment::Collisional, "collisional"},
    {Experiment::AmplitudeDamping, "amplitude-damping"}, {Experiment::Depolarizing, "depolarizing"},
    {Experiment::PauliWork, "pauli-work"},      {Experiment::Capacity, "capacity"},
};

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return out;
}

double tan_limit(double omega) { return std::numbers::pi / (2.0 * omega); }

// Runs f(0..n-1) on a pool and returns results in index order. The first
// failing index (lowest) determines the rethrown exception.
template <class F>
auto parallel_map(std::size_t n, int threads, F f) -> std::vector<decltype(f(std::size_t{0}))> {
  using R = decltype(f(std::size_t{0}));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto count = static_cast<std::size_t>(std::max(1, threads));
  if (count == 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(count, n); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// Readout models restricted to the measured qubits.
std::vector<RealMatrix> readout_subset(const NoiseModel& noise, std::span<const int> qubits) {
  if (noise.readout.empty()) return {};
  std::vector<RealMatrix> out;
  for (int q : qubits) {
    if (noise.readout.size() == 1) {
      out.push_back(noise.readout.front());
    } else {
      if (q >= static_cast<int>(noise.readout.size()))
        throw ArgumentError("noise model has no readout matrix for qubit " + std::to_string(q));
      out.push_back(noise.readout[static_cast<std::size_t>(q)]);
    }
  }
  return out;
}

// Measures subsets of qubits, optionally through readout mitigation. The
// calibrations are prepared up front so that tasks only read them.
class Measurer {
 public:
  Measurer(const ExperimentConfig& cfg, std::vector<std::vector<int>> subsets, bool mitigate)
      : cfg_(cfg), mitigate_(mitigate) {
    for (std::size_t k = 0; k < subsets.size(); ++k) {
      const auto& keep = subsets[k];
      if (!mitigate_) continue;
      NoiseModel readout_only = NoiseModel::none();
      readout_only.readout = readout_subset(cfg.noise, keep);
      const std::uint64_t seed = splitmix64(cfg.seed ^ (0xca1bu + k));
      calibrations_.emplace(keep, measure_calibration(readout_only, static_cast<int>(keep.size()), cfg.shots, seed));
    }
  }

  RealVector distribution(const DensityMatrix& full, const std::vector<int>& keep, std::uint64_t seed) const {
    const DensityMatrix reduced = partial_trace(full, keep);
    const auto readout = readout_subset(cfg_.noise, keep);
    const Counts counts = sample_counts(reduced, cfg_.shots, readout, seed);
    if (!mitigate_) return counts.probabilities();
    return mitigate_counts(counts, calibrations_.at(keep)).probabilities;
  }

 private:
  const ExperimentConfig& cfg_;
  bool mitigate_;
  std::map<std::vector<int>, CalibrationMatrix> calibrations_;
};

DensityMatrix simulate(const Circuit& c, const NoiseModel& noise) { return run_noisy(c, noise); }

// Tomography of `keep` after `base`, one sampled record per setting.
DensityMatrix state_tomography(const Circuit& base, const std::vector<int>& keep, const ExperimentConfig& cfg,
                               const Measurer& measurer, std::uint64_t seed) {
  std::vector<TomographyData> data;
  const auto settings = tomography_settings(static_cast<int>(keep.size()));
  for (std::size_t k = 0; k < settings.size(); ++k) {
    Circuit c = base;
    for (std::size_t j = 0; j < keep.size(); ++j) append_basis_change(c, keep[j], settings[k][j]);
    data.push_back({settings[k], measurer.distribution(simulate(c, cfg.noise), keep, splitmix64(seed + k))});
  }
  return tomography(data);
}

double parity_expectation(const RealVector& p) {
  double e = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) e += (std::popcount(static_cast<unsigned>(i)) % 2 ? -1.0 : 1.0) * p(i);
  return e;
}

TimeSeries series(std::string label, std::vector<double> t, std::vector<double> v) {
  return {std::move(t), std::move(v), std::move(label)};
}

struct PointResult {
  std::vector<double> values;
  std::vector<NamedCircuit> circuits;
};

// ---------------------------------------------------------------------------

ExperimentResult run_reservoir(const ExperimentConfig& cfg) {
  using namespace pump_qubits;
  ExperimentResult r;
  r.title = "Bell-state pumping";
  r.x_label = "p";
  r.y_label = "Bell-state population";
  const auto& grid = cfg.p_grid;
  const char* names[4] = {"phi_plus", "psi_plus", "phi_minus", "psi_minus"};  // outcome index order
  const std::array<PureState, 4> bell = {PureState::phi_plus(), PureState::psi_plus(), PureState::phi_minus(),
                                         PureState::psi_minus()};

  const std::vector<int> keep{s1, s2};
  const Measurer measurer(cfg, {keep}, cfg.mitigate);
  auto points = parallel_map(grid.size(), cfg.threads, [&](std::size_t i) {
    PointResult out;
    out.values.assign(4, 0.0);
    const std::uint64_t sub = cfg.seed ^ i;
    for (int prep = 0; prep < 4; ++prep) {
      Circuit c = build_composed_pump_circuit(grid[i]);
      if (prep & 2) c.set_prep(s1, Prep::One);
      if (prep & 1) c.set_prep(s2, Prep::One);
      append_bell_measurement(c, s1, s2);
      const RealVector p = measurer.distribution(simulate(c, cfg.noise), keep, splitmix64(sub + static_cast<std::uint64_t>(prep)));
      for (int k = 0; k < 4; ++k) out.values[static_cast<std::size_t>(k)] += 0.25 * p(k);
      if (cfg.dump_circuits)
        out.circuits.push_back({"p=" + fmt_g(grid[i]) + "/prep=" + bitstring(static_cast<std::size_t>(prep), 2), c});
    }
    return out;
  });

  for (int k : {3, 0, 2, 1}) {
    std::vector<double> theory, sim;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const KrausChannel ch = compose(pump_xx(grid[i]), pump_zz(grid[i]));
      theory.push_back(overlap(ch.apply(DensityMatrix::maximally_mixed(2)), bell[static_cast<std::size_t>(k)]));
      sim.push_back(points[i].values[static_cast<std::size_t>(k)]);
    }
    r.theory.push_back(series(names[k], grid, theory));
    r.simulated.push_back(series(names[k], grid, sim));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (auto& c : points[i].circuits) r.circuits.push_back(std::move(c));
    if (cfg.dump_channels) r.channels.push_back({"p=" + fmt_g(grid[i]), compose(pump_xx(grid[i]), pump_zz(grid[i]))});
  }
  return r;
}

ExperimentResult run_collisional(const ExperimentConfig& cfg) {
  ExperimentResult r;
  r.title = "Collisional dephasing";
  r.x_label = "collisions n";
  r.y_label = "<sigma_x>";
  const int n_max = cfg.n_max;
  // The separable variant is never mitigated.
  const Measurer mitigated(cfg, {{0}}, cfg.mitigate);
  const Measurer raw(cfg, {{0}}, false);

  auto points = parallel_map(static_cast<std::size_t>(2 * n_max), cfg.threads, [&](std::size_t i) {
    const bool correlated = i < static_cast<std::size_t>(n_max);
    const int n = static_cast<int>(i % static_cast<std::size_t>(n_max)) + 1;
    const Circuit c = build_collisional_circuit(n, cfg.g_tau, correlated);
    const RealVector p = (correlated ? mitigated : raw).distribution(simulate(c, cfg.noise), {0}, splitmix64(cfg.seed ^ i));
    PointResult out;
    out.values = {p(0) - p(1)};
    if (cfg.dump_circuits)
      out.circuits.push_back({std::string(correlated ? "correlated" : "separable") + "/n=" + std::to_string(n), c});
    return out;
  });

  for (int v = 0; v < 2; ++v) {
    const bool correlated = v == 0;
    std::vector<double> ns, theory, sim;
    for (int n = 1; n <= n_max; ++n) {
      ns.push_back(n);
      const double w = correlated ? collisional_correlated_weight(n, cfg.g_tau) : collisional_separable_weight(n, cfg.g_tau);
      theory.push_back(2.0 * w - 1.0);
      auto& pt = points[static_cast<std::size_t>(v * n_max + n - 1)];
      sim.push_back(pt.values[0]);
      for (auto& c : pt.circuits) r.circuits.push_back(std::move(c));
      if (cfg.dump_channels)
        r.channels.push_back({std::string(correlated ? "correlated" : "separable") + "/n=" + std::to_string(n),
                              correlated ? collisional_correlated(n, cfg.g_tau) : collisional_separable(n, cfg.g_tau)});
    }
    const char* label = correlated ? "correlated" : "separable";
    r.theory.push_back(series(label, ns, theory));
    r.simulated.push_back(series(label, ns, sim));
  }
  return r;
}

double ad_default_t_max(double ratio) { return ratio < 0.5 ? 20.0 : 4.0; }

ExperimentResult run_amplitude_damping(const ExperimentConfig& cfg) {
  ExperimentResult r;
  r.title = "Amplitude damping";
  r.x_label = "t";
  r.y_label = "population / witness";
  const Measurer measurer(cfg, {{0}, {0, 2}}, cfg.mitigate);
  const auto np = static_cast<std::size_t>(cfg.points);

  std::vector<std::vector<double>> grids;
  for (double ratio : cfg.ratios) grids.push_back(linspace(0.0, cfg.t_max > 0.0 ? cfg.t_max : ad_default_t_max(ratio), cfg.points));

  auto points = parallel_map(cfg.ratios.size() * np, cfg.threads, [&](std::size_t i) {
    const std::size_t ri = i / np, k = i % np;
    const ADParams params = ADParams::from_ratio(cfg.ratios[ri], cfg.lambda);
    const double amp = c1(grids[ri][k], params);
    const std::uint64_t sub = cfg.seed ^ i;
    PointResult out;
    const Circuit pop = build_amplitude_damping_circuit_from_amplitude(amp);
    out.values.push_back(measurer.distribution(simulate(pop, cfg.noise), {0}, splitmix64(sub))(1));
    double corr[3];
    const WitnessBasis bases[3] = {WitnessBasis::XX, WitnessBasis::YY, WitnessBasis::ZZ};
    const char* names[3] = {"XX", "YY", "ZZ"};
    for (int b = 0; b < 3; ++b) {
      const Circuit c = build_amplitude_damping_circuit_from_amplitude(amp, true, bases[b]);
      corr[b] = parity_expectation(measurer.distribution(simulate(c, cfg.noise), {0, 2}, splitmix64(sub + 1 + static_cast<std::uint64_t>(b))));
      if (cfg.dump_circuits)
        out.circuits.push_back({"R=" + fmt_g(cfg.ratios[ri]) + "/t=" + fmt_g(grids[ri][k]) + "/witness_" + names[b], c});
    }
    out.values.push_back(witness_from_correlators(corr[0], corr[1], corr[2]));
    if (cfg.dump_circuits)
      out.circuits.insert(out.circuits.begin(), {"R=" + fmt_g(cfg.ratios[ri]) + "/t=" + fmt_g(grids[ri][k]) + "/population", pop});
    return out;
  });

  for (std::size_t ri = 0; ri < cfg.ratios.size(); ++ri) {
    const ADParams params = ADParams::from_ratio(cfg.ratios[ri], cfg.lambda);
    const std::string tag = "R=" + fmt_g(cfg.ratios[ri]);
    std::vector<double> tp, tw, sp, sw;
    for (std::size_t k = 0; k < np; ++k) {
      const double t = grids[ri][k];
      const KrausChannel ch = amplitude_damping_channel(t, params);
      const double a = c1(t, params);
      tp.push_back(a * a);
      tw.push_back(witness_f(ch));
      auto& pt = points[ri * np + k];
      sp.push_back(pt.values[0]);
      sw.push_back(pt.values[1]);
      for (auto& c : pt.circuits) r.circuits.push_back(std::move(c));
      if (cfg.dump_channels) r.channels.push_back({tag + "/t=" + fmt_g(t), ch});
    }
    r.theory.push_back(series("population " + tag, grids[ri], tp));
    r.theory.push_back(series("witness " + tag, grids[ri], tw));
    r.simulated.push_back(series("population " + tag, grids[ri], sp));
    r.simulated.push_back(series("witness " + tag, grids[ri], sw));
  }
  return r;
}

// cos(π/8)|0⟩ + sin(π/8)e^{iπ/4}|1⟩ up to a global phase.
Circuit depolarizing_input_circuit() {
  Circuit c(4);
  c.ry(0, std::numbers::pi / 4.0).rz(0, std::numbers::pi / 4.0);
  return c;
}

ExperimentResult run_depolarizing(const ExperimentConfig& cfg) {
  ExperimentResult r;
  r.title = "Depolarizing channel";
  r.x_label = "p";
  r.y_label = "Bloch component / fidelity";
  const auto& grid = cfg.p_grid;
  const Measurer measurer(cfg, {{0}}, cfg.mitigate);
  const DensityMatrix input = partial_trace(run_exact(depolarizing_input_circuit()), {0});

  auto points = parallel_map(grid.size(), cfg.threads, [&](std::size_t i) {
    Circuit c = depolarizing_input_circuit();
    c.append(build_depolarizing_circuit(grid[i]));
    const DensityMatrix rho = state_tomography(c, {0}, cfg, measurer, splitmix64(cfg.seed ^ i));
    const DensityMatrix expected = depolarizing(grid[i]).apply(input);
    const Eigen::Vector3d b = bloch_vector(rho);
    PointResult out;
    out.values = {b(0), b(1), b(2), fidelity(rho, expected)};
    if (cfg.dump_circuits) out.circuits.push_back({"p=" + fmt_g(grid[i]), c});
    return out;
  });

  const Eigen::Vector3d b0 = bloch_vector(input);
  const char* names[4] = {"bloch_x", "bloch_y", "bloch_z", "fidelity"};
  for (int k = 0; k < 4; ++k) {
    std::vector<double> theory, sim;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      theory.push_back(k < 3 ? (1.0 - grid[i]) * b0(k) : 1.0);
      sim.push_back(points[i].values[static_cast<std::size_t>(k)]);
    }
    r.theory.push_back(series(names[k], grid, theory));
    r.simulated.push_back(series(names[k], grid, sim));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (auto& c : points[i].circuits) r.circuits.push_back(std::move(c));
    if (cfg.dump_channels) r.channels.push_back({"p=" + fmt_g(grid[i]), depolarizing(grid[i])});
  }
  return r;
}

std::vector<double> pauli_work_grid(const ExperimentConfig& cfg, bool tan_model) {
  if (!tan_model) return linspace(0.0, cfg.t_max > 0.0 ? cfg.t_max : 3.0, cfg.points);
  const double limit = tan_limit(cfg.tan_omega);
  return linspace(0.0, cfg.t_max > 0.0 ? cfg.t_max : 0.98 * limit, cfg.points);
}

ExperimentResult run_pauli_work(const ExperimentConfig& cfg) {
  ExperimentResult r;
  r.title = "Extractable work under Pauli dynamics";
  r.x_label = "t";
  r.y_label = "W / kT ln 2";
  constexpr int system = 0, memory = 3;
  const std::vector<int> keep{system, memory};
  const Measurer measurer(cfg, {keep}, cfg.mitigate);
  const auto np = static_cast<std::size_t>(cfg.points);
  const PauliRates models[2] = {PauliRates::eternal(cfg.eternal_lambda, cfg.eternal_omega),
                                PauliRates::tan_model(cfg.tan_lambda, cfg.tan_omega)};
  const std::vector<double> grids[2] = {pauli_work_grid(cfg, false), pauli_work_grid(cfg, true)};
  const char* names[2] = {"eternal", "tan"};

  auto points = parallel_map(2 * np, cfg.threads, [&](std::size_t i) {
    const std::size_t m = i / np, k = i % np;
    const auto probs = pauli_rates_to_probabilities(models[m], grids[m][k]);
    Circuit c(4);
    c.h(memory).cnot(memory, system);
    c.append(build_pauli_circuit(solve_pauli_angles(probs)).shifted(0, 4));
    const DensityMatrix rho = state_tomography(c, keep, cfg, measurer, splitmix64(cfg.seed ^ i));
    PointResult out;
    out.values = {extractable_work(rho) / std::log(2.0)};
    if (cfg.dump_circuits) out.circuits.push_back({std::string(names[m]) + "/t=" + fmt_g(grids[m][k]), c});
    return out;
  });

  const DensityMatrix bell = DensityMatrix::from_pure(PureState::phi_plus());
  for (std::size_t m = 0; m < 2; ++m) {
    std::vector<double> theory, sim;
    for (std::size_t k = 0; k < np; ++k) {
      const KrausChannel ch = pauli_channel(pauli_rates_to_probabilities(models[m], grids[m][k]));
      const KrausChannel on_system = [&] {
        std::vector<ComplexMatrix> ops;
        for (const auto& op : ch.operators()) ops.push_back(tensor(op, pauli::I()));
        return KrausChannel(ops);
      }();
      theory.push_back(extractable_work(on_system.apply(bell)) / std::log(2.0));
      auto& pt = points[m * np + k];
      sim.push_back(pt.values[0]);
      for (auto& c : pt.circuits) r.circuits.push_back(std::move(c));
      if (cfg.dump_channels) r.channels.push_back({std::string(names[m]) + "/t=" + fmt_g(grids[m][k]), ch});
    }
    r.theory.push_back(series(names[m], grids[m], theory));
    r.simulated.push_back(series(names[m], grids[m], sim));
  }
  return r;
}

ExperimentResult run_capacity(const ExperimentConfig& cfg) {
  ExperimentResult r;
  r.title = "Amplitude-damping channel capacity";
  r.x_label = "t";
  r.y_label = "Q";
  const Measurer measurer(cfg, {{0}}, cfg.mitigate);
  const auto np = static_cast<std::size_t>(cfg.points);
  const std::vector<double> grid = linspace(0.0, cfg.t_max > 0.0 ? cfg.t_max : 2.0, cfg.points);

  auto points = parallel_map(cfg.ratios.size() * np, cfg.threads, [&](std::size_t i) {
    const std::size_t ri = i / np, k = i % np;
    const ADParams params = ADParams::from_ratio(cfg.ratios[ri], cfg.lambda);
    const Circuit c = build_amplitude_damping_circuit(grid[k], params);
    PointResult out;
    out.values = {measurer.distribution(simulate(c, cfg.noise), {0}, splitmix64(cfg.seed ^ i))(1)};
    if (cfg.dump_circuits) out.circuits.push_back({"R=" + fmt_g(cfg.ratios[ri]) + "/t=" + fmt_g(grid[k]), c});
    return out;
  });

  for (std::size_t ri = 0; ri < cfg.ratios.size(); ++ri) {
    const ADParams params = ADParams::from_ratio(cfg.ratios[ri], cfg.lambda);
    const std::string tag = "R=" + fmt_g(cfg.ratios[ri]);
    const double excited0 = points[ri * np].values[0];
    std::vector<double> theory, sim;
    for (std::size_t k = 0; k < np; ++k) {
      const double a = c1(grid[k], params);
      theory.push_back(channel_capacity_ad(std::clamp(a * a, 0.0, 1.0)));
      const double excited = points[ri * np + k].values[0];
      sim.push_back(excited0 > 0.0 ? channel_capacity_ad(eta_from_populations(excited, excited0)) : 0.0);
      for (auto& c : points[ri * np + k].circuits) r.circuits.push_back(std::move(c));
      if (cfg.dump_channels) r.channels.push_back({tag + "/t=" + fmt_g(grid[k]), amplitude_damping_channel(grid[k], params)});
    }
    r.theory.push_back(series(tag, grid, theory));
    r.simulated.push_back(series(tag, grid, sim));
  }
  return r;
}

json noise_json(const NoiseModel& noise) {
  json j;
  j["eps1"] = noise.eps1;
  j["eps2"] = noise.eps2;
  auto ro = json::array();
  for (const auto& a : noise.readout) ro.push_back({{a(0, 0), a(0, 1)}, {a(1, 0), a(1, 1)}});
  j["readout"] = ro;
  return j;
}

NoiseModel noise_from(const json& j) {
  NoiseModel m = NoiseModel::none();
  m.eps1 = j.value("eps1", NoiseModel{}.eps1);
  m.eps2 = j.value("eps2", NoiseModel{}.eps2);
  if (j.contains("readout")) {
    for (const auto& a : j.at("readout")) {
      const auto rows = a.get<std::vector<std::vector<double>>>();
      if (rows.size() != 2 || rows[0].size() != 2 || rows[1].size() != 2)
        throw ArgumentError("readout matrices must be 2x2");
      RealMatrix m2(2, 2);
      m2 << rows[0][0], rows[0][1], rows[1][0], rows[1][1];
      m.readout.push_back(m2);
    }
  }
  m.validate();
  return m;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ArgumentError("cannot write " + path.string());
  os << text;
  if (!os) throw ArgumentError("failed writing " + path.string());
}

}  // namespace

// ---------------------------------------------------------------------------

std::string experiment_name(Experiment e) {
  for (const auto& [k, name] : kNames)
    if (k == e) return name;
  return "unknown";
}

Experiment experiment_from_name(const std::string& name) {
  for (const auto& [k, n] : kNames)
    if (name == n) return k;
  throw ArgumentError("unknown experiment '" + name + "'");
}

void ExperimentConfig::finalize() {
  if (shots == 0) throw ArgumentError("shots must be positive");
  if (threads < 1) throw ArgumentError("threads must be at least 1");
  if (points < 2) throw ArgumentError("points must be at least 2");
  noise.validate();
  if (p_grid.empty())
    for (int i = 0; i <= 10; ++i) p_grid.push_back(i / 10.0);
  for (double p : p_grid)
    if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("p-grid values must lie in [0, 1]");
  if (n_max < 1 || n_max > 9) throw ArgumentError("n-max must lie in [1, 9]");
  if (!std::isfinite(g_tau)) throw ArgumentError("g-tau must be finite");
  if (ratios.empty()) {
    if (experiment == Experiment::AmplitudeDamping) ratios = {0.2, 100.0};
    if (experiment == Experiment::Capacity) ratios = {100.0, 200.0, 400.0};
  }
  for (double ratio : ratios)
    if (!(ratio > 0.0 && std::isfinite(ratio))) throw ArgumentError("R values must be positive");
  if (!(lambda > 0.0 && std::isfinite(lambda))) throw ArgumentError("lambda must be positive");
  if (!(t_max >= 0.0 && std::isfinite(t_max))) throw ArgumentError("t-max must be non-negative");
  for (double v : {eternal_lambda, eternal_omega, tan_lambda, tan_omega})
    if (!(v > 0.0 && std::isfinite(v))) throw ArgumentError("Pauli rate parameters must be positive");
  if (experiment == Experiment::PauliWork && t_max >= tan_limit(tan_omega))
    throw ArgumentError("t-max must stay below pi/(2 omega) = " + fmt_g(tan_limit(tan_omega)) +
                        " for the tan-rate channel");
}

NoiseModel noise_model_from_json(const std::string& text) {
  try {
    return noise_from(json::parse(text));
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("invalid noise JSON: ") + e.what());
  }
}

std::string noise_model_to_json(const NoiseModel& noise) { return noise_json(noise).dump(2); }

std::string config_to_json(const ExperimentConfig& c, int indent) {
  json j;
  j["experiment"] = experiment_name(c.experiment);
  j["shots"] = c.shots;
  j["seed"] = c.seed;
  j["noise_source"] = c.noise_source;
  j["noise"] = noise_json(c.noise);
  j["mitigate"] = c.mitigate;
  j["threads"] = c.threads;
  j["p_grid"] = c.p_grid;
  j["n_max"] = c.n_max;
  j["g_tau"] = c.g_tau;
  j["ratios"] = c.ratios;
  j["lambda"] = c.lambda;
  j["t_max"] = c.t_max;
  j["points"] = c.points;
  j["pauli"] = {{"eternal", {{"lambda", c.eternal_lambda}, {"omega", c.eternal_omega}}},
                {"tan", {{"lambda", c.tan_lambda}, {"omega", c.tan_omega}}}};
  j["plot"] = c.plot;
  j["dump_circuits"] = c.dump_circuits;
  j["dump_channels"] = c.dump_channels;
  return j.dump(indent);
}

ExperimentConfig config_from_json(const std::string& text) {
  try {
    json j = json::parse(text);
    if (j.contains("config")) j = j.at("config");
    ExperimentConfig c;
    c.experiment = experiment_from_name(j.at("experiment").get<std::string>());
    c.shots = j.value("shots", c.shots);
    c.seed = j.value("seed", c.seed);
    c.noise_source = j.value("noise_source", c.noise_source);
    if (j.contains("noise")) c.noise = noise_from(j.at("noise"));
    c.mitigate = j.value("mitigate", c.mitigate);
    c.threads = j.value("threads", c.threads);
    c.p_grid = j.value("p_grid", c.p_grid);
    c.n_max = j.value("n_max", c.n_max);
    c.g_tau = j.value("g_tau", c.g_tau);
    c.ratios = j.value("ratios", c.ratios);
    c.lambda = j.value("lambda", c.lambda);
    c.t_max = j.value("t_max", c.t_max);
    c.points = j.value("points", c.points);
    if (j.contains("pauli")) {
      const auto& p = j.at("pauli");
      c.eternal_lambda = p.at("eternal").value("lambda", c.eternal_lambda);
      c.eternal_omega = p.at("eternal").value("omega", c.eternal_omega);
      c.tan_lambda = p.at("tan").value("lambda", c.tan_lambda);
      c.tan_omega = p.at("tan").value("omega", c.tan_omega);
    }
    c.plot = j.value("plot", c.plot);
    c.dump_circuits = j.value("dump_circuits", c.dump_circuits);
    c.dump_channels = j.value("dump_channels", c.dump_channels);
    return c;
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("invalid configuration JSON: ") + e.what());
  }
}

ExperimentResult run_experiment(const ExperimentConfig& input) {
  ExperimentConfig cfg = input;
  cfg.finalize();
  switch (cfg.experiment) {
    case Experiment::Reservoir: return run_reservoir(cfg);
    case Experiment::Collisional: return run_collisional(cfg);
    case Experiment::AmplitudeDamping: return run_amplitude_damping(cfg);
    case Experiment::Depolarizing: return run_depolarizing(cfg);
    case Experiment::PauliWork: return run_pauli_work(cfg);
    case Experiment::Capacity: return run_capacity(cfg);
  }
  throw ArgumentError("unknown experiment");
}

std::string channels_to_json(const std::vector<NamedChannel>& channels, int indent) {
  auto arr = json::array();
  for (const auto& [name, ch] : channels) {
    auto ops = json::array();
    for (const auto& k : ch.operators()) {
      auto rows = json::array();
      for (Eigen::Index i = 0; i < k.rows(); ++i) {
        auto row = json::array();
        for (Eigen::Index j = 0; j < k.cols(); ++j) row.push_back({k(i, j).real(), k(i, j).imag()});
        rows.push_back(std::move(row));
      }
      ops.push_back(std::move(rows));
    }
    arr.push_back({{"name", name}, {"dim", ch.dim()}, {"kraus", std::move(ops)}});
  }
  return arr.dump(indent);
}

std::string circuits_to_json(const std::vector<NamedCircuit>& circuits, int indent) {
  auto arr = json::array();
  for (const auto& [name, c] : circuits) arr.push_back({{"name", name}, {"circuit", json::parse(circuit_to_json(c))}});
  return arr.dump(indent);
}

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result, const std::string& dir,
                   double wall_seconds) {
  namespace fs = std::filesystem;
  const fs::path out(dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ArgumentError("cannot create output directory " + dir + ": " + ec.message());

  std::vector<std::string> files{"theory.csv", "simulated.csv", "manifest.json"};
  write_text(out / "theory.csv", to_csv(result.theory));
  write_text(out / "simulated.csv", to_csv(result.simulated));
  if (config.plot) {
    write_text(out / "plot.svg", render_svg(result.theory, result.simulated,
                                            {result.title, result.x_label, result.y_label}));
    files.push_back("plot.svg");
  }
  if (config.dump_circuits) {
    write_text(out / "circuits.json", circuits_to_json(result.circuits) + "\n");
    files.push_back("circuits.json");
  }
  if (config.dump_channels) {
    write_text(out / "channels.json", channels_to_json(result.channels) + "\n");
    files.push_back("channels.json");
  }
  ExperimentConfig echoed = config;
  echoed.finalize();
  json manifest;
  manifest["config"] = json::parse(config_to_json(echoed));
  manifest["version"] = version();
  manifest["wall_time_seconds"] = wall_seconds;
  manifest["outputs"] = files;
  write_text(out / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace oqsim
