#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oqsim/analysis.hpp"
#include "oqsim/circuit.hpp"

namespace oqsim {

enum class Experiment { Reservoir, Collisional, AmplitudeDamping, Depolarizing, PauliWork, Capacity };

std::string experiment_name(Experiment e);
Experiment experiment_from_name(const std::string& name);

struct ExperimentConfig {
  Experiment experiment = Experiment::Reservoir;
  std::uint64_t shots = 8192;
  std::uint64_t seed = 1234;
  /// "default", "none" or the path the noise model was read from.
  std::string noise_source = "default";
  NoiseModel noise = NoiseModel::default_model();
  bool mitigate = false;
  int threads = 1;

  /// reservoir, depolarizing. Empty: 0, 0.1, …, 1.
  std::vector<double> p_grid;
  /// collisional
  int n_max = 7;
  double g_tau = 0.52359877559829887;  // π/6
  /// amplitude-damping and capacity. Empty: {0.2, 100} and {100, 200, 400}.
  std::vector<double> ratios;
  double lambda = 1.0;
  /// Time span; 0 selects the per-experiment default.
  double t_max = 0.0;
  int points = 30;
  /// pauli-work rate parameters
  double eternal_lambda = 1.0;
  double eternal_omega = 0.5;
  double tan_lambda = 0.1;
  double tan_omega = 2.0;

  bool plot = false;
  bool dump_circuits = false;
  bool dump_channels = false;

  /// Fills defaults and checks every grid lies in its domain (ArgumentError).
  void finalize();
};

/// Reads {eps1, eps2, readout:[[[a00,a01],[a10,a11]], …]} from a JSON string.
NoiseModel noise_model_from_json(const std::string& text);
std::string noise_model_to_json(const NoiseModel& noise);

/// Serialized configuration (noise fully resolved, so it can be replayed).
std::string config_to_json(const ExperimentConfig& config, int indent = 2);
/// Accepts either a bare configuration or a manifest holding one under "config".
ExperimentConfig config_from_json(const std::string& text);

struct NamedCircuit {
  std::string name;
  Circuit circuit;
};

struct NamedChannel {
  std::string name;
  KrausChannel channel;
};

struct ExperimentResult {
  std::vector<TimeSeries> theory;
  std::vector<TimeSeries> simulated;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<NamedCircuit> circuits;  // filled when dump_circuits is set
  std::vector<NamedChannel> channels;  // filled when dump_channels is set
};

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Writes theory.csv, simulated.csv, manifest.json and the optional
/// plot.svg, circuits.json and channels.json into `dir`.
void write_outputs(const ExperimentConfig& config, const ExperimentResult& result, const std::string& dir,
                   double wall_seconds);

std::string channels_to_json(const std::vector<NamedChannel>& channels, int indent = 2);
std::string circuits_to_json(const std::vector<NamedCircuit>& circuits, int indent = 2);

/// Library version string.
std::string version();

}  // namespace oqsim
