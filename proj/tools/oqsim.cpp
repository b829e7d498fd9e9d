// oqsim: run one of the open-system experiments and write CSV/JSON/SVG outputs.
//
//   oqsim collisional --shots 8192 --seed 7 --plot --out out/collisional
//   oqsim amplitude-damping --R 0.2,100 --noise none
//   oqsim --config out/collisional/manifest.json --out rerun
//   oqsim plot --theory theory.csv --simulated simulated.csv --out plot.svg

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "oqsim/errors.hpp"
#include "oqsim/experiments.hpp"
#include "oqsim/plot.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kNumericalError = 3;

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw oqsim::ArgumentError("cannot read " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::vector<double> parse_pair(const std::vector<double>& v, const char* what) {
  if (v.size() != 2) throw oqsim::ArgumentError(std::string(what) + " expects LAMBDA,OMEGA");
  return v;
}

int run_plot(const std::string& theory_path, const std::string& simulated_path, const std::string& out,
             const oqsim::PlotStyle& style) {
  std::vector<oqsim::TimeSeries> theory, simulated;
  if (!theory_path.empty()) theory = oqsim::time_series_from_csv(read_file(theory_path));
  if (!simulated_path.empty()) simulated = oqsim::time_series_from_csv(read_file(simulated_path));
  const std::string svg = oqsim::render_svg(theory, simulated, style);
  if (out.empty() || out == "-") {
    std::cout << svg;
  } else {
    std::ofstream os(out, std::ios::binary);
    if (!os) throw oqsim::ArgumentError("cannot write " + out);
    os << svg;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open quantum system experiments on a noisy circuit simulator"};
  app.set_version_flag("--version", oqsim::version());

  std::string experiment;
  app.add_option("experiment", experiment,
                 "reservoir | collisional | amplitude-damping | depolarizing | pauli-work | capacity | plot");

  oqsim::ExperimentConfig cfg;
  std::string config_path, noise = "default", out_dir;
  std::vector<double> p_grid, ratios, eternal, tan_params;
  app.add_option("--config", config_path, "Replay the configuration stored in a manifest.json");
  app.add_option("--shots", cfg.shots, "Shots per measured circuit")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Base RNG seed")->capture_default_str();
  app.add_option("--noise", noise, "default | none | path to a noise JSON file")->capture_default_str();
  app.add_flag("--mitigate", cfg.mitigate, "Apply readout-error mitigation");
  app.add_option("--out", out_dir, "Output directory (default: out/<experiment>)");
  app.add_flag("--plot", cfg.plot, "Write plot.svg");
  app.add_flag("--dump-circuit", cfg.dump_circuits, "Write circuits.json");
  app.add_flag("--dump-channel", cfg.dump_channels, "Write channels.json");
  app.add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
  app.add_option("--p-grid", p_grid, "Comma-separated p values")->delimiter(',');
  app.add_option("--t-max", cfg.t_max, "End of the time grid (0: experiment default)");
  app.add_option("--points", cfg.points, "Time-grid points")->capture_default_str();
  app.add_option("--n-max", cfg.n_max, "Largest collision count")->capture_default_str();
  app.add_option("--g-tau", cfg.g_tau, "Collision strength g*tau")->capture_default_str();
  app.add_option("--R", ratios, "Comma-separated gamma0/lambda ratios")->delimiter(',');
  app.add_option("--lambda", cfg.lambda, "Lorentzian width lambda")->capture_default_str();
  app.add_option("--pauli-eternal", eternal, "LAMBDA,OMEGA of the tanh-rate model")->delimiter(',');
  app.add_option("--pauli-tan", tan_params, "LAMBDA,OMEGA of the tan-rate model")->delimiter(',');

  std::string theory_csv, simulated_csv, title, x_label = "t", y_label = "value";
  app.add_option("--theory", theory_csv, "plot: theory CSV");
  app.add_option("--simulated", simulated_csv, "plot: simulated CSV");
  app.add_option("--title", title, "plot: title");
  app.add_option("--x-label", x_label, "plot: x-axis label");
  app.add_option("--y-label", y_label, "plot: y-axis label");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (experiment == "plot") return run_plot(theory_csv, simulated_csv, out_dir, {title, x_label, y_label});

    if (!config_path.empty()) {
      oqsim::ExperimentConfig stored = oqsim::config_from_json(read_file(config_path));
      // Explicit flags override the stored values.
      if (app.count("--shots")) stored.shots = cfg.shots;
      if (app.count("--seed")) stored.seed = cfg.seed;
      if (app.count("--mitigate")) stored.mitigate = cfg.mitigate;
      if (app.count("--plot")) stored.plot = cfg.plot;
      if (app.count("--dump-circuit")) stored.dump_circuits = cfg.dump_circuits;
      if (app.count("--dump-channel")) stored.dump_channels = cfg.dump_channels;
      if (app.count("--threads")) stored.threads = cfg.threads;
      if (app.count("--t-max")) stored.t_max = cfg.t_max;
      if (app.count("--points")) stored.points = cfg.points;
      if (app.count("--n-max")) stored.n_max = cfg.n_max;
      if (app.count("--g-tau")) stored.g_tau = cfg.g_tau;
      if (app.count("--lambda")) stored.lambda = cfg.lambda;
      if (!experiment.empty() && oqsim::experiment_from_name(experiment) != stored.experiment)
        throw oqsim::ArgumentError("experiment does not match the configuration file");
      cfg = stored;
      if (!app.count("--noise")) noise.clear();
    } else {
      if (experiment.empty()) throw oqsim::ArgumentError("an experiment name is required (see --help)");
      cfg.experiment = oqsim::experiment_from_name(experiment);
    }

    if (!noise.empty()) {
      cfg.noise_source = noise;
      if (noise == "default")
        cfg.noise = oqsim::NoiseModel::default_model();
      else if (noise == "none")
        cfg.noise = oqsim::NoiseModel::none();
      else
        cfg.noise = oqsim::noise_model_from_json(read_file(noise));
    }
    if (!p_grid.empty()) cfg.p_grid = p_grid;
    if (!ratios.empty()) cfg.ratios = ratios;
    if (!eternal.empty()) {
      parse_pair(eternal, "--pauli-eternal");
      cfg.eternal_lambda = eternal[0];
      cfg.eternal_omega = eternal[1];
    }
    if (!tan_params.empty()) {
      parse_pair(tan_params, "--pauli-tan");
      cfg.tan_lambda = tan_params[0];
      cfg.tan_omega = tan_params[1];
    }
    cfg.finalize();
    if (out_dir.empty()) out_dir = "out/" + oqsim::experiment_name(cfg.experiment);

    const auto start = std::chrono::steady_clock::now();
    const oqsim::ExperimentResult result = oqsim::run_experiment(cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    oqsim::write_outputs(cfg, result, out_dir, wall);
    std::cout << oqsim::experiment_name(cfg.experiment) << ": wrote " << out_dir << " (" << wall << " s)\n";
    return 0;
  } catch (const oqsim::ArgumentError& e) {
    std::cerr << "oqsim: " << e.what() << '\n';
    return kUsageError;
  } catch (const oqsim::NumericalError& e) {
    std::cerr << "oqsim: numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "oqsim: " << e.what() << '\n';
    return kNumericalError;
  }
}
