#include "oqsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "oqsim/errors.hpp"

namespace oqsim {

double witness_from_correlators(double xx, double yy, double zz) { return (1.0 + xx - yy + zz) / 4.0; }

double witness_f(const ChoiMatrix& channel) {
  if (channel.system_dim() != 2) throw ArgumentError("witness_f needs a single-qubit channel");
  // (𝕀 ⊗ Φ)(|φ+⟩⟨φ+|) is the Choi matrix divided by the dimension.
  const ComplexMatrix out = channel.matrix() / 2.0;
  const ComplexVector phi = PureState::phi_plus().amplitudes();
  const double direct = (phi.adjoint() * out * phi)(0, 0).real();
  auto corr = [&](const ComplexMatrix& p) { return (out * tensor(p, p)).trace().real(); };
  const double local = witness_from_correlators(corr(pauli::X()), corr(pauli::Y()), corr(pauli::Z()));
  if (std::abs(direct - local) > 1e-10)
    throw NumericalError("witness_f: direct and correlator evaluations disagree");
  return direct;
}

double witness_f(const KrausChannel& channel) { return witness_f(choi(channel)); }

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw ArgumentError("binary_entropy: argument must lie in [0, 1]");
  auto term = [](double v) { return v > 0.0 ? -v * std::log2(v) : 0.0; };
  return term(x) + term(1.0 - x);
}

double capacity_objective(double eta, double p) {
  return binary_entropy(eta * p) - binary_entropy((1.0 - eta) * p);
}

double channel_capacity_ad(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ArgumentError("channel_capacity_ad: eta must lie in [0, 1]");
  if (eta <= 0.5) return 0.0;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = capacity_objective(eta, x1);
  double f2 = capacity_objective(eta, x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = capacity_objective(eta, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = capacity_objective(eta, x1);
    }
  }
  const double best = std::max({f1, f2, capacity_objective(eta, 1.0)});
  return std::clamp(best, 0.0, 1.0);
}

double eta_from_populations(double excited_t, double excited_0) {
  if (!(excited_0 > 0.0)) throw ArgumentError("eta_from_populations: initial population must be positive");
  return std::clamp(excited_t / excited_0, 0.0, 1.0);
}

double extractable_work(const DensityMatrix& rho_sm, double kT) {
  if (rho_sm.num_qubits() != 2) throw ArgumentError("extractable_work needs a two-qubit state");
  const double s_system = vn_entropy(partial_trace(rho_sm, {0}));
  const double info = mutual_information(rho_sm, {0});
  return (1.0 - s_system + info) * kT * std::log(2.0);
}

void TimeSeries::validate() const {
  if (times.size() != values.size()) throw ArgumentError("time series: length mismatch");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw ArgumentError("time series: times must increase strictly");
}

std::vector<Revival> detect_revivals(std::span<const double> values, double tol) {
  if (values.size() < 3) throw ArgumentError("detect_revivals needs at least three points");
  if (!(tol >= 0.0)) throw ArgumentError("detect_revivals: tolerance must be non-negative");
  std::vector<Revival> out;
  bool decreased = false;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double step = values[i + 1] - values[i];
    if (decreased && step > tol) out.push_back({i, step});
    if (step < -tol) decreased = true;
  }
  return out;
}

std::vector<Revival> detect_revivals(const TimeSeries& series, double tol) {
  series.validate();
  return detect_revivals(std::span<const double>(series.values), tol);
}

std::string to_csv(std::span<const TimeSeries> series) {
  std::ostringstream os;
  os << "t,value,label\n";
  char buf[128];
  for (const auto& s : series) {
    s.validate();
    if (s.label.find_first_of(",\n\"") != std::string::npos)
      throw ArgumentError("time series label must not contain commas, quotes or newlines");
    for (std::size_t i = 0; i < s.times.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.15g,%.15g,", s.times[i], s.values[i]);
      os << buf << s.label << '\n';
    }
  }
  return os.str();
}

std::vector<TimeSeries> time_series_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "t,value,label") throw ArgumentError("CSV header must be t,value,label");
  std::vector<TimeSeries> out;
  std::map<std::string, std::size_t> index;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw ArgumentError("CSV row " + std::to_string(row) + " needs three fields");
    double t = 0.0, v = 0.0;
    try {
      std::size_t used = 0;
      t = std::stod(line.substr(0, c1), &used);
      if (used != c1) throw std::invalid_argument("t");
      v = std::stod(line.substr(c1 + 1, c2 - c1 - 1), &used);
      if (used != c2 - c1 - 1) throw std::invalid_argument("value");
    } catch (const std::exception&) {
      throw ArgumentError("CSV row " + std::to_string(row) + " has a non-numeric field");
    }
    const std::string label = line.substr(c2 + 1);
    auto [it, inserted] = index.emplace(label, out.size());
    if (inserted) out.push_back({{}, {}, label});
    out[it->second].times.push_back(t);
    out[it->second].values.push_back(v);
  }
  for (const auto& s : out) s.validate();
  return out;
}

}  // namespace oqsim
