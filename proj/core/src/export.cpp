#include "tripletctl/export.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "tripletctl/errors.hpp"

namespace tripletctl {

namespace {

void write_config_line(std::ostream& out, const nlohmann::json& config) {
  out << "# config: " << config.dump() << '\n';
}

class Row {
 public:
  explicit Row(std::ostream& out) : out_(out) {}
  Row& operator<<(double v) {
    sep();
    out_ << format_number(v);
    return *this;
  }
  ~Row() { out_ << '\n'; }

 private:
  void sep() {
    if (!first_) out_ << ',';
    first_ = false;
  }
  std::ostream& out_;
  bool first_ = true;
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

std::string format_number(double value) {
  std::ostringstream s;
  s << std::setprecision(15) << value;
  return s.str();
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const nlohmann::json& config) {
  write_config_line(out, config);
  out << "t,re_c1,im_c1,re_c2,im_c2,re_c3,im_c3,pop1,pop2,pop3,delta,omega\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const StateVector& c = traj.states()[i];
    const ControlSample& u = traj.controls()[i];
    Row row(out);
    row << traj.times()[i];
    for (int j = 0; j < 3; ++j) row << c[j].real() << c[j].imag();
    for (int j = 0; j < 3; ++j) row << std::norm(c[j]);
    row << u.delta() << u.omega();
  }
}

void write_waveform_csv(std::ostream& out, const ControlWaveform& waveform, std::size_t samples,
                        const nlohmann::json& config) {
  if (samples == 0) throw ValidationError("waveform export needs at least one interval");
  write_config_line(out, config);
  out << "t,delta,omega\n";
  const double T = waveform.duration();
  for (std::size_t i = 0; i <= samples; ++i) {
    const double t = (i == samples) ? T : T * static_cast<double>(i) / static_cast<double>(samples);
    const ControlSample u = waveform.at(t);
    Row(out) << t << u.delta() << u.omega();
  }
}

void write_fidelity_curve_csv(std::ostream& out, const std::vector<FidelityCurvePoint>& curve,
                              const nlohmann::json& config) {
  write_config_line(out, config);
  out << "T,fidelity_symmetric,fidelity_nonsymmetric\n";
  for (const auto& p : curve) Row(out) << p.duration << p.symmetric << p.nonsymmetric;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells, const nlohmann::json& config) {
  write_config_line(out, config);
  for (const auto& c : cells) {
    if (!c.ok) out << "# failed: T=" << format_number(c.duration) << " delta=" << format_number(c.delta) << ": "
                   << c.error << '\n';
  }
  out << "T,delta,fidelity\n";
  for (const auto& c : cells) Row(out) << c.duration << c.delta << (c.ok ? c.fidelity : std::nan(""));
}

ControlWaveform read_waveform_csv(std::istream& in) {
  std::vector<double> ts, ds, ws;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv(line);
    if (cells.size() < 3) throw ValidationError("waveform CSV line " + std::to_string(line_no) + " has < 3 columns");
    try {
      std::size_t pos = 0;
      const double t = std::stod(cells[0], &pos);
      ts.push_back(t);
      ds.push_back(std::stod(cells[1]));
      ws.push_back(std::stod(cells[2]));
    } catch (const std::invalid_argument&) {
      if (ts.empty()) continue;  // header row
      throw ValidationError("waveform CSV line " + std::to_string(line_no) + " is not numeric");
    }
  }
  return ControlWaveform::sampled(std::move(ts), std::move(ds), std::move(ws));
}

nlohmann::json problem_to_json(const ControlProblem& problem) {
  nlohmann::json j;
  j["T"] = problem.duration;
  j["omega_bound"] = problem.omega_bound;
  j["delta_bound"] = problem.delta_bound;
  if (problem.delta_is_series()) {
    j["delta_mode"] = "trig-series";
  } else {
    j["delta_mode"] = "fixed";
    j["delta"] = problem.fixed_delta();
  }
  j["omega_form"] = to_string(problem.omega_form);
  if (problem.omega_form == OmegaForm::kSeries) j["p"] = problem.harmonics;
  j["segments"] = problem.segments;
  j["objective"] = "|c2(T)|^2";
  return j;
}

nlohmann::json report_to_json(const OptimizationReport& report) {
  nlohmann::json j;
  j["problem"] = problem_to_json(report.problem);
  j["seed"] = report.seed;
  j["restarts"] = report.restarts;
  j["fidelity"] = report.fidelity;
  j["iterations"] = report.iterations;
  j["exit_reason"] = to_string(report.exit_reason);
  j["gradient_norm"] = report.gradient_norm;
  j["best_start"] = report.best_start;
  j["start_fidelities"] = report.start_fidelities;
  nlohmann::json w;
  w["T"] = report.problem.duration;
  if (report.series) {
    w["kind"] = "trig-series";
    w["coefficients"] = series_to_json(*report.series);
  } else {
    w["kind"] = "piecewise-constant";
    w["segments"] = {{"delta", report.controls.deltas}, {"omega", report.controls.omegas}};
  }
  j["waveform"] = std::move(w);
  return j;
}

nlohmann::json series_to_json(const TrigSeries& series) {
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t k = 0; k < series.omega_coefficients().size(); ++k) {
    pairs.push_back({series.omega_coefficients()[k], series.delta_coefficients()[k]});
  }
  return {{"p", series.harmonics()}, {"coefficients", std::move(pairs)}};
}

TrigSeries series_from_json(const nlohmann::json& doc) {
  try {
    std::vector<double> a, b;
    const nlohmann::json* pairs = nullptr;
    if (doc.is_array()) {
      pairs = &doc;
    } else if (doc.contains("coefficients")) {
      pairs = &doc.at("coefficients");
    } else {
      a = doc.at("a").get<std::vector<double>>();
      b = doc.at("b").get<std::vector<double>>();
    }
    if (pairs) {
      for (const auto& row : *pairs) {
        if (!row.is_array() || row.size() != 2) throw ValidationError("series rows must be [a_k, b_k] pairs");
        a.push_back(row[0].get<double>());
        b.push_back(row[1].get<double>());
      }
    }
    if (a.empty() || a.size() % 2 == 0) throw ValidationError("series needs an odd number (2p+1) of coefficients");
    const int p = static_cast<int>((a.size() - 1) / 2);
    if (doc.is_object() && doc.contains("p") && doc.at("p").get<int>() != p) {
      throw ValidationError("series 'p' does not match the coefficient count");
    }
    return {p, std::move(a), std::move(b)};
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed series JSON: ") + e.what());
  }
}

}  // namespace tripletctl
