#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "tripletctl/tripletctl.hpp"

namespace tripletctl::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kFigureIds{"fig1b", "fig2", "fig3a", "fig3b", "fig4c", "table1"};

std::vector<double> arithmetic_grid(double lo, double hi, double step) {
  std::vector<double> grid;
  const auto n = static_cast<int>(std::llround((hi - lo) / step));
  for (int i = 0; i <= n; ++i) grid.push_back(lo + step * i);
  return grid;
}

std::vector<double> default_detuning_grid() { return arithmetic_grid(-0.3, 0.1, 0.02); }

std::vector<double> default_duration_grid() {
  std::vector<double> grid{0.1};
  for (double T : arithmetic_grid(0.25, 4.0, 0.25)) grid.push_back(T);
  return grid;
}

// Output files live directly in the configured directory; names are fixed.
class OutputDir {
 public:
  explicit OutputDir(const std::string& path) : root_(path) {
    if (path.empty()) throw ValidationError("--out must not be empty");
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec || !fs::is_directory(root_)) throw ValidationError("cannot create output directory '" + path + "'");
  }

  std::ofstream open(const std::string& name) const {
    std::ofstream f(root_ / name);
    if (!f) throw ValidationError("cannot write '" + (root_ / name).string() + "'");
    return f;
  }

  void write_json(const std::string& name, const json& doc) const { open(name) << doc.dump(2) << '\n'; }

 private:
  fs::path root_;
};

PropagateOptions propagate_options(const ExperimentConfig& cfg, PropagationMethod method = PropagationMethod::kRk4) {
  PropagateOptions opts;
  opts.steps = cfg.steps;
  opts.method = method;
  return opts;
}

OptimizerSettings optimizer_settings(const ExperimentConfig& cfg) {
  if (cfg.restarts < 0) throw ValidationError("--restarts must be >= 0");
  OptimizerSettings s;
  s.restarts = cfg.restarts;
  s.seed = cfg.seed;
  return s;
}

ControlProblem make_problem(const ExperimentConfig& cfg) {
  ControlProblem problem;
  problem.duration = cfg.T;
  problem.omega_bound = cfg.omega_bound;
  problem.delta_bound = cfg.delta_bound;
  problem.segments = cfg.segments;
  if (cfg.mode == "piecewise") {
    problem.omega_form = OmegaForm::kPiecewise;
  } else if (cfg.mode == "trig") {
    problem.omega_form = OmegaForm::kSeries;
    problem.harmonics = cfg.p;
  } else {
    throw ValidationError("--mode must be 'piecewise' or 'trig'");
  }
  if (cfg.delta_mode == "fixed") {
    problem.delta_mode = FixedDelta{cfg.delta};
  } else if (cfg.delta_mode == "trig-series") {
    problem.delta_mode = SeriesDelta{};
  } else {
    throw ValidationError("--delta-mode must be 'fixed' or 'trig-series'");
  }
  problem.validate();
  return problem;
}

OptimizationReport run_optimization(const ExperimentConfig& cfg) {
  const ControlProblem problem = make_problem(cfg);
  const OptimizerSettings settings = optimizer_settings(cfg);
  return problem.omega_form == OmegaForm::kPiecewise ? optimize_piecewise(problem, settings)
                                                     : optimize_trig(problem, settings);
}

void write_report(const OutputDir& dir, const std::string& stem, const OptimizationReport& report,
                  const json& config) {
  json doc = report_to_json(report);
  doc["config"] = config;
  dir.write_json(stem + "_report.json", doc);
  const Trajectory traj = propagate(report.waveform(), TripletAmplitudes::ground(),
                                    {.method = PropagationMethod::kPiecewiseExponential});
  auto f = dir.open(stem + "_trajectory.csv");
  write_trajectory_csv(f, traj, config);
}

TrigSeries load_series(const std::string& path) {
  if (path.empty()) return TrigSeries::table_one();
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot read series file '" + path + "'");
  json doc;
  try {
    f >> doc;
  } catch (const json::exception& e) {
    throw ValidationError("series file '" + path + "' is not valid JSON: " + e.what());
  }
  return series_from_json(doc);
}

// ---------------------------------------------------------------------------

int cmd_tqd(const ExperimentConfig& cfg, std::ostream& out) {
  const ShortcutSpec spec{parse_shortcut_kind(cfg.kind), cfg.e, cfg.T};
  spec.validate();
  const OutputDir dir(cfg.out);
  const json config = to_json(cfg);
  const ControlWaveform waveform = shortcut_waveform(spec);
  const PropagateOptions opts = propagate_options(cfg);
  const Trajectory traj = propagate(waveform, TripletAmplitudes::ground(), opts);
  const double f = fidelity(traj);

  {
    auto w = dir.open("tqd_waveform.csv");
    write_waveform_csv(w, waveform, 1000, config);
  }
  {
    auto t = dir.open("tqd_trajectory.csv");
    write_trajectory_csv(t, traj, config);
  }
  dir.write_json("tqd_summary.json", {{"config", config},
                                      {"fidelity", f},
                                      {"steps_used", resolved_steps(waveform, opts)},
                                      {"short_time_limit", short_time_fidelity_limit()}});
  out << "fidelity " << format_number(f) << '\n';
  return kExitOk;
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out) {
  PropagationMethod method;
  if (cfg.method == "rk4") {
    method = PropagationMethod::kRk4;
  } else if (cfg.method == "exp" || cfg.method == "piecewise-exponential") {
    method = PropagationMethod::kPiecewiseExponential;
  } else {
    throw ValidationError("--method must be 'rk4' or 'exp'");
  }
  if (!cfg.series.empty() && !cfg.waveform.empty()) {
    throw ValidationError("give at most one of --series and --waveform");
  }
  std::optional<ControlWaveform> waveform;
  if (!cfg.series.empty()) {
    waveform = load_series(cfg.series).waveform(cfg.T);
  } else if (!cfg.waveform.empty()) {
    std::ifstream f(cfg.waveform);
    if (!f) throw ValidationError("cannot read waveform file '" + cfg.waveform + "'");
    waveform = read_waveform_csv(f);
  } else {
    waveform = ControlWaveform::constant(cfg.T, cfg.delta, cfg.omega);
  }
  const OutputDir dir(cfg.out);
  const json config = to_json(cfg);
  const Trajectory traj = propagate(*waveform, TripletAmplitudes::ground(), propagate_options(cfg, method));
  {
    auto t = dir.open("simulate_trajectory.csv");
    write_trajectory_csv(t, traj, config);
  }
  const auto pops = TripletAmplitudes(traj.final_state()).populations();
  dir.write_json("simulate_summary.json",
                 {{"config", config}, {"fidelity", fidelity(traj)}, {"final_populations", pops}});
  out << "fidelity " << format_number(fidelity(traj)) << '\n';
  return kExitOk;
}

int cmd_optimize(const ExperimentConfig& cfg, std::ostream& out) {
  const OptimizationReport report = run_optimization(cfg);
  const OutputDir dir(cfg.out);
  write_report(dir, "optimize", report, to_json(cfg));
  out << "fidelity " << format_number(report.fidelity) << " exit " << to_string(report.exit_reason) << '\n';
  return kExitOk;
}

SweepOptions sweep_options(const ExperimentConfig& cfg) {
  SweepOptions o;
  o.settings = optimizer_settings(cfg);
  o.segments = cfg.segments;
  o.threads = cfg.threads;
  return o;
}

int cmd_sweep_detuning(const ExperimentConfig& cfg, std::ostream& out) {
  const OutputDir dir(cfg.out);
  const auto cells = sweep_detuning(cfg.T_values, cfg.delta_values, sweep_options(cfg));
  auto f = dir.open("sweep_detuning.csv");
  write_sweep_csv(f, cells, to_json(cfg));
  for (double T : cfg.T_values) {
    const SweepCell* best = nullptr;
    for (const auto& c : cells) {
      if (c.duration == T && c.ok && (!best || c.fidelity > best->fidelity)) best = &c;
    }
    if (best) {
      out << "T " << format_number(T) << " best delta " << format_number(best->delta) << " fidelity "
          << format_number(best->fidelity) << '\n';
    }
  }
  return kExitOk;
}

int cmd_sweep_duration(const ExperimentConfig& cfg, std::ostream& out) {
  const OutputDir dir(cfg.out);
  const auto cells = sweep_duration(cfg.delta, cfg.T_values, sweep_options(cfg));
  auto f = dir.open("sweep_duration.csv");
  write_sweep_csv(f, cells, to_json(cfg));
  for (const auto& c : cells) {
    out << "T " << format_number(c.duration) << " fidelity " << (c.ok ? format_number(c.fidelity) : c.error)
        << '\n';
  }
  const int bad = first_monotonicity_violation(cells);
  if (bad >= 0) {
    out << "non-monotone at T " << format_number(cells[static_cast<std::size_t>(bad)].duration) << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}

json evaluate_series_doc(const TrigSeries& series, const ExperimentConfig& cfg) {
  const PropagateOptions opts = propagate_options(cfg);
  const double f_xi = evaluate_series(series, cfg.T, opts, SeriesTimeConvention::kXiUnits);
  const double f_norm = evaluate_series(series, cfg.T, opts, SeriesTimeConvention::kNormalizedPeriod);
  const bool xi_ok = f_xi >= 0.99;
  return {{"config", to_json(cfg)},
          {"series", series_to_json(series)},
          {"fidelity", f_xi},
          {"convention", to_string(SeriesTimeConvention::kXiUnits)},
          {"alternative_convention", to_string(SeriesTimeConvention::kNormalizedPeriod)},
          {"alternative_fidelity", f_norm},
          {"reproducing_convention",
           xi_ok ? to_string(SeriesTimeConvention::kXiUnits)
                 : (f_norm >= 0.99 ? to_string(SeriesTimeConvention::kNormalizedPeriod) : "none")}};
}

int cmd_evaluate_series(const ExperimentConfig& cfg, std::ostream& out) {
  const TrigSeries series = load_series(cfg.series);
  const OutputDir dir(cfg.out);
  const json doc = evaluate_series_doc(series, cfg);
  dir.write_json("evaluate_series.json", doc);
  out << "fidelity " << format_number(doc["fidelity"].get<double>()) << '\n';
  return kExitOk;
}

int cmd_limit(std::ostream& out) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(12) << short_time_fidelity_limit();
  out << s.str() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

int repro_table1(ExperimentConfig cfg, std::ostream& out) {
  cfg.T = 2.5;
  const OutputDir dir(cfg.out);
  const json doc = evaluate_series_doc(TrigSeries::table_one(), cfg);
  dir.write_json("table1.json", doc);
  out << "table1 fidelity " << format_number(doc["fidelity"].get<double>()) << " convention "
      << doc["reproducing_convention"].get<std::string>() << '\n';
  return kExitOk;
}

int repro_fig1b(ExperimentConfig cfg, std::ostream& out) {
  const OutputDir dir(cfg.out);
  cfg.T_values = log_spaced(0.01, 15.0, 100);
  const json config = to_json(cfg);
  const auto curve = tqd_fidelity_curve(cfg.e, cfg.T_values, propagate_options(cfg));
  {
    auto f = dir.open("fig1b_fidelity.csv");
    write_fidelity_curve_csv(f, curve, config);
  }
  json summary{{"config", config}, {"short_time_limit", short_time_fidelity_limit()}};
  for (ShortcutKind kind : {ShortcutKind::kSymmetric, ShortcutKind::kNonsymmetric}) {
    const ShortcutSpec spec{kind, cfg.e, 10.0};
    const ControlWaveform waveform = shortcut_waveform(spec);
    const Trajectory traj = propagate(waveform, TripletAmplitudes::ground(), propagate_options(cfg));
    const std::string name = to_string(kind);
    auto w = dir.open("fig1cd_waveform_" + name + ".csv");
    write_waveform_csv(w, waveform, 1000, config);
    auto t = dir.open("fig1ef_trajectory_" + name + ".csv");
    write_trajectory_csv(t, traj, config);
    summary["fidelity_T10_" + name] = fidelity(traj);
  }
  summary["fidelity_T0.01_symmetric"] = curve.front().symmetric;
  summary["fidelity_T0.01_nonsymmetric"] = curve.front().nonsymmetric;
  dir.write_json("fig1_summary.json", summary);
  out << "T=0.01 fidelity symmetric " << format_number(curve.front().symmetric) << " nonsymmetric "
      << format_number(curve.front().nonsymmetric) << " limit " << format_number(short_time_fidelity_limit())
      << '\n';
  return kExitOk;
}

int repro_fig2(ExperimentConfig cfg, std::ostream& out) {
  const OutputDir dir(cfg.out);
  cfg.mode = "piecewise";
  cfg.delta_mode = "fixed";
  cfg.delta = 0.0;
  cfg.T_values = {2.0, 2.5, 3.0, 3.6};
  json summary{{"config", to_json(cfg)}, {"fidelities", json::array()}};
  for (double T : cfg.T_values) {
    ExperimentConfig cell = cfg;
    cell.T = T;
    const OptimizationReport report = run_optimization(cell);
    std::ostringstream stem;
    stem << "fig2_T" << format_number(T);
    write_report(dir, stem.str(), report, to_json(cell));
    summary["fidelities"].push_back({{"T", T},
                                     {"fidelity", report.fidelity},
                                     {"saturation", report.saturation_fraction()}});
    out << "T " << format_number(T) << " fidelity " << format_number(report.fidelity) << " saturation "
        << format_number(report.saturation_fraction()) << '\n';
  }
  dir.write_json("fig2_summary.json", summary);
  return kExitOk;
}

int repro_fig3a(ExperimentConfig cfg, std::ostream& out) {
  const OutputDir dir(cfg.out);
  cfg.T_values = {2.5, 2.0, 1.5};
  cfg.delta_values = default_detuning_grid();
  const auto cells = sweep_detuning(cfg.T_values, cfg.delta_values, sweep_options(cfg));
  {
    auto f = dir.open("fig3a_sweep.csv");
    write_sweep_csv(f, cells, to_json(cfg));
  }
  ExperimentConfig highlight = cfg;
  highlight.mode = "piecewise";
  highlight.delta_mode = "fixed";
  highlight.T = 2.5;
  highlight.delta = -0.11;
  const OptimizationReport report = run_optimization(highlight);
  write_report(dir, "fig3cd", report, to_json(highlight));
  for (double T : cfg.T_values) {
    const SweepCell* best = nullptr;
    for (const auto& c : cells) {
      if (c.duration == T && c.ok && (!best || c.fidelity > best->fidelity)) best = &c;
    }
    if (best) {
      out << "T " << format_number(T) << " best delta " << format_number(best->delta) << " fidelity "
          << format_number(best->fidelity) << '\n';
    }
  }
  out << "delta -0.11 T 2.5 fidelity " << format_number(report.fidelity) << '\n';
  return kExitOk;
}

int repro_fig3b(ExperimentConfig cfg, std::ostream& out) {
  const OutputDir dir(cfg.out);
  cfg.T_values = default_duration_grid();
  int status = kExitOk;
  for (double delta : {0.0, -0.11}) {
    ExperimentConfig run = cfg;
    run.delta = delta;
    const auto cells = sweep_duration(delta, run.T_values, sweep_options(run));
    auto f = dir.open(delta == 0.0 ? "fig3b_delta0.csv" : "fig3b_delta-0.11.csv");
    write_sweep_csv(f, cells, to_json(run));
    if (first_monotonicity_violation(cells) >= 0) status = kExitNumeric;
    out << "delta " << format_number(delta) << ":";
    for (const auto& c : cells) out << ' ' << format_number(c.duration) << '=' << format_number(c.fidelity);
    out << '\n';
  }
  return status;
}

int repro_fig4c(ExperimentConfig cfg, std::ostream& out) {
  const OutputDir dir(cfg.out);
  cfg.mode = "trig";
  cfg.delta_mode = "trig-series";
  cfg.T = 2.5;
  const std::vector<int> harmonics{0, 1, 2, 3, 4, 5, 6};
  const ControlProblem base = make_problem(cfg);
  const auto reports = harmonic_scan(base, harmonics, optimizer_settings(cfg));
  json config = to_json(cfg);
  config["harmonics"] = harmonics;
  {
    auto f = dir.open("fig4c_harmonics.csv");
    f << "# config: " << config.dump() << '\n' << "p,fidelity\n";
    for (const auto& r : reports) f << r.problem.harmonics << ',' << format_number(r.fidelity) << '\n';
  }
  for (const auto& r : reports) {
    if (r.problem.harmonics == 3) write_report(dir, "fig4def_p3", r, config);
    out << "p " << r.problem.harmonics << " fidelity " << format_number(r.fidelity) << '\n';
  }

  ExperimentConfig fixed = cfg;
  fixed.delta_mode = "fixed";
  fixed.delta = -0.11;
  fixed.p = 200;
  const OptimizationReport wide = run_optimization(fixed);
  write_report(dir, "fig4ab_p200", wide, to_json(fixed));
  out << "p 200 fixed delta -0.11 fidelity " << format_number(wide.fidelity) << '\n';
  return kExitOk;
}

int cmd_repro(const std::string& id, const ExperimentConfig& cfg, std::ostream& out) {
  if (id == "table1") return repro_table1(cfg, out);
  if (id == "fig1b") return repro_fig1b(cfg, out);
  if (id == "fig2") return repro_fig2(cfg, out);
  if (id == "fig3a") return repro_fig3a(cfg, out);
  if (id == "fig3b") return repro_fig3b(cfg, out);
  if (id == "fig4c") return repro_fig4c(cfg, out);
  throw ValidationError("unknown figure id '" + id + "'");
}

// ---------------------------------------------------------------------------

// Copies one flag from the parsed-flags struct into the resolved config when
// the flag was given on the command line.
struct Binding {
  CLI::Option* option;
  std::function<void(ExperimentConfig&, const ExperimentConfig&)> apply;
};

class FlagSet {
 public:
  explicit FlagSet(ExperimentConfig& flags) : flags_(flags) {}

  template <class T>
  CLI::Option* add(CLI::App* sub, const std::string& name, T ExperimentConfig::*field, const std::string& help) {
    CLI::Option* opt = sub->add_option(name, flags_.*field, help);
    bindings_.push_back({opt, [field](ExperimentConfig& cfg, const ExperimentConfig& f) { cfg.*field = f.*field; }});
    return opt;
  }

  void apply(ExperimentConfig& cfg) const {
    for (const auto& b : bindings_) {
      if (b.option->count() > 0) b.apply(cfg, flags_);
    }
  }

 private:
  ExperimentConfig& flags_;
  std::vector<Binding> bindings_;
};

ExperimentConfig defaults_for(const std::string& command) {
  ExperimentConfig cfg;
  cfg.experiment = command;
  if (command == "simulate") cfg.T = 1.0;
  if (command == "optimize" || command == "evaluate-series") cfg.T = 2.5;
  if (command == "fig2" || command == "fig3a" || command == "fig3b" || command == "fig4c" || command == "table1") {
    cfg.T = 2.5;
  }
  if (command == "sweep-detuning") {
    cfg.T_values = {2.5};
    cfg.delta_values = default_detuning_grid();
  }
  if (command == "sweep-duration") cfg.T_values = default_duration_grid();
  return cfg;
}

}  // namespace

json to_json(const ExperimentConfig& c) {
  return {{"experiment", c.experiment}, {"kind", c.kind},
          {"e", c.e},                   {"T", c.T},
          {"delta", c.delta},           {"omega", c.omega},
          {"omega_bound", c.omega_bound}, {"delta_bound", c.delta_bound},
          {"mode", c.mode},             {"delta_mode", c.delta_mode},
          {"p", c.p},                   {"restarts", c.restarts},
          {"seed", c.seed},             {"steps", c.steps},
          {"segments", c.segments},     {"method", c.method},
          {"T_values", c.T_values},     {"delta_values", c.delta_values},
          {"series", c.series},         {"waveform", c.waveform},
          {"threads", c.threads},       {"out", c.out}};
}

void merge_json(ExperimentConfig& c, const json& doc) {
  if (!doc.is_object()) throw ValidationError("config file must hold a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "experiment") c.experiment = value.get<std::string>();
      else if (key == "kind") c.kind = value.get<std::string>();
      else if (key == "e") c.e = value.get<double>();
      else if (key == "T") c.T = value.get<double>();
      else if (key == "delta") c.delta = value.get<double>();
      else if (key == "omega") c.omega = value.get<double>();
      else if (key == "omega_bound") c.omega_bound = value.get<double>();
      else if (key == "delta_bound") c.delta_bound = value.get<double>();
      else if (key == "mode") c.mode = value.get<std::string>();
      else if (key == "delta_mode") c.delta_mode = value.get<std::string>();
      else if (key == "p") c.p = value.get<int>();
      else if (key == "restarts") c.restarts = value.get<int>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "steps") c.steps = value.get<std::size_t>();
      else if (key == "segments") c.segments = value.get<std::size_t>();
      else if (key == "method") c.method = value.get<std::string>();
      else if (key == "T_values") c.T_values = value.get<std::vector<double>>();
      else if (key == "delta_values") c.delta_values = value.get<std::vector<double>>();
      else if (key == "series") c.series = value.get<std::string>();
      else if (key == "waveform") c.waveform = value.get<std::string>();
      else if (key == "threads") c.threads = value.get<unsigned>();
      else if (key == "out") c.out = value.get<std::string>();
      else throw ValidationError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad config value: ") + e.what());
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Triplet Bell-state generation: shortcuts, simulation and optimal control"};
  app.require_subcommand(1);
  ExperimentConfig flags;
  FlagSet fs(flags);
  std::string config_path;
  std::string figure;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON file with parameter values");
    fs.add(sub, "--out", &ExperimentConfig::out, "Output directory");
    fs.add(sub, "--steps", &ExperimentConfig::steps, "Minimum RK4 steps");
  };
  auto optimizer_flags = [&](CLI::App* sub) {
    fs.add(sub, "--restarts", &ExperimentConfig::restarts, "Random restarts besides the omega = bound start");
    fs.add(sub, "--seed", &ExperimentConfig::seed, "Random seed");
    fs.add(sub, "--segments", &ExperimentConfig::segments, "Control discretization");
    fs.add(sub, "--omega-bound", &ExperimentConfig::omega_bound, "|omega| bound (units of xi)");
    fs.add(sub, "--delta-bound", &ExperimentConfig::delta_bound, "|delta| bound (units of xi)");
    fs.add(sub, "--threads", &ExperimentConfig::threads, "Worker threads for sweeps (0 = all cores)");
  };

  auto* tqd = app.add_subcommand("tqd", "Transitionless-driving shortcut: waveform, trajectory and fidelity");
  common(tqd);
  fs.add(tqd, "--kind", &ExperimentConfig::kind, "symmetric | nonsymmetric");
  fs.add(tqd, "--e", &ExperimentConfig::e, "Envelope amplitude e (units of xi)");
  fs.add(tqd, "--T", &ExperimentConfig::T, "Duration (units of 1/xi)");

  auto* simulate = app.add_subcommand("simulate", "Propagate a waveform from |dd>");
  common(simulate);
  fs.add(simulate, "--T", &ExperimentConfig::T, "Duration");
  fs.add(simulate, "--delta", &ExperimentConfig::delta, "Constant detuning");
  fs.add(simulate, "--omega", &ExperimentConfig::omega, "Constant Rabi frequency");
  fs.add(simulate, "--series", &ExperimentConfig::series, "Series JSON to simulate instead");
  fs.add(simulate, "--waveform", &ExperimentConfig::waveform, "Waveform CSV (t,delta,omega) to simulate instead");
  fs.add(simulate, "--method", &ExperimentConfig::method, "rk4 | exp");

  auto* optimize = app.add_subcommand("optimize", "Maximize |c2(T)|^2 under bounded controls");
  common(optimize);
  optimizer_flags(optimize);
  fs.add(optimize, "--T", &ExperimentConfig::T, "Duration");
  fs.add(optimize, "--delta", &ExperimentConfig::delta, "Fixed detuning");
  fs.add(optimize, "--mode", &ExperimentConfig::mode, "piecewise | trig");
  fs.add(optimize, "--delta-mode", &ExperimentConfig::delta_mode, "fixed | trig-series");
  fs.add(optimize, "--p", &ExperimentConfig::p, "Harmonics (trig mode)");

  auto* sweep_det = app.add_subcommand("sweep-detuning", "Best fidelity over a (T, constant delta) grid");
  common(sweep_det);
  optimizer_flags(sweep_det);
  fs.add(sweep_det, "--T-values", &ExperimentConfig::T_values, "Durations")->delimiter(',');
  fs.add(sweep_det, "--delta-values", &ExperimentConfig::delta_values, "Detunings")->delimiter(',');

  auto* sweep_dur = app.add_subcommand("sweep-duration", "Best fidelity against duration at fixed delta");
  common(sweep_dur);
  optimizer_flags(sweep_dur);
  fs.add(sweep_dur, "--T-values", &ExperimentConfig::T_values, "Durations")->delimiter(',');
  fs.add(sweep_dur, "--delta", &ExperimentConfig::delta, "Fixed detuning");

  auto* eval = app.add_subcommand("evaluate-series", "Fidelity of trigonometric-series controls");
  common(eval);
  fs.add(eval, "--series", &ExperimentConfig::series, "Series JSON (default: the reference p = 3 table)");
  fs.add(eval, "--T", &ExperimentConfig::T, "Duration");

  auto* limit = app.add_subcommand("limit", "Short-time fidelity limit of the shortcut");

  auto* repro = app.add_subcommand("repro", "Regenerate the dataset behind a figure or table");
  common(repro);
  optimizer_flags(repro);
  repro->add_option("figure", figure, "fig1b | fig2 | fig3a | fig3b | fig4c | table1")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  try {
    if (sub == limit) return cmd_limit(out);

    ExperimentConfig cfg = defaults_for(command == "repro" ? figure : command);
    if (command == "repro") cfg.out = "out/" + figure;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ValidationError("cannot read config file '" + config_path + "'");
      json doc;
      try {
        f >> doc;
      } catch (const json::exception& e) {
        throw ValidationError(std::string("config file is not valid JSON: ") + e.what());
      }
      // Summary and report files carry their config under "config".
      if (doc.is_object() && doc.contains("config") && doc["config"].is_object()) doc = doc["config"];
      merge_json(cfg, doc);
    }
    fs.apply(cfg);
    if (cfg.steps < kMinimumSteps) throw ValidationError("--steps must be >= " + std::to_string(kMinimumSteps));
    err << "# config: " << to_json(cfg).dump() << '\n';

    if (sub == tqd) return cmd_tqd(cfg, out);
    if (sub == simulate) return cmd_simulate(cfg, out);
    if (sub == optimize) return cmd_optimize(cfg, out);
    if (sub == sweep_det) return cmd_sweep_detuning(cfg, out);
    if (sub == sweep_dur) return cmd_sweep_duration(cfg, out);
    if (sub == eval) return cmd_evaluate_series(cfg, out);
    if (sub == repro) {
      if (std::find(kFigureIds.begin(), kFigureIds.end(), figure) == kFigureIds.end()) {
        throw ValidationError("unknown figure id '" + figure + "'");
      }
      return cmd_repro(figure, cfg, out);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace tripletctl::cli
