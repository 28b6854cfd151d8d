#include "cavnoise/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iostream>
#include <set>
#include <sstream>

#include "cavnoise/io.hpp"
#include "cavnoise/measurement.hpp"
#include "cavnoise/noise_model.hpp"
#include "cavnoise/spectrum.hpp"
#include "cavnoise/trace_io.hpp"
#include "cavnoise/welch.hpp"

namespace cavnoise::cli {

namespace {

using nlohmann::ordered_json;

constexpr double kDefaultTauM = 300.0;

struct Common {
  std::string params_file;
  std::string preset;
  std::optional<double> tau_m;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--params", c.params_file, "parameter file (key = value, SI units)");
  cmd->add_option("--preset", c.preset, "built-in parameter set instead of a file")
      ->check(CLI::IsMember({"reference", "desk"}));
  cmd->add_option("--tau-m", c.tau_m, "measurement time [s]")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "output path (stdout when omitted)");
}

PhysicalParams resolve_params(const Common& c) {
  PhysicalParams p;
  if (!c.params_file.empty() && !c.preset.empty()) throw std::runtime_error("give either --params or --preset, not both");
  if (!c.params_file.empty()) {
    p = load_params(c.params_file);
  } else if (c.preset == "reference") {
    p = reference_parameters();
  } else if (c.preset == "desk") {
    p = desk_parameters();
  } else {
    throw std::runtime_error("--params FILE (or --preset) is required");
  }
  if (p.measurement_time == 0.0) p.measurement_time = kDefaultTauM;
  if (c.tau_m) p.measurement_time = *c.tau_m;
  return p;
}

ordered_json derived_json(const DerivedParams& d) {
  return ordered_json{{"power_W", d.power},
                      {"omega0_rad_s", d.omega0},
                      {"cavity_length_m", d.length},
                      {"mirror_mass_kg", d.mass},
                      {"nu_rad_s", d.nu},
                      {"Q", d.q_factor},
                      {"Gamma_s", d.damping},
                      {"temperature_K", d.temperature},
                      {"gamma_s", d.gamma},
                      {"mu_s", d.mu},
                      {"epsilon", d.epsilon},
                      {"tau_m_s", d.tau_m},
                      {"finesse", d.finesse},
                      {"g", d.g},
                      {"chi_s", d.chi},
                      {"drive_E", d.drive},
                      {"beta", d.beta},
                      {"alpha", d.alpha},
                      {"q_ss_m", d.q_ss},
                      {"detuning_rad_s", d.detuning},
                      {"T_s", d.scaled_temperature},
                      {"kappa_c_s", d.kappa_c}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Emitter {
  std::ostream& out;
  std::ostream& err;
  std::vector<std::string> argv;

  // Writes `contents` to `path` (or stdout) and a manifest next to it.
  void emit(const std::string& path, const std::string& contents, const std::string& command,
            const PhysicalParams& p, const DerivedParams& d, std::optional<std::uint64_t> seed,
            const ordered_json& extra = ordered_json::object(),
            const std::vector<std::string>& more_outputs = {}) const {
    if (path.empty()) {
      out << contents;
      return;
    }
    io::write_atomic(path, contents);
    ordered_json m;
    m["tool"] = "cavnoise";
    m["version"] = kToolVersion;
    m["command"] = command;
    m["argv"] = argv;
    m["timestamp_utc"] = utc_timestamp();
    m["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
    std::vector<std::string> outputs{path};
    outputs.insert(outputs.end(), more_outputs.begin(), more_outputs.end());
    m["outputs"] = outputs;
    m["params_file"] = format_params(p);
    m["derived"] = derived_json(d);
    m["settings"] = extra;
    io::write_atomic(path + ".manifest.json", m.dump(2) + "\n");
  }
};

void warn_once(std::ostream& err, std::set<std::string>& seen, const std::string& w) {
  if (seen.insert(w).second) err << "warning: " << w << '\n';
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (!(hi > lo) || n < 2) throw std::invalid_argument("linear grid needs omega-max > omega-min and at least 2 points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = hi;
  return g;
}

bool parse_bool(std::string_view v, std::string_view what) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::runtime_error(std::string(what) + ": expected true or false, got '" + std::string(v) + "'");
}

std::uint64_t parse_count(std::string_view v, std::string_view what) {
  const double x = io::parse_double(v, what);
  if (!(x >= 0.0) || x != std::floor(x) || x > 1.8e19) {
    throw std::runtime_error(std::string(what) + ": expected a non-negative integer");
  }
  return static_cast<std::uint64_t>(x);
}

// Groups for the per-term toggled comparison runs.
struct TermGroup {
  const char* name;
  std::vector<Source> sources;
};

const std::vector<TermGroup>& term_groups() {
  static const std::vector<TermGroup> groups = {
      {"output_vacuum", {Source::YIn, Source::YbIn}},
      {"demodulation", {Source::Q1, Source::Q2}},
      {"back_action", {Source::XIn}},
      {"internal_loss", {Source::XbIn}},
      {"thermal", {Source::Xi, Source::Eta}},
      {"classical_amplitude", {Source::ClassicalX}},
      {"classical_phase", {Source::ClassicalY}},
  };
  return groups;
}

double statistical_rms(std::size_t segments) {
  // Hann windows at 50% overlap: per-bin variance (1 + 2 rho^2) / K with rho ~ 1/6.
  return std::sqrt((1.0 + 2.0 / 36.0) / static_cast<double>(segments));
}

ordered_json band_json(const BandComparison& c) {
  return ordered_json{{"rms_relative", c.rms_relative},
                      {"mean_relative", c.mean_relative},
                      {"max_abs_relative", c.max_abs_relative},
                      {"bins", c.bins}};
}

ordered_json sim_json(const SimSettings& s, double band_lo, double band_hi) {
  std::vector<std::string> on;
  for (std::size_t i = 0; i < kSourceCount; ++i) {
    if (s.config.sources.on[i]) on.emplace_back(source_name(static_cast<Source>(i)));
  }
  return ordered_json{{"dt_s", s.config.dt},
                      {"duration_s", s.config.duration},
                      {"burn_in_s", s.config.burn_in},
                      {"seed", s.config.seed},
                      {"segment_length", s.config.segment_length},
                      {"n_segments", s.config.n_segments},
                      {"n_trajectories", s.config.n_trajectories},
                      {"sources", on},
                      {"classical_x", describe(s.config.classical_x)},
                      {"classical_y", describe(s.config.classical_y)},
                      {"readout", s.config.readout == Readout::PhaseModulation ? "pm" : "homodyne"},
                      {"band_rad_s", {band_lo, band_hi}},
                      {"tolerance", s.tolerance},
                      {"runtime_cap_s", s.runtime_cap},
                      {"per_term", s.per_term}};
}

int cmd_spectrum(const Common& c, const std::string& scheme_s, const std::string& thermal_s,
                 const std::string& noise_s, std::optional<double> wmin, std::optional<double> wmax,
                 std::size_t points, const std::string& scale, std::optional<double> lo_amp, double refl,
                 std::optional<double> carrier, const Emitter& em) {
  const PhysicalParams p = resolve_params(c);
  const DerivedParams d = derive(p);
  const NoiseModel noise = parse_noise_argument(noise_s);
  const DetectionScheme scheme = scheme_s == "pm" ? DetectionScheme{phase_modulation(d)}
                                                  : DetectionScheme{Homodyne{lo_amp.value_or(d.beta), refl}};
  check_scheme(scheme);
  const ThermalModel thermal = thermal_s == "cbmme" ? ThermalModel::Corrected : ThermalModel::Standard;

  const double lo = wmin.value_or(d.damping / 10.0);
  const double hi = wmax.value_or(10.0 * d.kappa_c);
  const std::vector<double> grid = scale == "log" ? log_grid(lo, hi, points) : linear_grid(lo, hi, points);

  std::set<std::string> warned;
  if (carrier) {
    const double top = std::max(std::abs(grid.front()), std::abs(grid.back()));
    if (top > 0.1 * *carrier) {
      warn_once(em.err, warned,
                "grid reaches within a factor 10 of the modulation frequency; the baseband model assumes "
                "omega << Delta");
    }
  }
  if (d.scaled_temperature < 10.0) {
    warn_once(em.err, warned, "T_s < 10: thermal terms are outside the high-temperature regime");
  }

  std::ostringstream csv;
  csv << spectrum_csv_header() << '\n';
  for (const auto& b : evaluate_grid(d, noise, scheme, thermal, grid)) {
    using io::format_double;
    csv << format_double(b.omega) << ',' << format_double(b.shot) << ',' << format_double(b.back_action) << ','
        << format_double(b.internal_loss) << ',' << format_double(b.amplitude_noise) << ','
        << format_double(b.phase_noise) << ',' << format_double(b.thermal_t) << ','
        << format_double(b.thermal_correction) << ',' << format_double(b.total) << '\n';
  }
  em.emit(c.out, csv.str(), "spectrum", p, d, std::nullopt,
          ordered_json{{"schema", kSpectrumSchema},
                       {"scheme", scheme_name(scheme)},
                       {"thermal", thermal_model_name(thermal)},
                       {"noise", noise_s},
                       {"omega_scale", scale},
                       {"omega_min", grid.front()},
                       {"omega_max", grid.back()},
                       {"omega_points", grid.size()},
                       {"raw_scale", raw_scale(d, scheme)}});
  return kOk;
}

int cmd_error_budget(const Common& c, double pmin, double pmax, std::size_t points, const std::string& at_s,
                     const std::string& method_s, const Emitter& em) {
  const PhysicalParams p = resolve_params(c);
  const DerivedParams d = derive(p);
  std::vector<MeasurementPoint> at;
  if (at_s == "dc" || at_s == "both") at.push_back(MeasurementPoint::Dc);
  if (at_s == "resonance" || at_s == "both") at.push_back(MeasurementPoint::Resonance);
  const BudgetMethod method = method_s == "closed_form" ? BudgetMethod::ClosedForm : BudgetMethod::SpectrumScaled;
  const auto powers = log_grid(pmin, pmax, points);
  const auto rows = power_sweep(p, powers, p.measurement_time, method, at);

  std::set<std::string> warned;
  for (const auto& r : rows) {
    for (const auto& w : r.budget.warnings) warn_once(em.err, warned, w);
  }
  em.emit(c.out, budget_csv(rows), "error-budget", p, d, std::nullopt,
          ordered_json{{"schema", kBudgetSchema},
                       {"power_min_W", pmin},
                       {"power_max_W", pmax},
                       {"power_points", points},
                       {"at", at_s},
                       {"method", method_name(method)},
                       {"tau_m_s", p.measurement_time}});
  return kOk;
}

SimSettings resolve_sim(const std::string& file, std::optional<std::uint64_t> seed) {
  if (file.empty()) throw std::runtime_error("--sim-config FILE is required");
  SimSettings s = load_sim_settings(file);
  if (seed) s.config.seed = *seed;
  return s;
}

int cmd_compare(const Common& c, const std::string& sim_file, std::optional<std::uint64_t> seed,
                std::optional<double> tolerance, std::optional<double> cap, const std::string& psd_out,
                const Emitter& em) {
  const PhysicalParams p = resolve_params(c);
  const DerivedParams d = derive(p);
  SimSettings s = resolve_sim(sim_file, seed);
  if (tolerance) s.tolerance = *tolerance;
  if (cap) s.runtime_cap = *cap;
  check_config(d, s.config, true);

  const double band_lo = s.band_min > 0.0 ? s.band_min : d.nu / 3.0;
  const double band_hi = s.band_max > 0.0 ? s.band_max : 3.0 * d.nu;

  std::vector<std::pair<std::string, SimConfig>> runs{{"total", s.config}};
  if (s.per_term) {
    for (const auto& g : term_groups()) {
      SimConfig one = s.config;
      one.sources = SourceSwitches::none();
      bool any = false;
      for (Source src : g.sources) {
        if (s.config.sources[src]) {
          one.sources.set(src, true);
          any = true;
        }
      }
      if (any) runs.emplace_back(g.name, one);
    }
  }

  double estimate = 0.0;
  for (const auto& r : runs) estimate += estimated_runtime_seconds(d, r.second);
  if (estimate > s.runtime_cap) {
    const double sim_seconds = static_cast<double>(planned_steps(d, s.config)) * s.config.dt;
    em.err << "refusing: estimated runtime " << estimate << " s exceeds the cap of " << s.runtime_cap
           << " s (simulated duration required: " << sim_seconds << " s over " << runs.size()
           << " run(s)); raise runtime_cap_s or shrink the configuration\n";
    return kRuntimeCap;
  }

  ordered_json report;
  report["schema"] = kCompareSchema;
  report["command"] = "compare";
  report["estimated_runtime_s"] = estimate;
  report["simulation"] = sim_json(s, band_lo, band_hi);
  report["derived"] = derived_json(d);

  bool pass = true;
  std::string main_psd;
  ordered_json terms = ordered_json::array();
  for (const auto& [name, cfg] : runs) {
    const PsdEstimate est = simulate_psd(d, cfg, Channel::Signal);
    ordered_json entry;
    entry["name"] = name;
    entry["segments"] = est.segments;
    entry["resolution_rad_s"] = est.resolution();
    entry["expected_rms_statistical"] = statistical_rms(est.segments);
    if (!cfg.sources.any()) {
      const DetectionScheme scheme = cfg.readout == Readout::PhaseModulation
                                         ? DetectionScheme{phase_modulation(d)}
                                         : DetectionScheme{Homodyne{1.0, 0.5}};
      const double floor = shot_floor(d, scheme);
      const auto cmp = compare_band(est, [floor](double) { return floor; }, band_lo, band_hi);
      entry["reference"] = "shot_floor";
      entry["comparison"] = band_json(cmp);
      entry["note"] =
          "all sources off: simulated PSD is zero while the analytic total is the shot floor; the shot floor is "
          "detector-side, not cavity-side, so enable y_in, yb_in, q1 and q2 to compare floors";
      entry["expected_mismatch"] = true;
      entry["pass"] = false;
      pass = false;
    } else {
      const auto cmp = compare_band(
          est, [&, cfg = cfg](double w) { return expected_psd(d, cfg, Channel::Signal, w); }, band_lo, band_hi);
      entry["reference"] = "analytic_enabled_sources";
      entry["comparison"] = band_json(cmp);
      entry["pass"] = cmp.rms_relative <= s.tolerance;
      pass = pass && cmp.rms_relative <= s.tolerance;
    }
    if (name == "total") {
      report["total"] = entry;
      main_psd = psd_csv(est);
    } else {
      terms.push_back(entry);
    }
  }
  report["per_term"] = terms;
  report["pass"] = pass;

  std::vector<std::string> extra_outputs;
  if (!psd_out.empty()) {
    io::write_atomic(psd_out, main_psd);
    extra_outputs.push_back(psd_out);
  }
  em.emit(c.out, report.dump(2) + "\n", "compare", p, d, s.config.seed, sim_json(s, band_lo, band_hi),
          extra_outputs);
  if (!pass) em.err << "compare: deviation exceeds tolerance " << s.tolerance << '\n';
  return pass ? kOk : kTolerance;
}

int cmd_simulate(const Common& c, const std::string& sim_file, std::optional<std::uint64_t> seed,
                 const std::string& channel_s, const std::string& trace_out, const Emitter& em) {
  const PhysicalParams p = resolve_params(c);
  const DerivedParams d = derive(p);
  const SimSettings s = resolve_sim(sim_file, seed);
  const Channel channel = channel_s == "signal"     ? Channel::Signal
                          : channel_s == "position" ? Channel::Position
                                                    : Channel::OutputPhase;
  const ordered_json extra = sim_json(s, 0.0, 0.0);
  if (!trace_out.empty()) {
    const SimTrace trace = integrate(d, s.config);
    write_trace(trace_out, to_table(trace));
    if (!c.out.empty() || s.config.n_segments > 0) {
      check_config(d, s.config, true);
      em.emit(c.out, psd_csv(output_psd(trace, s.config, channel)), "simulate", p, d, s.config.seed, extra,
              {trace_out});
    }
    return kOk;
  }
  em.emit(c.out, psd_csv(simulate_psd(d, s.config, channel)), "simulate", p, d, s.config.seed, extra);
  return kOk;
}

}  // namespace

SourceSwitches parse_sources(std::string_view spec) {
  const std::string s = io::trim(spec);
  if (s == "vacuum") return SourceSwitches::vacuum();
  if (s == "thermal") return SourceSwitches::thermal();
  if (s == "all") return SourceSwitches::all();
  if (s == "none") return SourceSwitches::none();
  SourceSwitches out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string name = io::trim(item);
    if (name == "vacuum" || name == "thermal") {
      const SourceSwitches group = name == "vacuum" ? SourceSwitches::vacuum() : SourceSwitches::thermal();
      for (std::size_t i = 0; i < kSourceCount; ++i) out.on[i] = out.on[i] || group.on[i];
      continue;
    }
    const auto src = source_from_name(name);
    if (!src) throw std::runtime_error("unknown noise source '" + name + "'");
    out.set(*src, true);
  }
  return out;
}

SimSettings parse_sim_settings(std::string_view text) {
  SimSettings s;
  std::set<std::string> seen;
  for (const auto& kv : io::parse_key_values(text)) {
    const std::string where = "line " + std::to_string(kv.line) + ": ";
    if (!seen.insert(kv.key).second) throw std::runtime_error(where + "duplicate key '" + kv.key + "'");
    const std::string& k = kv.key;
    const std::string& v = kv.value;
    try {
      if (k == "dt_s") s.config.dt = io::parse_double(v, k);
      else if (k == "duration_s") s.config.duration = io::parse_double(v, k);
      else if (k == "burn_in_s") s.config.burn_in = io::parse_double(v, k);
      else if (k == "seed") s.config.seed = parse_count(v, k);
      else if (k == "segment_length") s.config.segment_length = parse_count(v, k);
      else if (k == "n_segments") s.config.n_segments = parse_count(v, k);
      else if (k == "n_trajectories") s.config.n_trajectories = parse_count(v, k);
      else if (k == "sources") s.config.sources = parse_sources(v);
      else if (k == "classical_x") s.config.classical_x = parse_shape(v);
      else if (k == "classical_y") s.config.classical_y = parse_shape(v);
      else if (k == "readout") {
        if (v == "pm") s.config.readout = Readout::PhaseModulation;
        else if (v == "homodyne") s.config.readout = Readout::Homodyne;
        else throw std::runtime_error("readout must be pm or homodyne");
      } else if (k == "band_min_rad_s") s.band_min = io::parse_double(v, k);
      else if (k == "band_max_rad_s") s.band_max = io::parse_double(v, k);
      else if (k == "tolerance") s.tolerance = io::parse_double(v, k);
      else if (k == "runtime_cap_s") s.runtime_cap = io::parse_double(v, k);
      else if (k == "per_term") s.per_term = parse_bool(v, k);
      else throw std::runtime_error("unknown key '" + k + "'");
    } catch (const std::exception& e) {
      throw std::runtime_error(where + e.what());
    }
  }
  return s;
}

SimSettings load_sim_settings(const std::filesystem::path& path) { return parse_sim_settings(io::read_text(path)); }

std::string spectrum_csv_header() {
  return "omega_rad_s,shot,back_action,internal_loss,amplitude_noise,phase_noise,thermal_T,thermal_correction,total";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noise budget and time-domain oracle for phase-quadrature readout of a cavity mirror"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common sp_c, eb_c, cmp_c, sim_c;

  auto* sp = app.add_subcommand("spectrum", "per-term signal spectrum on a frequency grid (CSV)");
  add_common(sp, sp_c);
  std::string scheme = "pm", thermal = "cbmme", noise = "zero", scale = "log";
  std::optional<double> wmin, wmax, lo_amp, carrier;
  std::size_t wpoints = 512;
  double refl = 0.5;
  sp->add_option("--scheme", scheme)->check(CLI::IsMember({"pm", "homodyne"}));
  sp->add_option("--thermal", thermal)->check(CLI::IsMember({"cbmme", "sbmme"}));
  sp->add_option("--noise", noise, "FILE | zero | white:L | lorentzian:L:WC | one_over_f:L:WC:FLOOR");
  sp->add_option("--omega-min", wmin, "rad/s (default Gamma/10)");
  sp->add_option("--omega-max", wmax, "rad/s (default 10 kappa_c)");
  sp->add_option("--omega-points", wpoints)->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  sp->add_option("--omega-scale", scale)->check(CLI::IsMember({"log", "lin"}));
  sp->add_option("--lo-amplitude", lo_amp, "homodyne local oscillator amplitude (default beta)");
  sp->add_option("--reflectivity", refl, "homodyne beamsplitter reflectivity");
  sp->add_option("--carrier-frequency", carrier, "modulation frequency Delta [rad/s], warning check only");

  auto* eb = app.add_subcommand("error-budget", "position error budget across a laser power sweep (CSV)");
  add_common(eb, eb_c);
  double pmin = 1e-6, pmax = 1.0;
  std::size_t ppoints = 61;
  std::string at = "both", method = "spectrum_scaled";
  eb->add_option("--power-min", pmin)->check(CLI::PositiveNumber);
  eb->add_option("--power-max", pmax)->check(CLI::PositiveNumber);
  eb->add_option("--power-points", ppoints)->check(CLI::Range(std::size_t{2}, std::size_t{1000000}));
  eb->add_option("--at", at)->check(CLI::IsMember({"dc", "resonance", "both"}));
  eb->add_option("--method", method)->check(CLI::IsMember({"closed_form", "spectrum_scaled"}));

  auto* cmp = app.add_subcommand("compare", "simulated vs analytic signal spectrum (JSON report)");
  add_common(cmp, cmp_c);
  std::string cmp_sim, psd_out;
  std::optional<std::uint64_t> cmp_seed;
  std::optional<double> tol, cap;
  cmp->add_option("--sim-config", cmp_sim)->required();
  cmp->add_option("--seed", cmp_seed);
  cmp->add_option("--tolerance", tol)->check(CLI::PositiveNumber);
  cmp->add_option("--runtime-cap", cap, "seconds")->check(CLI::PositiveNumber);
  cmp->add_option("--psd-out", psd_out, "also write the simulated PSD (CSV)");

  auto* sim = app.add_subcommand("simulate", "time-domain simulation: PSD (CSV) and optional trace dump");
  add_common(sim, sim_c);
  std::string sim_file, channel = "signal", trace_out;
  std::optional<std::uint64_t> sim_seed;
  sim->add_option("--sim-config", sim_file)->required();
  sim->add_option("--seed", sim_seed);
  sim->add_option("--channel", channel)->check(CLI::IsMember({"signal", "position", "y_out"}));
  sim->add_option("--trace-out", trace_out, "store the trace in the binary columnar format");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  Emitter em{out, err, std::vector<std::string>(argv, argv + argc)};
  try {
    if (*sp) return cmd_spectrum(sp_c, scheme, thermal, noise, wmin, wmax, wpoints, scale, lo_amp, refl, carrier, em);
    if (*eb) return cmd_error_budget(eb_c, pmin, pmax, ppoints, at, method, em);
    if (*cmp) return cmd_compare(cmp_c, cmp_sim, cmp_seed, tol, cap, psd_out, em);
    if (*sim) return cmd_simulate(sim_c, sim_file, sim_seed, channel, trace_out, em);
  } catch (const ValidationError& e) {
    err << "invalid parameters:\n";
    for (const auto& v : e.violations()) err << "  " << v.field << ": " << v.rule << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kValidation;
}

}  // namespace cavnoise::cli
