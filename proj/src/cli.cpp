#include "lhcoh/cli.hpp"

#include "lhcoh/ensemble.hpp"
#include "lhcoh/geometry.hpp"
#include "lhcoh/io.hpp"
#include "lhcoh/observables.hpp"
#include "lhcoh/toy.hpp"
#include "lhcoh/units.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace lhcoh {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

double parse_flag_value(const std::string& flag, const std::string& text) {
  try {
    return energy_to_internal(parse_unit_value(text));
  } catch (const std::invalid_argument& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep))
    parts.push_back(cur);
  return parts;
}

std::size_t parse_count(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw UsageError("malformed index '" + s + "'");
  return std::stoul(s);
}

WindowKind parse_kind(const std::string& s) {
  if (s == "symmetric")
    return WindowKind::Symmetric;
  if (s == "asymmetric")
    return WindowKind::Asymmetric;
  throw UsageError("--kind: expected symmetric or asymmetric");
}

const char* kind_name(WindowKind k) {
  return k == WindowKind::Symmetric ? "symmetric" : "asymmetric";
}

struct Manifest {
  json doc;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Manifest(const std::string& command, const std::vector<std::string>& args) {
    doc["command"] = command;
    doc["argv"] = args;
    doc["tool_version"] = kToolVersion;
    doc["started_utc"] = utc_now();
    doc["outputs"] = json::array();
  }
  void output(const fs::path& path, const std::string& bytes) {
    doc["outputs"].push_back({{"path", path.string()}, {"digest", content_digest(bytes)}});
  }
  void write(const fs::path& csv) {
    doc["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text_file(fs::path(csv.string() + ".manifest.json"), doc.dump(2) + "\n");
  }
};

void emit(Manifest& manifest, const fs::path& path, const std::string& bytes) {
  write_text_file(path, bytes);
  manifest.output(path, bytes);
}

// Relative discrepancy used in the toy CSV; absolute below `floor`.
double discrepancy(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

struct ToyFlags {
  std::string mechanism;
  std::string m = "1:32";
  std::size_t donors = 32;
  std::string gamma = "1meV";
  std::string kappa = "4/ps";
  std::string gamma_diss = "1/ns";
  std::string coupling;
  std::string nearest_convention = "J";
  std::string kind = "symmetric";
  std::size_t offset = 1;
  double tol = 1e-9;
  double rel_tol = 1e-11;
  std::uint64_t seed = 0;
  std::string out;
  std::string pt_out;
  std::string pt_m = "1,4,16,32";
  double pt_tmax_ps = 20.0;
  std::size_t pt_samples = 401;
  std::string svg;
};

int run_toy(const ToyFlags& f, const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  const Mechanism mechanism = [&] {
    try {
      return parse_mechanism(f.mechanism);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--mechanism: ") + e.what());
    }
  }();
  if (f.donors < 1)
    throw UsageError("--M: need at least one donor");
  const auto m_values = parse_index_list(f.m);
  for (auto m : m_values)
    if (m < 1 || m > f.donors)
      throw UsageError("--m: value " + std::to_string(m) + " outside [1, " +
                       std::to_string(f.donors) + "]");
  if (f.offset < 1 || f.offset > f.donors)
    throw UsageError("--offset: outside [1, M]");
  if (f.nearest_convention != "J" && f.nearest_convention != "pair")
    throw UsageError("--nearest-convention: expected J or pair");
  if (!(f.tol > 0.0))
    throw UsageError("--tol: must be > 0");
  const WindowKind kind = parse_kind(f.kind);

  const double gamma = parse_flag_value("--gamma", f.gamma);
  const double kappa = parse_flag_value("--kappa", f.kappa);
  const double diss = parse_flag_value("--gamma-diss", f.gamma_diss);
  if (kappa < 0.0 || diss < 0.0)
    throw UsageError("rates must be >= 0");
  std::string coupling_text = f.coupling;
  if (coupling_text.empty())
    coupling_text = mechanism == Mechanism::Nearest ? "100meV" : "10meV";
  const double coupling = parse_flag_value("--coupling", coupling_text);
  double scale = coupling;
  if (mechanism == Mechanism::Nearest && f.nearest_convention == "pair")
    scale = 2.0 * coupling;
  if (mechanism == Mechanism::Dipole && f.donors >= 2)
    scale = dipole_scale_for_mean_coupling(coupling, f.donors);

  const ToyParams params = ToyParams::make(f.donors, gamma, diss, kappa, mechanism, scale);
  const ConditionalHamiltonian h = build_conditional_hamiltonian(toy_network(params));
  const SpectralPropagator propagator(h);
  QuadratureOptions qopt;
  qopt.abs_tol = f.tol;
  qopt.rel_tol = f.rel_tol;

  Manifest manifest("toy", args);
  manifest.doc["master_seed"] = f.seed;
  manifest.doc["parameters"] = {
      {"mechanism", std::string(mechanism_name(mechanism))},
      {"M", f.donors},
      {"gamma", f.gamma},
      {"kappa", f.kappa},
      {"gamma_diss", f.gamma_diss},
      {"coupling", coupling_text},
      {"nearest_convention", f.nearest_convention},
      {"kind", kind_name(kind)},
      {"offset", f.offset},
      {"m", m_values},
      {"tol", f.tol},
      {"rel_tol", f.rel_tol},
      {"internal_ps", {{"gamma", gamma}, {"kappa", kappa}, {"Gamma", diss}, {"J", scale},
                       {"Delta", params.delta}}}};
  manifest.doc["config_digest"] = nullptr;

  std::string csv(kToyCsvHeader);
  csv += '\n';
  bool partial = false;
  json annotations = json::array();
  PlotSeries eta_series{"eta", {}, {}}, tf_series{"t_f", {}, {}}, tau_series{"tau", {}, {}};
  for (std::size_t m : m_values) {
    const AmplitudeState b0 = window_state(kind, m, f.offset, f.donors, f.donors + 1);
    const auto exact = observables_exact(h, b0);
    const auto quad = observables_quadrature(propagator, b0, qopt);
    const double x = static_cast<double>(m);
    if (exact && quad) {
      const double disc =
          std::max({discrepancy(exact->efficiency, quad->efficiency, f.tol),
                    exact->transfer_time && quad->transfer_time
                        ? discrepancy(*exact->transfer_time, *quad->transfer_time, f.tol)
                        : 0.0,
                    discrepancy(exact->lifetime, quad->lifetime, f.tol)});
      csv += std::to_string(m) + ',' + format_number(exact->efficiency) + ',' +
             format_number(quad->efficiency) + ',' + format_optional(exact->transfer_time) + ',' +
             format_number(exact->lifetime) + ',' + format_number(disc) + '\n';
      eta_series.x.push_back(x);
      eta_series.y.push_back(exact->efficiency);
      if (exact->transfer_time) {
        tf_series.x.push_back(x);
        tf_series.y.push_back(*exact->transfer_time);
      }
      tau_series.x.push_back(x);
      tau_series.y.push_back(exact->lifetime);
    } else {
      partial = true;
      const double eta_e = exact ? exact->efficiency : exact.divergence().efficiency;
      const double eta_q = quad ? quad->efficiency : quad.divergence().efficiency;
      csv += std::to_string(m) + ',' + format_number(eta_e) + ',' + format_number(eta_q) +
             ",nan,nan,nan\n";
      annotations.push_back(
          {{"m", m},
           {"reason", !exact ? exact.divergence().reason : quad.divergence().reason}});
      err << "m = " << m << ": diverges ("
          << (!exact ? exact.divergence().reason : quad.divergence().reason) << ")\n";
    }
  }
  manifest.doc["row_annotations"] = annotations;
  emit(manifest, f.out, csv);

  if (!f.pt_out.empty()) {
    auto pt_m = parse_index_list(f.pt_m);
    pt_m.erase(std::remove_if(pt_m.begin(), pt_m.end(),
                              [&](std::size_t m) { return m < 1 || m > f.donors; }),
               pt_m.end());
    if (f.pt_samples < 2 || !(f.pt_tmax_ps > 0.0))
      throw UsageError("--pt-samples must be >= 2 and --pt-tmax-ps > 0");
    std::string pt = "t_ps";
    std::vector<AmplitudeState> states;
    std::vector<PlotSeries> series;
    for (auto m : pt_m) {
      pt += ",P_m" + std::to_string(m);
      states.push_back(window_state(kind, m, f.offset, f.donors, f.donors + 1));
      series.push_back({"m = " + std::to_string(m), {}, {}});
    }
    pt += '\n';
    for (std::size_t i = 0; i < f.pt_samples; ++i) {
      const double t = f.pt_tmax_ps * static_cast<double>(i) / static_cast<double>(f.pt_samples - 1);
      pt += format_number(t);
      for (std::size_t k = 0; k < states.size(); ++k) {
        const double p = jump_densities(propagator, states[k], t).no_jump_probability;
        pt += ',' + format_number(p);
        series[k].x.push_back(t);
        series[k].y.push_back(p);
      }
      pt += '\n';
    }
    emit(manifest, f.pt_out, pt);
    if (!f.svg.empty())
      emit(manifest, f.svg + "_pt.svg",
           render_svg({"No-jump probability (" + std::string(mechanism_name(mechanism)) + ")",
                       "t (ps)", "P(t)", series, false}));
  }
  if (!f.svg.empty()) {
    const std::string name(mechanism_name(mechanism));
    eta_series.name = tf_series.name = tau_series.name = name;
    emit(manifest, f.svg + "_eta.svg", render_svg({"Efficiency", "m", "eta", {eta_series}, false}));
    emit(manifest, f.svg + "_tf.svg",
         render_svg({"Transfer time", "m", "t_f (ps)", {tf_series}, false}));
    emit(manifest, f.svg + "_tau.svg",
         render_svg({"Excitation lifetime", "m", "tau (ps)", {tau_series}, false}));
  }
  manifest.doc["exit_status"] = partial ? kExitPartial : kExitClean;
  manifest.write(f.out);
  out << "wrote " << f.out << " (" << m_values.size() << " rows)\n";
  return partial ? kExitPartial : kExitClean;
}

struct DetailedFlags {
  std::string config;
  std::string kind = "symmetric";
  std::string m = "1:32";
  std::string sigma = "0cm-1,10cm-1,30cm-1,50cm-1,100cm-1,150cm-1";
  std::size_t realizations = 100;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string window_mode = "all";
  bool donors_only = false;
  double tol = 1e-9;
  std::string out;
  std::string svg;
};

int run_detailed(const DetailedFlags& f, const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  const WindowKind kind = parse_kind(f.kind);
  const auto m_values = parse_index_list(f.m);
  std::vector<double> sigmas;
  for (const auto& item : split(f.sigma, ',')) {
    UnitValue v;
    try {
      v = parse_unit_value(item);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--sigma: ") + e.what());
    }
    // Kept verbatim when given in cm-1 so the CSV echoes the requested value.
    const double s = v.unit == Unit::InverseCentimeter
                         ? v.magnitude
                         : internal_to(energy_to_internal(v), Unit::InverseCentimeter);
    if (s < 0.0)
      throw UsageError("--sigma: values must be >= 0");
    sigmas.push_back(s);
  }
  if (sigmas.empty())
    throw UsageError("--sigma: empty list");
  if (f.realizations < 1)
    throw UsageError("--realizations: need at least one");
  if (f.workers < 1)
    throw UsageError("--workers: need at least one");
  if (f.window_mode != "all" && f.window_mode != "single")
    throw UsageError("--window-mode: expected all or single");

  const std::string config_text = read_text_file(f.config);
  json config_doc;
  try {
    config_doc = json::parse(config_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(f.config + ": " + e.what());
  }
  const GeometryConfig cfg = geometry_from_json(config_doc);
  const NetworkSpec spec = build_lh1_rc(cfg);
  for (auto m : m_values)
    if (m < 1 || m > spec.donors)
      throw UsageError("--m: value " + std::to_string(m) + " outside [1, " +
                       std::to_string(spec.donors) + "]");

  DisorderModel disorder;
  disorder.master_seed = f.seed;
  disorder.realizations = f.realizations;
  disorder.donors_only = f.donors_only;
  SweepOptions options;
  options.workers = f.workers;
  options.tol = f.tol;
  options.window_mode = f.window_mode == "all" ? WindowMode::AllOffsets : WindowMode::OnePerRealization;

  Manifest manifest("detailed", args);
  manifest.doc["master_seed"] = f.seed;
  manifest.doc["config_path"] = f.config;
  manifest.doc["config_digest"] = content_digest(config_text);
  manifest.doc["parameters"] = {{"kind", kind_name(kind)},
                                {"m", m_values},
                                {"sigma_cm1", sigmas},
                                {"realizations", f.realizations},
                                {"window_mode", f.window_mode},
                                {"donors_only", f.donors_only},
                                {"tol", f.tol},
                                {"workers", f.workers}};

  const SweepResult result = ensemble_sweep(spec, kind, m_values, sigmas, disorder, options);
  emit(manifest, f.out, sweep_to_csv(result));

  json annotations = json::array();
  for (const auto& r : result.rows)
    if (r.diverged > 0)
      annotations.push_back({{"m", r.m}, {"sigma_cm1", r.sigma_cm1}, {"diverged", r.diverged}});
  manifest.doc["row_annotations"] = annotations;

  if (!f.svg.empty()) {
    std::vector<PlotSeries> eta, tf;
    for (double s : sigmas) {
      PlotSeries e{"sigma = " + format_number(s) + " cm-1", {}, {}};
      PlotSeries t = e;
      for (const auto& r : result.rows) {
        if (r.sigma_cm1 != s || r.realizations == 0)
          continue;
        e.x.push_back(static_cast<double>(r.m));
        e.y.push_back(r.eta_mean);
        if (r.tf_mean) {
          t.x.push_back(static_cast<double>(r.m));
          t.y.push_back(*r.tf_mean);
        }
      }
      eta.push_back(e);
      tf.push_back(t);
    }
    const std::string title = std::string(kind_name(kind)) + " initial states";
    emit(manifest, f.svg + "_eta.svg", render_svg({"Efficiency, " + title, "m", "<eta_m>", eta, false}));
    emit(manifest, f.svg + "_tf.svg",
         render_svg({"Transfer time, " + title, "m", "<t_f> (ps)", tf, false}));
  }

  const bool partial = result.total_diverged() > 0;
  manifest.doc["exit_status"] = partial ? kExitPartial : kExitClean;
  manifest.write(f.out);

  out << "wrote " << f.out << " (" << result.rows.size() << " rows)\n";
  for (const auto& r : result.rows)
    if (r.sigma_cm1 == 30.0)
      out << "  sigma = 30 cm-1 (literature estimate): m = " << r.m
          << "  <eta> = " << format_number(r.eta_mean) << "  <t_f> = " << format_optional(r.tf_mean)
          << " ps\n";
  if (partial)
    err << result.total_diverged() << " realization(s) diverged and were excluded\n";
  return partial ? kExitPartial : kExitClean;
}

int run_replay(const std::string& manifest_path, const std::string& out_dir, std::ostream& out,
               std::ostream& err) {
  json manifest;
  try {
    manifest = json::parse(read_text_file(manifest_path));
  } catch (const json::parse_error& e) {
    throw ConfigError(manifest_path + ": " + e.what());
  }
  if (!manifest.contains("argv") || !manifest.contains("outputs"))
    throw ConfigError(manifest_path + ": not a run manifest");
  std::vector<std::string> argv = manifest.at("argv").get<std::vector<std::string>>();

  fs::create_directories(out_dir);
  std::map<std::string, std::string> renamed;
  static const std::set<std::string> path_flags{"--out", "--pt-out", "--svg"};
  for (std::size_t i = 0; i + 1 < argv.size(); ++i)
    if (path_flags.count(argv[i])) {
      const std::string fresh = (fs::path(out_dir) / fs::path(argv[i + 1]).filename()).string();
      renamed[argv[i + 1]] = fresh;
      argv[i + 1] = fresh;
    }

  std::ostringstream sink;
  const int status = run_cli(argv, sink, err);
  bool identical = true;
  for (const auto& o : manifest.at("outputs")) {
    std::string original = o.at("path").get<std::string>();
    std::string fresh;
    for (const auto& [from, to] : renamed)
      if (original == from || original.rfind(from, 0) == 0)
        fresh = to + original.substr(from.size());
    if (fresh.empty())
      fresh = (fs::path(out_dir) / fs::path(original).filename()).string();
    const std::string digest = content_digest(read_text_file(fresh));
    const bool same = digest == o.at("digest").get<std::string>();
    identical = identical && same;
    out << (same ? "identical  " : "DIFFERENT  ") << original << " -> " << fresh << "\n";
  }
  if (!identical) {
    err << "replay produced different outputs\n";
    return 1;
  }
  return status;
}

} // namespace

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> values;
  for (const auto& part : split(text, ',')) {
    if (part.empty())
      throw UsageError("empty entry in list '" + text + "'");
    const auto fields = split(part, ':');
    if (fields.size() == 1) {
      values.push_back(parse_count(fields[0]));
    } else if (fields.size() == 2 || fields.size() == 3) {
      const std::size_t lo = parse_count(fields[0]);
      const std::size_t hi = parse_count(fields[1]);
      const std::size_t step = fields.size() == 3 ? parse_count(fields[2]) : 1;
      if (step == 0 || hi < lo)
        throw UsageError("bad range '" + part + "'");
      for (std::size_t v = lo; v <= hi; v += step)
        values.push_back(v);
    } else {
      throw UsageError("bad range '" + part + "'");
    }
  }
  if (values.empty())
    throw UsageError("empty list");
  return values;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coherent excitation transfer in ring-hub light-harvesting networks", "lhcoh"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  ToyFlags toy;
  auto* toy_cmd = app.add_subcommand("toy", "Exchange-invariant toy model: eta, t_f, tau versus m");
  toy_cmd->add_option("--mechanism", toy.mechanism, "nearest | pairwise | dipole")->required();
  toy_cmd->add_option("--m", toy.m, "delocalization lengths, e.g. 1:32 or 1,2,4");
  toy_cmd->add_option("--M", toy.donors, "number of donors");
  toy_cmd->add_option("--gamma", toy.gamma, "donor-acceptor coupling, e.g. 1meV");
  toy_cmd->add_option("--kappa", toy.kappa, "trapping rate, e.g. 4/ps");
  toy_cmd->add_option("--gamma-diss", toy.gamma_diss, "dissipation rate, e.g. 1/ns");
  toy_cmd->add_option("--coupling", toy.coupling,
                      "ring coupling: J (nearest), J_jk (pairwise), mean pair coupling (dipole)");
  toy_cmd->add_option("--nearest-convention", toy.nearest_convention,
                      "J: the coupling is J, bonds carry J/2; pair: the coupling is J_{j,j+1}");
  toy_cmd->add_option("--kind", toy.kind, "symmetric | asymmetric");
  toy_cmd->add_option("--offset", toy.offset, "first donor of the window (1-based)");
  toy_cmd->add_option("--tol", toy.tol, "absolute quadrature tolerance");
  toy_cmd->add_option("--rel-tol", toy.rel_tol, "relative quadrature tolerance");
  toy_cmd->add_option("--seed", toy.seed, "recorded in the manifest (the toy model is deterministic)");
  toy_cmd->add_option("--out", toy.out, "CSV output path")->required();
  toy_cmd->add_option("--pt-out", toy.pt_out, "optional CSV of P(t)");
  toy_cmd->add_option("--pt-m", toy.pt_m, "m values for the P(t) series");
  toy_cmd->add_option("--pt-tmax-ps", toy.pt_tmax_ps, "P(t) time window in ps");
  toy_cmd->add_option("--pt-samples", toy.pt_samples, "P(t) sample count");
  toy_cmd->add_option("--svg", toy.svg, "SVG path prefix");

  DetailedFlags det;
  auto* det_cmd = app.add_subcommand("detailed", "LH1-RC model with static disorder ensembles");
  det_cmd->add_option("--config", det.config, "geometry config JSON")->required();
  det_cmd->add_option("--kind", det.kind, "symmetric | asymmetric");
  det_cmd->add_option("--m", det.m, "delocalization lengths");
  det_cmd->add_option("--sigma", det.sigma, "disorder widths with units, e.g. 0cm-1,30cm-1");
  det_cmd->add_option("--realizations", det.realizations, "disorder realizations per sigma");
  det_cmd->add_option("--seed", det.seed, "master seed");
  det_cmd->add_option("--workers", det.workers, "worker threads");
  det_cmd->add_option("--window-mode", det.window_mode,
                      "all: every window offset per realization; single: one keyed offset");
  det_cmd->add_flag("--donors-only", det.donors_only, "disorder donor energies only");
  det_cmd->add_option("--tol", det.tol, "efficiency below which t_f is undefined");
  det_cmd->add_option("--out", det.out, "CSV output path")->required();
  det_cmd->add_option("--svg", det.svg, "SVG path prefix");

  std::string geometry_out;
  auto* geo_cmd = app.add_subcommand("geometry", "Write the shipped default geometry config");
  geo_cmd->add_option("--out", geometry_out, "JSON output path")->required();

  std::string manifest_path, replay_dir = "replay";
  auto* replay_cmd =
      app.add_subcommand("replay", "Re-run a manifest and compare output digests");
  replay_cmd->add_option("manifest", manifest_path, "manifest JSON")->required();
  replay_cmd->add_option("--out-dir", replay_dir, "directory for replayed outputs");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitClean;
  } catch (const CLI::CallForVersion& e) {
    out << kToolVersion << "\n";
    return kExitClean;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*toy_cmd)
      return run_toy(toy, args, out, err);
    if (*det_cmd)
      return run_detailed(det, args, out, err);
    if (*geo_cmd) {
      write_text_file(geometry_out, geometry_to_json(default_geometry_config()).dump(2) + "\n");
      out << "wrote " << geometry_out << "\n";
      return kExitClean;
    }
    if (*replay_cmd)
      return run_replay(manifest_path, replay_dir, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitUsage;
}

} // namespace lhcoh
