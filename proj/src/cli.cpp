#include "qrtw/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qrtw/evolution.hpp"
#include "qrtw/io.hpp"
#include "qrtw/series.hpp"

namespace qrtw::cli {
namespace {

using io::Json;
using C = std::complex<double>;

struct RawOptions {
  std::optional<std::string> config, preset, barrier, window, k, out, format, injection;
  std::optional<double> p, q, delta, alpha, s, theta, tol;
  std::optional<int> m;
  std::optional<long> max_steps, terms, dump_every;

  bool any_walk_flag() const { return p || q || delta || barrier || theta; }
  bool any_graph_flag() const { return alpha || s || k; }
};

void add_options(CLI::App& sub, RawOptions& o) {
  sub.add_option("--config", o.config, "Model JSON file");
  sub.add_option("--preset", o.preset, "corollary3 | fig2");
  sub.add_option("--p", o.p, "Free-coin phase p");
  sub.add_option("--q", o.q, "Free-coin phase q");
  sub.add_option("--delta", o.delta, "Eigenphase delta");
  sub.add_option("--barrier", o.barrier, "Barrier coin: preset name or JSON");
  sub.add_option("--theta", o.theta, "Half-wave-plate angle for corollary3");
  sub.add_option("--m", o.m, "Barrier separation");
  sub.add_option("--window", o.window, "Lattice window A:B");
  sub.add_option("--tol", o.tol, "Tolerance");
  sub.add_option("--max-steps", o.max_steps, "Evolution step limit");
  sub.add_option("--alpha", o.alpha, "Delta-potential strength");
  sub.add_option("--s", o.s, "Edge length");
  sub.add_option("--k", o.k, "Wave-number range MIN:MAX[:N]");
  sub.add_option("--out", o.out, "Output path or prefix");
  sub.add_option("--format", o.format, "csv | json");
  sub.add_option("--terms", o.terms, "Series terms reported by verify");
  sub.add_option("--dump-every", o.dump_every, "Profile snapshot interval (evolve)");
  sub.add_option("--injection", o.injection, "left | right (stationary)");
}

bool is_walk_command(Command c) {
  return c == Command::Stationary || c == Command::Evolve || c == Command::Verify;
}

std::vector<std::string> split_colon(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

template <typename T>
T parse_number(const std::string& text, const std::string& what) {
  std::istringstream in(text);
  T v{};
  in >> v;
  if (text.empty() || !in || !in.eof()) throw UsageError(what + ": bad number '" + text + "'");
  return v;
}

Window parse_window(const std::string& text) {
  const auto parts = split_colon(text);
  if (parts.size() != 2) throw UsageError("--window expects A:B");
  const Window w{parse_number<int>(parts[0], "--window"), parse_number<int>(parts[1], "--window")};
  if (w.lo > w.hi) throw UsageError("--window needs A <= B");
  return w;
}

KRange parse_k_range(const std::string& text) {
  const auto parts = split_colon(text);
  if (parts.size() != 2 && parts.size() != 3) throw UsageError("--k expects MIN:MAX[:N]");
  KRange r;
  r.min = parse_number<double>(parts[0], "--k");
  r.max = parse_number<double>(parts[1], "--k");
  if (parts.size() == 3) r.n = parse_number<int>(parts[2], "--k");
  if (!(r.min > 0) || !(r.max > r.min)) throw UsageError("--k needs 0 < MIN < MAX");
  if (r.n < 2) throw UsageError("--k needs N >= 2");
  return r;
}

// Joins "--opt value" into "--opt=value" so values such as -30:33 are not
// mistaken for flags.
std::vector<std::string> join_values(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a.rfind("--", 0) == 0 && a.size() > 2 && a.find('=') == std::string::npos &&
        a != "--help" && i + 1 < args.size() && args[i + 1].rfind("--", 0) != 0) {
      out.push_back(a + "=" + args[i + 1]);
      ++i;
    } else {
      out.push_back(a);
    }
  }
  return out;
}

TunnelingConfig<double> walk_model(const RawOptions& o) {
  if (o.any_graph_flag()) throw UsageError("--alpha, --s and --k apply to spectrum/resonances");
  if (o.config) {
    if (o.preset || o.any_walk_flag() || o.m) {
      throw UsageError("--config and inline model flags are mutually exclusive");
    }
    const Json j = Json::parse(io::read_file(*o.config), nullptr, false);
    if (j.is_discarded()) throw UsageError("config file is not valid JSON");
    return io::config_from_json(j);
  }
  TunnelingConfig<double> cfg;
  if (o.preset) {
    if (*o.preset != "corollary3") {
      throw UsageError("preset '" + *o.preset + "' does not define a walk model");
    }
    if (o.barrier && o.theta) throw UsageError("--barrier and --theta are mutually exclusive");
    cfg.p = 0;
    cfg.q = 0;
    cfg.barrier = half_wave_plate(o.theta.value_or(std::numbers::pi / 8));
    cfg.m = 3;
  } else {
    if (o.theta) throw UsageError("--theta needs --preset corollary3");
    if (!o.barrier || !o.m) throw UsageError("inline walk model needs --barrier and --m");
  }
  if (o.p) cfg.p = *o.p;
  if (o.q) cfg.q = *o.q;
  if (o.delta) cfg.delta = *o.delta;
  if (o.m) cfg.m = *o.m;
  if (o.barrier) cfg.barrier = io::parse_coin(*o.barrier);
  cfg.validate();
  return cfg;
}

GraphParams<double> graph_model(const RawOptions& o, KRange& k, bool& have_k) {
  if (o.any_walk_flag()) {
    throw UsageError("--p, --q, --delta, --barrier and --theta apply to walk commands");
  }
  GraphParams<double> gp;
  if (o.config) {
    if (o.preset || o.alpha || o.s || o.m) {
      throw UsageError("--config and inline model flags are mutually exclusive");
    }
    const Json j = Json::parse(io::read_file(*o.config), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw UsageError("config file is not a JSON object");
    try {
      gp.alpha = j.at("alpha").get<double>();
      gp.s = j.at("s").get<double>();
      gp.m = j.at("m").get<int>();
    } catch (const Json::exception&) {
      throw UsageError("graph config needs numeric alpha, s and integer m");
    }
  } else if (o.preset) {
    if (*o.preset != "fig2") {
      throw UsageError("preset '" + *o.preset + "' does not define a graph model");
    }
    gp.alpha = 1;
    gp.s = 1;
    gp.m = 3;
    k = KRange{0.1, 5.0, 4096};
    have_k = true;
  } else if (!o.alpha || !o.s || !o.m) {
    throw UsageError("inline graph model needs --alpha, --s and --m");
  }
  if (o.alpha) gp.alpha = *o.alpha;
  if (o.s) gp.s = *o.s;
  if (o.m) gp.m = *o.m;
  if (!(gp.alpha >= 0) || !(gp.s > 0) || gp.m < 1) {
    throw UsageError("graph model needs alpha >= 0, s > 0, m >= 1");
  }
  return gp;
}

// --- output -------------------------------------------------------------

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string output_prefix(const std::string& path) {
  for (const char* ext : {".csv", ".json"}) {
    if (ends_with(path, ext)) return path.substr(0, path.size() - std::strlen(ext));
  }
  return path;
}

/// Artifacts of one command; an empty string means "not produced".
struct Artifacts {
  std::string json;
  std::string csv;
};

void emit(const RunConfig& cfg, const Artifacts& a, std::ostream& out) {
  std::optional<Format> only = cfg.format;
  if (cfg.output_path) {
    const std::string& path = *cfg.output_path;
    if (ends_with(path, ".json")) only = Format::Json;
    if (ends_with(path, ".csv")) only = Format::Csv;
    const std::string prefix = output_prefix(path);
    if (!a.json.empty() && only != Format::Csv) io::write_file_atomic(prefix + ".json", a.json);
    if (!a.csv.empty() && only != Format::Json) io::write_file_atomic(prefix + ".csv", a.csv);
    return;
  }
  if (only == Format::Csv || (!only && a.json.empty())) {
    out << a.csv;
  } else {
    out << a.json;
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json window_json(Window w) { return Json::array({w.lo, w.hi}); }

// --- commands -----------------------------------------------------------

int run_stationary(const RunConfig& rc, std::ostream& out) {
  const auto& cfg = rc.walk();
  const Window window = rc.window.value_or(Window{-5, cfg.m + 5});
  StationarySolution<double> sol;
  AmplitudeProfile<double> profile;
  if (rc.injection == Injection::Left) {
    sol = solve_closed_form(cfg);
    if (sol.tilde_undefined) {
      profile = solve_general(cfg, Injection::Left, window).profile;
    } else {
      profile = build_profile(sol, cfg, window);
    }
  } else {
    auto general = solve_general(cfg, Injection::Right, window);
    sol = general.solution;
    profile = std::move(general.profile);
  }
  Json j = io::solution_to_json(sol);
  try {
    j["residual"] = resonance_residual(cfg);
  } catch (const Error&) {
    j["residual"] = nullptr;
  }
  j["config"] = io::config_to_json(cfg);
  j["window"] = window_json(window);
  emit(rc, {dump(j), io::profile_csv(profile)}, out);
  return exit_code::kOk;
}

int run_evolve(const RunConfig& rc, std::ostream& out) {
  const auto& cfg = rc.walk();
  const Window window = rc.window.value_or(default_window<double>(cfg.m));
  const double tol = rc.tol.value_or(1e-8);
  const long max_steps = rc.max_steps.value_or(default_max_steps(cfg));
  std::function<void(const EvolutionState<double>&)> on_step;
  if (rc.dump_every > 0) {
    const std::string prefix = output_prefix(*rc.output_path);
    on_step = [&, prefix](const EvolutionState<double>& s) {
      if (s.n % rc.dump_every == 0) {
        io::write_file_atomic(prefix + "_n" + std::to_string(s.n) + ".csv",
                              io::profile_csv(s.amplitudes));
      }
    };
  }
  const auto result = run_to_convergence<double>(init_lattice(cfg, window), tol, max_steps, nullptr, on_step);
  const auto& rep = result.report;
  Json j = {{"steps", rep.steps},
            {"residual", rep.residual},
            {"rate", rep.rate},
            {"converged", rep.converged},
            {"tol", tol},
            {"max_steps", max_steps},
            {"window", window_json(window)},
            {"config", io::config_to_json(cfg)}};
  if (window.contains(-1) && window.contains(cfg.m + 1)) {
    j["T"] = std::norm(result.profile.right(cfg.m + 1));
    j["R"] = std::norm(result.profile.left(-1));
  }
  emit(rc, {dump(j), io::profile_csv(result.profile)}, out);
  return exit_code::kOk;
}

int run_spectrum(const RunConfig& rc, std::ostream& out) {
  const auto& gp = rc.graph();
  const auto samples = spectrum_scan(gp.alpha, gp.s, gp.m, rc.k.min, rc.k.max, rc.k.n, rc.threads);
  Json ks = Json::array(), ts = Json::array();
  for (const auto& s : samples) {
    ks.push_back(s.k);
    ts.push_back(s.T);
  }
  const Json j = {{"alpha", gp.alpha}, {"s", gp.s}, {"m", gp.m}, {"k", ks}, {"T", ts}};
  emit(rc, {rc.format == Format::Json || (rc.output_path && !rc.format) ? dump(j) : "",
            io::spectrum_csv(samples)},
       out);
  return exit_code::kOk;
}

int run_resonances(const RunConfig& rc, std::ostream& out) {
  const auto& gp = rc.graph();
  const auto set = find_resonances(gp.alpha, gp.s, gp.m, rc.k.min, rc.k.max);
  std::string csv = "k\n";
  for (double k : set.roots) csv += io::format_real(k) + "\n";
  emit(rc, {dump(io::resonances_to_json(gp.alpha, gp.s, gp.m, set)), csv}, out);
  return exit_code::kOk;
}

struct Check {
  std::string name;
  C t{};
  double error = 0;
  double tolerance = 0;
  bool pass = false;
  std::string note;
};

int run_verify(const RunConfig& rc, std::ostream& out) {
  const auto& cfg = rc.walk();
  const double tol = rc.tol.value_or(1e-10);
  const auto closed = solve_closed_form(cfg);
  const C t_ref = closed.t;
  std::vector<Check> checks;
  auto compare = [&](const std::string& name, auto&& compute) {
    Check c;
    c.name = name;
    c.tolerance = tol;
    try {
      c.t = compute();
      c.error = std::abs(c.t - t_ref);
      c.pass = c.error <= tol;
    } catch (const std::exception& e) {
      c.note = e.what();
    }
    checks.push_back(c);
  };
  compare("closed_form", [&] { return t_ref; });
  compare("linear_system", [&] { return solve_general(cfg, Injection::Left).solution.t; });
  compare("series_limit", [&] { return transmitted_amplitude(t_series_limit(cfg), cfg); });
  compare("evolution", [&] {
    const double bc = std::abs(cfg.barrier.b() * cfg.barrier.c());
    const double step_tol = std::max(1e-14, 1e-2 * tol * std::max(1.0 - bc, 1e-3));
    const long max_steps = rc.max_steps.value_or(10 * default_max_steps(cfg));
    const auto run = run_to_convergence(init_lattice(cfg, default_window<double>(cfg.m)), step_tol,
                                        max_steps);
    return transmitted_amplitude(run.profile.right(cfg.m + 1), cfg);
  });

  // Conservation checks on the closed-form state.
  Check unit;
  unit.name = "R+T";
  unit.t = t_ref;
  unit.error = std::abs(closed.R + closed.T - 1.0);
  unit.tolerance = 1e-10;
  unit.pass = unit.error <= unit.tolerance;
  checks.push_back(unit);
  Check flux;
  flux.name = "flux_balance";
  flux.t = t_ref;
  flux.tolerance = 1e-10;
  try {
    const auto f = flux_balance(build_profile(closed, cfg, Window{-2, cfg.m + 2}),
                                Window{-1, cfg.m + 1});
    flux.error = std::abs(f.inflow - f.outflow);
    flux.pass = flux.error <= flux.tolerance;
  } catch (const std::exception& e) {
    flux.note = e.what();
  }
  checks.push_back(flux);
  Check partial;
  partial.name = "series_partial";
  partial.tolerance = 0;
  try {
    const auto res = t_series(cfg, rc.terms);
    partial.t = transmitted_amplitude(res.partial_sum, cfg);
    partial.error = std::abs(res.partial_sum - t_series_limit(cfg));
    partial.tolerance = res.remainder_bound + 1e-15;
    partial.pass = partial.error <= partial.tolerance;
  } catch (const std::exception& e) {
    partial.note = e.what();
  }
  checks.push_back(partial);

  bool all = true;
  std::ostringstream table;
  Json rows = Json::array();
  std::string csv = "check,t_re,t_im,error,tolerance,pass\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-15s %24s %24s %12s %12s  %s\n", "check", "t_re", "t_im",
                "error", "tolerance", "status");
  table << line;
  for (const auto& c : checks) {
    all = all && c.pass;
    std::snprintf(line, sizeof line, "%-15s %24.17g %24.17g %12.3e %12.3e  %s\n", c.name.c_str(),
                  c.t.real(), c.t.imag(), c.error, c.tolerance, c.pass ? "PASS" : "FAIL");
    table << line;
    if (!c.note.empty()) table << "    " << c.note << "\n";
    Json row = {{"check", c.name},
                {"t", io::complex_to_json(c.t)},
                {"error", c.error},
                {"tolerance", c.tolerance},
                {"pass", c.pass}};
    if (!c.note.empty()) row["note"] = c.note;
    rows.push_back(row);
    csv += c.name + "," + io::format_real(c.t.real()) + "," + io::format_real(c.t.imag()) + "," +
           io::format_real(c.error) + "," + io::format_real(c.tolerance) + "," +
           (c.pass ? "true" : "false") + "\n";
  }
  table << (all ? "all checks passed\n" : "verification FAILED\n");
  const Json j = {{"config", io::config_to_json(cfg)}, {"checks", rows}, {"pass", all}};

  if (rc.output_path) {
    out << table.str();
    emit(rc, {dump(j), csv}, out);
  } else if (rc.format == Format::Json) {
    out << dump(j);
  } else if (rc.format == Format::Csv) {
    out << csv;
  } else {
    out << table.str();
  }
  return all ? exit_code::kOk : exit_code::kVerifyFailed;
}

int exit_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateResonance:
    case ErrorKind::SingularSystem:
    case ErrorKind::DivergentSeries:
      return exit_code::kDegenerate;
    case ErrorKind::NoConvergence:
      return exit_code::kNoConvergence;
    default:
      return exit_code::kModel;
  }
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::Stationary: return "stationary";
    case Command::Evolve: return "evolve";
    case Command::Spectrum: return "spectrum";
    case Command::Resonances: return "resonances";
    case Command::Verify: return "verify";
  }
  return "unknown";
}

RunConfig parse_config(const std::vector<std::string>& raw_args) {
  CLI::App app{"Resonant tunneling of discrete-time quantum walks", "qrtw"};
  app.require_subcommand(1);
  RawOptions o;
  const std::pair<const char*, Command> commands[] = {
      {"stationary", Command::Stationary}, {"evolve", Command::Evolve},
      {"spectrum", Command::Spectrum},     {"resonances", Command::Resonances},
      {"verify", Command::Verify}};
  const char* help[] = {"Stationary scattering state", "Time evolution to the stationary state",
                        "Quantum-graph transmission spectrum", "Perfect-transmission wave numbers",
                        "Cross-check closed form, linear system, series and evolution"};
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (size_t i = 0; i < std::size(commands); ++i) {
    auto* sub = app.add_subcommand(commands[i].first, help[i]);
    add_options(*sub, o);
    subs.emplace_back(sub, commands[i].second);
  }

  std::vector<std::string> args = join_values(raw_args);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig rc;
  for (const auto& [sub, cmd] : subs) {
    if (sub->parsed()) rc.command = cmd;
  }
  const Command cmd = rc.command;
  const bool walk = is_walk_command(cmd);
  // Model errors (a non-unitary barrier, say) propagate as qrtw::Error.
  if (walk) {
    rc.model = walk_model(o);
  } else {
    bool have_k = false;
    rc.model = graph_model(o, rc.k, have_k);
    if (o.k) {
      rc.k = parse_k_range(*o.k);
      have_k = true;
    }
    if (!have_k) throw UsageError("--k MIN:MAX[:N] is required");
  }

  if (o.format) {
    if (*o.format == "csv") {
      rc.format = Format::Csv;
    } else if (*o.format == "json") {
      rc.format = Format::Json;
    } else {
      throw UsageError("--format must be csv or json");
    }
  }
  rc.output_path = o.out;
  if (rc.output_path && rc.output_path->empty()) throw UsageError("--out needs a path");
  if (o.window) {
    if (cmd != Command::Stationary && cmd != Command::Evolve) {
      throw UsageError("--window applies to stationary and evolve");
    }
    rc.window = parse_window(*o.window);
  }
  if (o.tol) {
    if (!(*o.tol > 0)) throw UsageError("--tol must be positive");
    if (cmd != Command::Evolve && cmd != Command::Verify) {
      throw UsageError("--tol applies to evolve and verify");
    }
    rc.tol = o.tol;
  }
  if (o.max_steps) {
    if (*o.max_steps < 1) throw UsageError("--max-steps must be positive");
    if (cmd != Command::Evolve && cmd != Command::Verify) {
      throw UsageError("--max-steps applies to evolve and verify");
    }
    rc.max_steps = o.max_steps;
  }
  if (o.terms) {
    if (cmd != Command::Verify) throw UsageError("--terms applies to verify");
    if (*o.terms < 0) throw UsageError("--terms must be >= 0");
    rc.terms = *o.terms;
  }
  if (o.dump_every) {
    if (cmd != Command::Evolve) throw UsageError("--dump-every applies to evolve");
    if (*o.dump_every < 1) throw UsageError("--dump-every must be positive");
    if (!rc.output_path) throw UsageError("--dump-every needs --out");
    rc.dump_every = *o.dump_every;
  }
  if (o.injection) {
    if (cmd != Command::Stationary) throw UsageError("--injection applies to stationary");
    if (*o.injection == "left") {
      rc.injection = Injection::Left;
    } else if (*o.injection == "right") {
      rc.injection = Injection::Right;
    } else {
      throw UsageError("--injection must be left or right");
    }
  }
  return rc;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.command) {
      case Command::Stationary: return run_stationary(cfg, out);
      case Command::Evolve: return run_evolve(cfg, out);
      case Command::Spectrum: return run_spectrum(cfg, out);
      case Command::Resonances: return run_resonances(cfg, out);
      case Command::Verify: return run_verify(cfg, out);
    }
  } catch (const NoConvergenceError& e) {
    err << "qrtw: " << e.what() << "\n";
    return exit_code::kNoConvergence;
  } catch (const Error& e) {
    err << "qrtw: " << e.what() << "\n";
    return exit_for(e.kind());
  }
  return exit_code::kUsage;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig cfg;
  try {
    cfg = parse_config(args);
    cfg.threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("QRTW_THREADS")) {
      const long cap = parse_number<long>(env, "QRTW_THREADS");
      if (cap < 1) throw UsageError("QRTW_THREADS must be a positive integer");
      cfg.threads = static_cast<unsigned>(std::min<long>(cap, 1024));
    }
  } catch (const HelpRequested& h) {
    std::cout << h.text;
    return exit_code::kOk;
  } catch (const UsageError& e) {
    std::cerr << "qrtw: " << e.what() << "\nRun 'qrtw --help' for usage.\n";
    return exit_code::kUsage;
  } catch (const Error& e) {
    std::cerr << "qrtw: " << e.what() << "\n";
    return exit_for(e.kind());
  }
  return run(cfg, std::cout, std::cerr);
}

}  // namespace qrtw::cli
