// twstab: command-line front end over the C API.
//
// Exit codes: 0 success, 1 configuration/input error, 2 profile solve
// failure, 3 profile/config mismatch, 4 contour aliasing, 5 simulation
// instability, 6 any other numerical failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twstab/twstab.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_for(twstab_status s) {
  switch (s) {
    case TWSTAB_OK: return 0;
    case TWSTAB_E_CONFIG:
    case TWSTAB_E_IO:
    case TWSTAB_E_PARAMETER:
    case TWSTAB_E_NULL_ARGUMENT: return 1;
    case TWSTAB_E_SOLVER_FAILURE:
    case TWSTAB_E_BRACKET: return 2;
    case TWSTAB_E_MISMATCH: return 3;
    case TWSTAB_E_ALIASING: return 4;
    case TWSTAB_E_INSTABILITY: return 5;
    default: return 6;
  }
}

void check(twstab_status s, const std::string& context) {
  if (s == TWSTAB_OK) return;
  throw Failure{exit_code_for(s), context + ": " + twstab_status_name(s) + ": " + twstab_last_error()};
}

void check_as(twstab_status s, int code, const std::string& context) {
  if (s == TWSTAB_OK) return;
  throw Failure{code, context + ": " + twstab_status_name(s) + ": " + twstab_last_error()};
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};

using Profile = Handle<twstab_profile, twstab_profile_free>;
using Scan = Handle<twstab_evans_scan, twstab_evans_scan_free>;
using ContourResult = Handle<twstab_contour_result, twstab_contour_result_free>;
using Simulation = Handle<twstab_simulation, twstab_simulation_free>;
using Decay = Handle<twstab_decay, twstab_decay_free>;

json params_json(const twstab_params& p) {
  return {{"F", p.F}, {"mu", p.mu}, {"s_h", p.s_h}, {"alpha", p.alpha}, {"rho", p.rho}, {"c", p.c}};
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Failure{1, "cannot write " + path.string()};
  out << j.dump(2) << "\n";
  if (!out) throw Failure{1, "write failed: " + path.string()};
}

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure{1, "cannot create output directory " + dir + ": " + ec.message()};
  return fs::path(dir);
}

struct Manifest {
  std::string command;
  json inputs = json::object();
  json outputs = json::array();
  json summary = json::object();
  json params;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void add_output(const fs::path& p) { outputs.push_back(p.string()); }

  void write(const fs::path& dir) const {
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json j;
    j["command"] = command;
    j["tool_version"] = twstab_version();
    j["params"] = params;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["summary"] = summary;
    j["wall_clock_seconds"] = seconds;
    write_json(dir / "manifest.json", j);
  }
};

twstab_params load_config(const std::string& path) {
  twstab_params p;
  check_as(twstab_params_load(path.c_str(), &p), 1, "config " + path);
  return p;
}

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
  double x, y;
  int used = 0;
  if (std::sscanf(text.c_str(), "%lf,%lf%n", &x, &y, &used) != 2 || used != static_cast<int>(text.size()) ||
      !std::isfinite(x) || !std::isfinite(y))
    throw Failure{1, std::string("malformed ") + what + " '" + text + "' (expected a,b)"};
  return {x, y};
}

void load_profile_checked(const std::string& path, const twstab_params& p, Profile& out) {
  const twstab_status s = twstab_profile_load(path.c_str(), &p, &out.p);
  if (s == TWSTAB_E_MISMATCH) check_as(s, 3, "profile " + path);
  check_as(s, 1, "profile " + path);
}

// ---------------------------------------------------------------------------

struct ProfileArgs {
  std::string config, out = ".";
  double L = 200.0;
  int nodes = 4001;
};

void cmd_profile(const ProfileArgs& a) {
  Manifest m;
  m.command = "profile";
  const twstab_params p = load_config(a.config);
  m.params = params_json(p);
  m.inputs = {{"config", a.config}, {"L", a.L}, {"nodes", a.nodes}};
  const fs::path dir = prepare_out(a.out);

  Profile prof;
  check_as(twstab_profile_solve(&p, a.L, a.nodes, &prof.p), 2, "profile solve");
  double c_star, L, res;
  size_t n;
  twstab_profile_info(prof.p, &c_star, &L, &res, &n);
  const fs::path csv = dir / "profile.csv";
  check(twstab_profile_save(prof.p, csv.c_str()), "write profile");
  m.add_output(csv);
  m.add_output(dir / "profile.json");

  double gamma_a;
  check(twstab_absolute_edge(&p, c_star, &gamma_a), "absolute edge");
  m.summary = {{"c_star", c_star}, {"residual_norm", res}, {"gamma_A", gamma_a}};
  m.write(dir);
  std::cout << "c* = " << fmt(c_star) << "\n";
}

// ---------------------------------------------------------------------------

struct SpectrumArgs {
  std::string config, out = ".";
  double c = 0.0;
  double k_max = 50.0;
};

void cmd_spectrum(const SpectrumArgs& a) {
  Manifest m;
  m.command = "spectrum";
  twstab_params p = load_config(a.config);
  m.params = params_json(p);
  m.inputs = {{"config", a.config}, {"c", a.c}, {"k_max", a.k_max}};
  if (!(a.k_max > 0.0)) throw Failure{1, "--k-max must be positive"};
  const fs::path dir = prepare_out(a.out);

  double rightmost, gamma_a;
  check(twstab_rightmost_essential(&p, a.c, &rightmost), "rightmost essential");
  check(twstab_absolute_edge(&p, a.c, &gamma_a), "absolute edge");

  const fs::path disp = dir / "dispersion.csv";
  const int n_k = static_cast<int>(std::lround(std::min(a.k_max, 1e4) * 100.0)) * 2 + 1;
  check(twstab_write_dispersion_csv(&p, a.c, a.k_max, n_k, disp.c_str()), "dispersion CSV");
  m.add_output(disp);

  // Window sized to show the curve vertices and their neighbourhood.
  const double span = std::max(0.01, 4.0 * std::abs(gamma_a));
  const fs::path map = dir / "spectrum_map.csv";
  check(twstab_write_spectrum_map(&p, a.c, -span, 0.5 * span, -span, span, 201, 201, map.c_str()), "spectrum map");
  m.add_output(map);

  const json summary = {{"rightmost_essential", rightmost}, {"gamma_A", gamma_a}, {"c", a.c}};
  const fs::path sum = dir / "spectrum_summary.json";
  write_json(sum, summary);
  m.add_output(sum);
  m.summary = summary;
  m.write(dir);
  std::cout << "rightmost_essential = " << fmt(rightmost) << "\ngamma_A = " << fmt(gamma_a) << "\n";
}

// ---------------------------------------------------------------------------

struct EvansArgs {
  std::string config, profile, out = ".";
  std::optional<double> real_from, real_to;
  int points = 400;
  std::string lambda;
  unsigned threads = 0;
};

void cmd_evans(const EvansArgs& a) {
  Manifest m;
  m.command = "evans";
  const twstab_params p = load_config(a.config);
  m.params = params_json(p);
  m.inputs = {{"config", a.config}, {"profile", a.profile}};
  Profile prof;
  load_profile_checked(a.profile, p, prof);

  std::vector<double> re, im;
  const bool single = !a.lambda.empty();
  if (single) {
    if (a.real_from || a.real_to) throw Failure{1, "--lambda excludes --real-from/--real-to"};
    const auto [x, y] = parse_pair(a.lambda, "--lambda");
    re.push_back(x);
    im.push_back(y);
    m.inputs["lambda"] = {x, y};
  } else {
    if (!a.real_from || !a.real_to) throw Failure{1, "give --real-from and --real-to, or --lambda"};
    if (a.points < 2) throw Failure{1, "--points must be at least 2"};
    if (!(*a.real_to > *a.real_from)) throw Failure{1, "--real-to must exceed --real-from"};
    for (int i = 0; i < a.points; ++i) {
      re.push_back(*a.real_from + (*a.real_to - *a.real_from) * i / (a.points - 1));
      im.push_back(0.0);
    }
    m.inputs["real_from"] = *a.real_from;
    m.inputs["real_to"] = *a.real_to;
    m.inputs["points"] = a.points;
  }
  const fs::path dir = prepare_out(a.out);

  Scan scan;
  check(twstab_evans_scan_run(prof.p, re.data(), im.data(), re.size(), a.threads, &scan.p), "evans scan");
  const fs::path csv = dir / "evans.csv";
  check(twstab_evans_scan_write_csv(scan.p, csv.c_str()), "write evans CSV");
  m.add_output(csv);

  std::size_t failed = 0;
  for (std::size_t i = 0; i < twstab_evans_scan_size(scan.p); ++i) {
    int ok;
    twstab_evans_scan_get(scan.p, i, nullptr, nullptr, nullptr, nullptr, &ok);
    failed += ok ? 0 : 1;
  }
  double plucker;
  twstab_evans_scan_max_plucker(scan.p, &plucker);
  m.summary["failed_points"] = failed;
  m.summary["max_plucker"] = plucker;

  if (single) {
    double lr, li, dr, di;
    int ok;
    twstab_evans_scan_get(scan.p, 0, &lr, &li, &dr, &di, &ok);
    m.summary["d"] = {dr, di};
    m.summary["status"] = ok ? "ok" : "failed";
    m.write(dir);
    if (!ok) {
      // Re-evaluate to report the typed failure.
      double d_re, d_im;
      check(twstab_evans(prof.p, lr, li, &d_re, &d_im), "evans");
    }
    std::cout << "D(" << fmt(lr) << (li < 0 ? "" : "+") << fmt(li) << "i) = " << fmt(dr) << (di < 0 ? "" : "+")
              << fmt(di) << "i\n";
    return;
  }
  size_t count = 0;
  twstab_evans_scan_crossings(scan.p, nullptr, 0, &count);
  std::vector<double> crossings(count);
  twstab_evans_scan_crossings(scan.p, crossings.data(), count, &count);
  m.summary["crossings"] = crossings;
  m.write(dir);
  if (crossings.empty()) {
    std::cout << "no zero crossings\n";
  } else {
    for (double x : crossings) std::cout << "zero crossing at lambda = " << fmt(x) << "\n";
  }
  if (failed) std::cerr << failed << " scan points failed (see status column)\n";
}

// ---------------------------------------------------------------------------

struct WindingArgs {
  std::string config, profile, out = ".";
  double rs = 0.1, rb = 10.0;
  int points = 1024;
  unsigned threads = 0;
};

void cmd_winding(const WindingArgs& a) {
  Manifest m;
  m.command = "winding";
  const twstab_params p = load_config(a.config);
  m.params = params_json(p);
  m.inputs = {{"config", a.config}, {"profile", a.profile}, {"rs", a.rs}, {"rb", a.rb}, {"points", a.points}};
  if (!(a.rs > 0.0 && a.rs < a.rb)) throw Failure{1, "need 0 < --rs < --rb"};
  if (a.points < 256) throw Failure{1, "--points must be at least 256"};
  Profile prof;
  load_profile_checked(a.profile, p, prof);
  const fs::path dir = prepare_out(a.out);

  ContourResult res;
  check(twstab_count_roots(prof.p, a.rs, a.rb, static_cast<size_t>(a.points), a.threads, &res.p), "winding");
  const fs::path csv = dir / "contour.csv";
  const fs::path sum = dir / "contour_summary.json";
  check(twstab_contour_result_write(res.p, csv.c_str(), sum.c_str()), "write contour");
  m.add_output(csv);
  m.add_output(sum);

  int winding, rounds;
  double total, residual, max_step;
  size_t n_final;
  twstab_contour_result_info(res.p, &winding, &total, &residual, &max_step, &n_final, &rounds);
  m.summary = {{"winding", winding},           {"total_arg_change", total}, {"residual", residual},
               {"max_step_arg", max_step},     {"n_points_final", n_final}, {"refinement_rounds", rounds}};
  m.write(dir);
  std::cout << "winding = " << winding << " (" << n_final << " points, " << rounds << " refinement rounds)\n";
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string config, profile, out = ".";
  std::string frame = "lab";
  double t_end = 1000.0;
  std::string perturb;
};

void cmd_simulate(const SimulateArgs& a) {
  Manifest m;
  m.command = "simulate";
  const twstab_params p = load_config(a.config);
  m.params = params_json(p);
  m.inputs = {{"config", a.config}, {"frame", a.frame}, {"t_end", a.t_end}};
  if (!a.profile.empty()) m.inputs["profile"] = a.profile;
  if (!(a.t_end > 0.0)) throw Failure{1, "--t-end must be positive"};
  const bool comoving = a.frame == "comoving";

  Profile prof;
  double c_star = NAN, L = 0.0;
  if (!a.profile.empty()) {
    load_profile_checked(a.profile, p, prof);
    twstab_profile_info(prof.p, &c_star, &L, nullptr, nullptr);
  }
  if (comoving && !prof.p) throw Failure{1, "--frame comoving needs --profile"};
  std::optional<std::pair<double, double>> perturb;
  if (!a.perturb.empty()) {
    perturb = parse_pair(a.perturb, "--perturb");
    if (!prof.p) throw Failure{1, "--perturb needs --profile"};
  }
  const fs::path dir = prepare_out(a.out);

  twstab_sim_config cfg;
  twstab_sim_config_default(&cfg);
  cfg.t_end = a.t_end;
  if (comoving) {
    cfg.frame = TWSTAB_FRAME_COMOVING;
    cfg.frame_speed = c_star;
    cfg.initial = TWSTAB_INITIAL_PROFILE;
    cfg.half_width = L;
    cfg.n_cells = static_cast<int>(std::lround(4.0 * L));
  } else if (prof.p) {
    cfg.initial = TWSTAB_INITIAL_PROFILE;
  }
  std::vector<double> times;
  for (int k = 0; k <= 4; ++k) times.push_back(a.t_end * k / 4.0);
  cfg.snapshot_times = times.data();
  cfg.n_snapshots = times.size();
  cfg.track_interval = std::max(a.t_end / 200.0, 0.1);

  Simulation sim;
  check(twstab_simulate(&p, &cfg, prof.p, &sim.p), "simulate");
  check(twstab_simulation_write(sim.p, dir.c_str()), "write simulation");
  for (std::size_t k = 0; k < times.size(); ++k) m.add_output(dir / ("snapshot_" + std::to_string(k) + ".csv"));
  m.add_output(dir / "front_track.csv");

  double speed, fit_res, dx, dt, vmin, vmax, drift;
  twstab_simulation_info(sim.p, &speed, &fit_res, &dx, &dt, &vmin, &vmax, &drift);
  m.summary = {{"fitted_speed", speed}, {"fit_residual", fit_res}, {"dx", dx},           {"dt", dt},
               {"min_value", vmin},     {"max_value", vmax},      {"front_drift", drift}, {"snapshot_times", times}};
  if (prof.p) m.summary["c_star"] = c_star;
  std::cout << (comoving ? "front drift = " + fmt(drift) + " (dx = " + fmt(dx) + ")" : "fitted speed = " + fmt(speed))
            << "\n";

  if (perturb) {
    Decay decay;
    check(twstab_perturbation_decay(prof.p, perturb->first, perturb->second, TWSTAB_PERTURB_GAUSSIAN, a.t_end,
                                    &decay.p),
          "perturbation decay");
    const fs::path csv = dir / "decay.csv";
    check(twstab_decay_write_csv(decay.p, csv.c_str()), "write decay");
    m.add_output(csv);
    double first = NAN, last = NAN, at100 = NAN;
    for (std::size_t i = 0; i < twstab_decay_size(decay.p); ++i) {
      double t, dev, shift;
      twstab_decay_get(decay.p, i, &t, &dev, &shift);
      if (i == 0) first = dev;
      if (std::abs(t - 100.0) < 1e-9) at100 = dev;
      last = dev;
    }
    m.summary["decay"] = {{"amplitude", perturb->first}, {"width", perturb->second}, {"initial", first},
                          {"final", last}};
    if (!std::isnan(at100)) m.summary["decay"]["at_t100"] = at100;
    std::cout << "aligned deviation: t=0 " << fmt(first) << ", t=" << fmt(a.t_end) << " " << fmt(last) << "\n";
  }
  m.write(dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Travelling-wave stability toolbox"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(twstab_version()));
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads for evans/winding (0: available parallelism)");

  ProfileArgs pa;
  auto* prof = app.add_subcommand("profile", "Solve for the front profile and wavespeed");
  prof->add_option("--config", pa.config, "Parameter JSON")->required();
  prof->add_option("--L", pa.L, "Half-width of the domain")->capture_default_str();
  prof->add_option("--nodes", pa.nodes, "Collocation nodes")->capture_default_str();
  prof->add_option("--out", pa.out, "Output directory")->capture_default_str();

  SpectrumArgs sa;
  auto* spec = app.add_subcommand("spectrum", "Dispersion curves and spectrum classification");
  spec->add_option("--config", sa.config, "Parameter JSON")->required();
  spec->add_option("--c", sa.c, "Wavespeed")->required();
  spec->add_option("--k-max", sa.k_max, "Largest wavenumber")->capture_default_str();
  spec->add_option("--out", sa.out, "Output directory")->capture_default_str();

  EvansArgs ea;
  auto* ev = app.add_subcommand("evans", "Evaluate the Evans function");
  ev->add_option("--config", ea.config, "Parameter JSON")->required();
  ev->add_option("--profile", ea.profile, "Profile CSV")->required();
  ev->add_option("--real-from", ea.real_from, "Start of a real scan");
  ev->add_option("--real-to", ea.real_to, "End of a real scan");
  ev->add_option("--points", ea.points, "Points in the real scan")->capture_default_str();
  ev->add_option("--lambda", ea.lambda, "Single point re,im");
  ev->add_option("--out", ea.out, "Output directory")->capture_default_str();
  ev->add_option("--threads", ea.threads, "Worker threads (0: available parallelism)");

  WindingArgs wa;
  auto* wind = app.add_subcommand("winding", "Count Evans-function zeros inside the contour");
  wind->add_option("--config", wa.config, "Parameter JSON")->required();
  wind->add_option("--profile", wa.profile, "Profile CSV")->required();
  wind->add_option("--rs", wa.rs, "Small radius")->required();
  wind->add_option("--rb", wa.rb, "Large radius")->required();
  wind->add_option("--points", wa.points, "Initial contour samples")->capture_default_str();
  wind->add_option("--out", wa.out, "Output directory")->capture_default_str();
  wind->add_option("--threads", wa.threads, "Worker threads (0: available parallelism)");

  SimulateArgs ma;
  auto* sim = app.add_subcommand("simulate", "Time-integrate the PDE");
  sim->add_option("--config", ma.config, "Parameter JSON")->required();
  sim->add_option("--profile", ma.profile, "Profile CSV");
  sim->add_option("--frame", ma.frame, "lab or comoving")
      ->check(CLI::IsMember({"lab", "comoving"}))
      ->capture_default_str();
  sim->add_option("--t-end", ma.t_end, "End time")->capture_default_str();
  sim->add_option("--perturb", ma.perturb, "Gaussian perturbation amplitude,width");
  sim->add_option("--out", ma.out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*prof) cmd_profile(pa);
    if (*spec) cmd_spectrum(sa);
    if (*ev) {
      if (!ea.threads) ea.threads = threads;
      cmd_evans(ea);
    }
    if (*wind) {
      if (!wa.threads) wa.threads = threads;
      cmd_winding(wa);
    }
    if (*sim) cmd_simulate(ma);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 6;
  }
  return 0;
}
