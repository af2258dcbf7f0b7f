#include "twstab/twstab.h"

#include <cstring>
#include <new>
#include <string>

#include "twstab/contour.hpp"
#include "twstab/error.hpp"
#include "twstab/evans.hpp"
#include "twstab/io.hpp"
#include "twstab/profile.hpp"
#include "twstab/simulate.hpp"
#include "twstab/spectrum.hpp"

struct twstab_profile {
  twstab::WaveProfile w;
};
struct twstab_evans_scan {
  std::vector<twstab::EvansPoint> points;
};
struct twstab_contour_result {
  twstab::ContourResult r;
};
struct twstab_simulation {
  twstab::SimulationResult r;
};
struct twstab_decay {
  twstab::DecaySeries d;
};

namespace {

thread_local std::string last_error;

twstab_status status_of(twstab::ErrorCode c) {
  using twstab::ErrorCode;
  switch (c) {
    case ErrorCode::Domain: return TWSTAB_E_DOMAIN;
    case ErrorCode::SingularPoint: return TWSTAB_E_SINGULAR_POINT;
    case ErrorCode::DegenerateEigenvalue: return TWSTAB_E_DEGENERATE_EIGENVALUE;
    case ErrorCode::Parameter: return TWSTAB_E_PARAMETER;
    case ErrorCode::SolverFailure: return TWSTAB_E_SOLVER_FAILURE;
    case ErrorCode::Bracket: return TWSTAB_E_BRACKET;
    case ErrorCode::InsufficientTail: return TWSTAB_E_INSUFFICIENT_TAIL;
    case ErrorCode::Escape: return TWSTAB_E_ESCAPE;
    case ErrorCode::SpectralRegion: return TWSTAB_E_SPECTRAL_REGION;
    case ErrorCode::Stiffness: return TWSTAB_E_STIFFNESS;
    case ErrorCode::OnZero: return TWSTAB_E_ON_ZERO;
    case ErrorCode::Aliasing: return TWSTAB_E_ALIASING;
    case ErrorCode::Instability: return TWSTAB_E_INSTABILITY;
    case ErrorCode::Config: return TWSTAB_E_CONFIG;
    case ErrorCode::Io: return TWSTAB_E_IO;
    case ErrorCode::Mismatch: return TWSTAB_E_MISMATCH;
  }
  return TWSTAB_E_INTERNAL;
}

template <class Fn>
twstab_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return TWSTAB_OK;
  } catch (const twstab::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return TWSTAB_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return TWSTAB_E_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return TWSTAB_E_INTERNAL;
  }
}

twstab_status null_arg(const char* what) {
  last_error = std::string("null argument: ") + what;
  return TWSTAB_E_NULL_ARGUMENT;
}

#define TWSTAB_REQUIRE(ptr) \
  if (!(ptr)) return null_arg(#ptr)

twstab::ModelParams to_cpp(const twstab_params& p) {
  twstab::ModelParams m;
  m.F = p.F;
  m.mu = p.mu;
  m.s_h = p.s_h;
  m.alpha = p.alpha;
  m.rho = p.rho;
  m.c = p.c;
  return m;
}

twstab_params to_c(const twstab::ModelParams& m) { return {m.F, m.mu, m.s_h, m.alpha, m.rho, m.c}; }

}  // namespace

extern "C" {

const char* twstab_version(void) { return "0.1.0"; }

const char* twstab_last_error(void) { return last_error.c_str(); }

const char* twstab_status_name(twstab_status s) {
  switch (s) {
    case TWSTAB_OK: return "ok";
    case TWSTAB_E_NULL_ARGUMENT: return "null_argument";
    case TWSTAB_E_INTERNAL: return "internal";
    default: break;
  }
  if (s > TWSTAB_OK && s <= TWSTAB_E_MISMATCH) return twstab::to_string(static_cast<twstab::ErrorCode>(s - 1));
  return "unknown";
}

twstab_status twstab_params_default(twstab_params* out) {
  TWSTAB_REQUIRE(out);
  *out = to_c(twstab::ModelParams::aedes_aegypti());
  return TWSTAB_OK;
}

twstab_status twstab_params_validate(const twstab_params* p) {
  TWSTAB_REQUIRE(p);
  return guarded([&] { to_cpp(*p).validate(); });
}

twstab_status twstab_params_load(const char* path, twstab_params* out) {
  TWSTAB_REQUIRE(path);
  TWSTAB_REQUIRE(out);
  return guarded([&] { *out = to_c(twstab::load_params(path)); });
}

twstab_status twstab_params_hash(const twstab_params* p, char* buf, size_t len) {
  TWSTAB_REQUIRE(p);
  TWSTAB_REQUIRE(buf);
  if (len < 17) {
    last_error = "hash buffer needs 17 bytes";
    return TWSTAB_E_PARAMETER;
  }
  return guarded([&] {
    const std::string h = twstab::param_hash(to_cpp(*p));
    std::memcpy(buf, h.c_str(), h.size() + 1);
  });
}

twstab_status twstab_rightmost_essential(const twstab_params* p, double c, double* out) {
  TWSTAB_REQUIRE(p);
  TWSTAB_REQUIRE(out);
  return guarded([&] {
    const auto m = to_cpp(*p);
    m.validate();
    *out = twstab::rightmost_essential(m, c);
  });
}

twstab_status twstab_absolute_edge(const twstab_params* p, double c, double* out) {
  TWSTAB_REQUIRE(p);
  TWSTAB_REQUIRE(out);
  return guarded([&] {
    const auto m = to_cpp(*p);
    m.validate();
    *out = twstab::absolute_edge(m, c);
  });
}

twstab_status twstab_dispersion(const twstab_params* p, double c, double k, double re[4], double im[4]) {
  TWSTAB_REQUIRE(p);
  TWSTAB_REQUIRE(re);
  TWSTAB_REQUIRE(im);
  return guarded([&] {
    const auto l = twstab::dispersion(to_cpp(*p), c, k);
    for (int i = 0; i < 4; ++i) {
      re[i] = l[i].real();
      im[i] = l[i].imag();
    }
  });
}

twstab_status twstab_classify(const twstab_params* p, double c, double re, double im, int* i_minus, int* i_plus,
                              int* verdict) {
  TWSTAB_REQUIRE(p);
  return guarded([&] {
    const auto s = twstab::classify(to_cpp(*p), c, {re, im});
    if (i_minus) *i_minus = s.i_minus;
    if (i_plus) *i_plus = s.i_plus;
    if (verdict) *verdict = static_cast<int>(s.verdict);
  });
}

twstab_status twstab_write_dispersion_csv(const twstab_params* p, double c, double k_max, int n_k, const char* path) {
  TWSTAB_REQUIRE(p);
  TWSTAB_REQUIRE(path);
  return guarded([&] { twstab::write_dispersion_csv(to_cpp(*p), c, k_max, n_k, path); });
}

twstab_status twstab_write_spectrum_map(const twstab_params* p, double c, double re_min, double re_max, double im_min,
                                        double im_max, int n_re, int n_im, const char* path) {
  TWSTAB_REQUIRE(p);
  TWSTAB_REQUIRE(path);
  return guarded(
      [&] { twstab::write_spectrum_map(to_cpp(*p), c, re_min, re_max, im_min, im_max, n_re, n_im, path); });
}

twstab_status twstab_profile_solve(const twstab_params* p, double L, int n_nodes, twstab_profile** out) {
  TWSTAB_REQUIRE(p);
  TWSTAB_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    twstab::ProfileOptions opt;
    opt.L = L;
    opt.n_nodes = n_nodes;
    *out = new twstab_profile{twstab::solve_profile(to_cpp(*p), opt)};
  });
}

twstab_status twstab_profile_load(const char* csv_path, const twstab_params* expected, twstab_profile** out) {
  TWSTAB_REQUIRE(csv_path);
  TWSTAB_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    twstab::ModelParams m;
    if (expected) m = to_cpp(*expected);
    *out = new twstab_profile{twstab::load_profile(csv_path, expected ? &m : nullptr)};
  });
}

twstab_status twstab_profile_save(const twstab_profile* profile, const char* csv_path) {
  TWSTAB_REQUIRE(profile);
  TWSTAB_REQUIRE(csv_path);
  return guarded([&] { twstab::save_profile(profile->w, csv_path); });
}

twstab_status twstab_profile_info(const twstab_profile* profile, double* c_star, double* L, double* residual_norm,
                                  size_t* n_nodes) {
  TWSTAB_REQUIRE(profile);
  if (c_star) *c_star = profile->w.c_star;
  if (L) *L = profile->w.L;
  if (residual_norm) *residual_norm = profile->w.residual_norm;
  if (n_nodes) *n_nodes = profile->w.size();
  return TWSTAB_OK;
}

twstab_status twstab_profile_decay_rates(const twstab_profile* profile, double rates[4]) {
  TWSTAB_REQUIRE(profile);
  TWSTAB_REQUIRE(rates);
  return guarded([&] {
    const auto r = twstab::decay_rates(profile->w);
    rates[0] = r.u_minus;
    rates[1] = r.v_minus;
    rates[2] = r.u_plus;
    rates[3] = r.v_plus;
  });
}

void twstab_profile_free(twstab_profile* profile) { delete profile; }

twstab_status twstab_miss_distance(const twstab_params* p, const double* c_values, size_t n, double* distance, int* ok) {
  TWSTAB_REQUIRE(p);
  TWSTAB_REQUIRE(c_values);
  TWSTAB_REQUIRE(distance);
  TWSTAB_REQUIRE(ok);
  return guarded([&] {
    const auto md = twstab::miss_distance_scan(to_cpp(*p), std::vector<double>(c_values, c_values + n));
    for (size_t i = 0; i < n; ++i) {
      distance[i] = md[i].distance;
      ok[i] = md[i].ok ? 1 : 0;
    }
  });
}

twstab_status twstab_evans(const twstab_profile* profile, double re, double im, double* d_re, double* d_im) {
  TWSTAB_REQUIRE(profile);
  TWSTAB_REQUIRE(d_re);
  TWSTAB_REQUIRE(d_im);
  return guarded([&] {
    const auto v = twstab::evans({re, im}, profile->w);
    *d_re = v.d.real();
    *d_im = v.d.imag();
  });
}

twstab_status twstab_evans_scan_run(const twstab_profile* profile, const double* re, const double* im, size_t n,
                                    unsigned threads, twstab_evans_scan** out) {
  TWSTAB_REQUIRE(profile);
  TWSTAB_REQUIRE(re);
  TWSTAB_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    std::vector<twstab::cplx> l(n);
    for (size_t i = 0; i < n; ++i) l[i] = {re[i], im ? im[i] : 0.0};
    *out = new twstab_evans_scan{twstab::evans_scan(l, profile->w, {}, threads)};
  });
}

size_t twstab_evans_scan_size(const twstab_evans_scan* scan) { return scan ? scan->points.size() : 0; }

twstab_status twstab_evans_scan_get(const twstab_evans_scan* scan, size_t i, double* lambda_re, double* lambda_im,
                                    double* d_re, double* d_im, int* ok) {
  TWSTAB_REQUIRE(scan);
  if (i >= scan->points.size()) {
    last_error = "scan index out of range";
    return TWSTAB_E_PARAMETER;
  }
  const auto& pt = scan->points[i];
  if (lambda_re) *lambda_re = pt.value.lambda.real();
  if (lambda_im) *lambda_im = pt.value.lambda.imag();
  if (d_re) *d_re = pt.value.d.real();
  if (d_im) *d_im = pt.value.d.imag();
  if (ok) *ok = pt.ok ? 1 : 0;
  return TWSTAB_OK;
}

twstab_status twstab_evans_scan_max_plucker(const twstab_evans_scan* scan, double* out) {
  TWSTAB_REQUIRE(scan);
  TWSTAB_REQUIRE(out);
  double m = 0.0;
  for (const auto& pt : scan->points)
    if (pt.ok) m = std::max(m, pt.value.max_plucker);
  *out = m;
  return TWSTAB_OK;
}

twstab_status twstab_evans_scan_crossings(const twstab_evans_scan* scan, double* out, size_t cap, size_t* count) {
  TWSTAB_REQUIRE(scan);
  TWSTAB_REQUIRE(count);
  const auto x = twstab::real_crossings(scan->points);
  *count = x.size();
  for (size_t i = 0; i < x.size() && i < cap && out; ++i) out[i] = x[i];
  return TWSTAB_OK;
}

twstab_status twstab_evans_scan_write_csv(const twstab_evans_scan* scan, const char* path) {
  TWSTAB_REQUIRE(scan);
  TWSTAB_REQUIRE(path);
  return guarded([&] { twstab::write_evans_csv(scan->points, path); });
}

void twstab_evans_scan_free(twstab_evans_scan* scan) { delete scan; }

twstab_status twstab_branch_probe(const twstab_profile* profile, unsigned threads, int* detected, double* location,
                                  double* gamma_a, char* message, size_t message_len) {
  TWSTAB_REQUIRE(profile);
  return guarded([&] {
    const auto r = twstab::probe_branch_point(profile->w, {}, threads);
    if (detected) *detected = r.detected ? 1 : 0;
    if (location) *location = r.location;
    if (gamma_a) *gamma_a = r.gamma_a;
    if (message && message_len > 0) {
      const size_t n = std::min(message_len - 1, r.message.size());
      std::memcpy(message, r.message.data(), n);
      message[n] = '\0';
    }
  });
}

twstab_status twstab_count_roots(const twstab_profile* profile, double r_s, double r_b, size_t n_points,
                                 unsigned threads, twstab_contour_result** out) {
  TWSTAB_REQUIRE(profile);
  TWSTAB_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new twstab_contour_result{twstab::count_roots(profile->w, r_s, r_b, n_points, {}, {}, threads)};
  });
}

twstab_status twstab_contour_result_info(const twstab_contour_result* result, int* winding, double* total_arg_change,
                                         double* residual, double* max_step_arg, size_t* n_points_final,
                                         int* refinement_rounds) {
  TWSTAB_REQUIRE(result);
  const auto& r = result->r;
  if (winding) *winding = r.winding;
  if (total_arg_change) *total_arg_change = r.total_arg_change;
  if (residual) *residual = r.residual;
  if (max_step_arg) *max_step_arg = r.max_step_arg;
  if (n_points_final) *n_points_final = r.n_points_final;
  if (refinement_rounds) *refinement_rounds = r.refinement_rounds;
  return TWSTAB_OK;
}

twstab_status twstab_contour_result_write(const twstab_contour_result* result, const char* csv_path,
                                          const char* summary_path) {
  TWSTAB_REQUIRE(result);
  return guarded([&] {
    if (csv_path) twstab::write_contour_csv(result->r, csv_path);
    if (summary_path) twstab::write_contour_summary(result->r, summary_path);
  });
}

void twstab_contour_result_free(twstab_contour_result* result) { delete result; }

twstab_status twstab_sim_config_default(twstab_sim_config* out) {
  TWSTAB_REQUIRE(out);
  const twstab::SimulationConfig d;
  *out = twstab_sim_config{};
  out->half_width = d.half_width;
  out->n_cells = d.n_cells;
  out->dt = d.dt;
  out->t_end = d.t_end;
  out->frame = TWSTAB_FRAME_LAB;
  out->frame_speed = 0.0;
  out->initial = TWSTAB_INITIAL_TANH;
  out->perturbation = TWSTAB_PERTURB_NONE;
  out->amplitude = 0.0;
  out->width = d.width;
  out->track_interval = d.track_interval;
  out->snapshot_times = nullptr;
  out->n_snapshots = 0;
  return TWSTAB_OK;
}

twstab_status twstab_simulate(const twstab_params* p, const twstab_sim_config* config, const twstab_profile* profile,
                              twstab_simulation** out) {
  TWSTAB_REQUIRE(p);
  TWSTAB_REQUIRE(config);
  TWSTAB_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    twstab::SimulationConfig c;
    c.half_width = config->half_width;
    c.n_cells = config->n_cells;
    c.dt = config->dt;
    c.t_end = config->t_end;
    c.frame = config->frame == TWSTAB_FRAME_COMOVING ? twstab::Frame::CoMoving : twstab::Frame::Lab;
    c.frame_speed = config->frame_speed;
    c.initial = config->initial == TWSTAB_INITIAL_PROFILE ? twstab::InitialKind::Profile : twstab::InitialKind::Tanh;
    switch (config->perturbation) {
      case TWSTAB_PERTURB_GAUSSIAN: c.perturbation = twstab::PerturbationShape::Gaussian; break;
      case TWSTAB_PERTURB_TRANSLATION: c.perturbation = twstab::PerturbationShape::Translation; break;
      default: c.perturbation = twstab::PerturbationShape::None; break;
    }
    c.amplitude = config->amplitude;
    c.width = config->width;
    c.track_interval = config->track_interval;
    if (config->n_snapshots && !config->snapshot_times)
      throw twstab::Error(twstab::ErrorCode::Config, "snapshot_times is null");
    c.snapshot_times.assign(config->snapshot_times, config->snapshot_times + config->n_snapshots);
    *out = new twstab_simulation{twstab::run(c, to_cpp(*p), profile ? &profile->w : nullptr)};
  });
}

twstab_status twstab_simulation_info(const twstab_simulation* sim, double* speed, double* fit_residual, double* dx,
                                     double* dt, double* min_value, double* max_value, double* drift) {
  TWSTAB_REQUIRE(sim);
  const auto& r = sim->r;
  if (speed) *speed = r.track.speed;
  if (fit_residual) *fit_residual = r.track.fit_residual;
  if (dx) *dx = r.dx;
  if (dt) *dt = r.dt;
  if (min_value) *min_value = r.min_value;
  if (max_value) *max_value = r.max_value;
  if (drift) {
    const auto& pos = r.track.positions;
    *drift = pos.empty() ? 0.0 : pos.back() - pos.front();
  }
  return TWSTAB_OK;
}

twstab_status twstab_simulation_write(const twstab_simulation* sim, const char* dir) {
  TWSTAB_REQUIRE(sim);
  TWSTAB_REQUIRE(dir);
  return guarded([&] {
    const std::string base(dir);
    for (std::size_t k = 0; k < sim->r.snapshots.size(); ++k)
      twstab::write_snapshot_csv(sim->r.x, sim->r.snapshots[k], base + "/snapshot_" + std::to_string(k) + ".csv");
    twstab::write_front_track_csv(sim->r.track, base + "/front_track.csv");
  });
}

void twstab_simulation_free(twstab_simulation* sim) { delete sim; }

twstab_status twstab_perturbation_decay(const twstab_profile* profile, double amplitude, double width,
                                        twstab_perturbation shape, double t_end, twstab_decay** out) {
  TWSTAB_REQUIRE(profile);
  TWSTAB_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    twstab::DecayOptions opt;
    opt.shape = shape == TWSTAB_PERTURB_TRANSLATION ? twstab::PerturbationShape::Translation
                                                    : twstab::PerturbationShape::Gaussian;
    if (t_end > 0.0) opt.t_end = t_end;
    *out = new twstab_decay{twstab::perturbation_decay(profile->w, amplitude, width, opt)};
  });
}

size_t twstab_decay_size(const twstab_decay* decay) { return decay ? decay->d.times.size() : 0; }

twstab_status twstab_decay_get(const twstab_decay* decay, size_t i, double* t, double* deviation, double* shift) {
  TWSTAB_REQUIRE(decay);
  if (i >= decay->d.times.size()) {
    last_error = "decay index out of range";
    return TWSTAB_E_PARAMETER;
  }
  if (t) *t = decay->d.times[i];
  if (deviation) *deviation = decay->d.deviation[i];
  if (shift) *shift = decay->d.shift[i];
  return TWSTAB_OK;
}

twstab_status twstab_decay_write_csv(const twstab_decay* decay, const char* path) {
  TWSTAB_REQUIRE(decay);
  TWSTAB_REQUIRE(path);
  return guarded([&] { twstab::write_decay_csv(decay->d, path); });
}

void twstab_decay_free(twstab_decay* decay) { delete decay; }

}  // extern "C"
