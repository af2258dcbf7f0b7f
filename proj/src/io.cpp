#include "twstab/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "twstab/error.hpp"
#include "twstab/spectrum.hpp"

namespace twstab {

using nlohmann::json;

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct File {
  std::FILE* f;
  explicit File(const std::string& path) : f(std::fopen(path.c_str(), "w")) {
    if (!f) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  }
  ~File() {
    if (f) std::fclose(f);
  }
  void close(const std::string& path) {
    const bool bad = std::ferror(f) != 0;
    const int rc = std::fclose(f);
    f = nullptr;
    if (bad || rc != 0) throw Error(ErrorCode::Io, "write failed: " + path);
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  File f(path);
  std::fputs(text.c_str(), f.f);
  f.close(path);
}

// nlohmann prints the shortest round-trip representation of doubles.
std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

ModelParams params_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Config, std::string("config: JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::Config, "config: top level must be an object");
  ModelParams p;
  bool seen[4] = {false, false, false, false};
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (!it->is_number()) throw Error(ErrorCode::Config, "config: value of '" + key + "' must be a number");
    const double x = it->get<double>();
    if (key == "F") p.F = x, seen[0] = true;
    else if (key == "mu") p.mu = x, seen[1] = true;
    else if (key == "s_h") p.s_h = x, seen[2] = true;
    else if (key == "alpha") p.alpha = x, seen[3] = true;
    else if (key == "rho") p.rho = x;
    else if (key == "c") p.c = x;
    else throw Error(ErrorCode::Config, "config: unknown key '" + key + "'");
  }
  const char* names[4] = {"F", "mu", "s_h", "alpha"};
  for (int i = 0; i < 4; ++i)
    if (!seen[i]) throw Error(ErrorCode::Config, std::string("config: missing key '") + names[i] + "'");
  try {
    p.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, std::string("config: ") + e.what());
  }
  return p;
}

ModelParams load_params(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, e.what());
  }
  return params_from_json(text);
}

std::string params_to_json(const ModelParams& p) {
  json j;
  j["F"] = p.F;
  j["mu"] = p.mu;
  j["s_h"] = p.s_h;
  j["alpha"] = p.alpha;
  j["rho"] = p.rho;
  j["c"] = p.c;
  return dump(j);
}

std::string param_hash(const ModelParams& p) {
  const std::string text = fmt(p.F) + "," + fmt(p.mu) + "," + fmt(p.s_h) + "," + fmt(p.alpha);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string sidecar_path(const std::string& csv_path) {
  const auto slash = csv_path.find_last_of('/');
  const auto dot = csv_path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return csv_path.substr(0, dot) + ".json";
  return csv_path + ".json";
}

void save_profile(const WaveProfile& w, const std::string& csv_path) {
  {
    File f(csv_path);
    std::fputs("z,u,v,du,dv\n", f.f);
    for (std::size_t i = 0; i < w.size(); ++i)
      std::fprintf(f.f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", w.grid[i], w.u_hat[i], w.v_hat[i], w.du_hat[i], w.dv_hat[i]);
    f.close(csv_path);
  }
  json j;
  j["c_star"] = w.c_star;
  j["L"] = w.L;
  j["residual_norm"] = w.residual_norm;
  j["n_nodes"] = w.size();
  j["param_hash"] = param_hash(w.params);
  j["params"] = json::parse(params_to_json(w.params));
  write_text(sidecar_path(csv_path), dump(j));
}

WaveProfile load_profile(const std::string& csv_path, const ModelParams* expected) {
  json side;
  try {
    side = json::parse(read_file(sidecar_path(csv_path)));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Io, std::string("profile sidecar: ") + e.what());
  }
  WaveProfile w;
  try {
    const json& pj = side.at("params");
    w.params.F = pj.at("F").get<double>();
    w.params.mu = pj.at("mu").get<double>();
    w.params.s_h = pj.at("s_h").get<double>();
    w.params.alpha = pj.at("alpha").get<double>();
    w.params.rho = pj.value("rho", 0.0);
    w.c_star = side.at("c_star").get<double>();
    w.L = side.at("L").get<double>();
    w.residual_norm = side.at("residual_norm").get<double>();
    w.params.c = w.c_star;
    const std::string stored = side.at("param_hash").get<std::string>();
    if (stored != param_hash(w.params)) throw Error(ErrorCode::Io, "profile sidecar: parameter hash is inconsistent");
    if (expected && param_hash(*expected) != stored)
      throw Error(ErrorCode::Mismatch, "profile " + csv_path + " was computed for different parameters (hash " + stored +
                                           ", config " + param_hash(*expected) + ")");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, std::string("profile sidecar: ") + e.what());
  }

  std::ifstream in(csv_path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + csv_path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("z,u,v,du,dv", 0) != 0) throw Error(ErrorCode::Io, "profile CSV: unexpected header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double z, u, v, du, dv;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &z, &u, &v, &du, &dv) != 5)
      throw Error(ErrorCode::Io, "profile CSV: malformed row");
    w.grid.push_back(z);
    w.u_hat.push_back(u);
    w.v_hat.push_back(v);
    w.du_hat.push_back(du);
    w.dv_hat.push_back(dv);
  }
  if (w.grid.size() < 2 || w.grid.size() != side.at("n_nodes").get<std::size_t>())
    throw Error(ErrorCode::Io, "profile CSV: node count does not match sidecar");
  for (std::size_t i = 0; i + 1 < w.grid.size(); ++i)
    if (!(w.grid[i + 1] > w.grid[i])) throw Error(ErrorCode::Io, "profile CSV: grid not increasing");
  return w;
}

void write_evans_csv(const std::vector<EvansPoint>& scan, const std::string& path) {
  File f(path);
  std::fputs("re_lambda,im_lambda,re_d,im_d,status\n", f.f);
  for (const auto& pt : scan) {
    const cplx l = pt.value.lambda, d = pt.ok ? pt.value.d : cplx(NAN, NAN);
    std::fprintf(f.f, "%.17g,%.17g,%.17g,%.17g,%s\n", l.real(), l.imag(), d.real(), d.imag(), pt.status.c_str());
  }
  f.close(path);
}

void write_contour_csv(const ContourResult& r, const std::string& path) {
  File f(path);
  std::fputs("re_lambda,im_lambda,re_d,im_d,cum_arg\n", f.f);
  for (std::size_t i = 0; i < r.points.size(); ++i)
    std::fprintf(f.f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.points[i].real(), r.points[i].imag(), r.d_values[i].real(),
                 r.d_values[i].imag(), r.cum_arg[i]);
  f.close(path);
}

void write_contour_summary(const ContourResult& r, const std::string& path) {
  json j;
  j["winding"] = r.winding;
  j["total_arg_change"] = r.total_arg_change;
  j["n_points_final"] = r.n_points_final;
  j["residual"] = r.residual;
  j["max_step_arg"] = r.max_step_arg;
  j["refinement_rounds"] = r.refinement_rounds;
  write_text(path, dump(j));
}

void write_dispersion_csv(const ModelParams& params, double c, double k_max, int n_k, const std::string& path) {
  if (n_k < 2 || !(k_max > 0.0)) throw Error(ErrorCode::Parameter, "dispersion CSV: need k_max > 0 and n_k >= 2");
  File f(path);
  std::fputs("k,re_minus_1,im_minus_1,re_minus_2,im_minus_2,re_plus_1,im_plus_1,re_plus_2,im_plus_2\n", f.f);
  for (int i = 0; i < n_k; ++i) {
    const double k = -k_max + 2.0 * k_max * i / (n_k - 1);
    const auto l = dispersion(params, c, k);
    std::fprintf(f.f, "%.17g", k);
    for (const cplx& x : l) std::fprintf(f.f, ",%.17g,%.17g", x.real(), x.imag());
    std::fputc('\n', f.f);
  }
  f.close(path);
}

void write_spectrum_map(const ModelParams& params, double c, double re_min, double re_max, double im_min,
                        double im_max, int n_re, int n_im, const std::string& path) {
  if (n_re < 2 || n_im < 2) throw Error(ErrorCode::Parameter, "spectrum map: need at least 2x2 points");
  File f(path);
  std::fputs("re_lambda,im_lambda,i_minus,i_plus,verdict\n", f.f);
  for (int j = 0; j < n_im; ++j) {
    const double im = im_min + (im_max - im_min) * j / (n_im - 1);
    for (int i = 0; i < n_re; ++i) {
      const double re = re_min + (re_max - re_min) * i / (n_re - 1);
      const SpectralClassification s = classify(params, c, cplx(re, im));
      std::fprintf(f.f, "%.17g,%.17g,%d,%d,%s\n", re, im, s.i_minus, s.i_plus, to_string(s.verdict));
    }
  }
  f.close(path);
}

void write_snapshot_csv(const std::vector<double>& x, const Snapshot& s, const std::string& path) {
  File f(path);
  std::fputs("x,u,v\n", f.f);
  for (std::size_t i = 0; i < x.size(); ++i) std::fprintf(f.f, "%.17g,%.17g,%.17g\n", x[i], s.u[i], s.v[i]);
  f.close(path);
}

void write_front_track_csv(const FrontTrack& tr, const std::string& path) {
  File f(path);
  std::fputs("t,front_x\n", f.f);
  for (std::size_t i = 0; i < tr.times.size(); ++i) std::fprintf(f.f, "%.17g,%.17g\n", tr.times[i], tr.positions[i]);
  f.close(path);
}

void write_decay_csv(const DecaySeries& d, const std::string& path) {
  File f(path);
  std::fputs("t,deviation,shift\n", f.f);
  for (std::size_t i = 0; i < d.times.size(); ++i)
    std::fprintf(f.f, "%.17g,%.17g,%.17g\n", d.times[i], d.deviation[i], d.shift[i]);
  f.close(path);
}

}  // namespace twstab
