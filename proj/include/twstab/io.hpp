#pragma once

// JSON parameter files and the CSV/JSON artifacts of each stage. Reals are
// printed with %.17g so files round-trip exactly.

#include <string>
#include <vector>

#include "twstab/contour.hpp"
#include "twstab/evans.hpp"
#include "twstab/model.hpp"
#include "twstab/profile.hpp"
#include "twstab/simulate.hpp"

namespace twstab {

/// Flat object with F, mu, s_h, alpha (required) and rho, c (optional).
/// Unknown keys and non-numeric values raise Error(Config).
ModelParams params_from_json(const std::string& text);
ModelParams load_params(const std::string& path);
std::string params_to_json(const ModelParams& params);

/// 16 hex digits: FNV-1a over the %.17g text of F, mu, s_h, alpha.
std::string param_hash(const ModelParams& params);

/// Sidecar path of a profile CSV: the extension replaced by .json.
std::string sidecar_path(const std::string& csv_path);

/// Writes columns z,u,v,du,dv plus the sidecar (c_star, L, residual_norm,
/// n_nodes, param_hash, params).
void save_profile(const WaveProfile& profile, const std::string& csv_path);

/// Reads a saved profile. If `expected` is given its hash must match the
/// stored one, else Error(Mismatch).
WaveProfile load_profile(const std::string& csv_path, const ModelParams* expected = nullptr);

void write_evans_csv(const std::vector<EvansPoint>& scan, const std::string& path);
void write_contour_csv(const ContourResult& result, const std::string& path);
void write_contour_summary(const ContourResult& result, const std::string& path);

/// k, then re/im of the four curves.
void write_dispersion_csv(const ModelParams& params, double c, double k_max, int n_k, const std::string& path);
/// re_lambda, im_lambda, i_minus, i_plus, verdict over a rectangular grid.
void write_spectrum_map(const ModelParams& params, double c, double re_min, double re_max, double im_min,
                        double im_max, int n_re, int n_im, const std::string& path);

void write_snapshot_csv(const std::vector<double>& x, const Snapshot& snapshot, const std::string& path);
void write_front_track_csv(const FrontTrack& track, const std::string& path);
void write_decay_csv(const DecaySeries& series, const std::string& path);

}  // namespace twstab
