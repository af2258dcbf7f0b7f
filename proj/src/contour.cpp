#include "twstab/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "twstab/error.hpp"

namespace twstab {

Contour::Contour(double r_s, double r_b) : r_s_(r_s), r_b_(r_b) {
  if (!(r_s > 0.0) || !(r_b > r_s) || !std::isfinite(r_b))
    throw Error(ErrorCode::Parameter, "contour: need 0 < r_s < r_b");
  piece_[0] = std::numbers::pi * r_b;
  piece_[1] = r_b - r_s;
  piece_[2] = std::numbers::pi * r_s;
  piece_[3] = r_b - r_s;
  total_ = piece_[0] + piece_[1] + piece_[2] + piece_[3];
}

cplx Contour::at(double s) const {
  s = std::clamp(s, 0.0, total_);
  if (s <= piece_[0]) return std::polar(r_b_, -0.5 * std::numbers::pi + s / r_b_);
  s -= piece_[0];
  if (s <= piece_[1]) return {0.0, r_b_ - s};
  s -= piece_[1];
  if (s <= piece_[2]) {
    const cplx z = std::polar(r_s_, 0.5 * std::numbers::pi - s / r_s_);
    return {std::max(z.real(), 0.0), z.imag()};
  }
  s -= piece_[2];
  if (s >= piece_[3]) return {0.0, -r_b_};
  return {0.0, -r_s_ - s};
}

Contour build_contour(double r_s, double r_b, std::size_t n_points) {
  if (n_points < 256) throw Error(ErrorCode::Parameter, "build_contour: n_points must be at least 256");
  Contour c(r_s, r_b);
  const double pieces[4] = {std::numbers::pi * r_b, r_b - r_s, std::numbers::pi * r_s, r_b - r_s};
  const std::size_t intervals = n_points - 1;
  const std::size_t floor_count = std::max<std::size_t>(16, n_points / 32);

  // Interval counts: floor per piece, remainder by arc length (largest remainder).
  std::size_t counts[4];
  std::size_t spare = intervals - 4 * floor_count;
  double frac[4];
  std::size_t assigned = 0;
  for (int i = 0; i < 4; ++i) {
    const double share = spare * pieces[i] / c.length();
    counts[i] = floor_count + static_cast<std::size_t>(std::floor(share));
    frac[i] = share - std::floor(share);
    assigned += counts[i];
  }
  while (assigned < intervals) {
    const int best = static_cast<int>(std::max_element(frac, frac + 4) - frac);
    ++counts[best];
    frac[best] = -1.0;
    ++assigned;
  }

  double offset = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (std::size_t k = 0; k < counts[i]; ++k) c.s.push_back(offset + pieces[i] * static_cast<double>(k) / counts[i]);
    offset += pieces[i];
  }
  c.s.push_back(c.length());
  for (double s : c.s) c.points.push_back(c.at(s));
  c.points.back() = c.points.front();
  return c;
}

Winding winding_number(const std::vector<cplx>& values) {
  if (values.size() < 2) throw Error(ErrorCode::Parameter, "winding_number: need at least two samples");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == cplx(0.0, 0.0) || !std::isfinite(std::abs(values[i]))) {
      std::ostringstream msg;
      msg << "winding_number: sample " << i << " is zero or not finite";
      throw Error(ErrorCode::OnZero, msg.str());
    }
  }
  Winding w;
  w.cum_arg.assign(values.size(), 0.0);
  const bool closed = values.front() == values.back();
  const std::size_t n = closed ? values.size() - 1 : values.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = values[i];
    const cplx b = values[(i + 1) % values.size()];
    const double jump = std::arg(b / a);
    if (std::abs(jump) > w.max_step_arg) {
      w.max_step_arg = std::abs(jump);
      w.worst_segment = i;
    }
    total += jump;
    if (i + 1 < values.size()) w.cum_arg[i + 1] = total;
  }
  if (w.max_step_arg >= std::numbers::pi * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "winding_number: argument jump " << w.max_step_arg << " at segment " << w.worst_segment
        << " is ambiguous; refine the sampling";
    throw AliasingError(msg.str(), w.worst_segment, w.max_step_arg);
  }
  w.total_arg_change = total;
  w.winding = static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
  w.residual = std::abs(total / (2.0 * std::numbers::pi) - w.winding);
  return w;
}

ContourResult count_roots(const BatchFunction& f, Contour contour, const RootCountOptions& opt) {
  std::vector<double> s = contour.s;
  std::vector<cplx> pts = contour.points;
  std::vector<cplx> vals = f(pts);
  if (vals.size() != pts.size()) throw Error(ErrorCode::Parameter, "count_roots: evaluator returned wrong length");

  auto jumps_over = [&](std::vector<std::size_t>& bad, double& worst, std::size_t& worst_i) {
    bad.clear();
    worst = 0.0;
    worst_i = 0;
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
      if (vals[i] == cplx(0.0, 0.0) || vals[i + 1] == cplx(0.0, 0.0)) continue;
      const double j = std::abs(std::arg(vals[i + 1] / vals[i]));
      if (j > worst) {
        worst = j;
        worst_i = i;
      }
      if (j >= opt.threshold) bad.push_back(i);
    }
  };

  ContourResult r;
  std::vector<std::size_t> bad;
  double worst;
  std::size_t worst_i;
  jumps_over(bad, worst, worst_i);
  int round = 0;
  while (!bad.empty() && opt.auto_refine && round < opt.max_rounds) {
    ++round;
    std::vector<double> s_mid;
    std::vector<cplx> p_mid;
    for (std::size_t i : bad) {
      s_mid.push_back(0.5 * (s[i] + s[i + 1]));
      p_mid.push_back(contour.at(s_mid.back()));
    }
    const std::vector<cplx> v_mid = f(p_mid);
    std::vector<double> s2;
    std::vector<cplx> p2, v2;
    std::size_t k = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      s2.push_back(s[i]);
      p2.push_back(pts[i]);
      v2.push_back(vals[i]);
      if (k < bad.size() && bad[k] == i) {
        s2.push_back(s_mid[k]);
        p2.push_back(p_mid[k]);
        v2.push_back(v_mid[k]);
        ++k;
      }
    }
    s.swap(s2);
    pts.swap(p2);
    vals.swap(v2);
    jumps_over(bad, worst, worst_i);
  }
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "count_roots: argument jump " << worst << " >= " << opt.threshold << " remains at segment " << worst_i
        << " (lambda=" << pts[worst_i].real() << (pts[worst_i].imag() < 0 ? "" : "+") << pts[worst_i].imag()
        << "i) after " << round << " refinement rounds";
    throw AliasingError(msg.str(), worst_i, worst);
  }

  const Winding w = winding_number(vals);
  r.points = std::move(pts);
  r.d_values = std::move(vals);
  r.cum_arg = w.cum_arg;
  r.total_arg_change = w.total_arg_change;
  r.winding = w.winding;
  r.residual = w.residual;
  r.max_step_arg = w.max_step_arg;
  r.n_points_final = r.points.size();
  r.refinement_rounds = round;
  return r;
}

ContourResult count_roots(const WaveProfile& profile, double r_s, double r_b, std::size_t n_points,
                          const RootCountOptions& options, const EvansOptions& evans_options, unsigned threads) {
  const Contour contour = build_contour(r_s, r_b, n_points);
  BatchFunction f = [&](const std::vector<cplx>& lambdas) {
    const std::vector<EvansPoint> scan = evans_scan(lambdas, profile, evans_options, threads);
    std::vector<cplx> d(scan.size());
    for (std::size_t i = 0; i < scan.size(); ++i) {
      if (!scan[i].ok) {
        // Re-run to surface the original exception type and message.
        d[i] = evans(lambdas[i], profile, evans_options).d;
      } else {
        d[i] = scan[i].value.d;
      }
    }
    return d;
  };
  return count_roots(f, contour, options);
}

}  // namespace twstab
