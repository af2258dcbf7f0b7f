#include <doctest.h>

#include <cmath>

#include "twstab/contour.hpp"
#include "twstab/error.hpp"

using namespace twstab;

namespace {
const double kPi = 3.14159265358979323846;

std::vector<cplx> map(const std::vector<cplx>& z, cplx (*f)(cplx)) {
  std::vector<cplx> out;
  for (const cplx& x : z) out.push_back(f(x));
  return out;
}
}  // namespace

TEST_CASE("contour geometry") {
  for (auto [rs, rb, n] : {std::tuple{0.1, 10.0, std::size_t{1024}}, std::tuple{0.001, 500.0, std::size_t{4096}}}) {
    const Contour C = build_contour(rs, rb, n);
    CHECK(C.size() == n);
    CHECK(std::abs(C.points.front() - C.points.back()) <= 1e-12 * rb);
    for (const cplx& p : C.points) {
      CHECK(p.real() >= -1e-12 * rb);
      CHECK(std::abs(p) >= rs - 1e-12 * rb);
      CHECK(std::abs(p) <= rb * (1 + 1e-12));
    }
    // Positive orientation: signed area > 0.
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < C.size(); ++i)
      area += C.points[i].real() * C.points[i + 1].imag() - C.points[i + 1].real() * C.points[i].imag();
    CHECK(area > 0.0);
    CHECK(C.length() == doctest::Approx(kPi * (rb + rs) + 2 * (rb - rs)));
  }
  CHECK_THROWS_AS(build_contour(10.0, 1.0, 1024), Error);
  CHECK_THROWS_AS(build_contour(0.1, 10.0, 100), Error);
}

TEST_CASE("winding of known functions") {
  std::vector<cplx> circle;
  for (int i = 0; i <= 64; ++i) circle.push_back(std::polar(1.0, 2 * kPi * i / 64));
  const Winding w1 = winding_number(circle);
  CHECK(w1.winding == 1);
  CHECK(w1.residual <= 1e-12);
  CHECK(winding_number(map(circle, [](cplx) { return cplx(7, 0); })).winding == 0);
  CHECK(winding_number(map(circle, [](cplx z) { return z * z * z; })).winding == 3);
  CHECK(winding_number(map(circle, [](cplx z) { return 1.0 / z; })).winding == -1);

  CHECK_THROWS_AS(winding_number({cplx(1), cplx(0), cplx(0, 1)}), Error);
  try {
    winding_number({cplx(1), cplx(0), cplx(0, 1)});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OnZero);
  }
  try {
    winding_number({cplx(1), cplx(-1), cplx(1)});
    FAIL("expected aliasing");
  } catch (const AliasingError& e) {
    CHECK(e.code() == ErrorCode::Aliasing);
  }
}

TEST_CASE("synthetic root counting through the refinement pipeline") {
  const BatchFunction f = [](const std::vector<cplx>& z) {
    std::vector<cplx> out;
    for (const cplx& x : z) out.push_back((x - cplx(1, 0.5)) * (x - cplx(3, -2)) / (x + 1.0));
    return out;
  };
  const ContourResult r = count_roots(f, build_contour(0.1, 10.0, 256));
  CHECK(r.winding == 2);
  CHECK(r.residual <= 0.05);
  CHECK(r.max_step_arg < kPi / 2);
  CHECK(r.points.size() == r.d_values.size());
  CHECK(r.cum_arg.size() == r.points.size());

  // A root hugging the contour forces refinement.
  const Contour base = build_contour(0.1, 10.0, 256);
  const cplx root = 0.995 * 0.5 * (base.points[3] + base.points[4]);
  const BatchFunction g = [root](const std::vector<cplx>& z) {
    std::vector<cplx> out;
    for (const cplx& x : z) out.push_back(x - root);
    return out;
  };
  const ContourResult rg = count_roots(g, base);
  CHECK(rg.winding == 1);
  CHECK(rg.refinement_rounds > 0);
  CHECK(rg.n_points_final > 256);

  RootCountOptions none;
  none.auto_refine = false;
  CHECK_THROWS_AS(count_roots(g, build_contour(0.1, 10.0, 256), none), AliasingError);
}
