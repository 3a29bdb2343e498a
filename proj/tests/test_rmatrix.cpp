#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "imspekit/rmatrix.hpp"

using namespace imspekit;

namespace {

// 2D tensor-Simpson oracle over [x_lo,x_hi] x [y_lo,y_hi], fixed fine grid.
double simpson2d(const std::function<double(double, double)>& f, double xlo,
                 double xhi, double ylo, double yhi, int n = 400) {
  auto w = [n](int i) { return (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0); };
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = xlo + (xhi - xlo) * i / n;
    double row = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double y = ylo + (yhi - ylo) * j / n;
      row += w(j) * f(x, y);
    }
    s += w(i) * row;
  }
  return s * (xhi - xlo) * (yhi - ylo) / (9.0 * n * n);
}

}  // namespace

TEST_CASE("strip centers") {
  // n_int = 4: centers at -0.75, -0.25, 0.25, 0.75
  CHECK(strip_center<double>(1, 4) == doctest::Approx(-0.75).epsilon(1e-15));
  CHECK(strip_center<double>(3, 4) == doctest::Approx(0.25).epsilon(1e-15));
  // antisymmetric about the disk center
  for (int n : {2, 4, 64}) {
    for (int k = 1; k <= n; ++k) {
      CHECK(strip_center<double>(k, n) ==
            doctest::Approx(-strip_center<double>(n + 1 - k, n)).epsilon(1e-15));
    }
  }
  CHECK_THROWS_AS(strip_center<double>(0, 4), DomainError);
  CHECK_THROWS_AS(strip_center<double>(5, 4), DomainError);
  CHECK_THROWS_AS(strip_center<double>(1, 3), DomainError);
}

TEST_CASE("simple width at the third strip of four") {
  // center 0.25; full width 2*sqrt(1 - 1/16) = sqrt(15)/2
  const double two_w = 2 * width_simple(strip_center<double>(3, 4));
  CHECK(std::abs(two_w - std::sqrt(15.0) / 2) <= 1e-12);
  CHECK_THROWS_AS(width_simple(1.0), DomainError);
}

TEST_CASE("averaged width at the third strip of four") {
  // exact section area gives full width (3*sqrt(3) + 2*pi)/6
  const double two_w = 2 * width_avg<double>(3, 4);
  CHECK(std::abs(two_w - (3 * std::sqrt(3.0) + 2 * pi_v<double>()) / 6) <= 1e-12);
}

TEST_CASE("averaged width with two strips is pi/4") {
  CHECK(width_avg<double>(1, 2) == doctest::Approx(pi_v<double>() / 4).epsilon(1e-14));
  CHECK(width_avg<double>(2, 2) == doctest::Approx(pi_v<double>() / 4).epsilon(1e-14));
}

TEST_CASE("averaged widths tile the disk area exactly") {
  for (int n : {2, 4, 64, 1024}) {
    double sum = 0.0;
    const double delta = 1.0 / n;
    for (int k = 1; k <= n; ++k) sum += 4 * width_avg<double>(k, n) * delta;
    CHECK(std::abs(sum - pi_v<double>()) <= 1e-12);
  }
}

TEST_CASE("simple widths overestimate the disk area") {
  for (int n : {4, 64, 256}) {
    double sum = 0.0;
    const double delta = 1.0 / n;
    for (int k = 1; k <= n; ++k) {
      sum += 4 * width_simple(strip_center<double>(k, n)) * delta;
    }
    CHECK(sum > pi_v<double>());
  }
}

TEST_CASE("rectangle R matrix against 2D quadrature") {
  Hyperparameters h{0.7, 1.9};
  RectDomain dom{0.25, 1.0, 0.5};
  const Design d = {{0.3, 0.1}, {-0.4, 0.6}};
  const auto R = build_r_rect<double>(d, h, dom);
  const double area = 4 * dom.half_width * dom.half_height;

  CHECK(R(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t j = 0; j < d.size(); ++j) {
    const auto p = d[j];
    const double q = simpson2d(
        [&](double x, double y) {
          return std::exp(-h.theta1 * (x - p.x1) * (x - p.x1) -
                          h.theta2 * (y - p.x2) * (y - p.x2));
        },
        -dom.half_width, dom.half_width, dom.center2 - dom.half_height,
        dom.center2 + dom.half_height) / area;
    CHECK(std::abs(R(0, j + 1) - q) <= 1e-10);
    for (std::size_t i = 0; i <= j; ++i) {
      const auto pi_ = d[i];
      const double q2 = simpson2d(
          [&](double x, double y) {
            return std::exp(-h.theta1 * ((x - p.x1) * (x - p.x1) +
                                         (x - pi_.x1) * (x - pi_.x1)) -
                            h.theta2 * ((y - p.x2) * (y - p.x2) +
                                        (y - pi_.x2) * (y - pi_.x2)));
          },
          -dom.half_width, dom.half_width, dom.center2 - dom.half_height,
          dom.center2 + dom.half_height) / area;
      CHECK(std::abs(R(i + 1, j + 1) - q2) <= 1e-10);
    }
  }
}

TEST_CASE("disk R00 equals the tiled area over pi") {
  Hyperparameters h;
  const Design d = {{0, 0}};
  for (Method m : {Method::A, Method::B, Method::C}) {
    const auto R = build_r_disk<double>(d, h, DiskSpec{64, m});
    double sum = 0.0;
    for (int k = 1; k <= 64; ++k) {
      const double wk = (m == Method::A)
                            ? width_simple(strip_center<double>(k, 64))
                            : width_avg<double>(k, 64);
      sum += 4 * wk / 64.0;
    }
    CHECK(R(0, 0) == doctest::Approx(sum / pi_v<double>()).epsilon(1e-14));
  }
}

TEST_CASE("disk R01 for a centered point converges to 1 - 1/e") {
  Hyperparameters h{1.0, 1.0};
  const Design d = {{0, 0}};
  const double target = 1.0 - std::exp(-1.0);
  double prev_err = 1.0;
  for (int n : {64, 128, 256, 512, 1024}) {
    const auto R = build_r_disk<double>(d, h, DiskSpec{n, Method::C});
    const double err = std::abs(R(0, 1) - target);
    CHECK(err < prev_err);  // monotone refinement
    prev_err = err;
  }
  CHECK(prev_err <= 1e-5);
}

TEST_CASE("disk R is symmetric under x2 reflection of the design") {
  Hyperparameters h{1.4, 0.6};
  const Design d = {{0.3, 0.4}, {-0.2, -0.5}};
  const Design dref = {{0.3, -0.4}, {-0.2, 0.5}};
  for (Method m : {Method::A, Method::B, Method::C}) {
    const auto R1 = build_r_disk<double>(d, h, DiskSpec{128, m});
    const auto R2 = build_r_disk<double>(dref, h, DiskSpec{128, m});
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        CHECK(std::abs(R1(i, j) - R2(i, j)) <= 1e-14);
      }
    }
  }
}

TEST_CASE("methods B and C agree closely at high strip counts") {
  Hyperparameters h{1.0, 1.0};
  const Design d = {{0.4, 0.3}, {-0.1, -0.6}};
  const auto RB = build_r_disk<double>(d, h, DiskSpec{1024, Method::B});
  const auto RC = build_r_disk<double>(d, h, DiskSpec{1024, Method::C});
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(std::abs(RB(i, j) - RC(i, j)) <= 1e-5);
    }
  }
}

TEST_CASE("invalid strip counts are rejected") {
  Hyperparameters h;
  const Design d = {{0, 0}};
  CHECK_THROWS_AS(build_r_disk<double>(d, h, DiskSpec{3, Method::C}), DomainError);
  CHECK_THROWS_AS(build_r_disk<double>(d, h, DiskSpec{0, Method::C}), DomainError);
  CHECK_THROWS_AS((RectDomain{0.0, -1.0, 1.0}.validate()), DomainError);
}

TEST_CASE("method names round-trip") {
  for (Method m : {Method::A, Method::B, Method::C}) {
    CHECK(method_from_name(std::string(1, method_name(m))) == m);
  }
  CHECK_THROWS_AS(method_from_name("D"), ConfigError);
}
