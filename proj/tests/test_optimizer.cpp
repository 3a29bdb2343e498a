#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "imspekit/optimizer.hpp"

using namespace imspekit;

TEST_CASE("family names round-trip") {
  for (FamilyKind k :
       {FamilyKind::singleton, FamilyKind::inversion_pair,
        FamilyKind::four_in_line_ordinate, FamilyKind::four_in_line_abscissa,
        FamilyKind::rectangle_centered, FamilyKind::rhomboid}) {
    CHECK(family_from_name(family_name(k)) == k);
    CHECK_FALSE(family_param_names(k).empty());
  }
  CHECK_THROWS_AS(family_from_name("hexagon"), ConfigError);
}

TEST_CASE("family realization") {
  const Design pair = realize({FamilyKind::inversion_pair, {{"x11", 0.5}}});
  REQUIRE(pair.size() == 2);
  CHECK(pair[0].x1 == 0.5);
  CHECK(pair[1].x1 == -0.5);
  CHECK(pair[0].x2 == 0.0);

  const Design rhomb =
      realize({FamilyKind::rhomboid, {{"x11", 0.7}, {"x32", 0.2}}});
  REQUIRE(rhomb.size() == 4);
  CHECK(rhomb[2].x2 == 0.2);
  CHECK(rhomb[3].x2 == -0.2);

  const Design line = realize({FamilyKind::four_in_line_ordinate, {{"x32", 0.3}}});
  REQUIRE(line.size() == 4);
  CHECK(line[2].x2 == 0.7);  // default offset

  const Design rect =
      realize({FamilyKind::rectangle_centered, {{"x11", 0.4}, {"x32", 0.3}}});
  REQUIRE(rect.size() == 4);
}

TEST_CASE("degenerate family parameters are rejected") {
  CHECK_THROWS_AS(
      realize({FamilyKind::rectangle_centered, {{"x11", 0.0}, {"x32", 0.0}}}),
      DuplicatePointError);
  CHECK_THROWS_AS(realize({FamilyKind::inversion_pair, {{"x11", 0.0}}}),
                  DuplicatePointError);
  CHECK_THROWS_AS(realize({FamilyKind::rhomboid, {{"x11", 0.7}}}), DomainError);
}

TEST_CASE("realization with domain containment") {
  CHECK_THROWS_AS(
      realize({FamilyKind::inversion_pair, {{"x11", 1.2}}}, DiskSpec{}),
      OutOfDomainError);
  // the rhomboid corners fit in the disk but not in a narrow rectangle
  const DesignFamily f{FamilyKind::rhomboid, {{"x11", 0.9}, {"x32", 0.5}}};
  CHECK_NOTHROW(realize(f, DiskSpec{}));
  CHECK_THROWS_AS(realize(f, RectDomain{0.0, 0.5, 1.0}), OutOfDomainError);
}

TEST_CASE("scalar minimization of a parabola") {
  int calls = 0;
  auto f = [&](double x) {
    ++calls;
    return (x - 0.3) * (x - 0.3);
  };
  const auto r = minimize_scalar(f, -1.0, 1.0, 1e-8);
  CHECK(std::abs(r.x - 0.3) <= 1e-7);
  CHECK(r.f <= 1e-13);
  CHECK(r.evaluations == calls);
  CHECK_FALSE(r.at_lower);
  CHECK_FALSE(r.at_upper);
}

TEST_CASE("scalar minimization lands on boundaries") {
  const auto inc = minimize_scalar([](double x) { return x; }, 0.0, 1.0, 1e-6);
  CHECK(inc.at_lower);
  CHECK(inc.x == 0.0);
  const auto dec = minimize_scalar([](double x) { return -x; }, 0.0, 1.0, 1e-6);
  CHECK(dec.at_upper);
  CHECK(dec.x == 1.0);
}

TEST_CASE("scalar minimization detects a hostile bracket") {
  // both ends beat every interior probe
  auto f = [](double x) { return -(x - 0.5) * (x - 0.5); };
  CHECK_THROWS_AS(minimize_scalar(f, 0.0, 1.0, 1e-6), BracketError);
  CHECK_THROWS_AS(minimize_scalar(f, 1.0, 0.0, 1e-6), DomainError);
  CHECK_THROWS_AS(minimize_scalar(f, 0.0, 1.0, 0.0), DomainError);
}

TEST_CASE("two-point disk family minimization") {
  Hyperparameters h{1.0, 1.0};
  const auto r = minimize_family(FamilyKind::inversion_pair,
                                 {{"x11", {0.1, 0.9}}}, h, DiskSpec{256, Method::C},
                                 1e-5);
  CHECK(std::abs(r.best_params.at("x11") - 0.546820) <= 1e-3);
  CHECK(std::abs(r.best_value - 0.426149) <= 1e-4);
  CHECK(r.evaluations > 0);
  CHECK_FALSE(r.twin.has_value());
}

TEST_CASE("restart stability of the family minimization") {
  Hyperparameters h{1.0, 1.0};
  OptimizationOptions near_start;
  near_start.start = {{"x11", 0.2}};
  OptimizationOptions far_start;
  far_start.start = {{"x11", 0.85}};
  const auto a = minimize_family(FamilyKind::inversion_pair, {{"x11", {0.1, 0.9}}},
                                 h, DiskSpec{256, Method::C}, 1e-5, near_start);
  const auto b = minimize_family(FamilyKind::inversion_pair, {{"x11", {0.1, 0.9}}},
                                 h, DiskSpec{256, Method::C}, 1e-5, far_start);
  CHECK(std::abs(a.best_params.at("x11") - b.best_params.at("x11")) <= 1e-4);
}

TEST_CASE("boundary minimum is diagnosed") {
  Hyperparameters h{1.0, 1.0};
  // bounds exclude the interior optimum near 0.547
  const auto r = minimize_family(FamilyKind::inversion_pair,
                                 {{"x11", {0.6, 0.9}}}, h, DiskSpec{128, Method::C},
                                 1e-4);
  bool flagged = false;
  for (const auto& d : r.diagnostics) {
    if (d.find("bound") != std::string::npos) flagged = true;
  }
  CHECK(flagged);
  CHECK(r.best_params.at("x11") == 0.6);
}

TEST_CASE("minimize_family input validation") {
  Hyperparameters h;
  CHECK_THROWS_AS(
      minimize_family(FamilyKind::inversion_pair, {}, h, DiskSpec{}, 1e-4),
      DomainError);
  CHECK_THROWS_AS(minimize_family(FamilyKind::inversion_pair,
                                  {{"nope", {0.0, 1.0}}}, h, DiskSpec{}, 1e-4),
                  DomainError);
  CHECK_THROWS_AS(minimize_family(FamilyKind::inversion_pair,
                                  {{"x11", {0.9, 0.1}}}, h, DiskSpec{}, 1e-4),
                  DomainError);
}

TEST_CASE("scan flags bad points and keeps going") {
  Hyperparameters h{1.0, 1.0};
  ScanOptions opt;
  opt.ladder = {64, 256};
  const auto r = scan_family(FamilyKind::inversion_pair, {}, "x11",
                             {0.2, 0.5, 1.5}, h, DiskSpec{256, Method::C}, opt);
  REQUIRE(r.values.size() == 3);
  CHECK(r.flags[0] == "ok");
  CHECK(r.flags[1] == "ok");
  CHECK(r.flags[2] != "ok");  // outside the disk
  CHECK(std::isnan(r.values[2]));
  CHECK(r.values[0] > r.values[1]);  // approaching the optimum
}

TEST_CASE("scan grid validation") {
  Hyperparameters h;
  CHECK_THROWS_AS(scan_family(FamilyKind::inversion_pair, {}, "x11", {}, h,
                              DiskSpec{}, {}),
                  ConfigError);
  CHECK_THROWS_AS(scan_family(FamilyKind::inversion_pair, {}, "x11",
                              {0.5, 0.2}, h, DiskSpec{}, {}),
                  ConfigError);
}
