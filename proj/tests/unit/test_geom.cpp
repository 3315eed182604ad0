// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "arpbox/errors.hpp"
#include "arpbox/geom.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace arpbox;
using namespace arpbox::geom;
using std::numbers::pi;

namespace {

ConvexPolygon square(double x0, double y0, double side) {
  return ConvexPolygon::make(
      {{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}});
}

}  // namespace

TEST_SUITE("geom") {
  TEST_CASE("oriented rect canonical form") {
    const auto r = OrientedRect::make(1, 2, 4, 2, 0.0);
    CHECK(r.theta() == doctest::Approx(-pi / 2));
    CHECK(r.w() == 2);
    CHECK(r.h() == 4);

    const auto s = OrientedRect::make(0, 0, 5, 3, -0.3 + pi);
    CHECK(s.theta() == doctest::Approx(-0.3));
    CHECK(s.w() == 5);

    const auto t = OrientedRect::make(0, 0, 5, 3, -0.3 + pi / 2);
    CHECK(t.theta() == doctest::Approx(-0.3));
    CHECK(t.w() == 3);
    CHECK(t.h() == 5);

    CHECK_THROWS_AS(OrientedRect::make(0, 0, 0, 1, -0.2), DegenerateBoxError);
    CHECK_THROWS_AS(OrientedRect::make(0, 0, NAN, 1, -0.2), InvalidBoxError);
  }

  TEST_CASE("aliased forms give the same corners") {
    const auto a = corners(OrientedRect::make(10, 20, 6, 2, -0.4));
    const auto b = corners(OrientedRect::make(10, 20, 2, 6, -0.4 + pi / 2));
    for (const auto& p : a) {
      bool found = false;
      for (const auto& q : b) {
        found = found || (std::abs(p.x - q.x) < 1e-12 && std::abs(p.y - q.y) < 1e-12);
      }
      CHECK(found);
    }
  }

  TEST_CASE("polygon validation") {
    CHECK_THROWS_AS(ConvexPolygon::make({{0, 0}, {1, 1}, {2, 2}}),
                    InvalidPolygonError);
    CHECK_THROWS_AS(ConvexPolygon::make({{0, 0}, {1, 0}}), InvalidPolygonError);
    CHECK_THROWS_AS(
        ConvexPolygon::make({{0, 0}, {2, 0}, {1, 0.5}, {2, 2}, {0, 2}}),
        InvalidPolygonError);
    // clockwise input is flipped
    const auto p = ConvexPolygon::make({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
    CHECK(signed_area(p.vertices()) == doctest::Approx(1.0));
    // repeated vertices collapse
    const auto q = ConvexPolygon::make({{0, 0}, {1, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(q.size() == 4);
  }

  TEST_CASE("clipping") {
    const auto inter = clip_convex(square(0, 0, 2), square(1, 1, 2));
    REQUIRE(inter);
    CHECK(polygon_area(*inter) == doctest::Approx(1.0));
    CHECK_FALSE(clip_convex(square(0, 0, 1), square(5, 5, 1)));
    // touching edges have no area
    CHECK_FALSE(clip_convex(square(0, 0, 1), square(1, 0, 1)));
  }

  TEST_CASE("rotated iou basics") {
    CHECK(rotated_iou(square(0, 0, 1), square(0, 0, 1)) == doctest::Approx(1.0));
    CHECK(rotated_iou(square(0, 0, 1), square(3, 0, 1)) == 0.0);
    CHECK(rotated_iou(square(0, 0, 2), square(1, 0, 2)) ==
          doctest::Approx(1.0 / 3.0));
    // unit square against itself turned 45 degrees: the overlap is a
    // regular octagon and the IoU is exactly 1/sqrt(2)
    const auto a = OrientedRect::make(0, 0, 1, 1, -pi / 2);
    const auto b = OrientedRect::make(0, 0, 1, 1, -pi / 4);
    CHECK(rotated_iou(a, b) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  }

  TEST_CASE("rotated iou is symmetric and matches sampling") {
    fit::Rng rng(11);
    for (int i = 0; i < 20; ++i) {
      const auto r1 = testing::random_rect(rng, 5, 60);
      const auto r2 = OrientedRect::make(r1.cx() + rng.uniform(-20, 20),
                                         r1.cy() + rng.uniform(-20, 20),
                                         rng.uniform(5, 60), rng.uniform(5, 60),
                                         rng.uniform(-pi / 2, 0));
      const double ab = rotated_iou(r1, r2);
      CHECK(ab == rotated_iou(r2, r1));
      const auto c1 = corners(r1);
      const auto c2 = corners(r2);
      CHECK(std::abs(ab - testing::mc_iou(c1, c2, 400, i)) < 5e-3);
    }
  }

  TEST_CASE("hbox iou") {
    CHECK(hbox_iou({0, 0, 2, 2}, {1, 0, 2, 2}) == doctest::Approx(1.0 / 3.0));
    CHECK(hbox_iou({0, 0, 2, 2}, {10, 0, 2, 2}) == 0.0);
  }

  TEST_CASE("convex hull") {
    const std::vector<Point2> pts{{0, 0}, {2, 0}, {1, 1}, {2, 2}, {0, 2}, {1, 0}};
    const auto hull = convex_hull(pts);
    CHECK(hull.size() == 4);
    CHECK(signed_area(hull) == doctest::Approx(4.0));
  }

  TEST_CASE("min area rect of rectangle corners is exact") {
    const std::vector<Point2> axis{{1, 1}, {5, 1}, {5, 3}, {1, 3}};
    const auto r = min_area_rect(axis);
    CHECK(r.area() == doctest::Approx(8.0));
    CHECK(r.cx() == doctest::Approx(3.0));
    CHECK(r.cy() == doctest::Approx(2.0));
    CHECK(r.theta() == doctest::Approx(-pi / 2));

    const auto src = OrientedRect::make(7, -3, 10, 4, -pi / 6);
    const auto c = corners(src);
    const auto fit = min_area_rect(c);
    CHECK(std::abs(fit.area() - 40.0) < 1e-9);
    CHECK(fit.theta() == doctest::Approx(-pi / 6));
    CHECK(fit.w() == doctest::Approx(10.0));

    CHECK_THROWS_AS(min_area_rect(std::vector<Point2>{{0, 0}, {1, 1}, {2, 2}}),
                    DegenerateBoxError);
  }

  TEST_CASE("min area rect beats a brute-force angle sweep") {
    fit::Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Point2> cloud;
      for (int i = 0; i < 10; ++i) {
        cloud.push_back({rng.uniform(0, 100), rng.uniform(0, 50)});
      }
      const auto r = min_area_rect(cloud);
      double best = 1e300;
      for (int k = 0; k < 3600; ++k) {
        const double t = k * pi / 3600.0;
        const double c = std::cos(t), s = std::sin(t);
        double u0 = 1e300, u1 = -1e300, v0 = 1e300, v1 = -1e300;
        for (const auto& p : cloud) {
          const double u = c * p.x + s * p.y;
          const double v = -s * p.x + c * p.y;
          u0 = std::min(u0, u);
          u1 = std::max(u1, u);
          v0 = std::min(v0, v);
          v1 = std::max(v1, v);
        }
        best = std::min(best, (u1 - u0) * (v1 - v0));
      }
      CHECK(r.area() <= best + 1e-9);
      CHECK(r.area() <= aabb_of(cloud).area() + 1e-9);
      // every point lies in the rectangle
      const auto poly = to_polygon(r);
      for (const auto& p : cloud) {
        const auto grown = OrientedRect::make(r.cx(), r.cy(), r.w() + 1e-6,
                                              r.h() + 1e-6, r.theta());
        CHECK(testing::contains(corners(grown), p));
      }
      CHECK(poly.size() == 4);
    }
  }

  TEST_CASE("axis-aligned bounds of a rotated rect") {
    const auto r = OrientedRect::make(0, 0, 2, 2, -pi / 4);
    const auto box = aabb_of(r);
    CHECK(box.w == doctest::Approx(2 * std::sqrt(2.0)));
    CHECK(box.h == doctest::Approx(2 * std::sqrt(2.0)));
  }
}
