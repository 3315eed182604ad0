// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "arpbox/errors.hpp"
#include "arpbox/repr.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace arpbox;
using namespace arpbox::repr;
using geom::Point2;
using std::numbers::pi;

namespace {

// 4 x 2 box cut at h1 = 1.5 and w1 = (4 + sqrt(13)) / 2; values from
// tests/oracles/arp_fixture.py (shoelace areas of the explicit polygons).
constexpr Point2 kA{-2.0, 0.5};
constexpr Point2 kB{1.8027756377319948, -1.0};
constexpr Point2 kC{2.0, -0.5};
constexpr Point2 kD{-1.8027756377319948, 1.0};
constexpr double kL1 = 0.27465304528350065;
constexpr double kL2 = 1.0986121811340026;
constexpr double kL3 = 5.570367516975996;
constexpr double kK1 = 3.0;
constexpr double kK2 = 19.281470067903985;
constexpr double kWpa = 4.39444872453601;
constexpr double kHpb = 11.140735033951993;

geom::OrientedRect fixture_rect() {
  return geom::OrientedRect::make(0, 0, geom::norm(kB - kA), geom::norm(kC - kB),
                                  std::atan2(kB.y - kA.y, kB.x - kA.x));
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_SUITE("repr") {
  TEST_CASE("45 degree square") {
    const auto rect = geom::OrientedRect::make(0, 0, std::sqrt(2.0),
                                               std::sqrt(2.0), -pi / 4);
    const auto box = encode_arp(rect);
    CHECK(box.w == doctest::Approx(2.0));
    CHECK(box.h == doctest::Approx(2.0));
    CHECK(box.lambda1 == doctest::Approx(0.5));
    CHECK(box.lambda2 == doctest::Approx(1.0));
    CHECK(box.lambda3 == doctest::Approx(1.0));
    const auto k = k_ratios(box);
    CHECK(k.k1 == doctest::Approx(1.0));
    CHECK(k.k2 == doctest::Approx(1.0));

    const auto q = decode_vertices({0, 0, 2, 2, 0.5, 1, 1});
    const Point2 want[4] = {{-1, 0}, {0, -1}, {1, 0}, {0, 1}};
    for (int i = 0; i < 4; ++i) {
      CHECK(q.v[i].x == doctest::Approx(want[i].x));
      CHECK(q.v[i].y == doctest::Approx(want[i].y));
    }
  }

  TEST_CASE("oblique fixture encodes to the measured ratios") {
    const auto box = encode_arp(fixture_rect());
    CHECK(box.w == doctest::Approx(4.0));
    CHECK(box.h == doctest::Approx(2.0));
    CHECK(rel(box.lambda1, kL1) < 1e-9);
    CHECK(rel(box.lambda2, kL2) < 1e-9);
    CHECK(rel(box.lambda3, kL3) < 1e-9);
    const auto k = k_ratios(box);
    CHECK(rel(k.k1, kK1) < 1e-9);
    CHECK(rel(k.k2, kK2) < 1e-9);

    const auto q = decode_vertices(box);
    const Point2 want[4] = {kA, kB, kC, kD};
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(q.v[i].x - want[i].x) < 1e-9);
      CHECK(std::abs(q.v[i].y - want[i].y) < 1e-9);
    }
    CHECK(is_rectangular(q));
  }

  TEST_CASE("parallelogram dimensions and extents") {
    const auto box = encode_arp(fixture_rect());
    const auto [w_pa, h_pb] = parallelogram_dims(box);
    CHECK(rel(w_pa, kWpa) < 1e-9);
    CHECK(rel(h_pb, kHpb) < 1e-9);
    const auto [rw, rh] = parallelogram_dims(fixture_rect());
    CHECK(rel(rw, kWpa) < 1e-9);
    CHECK(rel(rh, kHpb) < 1e-9);

    // x-extent of P_a is W + 2 k1 w2, y-extent of P_b is H + 2 k2 h2
    const double w2 = 4.0 - kB.x - 2.0;
    const double h2 = 0.5;
    const auto p = parallelograms(box);
    CHECK(p.pa_right - p.pa_left == doctest::Approx(4.0 + 2 * kK1 * w2));
    CHECK(p.pb_bottom - p.pb_top == doctest::Approx(2.0 + 2 * kK2 * h2));
    CHECK(p.pa_left + p.pa_right == doctest::Approx(0.0));

    // boxes labeled horizontal use the bounding box itself
    const ArpBox flat{5, 5, 10, 4, 0.97, 1.2, 1.3};
    const auto [fw, fh] = parallelogram_dims(flat);
    CHECK(fw == 10);
    CHECK(fh == 4);
    const auto fp = parallelograms(flat);
    CHECK(fp.pa_right - fp.pa_left == doctest::Approx(10.0));
  }

  TEST_CASE("parallelogram extents are continuous where ratios stop inverting") {
    // D = (1 - l1)(l2 - l1) + (1 - l2)(l3 - l1) crosses zero in l3; the
    // extent has a square-root slope there, so compare relative changes
    ArpBox box{0, 0, 100, 50, 0.85, 20.0, 0.0};
    const double l3_zero =
        box.lambda1 + (1 - box.lambda1) * (box.lambda2 - box.lambda1) /
                          (box.lambda2 - 1);
    box.lambda3 = l3_zero - 1e-12;
    const auto outside = parallelograms(box);
    box.lambda3 = l3_zero + 1e-12;
    const auto inside = parallelograms(box);
    const double span = inside.pa_right - inside.pa_left;
    CHECK(span > 1000.0);
    CHECK(std::abs(inside.pa_right - outside.pa_right) < 1e-3 * span);
    CHECK(std::abs(inside.pb_bottom - outside.pb_bottom) <
          1e-3 * (inside.pb_bottom - inside.pb_top));
  }

  TEST_CASE("near-horizontal rectangles") {
    const auto axis = geom::OrientedRect::make(10, 10, 8, 4, -pi / 2);
    CHECK_THROWS_AS(encode_arp(axis), NearHorizontalError);
    const auto fallback = encode_arp_or_hbb(axis);
    CHECK(fallback.lambda1 == doctest::Approx(1.0));
    CHECK(fallback.lambda2 == 1.0);
    CHECK(fallback.lambda3 == 1.0);
    CHECK(fallback.w == doctest::Approx(4.0));
    CHECK(fallback.h == doctest::Approx(8.0));

    const auto tiny = geom::OrientedRect::make(0, 0, 8, 4, -1e-9);
    CHECK_THROWS_AS(encode_arp(tiny), NearHorizontalError);
    CHECK_THROWS_AS(k_ratios({0, 0, 4, 2, 1, 1, 1}), NearHorizontalError);
  }

  TEST_CASE("validity") {
    CHECK(is_valid({0, 0, 1, 1, 0.5, 1, 1}));
    CHECK_FALSE(is_valid({0, 0, 1, 1, 1.2, 1, 1}));
    CHECK_FALSE(is_valid({0, 0, 0, 1, 0.5, 1, 1}));
    CHECK_FALSE(is_valid({0, 0, 1, 1, 0.5, -1, 1}));
    CHECK_FALSE(is_valid({0, NAN, 1, 1, 0.5, 1, 1}));
    CHECK_THROWS_AS(decode_vertices({0, 0, 1, 1, 1.5, 1, 1}), InvalidBoxError);
  }

  TEST_CASE("inconsistent ratios decode to a parallelogram") {
    auto box = encode_arp(fixture_rect());
    box.lambda2 -= 0.05;
    const auto q = decode_vertices(box);
    CHECK_FALSE(is_rectangular(q));
    CHECK(q.a().x + q.c().x == doctest::Approx(q.b().x + q.d().x));
    CHECK(q.a().y + q.c().y == doctest::Approx(q.b().y + q.d().y));
  }

  TEST_CASE("obliquity label") {
    CHECK(obliquity_label(0.94, 0.95) == ObliquityLabel::OBB);
    CHECK(obliquity_label(0.95, 0.95) == ObliquityLabel::HBB);
    CHECK(obliquity_factor(geom::OrientedRect::make(0, 0, std::sqrt(2.0),
                                                    std::sqrt(2.0), -pi / 4)) ==
          doctest::Approx(0.5));
  }

  TEST_CASE("vertex order") {
    // axis-aligned tie: top-left, top-right, bottom-right, bottom-left
    const auto q = rect_to_quad(geom::OrientedRect::make(5, 5, 4, 2, -pi / 2));
    CHECK(q.v[0].x == doctest::Approx(4));
    CHECK(q.v[0].y == doctest::Approx(3));
    CHECK(q.v[1].x == doctest::Approx(6));
    CHECK(q.v[1].y == doctest::Approx(3));
    CHECK(q.v[2].x == doctest::Approx(6));
    CHECK(q.v[2].y == doctest::Approx(7));
    CHECK(q.v[3].x == doctest::Approx(4));
    CHECK(q.v[3].y == doctest::Approx(7));

    // any rotation or reversal of the input lands on the same order
    const std::array<Point2, 4> pts{kC, kB, kA, kD};
    const auto c = canonical_quad(pts);
    CHECK(c.a() == kA);
    CHECK(c.b() == kB);
    CHECK(c.c() == kC);
    CHECK(c.d() == kD);
  }

  TEST_CASE("round trip on random rectangles") {
    fit::Rng rng(3);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
      const auto r = testing::random_rect(rng, 2, 500);
      ArpBox box;
      try {
        box = encode_arp(r);
      } catch (const NearHorizontalError&) {
        continue;
      }
      CHECK(box.lambda2 >= box.lambda1);
      CHECK(box.lambda3 >= box.lambda1);
      CHECK(box.lambda1 == doctest::Approx(obliquity_factor(r)));
      if (box.lambda1 > 0.98) continue;
      ++checked;
      const auto got = decode_vertices(box);
      const auto want = rect_to_quad(r);
      double err = 0.0;
      for (int k = 0; k < 4; ++k) {
        err = std::max(err, geom::norm(got.v[k] - want.v[k]));
      }
      CHECK(err < 1e-6 * std::max(r.w(), r.h()));
      const auto back = quad_to_rect(got);
      CHECK(back.area() == doctest::Approx(r.area()).epsilon(1e-9));
    }
    CHECK(checked > 1500);
  }
}
