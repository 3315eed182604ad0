// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

#include <numbers>

#include "arpbox/fit.hpp"
#include "doctest.h"

using namespace arpbox;
using namespace arpbox::fit;

TEST_SUITE("fit") {
  TEST_CASE("rng is reproducible and in range") {
    Rng a(9), b(9);
    for (int i = 0; i < 100; ++i) {
      const double x = a.uniform(-2, 3);
      CHECK(x == b.uniform(-2, 3));
      CHECK(x >= -2);
      CHECK(x < 3);
    }
  }

  TEST_CASE("random pairs follow the protocol") {
    const auto pairs = random_pairs(50, 7);
    REQUIRE(pairs.size() == 50);
    const auto again = random_pairs(50, 7);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& t = pairs[i].target;
      CHECK(t.cx() >= 100);
      CHECK(t.cx() <= 900);
      CHECK(t.w() >= 10);
      CHECK(t.h() <= 200);
      CHECK(repr::is_valid(pairs[i].init));
      CHECK(again[i].init.x == pairs[i].init.x);
      CHECK(again[i].target.theta() == t.theta());
    }
  }

  TEST_CASE("starting at the target gives a zero trace") {
    for (const auto& p : random_pairs(5, 3)) {
      const FitPair at{p.target, repr::encode_arp_or_hbb(p.target)};
      FitOptions opts;
      opts.steps = 20;
      const auto r = fit_box(at, opts);
      REQUIRE(r.trace.size() == 21);
      for (const auto& s : r.trace) CHECK(s.loss == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(r.final_iou == doctest::Approx(1.0));
    }
  }

  TEST_CASE("zero learning rate keeps the trace flat") {
    const auto p = random_pairs(1, 4)[0];
    FitOptions opts;
    opts.steps = 10;
    opts.lr = 0.0;
    const auto r = fit_box(p, opts);
    for (const auto& s : r.trace) CHECK(s.loss == r.trace[0].loss);
    CHECK(r.final_box.x == p.init.x);
  }

  TEST_CASE("loss never increases and runs repeat exactly") {
    for (auto kind : {loss::BoxLossKind::REIoU, loss::BoxLossKind::SmoothL1}) {
      for (const auto& p : random_pairs(5, 12)) {
        FitOptions opts;
        opts.steps = 60;
        opts.kind = kind;
        const auto r = fit_box(p, opts);
        for (std::size_t i = 1; i < r.trace.size(); ++i) {
          CHECK(r.trace[i].loss <= r.trace[i - 1].loss);
        }
        CHECK(r.final_loss < r.trace[0].loss);
        const auto s = fit_box(p, opts);
        CHECK(s.final_loss == r.final_loss);
        CHECK(s.final_iou == r.final_iou);
      }
    }
  }

  TEST_CASE("objective adds the obliquity term to r-eiou") {
    const repr::ArpBox t{0, 0, 4, 2, 0.5, 1.1, 1.3};
    repr::ArpBox p = t;
    p.lambda1 = 0.6;
    FitOptions opts;
    CHECK(objective(p, t, opts) == doctest::Approx(0.5 * 0.1 * 0.1));
    opts.kind = loss::BoxLossKind::SmoothL1;
    CHECK(objective(p, t, opts) == doctest::Approx(0.5 * 0.1 * 0.1));
  }

  TEST_CASE("final iou against the target") {
    const auto target = geom::OrientedRect::make(50, 50, 30, 10, -0.6);
    CHECK(final_iou(repr::encode_arp(target), target, 0.95) == doctest::Approx(1.0));
    const repr::ArpBox far{500, 500, 10, 10, 0.5, 1, 1};
    CHECK(final_iou(far, target, 0.95) == 0.0);
  }
}
