// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

#include "arpbox/fit.hpp"

#include <algorithm>
#include <array>
#include <utility>
#include <cmath>
#include <limits>
#include <numbers>

#include "arpbox/errors.hpp"
#include "arpbox/post.hpp"

namespace arpbox::fit {

namespace {

using loss::ParamVector;

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 40;
constexpr std::array<std::pair<std::size_t, std::size_t>, 2> kBlocks{
    {{0, 4}, {4, 7}}};

// Optimization happens in a frame scaled to the target so that a single
// learning rate suits boxes of any size: offsets in units of the target's
// long side, log sizes and log ratios. The ratios span orders of
// magnitude (lambda2 reaches tens for slender boxes), where raw values
// leave the normalized area term nearly flat.
struct Frame {
  double x, y, scale;

  ParamVector to_u(const repr::ArpBox& b) const {
    return {(b.x - x) / scale,      (b.y - y) / scale,
            std::log(b.w / scale),  std::log(b.h / scale),
            std::log(b.lambda1),    std::log(b.lambda2),
            std::log(b.lambda3)};
  }
  repr::ArpBox from_u(const ParamVector& u) const {
    return {x + scale * u[0],       y + scale * u[1],
            scale * std::exp(u[2]), scale * std::exp(u[3]),
            std::exp(u[4]),         std::exp(u[5]),
            std::exp(u[6])};
  }
};

}  // namespace

double Rng::uniform(double lo, double hi) {
  const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

double objective(const repr::ArpBox& pred, const repr::ArpBox& target,
                 const FitOptions& opts) {
  const loss::BoxPair pair{pred, target};
  if (opts.kind == loss::BoxLossKind::SmoothL1) {
    return loss::box_loss_smooth(pair).total;
  }
  return loss::r_eiou_loss(pair, {opts.lambda_thr, opts.iou})
             .total +
         loss::smooth_l1(pred.lambda1 - target.lambda1);
}

double final_iou(const repr::ArpBox& pred, const geom::OrientedRect& target,
                 double lambda_thr) {
  if (!(pred.w > 0.0 && pred.h > 0.0)) return 0.0;
  try {
    const auto shape = post::select_final({pred, 1.0, 0, 0.0}, lambda_thr);
    return geom::rotated_iou(post::final_region(shape),
                             geom::to_polygon(target));
  } catch (const DomainError&) {
    return 0.0;
  }
}

FitResult fit_box(const FitPair& pair, const FitOptions& opts) {
  const auto target = repr::encode_arp_or_hbb(pair.target);
  const Frame frame{target.x, target.y, std::max(target.w, target.h)};
  const auto f = [&](const ParamVector& u) {
    const auto box = frame.from_u(u);
    if (!repr::is_valid(box)) return std::numeric_limits<double>::infinity();
    return objective(box, target, opts);
  };

  ParamVector u = frame.to_u(pair.init);
  double fu = f(u);
  if (!std::isfinite(fu)) throw InvalidBoxError("starting box is not valid");

  FitResult out;
  const auto record = [&](int step) {
    out.trace.push_back(
        {step, fu, final_iou(frame.from_u(u), pair.target, opts.lambda_thr)});
  };
  record(0);

  for (int step = 1; step <= opts.steps; ++step) {
    ParamVector g{};
    try {
      g = loss::numeric_gradient(f, u, opts.fd_step);
    } catch (const NumericError&) {
      g = {};  // on the edge of the valid region; stay put
    }
    // The IoU term has a kink where the boxes coincide, which would
    // shrink a joint step to nothing; the ratios get their own search.
    for (const auto& [lo, hi] : kBlocks) {
      double gg = 0.0;
      for (std::size_t k = lo; k < hi; ++k) gg += g[k] * g[k];
      if (!(gg > 0.0) || !(opts.lr > 0.0)) continue;
      double t = opts.lr;
      for (int i = 0; i < kMaxHalvings; ++i, t *= 0.5) {
        ParamVector cand = u;
        for (std::size_t k = lo; k < hi; ++k) cand[k] -= t * g[k];
        const double fc = f(cand);
        if (std::isfinite(fc) && fc <= fu - kArmijo * t * gg) {
          u = cand;
          fu = fc;
          break;
        }
      }
    }
    record(step);
  }

  out.final_box = frame.from_u(u);
  out.final_loss = fu;
  out.final_iou = out.trace.back().iou;
  return out;
}

geom::OrientedRect random_rect(Rng& rng) {
  const double cx = rng.uniform(100.0, 900.0);
  const double cy = rng.uniform(100.0, 900.0);
  const double w = rng.uniform(10.0, 200.0);
  const double h = rng.uniform(10.0, 200.0);
  const double theta = rng.uniform(-std::numbers::pi / 2.0, 0.0);
  return geom::OrientedRect::make(cx, cy, w, h, theta);
}

FitPair random_pair(Rng& rng) {
  const auto target = random_rect(rng);
  const double side = std::max(target.w(), target.h());
  const double cx = target.cx() + rng.uniform(-0.3, 0.3) * side;
  const double cy = target.cy() + rng.uniform(-0.3, 0.3) * side;
  const double w = target.w() * std::exp(rng.uniform(-0.3, 0.3));
  const double h = target.h() * std::exp(rng.uniform(-0.3, 0.3));
  const double turn = rng.uniform(-20.0, 20.0) * std::numbers::pi / 180.0;
  const auto init =
      geom::OrientedRect::make(cx, cy, w, h, target.theta() + turn);
  return {target, repr::encode_arp_or_hbb(init)};
}

std::vector<FitPair> random_pairs(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FitPair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_pair(rng));
  return out;
}

}  // namespace arpbox::fit
