// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

// Gradient descent on a single box with finite-difference gradients. A
// desk-scale probe of how easily each box loss can be minimized.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "arpbox/geom.hpp"
#include "arpbox/loss.hpp"
#include "arpbox/repr.hpp"

namespace arpbox::fit {

/// Seeded uniform draws that do not depend on the standard library's
/// distribution implementations, so runs repeat across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi);

 private:
  std::mt19937_64 engine_;
};

struct FitOptions {
  int steps = 500;
  double lr = 0.05;
  double fd_step = 1e-5;
  loss::BoxLossKind kind = loss::BoxLossKind::REIoU;
  double lambda_thr = repr::kDefaultLambdaThr;
  loss::IouKind iou = loss::IouKind::Horizontal;
};

struct FitPair {
  geom::OrientedRect target;
  repr::ArpBox init;
};

struct FitStep {
  int step = 0;
  double loss = 0.0;
  double iou = 0.0;
};

struct FitResult {
  std::vector<FitStep> trace;  // step 0 is the starting point
  repr::ArpBox final_box;
  double final_loss = 0.0;
  double final_iou = 0.0;
};

/// Loss minimized by the fit. The R-EIoU objective adds smooth-L1 on
/// lambda1, which the IoU and parallelogram terms leave unconstrained.
double objective(const repr::ArpBox& pred, const repr::ArpBox& target,
                 const FitOptions& opts);

/// Rotated IoU between the shape the box would be reported as and the
/// target rectangle.
double final_iou(const repr::ArpBox& pred, const geom::OrientedRect& target,
                 double lambda_thr);

FitResult fit_box(const FitPair& pair, const FitOptions& opts = {});

geom::OrientedRect random_rect(Rng& rng);
/// Target plus a perturbed starting box: center shifted by up to 0.3 of
/// the long side, sizes scaled by up to e^0.3, angle turned up to 20 deg.
FitPair random_pair(Rng& rng);
std::vector<FitPair> random_pairs(std::size_t n, std::uint64_t seed);

}  // namespace arpbox::fit
