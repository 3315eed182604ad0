// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

// Box regression and multi-task losses over area-ratio boxes.

#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arpbox/geom.hpp"
#include "arpbox/repr.hpp"

namespace arpbox::loss {

inline constexpr double kCiouEps = 1e-9;
inline constexpr double kProbEps = 1e-7;

struct BoxPair {
  repr::ArpBox pred;
  repr::ArpBox target;
};

struct LossWeights {
  double box = 0.05;
  double obj = 0.7;
  double cls = 0.3;
  double alpha = 0.8;
};

struct LossTerm {
  std::string name;
  double value = 0.0;
};

/// Named loss components; `total` is their sum in insertion order.
struct LossBreakdown {
  double total = 0.0;
  std::vector<LossTerm> terms;

  void add(std::string name, double value);
  /// Value of the named term, or 0 when absent.
  double term(std::string_view name) const;
};

enum class BoxLossKind { SmoothL1, REIoU };
enum class IouKind { Horizontal, Rotated };

struct REIoUOptions {
  double lambda_thr = repr::kDefaultLambdaThr;
  // The IoU term compares the circumscribed boxes by default; Rotated
  // compares the decoded shapes instead.
  IouKind iou = IouKind::Horizontal;
};

double smooth_l1(double x);

double ciou_loss(const geom::HBox& a, const geom::HBox& b);

/// CIoU on the circumscribed boxes plus smooth-L1 on each area ratio.
/// Terms: "ciou", "smooth_l1".
LossBreakdown box_loss_smooth(const BoxPair& pair);

/// Terms: "iou", "distance", "area_ratio".
LossBreakdown r_eiou_loss(const BoxPair& pair, const REIoUOptions& opts = {});

LossBreakdown box_loss(const BoxPair& pair, BoxLossKind kind,
                       const REIoUOptions& opts = {});

/// Binary cross-entropy with p clamped to [kProbEps, 1 - kProbEps].
double bce_obliquity(int alpha, double p);

struct LabeledProb {
  int label = 0;
  double p = 0.5;
};

struct Sample {
  bool responsible = false;
  BoxPair box;
  LabeledProb obj;
  std::vector<LabeledProb> cls;
  LabeledProb alpha;
};

/// Per-sample component losses, already evaluated.
struct SampleLosses {
  bool responsible = false;
  double box = 0.0;
  double obj = 0.0;
  double cls = 0.0;
  double alpha = 0.0;
};

using ClassifierLoss = std::function<double(int label, double p)>;

/// Weighted sum over responsible samples. Terms: "box", "obj", "cls",
/// "alpha", each already multiplied by its weight. Summation runs in
/// sample order.
LossBreakdown combine_multitask(std::span<const SampleLosses> samples,
                                const LossWeights& weights);

/// Evaluates each component and combines them. `classifier` scores the
/// objectness and class predictions (focal loss or anything else can be
/// plugged in); the obliquity term always uses bce_obliquity.
LossBreakdown multitask_loss(std::span<const Sample> samples,
                             const LossWeights& weights, BoxLossKind kind,
                             const ClassifierLoss& classifier = bce_obliquity,
                             const REIoUOptions& opts = {});

using ParamVector = std::array<double, 7>;
using Objective = std::function<double(const ParamVector&)>;

/// Central differences; coordinate i uses step * max(1, |x_i|). Throws
/// NumericError when an evaluation is not finite.
ParamVector numeric_gradient(const Objective& f, const ParamVector& at,
                             double step);
ParamVector numeric_gradient(const std::function<double(const repr::ArpBox&)>& f,
                             const repr::ArpBox& at, double step);

}  // namespace arpbox::loss
