// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

#include "arpbox/loss.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "arpbox/errors.hpp"

namespace arpbox::loss {

namespace {

void check_loss_box(const repr::ArpBox& box) {
  for (double v : box.params()) {
    if (!std::isfinite(v)) throw InvalidBoxError("box has non-finite values");
  }
  if (!(box.w > 0.0) || !(box.h > 0.0)) {
    throw DegenerateBoxError("box needs w > 0 and h > 0");
  }
}

double guarded_ratio(double num, double den) {
  return num / std::max(den, repr::kDenEps);
}

// Shape compared by the rotated IoU option: the decoded parallelogram
// for oriented boxes, the circumscribed box otherwise.
geom::ConvexPolygon comparison_shape(const repr::ArpBox& box,
                                     double lambda_thr) {
  if (repr::obliquity_label(box.lambda1, lambda_thr) ==
      repr::ObliquityLabel::OBB) {
    try {
      return geom::to_polygon(repr::decode_vertices(box));
    } catch (const DomainError&) {
    }
  }
  return geom::to_polygon(box.hbox());
}

// Squared center distance over the squared diagonal of the enclosing box.
double center_distance_term(const geom::HBox& a, const geom::HBox& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double cw = std::max(a.right(), b.right()) - std::min(a.left(), b.left());
  const double ch =
      std::max(a.bottom(), b.bottom()) - std::min(a.top(), b.top());
  return guarded_ratio(dx * dx + dy * dy, cw * cw + ch * ch);
}

}  // namespace

void LossBreakdown::add(std::string name, double value) {
  terms.push_back({std::move(name), value});
  total = 0.0;
  for (const auto& t : terms) total += t.value;
}

double LossBreakdown::term(std::string_view name) const {
  for (const auto& t : terms) {
    if (t.name == name) return t.value;
  }
  return 0.0;
}

double smooth_l1(double x) {
  const double ax = std::abs(x);
  return ax < 1.0 ? 0.5 * x * x : ax - 0.5;
}

double ciou_loss(const geom::HBox& a, const geom::HBox& b) {
  if (!(a.w > 0.0 && a.h > 0.0 && b.w > 0.0 && b.h > 0.0)) {
    throw DegenerateBoxError("CIoU needs boxes with positive size");
  }
  const double iou = geom::hbox_iou(a, b);
  const double dist = center_distance_term(a, b);
  const double dv = std::atan(b.w / b.h) - std::atan(a.w / a.h);
  const double v = 4.0 / (std::numbers::pi * std::numbers::pi) * dv * dv;
  const double alpha = v / ((1.0 - iou) + v + kCiouEps);
  return 1.0 - iou + dist + alpha * v;
}

LossBreakdown box_loss_smooth(const BoxPair& pair) {
  check_loss_box(pair.pred);
  check_loss_box(pair.target);
  LossBreakdown out;
  out.add("ciou", ciou_loss(pair.pred.hbox(), pair.target.hbox()));
  const double ratios =
      smooth_l1(pair.pred.lambda1 - pair.target.lambda1) +
      smooth_l1(pair.pred.lambda2 - pair.target.lambda2) +
      smooth_l1(pair.pred.lambda3 - pair.target.lambda3);
  out.add("smooth_l1", ratios);
  return out;
}

LossBreakdown r_eiou_loss(const BoxPair& pair, const REIoUOptions& opts) {
  check_loss_box(pair.pred);
  check_loss_box(pair.target);
  const auto b = pair.pred.hbox();
  const auto bt = pair.target.hbox();

  double iou = 0.0;
  if (opts.iou == IouKind::Horizontal) {
    iou = geom::hbox_iou(b, bt);
  } else {
    iou = geom::rotated_iou(comparison_shape(pair.pred, opts.lambda_thr),
                            comparison_shape(pair.target, opts.lambda_thr));
  }

  const auto p = repr::parallelograms(pair.pred, opts.lambda_thr);
  const auto pt = repr::parallelograms(pair.target, opts.lambda_thr);
  const double c_wpa = std::max(p.pa_right, pt.pa_right) -
                       std::min(p.pa_left, pt.pa_left);
  const double c_hpb = std::max(p.pb_bottom, pt.pb_bottom) -
                       std::min(p.pb_top, pt.pb_top);
  const double dw = p.w_pa - pt.w_pa;
  const double dh = p.h_pb - pt.h_pb;

  LossBreakdown out;
  out.add("iou", 1.0 - iou);
  out.add("distance", center_distance_term(b, bt));
  out.add("area_ratio", guarded_ratio(dw * dw, c_wpa * c_wpa) +
                            guarded_ratio(dh * dh, c_hpb * c_hpb));
  return out;
}

LossBreakdown box_loss(const BoxPair& pair, BoxLossKind kind,
                       const REIoUOptions& opts) {
  return kind == BoxLossKind::REIoU ? r_eiou_loss(pair, opts)
                                    : box_loss_smooth(pair);
}

double bce_obliquity(int alpha, double p) {
  const double q = std::clamp(p, kProbEps, 1.0 - kProbEps);
  return alpha != 0 ? -std::log(q) : -std::log(1.0 - q);
}

LossBreakdown combine_multitask(std::span<const SampleLosses> samples,
                                const LossWeights& weights) {
  double box = 0.0, obj = 0.0, cls = 0.0, alpha = 0.0;
  for (const auto& s : samples) {
    if (!s.responsible) continue;
    box += s.box;
    obj += s.obj;
    cls += s.cls;
    alpha += s.alpha;
  }
  LossBreakdown out;
  out.add("box", weights.box * box);
  out.add("obj", weights.obj * obj);
  out.add("cls", weights.cls * cls);
  out.add("alpha", weights.alpha * alpha);
  return out;
}

LossBreakdown multitask_loss(std::span<const Sample> samples,
                             const LossWeights& weights, BoxLossKind kind,
                             const ClassifierLoss& classifier,
                             const REIoUOptions& opts) {
  std::vector<SampleLosses> parts;
  parts.reserve(samples.size());
  for (const auto& s : samples) {
    SampleLosses l;
    l.responsible = s.responsible;
    if (s.responsible) {
      l.box = box_loss(s.box, kind, opts).total;
      l.obj = classifier(s.obj.label, s.obj.p);
      for (const auto& c : s.cls) l.cls += classifier(c.label, c.p);
      l.alpha = bce_obliquity(s.alpha.label, s.alpha.p);
    }
    parts.push_back(l);
  }
  return combine_multitask(parts, weights);
}

ParamVector numeric_gradient(const Objective& f, const ParamVector& at,
                             double step) {
  if (!(step > 0.0)) throw NumericError("finite-difference step must be > 0");
  ParamVector grad{};
  ParamVector probe = at;
  for (std::size_t i = 0; i < at.size(); ++i) {
    const double h = step * std::max(1.0, std::abs(at[i]));
    probe[i] = at[i] + h;
    const double up = f(probe);
    probe[i] = at[i] - h;
    const double down = f(probe);
    probe[i] = at[i];
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericError("objective is not finite near the evaluation point");
    }
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

ParamVector numeric_gradient(
    const std::function<double(const repr::ArpBox&)>& f,
    const repr::ArpBox& at, double step) {
  return numeric_gradient(
      [&f](const ParamVector& p) { return f(repr::ArpBox::from_params(p)); },
      at.params(), step);
}

}  // namespace arpbox::loss
