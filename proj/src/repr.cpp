// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

#include "arpbox/repr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "arpbox/errors.hpp"

namespace arpbox::repr {

using geom::Point2;
using geom::QuadBox;

bool is_valid(const ArpBox& box) {
  for (double v : box.params()) {
    if (!std::isfinite(v)) return false;
  }
  return box.w > 0.0 && box.h > 0.0 && box.lambda1 > 0.0 &&
         box.lambda1 <= 1.0 && box.lambda2 > 0.0 && box.lambda3 > 0.0;
}

void check_valid(const ArpBox& box) {
  if (!is_valid(box)) {
    throw InvalidBoxError(
        "area-ratio box needs finite values, w, h > 0, lambda1 in (0, 1] "
        "and positive lambda2, lambda3");
  }
}

ArpBox encode_arp(const geom::OrientedRect& rect) {
  // Canonical theta lies in [-pi/2, 0), so cos >= 0 and -sin > 0. The
  // left vertex sits w*|sin| below the top edge and the top vertex
  // w*cos right of the left edge.
  const double c = std::cos(rect.theta());
  const double s = -std::sin(rect.theta());
  const double w1 = rect.w() * c;
  const double h1 = rect.w() * s;
  const double w2 = rect.h() * s;
  const double h2 = rect.h() * c;
  const double box_w = w1 + w2;
  const double box_h = h1 + h2;

  const double tol = kAxisEps * std::max(box_w, box_h);
  if (std::min({w1, w2, h1, h2}) < tol) {
    throw NearHorizontalError(
        "rectangle is axis-aligned within tolerance; use the horizontal box");
  }

  const double k1 = h1 / h2;
  const double k2 = w1 / w2;
  const double s_h = box_w * box_h;
  const double s2 = 0.5 * w2 * h2;
  const double s1 = k1 * k2 * s2;
  const double s3 = k1 * k1 * s2;
  const double s4 = k2 * k2 * s2;
  const double s_o = s_h - 2.0 * (s1 + s2);
  const double s_a = s_o + 2.0 * (s1 + s3);
  const double s_b = s_o + 2.0 * (s1 + s4);
  if (std::abs(s_o - rect.area()) > 1e-9 * s_h) {
    throw std::logic_error("area decomposition does not reproduce w * h");
  }
  return {rect.cx(), rect.cy(), box_w,     box_h,
          s_o / s_h, s_a / s_h, s_b / s_h};
}

double obliquity_factor(const geom::OrientedRect& rect) {
  const auto box = geom::aabb_of(rect);
  return std::min(1.0, rect.area() / box.area());
}

ArpBox encode_arp_or_hbb(const geom::OrientedRect& rect) {
  try {
    return encode_arp(rect);
  } catch (const NearHorizontalError&) {
    const auto box = geom::aabb_of(rect);
    return {box.x, box.y, box.w, box.h, obliquity_factor(rect), 1.0, 1.0};
  }
}

KRatios k_ratios(const ArpBox& box) {
  const double l1 = box.lambda1;
  const double l2 = box.lambda2;
  const double l3 = box.lambda3;
  const double den = (1.0 - l1) * (l2 - l1) + (1.0 - l2) * (l3 - l1);
  if (!(den > kDenEps)) {
    throw NearHorizontalError(
        "area ratios are too close to horizontal to recover the vertices");
  }
  const double root = std::sqrt(den);
  return {std::abs(l2 - l1) / root, std::abs(l3 - l1) / root};
}

QuadBox decode_vertices(const ArpBox& box) {
  check_valid(box);
  const auto [k1, k2] = k_ratios(box);
  const double h1 = k1 * box.h / (1.0 + k1);
  const double w1 = k2 * box.w / (1.0 + k2);
  const double left = box.x - 0.5 * box.w;
  const double right = box.x + 0.5 * box.w;
  const double top = box.y - 0.5 * box.h;
  const double bottom = box.y + 0.5 * box.h;
  return {{Point2{left, top + h1}, Point2{left + w1, top},
           Point2{right, bottom - h1}, Point2{right - w1, bottom}}};
}

bool is_rectangular(const QuadBox& quad, double tol) {
  for (std::size_t i = 0; i < 4; ++i) {
    const Point2 e1 = quad.v[(i + 1) % 4] - quad.v[i];
    const Point2 e2 = quad.v[(i + 2) % 4] - quad.v[(i + 1) % 4];
    const double n = geom::norm(e1) * geom::norm(e2);
    if (n == 0.0) return false;
    if (std::abs(geom::dot(e1, e2)) / n > tol) return false;
  }
  return true;
}

ObliquityLabel obliquity_label(double lambda1, double lambda_thr) {
  return lambda1 < lambda_thr ? ObliquityLabel::OBB : ObliquityLabel::HBB;
}

std::pair<double, double> parallelogram_dims(const ArpBox& box,
                                             double lambda_thr) {
  if (obliquity_label(box.lambda1, lambda_thr) == ObliquityLabel::HBB) {
    return {box.w, box.h};
  }
  return {box.lambda2 * box.w, box.lambda3 * box.h};
}

std::pair<double, double> parallelogram_dims(const geom::OrientedRect& rect,
                                             double lambda_thr) {
  if (obliquity_label(obliquity_factor(rect), lambda_thr) ==
      ObliquityLabel::HBB) {
    const auto box = geom::aabb_of(rect);
    return {box.w, box.h};
  }
  return parallelogram_dims(encode_arp(rect), lambda_thr);
}

Parallelograms parallelograms(const ArpBox& box, double lambda_thr) {
  const auto [w_pa, h_pb] = parallelogram_dims(box, lambda_thr);
  // Horizontal run of P_a's slanted sides over the box height, and the
  // vertical run of P_b's slanted sides over the box width. Written as
  // (sqrt(D) + |l2 - l1|) / (sqrt(D) + |l3 - l1|), which equals
  // (1 + k1) / (1 + k2) and stays finite and continuous when the ratios
  // stop being invertible (D <= 0).
  double run_a = 0.0;
  double run_b = 0.0;
  if (obliquity_label(box.lambda1, lambda_thr) == ObliquityLabel::OBB) {
    const double l1 = box.lambda1;
    const double den = (1.0 - l1) * (box.lambda2 - l1) +
                       (1.0 - box.lambda2) * (box.lambda3 - l1);
    const double root = std::sqrt(std::max(den, 0.0));
    const double a = root + std::abs(box.lambda2 - l1);
    const double b = root + std::abs(box.lambda3 - l1);
    if (a > kDenEps && b > kDenEps) {
      run_a = box.w * a / b;
      run_b = box.h * b / a;
    }
  }
  const double half_a = 0.5 * (w_pa + run_a);
  const double half_b = 0.5 * (h_pb + run_b);
  return {w_pa,          h_pb,          box.x - half_a,
          box.x + half_a, box.y - half_b, box.y + half_b};
}

QuadBox canonical_quad(const std::array<Point2, 4>& pts) {
  std::array<Point2, 4> p = pts;
  if (geom::signed_area(p) < 0.0) std::reverse(p.begin(), p.end());
  double scale = 1.0;
  for (const auto& q : p) {
    scale = std::max({scale, std::abs(q.x), std::abs(q.y)});
  }
  const double tol = 1e-9 * scale;
  double min_x = p[0].x;
  for (const auto& q : p) min_x = std::min(min_x, q.x);
  std::size_t start = 4;
  for (std::size_t i = 0; i < 4; ++i) {
    if (p[i].x - min_x > tol) continue;
    if (start == 4 || p[i].y < p[start].y) start = i;
  }
  QuadBox out;
  for (std::size_t i = 0; i < 4; ++i) out.v[i] = p[(start + i) % 4];
  return out;
}

QuadBox rect_to_quad(const geom::OrientedRect& rect) {
  return canonical_quad(geom::corners(rect));
}

geom::OrientedRect quad_to_rect(const QuadBox& quad) {
  return geom::min_area_rect(quad.v);
}

}  // namespace arpbox::repr
