// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

// Area-ratio box representation.
//
// An oriented rectangle is described by its circumscribed axis-aligned
// box (x, y, w, h) and three area ratios against that box:
//
//   lambda1 = S_o / S_h   (the rectangle itself)
//   lambda2 = S_a / S_h   (parallelogram P_a: the strip between the two
//                          slanted edges parallel to the edge leaving the
//                          top vertex to the right, cut by the box's
//                          horizontal sides)
//   lambda3 = S_b / S_h   (parallelogram P_b: the same strip cut by the
//                          box's vertical sides)
//
// The rectangle touches the box at a = (L, T + h1), b = (L + w1, T),
// c = (R, B - h1), d = (R - w1, B). The corner triangles give
// k1 = h1 / h2 and k2 = w1 / w2 (h2 = h - h1, w2 = w - w1), and the
// ratios can be inverted to recover k1, k2 and therefore the vertices.

#pragma once

#include <array>
#include <utility>

#include "arpbox/geom.hpp"

namespace arpbox::repr {

// Relative tilt below which encoding refuses a box as near-horizontal.
inline constexpr double kAxisEps = 1e-6;
// Guard for the denominator of the k-ratio inversion.
inline constexpr double kDenEps = 1e-12;
inline constexpr double kDefaultLambdaThr = 0.95;

struct ArpBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;

  geom::HBox hbox() const { return {x, y, w, h}; }
  std::array<double, 7> params() const {
    return {x, y, w, h, lambda1, lambda2, lambda3};
  }
  static ArpBox from_params(const std::array<double, 7>& p) {
    return {p[0], p[1], p[2], p[3], p[4], p[5], p[6]};
  }
};

struct KRatios {
  double k1 = 0.0;
  double k2 = 0.0;
};

enum class ObliquityLabel { OBB, HBB };

/// Finite values, w, h > 0, lambda1 in (0, 1], lambda2, lambda3 > 0.
bool is_valid(const ArpBox& box);
/// Throws InvalidBoxError when !is_valid(box).
void check_valid(const ArpBox& box);

/// Throws NearHorizontalError when any of h1, h2, w1, w2 falls below
/// kAxisEps * max(w, h) of the circumscribed box.
ArpBox encode_arp(const geom::OrientedRect& rect);

/// Like encode_arp, but a near-horizontal rectangle becomes its
/// circumscribed box with lambda2 = lambda3 = 1 (both parallelograms
/// collapse onto the box) and the true lambda1.
ArpBox encode_arp_or_hbb(const geom::OrientedRect& rect);

/// Area ratio of a rectangle to its circumscribed box; defined for every
/// rectangle, including axis-aligned ones.
double obliquity_factor(const geom::OrientedRect& rect);

KRatios k_ratios(const ArpBox& box);

/// Always a parallelogram; a rectangle only when the ratios are mutually
/// consistent (see is_rectangular).
geom::QuadBox decode_vertices(const ArpBox& box);

bool is_rectangular(const geom::QuadBox& quad, double tol = 1e-6);

ObliquityLabel obliquity_label(double lambda1, double lambda_thr);

/// Widths of P_a and heights of P_b: (lambda2 * w, lambda3 * h) for
/// oriented boxes, (w, h) for boxes labelled HBB.
std::pair<double, double> parallelogram_dims(
    const ArpBox& box, double lambda_thr = kDefaultLambdaThr);
std::pair<double, double> parallelogram_dims(
    const geom::OrientedRect& rect, double lambda_thr = kDefaultLambdaThr);

/// Both parallelograms as the loss sees them: their dimensions plus the
/// horizontal extent of P_a and the vertical extent of P_b. Boxes
/// labelled HBB collapse both parallelograms onto the circumscribed box.
/// When the ratios cannot be inverted the slant is unknown and the
/// extents reduce to the dimensions themselves, centered on the box.
struct Parallelograms {
  double w_pa = 0.0;
  double h_pb = 0.0;
  double pa_left = 0.0;
  double pa_right = 0.0;
  double pb_top = 0.0;
  double pb_bottom = 0.0;
};
Parallelograms parallelograms(const ArpBox& box,
                              double lambda_thr = kDefaultLambdaThr);

/// Orders four vertices as (a, b, c, d): positive orientation, starting
/// at the leftmost vertex; near-ties on x go to the upper vertex.
geom::QuadBox canonical_quad(const std::array<geom::Point2, 4>& pts);

geom::QuadBox rect_to_quad(const geom::OrientedRect& rect);
geom::OrientedRect quad_to_rect(const geom::QuadBox& quad);

}  // namespace arpbox::repr
