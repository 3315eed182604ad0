// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

// 2-D geometry kernel: convex polygons, clipping, rotated IoU and
// enclosing rectangles.
//
// Coordinates follow the image convention (x right, y down). Polygon
// orientation is expressed in mathematical terms: a polygon is
// "counter-clockwise" when its shoelace signed area is positive, which
// renders clockwise on screen.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace arpbox::geom {

// Areas at or below this value (px^2) are treated as degenerate.
inline constexpr double kAreaEps = 1e-9;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
inline Point2 operator*(double s, Point2 a) { return {a.x * s, a.y * s}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double norm(Point2 a);

/// Axis-aligned box in center/size form.
struct HBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double left() const { return x - 0.5 * w; }
  double right() const { return x + 0.5 * w; }
  double top() const { return y - 0.5 * h; }
  double bottom() const { return y + 0.5 * h; }
  double area() const { return w * h; }
};

/// Four vertices in (a, b, c, d) order: the left, upper, right and bottom
/// vertex for any tilted rectangle or decoded parallelogram. Axis-aligned
/// boxes use top-left, top-right, bottom-right, bottom-left.
struct QuadBox {
  std::array<Point2, 4> v{};

  const Point2& a() const { return v[0]; }
  const Point2& b() const { return v[1]; }
  const Point2& c() const { return v[2]; }
  const Point2& d() const { return v[3]; }
};

/// Rotated rectangle in the five-parameter OpenCV-style form.
///
/// Stored canonically: theta in [-pi/2, 0) and `w` is the length of the
/// edge making angle theta with the +x axis. Construction folds every
/// aliased form (w/h exchanged with theta shifted by pi/2, or theta
/// shifted by pi) onto that canonical representative.
class OrientedRect {
 public:
  static OrientedRect make(double cx, double cy, double w, double h,
                           double theta);

  double cx() const { return cx_; }
  double cy() const { return cy_; }
  double w() const { return w_; }
  double h() const { return h_; }
  double theta() const { return theta_; }
  double area() const { return w_ * h_; }

 private:
  OrientedRect(double cx, double cy, double w, double h, double theta)
      : cx_(cx), cy_(cy), w_(w), h_(h), theta_(theta) {}

  double cx_;
  double cy_;
  double w_;
  double h_;
  double theta_;
};

/// Convex polygon with positive signed area and no repeated consecutive
/// vertices.
class ConvexPolygon {
 public:
  /// Validates and normalizes `vertices`: near-duplicate consecutive
  /// points are merged and clockwise input is reversed. Throws
  /// InvalidPolygonError for fewer than three distinct points, zero area
  /// or a non-convex chain.
  static ConvexPolygon make(std::vector<Point2> vertices);

  std::span<const Point2> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

 private:
  explicit ConvexPolygon(std::vector<Point2> vertices)
      : vertices_(std::move(vertices)) {}

  friend std::optional<ConvexPolygon> clip_convex(const ConvexPolygon&,
                                                  const ConvexPolygon&);

  std::vector<Point2> vertices_;
};

double signed_area(std::span<const Point2> pts);
double polygon_area(const ConvexPolygon& poly);

/// Sutherland-Hodgman intersection of two convex polygons. Returns
/// nullopt when the overlap has no area above kAreaEps.
std::optional<ConvexPolygon> clip_convex(const ConvexPolygon& subject,
                                         const ConvexPolygon& clip);

std::array<Point2, 4> corners(const OrientedRect& rect);

ConvexPolygon to_polygon(const OrientedRect& rect);
// Uses the convex hull of the four vertices, so self-intersecting or
// slightly concave annotation quads still yield a usable region.
ConvexPolygon to_polygon(const QuadBox& quad);
ConvexPolygon to_polygon(const HBox& box);

/// Intersection over union of two convex regions, in [0, 1]. Exactly
/// symmetric in its arguments.
double rotated_iou(const ConvexPolygon& a, const ConvexPolygon& b);
double rotated_iou(const OrientedRect& a, const OrientedRect& b);
double rotated_iou(const QuadBox& a, const QuadBox& b);
double rotated_iou(const OrientedRect& a, const QuadBox& b);
double rotated_iou(const QuadBox& a, const OrientedRect& b);

double hbox_iou(const HBox& a, const HBox& b);

HBox aabb_of(std::span<const Point2> pts);
HBox aabb_of(const OrientedRect& rect);
HBox aabb_of(const QuadBox& quad);

/// Andrew's monotone chain. Collinear boundary points are dropped; the
/// result has positive orientation.
std::vector<Point2> convex_hull(std::span<const Point2> pts);

/// Minimum-area enclosing rectangle by rotating calipers over the hull.
/// Throws DegenerateBoxError when the points are collinear.
OrientedRect min_area_rect(std::span<const Point2> pts);

}  // namespace arpbox::geom
