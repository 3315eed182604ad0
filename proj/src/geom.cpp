// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

#include "arpbox/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "arpbox/errors.hpp"

namespace arpbox::geom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTurnTol = 1e-9;

bool all_finite(std::span<const Point2> pts) {
  return std::all_of(pts.begin(), pts.end(), [](const Point2& p) {
    return std::isfinite(p.x) && std::isfinite(p.y);
  });
}

double extent(std::span<const Point2> pts) {
  double lo_x = std::numeric_limits<double>::infinity();
  double lo_y = lo_x;
  double hi_x = -lo_x;
  double hi_y = -lo_x;
  for (const auto& p : pts) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  return std::max({hi_x - lo_x, hi_y - lo_y, std::abs(lo_x), std::abs(hi_x),
                   std::abs(lo_y), std::abs(hi_y), 1.0});
}

// Merges consecutive points closer than a scale-relative tolerance,
// including the wrap-around pair.
std::vector<Point2> drop_near_duplicates(std::vector<Point2> pts) {
  if (pts.empty()) return pts;
  const double tol = 1e-12 * extent(pts);
  std::vector<Point2> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    if (out.empty() || norm(p - out.back()) > tol) out.push_back(p);
  }
  while (out.size() > 1 && norm(out.front() - out.back()) <= tol) {
    out.pop_back();
  }
  return out;
}

bool is_convex_positive(std::span<const Point2> pts) {
  const std::size_t n = pts.size();
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e1 = pts[(i + 1) % n] - pts[i];
    const Point2 e2 = pts[(i + 2) % n] - pts[(i + 1) % n];
    const double c = cross(e1, e2);
    if (c < -kTurnTol * norm(e1) * norm(e2)) return false;
    turning += std::atan2(c, dot(e1, e2));
  }
  // A star polygon turns positively at every vertex but winds twice.
  return std::abs(turning - 2.0 * kPi) < 1e-6;
}

// Deterministic order for the two operands of rotated_iou so that
// iou(a, b) and iou(b, a) run the identical floating-point computation.
bool lexicographically_before(std::span<const Point2> a,
                              std::span<const Point2> b) {
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(),
      [](const Point2& p, const Point2& q) {
        return p.x < q.x || (p.x == q.x && p.y < q.y);
      });
}

void require_area(double area, const char* what) {
  if (!(area > kAreaEps)) {
    throw DegenerateBoxError(std::string(what) + " has zero area");
  }
}

}  // namespace

double norm(Point2 a) { return std::hypot(a.x, a.y); }

OrientedRect OrientedRect::make(double cx, double cy, double w, double h,
                                double theta) {
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(w) ||
      !std::isfinite(h) || !std::isfinite(theta)) {
    throw InvalidBoxError("oriented rectangle has non-finite parameters");
  }
  if (!(w > 0.0) || !(h > 0.0)) {
    throw DegenerateBoxError("oriented rectangle needs w > 0 and h > 0");
  }
  double t = std::fmod(theta, kPi);
  if (t < -0.5 * kPi) {
    t += kPi;
  } else if (t >= 0.5 * kPi) {
    t -= kPi;
  }
  if (t >= 0.0) {
    t -= 0.5 * kPi;
    std::swap(w, h);
  }
  t = std::clamp(t, -0.5 * kPi, std::nextafter(0.0, -1.0));
  return OrientedRect(cx, cy, w, h, t);
}

ConvexPolygon ConvexPolygon::make(std::vector<Point2> vertices) {
  if (!all_finite(vertices)) {
    throw InvalidPolygonError("polygon has non-finite vertices");
  }
  auto pts = drop_near_duplicates(std::move(vertices));
  if (pts.size() < 3) {
    throw InvalidPolygonError("polygon needs at least 3 distinct vertices");
  }
  const double area = signed_area(pts);
  if (!(std::abs(area) > kAreaEps)) {
    throw InvalidPolygonError("polygon is degenerate (zero area)");
  }
  if (area < 0.0) std::reverse(pts.begin(), pts.end());
  if (!is_convex_positive(pts)) {
    throw InvalidPolygonError("polygon is not convex");
  }
  return ConvexPolygon(std::move(pts));
}

double signed_area(std::span<const Point2> pts) {
  const std::size_t n = pts.size();
  if (n < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += cross(pts[i], pts[(i + 1) % n]);
  }
  return 0.5 * s;
}

double polygon_area(const ConvexPolygon& poly) {
  return std::abs(signed_area(poly.vertices()));
}

std::optional<ConvexPolygon> clip_convex(const ConvexPolygon& subject,
                                         const ConvexPolygon& clip) {
  std::vector<Point2> out(subject.vertices().begin(),
                          subject.vertices().end());
  std::vector<Point2> in;
  const auto edges = clip.vertices();
  const std::size_t m = edges.size();
  for (std::size_t e = 0; e < m && !out.empty(); ++e) {
    const Point2 c0 = edges[e];
    const Point2 dir = edges[(e + 1) % m] - c0;
    in.swap(out);
    out.clear();
    const std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 prev = in[(i + n - 1) % n];
      const Point2 cur = in[i];
      const double sp = cross(dir, prev - c0);
      const double sc = cross(dir, cur - c0);
      if (sc >= 0.0) {
        if (sp < 0.0) out.push_back(prev + (cur - prev) * (sp / (sp - sc)));
        out.push_back(cur);
      } else if (sp >= 0.0) {
        out.push_back(prev + (cur - prev) * (sp / (sp - sc)));
      }
    }
  }
  out = drop_near_duplicates(std::move(out));
  if (out.size() < 3 || !(signed_area(out) > kAreaEps)) return std::nullopt;
  return ConvexPolygon(std::move(out));
}

std::array<Point2, 4> corners(const OrientedRect& rect) {
  const double c = std::cos(rect.theta());
  const double s = std::sin(rect.theta());
  const Point2 center{rect.cx(), rect.cy()};
  const Point2 u{0.5 * rect.w() * c, 0.5 * rect.w() * s};
  const Point2 v{-0.5 * rect.h() * s, 0.5 * rect.h() * c};
  return {center - u - v, center + u - v, center + u + v, center - u + v};
}

ConvexPolygon to_polygon(const OrientedRect& rect) {
  require_area(rect.area(), "rectangle");
  const auto pts = corners(rect);
  return ConvexPolygon::make({pts.begin(), pts.end()});
}

ConvexPolygon to_polygon(const QuadBox& quad) {
  auto hull = convex_hull(quad.v);
  if (hull.size() < 3 || !(signed_area(hull) > kAreaEps)) {
    throw DegenerateBoxError("quadrilateral has zero area");
  }
  return ConvexPolygon::make(std::move(hull));
}

ConvexPolygon to_polygon(const HBox& box) {
  require_area(box.w > 0.0 && box.h > 0.0 ? box.area() : 0.0, "box");
  return ConvexPolygon::make({{box.left(), box.top()},
                              {box.right(), box.top()},
                              {box.right(), box.bottom()},
                              {box.left(), box.bottom()}});
}

double rotated_iou(const ConvexPolygon& a, const ConvexPolygon& b) {
  const double area_a = polygon_area(a);
  const double area_b = polygon_area(b);
  require_area(area_a, "first box");
  require_area(area_b, "second box");
  const bool swap = lexicographically_before(b.vertices(), a.vertices());
  const auto inter = swap ? clip_convex(b, a) : clip_convex(a, b);
  if (!inter) return 0.0;
  const double overlap = polygon_area(*inter);
  const double uni = area_a + area_b - overlap;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(overlap / uni, 0.0, 1.0);
}

double rotated_iou(const OrientedRect& a, const OrientedRect& b) {
  return rotated_iou(to_polygon(a), to_polygon(b));
}

double rotated_iou(const QuadBox& a, const QuadBox& b) {
  return rotated_iou(to_polygon(a), to_polygon(b));
}

double rotated_iou(const OrientedRect& a, const QuadBox& b) {
  return rotated_iou(to_polygon(a), to_polygon(b));
}

double rotated_iou(const QuadBox& a, const OrientedRect& b) {
  return rotated_iou(to_polygon(a), to_polygon(b));
}

double hbox_iou(const HBox& a, const HBox& b) {
  const double iw =
      std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double ih =
      std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

HBox aabb_of(std::span<const Point2> pts) {
  if (pts.empty()) throw DegenerateBoxError("no points to bound");
  double lo_x = pts[0].x, hi_x = pts[0].x;
  double lo_y = pts[0].y, hi_y = pts[0].y;
  for (const auto& p : pts) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  return {0.5 * (lo_x + hi_x), 0.5 * (lo_y + hi_y), hi_x - lo_x, hi_y - lo_y};
}

HBox aabb_of(const OrientedRect& rect) {
  // Closed form keeps the center exact instead of averaging corners.
  const double c = std::abs(std::cos(rect.theta()));
  const double s = std::abs(std::sin(rect.theta()));
  return {rect.cx(), rect.cy(), rect.w() * c + rect.h() * s,
          rect.w() * s + rect.h() * c};
}

HBox aabb_of(const QuadBox& quad) { return aabb_of(std::span(quad.v)); }

std::vector<Point2> convex_hull(std::span<const Point2> pts) {
  std::vector<Point2> p(pts.begin(), pts.end());
  std::sort(p.begin(), p.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;
  std::vector<Point2> hull(2 * p.size());
  std::size_t k = 0;
  for (const auto& q : p) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], q - hull[k - 2]) <= 0.0)
      --k;
    hull[k++] = q;
  }
  for (std::size_t i = p.size() - 1, lower = k + 1; i-- > 0;) {
    const Point2& q = p[i];
    while (k >= lower &&
           cross(hull[k - 1] - hull[k - 2], q - hull[k - 2]) <= 0.0)
      --k;
    hull[k++] = q;
  }
  hull.resize(k - 1);
  return hull;
}

OrientedRect min_area_rect(std::span<const Point2> pts) {
  if (pts.size() < 3 || !all_finite(pts)) {
    throw DegenerateBoxError("need at least 3 finite points");
  }
  const auto hull = convex_hull(pts);
  if (hull.size() < 3 || !(signed_area(hull) > kAreaEps)) {
    throw DegenerateBoxError("points are collinear");
  }
  const std::size_t n = hull.size();
  double best_area = std::numeric_limits<double>::infinity();
  Point2 best_u, best_v;
  double best_lo_u = 0, best_hi_u = 0, best_lo_v = 0, best_hi_v = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e = hull[(i + 1) % n] - hull[i];
    const double len = norm(e);
    if (len == 0.0) continue;
    const Point2 u = e * (1.0 / len);
    const Point2 v{-u.y, u.x};
    double lo_u = dot(hull[0], u), hi_u = lo_u;
    double lo_v = dot(hull[0], v), hi_v = lo_v;
    for (const auto& q : hull) {
      const double pu = dot(q, u);
      const double pv = dot(q, v);
      lo_u = std::min(lo_u, pu);
      hi_u = std::max(hi_u, pu);
      lo_v = std::min(lo_v, pv);
      hi_v = std::max(hi_v, pv);
    }
    const double area = (hi_u - lo_u) * (hi_v - lo_v);
    if (area < best_area * (1.0 - 1e-12)) {
      best_area = area;
      best_u = u;
      best_v = v;
      best_lo_u = lo_u;
      best_hi_u = hi_u;
      best_lo_v = lo_v;
      best_hi_v = hi_v;
    }
  }
  const Point2 center = best_u * (0.5 * (best_lo_u + best_hi_u)) +
                        best_v * (0.5 * (best_lo_v + best_hi_v));
  return OrientedRect::make(center.x, center.y, best_hi_u - best_lo_u,
                            best_hi_v - best_lo_v,
                            std::atan2(best_u.y, best_u.x));
}

}  // namespace arpbox::geom
