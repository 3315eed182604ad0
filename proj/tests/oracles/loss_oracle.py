#!/usr/bin/env python3
"""Independent oracle for the box-loss fixtures.

Every quantity comes from explicit geometry: rectangle corners, the two
parallelograms cut from the strips between opposite sides, and polygon
areas and extents measured with shapely.  No area-ratio inversion is
used.  Prints the frozen values used by the C++ loss tests.
"""
from math import atan, cos, pi, sin

from shapely.geometry import Polygon


def corners(cx, cy, w, h, t):
    ux, uy = cos(t) * w / 2, sin(t) * w / 2
    vx, vy = -sin(t) * h / 2, cos(t) * h / 2
    return [(cx - ux - vx, cy - uy - vy), (cx + ux - vx, cy + uy - vy),
            (cx + ux + vx, cy + uy + vy), (cx - ux + vx, cy - uy + vy)]


def x_at(p, q, y):
    return p[0] + (q[0] - p[0]) * (y - p[1]) / (q[1] - p[1])


def y_at(p, q, x):
    return p[1] + (q[1] - p[1]) * (x - p[0]) / (q[0] - p[0])


def describe(rect):
    pts = corners(*rect)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    L, R, T, B = min(xs), max(xs), min(ys), max(ys)
    a = min(pts, key=lambda p: p[0])
    b = min(pts, key=lambda p: p[1])
    c = max(pts, key=lambda p: p[0])
    d = max(pts, key=lambda p: p[1])
    s_h = (R - L) * (B - T)
    # P_a: strip between the parallel sides ad and bc, cut by y = T, B.
    pa = Polygon([(x_at(a, d, T), T), (x_at(b, c, T), T),
                  (x_at(b, c, B), B), (x_at(a, d, B), B)])
    # P_b: the same strip cut by x = L, R.
    pb = Polygon([(L, y_at(b, c, L)), (R, y_at(b, c, R)),
                  (R, y_at(a, d, R)), (L, y_at(a, d, L))])
    return {
        "poly": Polygon(pts),
        "hbox": (L, T, R, B),
        "lam": (Polygon(pts).area / s_h, pa.area / s_h, pb.area / s_h),
        "w_pa": pa.area / (B - T),
        "h_pb": pb.area / (R - L),
        "pa_x": (pa.bounds[0], pa.bounds[2]),
        "pb_y": (pb.bounds[1], pb.bounds[3]),
    }


def hbox_iou(p, q):
    a = Polygon([(p[0], p[1]), (p[2], p[1]), (p[2], p[3]), (p[0], p[3])])
    b = Polygon([(q[0], q[1]), (q[2], q[1]), (q[2], q[3]), (q[0], q[3])])
    return a.intersection(b).area / a.union(b).area


def center_term(p, q):
    dx = (p[0] + p[2]) / 2 - (q[0] + q[2]) / 2
    dy = (p[1] + p[3]) / 2 - (q[1] + q[3]) / 2
    cw = max(p[2], q[2]) - min(p[0], q[0])
    ch = max(p[3], q[3]) - min(p[1], q[1])
    return (dx * dx + dy * dy) / (cw * cw + ch * ch)


def smooth_l1(x):
    return 0.5 * x * x if abs(x) < 1 else abs(x) - 0.5


def ciou(p, q):
    iou = hbox_iou(p, q)
    wa, ha = p[2] - p[0], p[3] - p[1]
    wb, hb = q[2] - q[0], q[3] - q[1]
    v = 4 / pi ** 2 * (atan(wb / hb) - atan(wa / ha)) ** 2
    alpha = v / ((1 - iou) + v + 1e-9)
    return 1 - iou + center_term(p, q) + alpha * v


def losses(pred, target):
    p, t = describe(pred), describe(target)
    iou = hbox_iou(p["hbox"], t["hbox"])
    dist = center_term(p["hbox"], t["hbox"])
    c_wpa = max(p["pa_x"][1], t["pa_x"][1]) - min(p["pa_x"][0], t["pa_x"][0])
    c_hpb = max(p["pb_y"][1], t["pb_y"][1]) - min(p["pb_y"][0], t["pb_y"][0])
    area = ((p["w_pa"] - t["w_pa"]) ** 2 / c_wpa ** 2 +
            (p["h_pb"] - t["h_pb"]) ** 2 / c_hpb ** 2)
    rot = p["poly"].intersection(t["poly"]).area / \
        p["poly"].union(t["poly"]).area
    sl1 = sum(smooth_l1(x - y) for x, y in zip(p["lam"], t["lam"]))
    return {
        "pred_lambda": p["lam"], "target_lambda": t["lam"],
        "iou": 1 - iou, "distance": dist, "area_ratio": area,
        "reiou": 1 - iou + dist + area, "reiou_rotated": 1 - rot + dist + area,
        "ciou": ciou(p["hbox"], t["hbox"]), "smooth_l1": sl1,
    }


PAIRS = [
    ((10.0, 12.0, 8.0, 4.0, -0.5), (11.0, 11.0, 9.0, 5.0, -0.6)),
    ((50.0, 40.0, 30.0, 10.0, -1.2), (48.0, 43.0, 26.0, 12.0, -1.0)),
    ((0.0, 0.0, 6.0, 2.0, -0.9), (0.5, -0.5, 5.0, 3.0, -0.2)),
]

if __name__ == "__main__":
    for pred, target in PAIRS:
        out = losses(pred, target)
        print("pred", pred, "target", target)
        for k, v in out.items():
            if isinstance(v, tuple):
                print(f"  {k}: " + ", ".join(f"{x:.17g}" for x in v))
            else:
                print(f"  {k}: {v:.17g}")
