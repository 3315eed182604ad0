// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <variant>
#include <vector>

#include "arpbox/geom.hpp"
#include "arpbox/repr.hpp"

namespace arpbox::post {

struct Detection {
  repr::ArpBox box;
  double score = 0.0;
  int class_id = 0;
  double obliquity_p = 0.0;
};

/// A detection after the oriented/horizontal decision: a decoded quad for
/// oriented objects, the circumscribed box for near-horizontal ones.
struct FinalBox {
  std::variant<geom::QuadBox, geom::HBox> shape;
  double score = 0.0;
  int class_id = 0;

  bool is_horizontal() const {
    return std::holds_alternative<geom::HBox>(shape);
  }
};

struct NmsOptions {
  double iou_thr = 0.5;
  double score_thr = 0.0;
  bool per_class = true;
};

/// Region a detection covers for overlap tests: the decoded
/// parallelogram, or the circumscribed box when the ratios cannot be
/// inverted.
geom::ConvexPolygon detection_region(const repr::ArpBox& box);

geom::ConvexPolygon final_region(const FinalBox& box);

/// Greedy rotated NMS. Candidates at or above score_thr are visited by
/// descending score (ties by input index); a candidate is kept iff its
/// rotated IoU with every kept detection of the same class (any class
/// when per_class is false) is below iou_thr. Output is in visit order.
std::vector<Detection> r_nms(std::span<const Detection> dets,
                             const NmsOptions& opts = {});
/// Same selection, as input indices.
std::vector<std::size_t> r_nms_indices(std::span<const Detection> dets,
                                       const NmsOptions& opts = {});

/// Never throws for a valid detection: decode failures fall back to the
/// horizontal box.
FinalBox select_final(const Detection& det,
                      double lambda_thr = repr::kDefaultLambdaThr);

}  // namespace arpbox::post
