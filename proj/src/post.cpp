// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

#include "arpbox/post.hpp"

#include <algorithm>

#include "arpbox/errors.hpp"

namespace arpbox::post {

geom::ConvexPolygon detection_region(const repr::ArpBox& box) {
  try {
    return geom::to_polygon(repr::decode_vertices(box));
  } catch (const NearHorizontalError&) {
    return geom::to_polygon(box.hbox());
  }
}

geom::ConvexPolygon final_region(const FinalBox& box) {
  return std::visit([](const auto& s) { return geom::to_polygon(s); },
                    box.shape);
}

std::vector<std::size_t> r_nms_indices(std::span<const Detection> dets,
                                       const NmsOptions& opts) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (dets[i].score >= opts.score_thr) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&dets](std::size_t a, std::size_t b) {
                     return dets[a].score > dets[b].score;
                   });

  std::vector<std::size_t> kept;
  std::vector<geom::ConvexPolygon> kept_regions;
  for (std::size_t idx : order) {
    auto region = detection_region(dets[idx].box);
    bool keep = true;
    for (std::size_t k = 0; k < kept.size() && keep; ++k) {
      if (opts.per_class && dets[kept[k]].class_id != dets[idx].class_id) {
        continue;
      }
      keep = geom::rotated_iou(region, kept_regions[k]) < opts.iou_thr;
    }
    if (keep) {
      kept.push_back(idx);
      kept_regions.push_back(std::move(region));
    }
  }
  return kept;
}

std::vector<Detection> r_nms(std::span<const Detection> dets,
                             const NmsOptions& opts) {
  const auto kept = r_nms_indices(dets, opts);
  std::vector<Detection> out;
  out.reserve(kept.size());
  for (std::size_t idx : kept) out.push_back(dets[idx]);
  return out;
}

FinalBox select_final(const Detection& det, double lambda_thr) {
  FinalBox out{det.box.hbox(), det.score, det.class_id};
  if (repr::obliquity_label(det.box.lambda1, lambda_thr) ==
      repr::ObliquityLabel::OBB) {
    try {
      out.shape = repr::decode_vertices(det.box);
    } catch (const DomainError&) {
      // keep the horizontal box
    }
  }
  return out;
}

}  // namespace arpbox::post
