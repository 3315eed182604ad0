// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

#include "arpbox/eval.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace arpbox::eval {

std::vector<Match> match_detections(std::span<const post::FinalBox> dets,
                                    std::span<const GroundTruth> gts,
                                    double iou_thr) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&dets](std::size_t a, std::size_t b) {
                     return dets[a].score > dets[b].score;
                   });

  std::vector<geom::ConvexPolygon> gt_regions;
  gt_regions.reserve(gts.size());
  for (const auto& g : gts) gt_regions.push_back(geom::to_polygon(g.box));
  std::vector<bool> taken(gts.size(), false);

  std::vector<Match> out;
  out.reserve(dets.size());
  for (std::size_t idx : order) {
    const auto region = post::final_region(dets[idx]);
    double best = -1.0;
    std::size_t best_gt = gts.size();
    bool hits_difficult = false;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double iou = geom::rotated_iou(region, gt_regions[g]);
      if (iou < iou_thr) continue;
      if (gts[g].difficult) {
        hits_difficult = true;
      } else if (!taken[g] && iou > best) {
        best = iou;
        best_gt = g;
      }
    }
    if (best_gt < gts.size()) {
      taken[best_gt] = true;
      out.push_back({idx, MatchKind::TP});
    } else {
      out.push_back({idx, hits_difficult ? MatchKind::Ignored : MatchKind::FP});
    }
  }
  return out;
}

PRCurve pr_curve(std::span<const ScoredMatch> sorted, std::size_t num_gt) {
  PRCurve curve;
  if (num_gt == 0) return curve;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (const auto& m : sorted) {
    (m.tp ? tp : fp) += 1;
    curve.points.push_back({static_cast<double>(tp) / num_gt,
                            static_cast<double>(tp) / (tp + fp), m.score});
  }
  return curve;
}

double ap_voc07(const PRCurve& curve) {
  if (curve.points.empty()) return 0.0;
  double sum = 0.0;
  for (int i = 0; i <= 10; ++i) {
    const double r = i / 10.0;
    double best = 0.0;
    for (const auto& p : curve.points) {
      if (p.recall >= r - 1e-12) best = std::max(best, p.precision);
    }
    sum += best;
  }
  return sum / 11.0;
}

double ap_voc12(const PRCurve& curve) {
  if (curve.points.empty()) return 0.0;
  std::vector<double> rec{0.0};
  std::vector<double> prec{0.0};
  for (const auto& p : curve.points) {
    rec.push_back(p.recall);
    prec.push_back(p.precision);
  }
  rec.push_back(1.0);
  prec.push_back(0.0);
  for (std::size_t i = prec.size() - 1; i-- > 0;) {
    prec[i] = std::max(prec[i], prec[i + 1]);
  }
  double ap = 0.0;
  for (std::size_t i = 0; i + 1 < rec.size(); ++i) {
    if (rec[i + 1] != rec[i]) ap += (rec[i + 1] - rec[i]) * prec[i + 1];
  }
  return ap;
}

double f_measure(double precision, double recall) {
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

namespace {

struct PooledMatch {
  double score;
  std::size_t image_rank;
  std::size_t det_index;
  bool tp;
};

}  // namespace

EvalReport evaluate(const DetectionsByImage& dets,
                    const GroundTruthByImage& gts, const EvalOptions& opts) {
  std::set<int> classes;
  for (const auto& [image, list] : dets) {
    for (const auto& d : list) classes.insert(d.class_id);
  }
  for (const auto& [image, list] : gts) {
    for (const auto& g : list) classes.insert(g.class_id);
  }
  std::set<std::string> images;
  for (const auto& [image, list] : dets) images.insert(image);
  for (const auto& [image, list] : gts) images.insert(image);

  EvalReport report;
  report.metric = opts.metric;
  report.iou_thr = opts.iou_thr;
  std::size_t all_tp = 0, all_det = 0, all_gt = 0;
  double ap_sum = 0.0;
  std::size_t ap_count = 0;

  for (int cls : classes) {
    std::vector<PooledMatch> pooled;
    std::size_t num_gt = 0;
    std::size_t image_rank = 0;
    for (const auto& image : images) {
      std::vector<post::FinalBox> cd;
      std::vector<GroundTruth> cg;
      if (auto it = dets.find(image); it != dets.end()) {
        for (const auto& d : it->second) {
          if (d.class_id == cls) cd.push_back(d);
        }
      }
      if (auto it = gts.find(image); it != gts.end()) {
        for (const auto& g : it->second) {
          if (g.class_id != cls) continue;
          cg.push_back(g);
          if (!g.difficult) ++num_gt;
        }
      }
      for (const auto& m : match_detections(cd, cg, opts.iou_thr)) {
        if (m.kind == MatchKind::Ignored) continue;
        pooled.push_back({cd[m.det_index].score, image_rank, m.det_index,
                          m.kind == MatchKind::TP});
      }
      ++image_rank;
    }
    std::sort(pooled.begin(), pooled.end(),
              [](const PooledMatch& a, const PooledMatch& b) {
                if (a.score != b.score) return a.score > b.score;
                if (a.image_rank != b.image_rank)
                  return a.image_rank < b.image_rank;
                return a.det_index < b.det_index;
              });

    std::vector<ScoredMatch> sorted;
    sorted.reserve(pooled.size());
    std::size_t op_tp = 0, op_det = 0;
    for (const auto& p : pooled) {
      sorted.push_back({p.score, p.tp});
      if (p.score >= opts.score_thr) {
        ++op_det;
        if (p.tp) ++op_tp;
      }
    }
    const auto curve = pr_curve(sorted, num_gt);

    ClassReport cr;
    cr.class_id = cls;
    cr.num_gt = num_gt;
    cr.num_det = pooled.size();
    cr.ap07 = ap_voc07(curve);
    cr.ap12 = ap_voc12(curve);
    cr.precision = op_det ? static_cast<double>(op_tp) / op_det : 0.0;
    cr.recall = num_gt ? static_cast<double>(op_tp) / num_gt : 0.0;
    cr.f_measure = f_measure(cr.precision, cr.recall);
    report.classes.push_back(cr);

    all_tp += op_tp;
    all_det += op_det;
    all_gt += num_gt;
    if (num_gt > 0) {
      ap_sum += opts.metric == Metric::VOC07 ? cr.ap07 : cr.ap12;
      ++ap_count;
    }
  }

  report.map = ap_count ? ap_sum / ap_count : 0.0;
  report.precision = all_det ? static_cast<double>(all_tp) / all_det : 0.0;
  report.recall = all_gt ? static_cast<double>(all_tp) / all_gt : 0.0;
  report.f_measure = f_measure(report.precision, report.recall);
  return report;
}

}  // namespace arpbox::eval
