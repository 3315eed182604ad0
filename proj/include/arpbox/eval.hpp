// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

// VOC-style detection evaluation with rotated-IoU matching.

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "arpbox/geom.hpp"
#include "arpbox/post.hpp"

namespace arpbox::eval {

struct GroundTruth {
  geom::QuadBox box;
  int class_id = 0;
  bool difficult = false;
};

enum class MatchKind { TP, FP, Ignored };

struct Match {
  std::size_t det_index = 0;
  MatchKind kind = MatchKind::FP;
};

struct PRPoint {
  double recall = 0.0;
  double precision = 0.0;
  double score = 0.0;
};

struct PRCurve {
  std::vector<PRPoint> points;
};

enum class Metric { VOC07, VOC12 };

struct ClassReport {
  int class_id = 0;
  std::size_t num_gt = 0;
  std::size_t num_det = 0;
  double ap07 = 0.0;
  double ap12 = 0.0;
  // Operating point: detections scoring at least EvalOptions::score_thr.
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

struct EvalReport {
  Metric metric = Metric::VOC07;
  double iou_thr = 0.5;
  double map = 0.0;
  std::vector<ClassReport> classes;
  // Pooled over all classes at the operating point.
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

struct EvalOptions {
  double iou_thr = 0.5;
  Metric metric = Metric::VOC07;
  double score_thr = 0.5;
};

/// Single image, single class. Detections are visited by descending score
/// (stable). Each takes the unmatched non-difficult ground truth of
/// highest IoU at or above iou_thr (TP); failing that, an overlap with a
/// difficult ground truth makes it Ignored; otherwise FP. The result is
/// in visit order.
std::vector<Match> match_detections(std::span<const post::FinalBox> dets,
                                    std::span<const GroundTruth> gts,
                                    double iou_thr);

struct ScoredMatch {
  double score = 0.0;
  bool tp = false;
};

/// Cumulative precision/recall over matches sorted by descending score.
PRCurve pr_curve(std::span<const ScoredMatch> sorted, std::size_t num_gt);

double ap_voc07(const PRCurve& curve);
double ap_voc12(const PRCurve& curve);
double f_measure(double precision, double recall);

using DetectionsByImage = std::map<std::string, std::vector<post::FinalBox>>;
using GroundTruthByImage = std::map<std::string, std::vector<GroundTruth>>;

/// Pools matches per class across images, then reports AP per class and
/// the mean over classes that have at least one non-difficult ground
/// truth. Equal scores are ordered by image id, then by position within
/// the image.
EvalReport evaluate(const DetectionsByImage& dets,
                    const GroundTruthByImage& gts, const EvalOptions& opts = {});

}  // namespace arpbox::eval
