// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "arpbox/config.hpp"
#include "arpbox/errors.hpp"
#include "arpbox/eval.hpp"
#include "arpbox/fit.hpp"
#include "arpbox/io.hpp"
#include "arpbox/loss.hpp"
#include "arpbox/post.hpp"
#include "arpbox/repr.hpp"
#include "json.hpp"

namespace arpbox::cli {

namespace {

using nlohmann::ordered_json;

struct Globals {
  std::string config_path;
  std::string profile;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda_thr;
  std::optional<double> nms_iou;
  std::optional<double> match_iou;
  std::string out;
};

Config resolve_config(const Globals& g) {
  Config c;
  if (!g.config_path.empty()) {
    c = merge_config_json(c, io::read_file(g.config_path));
  }
  if (!g.profile.empty()) {
    const auto p = parse_profile(g.profile);
    if (!p) throw DomainError("unknown profile '" + g.profile + "'");
    c.lambda_thr = profile_lambda_thr(*p);
  }
  if (g.seed) c.seed = *g.seed;
  if (g.lambda_thr) c.lambda_thr = *g.lambda_thr;
  if (g.nms_iou) c.nms_iou = *g.nms_iou;
  if (g.match_iou) c.match_iou = *g.match_iou;
  validate(c);
  return c;
}

void emit(std::string_view text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    io::write_file(path, text);
  }
}

// JSON has no negative zero worth printing.
double tidy(double v) { return v == 0.0 ? 0.0 : v; }

ordered_json values_json(std::span<const double> values) {
  auto arr = ordered_json::array();
  for (double v : values) arr.push_back(tidy(v));
  return arr;
}

ordered_json breakdown_json(std::string_view kind,
                            const loss::LossBreakdown& b) {
  ordered_json j;
  j["kind"] = kind;
  j["total"] = tidy(b.total);
  ordered_json terms = ordered_json::object();
  for (const auto& t : b.terms) terms[t.name] = tidy(t.value);
  j["terms"] = std::move(terms);
  return j;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v)) {
      throw DomainError("bad number '" + item + "' in list");
    }
    out.push_back(v);
  }
  return out;
}

eval::Metric parse_metric(const std::string& name) {
  return name == "voc12" ? eval::Metric::VOC12 : eval::Metric::VOC07;
}

loss::BoxLossKind parse_loss_kind(const std::string& name) {
  return name == "smooth" ? loss::BoxLossKind::SmoothL1
                          : loss::BoxLossKind::REIoU;
}

std::string_view loss_kind_name(loss::BoxLossKind kind) {
  return kind == loss::BoxLossKind::SmoothL1 ? "smooth" : "reiou";
}

io::BoxSpec box_spec_json(const ordered_json& j) {
  io::BoxSpec spec;
  spec.kind = io::parse_box_kind(j.at("kind").get<std::string>());
  spec.values = j.at("values").get<std::vector<double>>();
  return spec;
}

loss::LabeledProb labeled_json(const ordered_json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw ParseError(1, "expected [label, p]");
  }
  return {j.at(0).get<int>(), j.at(1).get<double>()};
}

std::vector<loss::Sample> parse_samples(const std::string& text) {
  std::vector<loss::Sample> out;
  try {
    const auto j = ordered_json::parse(text);
    if (!j.is_array()) throw ParseError(1, "samples must be a JSON array");
    for (const auto& s : j) {
      loss::Sample sample;
      sample.responsible = s.value("responsible", true);
      sample.box = {io::to_arp(box_spec_json(s.at("pred"))),
                    io::to_arp(box_spec_json(s.at("target")))};
      sample.obj = labeled_json(s.at("obj"));
      if (s.contains("cls")) {
        for (const auto& c : s.at("cls")) sample.cls.push_back(labeled_json(c));
      }
      sample.alpha = labeled_json(s.at("alpha"));
      out.push_back(std::move(sample));
    }
  } catch (const ordered_json::exception& e) {
    throw ParseError(1, std::string("bad samples file: ") + e.what());
  }
  return out;
}

// Detections grouped by image, each group in file order.
std::map<std::string, std::vector<io::DetectionRecord>> by_image(
    std::vector<io::DetectionRecord> records) {
  std::map<std::string, std::vector<io::DetectionRecord>> out;
  for (auto& r : records) out[r.image].push_back(std::move(r));
  return out;
}

eval::DetectionsByImage final_boxes(
    const std::map<std::string, std::vector<io::DetectionRecord>>& groups,
    io::ClassVocabulary& vocab, double lambda_thr) {
  eval::DetectionsByImage out;
  for (const auto& [image, records] : groups) {
    auto& list = out[image];
    for (const auto& r : records) {
      list.push_back(post::select_final(io::to_detection(r, vocab), lambda_thr));
    }
  }
  return out;
}

int cmd_convert(const std::string& from, const std::string& to,
                const std::vector<double>& values, const Globals& g,
                std::ostream& out) {
  resolve_config(g);
  const io::BoxSpec in{io::parse_box_kind(from), values};
  std::vector<double> result;
  switch (io::parse_box_kind(to)) {
    case io::BoxKind::Arp: {
      const auto box = in.kind == io::BoxKind::Arp
                           ? io::to_arp(in)
                           : repr::encode_arp(io::to_rect(in));
      const auto p = box.params();
      result.assign(p.begin(), p.end());
      break;
    }
    case io::BoxKind::Quad:
      for (const auto& v : io::to_quad(in).v) {
        result.push_back(v.x);
        result.push_back(v.y);
      }
      break;
    case io::BoxKind::Doc: {
      const auto r = io::to_rect(in);
      result = {r.cx(), r.cy(), r.w(), r.h(), r.theta()};
      break;
    }
  }
  ordered_json j;
  j["kind"] = to;
  j["values"] = values_json(result);
  emit(j.dump() + "\n", g.out, out);
  return kExitOk;
}

struct LossArgs {
  std::string kind = "reiou";
  std::string pred_kind = "arp";
  std::string target_kind = "arp";
  std::vector<double> pred;
  std::vector<double> target;
  std::string samples;
  bool rotated_iou = false;
};

int cmd_loss(const LossArgs& a, const Globals& g, std::ostream& out) {
  const Config cfg = resolve_config(g);
  const loss::REIoUOptions opts{
      cfg.lambda_thr,
      a.rotated_iou ? loss::IouKind::Rotated : loss::IouKind::Horizontal};
  const auto kind = parse_loss_kind(a.kind);
  ordered_json j;
  if (!a.samples.empty()) {
    const auto samples = parse_samples(io::read_file(a.samples));
    const auto b = loss::multitask_loss(samples, cfg.weights, kind,
                                        loss::bce_obliquity, opts);
    j = breakdown_json("multitask", b);
    j["box_loss"] = loss_kind_name(kind);
  } else {
    if (a.pred.empty() || a.target.empty()) {
      throw DomainError("loss needs --pred and --target, or --samples");
    }
    const loss::BoxPair pair{
        io::to_arp({io::parse_box_kind(a.pred_kind), a.pred}),
        io::to_arp({io::parse_box_kind(a.target_kind), a.target})};
    j = breakdown_json(loss_kind_name(kind), loss::box_loss(pair, kind, opts));
  }
  emit(j.dump() + "\n", g.out, out);
  return kExitOk;
}

int cmd_nms(const std::string& det_path, double score_thr, bool agnostic,
            const Globals& g, std::ostream& out) {
  const Config cfg = resolve_config(g);
  const auto groups = by_image(io::parse_detections(io::read_file(det_path)));
  io::ClassVocabulary vocab;
  std::vector<io::DetectionRecord> kept;
  for (const auto& [image, records] : groups) {
    std::vector<post::Detection> dets;
    dets.reserve(records.size());
    for (const auto& r : records) dets.push_back(io::to_detection(r, vocab));
    const auto idx =
        post::r_nms_indices(dets, {cfg.nms_iou, score_thr, !agnostic});
    for (std::size_t i : idx) kept.push_back(records[i]);
  }
  emit(io::write_detections(kept), g.out, out);
  return kExitOk;
}

struct EvalArgs {
  std::string gt;
  std::string det;
  std::string metric = "voc07";
  double score_thr = 0.5;
  std::string csv;
};

eval::EvalReport run_eval(const EvalArgs& a, const Config& cfg,
                          double lambda_thr, io::ClassVocabulary& vocab) {
  const auto gts = io::load_ground_truth(a.gt, vocab);
  const auto groups = by_image(io::parse_detections(io::read_file(a.det)));
  const auto dets = final_boxes(groups, vocab, lambda_thr);
  return eval::evaluate(dets, gts,
                        {cfg.match_iou, parse_metric(a.metric), a.score_thr});
}

int cmd_eval(const EvalArgs& a, const Globals& g, std::ostream& out) {
  const Config cfg = resolve_config(g);
  io::ClassVocabulary vocab;
  const auto report = run_eval(a, cfg, cfg.lambda_thr, vocab);
  emit(io::report_json(report, vocab), g.out, out);
  if (!a.csv.empty()) io::write_file(a.csv, io::report_csv(report, vocab));
  return kExitOk;
}

int cmd_sweep(const EvalArgs& a, const std::string& thresholds,
              const Globals& g, std::ostream& out) {
  const Config cfg = resolve_config(g);
  const auto list = parse_list(thresholds);
  if (list.empty()) throw DomainError("threshold list is empty");
  for (double t : list) {
    if (!(t > 0.0 && t <= 1.0)) {
      throw DomainError("thresholds must lie in (0, 1]");
    }
  }
  std::string csv = "lambda_thr,map\n";
  char buf[64];
  for (double t : list) {
    io::ClassVocabulary vocab;
    const auto report = run_eval(a, cfg, t, vocab);
    std::snprintf(buf, sizeof buf, "%.6f,%.6f\n", t, report.map);
    csv += buf;
  }
  emit(csv, g.out, out);
  return kExitOk;
}

struct FitArgs {
  std::string targets;
  int random = 0;
  std::string kind = "reiou";
  std::optional<int> steps;
  std::optional<double> lr;
  std::optional<double> fd_step;
  std::string summary;
  double success_iou = 0.9;
  bool rotated_iou = false;
};

std::vector<fit::FitPair> read_fit_pairs(const std::string& path) {
  std::vector<fit::FitPair> out;
  std::stringstream ss(io::read_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = ordered_json::parse(line);
      const auto target = io::to_rect(box_spec_json(j.at("target")));
      const auto init = j.contains("init")
                            ? io::to_arp(box_spec_json(j.at("init")))
                            : repr::encode_arp_or_hbb(target);
      out.push_back({target, init});
    } catch (const ordered_json::exception& e) {
      throw ParseError(line_no, std::string("bad fit target: ") + e.what());
    }
  }
  return out;
}

int cmd_fit(const FitArgs& a, const Globals& g, std::ostream& out,
            std::ostream& err) {
  Config cfg = resolve_config(g);
  if (a.steps) cfg.fit.steps = *a.steps;
  if (a.lr) cfg.fit.lr = *a.lr;
  if (a.fd_step) cfg.fit.fd_step = *a.fd_step;
  validate(cfg);

  std::vector<fit::FitPair> pairs;
  if (!a.targets.empty()) {
    pairs = read_fit_pairs(a.targets);
  } else if (a.random > 0) {
    pairs = fit::random_pairs(static_cast<std::size_t>(a.random), cfg.seed);
  } else {
    throw DomainError("fit needs --targets or --random N");
  }

  const fit::FitOptions opts{cfg.fit.steps, cfg.fit.lr, cfg.fit.fd_step,
                             parse_loss_kind(a.kind), cfg.lambda_thr,
                             a.rotated_iou ? loss::IouKind::Rotated
                                           : loss::IouKind::Horizontal};
  std::string csv = "run,step,loss,rotated_iou\n";
  char buf[128];
  int successes = 0;
  double iou_sum = 0.0;
  for (std::size_t run = 0; run < pairs.size(); ++run) {
    const auto result = fit::fit_box(pairs[run], opts);
    for (const auto& s : result.trace) {
      std::snprintf(buf, sizeof buf, "%zu,%d,%.10g,%.10g\n", run, s.step,
                    s.loss, s.iou);
      csv += buf;
    }
    if (result.final_iou >= a.success_iou) ++successes;
    iou_sum += result.final_iou;
  }
  emit(csv, g.out, out);

  ordered_json summary;
  summary["kind"] = loss_kind_name(opts.kind);
  summary["runs"] = pairs.size();
  summary["successes"] = successes;
  summary["success_rate"] =
      pairs.empty() ? 0.0 : double(successes) / double(pairs.size());
  summary["mean_final_iou"] =
      pairs.empty() ? 0.0 : iou_sum / double(pairs.size());
  summary["success_iou"] = a.success_iou;
  summary["seed"] = cfg.seed;
  const std::string text = summary.dump() + "\n";
  if (a.summary.empty()) {
    err << text;
  } else {
    io::write_file(a.summary, text);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Area-ratio oriented box toolkit", "arpbox"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "JSON config file");
  app.add_option("--profile", g.profile, "Dataset profile")
      ->check(CLI::IsMember({"dota", "hrsc", "ucas", "icdar"}));
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out, "Output file (default: stdout)");
  app.add_option("--lambda-thr", g.lambda_thr, "Obliquity threshold");
  app.add_option("--nms-iou", g.nms_iou, "NMS IoU threshold");
  app.add_option("--match-iou", g.match_iou, "Evaluation IoU threshold");

  const std::vector<std::string> kinds{"doc", "quad", "arp"};

  std::string from, to;
  std::vector<double> values;
  auto* convert = app.add_subcommand("convert", "Convert a box between forms");
  convert->add_option("--from", from)->required()->check(CLI::IsMember(kinds));
  convert->add_option("--to", to)->required()->check(CLI::IsMember(kinds));
  convert->add_option("--values", values, "Comma-separated values")
      ->required()
      ->delimiter(',');

  LossArgs la;
  auto* lossc = app.add_subcommand("loss", "Evaluate a box or multi-task loss");
  lossc->add_option("--kind", la.kind)
      ->check(CLI::IsMember({"smooth", "reiou"}));
  lossc->add_option("--pred-kind", la.pred_kind)->check(CLI::IsMember(kinds));
  lossc->add_option("--target-kind", la.target_kind)
      ->check(CLI::IsMember(kinds));
  lossc->add_option("--pred", la.pred)->delimiter(',');
  lossc->add_option("--target", la.target)->delimiter(',');
  lossc->add_option("--samples", la.samples, "JSON array of samples");
  lossc->add_flag("--rotated-iou", la.rotated_iou,
                  "Compare decoded shapes in the IoU term");

  std::string det_path;
  double nms_score = 0.0;
  bool agnostic = false;
  auto* nms = app.add_subcommand("nms", "Rotated non-maximum suppression");
  nms->add_option("--det", det_path)->required();
  nms->add_option("--score-thr", nms_score);
  nms->add_flag("--class-agnostic", agnostic);

  EvalArgs ea;
  auto* evalc = app.add_subcommand("eval", "VOC-style evaluation");
  evalc->add_option("--gt", ea.gt, "DOTA file or directory")->required();
  evalc->add_option("--det", ea.det)->required();
  evalc->add_option("--metric", ea.metric)
      ->check(CLI::IsMember({"voc07", "voc12"}));
  evalc->add_option("--score-thr", ea.score_thr,
                    "Operating point for precision and recall");
  evalc->add_option("--csv", ea.csv, "Per-class AP table");

  EvalArgs sa;
  std::string thresholds;
  auto* sweep = app.add_subcommand("sweep", "mAP across obliquity thresholds");
  sweep->add_option("--gt", sa.gt)->required();
  sweep->add_option("--det", sa.det)->required();
  sweep->add_option("--metric", sa.metric)
      ->check(CLI::IsMember({"voc07", "voc12"}));
  sweep->add_option("--thresholds", thresholds, "Comma-separated list")
      ->required();

  FitArgs fa;
  auto* fitc = app.add_subcommand("fit", "Gradient-descent fitting demo");
  fitc->add_option("--targets", fa.targets, "JSONL of target/init boxes");
  fitc->add_option("--random", fa.random, "Number of random pairs");
  fitc->add_option("--kind", fa.kind)->check(CLI::IsMember({"smooth", "reiou"}));
  fitc->add_option("--steps", fa.steps);
  fitc->add_option("--lr", fa.lr);
  fitc->add_option("--fd-step", fa.fd_step);
  fitc->add_option("--summary", fa.summary, "Summary JSON file");
  fitc->add_option("--success-iou", fa.success_iou);
  fitc->add_flag("--rotated-iou", fa.rotated_iou,
                 "Use rotated IoU inside the R-EIoU loss");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitDomain;
  }

  try {
    if (*convert) return cmd_convert(from, to, values, g, out);
    if (*lossc) return cmd_loss(la, g, out);
    if (*nms) return cmd_nms(det_path, nms_score, agnostic, g, out);
    if (*evalc) return cmd_eval(ea, g, out);
    if (*sweep) return cmd_sweep(sa, thresholds, g, out);
    if (*fitc) return cmd_fit(fa, g, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitDomain;
}

}  // namespace arpbox::cli
