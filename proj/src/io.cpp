// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

#include "arpbox/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "arpbox/errors.hpp"
#include "json.hpp"

namespace arpbox::io {

namespace {

using nlohmann::ordered_json;

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t'; });
}

bool is_header(std::string_view line) {
  return line.starts_with("imagesource") || line.starts_with("gsd");
}

double parse_double(std::string_view tok, std::size_t line_no) {
  double v = 0.0;
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ParseError(line_no, "bad coordinate '" + std::string(tok) + "'");
  }
  return v;
}

AnnotationRecord parse_record(std::string_view line, std::size_t line_no) {
  const auto tokens = split_ws(line);
  if (tokens.size() != 10) {
    throw ParseError(line_no, "expected 8 coordinates, category and "
                              "difficult flag, got " +
                                  std::to_string(tokens.size()) + " fields");
  }
  AnnotationRecord rec;
  for (std::size_t i = 0; i < 4; ++i) {
    rec.vertices[i] = {parse_double(tokens[2 * i], line_no),
                       parse_double(tokens[2 * i + 1], line_no)};
  }
  rec.category = std::string(tokens[8]);
  if (tokens[9] == "0") {
    rec.difficult = 0;
  } else if (tokens[9] == "1") {
    rec.difficult = 1;
  } else {
    throw ParseError(line_no, "difficult flag must be 0 or 1, got '" +
                                  std::string(tokens[9]) + "'");
  }
  return rec;
}

const ordered_json& require(const ordered_json& obj, const char* key,
                            std::size_t line_no) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(line_no, std::string("missing field '") + key + "'");
  }
  return obj.at(key);
}

}  // namespace

DotaDocument parse_dota_document(std::string_view text) {
  DotaDocument doc;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = lines[i];
    if (is_blank(line)) continue;
    if (is_header(line)) {
      if (!doc.records.empty()) {
        throw ParseError(i + 1, "header line after annotations");
      }
      doc.header.emplace_back(line);
      continue;
    }
    doc.records.push_back(parse_record(line, i + 1));
  }
  return doc;
}

std::vector<AnnotationRecord> parse_dota(std::string_view text) {
  return parse_dota_document(text).records;
}

std::string format_coord(double v) {
  if (!std::isfinite(v)) throw InvalidBoxError("non-finite coordinate");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string write_dota(std::span<const AnnotationRecord> records) {
  std::string out;
  for (const auto& r : records) {
    for (const auto& p : r.vertices) {
      out += format_coord(p.x);
      out += ' ';
      out += format_coord(p.y);
      out += ' ';
    }
    out += r.category;
    out += ' ';
    out += std::to_string(r.difficult);
    out += '\n';
  }
  return out;
}

std::string write_dota_document(const DotaDocument& doc) {
  std::string out;
  for (const auto& h : doc.header) {
    out += h;
    out += '\n';
  }
  return out + write_dota(doc.records);
}

BoxKind parse_box_kind(std::string_view name) {
  if (name == "quad") return BoxKind::Quad;
  if (name == "arp") return BoxKind::Arp;
  if (name == "doc") return BoxKind::Doc;
  throw InvalidBoxError("unknown box kind '" + std::string(name) + "'");
}

std::string_view box_kind_name(BoxKind kind) {
  switch (kind) {
    case BoxKind::Quad:
      return "quad";
    case BoxKind::Arp:
      return "arp";
    case BoxKind::Doc:
      return "doc";
  }
  return "arp";
}

std::size_t box_kind_arity(BoxKind kind) {
  switch (kind) {
    case BoxKind::Quad:
      return 8;
    case BoxKind::Arp:
      return 7;
    case BoxKind::Doc:
      return 5;
  }
  return 0;
}

namespace {

void check_arity(const BoxSpec& spec) {
  if (spec.values.size() != box_kind_arity(spec.kind)) {
    throw InvalidBoxError(std::string(box_kind_name(spec.kind)) + " box needs " +
                          std::to_string(box_kind_arity(spec.kind)) +
                          " values, got " + std::to_string(spec.values.size()));
  }
  for (double v : spec.values) {
    if (!std::isfinite(v)) throw InvalidBoxError("box has non-finite values");
  }
}

geom::QuadBox raw_quad(const BoxSpec& spec) {
  const auto& v = spec.values;
  return repr::canonical_quad(
      {geom::Point2{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]}});
}

repr::ArpBox raw_arp(const BoxSpec& spec) {
  const auto& v = spec.values;
  repr::ArpBox box{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
  repr::check_valid(box);
  return box;
}

}  // namespace

geom::OrientedRect to_rect(const BoxSpec& spec) {
  check_arity(spec);
  switch (spec.kind) {
    case BoxKind::Doc:
      return geom::OrientedRect::make(spec.values[0], spec.values[1],
                                      spec.values[2], spec.values[3],
                                      spec.values[4]);
    case BoxKind::Quad:
      return repr::quad_to_rect(raw_quad(spec));
    case BoxKind::Arp:
      return repr::quad_to_rect(repr::decode_vertices(raw_arp(spec)));
  }
  throw InvalidBoxError("unknown box kind");
}

geom::QuadBox to_quad(const BoxSpec& spec) {
  check_arity(spec);
  switch (spec.kind) {
    case BoxKind::Quad:
      return raw_quad(spec);
    case BoxKind::Doc:
      return repr::rect_to_quad(to_rect(spec));
    case BoxKind::Arp:
      return repr::decode_vertices(raw_arp(spec));
  }
  throw InvalidBoxError("unknown box kind");
}

repr::ArpBox to_arp(const BoxSpec& spec) {
  check_arity(spec);
  if (spec.kind == BoxKind::Arp) return raw_arp(spec);
  return repr::encode_arp_or_hbb(to_rect(spec));
}

std::vector<DetectionRecord> parse_detections(std::string_view text) {
  std::vector<DetectionRecord> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (is_blank(lines[i])) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(lines[i]);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    try {
      DetectionRecord rec;
      rec.image = require(j, "image", line_no).get<std::string>();
      rec.category = require(j, "class", line_no).get<std::string>();
      rec.score = require(j, "score", line_no).get<double>();
      if (!(rec.score >= 0.0 && rec.score <= 1.0)) {
        throw ParseError(line_no, "score must be in [0, 1]");
      }
      const auto& box = require(j, "box", line_no);
      const auto kind = require(box, "kind", line_no).get<std::string>();
      try {
        rec.box.kind = parse_box_kind(kind);
      } catch (const InvalidBoxError& e) {
        throw ParseError(line_no, e.what());
      }
      rec.box.values =
          require(box, "values", line_no).get<std::vector<double>>();
      if (rec.box.values.size() != box_kind_arity(rec.box.kind)) {
        throw ParseError(line_no, kind + " box needs " +
                                      std::to_string(box_kind_arity(rec.box.kind)) +
                                      " values");
      }
      if (j.contains("obliquity_p")) {
        rec.obliquity_p = j.at("obliquity_p").get<double>();
        if (!(rec.obliquity_p >= 0.0 && rec.obliquity_p <= 1.0)) {
          throw ParseError(line_no, "obliquity_p must be in [0, 1]");
        }
      }
      if (rec.image.empty() || rec.category.empty()) {
        throw ParseError(line_no, "image and class must be non-empty");
      }
      out.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, std::string("schema violation: ") + e.what());
    }
  }
  return out;
}

std::string write_detections(std::span<const DetectionRecord> records) {
  std::string out;
  for (const auto& r : records) {
    ordered_json j;
    j["image"] = r.image;
    j["class"] = r.category;
    j["score"] = r.score;
    j["box"] = {{"kind", box_kind_name(r.box.kind)}, {"values", r.box.values}};
    j["obliquity_p"] = r.obliquity_p;
    out += j.dump();
    out += '\n';
  }
  return out;
}

int ClassVocabulary::id(const std::string& name) {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  const int next = static_cast<int>(names_.size());
  ids_.emplace(name, next);
  names_.push_back(name);
  return next;
}

int ClassVocabulary::find(const std::string& name) const {
  auto it = ids_.find(name);
  return it == ids_.end() ? -1 : it->second;
}

const std::string& ClassVocabulary::name(int id) const {
  return names_.at(static_cast<std::size_t>(id));
}

post::Detection to_detection(const DetectionRecord& rec,
                             ClassVocabulary& vocab) {
  return {to_arp(rec.box), rec.score, vocab.id(rec.category), rec.obliquity_p};
}

std::string to_string(const TileId& id) {
  return std::to_string(id.x) + "_" + std::to_string(id.y);
}

std::vector<int> tile_origins(int extent, int tile_size, int overlap) {
  if (tile_size <= 0 || overlap < 0 || overlap >= tile_size) {
    throw DomainError("tiles need 0 <= overlap < tile_size");
  }
  std::vector<int> out;
  const int stride = tile_size - overlap;
  for (int left = 0;; left += stride) {
    if (left + tile_size >= extent) {
      out.push_back(std::max(extent - tile_size, 0));
      break;
    }
    out.push_back(left);
  }
  return out;
}

std::map<TileId, std::vector<AnnotationRecord>> tile_annotations(
    std::span<const AnnotationRecord> records, int image_w, int image_h,
    const TileSpec& spec, double retain_ratio) {
  const auto xs = tile_origins(image_w, spec.tile_size, spec.overlap);
  const auto ys = tile_origins(image_h, spec.tile_size, spec.overlap);
  std::map<TileId, std::vector<AnnotationRecord>> out;
  for (int y0 : ys) {
    for (int x0 : xs) out[{x0, y0}];
  }

  for (const auto& rec : records) {
    const auto region = geom::to_polygon(rec.quad());
    const double area = geom::polygon_area(region);
    for (int y0 : ys) {
      for (int x0 : xs) {
        const double x1 = std::min(x0 + spec.tile_size, image_w);
        const double y1 = std::min(y0 + spec.tile_size, image_h);
        const auto tile = geom::ConvexPolygon::make(
            {{double(x0), double(y0)}, {x1, double(y0)}, {x1, y1},
             {double(x0), y1}});
        const auto inter = geom::clip_convex(region, tile);
        if (!inter) continue;
        const double kept = geom::polygon_area(*inter) / area;
        AnnotationRecord moved = rec;
        if (kept >= 1.0 - 1e-9) {
          // fully inside: keep the original vertices
        } else if (kept >= retain_ratio) {
          const auto pts = inter->vertices();
          if (pts.size() == 4) {
            std::copy(pts.begin(), pts.end(), moved.vertices.begin());
          } else {
            const auto fit = geom::corners(geom::min_area_rect(pts));
            for (std::size_t i = 0; i < 4; ++i) {
              moved.vertices[i] = {std::clamp(fit[i].x, double(x0), x1),
                                   std::clamp(fit[i].y, double(y0), y1)};
            }
          }
        } else {
          continue;
        }
        for (auto& p : moved.vertices) {
          p.x -= x0;
          p.y -= y0;
        }
        out[{x0, y0}].push_back(std::move(moved));
      }
    }
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path.string() + "'");
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

eval::GroundTruthByImage load_ground_truth(const std::filesystem::path& path,
                                           ClassVocabulary& vocab) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) {
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }

  eval::GroundTruthByImage out;
  for (const auto& file : files) {
    auto& list = out[file.stem().string()];
    for (const auto& rec : parse_dota(read_file(file))) {
      list.push_back({rec.quad(), vocab.id(rec.category), rec.difficult != 0});
    }
  }
  return out;
}

namespace {

std::string_view metric_name(eval::Metric m) {
  return m == eval::Metric::VOC07 ? "voc07" : "voc12";
}

}  // namespace

std::string report_json(const eval::EvalReport& report,
                        const ClassVocabulary& vocab) {
  ordered_json j;
  j["metric"] = metric_name(report.metric);
  j["iou_thr"] = report.iou_thr;
  j["map"] = report.map;
  j["precision"] = report.precision;
  j["recall"] = report.recall;
  j["f_measure"] = report.f_measure;
  auto classes = ordered_json::array();
  for (const auto& c : report.classes) {
    classes.push_back({{"class", vocab.name(c.class_id)},
                       {"num_gt", c.num_gt},
                       {"num_det", c.num_det},
                       {"ap07", c.ap07},
                       {"ap12", c.ap12},
                       {"precision", c.precision},
                       {"recall", c.recall},
                       {"f_measure", c.f_measure}});
  }
  j["classes"] = std::move(classes);
  return j.dump(2) + "\n";
}

std::string report_csv(const eval::EvalReport& report,
                       const ClassVocabulary& vocab) {
  std::string out = "class,ap07,ap12\n";
  char buf[64];
  for (const auto& c : report.classes) {
    out += vocab.name(c.class_id);
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f\n", c.ap07, c.ap12);
    out += buf;
  }
  return out;
}

}  // namespace arpbox::io
