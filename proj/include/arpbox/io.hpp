// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

// Annotation and detection file formats.
//
// DOTA annotation lines:
//
//   imagesource:GoogleEarth          (optional header)
//   gsd:0.146343590398               (optional header)
//   x1 y1 x2 y2 x3 y3 x4 y4 category difficult
//
// Detection stream, one JSON object per line:
//
//   {"image": "P0001", "class": "ship", "score": 0.93,
//    "box": {"kind": "arp", "values": [x, y, w, h, l1, l2, l3]}}
//
// "kind" is one of "quad" (8 values), "arp" (7) or "doc" (5: cx, cy, w,
// h, theta in radians). "obliquity_p" is optional.

#pragma once

#include <array>
#include <compare>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arpbox/eval.hpp"
#include "arpbox/geom.hpp"
#include "arpbox/post.hpp"
#include "arpbox/repr.hpp"

namespace arpbox::io {

struct AnnotationRecord {
  // Vertices in file order.
  std::array<geom::Point2, 4> vertices{};
  std::string category;
  int difficult = 0;

  geom::QuadBox quad() const { return repr::canonical_quad(vertices); }
  friend bool operator==(const AnnotationRecord&,
                         const AnnotationRecord&) = default;
};

struct DotaDocument {
  std::vector<std::string> header;
  std::vector<AnnotationRecord> records;
};

/// Throws ParseError with the 1-based line number of the first bad line.
std::vector<AnnotationRecord> parse_dota(std::string_view text);
DotaDocument parse_dota_document(std::string_view text);

/// Canonical form: coordinates with at most six decimals and no trailing
/// zeros, single spaces, LF endings. Throws InvalidBoxError on non-finite
/// coordinates.
std::string write_dota(std::span<const AnnotationRecord> records);
std::string write_dota_document(const DotaDocument& doc);
std::string format_coord(double v);

enum class BoxKind { Quad, Arp, Doc };

struct BoxSpec {
  BoxKind kind = BoxKind::Arp;
  std::vector<double> values;
};

BoxKind parse_box_kind(std::string_view name);
std::string_view box_kind_name(BoxKind kind);
std::size_t box_kind_arity(BoxKind kind);

/// Converts any box form to area ratios. Oriented inputs close to
/// axis-aligned come back as their circumscribed box (see
/// repr::encode_arp_or_hbb).
repr::ArpBox to_arp(const BoxSpec& spec);
geom::OrientedRect to_rect(const BoxSpec& spec);
geom::QuadBox to_quad(const BoxSpec& spec);

struct DetectionRecord {
  std::string image;
  std::string category;
  double score = 0.0;
  BoxSpec box;
  double obliquity_p = 0.5;
};

std::vector<DetectionRecord> parse_detections(std::string_view text);
std::string write_detections(std::span<const DetectionRecord> records);

/// Category names to dense integer ids, in first-seen order.
class ClassVocabulary {
 public:
  int id(const std::string& name);
  int find(const std::string& name) const;  // -1 when unknown
  const std::string& name(int id) const;
  std::size_t size() const { return names_.size(); }

 private:
  std::map<std::string, int> ids_;
  std::vector<std::string> names_;
};

post::Detection to_detection(const DetectionRecord& rec,
                             ClassVocabulary& vocab);

struct TileSpec {
  int tile_size = 1024;
  int overlap = 200;
};

struct TileId {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const TileId&, const TileId&) = default;
};

std::string to_string(const TileId& id);

/// Tile origins along one axis: stride tile - overlap, with the last tile
/// shifted back to end on the image border.
std::vector<int> tile_origins(int extent, int tile_size, int overlap);

/// Assigns every annotation to each tile it overlaps, in tile
/// coordinates. A record fully inside a tile is translated unchanged; a
/// clipped record is kept only when at least `retain_ratio` of its area
/// survives, as the clipped quad (or the enclosing rectangle of the
/// clipped polygon when clipping does not leave four vertices).
std::map<TileId, std::vector<AnnotationRecord>> tile_annotations(
    std::span<const AnnotationRecord> records, int image_w, int image_h,
    const TileSpec& spec, double retain_ratio = 0.5);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Reads one DOTA file, or every *.txt in a directory; the image id is
/// the file stem.
eval::GroundTruthByImage load_ground_truth(const std::filesystem::path& path,
                                           ClassVocabulary& vocab);

std::string report_json(const eval::EvalReport& report,
                        const ClassVocabulary& vocab);
std::string report_csv(const eval::EvalReport& report,
                       const ClassVocabulary& vocab);

}  // namespace arpbox::io
