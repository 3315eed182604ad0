// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

#include "arpbox/config.hpp"

#include <cmath>
#include <set>

#include "arpbox/errors.hpp"
#include "json.hpp"

namespace arpbox {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ParseError(1, where + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ParseError(1, "unknown config key '" + where + key + "'");
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

bool in_unit(double v) { return v > 0.0 && v <= 1.0; }

}  // namespace

double profile_lambda_thr(Profile profile) {
  switch (profile) {
    case Profile::Dota:
      return 0.94;
    case Profile::Hrsc:
      return 0.92;
    case Profile::Ucas:
      return 0.96;
    case Profile::Icdar:
      return 0.91;
  }
  return repr::kDefaultLambdaThr;
}

std::optional<Profile> parse_profile(std::string_view name) {
  if (name == "dota") return Profile::Dota;
  if (name == "hrsc") return Profile::Hrsc;
  if (name == "ucas") return Profile::Ucas;
  if (name == "icdar") return Profile::Icdar;
  return std::nullopt;
}

std::string_view profile_name(Profile profile) {
  switch (profile) {
    case Profile::Dota:
      return "dota";
    case Profile::Hrsc:
      return "hrsc";
    case Profile::Ucas:
      return "ucas";
    case Profile::Icdar:
      return "icdar";
  }
  return "dota";
}

void validate(const Config& c) {
  if (!in_unit(c.lambda_thr)) throw DomainError("lambda_thr must be in (0, 1]");
  if (!in_unit(c.nms_iou)) throw DomainError("nms_iou must be in (0, 1]");
  if (!in_unit(c.match_iou)) throw DomainError("match_iou must be in (0, 1]");
  for (double w : {c.weights.box, c.weights.obj, c.weights.cls,
                   c.weights.alpha}) {
    if (!std::isfinite(w) || w < 0.0) {
      throw DomainError("loss weights must be finite and non-negative");
    }
  }
  if (c.fit.steps < 0) throw DomainError("fit.steps must be >= 0");
  if (!std::isfinite(c.fit.lr) || c.fit.lr < 0.0) {
    throw DomainError("fit.lr must be finite and >= 0");
  }
  if (!(c.fit.fd_step > 0.0) || !std::isfinite(c.fit.fd_step)) {
    throw DomainError("fit.fd_step must be finite and > 0");
  }
}

Config merge_config_json(const Config& base, std::string_view json_text) {
  Config c = base;
  try {
    const json j = json::parse(json_text);
    check_keys(j,
               {"lambda_thr", "nms_iou", "match_iou", "weights", "fit", "seed"},
               "");
    read(j, "lambda_thr", c.lambda_thr);
    read(j, "nms_iou", c.nms_iou);
    read(j, "match_iou", c.match_iou);
    read(j, "seed", c.seed);
    if (j.contains("weights")) {
      const auto& w = j.at("weights");
      check_keys(w, {"box", "obj", "cls", "alpha"}, "weights.");
      read(w, "box", c.weights.box);
      read(w, "obj", c.weights.obj);
      read(w, "cls", c.weights.cls);
      read(w, "alpha", c.weights.alpha);
    }
    if (j.contains("fit")) {
      const auto& f = j.at("fit");
      check_keys(f, {"steps", "lr", "fd_step"}, "fit.");
      read(f, "steps", c.fit.steps);
      read(f, "lr", c.fit.lr);
      read(f, "fd_step", c.fit.fd_step);
    }
  } catch (const json::parse_error& e) {
    throw ParseError(1, std::string("invalid config JSON: ") + e.what());
  } catch (const json::exception& e) {
    throw ParseError(1, std::string("bad config value: ") + e.what());
  }
  return c;
}

std::string to_json(const Config& c) {
  nlohmann::ordered_json j;
  j["lambda_thr"] = c.lambda_thr;
  j["nms_iou"] = c.nms_iou;
  j["match_iou"] = c.match_iou;
  j["weights"] = {{"box", c.weights.box},
                  {"obj", c.weights.obj},
                  {"cls", c.weights.cls},
                  {"alpha", c.weights.alpha}};
  j["fit"] = {{"steps", c.fit.steps},
              {"lr", c.fit.lr},
              {"fd_step", c.fit.fd_step}};
  j["seed"] = c.seed;
  return j.dump(2) + "\n";
}

}  // namespace arpbox
