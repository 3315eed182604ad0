// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

// Run configuration shared by the command-line tools.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "arpbox/loss.hpp"
#include "arpbox/repr.hpp"

namespace arpbox {

struct FitSettings {
  int steps = 500;
  double lr = 0.05;
  double fd_step = 1e-5;
};

struct Config {
  double lambda_thr = repr::kDefaultLambdaThr;
  double nms_iou = 0.5;
  double match_iou = 0.5;
  loss::LossWeights weights;
  FitSettings fit;
  std::uint64_t seed = 0;
};

enum class Profile { Dota, Hrsc, Ucas, Icdar };

/// Obliquity threshold tuned for each dataset.
double profile_lambda_thr(Profile profile);
std::optional<Profile> parse_profile(std::string_view name);
std::string_view profile_name(Profile profile);

/// Throws DomainError naming the first out-of-range field.
void validate(const Config& config);

/// Reads a JSON object; missing keys keep the values already in `base`
/// and unknown keys are rejected. Throws ParseError on malformed JSON.
Config merge_config_json(const Config& base, std::string_view json_text);
std::string to_json(const Config& config);

}  // namespace arpbox
