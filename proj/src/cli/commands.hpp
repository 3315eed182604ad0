// Copyright 2026 The arpbox Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace arpbox::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitDomain = 2;

/// Runs the tool with `args` (excluding the program name). Returns the
/// process exit code: 0 on success, 1 for unreadable or malformed input
/// files, 2 for invalid boxes, parameters or usage.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace arpbox::cli
