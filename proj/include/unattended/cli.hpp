// Copyright (c) 2026 The Unattended Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace unattended::cli {

/// Runs one CLI invocation. argv excludes the program name.
/// Exit status: 0 success, 1 operational error, 2 usage error.
int run_cli(const std::vector<std::string>& argv, std::ostream& out,
            std::ostream& err);

}  // namespace unattended::cli
