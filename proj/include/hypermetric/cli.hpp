#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hypermetric/io.hpp"

namespace hypermetric::cli {

enum ExitCode { kOk = 0, kUsage = 1, kPrecondition = 2, kNonConvergence = 3 };

/// Every tunable of a job with its default value. Config files and flags
/// overlay this document; the resolved result is echoed under "config".
Json default_config();

/// Overlays `patch` on `base`; unknown keys are a ConfigError.
void overlay(Json& base, const Json& patch, const std::string& where = "config");

/// Runs one fully resolved job and returns the result document.
Json execute(const Json& config, std::ostream* trace_csv = nullptr);

/// Entry point: args excludes the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace hypermetric::cli
