#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vtrack/config.hpp"

namespace vtrack::cli {

/// Tracker settings plus run options read from a `key = value` config file.
struct RunConfig {
    TrackerConfig tracker;
    int stride = 1;
};

/// Lines are `key = value`; `#` starts a comment. Unknown keys and malformed
/// values are reported with `source:line`. The result is validated.
RunConfig parse_config(std::istream& in, const std::string& source);
RunConfig load_config(const std::string& path);
/// Every key in config-file syntax; parse_config() reads it back.
void write_config(std::ostream& out, const RunConfig& config);

/// Runs a subcommand (`args` excludes the program name). Errors are reported as
/// one line on `err` with a nonzero status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vtrack::cli
