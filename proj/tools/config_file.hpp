#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pnrmzi::cli {

/// Reads `key = value` lines. Blank lines and lines starting with '#' are skipped.
/// Throws std::runtime_error on unreadable files or lines without '='.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

/// Rewrites argv so that config entries become flags. Entries whose flag already
/// appears on the command line are dropped, so explicit flags win. Global keys go
/// before the subcommand, the rest right after it.
std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::vector<std::string>& subcommands,
                                      const std::vector<std::string>& global_keys);

}  // namespace pnrmzi::cli
