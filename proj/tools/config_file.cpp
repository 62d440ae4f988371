#include "config_file.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace pnrmzi::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(number) + ": expected key = value");
    }
    std::string key = trim(t.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    out.emplace_back(key, trim(t.substr(eq + 1)));
  }
  return out;
}

std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::vector<std::string>& subcommands,
                                      const std::vector<std::string>& global_keys) {
  std::string config_path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_path.empty()) return rest;

  std::size_t sub_pos = rest.size();
  for (std::size_t i = 1; i < rest.size(); ++i) {
    if (std::find(subcommands.begin(), subcommands.end(), rest[i]) != subcommands.end()) {
      sub_pos = i;
      break;
    }
  }

  std::vector<std::string> global_flags;
  std::vector<std::string> local_flags;
  for (const auto& [key, value] : read_config_file(config_path)) {
    const std::string flag = "--" + key;
    if (has_flag(rest, flag)) continue;
    const bool global = std::find(global_keys.begin(), global_keys.end(), key) != global_keys.end();
    std::string entry = flag;
    if (value != "true") entry += "=" + value;
    (global ? global_flags : local_flags).push_back(entry);
  }

  std::vector<std::string> out(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(std::min(sub_pos, rest.size())));
  out.insert(out.begin() + 1, global_flags.begin(), global_flags.end());
  if (sub_pos < rest.size()) {
    out.push_back(rest[sub_pos]);
    out.insert(out.end(), local_flags.begin(), local_flags.end());
    out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1, rest.end());
  }
  return out;
}

}  // namespace pnrmzi::cli
