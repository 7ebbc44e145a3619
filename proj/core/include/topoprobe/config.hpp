#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace topo {

using KeyValueMap = std::map<std::string, std::string>;

// Flat "section.key = value" grammar: one assignment per line, '#' comments,
// blank lines ignored. A document whose first non-space character is '{' is
// parsed as JSON instead: nested objects flatten to dotted keys and arrays of
// scalars join with commas.
KeyValueMap parse_config_text(const std::string& text);
KeyValueMap load_config_file(const std::filesystem::path& path);

}  // namespace topo
