#include "topoprobe/config.hpp"

#include <nlohmann/json.hpp>

#include "topoprobe/errors.hpp"
#include "topoprobe/io.hpp"

namespace topo {

namespace {

using json = nlohmann::json;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string scalar_to_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void flatten(const json& node, const std::string& prefix, KeyValueMap& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items())
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
  } else if (node.is_array()) {
    std::string joined;
    for (const auto& item : node) {
      if (!item.is_primitive())
        throw ConfigError("config arrays must hold scalars: " + prefix);
      if (!joined.empty()) joined += ',';
      joined += scalar_to_string(item);
    }
    out[prefix] = joined;
  } else {
    out[prefix] = scalar_to_string(node);
  }
}

}  // namespace

KeyValueMap parse_config_text(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError("invalid JSON config: " + std::string(e.what()));
    }
    KeyValueMap out;
    flatten(doc, "", out);
    return out;
  }

  KeyValueMap out;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        " is not a 'key = value' assignment: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + " has an empty key");
    out[key] = value;
  }
  return out;
}

KeyValueMap load_config_file(const std::filesystem::path& path) {
  return parse_config_text(read_text_file(path));
}

}  // namespace topo
