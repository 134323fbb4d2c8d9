#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace clubrank {

// Flat TOML-style configuration: `[section]` headers followed by
// `key = value` lines. Values are strings, numbers or true/false; `#` starts
// a comment. Repeated sections are kept in file order (the points rules use
// one section per rulebook era).
struct ConfigSection {
    std::string name;
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) > 0; }
    std::optional<std::string> get(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    // Comma-separated list of doubles, e.g. `mov_table = 1, 1, 1.5, 1.75`.
    std::vector<double> get_double_list(const std::string& key) const;
};

struct Config {
    std::vector<ConfigSection> sections;

    const ConfigSection* find(const std::string& name) const;
    std::vector<const ConfigSection*> find_all(const std::string& name) const;
};

Config parse_config(const std::string& text);
Config load_config(const std::string& path);

}  // namespace clubrank
