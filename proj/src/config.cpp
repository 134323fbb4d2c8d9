#include "clubrank/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "clubrank/errors.hpp"

namespace clubrank {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

}  // namespace

std::optional<std::string> ConfigSection::get(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    return it->second;
}

double ConfigSection::get_double(const std::string& key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
        std::size_t pos = 0;
        const double d = std::stod(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument(*v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + name + "." + key + "' is not a number: " + *v);
    }
}

int ConfigSection::get_int(const std::string& key, int fallback) const {
    const double d = get_double(key, fallback);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d) {
        throw ConfigError("config key '" + name + "." + key + "' is not an integer");
    }
    return i;
}

bool ConfigSection::get_bool(const std::string& key, bool fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    if (*v == "true") return true;
    if (*v == "false") return false;
    throw ConfigError("config key '" + name + "." + key + "' is not true/false: " + *v);
}

std::vector<double> ConfigSection::get_double_list(const std::string& key) const {
    auto v = get(key);
    if (!v) return {};
    std::vector<double> out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("config key '" + name + "." + key + "' has a non-numeric item: " + item);
        }
    }
    return out;
}

const ConfigSection* Config::find(const std::string& name) const {
    for (const auto& s : sections) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

std::vector<const ConfigSection*> Config::find_all(const std::string& name) const {
    std::vector<const ConfigSection*> out;
    for (const auto& s : sections) {
        if (s.name == name) out.push_back(&s);
    }
    return out;
}

Config parse_config(const std::string& text) {
    Config config;
    config.sections.push_back(ConfigSection{"", {}});  // top-level keys

    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", line_no);
            config.sections.push_back(ConfigSection{trim(line.substr(1, line.size() - 2)), {}});
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = unquote(trim(line.substr(eq + 1)));
        if (key.empty()) throw ParseError("empty key", line_no);
        config.sections.back().values[key] = value;
    }
    return config;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace clubrank
