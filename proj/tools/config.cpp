#include "config.hpp"

#include "selprior/errors.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace selprior::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

} // namespace

KvConfig KvConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

KvConfig KvConfig::parse_string(const std::string& text, const std::string& origin) {
    KvConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3) {
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": malformed section header");
            }
            section = trim(t.substr(1, t.size() - 2));
            cfg.sections_[section];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected key = value");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        }
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

bool KvConfig::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string KvConfig::get(const std::string& section, const std::string& key,
                          const std::string& fallback) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

double KvConfig::get_double(const std::string& section, const std::string& key,
                            double fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key, "");
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' = '" + v + "' is not a number");
    }
}

long KvConfig::get_long(const std::string& section, const std::string& key,
                        long fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key, "");
    long out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ConfigError("config: key '" + key + "' = '" + v + "' is not an integer");
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        const std::string t = trim(item);
        if (t.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(t, &used));
            if (used != t.size()) throw std::invalid_argument(t);
        } catch (const std::exception&) {
            throw ConfigError("config: '" + t + "' is not a number");
        }
    }
    return out;
}

std::vector<double> KvConfig::get_list(const std::string& section,
                                       const std::string& key,
                                       const std::vector<double>& fallback) const {
    if (!has(section, key)) return fallback;
    return parse_double_list(get(section, key, ""));
}

std::vector<std::string> KvConfig::get_words(
    const std::string& section, const std::string& key,
    const std::vector<std::string>& fallback) const {
    if (!has(section, key)) return fallback;
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(get(section, key, ""));
    while (std::getline(in, item, ',')) {
        const std::string t = trim(item);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

} // namespace selprior::cli
