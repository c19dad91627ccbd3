#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace selprior::cli {

// Flat key = value configuration with [section] headers.  Lines starting
// with '#' or ';' are comments.  Keys outside any section are global.
class KvConfig {
public:
    static KvConfig parse_file(const std::string& path);
    static KvConfig parse_string(const std::string& text, const std::string& origin);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    long get_long(const std::string& section, const std::string& key,
                  long fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 const std::vector<double>& fallback) const;
    std::vector<std::string> get_words(const std::string& section,
                                       const std::string& key,
                                       const std::vector<std::string>& fallback) const;

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

std::vector<double> parse_double_list(const std::string& text);

} // namespace selprior::cli
