#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mmfd {

/// Flat sectioned key = value file. Lines starting with '#' or ';' are
/// comments; values keep everything after the '=' (trimmed). Repeated keys
/// within a section accumulate in order.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;
    std::optional<std::string> get(const std::string& section, const std::string& key) const;
    std::vector<std::string> get_all(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

    /// Comma-separated list value.
    std::vector<std::string> get_list(const std::string& section, const std::string& key) const;

    const std::string& origin() const { return origin_; }
    bool has_section(const std::string& section) const;

private:
    std::string origin_;
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections_;
};

std::string trim(const std::string& s);

} // namespace mmfd
