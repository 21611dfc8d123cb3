#include "mmfd/config_file.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mmfd {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& origin) {
    ConfigFile cf;
    cf.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') {
                throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                         ": malformed section header");
            }
            section = trim(t.substr(1, t.size() - 2));
            cf.sections_[section]; // materialize even if empty
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                     ": expected key = value");
        }
        cf.sections_[section].emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return cf;
}

bool ConfigFile::has_section(const std::string& section) const {
    return sections_.count(section) > 0;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    return get(section, key).has_value();
}

std::optional<std::string> ConfigFile::get(const std::string& section,
                                           const std::string& key) const {
    auto it = sections_.find(section);
    if (it == sections_.end()) return std::nullopt;
    std::optional<std::string> last;
    for (const auto& [k, v] : it->second) {
        if (k == key) last = v;
    }
    return last;
}

std::vector<std::string> ConfigFile::get_all(const std::string& section,
                                             const std::string& key) const {
    std::vector<std::string> out;
    auto it = sections_.find(section);
    if (it == sections_.end()) return out;
    for (const auto& [k, v] : it->second) {
        if (k == key) out.push_back(v);
    }
    return out;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
    auto v = get(section, key);
    return v ? *v : fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
    auto v = get(section, key);
    if (!v) return fallback;
    try {
        std::size_t pos = 0;
        const double d = std::stod(*v, &pos);
        if (!trim(v->substr(pos)).empty()) throw std::invalid_argument("");
        return d;
    } catch (const std::exception&) {
        throw std::runtime_error(origin_ + ": bad numeric value for " + section + "." + key +
                                 ": '" + *v + "'");
    }
}

std::int64_t ConfigFile::get_int(const std::string& section, const std::string& key,
                                 std::int64_t fallback) const {
    auto v = get(section, key);
    if (!v) return fallback;
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(*v, &pos);
        if (!trim(v->substr(pos)).empty()) throw std::invalid_argument("");
        return i;
    } catch (const std::exception&) {
        throw std::runtime_error(origin_ + ": bad integer value for " + section + "." + key +
                                 ": '" + *v + "'");
    }
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
    auto v = get(section, key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
    throw std::runtime_error(origin_ + ": bad boolean value for " + section + "." + key + ": '" +
                             *v + "'");
}

std::vector<std::string> ConfigFile::get_list(const std::string& section,
                                              const std::string& key) const {
    std::vector<std::string> out;
    auto v = get(section, key);
    if (!v) return out;
    std::istringstream in(*v);
    std::string item;
    while (std::getline(in, item, ',')) {
        const std::string t = trim(item);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

} // namespace mmfd
