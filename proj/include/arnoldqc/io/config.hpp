#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace arnoldqc::io {

/// Carries one "source:line: message" diagnostic per offending line.
class ConfigError : public std::runtime_error
{
public:
    explicit ConfigError(std::vector<std::string> diagnostics)
        : std::runtime_error(join(diagnostics)), diagnostics_(std::move(diagnostics))
    {
    }

    const std::vector<std::string>& diagnostics() const { return diagnostics_; }

private:
    static std::string join(const std::vector<std::string>& lines)
    {
        std::string s;
        for (const auto& l : lines)
            s += (s.empty() ? "" : "\n") + l;
        return s;
    }

    std::vector<std::string> diagnostics_;
};

struct ConfigEntry
{
    std::string key;
    std::string value;
    int line;
};

namespace detail {

inline std::string trim(const std::string& s)
{
    auto b = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
    auto e = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); }).base();
    return b < e ? std::string(b, e) : std::string();
}

inline bool valid_key(const std::string& k)
{
    if (k.empty())
        return false;
    return std::all_of(k.begin(), k.end(), [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '.' || c == '-'; });
}

} // namespace detail

/// Flat key = value file. Blank lines and lines starting with '#' are
/// skipped; a '#' after the value starts a trailing comment. Every malformed
/// line is reported, not just the first.
class Config
{
public:
    static Config parse(std::istream& in, const std::string& source = "config")
    {
        std::vector<std::string> errors;
        Config cfg = parse(in, source, errors);
        if (!errors.empty())
            throw ConfigError(std::move(errors));
        return cfg;
    }

    /// Lenient form: malformed lines are skipped and described in `errors`,
    /// so callers can append their own diagnostics before failing.
    static Config parse(std::istream& in, const std::string& source, std::vector<std::string>& errors)
    {
        Config cfg;
        cfg.source_ = source;
        std::map<std::string, int> seen;
        std::string raw;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            auto hash = raw.find('#');
            std::string text = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (text.empty())
                continue;
            auto eq = text.find('=');
            if (eq == std::string::npos) {
                errors.push_back(source + ":" + std::to_string(line) + ": expected 'key = value'");
                continue;
            }
            std::string key = detail::trim(text.substr(0, eq));
            std::string value = detail::trim(text.substr(eq + 1));
            if (!detail::valid_key(key)) {
                errors.push_back(source + ":" + std::to_string(line) + ": invalid key '" + key + "'");
                continue;
            }
            if (value.empty()) {
                errors.push_back(source + ":" + std::to_string(line) + ": empty value for '" + key + "'");
                continue;
            }
            if (auto it = seen.find(key); it != seen.end()) {
                errors.push_back(source + ":" + std::to_string(line) + ": duplicate key '" + key + "' (first set on line "
                                 + std::to_string(it->second) + ")");
                continue;
            }
            seen[key] = line;
            cfg.entries_.push_back({key, value, line});
        }
        return cfg;
    }

    const std::vector<ConfigEntry>& entries() const { return entries_; }
    const std::string& source() const { return source_; }

    const ConfigEntry* find(const std::string& key) const
    {
        for (const auto& e : entries_)
            if (e.key == key)
                return &e;
        return nullptr;
    }

    /// Diagnostic prefix for an entry.
    std::string where(const ConfigEntry& e) const { return source_ + ":" + std::to_string(e.line) + ": "; }

private:
    std::string source_;
    std::vector<ConfigEntry> entries_;
};

/// Strict numeric conversions: the whole value must parse and be finite.
inline bool parse_double(const std::string& s, double& out)
{
    if (s.empty())
        return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(out);
}

inline bool parse_int(const std::string& s, long& out)
{
    if (s.empty())
        return false;
    char* end = nullptr;
    out = std::strtol(s.c_str(), &end, 10);
    return end == s.c_str() + s.size();
}

/// Comma-separated doubles; false on any malformed element.
inline bool parse_double_list(const std::string& s, std::vector<double>& out)
{
    out.clear();
    std::size_t start = 0;
    while (true) {
        auto comma = s.find(',', start);
        std::string item = detail::trim(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        double v;
        if (!parse_double(item, v))
            return false;
        out.push_back(v);
        if (comma == std::string::npos)
            return true;
        start = comma + 1;
    }
}

} // namespace arnoldqc::io
