#ifndef SECTLABEL_CONFIG_HPP
#define SECTLABEL_CONFIG_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

namespace sectlabel {

// Flat key/value configuration parsed from a TOML-style file:
// [section] headers prefix keys as "section.key", values may be quoted
// strings, numbers, or booleans, '#' starts a comment. CLI --set overrides
// land on top via set().
class Config {
public:
    Config() = default;

    static Config load(const std::string& path);
    static Config from_string(const std::string& text, const std::string& origin = "<string>");

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::array<double, 3> get_ratios(const std::string& key,
                                     const std::array<double, 3>& fallback) const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

} // namespace sectlabel

#endif
