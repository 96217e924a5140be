#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "grcsim/plants.hpp"

namespace grcsim {

/// Configuration error carrying `path:line:` context.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Line-oriented `[section]` + `key = value` file. `#` and `;` start
/// comments. Keys are addressed as "section.key"; every key must be
/// consumed or `finish()` rejects it as unknown.
class KvFile {
public:
    static KvFile load(const std::string& path);
    static KvFile from_string(const std::string& text, const std::string& name = "<string>");

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key);
    double get_real(const std::string& section, const std::string& key);
    long get_int(const std::string& section, const std::string& key);

    std::optional<std::string> opt_string(const std::string& section, const std::string& key);
    std::optional<double> opt_real(const std::string& section, const std::string& key);
    std::optional<long> opt_int(const std::string& section, const std::string& key);

    /// Throws ConfigError naming the first unconsumed key.
    void finish() const;

    [[noreturn]] void fail(const std::string& section, const std::string& key,
                           const std::string& message) const;

    const std::string& path() const { return path_; }

private:
    struct Entry {
        std::string value;
        int line;
    };
    std::string path_;
    std::map<std::string, Entry> entries_;  // "section.key" -> entry
    std::set<std::string> consumed_;

    const Entry* find(const std::string& section, const std::string& key) const;
};

/// Loads one family's parameter file (section named after the family,
/// SI values) into the matching member of `params`.
void load_plant_params(const std::string& path, PlantFamily family, PlantParams& params);

}  // namespace grcsim
