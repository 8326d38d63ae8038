// config.hpp — sectioned plain-text run configs with line-numbered errors and
// strict key checking.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mfa/potential.hpp"
#include "mfa/shift_space.hpp"

namespace mfa {

// Format:
//   # comment (also after values)
//   [section]
//   key = value        (keys may repeat where documented, e.g. `row`)
struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
};

struct ConfigSection {
    std::string name;
    int line = 0;
    std::vector<ConfigEntry> entries;

    std::optional<std::string> get(const std::string& key) const;
    std::string require(const std::string& key) const; // throws ConfigError
    std::vector<std::string> get_all(const std::string& key) const;
    int line_of(const std::string& key) const;

    double require_double(const std::string& key) const;
    int require_int(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::vector<int> get_int_list(const std::string& key) const;      // comma separated
    std::vector<double> get_double_list(const std::string& key) const;
};

class ConfigFile {
public:
    static ConfigFile parse_text(const std::string& text);
    static ConfigFile parse_file(const std::string& path);

    const ConfigSection* section(const std::string& name) const;
    const ConfigSection& require_section(const std::string& name) const;
    const std::vector<ConfigSection>& sections() const { return sections_; }

    // rejects keys outside `allowed`; word_keys additionally accepts digit
    // strings (potential tables)
    static void check_keys(const ConfigSection& sec, const std::set<std::string>& allowed,
                           bool word_keys = false);

private:
    std::vector<ConfigSection> sections_;
};

// [shift] alphabet = k, one `row = 0/1 string` per symbol, in order.
ShiftSpace shift_from_config(const ConfigFile& cfg);

// [name] memory = m plus one `word = value` line per admissible word.
Potential potential_from_config(const ConfigFile& cfg, const ShiftSpace& space,
                                const std::string& name);

double parse_double(const std::string& text, int line);
int parse_int(const std::string& text, int line);

} // namespace mfa
