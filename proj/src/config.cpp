// config.cpp
#include "mfa/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace mfa {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool is_word_key(const std::string& key) {
    return !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
        return c >= '0' && c <= '9';
    });
}

} // namespace

double parse_double(const std::string& text, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("expected a number, got '" + text + "'", line);
    }
}

int parse_int(const std::string& text, int line) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("expected an integer, got '" + text + "'", line);
    }
}

std::optional<std::string> ConfigSection::get(const std::string& key) const {
    for (const auto& e : entries)
        if (e.key == key) return e.value;
    return std::nullopt;
}

std::string ConfigSection::require(const std::string& key) const {
    auto v = get(key);
    if (!v) throw ConfigError("section [" + name + "] is missing key '" + key + "'", line);
    return *v;
}

std::vector<std::string> ConfigSection::get_all(const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& e : entries)
        if (e.key == key) out.push_back(e.value);
    return out;
}

int ConfigSection::line_of(const std::string& key) const {
    for (const auto& e : entries)
        if (e.key == key) return e.line;
    return line;
}

double ConfigSection::require_double(const std::string& key) const {
    return parse_double(require(key), line_of(key));
}

int ConfigSection::require_int(const std::string& key) const {
    return parse_int(require(key), line_of(key));
}

double ConfigSection::get_double(const std::string& key, double fallback) const {
    auto v = get(key);
    return v ? parse_double(*v, line_of(key)) : fallback;
}

int ConfigSection::get_int(const std::string& key, int fallback) const {
    auto v = get(key);
    return v ? parse_int(*v, line_of(key)) : fallback;
}

std::string ConfigSection::get_string(const std::string& key, const std::string& fallback) const {
    auto v = get(key);
    return v ? *v : fallback;
}

std::vector<int> ConfigSection::get_int_list(const std::string& key) const {
    std::vector<int> out;
    const std::string text = require(key);
    const int ln = line_of(key);
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_int(trim(item), ln));
    if (out.empty()) throw ConfigError("empty list for key '" + key + "'", ln);
    return out;
}

std::vector<double> ConfigSection::get_double_list(const std::string& key) const {
    std::vector<double> out;
    const std::string text = require(key);
    const int ln = line_of(key);
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), ln));
    if (out.empty()) throw ConfigError("empty list for key '" + key + "'", ln);
    return out;
}

ConfigFile ConfigFile::parse_text(const std::string& text) {
    ConfigFile cfg;
    std::stringstream ss(text);
    std::string raw;
    int line_no = 0;
    ConfigSection* cur = nullptr;
    while (std::getline(ss, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("unterminated section header", line_no);
            ConfigSection sec;
            sec.name = trim(s.substr(1, s.size() - 2));
            sec.line = line_no;
            if (sec.name.empty()) throw ConfigError("empty section name", line_no);
            cfg.sections_.push_back(std::move(sec));
            cur = &cfg.sections_.back();
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value', got '" + s + "'", line_no);
        if (!cur) throw ConfigError("key outside any [section]", line_no);
        ConfigEntry e;
        e.key = trim(s.substr(0, eq));
        e.value = trim(s.substr(eq + 1));
        e.line = line_no;
        if (e.key.empty()) throw ConfigError("empty key", line_no);
        cur->entries.push_back(std::move(e));
    }
    return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

const ConfigSection* ConfigFile::section(const std::string& name) const {
    for (const auto& s : sections_)
        if (s.name == name) return &s;
    return nullptr;
}

const ConfigSection& ConfigFile::require_section(const std::string& name) const {
    const ConfigSection* s = section(name);
    if (!s) throw ConfigError("missing required section [" + name + "]");
    return *s;
}

void ConfigFile::check_keys(const ConfigSection& sec, const std::set<std::string>& allowed,
                            bool word_keys) {
    for (const auto& e : sec.entries) {
        if (allowed.count(e.key)) continue;
        if (word_keys && is_word_key(e.key)) continue;
        throw ConfigError("unknown key '" + e.key + "' in section [" + sec.name + "]", e.line);
    }
}

ShiftSpace shift_from_config(const ConfigFile& cfg) {
    const ConfigSection& sec = cfg.require_section("shift");
    ConfigFile::check_keys(sec, {"alphabet", "row"});
    const int k = sec.require_int("alphabet");
    std::vector<std::vector<int>> rows;
    for (const auto& e : sec.entries) {
        if (e.key != "row") continue;
        if (static_cast<int>(e.value.size()) != k)
            throw ConfigError("transition row '" + e.value + "' must have " + std::to_string(k) +
                              " characters",
                              e.line);
        std::vector<int> row;
        for (char c : e.value) {
            if (c != '0' && c != '1')
                throw ConfigError("transition rows are 0/1 strings, got '" + e.value + "'",
                                  e.line);
            row.push_back(c - '0');
        }
        rows.push_back(std::move(row));
    }
    if (static_cast<int>(rows.size()) != k)
        throw ConfigError("expected " + std::to_string(k) + " transition rows, got " +
                          std::to_string(rows.size()),
                          sec.line);
    try {
        return ShiftSpace(k, rows);
    } catch (const ConfigError& err) {
        throw ConfigError(std::string(err.what()), sec.line);
    }
}

Potential potential_from_config(const ConfigFile& cfg, const ShiftSpace& space,
                                const std::string& name) {
    const ConfigSection& sec = cfg.require_section(name);
    ConfigFile::check_keys(sec, {"memory"}, /*word_keys=*/true);
    const int memory = sec.require_int("memory");
    std::map<Word, double> table;
    for (const auto& e : sec.entries) {
        if (e.key == "memory") continue;
        Word w;
        try {
            w = word_from_string(e.key);
        } catch (const ConfigError&) {
            throw ConfigError("bad table word '" + e.key + "'", e.line);
        }
        if (table.count(w)) throw ConfigError("duplicate table word '" + e.key + "'", e.line);
        table[w] = parse_double(e.value, e.line);
    }
    try {
        return Potential(space, memory, table);
    } catch (const ConfigError& err) {
        throw ConfigError(std::string(err.what()), sec.line);
    }
}

} // namespace mfa
