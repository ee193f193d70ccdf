#pragma once

// Flat "key = value" configuration files with [section] headers.  Values are
// stored as strings under "section.key"; the echo is byte-reproducible so a
// rerun from the echo reproduces the original run bit for bit.

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rarewave {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class Config {
  public:
    Config() = default;

    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("config: cannot open " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    static Config parse(const std::string& text) {
        Config cfg;
        std::string section;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("config: bad section header at line " + std::to_string(lineno));
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("config: empty key at line " + std::to_string(lineno));
            cfg.values_[section.empty() ? key : section + "." + key] = value;
        }
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }
    std::string require_string(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("config: missing required key '" + key + "'");
        return it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : to_double(key, it->second);
    }
    double require_double(const std::string& key) const { return to_double(key, require_string(key)); }

    long get_int(const std::string& key, long fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return std::stol(it->second);
    }

    bool get_bool(const std::string& key, bool fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        throw ConfigError("config: key '" + key + "' is not a boolean");
    }

    // whitespace-separated list of doubles
    std::vector<double> get_doubles(const std::string& key) const {
        std::vector<double> out;
        auto it = values_.find(key);
        if (it == values_.end()) return out;
        std::istringstream in(it->second);
        double v;
        while (in >> v) out.push_back(v);
        return out;
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    void set(const std::string& key, double value) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", value);
        values_[key] = buf;
    }
    void set(const std::string& key, long value) { values_[key] = std::to_string(value); }

    // deterministic echo: keys sorted, one section per block
    std::string echo() const {
        std::map<std::string, std::map<std::string, std::string>> grouped;
        for (const auto& [k, v] : values_) {
            auto dot = k.find('.');
            if (dot == std::string::npos)
                grouped[""][k] = v;
            else
                grouped[k.substr(0, dot)][k.substr(dot + 1)] = v;
        }
        std::string out;
        for (const auto& [sec, kv] : grouped) {
            if (!sec.empty()) out += "[" + sec + "]\n";
            for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
        }
        return out;
    }

  private:
    static std::string trim(const std::string& s) {
        auto a = s.find_first_not_of(" \t\r");
        auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    }
    static double to_double(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            double d = std::stod(v, &pos);
            return d;
        } catch (...) {
            throw ConfigError("config: key '" + key + "' is not a number: " + v);
        }
    }

    std::map<std::string, std::string> values_;
};

}  // namespace rarewave
