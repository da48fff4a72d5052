#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace starhardy::config {

// Malformed file, missing required key, or unparsable value.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key = value store backing the experiment driver. The file grammar is
// line oriented:
//
//   # comment (also ;)          ignored, as are blank lines
//   [section]                   keys below get the "section." prefix
//   key = value                 one entry under the current section
//   section.key = value         fully qualified, works without a header
//
// Values keep their raw text; typed getters parse on access. Duplicate keys
// in a file are rejected (they are almost always an editing mistake), while
// set() overwrites so command-line overrides can re-resolve entries.
class Config {
  public:
    Config() = default;

    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& origin = "<config>");

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    // Throwing getter; the fallback overloads never throw for absent keys but
    // still reject values that do not parse.
    std::string get(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;

    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    // Comma- or whitespace-separated list of numbers.
    std::vector<double> get_list(const std::string& key) const;
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::map<std::string, std::string> entries_;
};

}  // namespace starhardy::config
