#pragma once

// Flat "key = value" configuration with typed accessors. Lines starting with
// '#' and blank lines are ignored. Unknown keys are rejected so typos do not
// silently fall back to defaults.

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hexdg {

struct KeySpec {
    std::string name;
    std::string default_value;
    std::string help;
};

class RunConfig {
public:
    explicit RunConfig(std::vector<KeySpec> keys);

    const std::vector<KeySpec>& keys() const { return keys_; }
    bool known(const std::string& key) const;

    /// Throws ConfigError on I/O errors, malformed lines or unknown keys.
    void load_file(const std::string& path);
    void load_text(const std::string& text, const std::string& origin = "<text>");
    void set(const std::string& key, const std::string& value);

    const std::string& str(const std::string& key) const;
    double real(const std::string& key) const;
    int integer(const std::string& key) const;
    bool boolean(const std::string& key) const;
    /// Comma-separated list; "a..b" expands integer ranges.
    std::vector<std::string> list(const std::string& key) const;
    std::vector<int> int_list(const std::string& key) const;
    std::vector<double> real_list(const std::string& key) const;

    /// Effective values in declaration order.
    std::vector<std::pair<std::string, std::string>> echo() const;

private:
    std::vector<KeySpec> keys_;
    std::map<std::string, std::string> values_;
};

/// Parses "1/2", "0.375", "1e-12".
double parse_real(const std::string& s, const std::string& what);
int parse_int(const std::string& s, const std::string& what);
std::vector<int> parse_int_list(const std::string& s, const std::string& what);

} // namespace hexdg
