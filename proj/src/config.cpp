#include "hexdg/config.hpp"

#include "hexdg/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace hexdg {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty())
            out.push_back(cur);
    }
    return out;
}

double parse_plain(const std::string& s, const std::string& what)
{
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e)
        throw ConfigError("invalid number '" + s + "' for " + what);
    return v;
}

} // namespace

double parse_real(const std::string& s0, const std::string& what)
{
    const std::string s = trim(s0);
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        const double num = parse_plain(trim(s.substr(0, slash)), what);
        const double den = parse_plain(trim(s.substr(slash + 1)), what);
        if (den == 0.0)
            throw ConfigError("division by zero in '" + s + "' for " + what);
        return num / den;
    }
    return parse_plain(s, what);
}

int parse_int(const std::string& s0, const std::string& what)
{
    const std::string s = trim(s0);
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ConfigError("invalid integer '" + s + "' for " + what);
    return v;
}

std::vector<int> parse_int_list(const std::string& s, const std::string& what)
{
    std::vector<int> out;
    for (const std::string& item : split(s, ',')) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_int(item, what));
            continue;
        }
        const int a = parse_int(item.substr(0, dots), what);
        const int b = parse_int(item.substr(dots + 2), what);
        for (int i = a; i <= b; ++i)
            out.push_back(i);
    }
    return out;
}

RunConfig::RunConfig(std::vector<KeySpec> keys)
    : keys_(std::move(keys))
{
    for (const KeySpec& k : keys_)
        values_[k.name] = k.default_value;
}

bool RunConfig::known(const std::string& key) const
{
    return std::any_of(keys_.begin(), keys_.end(), [&](const KeySpec& k) { return k.name == key; });
}

void RunConfig::load_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    load_text(ss.str(), path);
}

void RunConfig::load_text(const std::string& text, const std::string& origin)
{
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(n) + ": expected key = value");
        set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
}

void RunConfig::set(const std::string& key, const std::string& value)
{
    if (!known(key))
        throw ConfigError("unknown configuration key '" + key + "'");
    values_[key] = value;
}

const std::string& RunConfig::str(const std::string& key) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError("unknown configuration key '" + key + "'");
    return it->second;
}

double RunConfig::real(const std::string& key) const { return parse_real(str(key), key); }

int RunConfig::integer(const std::string& key) const { return parse_int(str(key), key); }

bool RunConfig::boolean(const std::string& key) const
{
    std::string v = str(key);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "1" || v == "true" || v == "yes" || v == "on")
        return true;
    if (v == "0" || v == "false" || v == "no" || v == "off")
        return false;
    throw ConfigError("invalid boolean '" + v + "' for " + key);
}

std::vector<std::string> RunConfig::list(const std::string& key) const { return split(str(key), ','); }

std::vector<int> RunConfig::int_list(const std::string& key) const { return parse_int_list(str(key), key); }

std::vector<double> RunConfig::real_list(const std::string& key) const
{
    std::vector<double> out;
    for (const std::string& item : list(key))
        out.push_back(parse_real(item, key));
    return out;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const
{
    std::vector<std::pair<std::string, std::string>> out;
    for (const KeySpec& k : keys_)
        out.emplace_back(k.name, values_.at(k.name));
    return out;
}

} // namespace hexdg
