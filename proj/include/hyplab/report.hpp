#pragma once

// Output plumbing: 12-significant-digit formatting, key=value run
// configuration with a stable hash, CSV tables and JSON envelopes.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace hyplab::report {

using Json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// %.12g, with "inf", "-inf" and "nan" spelled out.
std::string fmt(double v);
// JSON number carrying exactly the digits of fmt(v); non-finite values become strings.
Json num(double v);

std::uint64_t fnv1a(std::string_view text);
std::string hex64(std::uint64_t v);

// Flat "key = value" configuration; '#' starts a comment.
class Config {
public:
    static Config parse(std::string_view text);
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    const std::map<std::string, std::string>& values() const { return values_; }

    // Sorted "key = value" lines; the hash covers exactly this text.
    std::string canonical() const;
    std::string hash() const { return hex64(fnv1a(canonical())); }

private:
    std::map<std::string, std::string> values_;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    void add(std::vector<std::string> row);
    // Leading '#' lines carry the config hash and the inequality identifiers.
    std::string to_csv(const std::string& config_hash, const std::vector<std::string>& ids) const;
};

Json envelope(const std::string& config_hash, const std::vector<std::string>& ids);

void write_file(const std::string& path, const std::string& content);

}  // namespace hyplab::report
