#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace culinary {

struct ConfigKey {
    std::string_view name;
    std::string_view default_value;
    std::string_view help;
};

/// Every recognised key with its default, in documentation order.
const std::vector<ConfigKey>& config_keys();

/// Flat key=value run configuration. Unknown keys are rejected; values are
/// kept as text and parsed on access so the effective config can be echoed
/// verbatim into manifests.
class RunConfig {
public:
    RunConfig();

    /// Parses a config file: one `key = value` per line, '#' starts a comment.
    /// Relative paths in path-valued keys resolve against the file's directory.
    static RunConfig from_file(const std::filesystem::path& path);
    void merge_file(const std::filesystem::path& path);

    void set(std::string_view key, std::string value);
    const std::string& get(std::string_view key) const;
    bool is_set(std::string_view key) const { return !get(key).empty(); }

    std::filesystem::path path(std::string_view key) const { return get(key); }
    std::uint64_t u64(std::string_view key) const;
    double real(std::string_view key) const;
    bool flag(std::string_view key) const;
    /// Comma-separated list, items trimmed, empty items dropped.
    std::vector<std::string> list(std::string_view key) const;

    const std::map<std::string, std::string>& values() const { return values_; }
    /// Sorted `key=value` lines; the config hash is taken over this text.
    std::string canonical() const;

private:
    std::map<std::string, std::string> values_;
};

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace culinary
