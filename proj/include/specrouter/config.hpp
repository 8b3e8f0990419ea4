#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specrouter {

// Bad flags, malformed config files, missing inputs. The CLI maps this to
// exit code 2 (runtime failures exit 3).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Flat `key = value` text format. '#' starts a comment, blank lines are
// ignored, keys may be dotted (domain.0.pattern).
class KeyValueConfig {
  public:
    static KeyValueConfig from_file(const std::filesystem::path& path);
    static KeyValueConfig from_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    int get_int(const std::string& key, int fallback) const;
    double get_real(const std::string& key, double fallback) const;
    uint64_t get_uint64(const std::string& key, uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::string> get_list(const std::string& key) const;  // comma-separated

    void set(const std::string& key, const std::string& value);
    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::string origin_;
    std::map<std::string, std::string> entries_;
};

}  // namespace specrouter
