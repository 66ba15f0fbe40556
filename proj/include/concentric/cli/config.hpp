#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace concentric::cli {

struct KeySpec {
    std::optional<std::string> default_value;
    std::string help;
};

// Every accepted key with its default. Keys carry their unit as a suffix.
const std::map<std::string, KeySpec>& config_schema();

// Flat key-value configuration. Unknown keys are rejected with ConfigError.
//
// File syntax: one `key = value` per line; '#' starts a comment; blank lines
// are ignored. Later assignments override earlier ones.
class RunConfig {
  public:
    void load_file(const std::filesystem::path& path);
    void load_text(const std::string& text, const std::string& origin = "<text>");
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;       // explicitly set or defaulted
    bool is_set(const std::string& key) const;    // explicitly set

    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::optional<double> get_optional_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;

    // Every key that has a value, defaults included, in file syntax.
    std::string resolved_text() const;

  private:
    std::optional<std::string> lookup(const std::string& key) const;
    std::map<std::string, std::string> values_;
};

}  // namespace concentric::cli
