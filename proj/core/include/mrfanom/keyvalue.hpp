#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mrfanom {

/// Line-oriented `key = value` configuration.
///
/// Blank lines and lines starting with `#` are ignored; a trailing `# ...`
/// after a value is stripped. Keys may repeat (e.g. `block`); `get` returns the
/// last occurrence, `get_all` returns all of them in file order.
class KeyValueConfig {
 public:
  struct Entry {
    std::string key;
    std::string value;
    std::size_t line = 0;
  };

  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::filesystem::path& path);

  bool contains(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  std::vector<std::string> get_all(std::string_view key) const;

  std::string get_string(std::string_view key, std::string_view fallback) const;
  double get_double(std::string_view key, double fallback) const;
  std::int64_t get_int(std::string_view key, std::int64_t fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;

  /// Throws InvalidConfig naming the first key not in `known`.
  void require_known(const std::vector<std::string_view>& known) const;

  void set(std::string key, std::string value);

  const std::vector<Entry>& entries() const noexcept { return entries_; }

 private:
  std::vector<Entry> entries_;
};

double parse_double(std::string_view text, std::string_view what);
std::int64_t parse_int(std::string_view text, std::string_view what);
bool parse_bool(std::string_view text, std::string_view what);
std::string_view trim(std::string_view text) noexcept;

}  // namespace mrfanom
