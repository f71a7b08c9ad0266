#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ifgi {

/// Flat `key = value` text file with '#' comments. Keys use dotted
/// section prefixes (e.g. "splitter.r"); insertion order is preserved
/// so serialization is byte-stable.
class KeyValueFile {
public:
  KeyValueFile() = default;

  static KeyValueFile parse_file(const std::string& path);
  static KeyValueFile parse_text(const std::string& text, const std::string& origin = "<text>");

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;

  /// Typed getters; throw ConfigError naming the key on absence or a
  /// malformed value.
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  unsigned long long get_uint(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string serialize() const;
  /// Atomic write (temp file + rename).
  void write_file(const std::string& path) const;

private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

} // namespace ifgi
