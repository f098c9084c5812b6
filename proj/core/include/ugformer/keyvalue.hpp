/* Copyright 2026 The ugformer Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef UGFORMER_KEYVALUE_HPP_
#define UGFORMER_KEYVALUE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ugformer {

// Ordered `key = value` text document. Lines starting with '#' are comments.
// Later assignments of the same key replace earlier ones in place.
class KeyValueDoc {
 public:
  static KeyValueDoc parse(std::string_view text);
  static KeyValueDoc read(const std::filesystem::path& path);

  void set(std::string key, std::string value);
  void set(std::string key, const char* value) { set(std::move(key), std::string(value)); }
  void set(std::string key, double value);
  void set(std::string key, std::int64_t value);
  void set(std::string key, std::uint64_t value);
  void set(std::string key, int value) { set(std::move(key), std::int64_t{value}); }
  void set(std::string key, bool value);

  bool contains(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;

  // Typed accessors throw ConfigError when the key is missing or the value
  // does not parse.
  std::string get_string(std::string_view key) const;
  double get_double(std::string_view key) const;
  std::int64_t get_int(std::string_view key) const;
  std::uint64_t get_uint(std::string_view key) const;
  bool get_bool(std::string_view key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  // Appends every entry of `other`, replacing existing keys.
  void merge(const KeyValueDoc& other);

  std::string serialize() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace ugformer

#endif  // UGFORMER_KEYVALUE_HPP_
