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

#include "ugformer/keyvalue.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ugformer/error.hpp"

namespace ugformer {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, const std::string& text) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("key '" + std::string(key) + "': cannot parse '" + text + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

KeyValueDoc KeyValueDoc::parse(std::string_view text) {
  KeyValueDoc doc;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError("<key-value>", line_no, "expected 'key = value'");
    }
    auto key = trim(line.substr(0, eq));
    if (key.empty()) throw FormatError("<key-value>", line_no, "empty key");
    doc.set(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return doc;
}

KeyValueDoc KeyValueDoc::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void KeyValueDoc::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

void KeyValueDoc::set(std::string key, double value) {
  set(std::move(key), format_double(value));
}
void KeyValueDoc::set(std::string key, std::int64_t value) {
  set(std::move(key), std::to_string(value));
}
void KeyValueDoc::set(std::string key, std::uint64_t value) {
  set(std::move(key), std::to_string(value));
}
void KeyValueDoc::set(std::string key, bool value) {
  set(std::move(key), std::string(value ? "true" : "false"));
}

bool KeyValueDoc::contains(std::string_view key) const { return get(key).has_value(); }

std::optional<std::string> KeyValueDoc::get(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string KeyValueDoc::get_string(std::string_view key) const {
  auto v = get(key);
  if (!v) throw ConfigError("missing key '" + std::string(key) + "'");
  return *v;
}

double KeyValueDoc::get_double(std::string_view key) const {
  return parse_number<double>(key, get_string(key));
}

std::int64_t KeyValueDoc::get_int(std::string_view key) const {
  return parse_number<std::int64_t>(key, get_string(key));
}

std::uint64_t KeyValueDoc::get_uint(std::string_view key) const {
  return parse_number<std::uint64_t>(key, get_string(key));
}

bool KeyValueDoc::get_bool(std::string_view key) const {
  const auto v = get_string(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("key '" + std::string(key) + "': expected a boolean, got '" + v + "'");
}

void KeyValueDoc::merge(const KeyValueDoc& other) {
  for (const auto& [k, v] : other.entries_) set(k, v);
}

std::string KeyValueDoc::serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

void KeyValueDoc::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << serialize();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace ugformer
