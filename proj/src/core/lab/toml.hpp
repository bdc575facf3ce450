#pragma once

#include <map>
#include <string>
#include <vector>

#include "common.hpp"

namespace lamlab::lab {

// Minimal TOML reader covering the scenario grammar: bare/dotted keys,
// [tables], [[arrays of tables]], strings, numbers, booleans and nested
// arrays. Parse errors carry line numbers.
struct TomlValue {
  enum class Kind { String, Number, Bool, Array, Table };
  Kind kind = Kind::Table;
  std::string str;
  double num = 0.0;
  bool boolean = false;
  std::vector<TomlValue> array;
  std::map<std::string, TomlValue> table;
  int line = 0;

  bool has(const std::string& key) const { return table.count(key) > 0; }
  const TomlValue& at(const std::string& key) const;
  const TomlValue* find(const std::string& key) const;

  double as_number() const;
  double number_or(const std::string& key, double fallback) const;
  std::string string_or(const std::string& key, const std::string& fallback) const;
  bool bool_or(const std::string& key, bool fallback) const;
  std::vector<double> as_number_array() const;
};

TomlValue toml_parse(const std::string& text);
TomlValue toml_parse_file(const std::string& path);

}  // namespace lamlab::lab
