#include "lab/toml.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace lamlab::lab {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw ValidationError("toml: line " + std::to_string(line) + ": " + what);
}

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;
  int line = 1;

  bool done() const { return pos >= s.size(); }
  char peek() const { return done() ? '\0' : s[pos]; }
  char get() {
    const char c = s[pos++];
    if (c == '\n') ++line;
    return c;
  }
  void skip_ws_inline() {
    while (!done() && (peek() == ' ' || peek() == '\t')) ++pos;
  }
  void skip_ws_and_comments() {
    while (!done()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        get();
      } else if (c == '#') {
        while (!done() && peek() != '\n') ++pos;
      } else {
        break;
      }
    }
  }
};

std::string parse_bare_key(Cursor& cur) {
  std::string key;
  while (!cur.done()) {
    const char c = cur.peek();
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')
      key.push_back(cur.get());
    else
      break;
  }
  if (key.empty()) fail(cur.line, "expected key");
  return key;
}

std::vector<std::string> parse_key_path(Cursor& cur) {
  std::vector<std::string> path;
  for (;;) {
    cur.skip_ws_inline();
    if (cur.peek() == '"') {
      cur.get();
      std::string key;
      while (!cur.done() && cur.peek() != '"') key.push_back(cur.get());
      if (cur.done()) fail(cur.line, "unterminated quoted key");
      cur.get();
      path.push_back(key);
    } else {
      path.push_back(parse_bare_key(cur));
    }
    cur.skip_ws_inline();
    if (cur.peek() == '.') {
      cur.get();
      continue;
    }
    break;
  }
  return path;
}

TomlValue parse_value(Cursor& cur);

TomlValue parse_string(Cursor& cur) {
  TomlValue v;
  v.kind = TomlValue::Kind::String;
  v.line = cur.line;
  cur.get();  // opening quote
  while (!cur.done() && cur.peek() != '"') {
    char c = cur.get();
    if (c == '\\') {
      if (cur.done()) fail(cur.line, "bad escape");
      const char e = cur.get();
      switch (e) {
        case 'n': c = '\n'; break;
        case 't': c = '\t'; break;
        case '"': c = '"'; break;
        case '\\': c = '\\'; break;
        default: fail(cur.line, std::string("unsupported escape \\") + e);
      }
    }
    v.str.push_back(c);
  }
  if (cur.done()) fail(cur.line, "unterminated string");
  cur.get();
  return v;
}

TomlValue parse_array(Cursor& cur) {
  TomlValue v;
  v.kind = TomlValue::Kind::Array;
  v.line = cur.line;
  cur.get();  // '['
  for (;;) {
    cur.skip_ws_and_comments();
    if (cur.peek() == ']') {
      cur.get();
      break;
    }
    v.array.push_back(parse_value(cur));
    cur.skip_ws_and_comments();
    if (cur.peek() == ',') {
      cur.get();
      continue;
    }
    if (cur.peek() == ']') {
      cur.get();
      break;
    }
    fail(cur.line, "expected ',' or ']' in array");
  }
  return v;
}

TomlValue parse_value(Cursor& cur) {
  cur.skip_ws_inline();
  const char c = cur.peek();
  if (c == '"') return parse_string(cur);
  if (c == '[') return parse_array(cur);
  // bare token: bool or number
  std::string tok;
  while (!cur.done()) {
    const char t = cur.peek();
    if (t == '\n' || t == '#' || t == ',' || t == ']' || t == ' ' || t == '\t' || t == '\r')
      break;
    tok.push_back(cur.get());
  }
  TomlValue v;
  v.line = cur.line;
  if (tok == "true" || tok == "false") {
    v.kind = TomlValue::Kind::Bool;
    v.boolean = (tok == "true");
    return v;
  }
  if (tok.empty()) fail(cur.line, "expected value");
  // allow 0x prefixed seeds
  char* end = nullptr;
  if (tok.size() > 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X')) {
    v.num = static_cast<double>(std::strtoull(tok.c_str() + 2, &end, 16));
  } else {
    std::string clean;
    for (char ch : tok)
      if (ch != '_') clean.push_back(ch);
    v.num = std::strtod(clean.c_str(), &end);
    if (end == clean.c_str() || *end != '\0') fail(cur.line, "bad number '" + tok + "'");
    v.kind = TomlValue::Kind::Number;
    return v;
  }
  if (end == nullptr || *end != '\0') fail(cur.line, "bad number '" + tok + "'");
  v.kind = TomlValue::Kind::Number;
  return v;
}

TomlValue* descend(TomlValue* node, const std::vector<std::string>& path, int line,
                   bool all_but_last) {
  const std::size_t count = all_but_last ? path.size() - 1 : path.size();
  for (std::size_t i = 0; i < count; ++i) {
    TomlValue& child = node->table[path[i]];
    if (child.kind == TomlValue::Kind::Array) {
      if (child.array.empty()) fail(line, "empty table array");
      node = &child.array.back();
      continue;
    }
    if (child.kind != TomlValue::Kind::Table && child.table.empty() && child.str.empty() &&
        child.array.empty())
      child.kind = TomlValue::Kind::Table;
    if (child.kind != TomlValue::Kind::Table)
      fail(line, "key '" + path[i] + "' is not a table");
    node = &child;
  }
  return node;
}

}  // namespace

const TomlValue& TomlValue::at(const std::string& key) const {
  auto it = table.find(key);
  if (it == table.end())
    throw ValidationError("toml: missing key '" + key + "'");
  return it->second;
}

const TomlValue* TomlValue::find(const std::string& key) const {
  auto it = table.find(key);
  return it == table.end() ? nullptr : &it->second;
}

double TomlValue::as_number() const {
  if (kind != Kind::Number)
    throw ValidationError("toml: line " + std::to_string(line) + ": expected a number");
  return num;
}

double TomlValue::number_or(const std::string& key, double fallback) const {
  const TomlValue* v = find(key);
  return v ? v->as_number() : fallback;
}

std::string TomlValue::string_or(const std::string& key, const std::string& fallback) const {
  const TomlValue* v = find(key);
  if (!v) return fallback;
  if (v->kind != Kind::String)
    throw ValidationError("toml: line " + std::to_string(v->line) + ": key '" + key +
                          "' must be a string");
  return v->str;
}

bool TomlValue::bool_or(const std::string& key, bool fallback) const {
  const TomlValue* v = find(key);
  if (!v) return fallback;
  if (v->kind != Kind::Bool)
    throw ValidationError("toml: key '" + key + "' must be a boolean");
  return v->boolean;
}

std::vector<double> TomlValue::as_number_array() const {
  if (kind != Kind::Array)
    throw ValidationError("toml: line " + std::to_string(line) + ": expected an array");
  std::vector<double> out;
  for (const auto& v : array) out.push_back(v.as_number());
  return out;
}

TomlValue toml_parse(const std::string& text) {
  TomlValue root;
  root.kind = TomlValue::Kind::Table;
  TomlValue* current = &root;
  Cursor cur{text};

  for (;;) {
    cur.skip_ws_and_comments();
    if (cur.done()) break;
    if (cur.peek() == '[') {
      cur.get();
      const bool array_table = cur.peek() == '[';
      if (array_table) cur.get();
      const auto path = parse_key_path(cur);
      cur.skip_ws_inline();
      if (cur.get() != ']') fail(cur.line, "expected ']' after table header");
      if (array_table && cur.get() != ']') fail(cur.line, "expected ']]' after table header");
      TomlValue* parent = descend(&root, path, cur.line, true);
      TomlValue& slot = parent->table[path.back()];
      if (array_table) {
        if (slot.kind != TomlValue::Kind::Array) {
          slot = TomlValue{};
          slot.kind = TomlValue::Kind::Array;
        }
        TomlValue entry;
        entry.kind = TomlValue::Kind::Table;
        entry.line = cur.line;
        slot.array.push_back(entry);
        current = &slot.array.back();
      } else {
        if (slot.kind != TomlValue::Kind::Table || (slot.kind == TomlValue::Kind::Table &&
                                                    slot.line == 0 && slot.table.empty())) {
          slot.kind = TomlValue::Kind::Table;
          slot.line = cur.line;
        }
        current = &slot;
      }
      continue;
    }
    const int line = cur.line;
    const auto path = parse_key_path(cur);
    cur.skip_ws_inline();
    if (cur.peek() != '=') fail(line, "expected '=' after key '" + path.back() + "'");
    cur.get();
    TomlValue value = parse_value(cur);
    TomlValue* parent = descend(current, path, line, true);
    if (parent->table.count(path.back())) fail(line, "duplicate key '" + path.back() + "'");
    parent->table[path.back()] = std::move(value);
    cur.skip_ws_inline();
    if (!cur.done() && cur.peek() == '#')
      while (!cur.done() && cur.peek() != '\n') cur.get();
    if (!cur.done() && cur.peek() != '\n' && cur.peek() != '\r')
      fail(line, "trailing characters after value");
  }
  return root;
}

TomlValue toml_parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return toml_parse(ss.str());
}

}  // namespace lamlab::lab
