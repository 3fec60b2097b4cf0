#include "predictive/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "predictive/errors.hpp"

namespace predictive {

using nlohmann::json;

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;

  bool done() const { return i >= s.size(); }
  char peek() const { return s[i]; }
  char take() { return s[i++]; }

  void skip_ws_inline() {
    while (!done() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  void skip_ws_and_comments() {  // including newlines
    while (!done()) {
      const char c = s[i];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++i;
      } else if (c == '#') {
        while (!done() && s[i] != '\n') ++i;
      } else {
        break;
      }
    }
  }
  [[noreturn]] void fail(const std::string& what) const {
    size_t line = 1;
    for (size_t k = 0; k < i && k < s.size(); ++k)
      if (s[k] == '\n') ++line;
    throw ConfigError("TOML parse error at line " + std::to_string(line) +
                      ": " + what);
  }
};

std::string parse_basic_string(Cursor& c) {
  const char quote = c.take();  // " or '
  std::string out;
  while (!c.done()) {
    char ch = c.take();
    if (ch == quote) return out;
    if (quote == '"' && ch == '\\') {
      if (c.done()) break;
      const char esc = c.take();
      switch (esc) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: c.fail("unsupported escape");
      }
    } else {
      out += ch;
    }
  }
  c.fail("unterminated string");
}

std::string parse_key(Cursor& c) {
  c.skip_ws_inline();
  if (!c.done() && (c.peek() == '"' || c.peek() == '\''))
    return parse_basic_string(c);
  std::string out;
  while (!c.done() &&
         (std::isalnum(static_cast<unsigned char>(c.peek())) ||
          c.peek() == '_' || c.peek() == '-'))
    out += c.take();
  if (out.empty()) c.fail("expected a key");
  return out;
}

json parse_value(Cursor& c);

json parse_array(Cursor& c) {
  c.take();  // '['
  json arr = json::array();
  c.skip_ws_and_comments();
  if (!c.done() && c.peek() == ']') {
    c.take();
    return arr;
  }
  while (!c.done()) {
    arr.push_back(parse_value(c));
    c.skip_ws_and_comments();
    if (c.done()) break;
    if (c.peek() == ',') {
      c.take();
      c.skip_ws_and_comments();
      if (!c.done() && c.peek() == ']') {  // trailing comma
        c.take();
        return arr;
      }
      continue;
    }
    if (c.peek() == ']') {
      c.take();
      return arr;
    }
    c.fail("expected ',' or ']' in array");
  }
  c.fail("unterminated array");
}

json parse_inline_table(Cursor& c) {
  c.take();  // '{'
  json obj = json::object();
  c.skip_ws_inline();
  if (!c.done() && c.peek() == '}') {
    c.take();
    return obj;
  }
  while (!c.done()) {
    const std::string key = parse_key(c);
    c.skip_ws_inline();
    if (c.done() || c.take() != '=') c.fail("expected '=' in inline table");
    c.skip_ws_inline();
    obj[key] = parse_value(c);
    c.skip_ws_inline();
    if (c.done()) break;
    const char ch = c.take();
    if (ch == ',') {
      c.skip_ws_inline();
      continue;
    }
    if (ch == '}') return obj;
    c.fail("expected ',' or '}' in inline table");
  }
  c.fail("unterminated inline table");
}

json parse_scalar(Cursor& c) {
  std::string tok;
  while (!c.done()) {
    const char ch = c.peek();
    if (ch == ',' || ch == ']' || ch == '}' || ch == '\n' || ch == '\r' ||
        ch == '#' || ch == ' ' || ch == '\t')
      break;
    tok += c.take();
  }
  if (tok.empty()) c.fail("expected a value");
  if (tok == "true") return true;
  if (tok == "false") return false;
  std::string digits = tok;
  std::erase(digits, '_');
  const bool is_float = digits.find_first_of(".eE") != std::string::npos ||
                        digits == "inf" || digits == "-inf" ||
                        digits == "+inf" || digits == "nan";
  char* end = nullptr;
  if (is_float) {
    const double v = std::strtod(digits.c_str(), &end);
    if (end != digits.c_str() + digits.size()) c.fail("bad float: " + tok);
    return v;
  }
  const long long v = std::strtoll(digits.c_str(), &end, 10);
  if (end != digits.c_str() + digits.size()) c.fail("bad integer: " + tok);
  return v;
}

json parse_value(Cursor& c) {
  c.skip_ws_inline();
  if (c.done()) c.fail("expected a value");
  const char ch = c.peek();
  if (ch == '"' || ch == '\'') return parse_basic_string(c);
  if (ch == '[') return parse_array(c);
  if (ch == '{') return parse_inline_table(c);
  return parse_scalar(c);
}

std::vector<std::string> parse_header_path(Cursor& c) {
  std::vector<std::string> path;
  while (true) {
    path.push_back(parse_key(c));
    c.skip_ws_inline();
    if (!c.done() && c.peek() == '.') {
      c.take();
      continue;
    }
    break;
  }
  return path;
}

json* descend(json& root, const std::vector<std::string>& path) {
  json* cur = &root;
  for (const auto& key : path) {
    if (cur->is_array()) cur = &cur->back();
    if (!cur->contains(key)) (*cur)[key] = json::object();
    cur = &(*cur)[key];
    if (cur->is_array() && !cur->empty()) {
      // stepping through an array of tables targets its last element
    }
  }
  if (cur->is_array()) cur = &cur->back();
  return cur;
}

}  // namespace

json parse_toml(const std::string& text) {
  json root = json::object();
  json* current = &root;
  Cursor c{text};
  c.skip_ws_and_comments();
  while (!c.done()) {
    if (c.peek() == '[') {
      c.take();
      const bool array_of_tables = !c.done() && c.peek() == '[';
      if (array_of_tables) c.take();
      const auto path = parse_header_path(c);
      c.skip_ws_inline();
      if (c.done() || c.take() != ']') c.fail("expected ']'");
      if (array_of_tables && (c.done() || c.take() != ']'))
        c.fail("expected ']]'");
      if (array_of_tables) {
        json* parent = &root;
        for (size_t k = 0; k + 1 < path.size(); ++k)
          parent = descend(*parent, {path[k]});
        json& slot = (*parent)[path.back()];
        if (slot.is_null()) slot = json::array();
        if (!slot.is_array()) c.fail("conflicting table kinds");
        slot.push_back(json::object());
        current = &slot.back();
      } else {
        current = descend(root, path);
      }
    } else {
      const std::string key = parse_key(c);
      c.skip_ws_inline();
      if (c.done() || c.take() != '=') c.fail("expected '='");
      (*current)[key] = parse_value(c);
    }
    c.skip_ws_and_comments();
  }
  return root;
}

}  // namespace predictive
