#include "polyscat/io/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace polyscat::toml {

namespace {

struct Cursor {
  const std::string& text;
  std::string origin;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  char advance() {
    const char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << origin << ":" << line << ":" << col << ": " << what;
    throw parse_error(msg.str());
  }
};

void skip_ws(Cursor& c, bool cross_lines) {
  while (!c.eof()) {
    const char ch = c.peek();
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      c.advance();
    } else if (ch == '#') {
      while (!c.eof() && c.peek() != '\n') c.advance();
    } else if (ch == '\n' && cross_lines) {
      c.advance();
    } else {
      break;
    }
  }
}

bool is_bare_char(char ch) {
  return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
}

std::string parse_bare_key(Cursor& c) {
  std::string key;
  while (!c.eof() && is_bare_char(c.peek())) key.push_back(c.advance());
  if (key.empty()) c.fail("expected a key");
  return key;
}

std::string parse_basic_string(Cursor& c) {
  c.advance();  // opening quote
  std::string out;
  while (true) {
    if (c.eof()) c.fail("unterminated string");
    const char ch = c.advance();
    if (ch == '"') break;
    if (ch == '\n') c.fail("newline inside string");
    if (ch == '\\') {
      if (c.eof()) c.fail("unterminated escape");
      const char esc = c.advance();
      switch (esc) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        default: c.fail("unsupported escape sequence");
      }
    } else {
      out.push_back(ch);
    }
  }
  return out;
}

Value parse_value(Cursor& c);

Value parse_array(Cursor& c) {
  c.advance();  // '['
  Array items;
  while (true) {
    skip_ws(c, true);
    if (c.eof()) c.fail("unterminated array");
    if (c.peek() == ']') {
      c.advance();
      break;
    }
    items.push_back(parse_value(c));
    skip_ws(c, true);
    if (c.eof()) c.fail("unterminated array");
    if (c.peek() == ',') {
      c.advance();
    } else if (c.peek() != ']') {
      c.fail("expected ',' or ']' in array");
    }
  }
  return Value(Value::Storage(std::move(items)));
}

Value parse_number(Cursor& c) {
  std::string tok;
  while (!c.eof()) {
    const char ch = c.peek();
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '+' || ch == '-' || ch == '.' ||
        ch == 'e' || ch == 'E' || ch == '_') {
      if (ch != '_') tok.push_back(ch);
      c.advance();
    } else {
      break;
    }
  }
  if (tok.empty()) c.fail("expected a number");
  const bool is_float = tok.find_first_of(".eE") != std::string::npos;
  if (!is_float) {
    std::int64_t iv = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), iv);
    if (ec == std::errc() && ptr == tok.data() + tok.size())
      return Value(Value::Storage(iv));
  }
  double dv = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), dv);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) c.fail("malformed number '" + tok + "'");
  return Value(Value::Storage(dv));
}

Value parse_value(Cursor& c) {
  if (c.eof()) c.fail("expected a value");
  const char ch = c.peek();
  if (ch == '"') return Value(Value::Storage(parse_basic_string(c)));
  if (ch == '[') return parse_array(c);
  if (ch == 't' || ch == 'f') {
    const std::string word = parse_bare_key(c);
    if (word == "true") return Value(Value::Storage(true));
    if (word == "false") return Value(Value::Storage(false));
    c.fail("unrecognised value '" + word + "'");
  }
  return parse_number(c);
}

std::vector<std::string> parse_dotted(Cursor& c) {
  std::vector<std::string> parts{parse_bare_key(c)};
  while (!c.eof() && c.peek() == '.') {
    c.advance();
    parts.push_back(parse_bare_key(c));
  }
  return parts;
}

// walk to (and create) the table addressed by dotted parts; when a step lands
// on an array of tables, descend into its last element
Table* descend(Table* root, const std::vector<std::string>& parts, Cursor& c) {
  Table* node = root;
  for (const std::string& part : parts) {
    Value& slot = (*node)[part];
    if (slot.is_array()) {
      Array& arr = std::get<Array>(slot.storage());
      if (arr.empty() || !arr.back().is_table()) c.fail("key '" + part + "' is not a table");
      node = &arr.back().as_table();
    } else if (slot.is_table()) {
      node = &slot.as_table();
    } else {
      c.fail("key '" + part + "' already holds a value");
    }
  }
  return node;
}

}  // namespace

std::int64_t Value::as_integer() const {
  if (!is_integer()) throw parse_error("value is not an integer");
  return std::get<std::int64_t>(storage_);
}

double Value::as_number() const {
  if (is_integer()) return static_cast<double>(std::get<std::int64_t>(storage_));
  if (!is_float()) throw parse_error("value is not a number");
  return std::get<double>(storage_);
}

bool Value::as_bool() const {
  if (!is_bool()) throw parse_error("value is not a boolean");
  return std::get<bool>(storage_);
}

const std::string& Value::as_string() const {
  if (!is_string()) throw parse_error("value is not a string");
  return std::get<std::string>(storage_);
}

const Array& Value::as_array() const {
  if (!is_array()) throw parse_error("value is not an array");
  return std::get<Array>(storage_);
}

const Table& Value::as_table() const {
  if (!is_table()) throw parse_error("value is not a table");
  return std::get<Table>(storage_);
}

Table& Value::as_table() {
  if (!is_table()) throw parse_error("value is not a table");
  return std::get<Table>(storage_);
}

Table parse(const std::string& text, const std::string& origin) {
  Cursor c{text, origin};
  Table root;
  Table* current = &root;

  while (true) {
    skip_ws(c, true);
    if (c.eof()) break;
    const char ch = c.peek();

    if (ch == '[') {
      c.advance();
      const bool is_array_header = !c.eof() && c.peek() == '[';
      if (is_array_header) c.advance();
      skip_ws(c, false);
      const std::vector<std::string> parts = parse_dotted(c);
      skip_ws(c, false);
      if (c.eof() || c.peek() != ']') c.fail("expected ']' closing table header");
      c.advance();
      if (is_array_header) {
        if (c.eof() || c.peek() != ']') c.fail("expected ']]' closing array header");
        c.advance();
      }
      const std::vector<std::string> prefix(parts.begin(), parts.end() - 1);
      Table* parent = descend(&root, prefix, c);
      Value& slot = (*parent)[parts.back()];
      if (is_array_header) {
        if (slot.is_table() && slot.as_table().empty())
          slot = Value(Value::Storage(Array{}));
        if (!slot.is_array()) c.fail("key '" + parts.back() + "' already holds a value");
        Array& arr = std::get<Array>(slot.storage());
        arr.push_back(Value(Value::Storage(Table{})));
        current = &arr.back().as_table();
      } else {
        if (!slot.is_table()) c.fail("key '" + parts.back() + "' already holds a value");
        current = &slot.as_table();
      }
    } else {
      const std::string key = parse_bare_key(c);
      skip_ws(c, false);
      if (c.eof() || c.peek() != '=') c.fail("expected '=' after key '" + key + "'");
      c.advance();
      skip_ws(c, false);
      Value value = parse_value(c);
      if (current->find(key) != current->end())
        c.fail("duplicate key '" + key + "'");
      (*current)[key] = std::move(value);
    }

    // only whitespace or a comment may follow on the line
    skip_ws(c, false);
    if (!c.eof() && c.peek() != '\n') c.fail("unexpected trailing characters");
  }
  return root;
}

Table parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

}  // namespace polyscat::toml
