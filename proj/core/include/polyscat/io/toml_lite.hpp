#pragma once

// minimal TOML reader covering the subset used by plan files: bare keys,
// basic strings, integers, floats, booleans, arrays, [table] and [[array]]
// headers with dotted names, and # comments. errors carry file:line:col.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "polyscat/errors.hpp"

namespace polyscat::toml {

class Value;
using Array = std::vector<Value>;
using Table = std::map<std::string, Value>;

class Value {
 public:
  using Storage = std::variant<std::int64_t, double, bool, std::string, Array, Table>;

  Value() : storage_(Table{}) {}
  explicit Value(Storage storage) : storage_(std::move(storage)) {}

  bool is_integer() const { return std::holds_alternative<std::int64_t>(storage_); }
  bool is_float() const { return std::holds_alternative<double>(storage_); }
  bool is_bool() const { return std::holds_alternative<bool>(storage_); }
  bool is_string() const { return std::holds_alternative<std::string>(storage_); }
  bool is_array() const { return std::holds_alternative<Array>(storage_); }
  bool is_table() const { return std::holds_alternative<Table>(storage_); }

  std::int64_t as_integer() const;
  double as_number() const;  // integer or float
  bool as_bool() const;
  const std::string& as_string() const;
  const Array& as_array() const;
  const Table& as_table() const;
  Table& as_table();

  Storage& storage() { return storage_; }

 private:
  Storage storage_;
};

// parse TOML text; origin names the file in error messages
Table parse(const std::string& text, const std::string& origin);

Table parse_file(const std::string& path);

}  // namespace polyscat::toml
