#ifndef MEMLAB_CONFIG_HPP
#define MEMLAB_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "memlab/errors.hpp"

namespace memlab {

// TOML-style config subset: [section] headers, key = value lines, # comments.
// Values: numbers, booleans, "strings", arrays of numbers or strings, and
// arrays of string arrays (used for the sigma matrix). Keys are addressed by
// dotted path "section.key".
class Config {
 public:
  struct Value {
    enum class Kind { Number, Bool, String, NumberList, StringList, StringMatrix };
    Kind kind = Kind::Number;
    double number = 0.0;
    bool boolean = false;
    std::string str;
    std::vector<double> numbers;
    std::vector<std::string> strings;
    std::vector<std::vector<std::string>> matrix;
    int line = 0;
  };

  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text,
                             const std::string& origin = "<string>");

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  double get_number(const std::string& key) const;
  double get_number_or(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key,
                            const std::string& fallback) const;
  std::vector<double> get_numbers(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;
  std::vector<std::vector<std::string>> get_string_matrix(
      const std::string& key) const;

  // Applies "key=value" override text (same value syntax as file bodies).
  void set_override(const std::string& key, const std::string& value_text);

  // Canonical text render (sorted keys) used for hashing and output headers.
  std::string canonical_text() const;
  std::uint64_t hash() const;  // FNV-1a over canonical_text()

  const std::map<std::string, Value>& values() const { return values_; }

 private:
  const Value& require(const std::string& key, Value::Kind kind) const;
  std::map<std::string, Value> values_;
  std::string origin_;
};

}  // namespace memlab

#endif  // MEMLAB_CONFIG_HPP
