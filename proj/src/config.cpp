#include "memlab/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace memlab {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void bad(const std::string& origin, int line, const std::string& msg) {
  raise(ErrorCode::ConfigError,
        origin + ":" + std::to_string(line) + ": " + msg);
}

// Splits a bracketed list body on top-level commas.
std::vector<std::string> split_top_level(const std::string& body,
                                         const std::string& origin, int line) {
  std::vector<std::string> parts;
  int depth = 0;
  bool in_str = false;
  std::string cur;
  for (char c : body) {
    if (in_str) {
      if (c == '"') in_str = false;
      cur += c;
      continue;
    }
    if (c == '"') {
      in_str = true;
      cur += c;
    } else if (c == '[') {
      ++depth;
      cur += c;
    } else if (c == ']') {
      --depth;
      if (depth < 0) bad(origin, line, "unbalanced ']'");
      cur += c;
    } else if (c == ',' && depth == 0) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (depth != 0 || in_str) bad(origin, line, "unbalanced brackets or quote");
  std::string last = trim(cur);
  if (!last.empty()) parts.push_back(last);
  return parts;
}

bool parse_number(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

Config::Value parse_value(const std::string& text, const std::string& origin,
                          int line) {
  Config::Value v;
  v.line = line;
  std::string s = trim(text);
  if (s.empty()) bad(origin, line, "empty value");

  if (s == "true" || s == "false") {
    v.kind = Config::Value::Kind::Bool;
    v.boolean = s == "true";
    return v;
  }
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') bad(origin, line, "unterminated string");
    v.kind = Config::Value::Kind::String;
    v.str = s.substr(1, s.size() - 2);
    return v;
  }
  if (s.front() == '[') {
    if (s.back() != ']') bad(origin, line, "unterminated array");
    std::vector<std::string> items = split_top_level(s.substr(1, s.size() - 2), origin, line);
    if (items.empty()) {
      v.kind = Config::Value::Kind::NumberList;
      return v;
    }
    if (items[0].front() == '[') {
      v.kind = Config::Value::Kind::StringMatrix;
      for (const std::string& row : items) {
        if (row.front() != '[' || row.back() != ']')
          bad(origin, line, "matrix rows must be arrays");
        std::vector<std::string> cells =
            split_top_level(row.substr(1, row.size() - 2), origin, line);
        std::vector<std::string> parsed;
        for (const std::string& c : cells) {
          if (c.size() >= 2 && c.front() == '"' && c.back() == '"')
            parsed.push_back(c.substr(1, c.size() - 2));
          else
            parsed.push_back(c);
        }
        v.matrix.push_back(std::move(parsed));
      }
      return v;
    }
    if (items[0].front() == '"') {
      v.kind = Config::Value::Kind::StringList;
      for (const std::string& item : items) {
        if (item.size() < 2 || item.front() != '"' || item.back() != '"')
          bad(origin, line, "mixed array element types");
        v.strings.push_back(item.substr(1, item.size() - 2));
      }
      return v;
    }
    v.kind = Config::Value::Kind::NumberList;
    for (const std::string& item : items) {
      double d;
      if (!parse_number(item, d)) bad(origin, line, "bad number '" + item + "'");
      v.numbers.push_back(d);
    }
    return v;
  }
  double d;
  if (!parse_number(s, d)) bad(origin, line, "unrecognized value '" + s + "'");
  v.kind = Config::Value::Kind::Number;
  v.number = d;
  return v;
}

}  // namespace

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line;
    bool in_str = false;
    for (char c : raw) {
      if (c == '"') in_str = !in_str;
      if (c == '#' && !in_str) break;
      line += c;
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') bad(origin, line_no, "bad section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) bad(origin, line_no, "empty section name");
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) bad(origin, line_no, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) bad(origin, line_no, "empty key");
    std::string full = section.empty() ? key : section + "." + key;
    cfg.values_[full] = parse_value(line.substr(eq + 1), origin, line_no);
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::ConfigError, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

const Config::Value& Config::require(const std::string& key,
                                     Value::Kind kind) const {
  auto it = values_.find(key);
  if (it == values_.end())
    raise(ErrorCode::ConfigError, "missing config key '" + key + "'");
  if (it->second.kind != kind) {
    // numbers are acceptable where ints are wanted and vice versa
    raise(ErrorCode::ConfigError,
          "config key '" + key + "' (line " + std::to_string(it->second.line) +
              ") has the wrong type");
  }
  return it->second;
}

double Config::get_number(const std::string& key) const {
  return require(key, Value::Kind::Number).number;
}
double Config::get_number_or(const std::string& key, double fallback) const {
  return has(key) ? get_number(key) : fallback;
}
std::int64_t Config::get_int(const std::string& key) const {
  double d = get_number(key);
  std::int64_t v = static_cast<std::int64_t>(std::llround(d));
  if (std::abs(d - static_cast<double>(v)) > 1e-9)
    raise(ErrorCode::ConfigError, "config key '" + key + "' must be an integer");
  return v;
}
std::int64_t Config::get_int_or(const std::string& key, std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}
bool Config::get_bool_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  return require(key, Value::Kind::Bool).boolean;
}
std::string Config::get_string(const std::string& key) const {
  return require(key, Value::Kind::String).str;
}
std::string Config::get_string_or(const std::string& key,
                                  const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}
std::vector<double> Config::get_numbers(const std::string& key) const {
  return require(key, Value::Kind::NumberList).numbers;
}
std::vector<std::string> Config::get_strings(const std::string& key) const {
  auto it = values_.find(key);
  if (it != values_.end() && it->second.kind == Value::Kind::String)
    return {it->second.str};
  return require(key, Value::Kind::StringList).strings;
}
std::vector<std::vector<std::string>> Config::get_string_matrix(
    const std::string& key) const {
  return require(key, Value::Kind::StringMatrix).matrix;
}

void Config::set_override(const std::string& key, const std::string& value_text) {
  values_[key] = parse_value(value_text, "<override>", 0);
}

std::string Config::canonical_text() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [key, v] : values_) {
    // worker count is an execution parameter, not part of the experiment
    if (key == "simulation.threads") continue;
    os << key << " = ";
    switch (v.kind) {
      case Value::Kind::Number: os << v.number; break;
      case Value::Kind::Bool: os << (v.boolean ? "true" : "false"); break;
      case Value::Kind::String: os << '"' << v.str << '"'; break;
      case Value::Kind::NumberList: {
        os << '[';
        for (std::size_t i = 0; i < v.numbers.size(); ++i)
          os << (i ? "," : "") << v.numbers[i];
        os << ']';
        break;
      }
      case Value::Kind::StringList: {
        os << '[';
        for (std::size_t i = 0; i < v.strings.size(); ++i)
          os << (i ? "," : "") << '"' << v.strings[i] << '"';
        os << ']';
        break;
      }
      case Value::Kind::StringMatrix: {
        os << '[';
        for (std::size_t r = 0; r < v.matrix.size(); ++r) {
          os << (r ? ",[" : "[");
          for (std::size_t c = 0; c < v.matrix[r].size(); ++c)
            os << (c ? "," : "") << '"' << v.matrix[r][c] << '"';
          os << ']';
        }
        os << ']';
        break;
      }
    }
    os << '\n';
  }
  return os.str();
}

std::uint64_t Config::hash() const {
  std::string text = canonical_text();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace memlab
