#include "radcal/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <string>

#include "radcal/error.hpp"

namespace radcal {
namespace {

class LineParser {
 public:
  LineParser(std::string_view s, int line) : s_(s), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::kConfig, "TOML line " + std::to_string(line_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool at_end_or_comment() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string key() {
    skip_ws();
    if (peek() == '"') return basic_string();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                s_[pos_] == '-')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::vector<std::string> dotted_key() {
    std::vector<std::string> parts{key()};
    skip_ws();
    while (peek() == '.') {
      ++pos_;
      parts.push_back(key());
      skip_ws();
    }
    return parts;
  }

  Json value() {
    skip_ws();
    const char c = peek();
    if (c == '"') return basic_string();
    if (c == '\'') return literal_string();
    if (c == '[') return array();
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    return number();
  }

 private:
  std::string literal_string() {
    const std::size_t close = s_.find('\'', pos_ + 1);
    if (close == std::string_view::npos) fail("unterminated string");
    std::string out(s_.substr(pos_ + 1, close - pos_ - 1));
    pos_ = close + 1;
    return out;
  }

  std::string basic_string() {
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      char ch = s_[pos_++];
      if (ch == '\\') {
        if (pos_ >= s_.size()) fail("unterminated escape");
        const char e = s_[pos_++];
        switch (e) {
          case 'n': ch = '\n'; break;
          case 't': ch = '\t'; break;
          case '"': ch = '"'; break;
          case '\\': ch = '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      out += ch;
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  Json array() {
    ++pos_;  // [
    Json arr = Json::array();
    skip_ws();
    if (peek() == ']') {
      ++pos_;
      return arr;
    }
    while (true) {
      arr.push_back(value());
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        skip_ws();
        if (peek() == ']') {
          ++pos_;
          return arr;
        }
        continue;
      }
      if (peek() == ']') {
        ++pos_;
        return arr;
      }
      fail("expected ',' or ']' in array (arrays must fit on one line)");
    }
  }

  Json number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '+' ||
                                s_[pos_] == '-' || s_[pos_] == '.' || s_[pos_] == '_')) {
      ++pos_;
    }
    std::string tok;
    for (char ch : s_.substr(start, pos_ - start)) {
      if (ch != '_') tok += ch;
    }
    if (tok.empty()) fail("expected a value");
    if (tok.front() == '+') tok.erase(0, 1);
    const bool is_float = tok.find_first_of(".eE") != std::string::npos;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (is_float) {
      double d = 0.0;
      const auto [p, ec] = std::from_chars(first, last, d);
      if (ec != std::errc() || p != last) fail("invalid float '" + tok + "'");
      return d;
    }
    std::int64_t i = 0;
    const auto [p, ec] = std::from_chars(first, last, i);
    if (ec != std::errc() || p != last) fail("invalid value '" + tok + "'");
    return i;
  }

  std::string_view s_;
  std::size_t pos_{0};
  int line_;
};

Json& descend(Json& root, const std::vector<std::string>& path, LineParser& lp) {
  Json* node = &root;
  for (const std::string& part : path) {
    Json& next = (*node)[part];
    if (next.is_null()) next = Json::object();
    if (!next.is_object()) lp.fail("'" + part + "' is already a value, not a table");
    node = &next;
  }
  return *node;
}

}  // namespace

Json parse_toml(std::string_view text) {
  Json root = Json::object();
  Json* table = &root;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    LineParser lp(line, line_no);
    if (lp.at_end_or_comment()) continue;
    if (lp.peek() == '[') {
      lp.expect('[');
      if (lp.peek() == '[') lp.fail("arrays of tables are not supported");
      const auto path = lp.dotted_key();
      lp.expect(']');
      if (!lp.at_end_or_comment()) lp.fail("trailing characters after table header");
      table = &descend(root, path, lp);
      continue;
    }
    auto path = lp.dotted_key();
    lp.expect('=');
    Json v = lp.value();
    if (!lp.at_end_or_comment()) lp.fail("trailing characters after value");
    const std::string leaf = path.back();
    path.pop_back();
    Json& target = descend(*table, path, lp);
    if (target.contains(leaf)) lp.fail("duplicate key '" + leaf + "'");
    target[leaf] = std::move(v);
  }
  return root;
}

}  // namespace radcal
