#pragma once

#include <charconv>
#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace onebit::cli {

/// Shortest-form-independent rendering with 17 significant digits; locale free.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

/// RFC-4180 quoting when the field contains a separator, quote or newline.
inline std::string quote_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class CsvField {
public:
  CsvField(double v) : text_(format_double(v)) {}
  CsvField(std::uint64_t v) : text_(std::to_string(v)) {}
  CsvField(std::int64_t v) : text_(std::to_string(v)) {}
  CsvField(unsigned v) : text_(std::to_string(v)) {}
  CsvField(int v) : text_(std::to_string(v)) {}
  CsvField(unsigned long long v) : text_(std::to_string(v)) {}
  CsvField(bool v) : text_(v ? "1" : "0") {}
  CsvField(std::string_view v) : text_(quote_field(v)) {}
  CsvField(const char* v) : text_(quote_field(v)) {}
  CsvField(const std::string& v) : text_(quote_field(v)) {}

  const std::string& text() const { return text_; }

private:
  std::string text_;
};

/// In-memory CSV document with a header row and '\n' line endings.
class CsvTable {
public:
  explicit CsvTable(std::initializer_list<std::string_view> header) : columns_(header.size()) {
    bool first = true;
    for (auto h : header) {
      if (!first) out_ << ',';
      out_ << quote_field(h);
      first = false;
    }
    out_ << '\n';
  }

  void row(std::initializer_list<CsvField> fields) {
    bool first = true;
    for (const auto& f : fields) {
      if (!first) out_ << ',';
      out_ << f.text();
      first = false;
    }
    out_ << '\n';
    ++rows_;
  }

  std::string str() const { return out_.str(); }
  std::size_t columns() const { return columns_; }
  std::size_t rows() const { return rows_; }

private:
  std::ostringstream out_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

} // namespace onebit::cli
