#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace sst::csv {

inline bool needs_quoting(std::string_view field) {
  return field.find_first_of(",\"\n\r") != std::string_view::npos;
}

inline void write_field(std::ostream& out, std::string_view field) {
  if (!needs_quoting(field)) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

/// Writes one comma-separated row terminated by LF.
inline void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    write_field(out, fields[i]);
  }
  out << '\n';
}

/// RFC 4180 style reader. Quoted fields may span physical lines; CRLF and LF
/// line endings are both accepted.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Physical line number of the first line of the last record read (1-based).
  std::size_t line() const { return record_line_; }

  bool read(std::vector<std::string>& fields) {
    fields.clear();
    std::string physical;
    if (!std::getline(in_, physical)) return false;
    ++line_;
    record_line_ = line_;
    std::string field;
    bool quoted = false;
    bool at_field_start = true;
    for (;;) {
      for (std::size_t i = 0; i < physical.size(); ++i) {
        const char c = physical[i];
        if (quoted) {
          if (c == '"') {
            if (i + 1 < physical.size() && physical[i + 1] == '"') {
              field.push_back('"');
              ++i;
            } else {
              quoted = false;
            }
          } else {
            field.push_back(c);
          }
        } else if (c == '"' && at_field_start) {
          quoted = true;
          at_field_start = false;
        } else if (c == ',') {
          fields.push_back(std::move(field));
          field.clear();
          at_field_start = true;
        } else if (c == '\r' && i + 1 == physical.size()) {
          // CRLF
        } else {
          field.push_back(c);
          at_field_start = false;
        }
      }
      if (!quoted) break;
      field.push_back('\n');
      if (!std::getline(in_, physical)) break;
      ++line_;
    }
    fields.push_back(std::move(field));
    return true;
  }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::size_t record_line_ = 0;
};

}  // namespace sst::csv
