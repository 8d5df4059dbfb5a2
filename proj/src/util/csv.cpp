#include "farmvoice/util/csv.hpp"

#include "farmvoice/core/error.hpp"

namespace fv::util {

std::optional<std::vector<std::string>> CsvReader::next() {
  int c = in_.get();
  // Skip blank lines between records.
  while (c == '\n' || c == '\r') {
    if (c == '\n') ++line_;
    c = in_.get();
  }
  if (c == std::char_traits<char>::eof()) return std::nullopt;

  record_line_ = line_;
  std::vector<std::string> fields(1);
  bool quoted = false;
  bool after_quote = false;
  for (;; c = in_.get()) {
    if (c == std::char_traits<char>::eof()) {
      if (quoted) {
        throw Error(ErrorCode::ParseError,
                    "unterminated quoted field starting on line " + std::to_string(record_line_));
      }
      break;
    }
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          fields.back() += '"';
          in_.get();
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        if (ch == '\n') ++line_;
        fields.back() += ch;
      }
      continue;
    }
    if (ch == ',') {
      fields.emplace_back();
      after_quote = false;
    } else if (ch == '\n') {
      ++line_;
      break;
    } else if (ch == '\r') {
      if (in_.peek() == '\n') in_.get();
      ++line_;
      break;
    } else if (ch == '"' && fields.back().empty() && !after_quote) {
      quoted = true;
    } else {
      fields.back() += ch;
    }
  }
  return fields;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace fv::util
