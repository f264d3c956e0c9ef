#include "pstat/csv.hpp"

#include "pstat/errors.hpp"

namespace pstat::csv {

bool Reader::next(std::vector<std::string>& fields) {
  fields.clear();
  std::string line;
  if (!std::getline(in_, line)) return false;
  ++line_;
  record_line_ = line_;

  if (first_) {
    first_ = false;
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
  }

  std::string field;
  bool in_quotes = false;
  bool after_quote = false;
  std::size_t i = 0;
  for (;;) {
    if (i == line.size()) {
      if (in_quotes) {
        // Quoted field continues on the next physical line.
        std::string more;
        if (!std::getline(in_, more)) {
          throw ParseError(record_line_, "unterminated quoted field");
        }
        ++line_;
        if (!field.empty() && field.back() == '\r') field.pop_back();
        field += '\n';
        line = std::move(more);
        i = 0;
        continue;
      }
      if (!field.empty() && field.back() == '\r' && !after_quote) field.pop_back();
      fields.push_back(std::move(field));
      return true;
    }
    const char c = line[i++];
    if (in_quotes) {
      if (c == '"') {
        if (i < line.size() && line[i] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        field += c;
      }
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      after_quote = false;
    } else if (after_quote) {
      if (c == '\r' && i == line.size()) continue;
      throw ParseError(record_line_, "unexpected character after closing quote");
    } else if (c == '"' && field.empty()) {
      in_quotes = true;
    } else {
      field += c;
    }
  }
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out;
  out.reserve(field.size() + 2);
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                       std::string_view name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

}  // namespace pstat::csv
