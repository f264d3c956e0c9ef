#ifndef PSTAT_CSV_HPP_
#define PSTAT_CSV_HPP_

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace pstat::csv {

// RFC 4180 reader: comma separated, double-quote escaping, quoted fields may
// span lines. Accepts LF or CRLF. A UTF-8 byte order mark on the first field
// is dropped.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Returns false at end of input. Throws ParseError on an unterminated
  // quote or stray characters after a closing quote.
  bool next(std::vector<std::string>& fields);

  // 1-based number of the physical line the last record started on.
  std::size_t record_line() const noexcept { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::size_t record_line_ = 0;
  bool first_ = true;
};

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Index of a header column, if present.
std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                       std::string_view name);

}  // namespace pstat::csv

#endif  // PSTAT_CSV_HPP_
