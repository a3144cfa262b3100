#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace mrfanom::csv {

/// Shortest decimal text that parses back to exactly `value`.
std::string format(double value);

/// Splits one comma-separated line; fields are trimmed. No quoting support:
/// every schema in this project is numeric or a bare token.
std::vector<std::string_view> split(std::string_view line);

/// Reads a headered CSV file line by line, tracking line numbers for errors.
class Reader {
 public:
  explicit Reader(const std::filesystem::path& path);

  const std::vector<std::string>& header() const noexcept { return header_; }

  /// Throws ParseError unless the header matches `expected` exactly.
  void expect_header(const std::vector<std::string_view>& expected) const;

  /// Advances to the next non-empty row. Returns false at end of file.
  bool next();
  const std::vector<std::string_view>& fields() const noexcept { return fields_; }
  std::size_t line_number() const noexcept { return line_no_; }

  double number(std::size_t column) const;
  long long integer(std::size_t column) const;

  [[noreturn]] void fail(const std::string& message) const;

 private:
  std::ifstream in_;
  std::filesystem::path path_;
  std::vector<std::string> header_;
  std::string line_;
  std::vector<std::string_view> fields_;
  std::size_t line_no_ = 0;
};

/// Opens `path` for writing, creating parent directories. Throws IoError.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace mrfanom::csv
