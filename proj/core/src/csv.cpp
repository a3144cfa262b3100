#include "mrfanom/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "mrfanom/error.hpp"
#include "mrfanom/keyvalue.hpp"

namespace mrfanom::csv {

std::string format(double value) {
  if (value == 0.0) return "0";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) return std::to_string(value);
  return std::string(buf.data(), ptr);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Reader::Reader(const std::filesystem::path& path) : in_(path), path_(path) {
  if (!in_) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  while (std::getline(in_, line_)) {
    ++line_no_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    if (trim(line_).empty()) continue;
    std::string_view view = line_;
    if (view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
    for (auto f : split(view)) header_.emplace_back(f);
    return;
  }
  throw Error(ErrorCode::ParseError, path.string() + ": empty file");
}

void Reader::expect_header(const std::vector<std::string_view>& expected) const {
  bool ok = header_.size() == expected.size();
  for (std::size_t i = 0; ok && i < expected.size(); ++i) ok = header_[i] == expected[i];
  if (!ok) {
    std::string want;
    for (auto e : expected) want += (want.empty() ? "" : ",") + std::string(e);
    throw Error(ErrorCode::ParseError,
                path_.string() + ": line 1: expected header '" + want + "'");
  }
}

bool Reader::next() {
  while (std::getline(in_, line_)) {
    ++line_no_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    if (trim(line_).empty()) continue;
    fields_ = split(line_);
    if (fields_.size() != header_.size()) {
      fail("expected " + std::to_string(header_.size()) + " fields, got " +
           std::to_string(fields_.size()));
    }
    return true;
  }
  return false;
}

double Reader::number(std::size_t column) const {
  auto text = fields_.at(column);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    fail("column '" + header_[column] + "': not a number: '" + std::string(text) + "'");
  }
  return value;
}

long long Reader::integer(std::size_t column) const {
  auto text = fields_.at(column);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    fail("column '" + header_[column] + "': not an integer: '" + std::string(text) + "'");
  }
  return value;
}

void Reader::fail(const std::string& message) const {
  throw Error(ErrorCode::ParseError,
              path_.string() + ": line " + std::to_string(line_no_) + ": " + message);
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

}  // namespace mrfanom::csv
