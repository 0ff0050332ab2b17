#include "pla/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <string_view>

#include "pla/error.hpp"

namespace pla {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t sep = line.find(',', start);
    if (sep == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, sep - start)));
    start = sep + 1;
  }
}

[[noreturn]] void fail_line(Errc code, std::size_t line_no, const std::string& what) {
  fail(code, "line " + std::to_string(line_no) + ": " + what);
}

double parse_field(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    fail_line(Errc::ParseError, line_no,
              "malformed numeric field '" + std::string(field) + "'");
  }
  return value;
}

// Shared row walker: hands each line's fields to `row` with its line number.
template <typename RowFn>
void for_each_row(std::istream& in, std::size_t max_col, RowFn&& row) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string_view> fields = split_fields(line);
    if (max_col >= fields.size()) {
      fail_line(Errc::ParseError, line_no,
                "expected at least " + std::to_string(max_col + 1) +
                    " columns, found " + std::to_string(fields.size()));
    }
    row(fields, line_no);
  }
}

double validated_timestamp(double t, bool have_prev, double prev,
                           std::size_t line_no) {
  if (!std::isfinite(t)) {
    fail_line(Errc::NonFiniteValue, line_no, "timestamp is not finite");
  }
  if (have_prev && !(t > prev)) {
    fail_line(Errc::NonMonotonicTime, line_no,
              "timestamps must strictly increase");
  }
  return t;
}

}  // namespace

std::vector<InputTuple> ingest_csv(std::istream& in, std::size_t t_col,
                                   std::size_t y_col) {
  std::vector<InputTuple> out;
  bool have_prev = false;
  double prev = 0.0;
  for_each_row(in, std::max(t_col, y_col), [&](const auto& fields, std::size_t line_no) {
    const double t = validated_timestamp(parse_field(fields[t_col], line_no),
                                         have_prev, prev, line_no);
    const double y = parse_field(fields[y_col], line_no);
    if (!std::isfinite(y)) {
      fail_line(Errc::NonFiniteValue, line_no, "value is not finite");
    }
    out.push_back(InputTuple{t, y});
    have_prev = true;
    prev = t;
  });
  return out;
}

std::vector<std::vector<InputTuple>> ingest_csv_multi(
    std::istream& in, std::size_t t_col, std::span<const std::size_t> y_cols) {
  if (y_cols.empty()) {
    fail(Errc::BadParams, "at least one value column is required");
  }
  std::size_t max_col = t_col;
  for (std::size_t c : y_cols) max_col = std::max(max_col, c);

  std::vector<std::vector<InputTuple>> out(y_cols.size());
  bool have_prev = false;
  double prev = 0.0;
  for_each_row(in, max_col, [&](const auto& fields, std::size_t line_no) {
    const double t = validated_timestamp(parse_field(fields[t_col], line_no),
                                         have_prev, prev, line_no);
    for (std::size_t c = 0; c < y_cols.size(); ++c) {
      const double y = parse_field(fields[y_cols[c]], line_no);
      if (!std::isfinite(y)) {
        fail_line(Errc::NonFiniteValue, line_no, "value is not finite");
      }
      out[c].push_back(InputTuple{t, y});
    }
    have_prev = true;
    prev = t;
  });
  return out;
}

std::vector<double> ingest_timestamp_column(std::istream& in, std::size_t t_col) {
  std::vector<double> out;
  bool have_prev = false;
  double prev = 0.0;
  for_each_row(in, t_col, [&](const auto& fields, std::size_t line_no) {
    const double t = validated_timestamp(parse_field(fields[t_col], line_no),
                                         have_prev, prev, line_no);
    out.push_back(t);
    have_prev = true;
    prev = t;
  });
  return out;
}

namespace {

std::ifstream open_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open file: " + path);
  return in;
}

}  // namespace

std::vector<InputTuple> ingest_csv_file(const std::string& path,
                                        std::size_t t_col, std::size_t y_col) {
  std::ifstream in = open_text(path);
  return ingest_csv(in, t_col, y_col);
}

std::vector<std::vector<InputTuple>> ingest_csv_multi_file(
    const std::string& path, std::size_t t_col,
    std::span<const std::size_t> y_cols) {
  std::ifstream in = open_text(path);
  return ingest_csv_multi(in, t_col, y_cols);
}

std::vector<double> ingest_timestamp_column_file(const std::string& path,
                                                 std::size_t t_col) {
  std::ifstream in = open_text(path);
  return ingest_timestamp_column(in, t_col);
}

void write_tuples_csv(std::ostream& os,
                      std::span<const ReconstructedTuple> tuples) {
  for (const ReconstructedTuple& r : tuples) {
    os << format_g17(r.t) << ',' << format_g17(r.y_approx) << '\n';
  }
}

void write_stream_file(const std::string& path, const StreamHeader& header,
                       std::span<const std::uint8_t> record_bytes) {
  std::vector<std::uint8_t> blob;
  blob.reserve(kStreamHeaderBytes + record_bytes.size());
  append_header(blob, header);
  blob.insert(blob.end(), record_bytes.begin(), record_bytes.end());

  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::ParseError, "cannot open output file: " + path);
  out.write(reinterpret_cast<const char*>(blob.data()),
            static_cast<std::streamsize>(blob.size()));
  if (!out) fail(Errc::ParseError, "failed writing output file: " + path);
}

LoadedStream read_stream_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::ParseError, "cannot open file: " + path);
  std::vector<std::uint8_t> blob((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  const StreamHeader header = parse_header(blob, pos);
  return LoadedStream{header,
                      std::vector<std::uint8_t>(blob.begin() +
                                                    static_cast<std::ptrdiff_t>(pos),
                                                blob.end())};
}

}  // namespace pla
