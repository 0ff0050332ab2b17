#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pla/records.hpp"
#include "pla/types.hpp"

namespace pla {

// Shortest decimal form that round-trips a binary64 exactly (%.17g).
std::string format_g17(double v);

// --- CSV ----------------------------------------------------------------------
//
// Strict headerless numeric CSV: each line is comma-separated numeric fields
// (surrounding blanks tolerated). Errors carry 1-based line numbers:
// ParseError (malformed field, short row, unreadable file), NonFiniteValue,
// NonMonotonicTime (timestamps must strictly increase).

std::vector<InputTuple> ingest_csv(std::istream& in, std::size_t t_col,
                                   std::size_t y_col);
std::vector<InputTuple> ingest_csv_file(const std::string& path,
                                        std::size_t t_col, std::size_t y_col);

// One timestamp column plus several value columns, compressed per channel.
std::vector<std::vector<InputTuple>> ingest_csv_multi(
    std::istream& in, std::size_t t_col, std::span<const std::size_t> y_cols);
std::vector<std::vector<InputTuple>> ingest_csv_multi_file(
    const std::string& path, std::size_t t_col,
    std::span<const std::size_t> y_cols);

// A single strictly increasing timestamp column (for decompression).
std::vector<double> ingest_timestamp_column(std::istream& in, std::size_t t_col);
std::vector<double> ingest_timestamp_column_file(const std::string& path,
                                                 std::size_t t_col);

// "t,y" lines, both fields in round-trippable decimal form.
void write_tuples_csv(std::ostream& os, std::span<const ReconstructedTuple> tuples);

// --- Stream files ---------------------------------------------------------------
//
// A stream file is the 16-byte header followed by the record bytes.

void write_stream_file(const std::string& path, const StreamHeader& header,
                       std::span<const std::uint8_t> record_bytes);

struct LoadedStream {
  StreamHeader header;
  std::vector<std::uint8_t> bytes;  // record bytes, header stripped
};

LoadedStream read_stream_file(const std::string& path);

}  // namespace pla
