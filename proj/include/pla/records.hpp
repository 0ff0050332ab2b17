#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "pla/error.hpp"
#include "pla/types.hpp"

namespace pla {

// Identifies one serialized byte stream inside a stream file. TwoStreams
// splits its output across two streams (segments and singletons); every other
// protocol uses a single stream.
enum class StreamId : std::uint8_t {
  ImplicitKnots = 0,
  TwoStreamsSegments = 1,
  TwoStreamsSingletons = 2,
  SingleStream = 3,
  SingleStreamV = 4,
};

// --- Record kinds -----------------------------------------------------------
//
// All 64-bit values are IEEE-754 binary64, little-endian; counters are single
// bytes. Byte costs: ImplicitJoint 16, ImplicitDisjointHead 16,
// ImplicitDisjointTail 8, QuadSegment 25, RawSingleton 8, CountedSegment 17,
// CountedSingleton 9, SingletonBurst 1+8m.

// A knot where both adjacent pieces meet: (t, y). Serialized [t][y].
struct ImplicitJoint {
  double t;
  double y;
};

// First half of a disjoint knot: the earlier piece's value at t. The
// timestamp is serialized NEGATED so the decoder can tell heads from joints;
// t must therefore be strictly positive.
struct ImplicitDisjointHead {
  double t;
  double y_end;
};

// Second half of a disjoint knot: the later piece's value at the head's t.
// Always immediately follows its head on the wire.
struct ImplicitDisjointTail {
  double y_start;
};

// TwoStreams segment record: [t0][n-1 as one byte][a][b], 4 <= n <= 256.
struct QuadSegment {
  double t0;
  std::size_t n;
  double a;
  double b;
};

// TwoStreams singleton record: a bare value, [y].
struct RawSingleton {
  double y;
};

// SingleStream / SingleStreamV segment record: [counter][a][b].
// SingleStream stores n-1 in an unsigned byte (3 <= n <= 256); SingleStreamV
// stores n in a signed byte (3 <= n <= 127).
struct CountedSegment {
  std::size_t n;
  double a;
  double b;
};

// SingleStream singleton record: [0x00][y].
struct CountedSingleton {
  double y;
};

// SingleStreamV singleton burst: [-m as signed byte][y_1]..[y_m], 1 <= m <= 127.
struct SingletonBurst {
  std::vector<double> values;
};

using CompressionRecord =
    std::variant<ImplicitJoint, ImplicitDisjointHead, ImplicitDisjointTail,
                 QuadSegment, RawSingleton, CountedSegment, CountedSingleton,
                 SingletonBurst>;

// Serialized size in bytes.
std::size_t record_size_bytes(const CompressionRecord& r);

// Size relative to one raw y value (8 bytes), e.g. QuadSegment -> 25/8.
double record_size_yunits(const CompressionRecord& r);

// --- Little-endian primitives ----------------------------------------------

void put_f64(std::vector<std::uint8_t>& out, double v);
void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v);

// Read helpers advance `pos`; they throw TruncatedStream when the input ends
// mid-value.
double get_f64(std::span<const std::uint8_t> in, std::size_t& pos);
std::uint8_t get_u8(std::span<const std::uint8_t> in, std::size_t& pos);

// Serializes `r` onto `out` as a record of `stream`. Throws BadParams when the
// record kind or a counter is out of range for that stream, and
// NonPositiveTimestamp for implicit records with t <= 0 (the sign trick needs
// strictly positive timestamps).
void append_record(std::vector<std::uint8_t>& out, const CompressionRecord& r,
                   StreamId stream);

// --- Whole-stream parsers ----------------------------------------------------

// Implicit knot stream -> knots. A leading value with the sign bit set opens a
// disjoint knot (negated t, then y_end, then the adjacent tail's y_start);
// otherwise the pair (t, y) is a joint knot.
std::vector<Knot> parse_implicit_knots(std::span<const std::uint8_t> in);

// TwoStreams: full segments stream / full singletons stream.
std::vector<QuadSegment> parse_quad_segments(std::span<const std::uint8_t> in);
std::vector<double> parse_raw_singletons(std::span<const std::uint8_t> in);

// --- Stream-file header ------------------------------------------------------
//
// 16 bytes: magic "PLA1", stream id (1 byte), method id (1 byte), 2 reserved
// zero bytes, epsilon as binary64.
struct StreamHeader {
  StreamId stream;
  std::uint8_t method;
  double epsilon;
};

inline constexpr std::size_t kStreamHeaderBytes = 16;

void append_header(std::vector<std::uint8_t>& out, const StreamHeader& h);

// Validates magic, ids, reserved bytes, and that epsilon is finite and
// positive; throws CorruptStream / TruncatedStream.
StreamHeader parse_header(std::span<const std::uint8_t> in, std::size_t& pos);

}  // namespace pla
