#include "pla/records.hpp"

#include <bit>
#include <cmath>
#include <cstring>

namespace pla {

namespace {

struct SizeVisitor {
  std::size_t operator()(const ImplicitJoint&) const { return 16; }
  std::size_t operator()(const ImplicitDisjointHead&) const { return 16; }
  std::size_t operator()(const ImplicitDisjointTail&) const { return 8; }
  std::size_t operator()(const QuadSegment&) const { return 25; }
  std::size_t operator()(const RawSingleton&) const { return 8; }
  std::size_t operator()(const CountedSegment&) const { return 17; }
  std::size_t operator()(const CountedSingleton&) const { return 9; }
  std::size_t operator()(const SingletonBurst& b) const {
    return 1 + 8 * b.values.size();
  }
};

void require_positive_t(double t) {
  if (!(t > 0.0)) {
    fail(Errc::NonPositiveTimestamp,
         "implicit records require strictly positive timestamps");
  }
}

}  // namespace

std::size_t record_size_bytes(const CompressionRecord& r) {
  return std::visit(SizeVisitor{}, r);
}

double record_size_yunits(const CompressionRecord& r) {
  return static_cast<double>(record_size_bytes(r)) / 8.0;
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
}

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

double get_f64(std::span<const std::uint8_t> in, std::size_t& pos) {
  if (pos + 8 > in.size()) {
    fail(Errc::TruncatedStream, "stream ends inside a 64-bit value");
  }
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(in[pos + i]) << (8 * i);
  }
  pos += 8;
  return std::bit_cast<double>(bits);
}

std::uint8_t get_u8(std::span<const std::uint8_t> in, std::size_t& pos) {
  if (pos >= in.size()) {
    fail(Errc::TruncatedStream, "stream ends before a counter byte");
  }
  return in[pos++];
}

namespace {

void append_implicit(std::vector<std::uint8_t>& out, const CompressionRecord& r) {
  if (const auto* j = std::get_if<ImplicitJoint>(&r)) {
    require_positive_t(j->t);
    put_f64(out, j->t);
    put_f64(out, j->y);
  } else if (const auto* h = std::get_if<ImplicitDisjointHead>(&r)) {
    require_positive_t(h->t);
    put_f64(out, -h->t);
    put_f64(out, h->y_end);
  } else if (const auto* t = std::get_if<ImplicitDisjointTail>(&r)) {
    put_f64(out, t->y_start);
  } else {
    fail(Errc::BadParams, "record kind not valid for the implicit knot stream");
  }
}

void append_two_streams_segments(std::vector<std::uint8_t>& out,
                                 const CompressionRecord& r) {
  const auto* q = std::get_if<QuadSegment>(&r);
  if (q == nullptr) {
    fail(Errc::BadParams, "segments stream accepts only quad segment records");
  }
  if (q->n < 4 || q->n > 256) {
    fail(Errc::BadParams, "quad segment length must be within [4, 256]");
  }
  put_f64(out, q->t0);
  put_u8(out, static_cast<std::uint8_t>(q->n - 1));
  put_f64(out, q->a);
  put_f64(out, q->b);
}

void append_two_streams_singletons(std::vector<std::uint8_t>& out,
                                   const CompressionRecord& r) {
  const auto* s = std::get_if<RawSingleton>(&r);
  if (s == nullptr) {
    fail(Errc::BadParams, "singletons stream accepts only raw singleton records");
  }
  put_f64(out, s->y);
}

void append_single_stream(std::vector<std::uint8_t>& out,
                          const CompressionRecord& r) {
  if (const auto* seg = std::get_if<CountedSegment>(&r)) {
    if (seg->n < 3 || seg->n > 256) {
      fail(Errc::BadParams, "counted segment length must be within [3, 256]");
    }
    put_u8(out, static_cast<std::uint8_t>(seg->n - 1));
    put_f64(out, seg->a);
    put_f64(out, seg->b);
  } else if (const auto* s = std::get_if<CountedSingleton>(&r)) {
    put_u8(out, 0x00);
    put_f64(out, s->y);
  } else {
    fail(Errc::BadParams, "record kind not valid for the single-stream format");
  }
}

void append_single_stream_v(std::vector<std::uint8_t>& out,
                            const CompressionRecord& r) {
  if (const auto* seg = std::get_if<CountedSegment>(&r)) {
    if (seg->n < 3 || seg->n > 127) {
      fail(Errc::BadParams, "counted segment length must be within [3, 127]");
    }
    put_u8(out, static_cast<std::uint8_t>(seg->n));
    put_f64(out, seg->a);
    put_f64(out, seg->b);
  } else if (const auto* b = std::get_if<SingletonBurst>(&r)) {
    const std::size_t m = b->values.size();
    if (m < 1 || m > 127) {
      fail(Errc::BadParams, "singleton burst length must be within [1, 127]");
    }
    const auto counter = static_cast<std::int8_t>(-static_cast<int>(m));
    put_u8(out, static_cast<std::uint8_t>(counter));
    for (double y : b->values) put_f64(out, y);
  } else {
    fail(Errc::BadParams, "record kind not valid for the variable single-stream format");
  }
}

}  // namespace

void append_record(std::vector<std::uint8_t>& out, const CompressionRecord& r,
                   StreamId stream) {
  switch (stream) {
    case StreamId::ImplicitKnots:
      append_implicit(out, r);
      return;
    case StreamId::TwoStreamsSegments:
      append_two_streams_segments(out, r);
      return;
    case StreamId::TwoStreamsSingletons:
      append_two_streams_singletons(out, r);
      return;
    case StreamId::SingleStream:
      append_single_stream(out, r);
      return;
    case StreamId::SingleStreamV:
      append_single_stream_v(out, r);
      return;
  }
  fail(Errc::BadParams, "unknown stream id");
}

std::vector<Knot> parse_implicit_knots(std::span<const std::uint8_t> in) {
  std::vector<Knot> knots;
  std::size_t pos = 0;
  while (pos < in.size()) {
    const double first = get_f64(in, pos);
    if (std::signbit(first)) {
      const double t = -first;
      const double y_end = get_f64(in, pos);
      const double y_start = get_f64(in, pos);
      knots.push_back(Knot::disjoint_knot(t, y_end, y_start));
    } else {
      const double y = get_f64(in, pos);
      knots.push_back(Knot::joint_knot(first, y));
    }
  }
  return knots;
}

std::vector<QuadSegment> parse_quad_segments(std::span<const std::uint8_t> in) {
  std::vector<QuadSegment> segments;
  std::size_t pos = 0;
  while (pos < in.size()) {
    QuadSegment q{};
    q.t0 = get_f64(in, pos);
    q.n = static_cast<std::size_t>(get_u8(in, pos)) + 1;
    q.a = get_f64(in, pos);
    q.b = get_f64(in, pos);
    if (q.n < 4) {
      fail(Errc::CorruptStream, "quad segment counter below the legal minimum");
    }
    segments.push_back(q);
  }
  return segments;
}

std::vector<double> parse_raw_singletons(std::span<const std::uint8_t> in) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos < in.size()) {
    values.push_back(get_f64(in, pos));
  }
  return values;
}

void append_header(std::vector<std::uint8_t>& out, const StreamHeader& h) {
  out.push_back('P');
  out.push_back('L');
  out.push_back('A');
  out.push_back('1');
  out.push_back(static_cast<std::uint8_t>(h.stream));
  out.push_back(h.method);
  out.push_back(0);
  out.push_back(0);
  put_f64(out, h.epsilon);
}

StreamHeader parse_header(std::span<const std::uint8_t> in, std::size_t& pos) {
  if (pos + kStreamHeaderBytes > in.size()) {
    fail(Errc::TruncatedStream, "stream shorter than its header");
  }
  if (in[pos] != 'P' || in[pos + 1] != 'L' || in[pos + 2] != 'A' ||
      in[pos + 3] != '1') {
    fail(Errc::CorruptStream, "bad magic bytes");
  }
  const std::uint8_t stream = in[pos + 4];
  const std::uint8_t method = in[pos + 5];
  if (stream > 4) fail(Errc::CorruptStream, "unknown stream id in header");
  if (method > 3) fail(Errc::CorruptStream, "unknown method id in header");
  if (in[pos + 6] != 0 || in[pos + 7] != 0) {
    fail(Errc::CorruptStream, "reserved header bytes must be zero");
  }
  pos += 8;
  const double eps = get_f64(in, pos);
  if (!std::isfinite(eps) || !(eps > 0.0)) {
    fail(Errc::CorruptStream, "header error threshold must be finite and positive");
  }
  return StreamHeader{static_cast<StreamId>(stream), method, eps};
}

}  // namespace pla
