#include "pla/protocols.hpp"

#include <cmath>
#include <utility>

namespace pla {

std::string_view protocol_name(ProtocolId id) {
  switch (id) {
    case ProtocolId::Implicit:
      return "implicit";
    case ProtocolId::TwoStreams:
      return "two-streams";
    case ProtocolId::SingleStream:
      return "single-stream";
    case ProtocolId::SingleStreamV:
      return "single-stream-v";
  }
  return "unknown";
}

std::optional<ProtocolId> protocol_from_name(std::string_view name) {
  if (name == "implicit") return ProtocolId::Implicit;
  if (name == "two-streams") return ProtocolId::TwoStreams;
  if (name == "single-stream") return ProtocolId::SingleStream;
  if (name == "single-stream-v") return ProtocolId::SingleStreamV;
  return std::nullopt;
}

bool pairing_legal(MethodId method, ProtocolId protocol) {
  if (protocol == ProtocolId::Implicit) return true;
  return method != MethodId::Swing;
}

std::size_t protocol_min_segment_length(ProtocolId id) {
  switch (id) {
    case ProtocolId::Implicit:
      return 1;
    case ProtocolId::TwoStreams:
      return 4;
    case ProtocolId::SingleStream:
    case ProtocolId::SingleStreamV:
      return 3;
  }
  return 1;
}

std::size_t protocol_max_segment_length(ProtocolId id) {
  switch (id) {
    case ProtocolId::Implicit:
      return 0;
    case ProtocolId::TwoStreams:
    case ProtocolId::SingleStream:
      return 256;
    case ProtocolId::SingleStreamV:
      return 127;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Pipeline

Pipeline::Pipeline(MethodId method, ProtocolId protocol, ErrorThreshold eps,
                   std::size_t max_segment_length)
    : method_id_(method),
      protocol_(protocol),
      eps_(eps),
      cap_(max_segment_length),
      min_len_(protocol_min_segment_length(protocol)) {
  if (!pairing_legal(method, protocol)) {
    fail(Errc::IllegalPairing,
         "this protocol cannot carry segments that join their predecessor");
  }
  if (cap_ == 0) {
    cap_ = protocol_max_segment_length(protocol_);
  }
  if (protocol_ == ProtocolId::Implicit) {
    if (cap_ == 1) {
      fail(Errc::BadParams, "segment cap must be 0 (uncapped) or at least 2");
    }
  } else {
    if (cap_ < min_len_ || cap_ > protocol_max_segment_length(protocol_)) {
      fail(Errc::BadParams,
           "segment cap outside the range this protocol can represent");
    }
  }
  method_ = make_method(method_id_, eps_, cap_);
}

void Pipeline::validate(const InputTuple& p) {
  if (!std::isfinite(p.t) || !std::isfinite(p.y)) {
    fail(Errc::NonFiniteValue, "tuples must have finite timestamp and value");
  }
  if (have_last_t_) {
    if (p.t == last_t_) {
      fail(Errc::EqualTimestamps, "duplicate timestamp in the input stream");
    }
    if (p.t < last_t_) {
      fail(Errc::NonMonotonicTime, "timestamps must strictly increase");
    }
  }
  have_last_t_ = true;
  last_t_ = p.t;
}

void Pipeline::drop_covered(const SegmentSummary& s) {
  if (shadow_.size() < s.length ||
      shadow_.front().index != method_base_ + s.start_index) {
    fail(Errc::BadParams, "internal error: shadow buffer out of step");
  }
  shadow_.erase(shadow_.begin(),
                shadow_.begin() + static_cast<std::ptrdiff_t>(s.length));
}

std::vector<EmittedRecord> Pipeline::push(const InputTuple& p) {
  std::vector<EmittedRecord> out;
  if (protocol_ == ProtocolId::Implicit) {
    implicit_push(p, out);
  } else {
    generic_push(p, out);
  }
  return out;
}

std::vector<EmittedRecord> Pipeline::finish() {
  std::vector<EmittedRecord> out;
  const std::size_t trigger = next_index_;
  if (protocol_ == ProtocolId::Implicit) {
    implicit_finish(trigger, out);
  } else {
    if (std::optional<ClosedSegment> closed = method_->finish()) {
      if (closed->summary.length >= min_len_) {
        emit_segment(closed->summary, trigger, out);
        drop_covered(closed->summary);
      } else {
        // A tail shorter than the protocol minimum cannot be replayed into
        // anything longer; every covered tuple goes out as a singleton.
        while (!shadow_.empty()) {
          demote_front(trigger, out);
        }
      }
    }
    flush_burst(trigger, out);
  }
  next_index_ = 0;
  method_base_ = 0;
  have_last_t_ = false;
  shadow_.clear();
  first_knot_done_ = false;
  pending_tail_t_.reset();
  deferred_head_line_.reset();
  last_wire_knot_t_.reset();
  return out;
}

// --- Generic (non-implicit) encoding ------------------------------------------

void Pipeline::generic_push(const InputTuple& p, std::vector<EmittedRecord>& out) {
  validate(p);
  const std::size_t trigger = next_index_++;

  std::deque<ShadowEntry> feed;
  feed.push_back(ShadowEntry{p, trigger});
  while (!feed.empty()) {
    const ShadowEntry entry = feed.front();
    feed.pop_front();
    shadow_.push_back(entry);
    std::optional<ClosedSegment> closed = method_->push(entry.tuple);
    if (!closed) continue;
    if (closed->summary.length >= min_len_) {
      emit_segment(closed->summary, trigger, out);
      drop_covered(closed->summary);
      continue;
    }
    // Too short to express as a segment record: demote the earliest buffered
    // tuple to a singleton, restart the method, and replay the rest. Each
    // round retires one tuple for good, so the loop terminates.
    demote_front(trigger, out);
    method_ = make_method(method_id_, eps_, cap_);
    feed.insert(feed.begin(), shadow_.begin(), shadow_.end());
    shadow_.clear();
    method_base_ = feed.front().index;
  }
}

void Pipeline::emit_segment(const SegmentSummary& s, std::size_t trigger,
                            std::vector<EmittedRecord>& out) {
  CompressionRecord rec;
  switch (protocol_) {
    case ProtocolId::TwoStreams:
      rec = QuadSegment{s.start_t, s.length, s.line.a, s.line.b};
      break;
    case ProtocolId::SingleStream:
      rec = CountedSegment{s.length, s.line.a, s.line.b};
      break;
    case ProtocolId::SingleStreamV:
      // Pending singletons precede this segment in stream order.
      flush_burst(trigger, out);
      rec = CountedSegment{s.length, s.line.a, s.line.b};
      break;
    case ProtocolId::Implicit:
      fail(Errc::BadParams, "internal error: implicit closes take the knot path");
  }
  units_.push_back(AttributionUnit{record_size_yunits(rec), trigger,
                                   method_base_ + s.start_index, s.length});
  out.push_back(EmittedRecord{std::move(rec), trigger});
}

void Pipeline::demote_front(std::size_t trigger, std::vector<EmittedRecord>& out) {
  const ShadowEntry entry = shadow_.front();
  shadow_.pop_front();
  switch (protocol_) {
    case ProtocolId::TwoStreams: {
      CompressionRecord rec = RawSingleton{entry.tuple.y};
      units_.push_back(
          AttributionUnit{record_size_yunits(rec), trigger, entry.index, 1});
      out.push_back(EmittedRecord{std::move(rec), trigger});
      return;
    }
    case ProtocolId::SingleStream: {
      CompressionRecord rec = CountedSingleton{entry.tuple.y};
      units_.push_back(
          AttributionUnit{record_size_yunits(rec), trigger, entry.index, 1});
      out.push_back(EmittedRecord{std::move(rec), trigger});
      return;
    }
    case ProtocolId::SingleStreamV: {
      if (burst_.empty()) {
        burst_first_index_ = entry.index;
      }
      burst_.push_back(entry.tuple.y);
      if (burst_.size() == 127) {
        flush_burst(trigger, out);
      }
      return;
    }
    case ProtocolId::Implicit:
      break;
  }
  fail(Errc::BadParams, "internal error: implicit never demotes");
}

void Pipeline::flush_burst(std::size_t trigger, std::vector<EmittedRecord>& out) {
  if (burst_.empty()) return;
  const std::size_t m = burst_.size();
  CompressionRecord rec = SingletonBurst{std::move(burst_)};
  burst_.clear();
  units_.push_back(
      AttributionUnit{record_size_yunits(rec), trigger, burst_first_index_, m});
  out.push_back(EmittedRecord{std::move(rec), trigger});
}

// --- Implicit encoding ---------------------------------------------------------
//
// The knot stream is emitted incrementally: the first segment's close fixes
// the opening joint knot; each break fixes the head of a disjoint knot at the
// break tuple's timestamp (the tail follows when the next segment's line is
// known); a cap leaves the head pending until the next tuple supplies the
// boundary timestamp; joint-boundary methods emit one joint knot per close;
// the end-of-stream flush appends the closing joint knot unless a knot
// already sits at the final timestamp.

void Pipeline::implicit_push(const InputTuple& p, std::vector<EmittedRecord>& out) {
  validate(p);
  if (!(p.t > 0.0)) {
    fail(Errc::NonPositiveTimestamp,
         "the implicit protocol requires strictly positive timestamps");
  }
  if (deferred_head_line_) {
    out.push_back(EmittedRecord{
        ImplicitDisjointHead{p.t, deferred_head_line_->eval(p.t)}, next_index_});
    pending_tail_t_ = p.t;
    last_wire_knot_t_ = p.t;
    deferred_head_line_.reset();
  }
  const std::size_t idx = next_index_++;
  shadow_.push_back(ShadowEntry{p, idx});
  if (std::optional<ClosedSegment> closed = method_->push(p)) {
    implicit_on_close(closed->summary, closed->kind, idx, &p, out);
    drop_covered(closed->summary);
  }
}

void Pipeline::implicit_on_close(const SegmentSummary& s, CloseKind kind,
                                 std::size_t trigger,
                                 const InputTuple* break_tuple,
                                 std::vector<EmittedRecord>& out) {
  // Complete the knot that starts this segment; its cost is carried by this
  // segment's tuples, which become reconstructable right now.
  double unit_size = 2.0;
  if (!first_knot_done_) {
    out.push_back(EmittedRecord{
        ImplicitJoint{s.start_t, s.line.eval(s.start_t)}, trigger});
    first_knot_done_ = true;
    last_wire_knot_t_ = s.start_t;
  } else if (pending_tail_t_) {
    out.push_back(EmittedRecord{
        ImplicitDisjointTail{s.line.eval(*pending_tail_t_)}, trigger});
    pending_tail_t_.reset();
    unit_size = 3.0;
  }
  units_.push_back(
      AttributionUnit{unit_size, trigger, method_base_ + s.start_index, s.length});

  if (kind == CloseKind::Finish) {
    return;  // the stream flush appends the closing knot
  }
  if (s.joined_to_previous) {
    // Joint-boundary method: the next segment starts where this one ends.
    const double tb = shadow_[s.length - 1].tuple.t;
    if (!last_wire_knot_t_ || *last_wire_knot_t_ != tb) {
      out.push_back(EmittedRecord{ImplicitJoint{tb, s.line.eval(tb)}, trigger});
      last_wire_knot_t_ = tb;
    }
  } else if (kind == CloseKind::Break) {
    // The break tuple opens the next segment; the boundary sits at its
    // timestamp.
    out.push_back(EmittedRecord{
        ImplicitDisjointHead{break_tuple->t, s.line.eval(break_tuple->t)},
        trigger});
    pending_tail_t_ = break_tuple->t;
    last_wire_knot_t_ = break_tuple->t;
  } else {
    // Cap: the boundary timestamp is the next tuple's, not known yet.
    deferred_head_line_ = s.line;
  }
}

void Pipeline::implicit_finish(std::size_t trigger,
                               std::vector<EmittedRecord>& out) {
  if (std::optional<ClosedSegment> closed = method_->finish()) {
    const SegmentSummary& s = closed->summary;
    const double t_last = shadow_[s.length - 1].tuple.t;
    implicit_on_close(s, CloseKind::Finish, trigger, nullptr, out);
    if (!last_wire_knot_t_ || *last_wire_knot_t_ != t_last) {
      out.push_back(
          EmittedRecord{ImplicitJoint{t_last, s.line.eval(t_last)}, trigger});
      last_wire_knot_t_ = t_last;
      units_.back().size_yunits += 2.0;
    }
    drop_covered(s);
  } else if (deferred_head_line_) {
    // The stream ended exactly on a cap close: no further segment follows, so
    // the pending boundary disappears and the capped line runs to the closing
    // joint knot at the final timestamp.
    const double t_last = last_t_;
    out.push_back(EmittedRecord{
        ImplicitJoint{t_last, deferred_head_line_->eval(t_last)}, trigger});
    last_wire_knot_t_ = t_last;
    if (!units_.empty()) {
      units_.back().size_yunits += 2.0;
    }
    deferred_head_line_.reset();
  }
}

// ---------------------------------------------------------------------------
// Batch encode / decode

EncodedStreams encode_stream(MethodId method, ProtocolId protocol,
                             ErrorThreshold eps,
                             std::span<const InputTuple> tuples,
                             std::size_t max_segment_length) {
  Pipeline pipeline(method, protocol, eps, max_segment_length);
  EncodedStreams enc;
  const auto sink = [&](std::vector<EmittedRecord>&& recs) {
    for (EmittedRecord& er : recs) {
      switch (protocol) {
        case ProtocolId::Implicit:
          append_record(enc.primary, er.record, StreamId::ImplicitKnots);
          break;
        case ProtocolId::TwoStreams:
          if (std::holds_alternative<QuadSegment>(er.record)) {
            append_record(enc.primary, er.record, StreamId::TwoStreamsSegments);
          } else {
            append_record(enc.secondary, er.record,
                          StreamId::TwoStreamsSingletons);
          }
          break;
        case ProtocolId::SingleStream:
          append_record(enc.primary, er.record, StreamId::SingleStream);
          break;
        case ProtocolId::SingleStreamV:
          append_record(enc.primary, er.record, StreamId::SingleStreamV);
          break;
      }
      enc.records.push_back(std::move(er));
    }
  };
  for (const InputTuple& p : tuples) {
    sink(pipeline.push(p));
  }
  sink(pipeline.finish());
  enc.units = pipeline.units();
  return enc;
}

std::vector<ReconstructedTuple> decode_implicit(
    std::span<const double> timestamps,
    std::span<const std::uint8_t> knot_bytes) {
  const std::vector<Knot> knots = parse_implicit_knots(knot_bytes);
  return reconstruct(timestamps, knots);
}

std::vector<ReconstructedTuple> decode_two_streams(
    std::span<const double> timestamps,
    std::span<const std::uint8_t> segment_bytes,
    std::span<const std::uint8_t> singleton_bytes) {
  const std::vector<QuadSegment> segments = parse_quad_segments(segment_bytes);
  const std::vector<double> singletons = parse_raw_singletons(singleton_bytes);
  std::vector<ReconstructedTuple> out;
  out.reserve(timestamps.size());
  std::size_t si = 0;
  std::size_t vi = 0;
  std::size_t i = 0;
  while (i < timestamps.size()) {
    // A timestamp strictly before the next segment's start is served by the
    // singletons stream; otherwise the segment consumes the next n timestamps.
    if (si < segments.size() && !(timestamps[i] < segments[si].t0)) {
      const QuadSegment& q = segments[si++];
      if (i + q.n > timestamps.size()) {
        fail(Errc::CorruptStream,
             "segment record spans more timestamps than remain");
      }
      for (std::size_t k = 0; k < q.n; ++k, ++i) {
        out.push_back(ReconstructedTuple{timestamps[i],
                                         q.a * timestamps[i] + q.b});
      }
    } else {
      if (vi >= singletons.size()) {
        fail(Errc::TruncatedStream,
             "singletons stream ended before all timestamps were served");
      }
      out.push_back(ReconstructedTuple{timestamps[i], singletons[vi++]});
      ++i;
    }
  }
  if (si < segments.size() || vi < singletons.size()) {
    fail(Errc::CorruptStream, "records extend past the timestamp stream");
  }
  return out;
}

std::vector<ReconstructedTuple> decode_single_stream(
    std::span<const double> timestamps, std::span<const std::uint8_t> bytes) {
  std::vector<ReconstructedTuple> out;
  out.reserve(timestamps.size());
  std::size_t pos = 0;
  std::size_t i = 0;
  while (pos < bytes.size()) {
    const std::uint8_t counter = get_u8(bytes, pos);
    if (counter == 0x00) {
      const double y = get_f64(bytes, pos);
      if (i >= timestamps.size()) {
        fail(Errc::CorruptStream, "records extend past the timestamp stream");
      }
      out.push_back(ReconstructedTuple{timestamps[i], y});
      ++i;
    } else if (counter == 0x01) {
      fail(Errc::CorruptStream,
           "counter byte 0x01 (two-tuple segment) is not a legal record");
    } else {
      const std::size_t n = static_cast<std::size_t>(counter) + 1;
      const double a = get_f64(bytes, pos);
      const double b = get_f64(bytes, pos);
      if (i + n > timestamps.size()) {
        fail(Errc::CorruptStream,
             "segment record spans more timestamps than remain");
      }
      for (std::size_t k = 0; k < n; ++k, ++i) {
        out.push_back(ReconstructedTuple{timestamps[i],
                                         a * timestamps[i] + b});
      }
    }
  }
  if (i != timestamps.size()) {
    fail(Errc::TruncatedStream,
         "record stream ended before all timestamps were served");
  }
  return out;
}

std::vector<ReconstructedTuple> decode_single_stream_v(
    std::span<const double> timestamps, std::span<const std::uint8_t> bytes) {
  std::vector<ReconstructedTuple> out;
  out.reserve(timestamps.size());
  std::size_t pos = 0;
  std::size_t i = 0;
  while (pos < bytes.size()) {
    const int counter = static_cast<std::int8_t>(get_u8(bytes, pos));
    if (counter >= 3) {
      const std::size_t n = static_cast<std::size_t>(counter);
      const double a = get_f64(bytes, pos);
      const double b = get_f64(bytes, pos);
      if (i + n > timestamps.size()) {
        fail(Errc::CorruptStream,
             "segment record spans more timestamps than remain");
      }
      for (std::size_t k = 0; k < n; ++k, ++i) {
        out.push_back(ReconstructedTuple{timestamps[i],
                                         a * timestamps[i] + b});
      }
    } else if (counter <= -1 && counter >= -127) {
      const std::size_t m = static_cast<std::size_t>(-counter);
      for (std::size_t k = 0; k < m; ++k, ++i) {
        const double y = get_f64(bytes, pos);
        if (i >= timestamps.size()) {
          fail(Errc::CorruptStream, "records extend past the timestamp stream");
        }
        out.push_back(ReconstructedTuple{timestamps[i], y});
      }
    } else {
      fail(Errc::CorruptStream,
           "counter byte outside the legal variable single-stream set");
    }
  }
  if (i != timestamps.size()) {
    fail(Errc::TruncatedStream,
         "record stream ended before all timestamps were served");
  }
  return out;
}

std::vector<ReconstructedTuple> decode_stream(
    ProtocolId protocol, std::span<const double> timestamps,
    std::span<const std::uint8_t> primary,
    std::span<const std::uint8_t> secondary) {
  switch (protocol) {
    case ProtocolId::Implicit:
      return decode_implicit(timestamps, primary);
    case ProtocolId::TwoStreams:
      return decode_two_streams(timestamps, primary, secondary);
    case ProtocolId::SingleStream:
      return decode_single_stream(timestamps, primary);
    case ProtocolId::SingleStreamV:
      return decode_single_stream_v(timestamps, primary);
  }
  fail(Errc::BadParams, "unknown protocol id");
}

}  // namespace pla
