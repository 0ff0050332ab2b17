#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pla/knots.hpp"
#include "pla/methods.hpp"
#include "pla/records.hpp"

namespace pla {

enum class ProtocolId : std::uint8_t {
  Implicit = 0,
  TwoStreams = 1,
  SingleStream = 2,
  SingleStreamV = 3,
};

std::string_view protocol_name(ProtocolId id);
std::optional<ProtocolId> protocol_from_name(std::string_view name);

// Non-implicit protocols carry no per-segment start value, so they can only
// pair with methods whose segments stand alone; Swing's joined segments need
// the implicit knot stream.
bool pairing_legal(MethodId method, ProtocolId protocol);

// Shortest segment each protocol can express as a segment record (shorter
// closures are demoted to singletons), and the largest representable length
// (also the default method cap). Implicit has no minimum and no cap (0).
std::size_t protocol_min_segment_length(ProtocolId id);
std::size_t protocol_max_segment_length(ProtocolId id);

// One emitted record plus the ordinal of the input tuple whose processing
// produced it. Ordinals count pushed tuples from 0; a record emitted by the
// end-of-stream flush carries n, one past the last input index.
struct EmittedRecord {
  CompressionRecord record;
  std::size_t emitted_at;
};

// Wire-cost attribution for metrics: `size_yunits` of output covers the
// `count` input tuples starting at `first_index`; the covered tuples become
// reconstructable at `emitted_at`. Units partition the input index range.
struct AttributionUnit {
  double size_yunits = 0.0;
  std::size_t emitted_at = 0;
  std::size_t first_index = 0;
  std::size_t count = 0;
};

// Streaming encoder: feeds tuples through a compression method and turns the
// closed segments into protocol records, applying the protocol's
// minimum-length policy (demoting short segments tuple-by-tuple and replaying
// the rest), singleton bursts (variable single-stream), and the implicit
// protocol's incremental knot emission.
class Pipeline {
 public:
  // max_segment_length 0 picks the protocol default. Throws IllegalPairing
  // for an unsupported method/protocol pair and BadParams for a cap the
  // protocol cannot represent.
  Pipeline(MethodId method, ProtocolId protocol, ErrorThreshold eps,
           std::size_t max_segment_length = 0);

  // Feeds one tuple; returns the records this push emitted, in order.
  std::vector<EmittedRecord> push(const InputTuple& p);

  // Flushes everything pending and ends the stream.
  std::vector<EmittedRecord> finish();

  MethodId method() const noexcept { return method_id_; }
  ProtocolId protocol() const noexcept { return protocol_; }
  std::size_t tuples_pushed() const noexcept { return next_index_; }

  // Attribution units recorded so far; complete once finish() returned.
  const std::vector<AttributionUnit>& units() const noexcept { return units_; }

 private:
  struct ShadowEntry {
    InputTuple tuple;
    std::size_t index;
  };

  void validate(const InputTuple& p);
  void drop_covered(const SegmentSummary& s);
  void generic_push(const InputTuple& p, std::vector<EmittedRecord>& out);
  void emit_segment(const SegmentSummary& s, std::size_t trigger,
                    std::vector<EmittedRecord>& out);
  void demote_front(std::size_t trigger, std::vector<EmittedRecord>& out);
  void flush_burst(std::size_t trigger, std::vector<EmittedRecord>& out);
  void implicit_push(const InputTuple& p, std::vector<EmittedRecord>& out);
  void implicit_on_close(const SegmentSummary& s, CloseKind kind,
                         std::size_t trigger, const InputTuple* break_tuple,
                         std::vector<EmittedRecord>& out);
  void implicit_finish(std::size_t trigger, std::vector<EmittedRecord>& out);

  MethodId method_id_;
  ProtocolId protocol_;
  ErrorThreshold eps_;
  std::size_t cap_;
  std::size_t min_len_;
  std::unique_ptr<PlaMethod> method_;

  std::size_t next_index_ = 0;
  // Methods rebuilt after a demotion count their pushes from zero, so their
  // summaries' start indices are offset by the stream position of the first
  // tuple replayed into them.
  std::size_t method_base_ = 0;
  bool have_last_t_ = false;
  double last_t_ = 0.0;
  std::deque<ShadowEntry> shadow_;
  std::vector<AttributionUnit> units_;

  // Variable single-stream pending singleton burst.
  std::vector<double> burst_;
  std::size_t burst_first_index_ = 0;

  // Implicit knot emission state.
  bool first_knot_done_ = false;
  std::optional<double> pending_tail_t_;
  std::optional<LineCoefficients> deferred_head_line_;
  std::optional<double> last_wire_knot_t_;
};

// --- Batch conveniences -------------------------------------------------------

struct EncodedStreams {
  // Serialized record bytes, without file headers. Implicit and the two
  // single-stream protocols fill `primary` only; TwoStreams fills `primary`
  // with the segments stream and `secondary` with the singletons stream.
  std::vector<std::uint8_t> primary;
  std::vector<std::uint8_t> secondary;
  std::vector<EmittedRecord> records;
  std::vector<AttributionUnit> units;

  std::size_t total_record_bytes() const noexcept {
    return primary.size() + secondary.size();
  }
};

EncodedStreams encode_stream(MethodId method, ProtocolId protocol,
                             ErrorThreshold eps,
                             std::span<const InputTuple> tuples,
                             std::size_t max_segment_length = 0);

// Decoders pair a timestamp stream with headerless record bytes and emit one
// tuple per timestamp. They throw CorruptStream on illegal counters or
// record/timestamp mismatches, TruncatedStream when bytes run out mid-record
// or before all timestamps are served.
std::vector<ReconstructedTuple> decode_implicit(
    std::span<const double> timestamps, std::span<const std::uint8_t> knot_bytes);
std::vector<ReconstructedTuple> decode_two_streams(
    std::span<const double> timestamps, std::span<const std::uint8_t> segment_bytes,
    std::span<const std::uint8_t> singleton_bytes);
std::vector<ReconstructedTuple> decode_single_stream(
    std::span<const double> timestamps, std::span<const std::uint8_t> bytes);
std::vector<ReconstructedTuple> decode_single_stream_v(
    std::span<const double> timestamps, std::span<const std::uint8_t> bytes);

// Dispatch on protocol; `secondary` is the TwoStreams singletons stream and
// ignored otherwise.
std::vector<ReconstructedTuple> decode_stream(
    ProtocolId protocol, std::span<const double> timestamps,
    std::span<const std::uint8_t> primary,
    std::span<const std::uint8_t> secondary = {});

}  // namespace pla
