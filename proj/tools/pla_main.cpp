#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pla/generate.hpp"
#include "pla/io.hpp"
#include "pla/metrics.hpp"
#include "pla/protocols.hpp"

namespace {

using namespace pla;

// Exit codes: 0 success, 1 usage/configuration, 2 data, 3 round-trip
// violation (evaluate only).
int exit_code_for(const PlaError& e) {
  switch (e.code()) {
    case Errc::BadParams:
    case Errc::IllegalPairing:
      return 1;
    default:
      return 2;
  }
}

StreamId primary_stream_id(ProtocolId protocol) {
  switch (protocol) {
    case ProtocolId::Implicit:
      return StreamId::ImplicitKnots;
    case ProtocolId::TwoStreams:
      return StreamId::TwoStreamsSegments;
    case ProtocolId::SingleStream:
      return StreamId::SingleStream;
    case ProtocolId::SingleStreamV:
      return StreamId::SingleStreamV;
  }
  return StreamId::ImplicitKnots;
}

ProtocolId protocol_of_stream(StreamId stream) {
  switch (stream) {
    case StreamId::ImplicitKnots:
      return ProtocolId::Implicit;
    case StreamId::TwoStreamsSegments:
    case StreamId::TwoStreamsSingletons:
      return ProtocolId::TwoStreams;
    case StreamId::SingleStream:
      return ProtocolId::SingleStream;
    case StreamId::SingleStreamV:
      return ProtocolId::SingleStreamV;
  }
  return ProtocolId::Implicit;
}

MethodId parse_method(const std::string& name) {
  const auto id = method_from_name(name);
  if (!id) fail(Errc::BadParams, "unknown method: " + name);
  return *id;
}

ProtocolId parse_protocol(const std::string& name) {
  const auto id = protocol_from_name(name);
  if (!id) fail(Errc::BadParams, "unknown protocol: " + name);
  return *id;
}

void shift_timestamps(std::vector<InputTuple>& tuples, double offset) {
  if (offset == 0.0) return;
  for (InputTuple& p : tuples) p.t += offset;
}

// Options shared by the commands that read a stream of input tuples.
struct InputOptions {
  std::string input_path;
  std::string generate_spec;
  std::uint64_t seed = 42;
  double t_offset = 0.0;
  std::size_t t_col = 0;
  std::vector<std::size_t> y_cols;
};

void add_input_flags(CLI::App* cmd, InputOptions& opt, double default_offset) {
  auto* input = cmd->add_option("--input", opt.input_path,
                                "headerless numeric CSV to compress");
  auto* gen = cmd->add_option(
      "--generate", opt.generate_spec,
      "synthetic stream kind:N[:params] (constant:N:VALUE, ramp:N:START:SLOPE, "
      "alternating:N:AMPLITUDE, random_walk:N:STEP)");
  input->excludes(gen);
  gen->excludes(input);
  cmd->add_option("--seed", opt.seed, "seed for random_walk")
      ->default_val(std::uint64_t{42});
  opt.t_offset = default_offset;
  cmd->add_option("--t-offset", opt.t_offset,
                  "added to every timestamp after loading (the implicit "
                  "protocol needs t > 0)")
      ->default_val(default_offset);
  cmd->add_option("--t-col", opt.t_col, "timestamp column (0-based)")
      ->default_val(std::size_t{0});
  cmd->add_option("--y-col", opt.y_cols,
                  "value column(s); repeat for per-channel compression")
      ->default_val(std::vector<std::size_t>{1});
}

std::vector<std::vector<InputTuple>> load_channels(const InputOptions& opt) {
  std::vector<std::vector<InputTuple>> channels;
  if (!opt.input_path.empty()) {
    channels = ingest_csv_multi_file(opt.input_path, opt.t_col, opt.y_cols);
  } else if (!opt.generate_spec.empty()) {
    channels.push_back(generate_from_spec(opt.generate_spec, opt.seed));
  } else {
    fail(Errc::BadParams, "either --input or --generate is required");
  }
  for (auto& channel : channels) shift_timestamps(channel, opt.t_offset);
  return channels;
}

// --- compress -----------------------------------------------------------------

struct CompressOptions {
  std::string method;
  std::string protocol;
  double epsilon = 0.0;
  std::size_t max_seg = 0;
  InputOptions in;
  std::vector<std::string> outputs;
};

int run_compress(const CompressOptions& opt) {
  const MethodId method = parse_method(opt.method);
  const ProtocolId protocol = parse_protocol(opt.protocol);
  const ErrorThreshold eps(opt.epsilon);
  const std::vector<std::vector<InputTuple>> channels = load_channels(opt.in);

  const std::size_t files_per_channel =
      (protocol == ProtocolId::TwoStreams) ? 2 : 1;
  const std::size_t expected = channels.size() * files_per_channel;
  if (opt.outputs.size() != expected) {
    fail(Errc::BadParams,
         "expected " + std::to_string(expected) + " output path(s) (" +
             std::to_string(files_per_channel) + " per channel), got " +
             std::to_string(opt.outputs.size()));
  }

  for (std::size_t c = 0; c < channels.size(); ++c) {
    const EncodedStreams enc =
        encode_stream(method, protocol, eps, channels[c], opt.max_seg);
    const StreamHeader base{primary_stream_id(protocol),
                            static_cast<std::uint8_t>(method), eps.value()};
    if (protocol == ProtocolId::TwoStreams) {
      write_stream_file(opt.outputs[2 * c], base, enc.primary);
      StreamHeader singletons = base;
      singletons.stream = StreamId::TwoStreamsSingletons;
      write_stream_file(opt.outputs[2 * c + 1], singletons, enc.secondary);
    } else {
      write_stream_file(opt.outputs[c], base, enc.primary);
    }
    const std::size_t n = channels[c].size();
    std::cout << "channel " << c << ": " << n << " tuples -> "
              << enc.records.size() << " records, " << enc.total_record_bytes()
              << " record bytes (input payload " << 8 * n << " bytes)\n";
  }
  return 0;
}

// --- decompress ----------------------------------------------------------------

struct DecompressOptions {
  std::string protocol;  // optional; derived from headers when empty
  std::string timestamps_path;
  std::size_t t_col = 0;
  std::vector<std::string> inputs;
  std::string output;
};

int run_decompress(const DecompressOptions& opt) {
  const std::vector<double> timestamps =
      ingest_timestamp_column_file(opt.timestamps_path, opt.t_col);

  std::vector<LoadedStream> loaded;
  loaded.reserve(opt.inputs.size());
  for (const std::string& path : opt.inputs) {
    loaded.push_back(read_stream_file(path));
  }
  if (loaded.empty()) fail(Errc::BadParams, "at least one --input is required");

  const ProtocolId derived = protocol_of_stream(loaded.front().header.stream);
  if (!opt.protocol.empty() && parse_protocol(opt.protocol) != derived) {
    fail(Errc::CorruptStream,
         "stream file header disagrees with the requested protocol");
  }

  std::span<const std::uint8_t> primary;
  std::span<const std::uint8_t> secondary;
  if (derived == ProtocolId::TwoStreams) {
    if (loaded.size() != 2) {
      fail(Errc::BadParams,
           "the two-streams protocol needs both the segments and singletons files");
    }
    const LoadedStream* segments = nullptr;
    const LoadedStream* singletons = nullptr;
    for (const LoadedStream& ls : loaded) {
      if (ls.header.stream == StreamId::TwoStreamsSegments) segments = &ls;
      if (ls.header.stream == StreamId::TwoStreamsSingletons) singletons = &ls;
    }
    if (segments == nullptr || singletons == nullptr) {
      fail(Errc::CorruptStream,
           "expected one segments file and one singletons file");
    }
    if (segments->header.method != singletons->header.method ||
        segments->header.epsilon != singletons->header.epsilon) {
      fail(Errc::CorruptStream, "the two stream files disagree in their headers");
    }
    primary = segments->bytes;
    secondary = singletons->bytes;
  } else {
    if (loaded.size() != 1) {
      fail(Errc::BadParams, "this protocol takes exactly one --input file");
    }
    primary = loaded.front().bytes;
  }

  const std::vector<ReconstructedTuple> tuples =
      decode_stream(derived, timestamps, primary, secondary);

  if (opt.output == "-") {
    write_tuples_csv(std::cout, tuples);
  } else {
    std::ofstream out(opt.output);
    if (!out) fail(Errc::ParseError, "cannot open output file: " + opt.output);
    write_tuples_csv(out, tuples);
  }
  return 0;
}

// --- evaluate ------------------------------------------------------------------

struct EvaluateOptions {
  double epsilon = 0.0;
  std::size_t max_seg = 0;
  InputOptions in;
  std::string output;
};

struct MatrixRow {
  const char* key;
  MethodId method;
  ProtocolId protocol;
};

int run_evaluate(const EvaluateOptions& opt) {
  const ErrorThreshold eps(opt.epsilon);
  const std::vector<std::vector<InputTuple>> channels = load_channels(opt.in);
  const std::vector<InputTuple>& tuples = channels.front();
  if (tuples.empty()) fail(Errc::EmptyInput, "the input stream is empty");

  std::vector<double> timestamps;
  timestamps.reserve(tuples.size());
  for (const InputTuple& p : tuples) timestamps.push_back(p.t);

  static constexpr MatrixRow kRows[] = {
      {"A1", MethodId::Angle, ProtocolId::TwoStreams},
      {"A2", MethodId::Angle, ProtocolId::SingleStream},
      {"A3", MethodId::Angle, ProtocolId::SingleStreamV},
      {"C1", MethodId::Disjoint, ProtocolId::TwoStreams},
      {"C2", MethodId::Disjoint, ProtocolId::SingleStream},
      {"C3", MethodId::Disjoint, ProtocolId::SingleStreamV},
      {"L1", MethodId::Linear, ProtocolId::TwoStreams},
      {"L2", MethodId::Linear, ProtocolId::SingleStream},
      {"L3", MethodId::Linear, ProtocolId::SingleStreamV},
      {"Sw", MethodId::Swing, ProtocolId::Implicit},
      {"Sl", MethodId::Disjoint, ProtocolId::Implicit},
  };
  std::cerr << "note: the optimal-continuous (C) and mixed (M) table rows are "
               "out of scope in this build\n";

  std::vector<StatsRow> report;
  bool violated = false;
  for (const MatrixRow& row : kRows) {
    const EncodedStreams enc =
        encode_stream(row.method, row.protocol, eps, tuples, opt.max_seg);
    const std::vector<ReconstructedTuple> decoded =
        decode_stream(row.protocol, timestamps, enc.primary, enc.secondary);
    const std::vector<PerPointStats> stats =
        attribute(enc.units, tuples, decoded);

    std::vector<double> ratio, latency, error;
    ratio.reserve(stats.size());
    latency.reserve(stats.size());
    error.reserve(stats.size());
    bool row_violated = false;
    for (const PerPointStats& s : stats) {
      ratio.push_back(s.ratio);
      latency.push_back(s.latency);
      error.push_back(s.error);
      if (!(s.error < eps.value())) {
        row_violated = true;
      }
    }
    if (row_violated) {
      violated = true;
      std::cerr << "round-trip violation: row " << row.key
                << " reconstructed a value at error >= epsilon\n";
    }
    const auto add = [&](const char* metric, const Aggregate& agg) {
      report.push_back(StatsRow{row.key, std::string(method_name(row.method)),
                                std::string(protocol_name(row.protocol)),
                                eps.value(), metric, agg});
    };
    add("ratio", aggregate(ratio));
    add("latency", aggregate(latency));
    add("error", aggregate(error));
  }

  if (opt.output.empty() || opt.output == "-") {
    write_stats_csv(std::cout, report);
  } else {
    std::ofstream out(opt.output);
    if (!out) fail(Errc::ParseError, "cannot open output file: " + opt.output);
    write_stats_csv(out, report);
  }
  return violated ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming piecewise-linear compression toolkit"};
  app.require_subcommand(1);

  CompressOptions copt;
  auto* compress = app.add_subcommand(
      "compress", "compress a tuple stream into record files");
  compress->add_option("--method", copt.method, "swing|angle|disjoint|linear")
      ->required();
  compress
      ->add_option("--protocol", copt.protocol,
                   "implicit|two-streams|single-stream|single-stream-v")
      ->required();
  compress->add_option("--epsilon", copt.epsilon, "maximum absolute error (> 0)")
      ->required();
  compress->add_option("--max-seg", copt.max_seg,
                       "segment length cap (0 = protocol default)")
      ->default_val(std::size_t{0});
  add_input_flags(compress, copt.in, 0.0);
  compress
      ->add_option("--output", copt.outputs,
                   "output stream file(s); two-streams takes two per channel "
                   "(segments, then singletons)")
      ->required();

  DecompressOptions dopt;
  auto* decompress = app.add_subcommand(
      "decompress", "reconstruct tuples from record files and timestamps");
  decompress->add_option("--protocol", dopt.protocol,
                         "expected protocol (default: from file header)");
  decompress
      ->add_option("--timestamps", dopt.timestamps_path,
                   "CSV with the reconstruction timestamps")
      ->required();
  decompress->add_option("--t-col", dopt.t_col, "timestamp column (0-based)")
      ->default_val(std::size_t{0});
  decompress->add_option("--input", dopt.inputs, "stream file(s) to decode")
      ->required();
  decompress
      ->add_option("--output", dopt.output, "output CSV path ('-' for stdout)")
      ->required();

  EvaluateOptions eopt;
  auto* evaluate = app.add_subcommand(
      "evaluate",
      "run every supported method/protocol pairing and report per-point "
      "metrics");
  evaluate->add_option("--epsilon", eopt.epsilon, "maximum absolute error (> 0)")
      ->required();
  evaluate->add_option("--max-seg", eopt.max_seg,
                       "segment length cap (0 = protocol default)")
      ->default_val(std::size_t{0});
  add_input_flags(evaluate, eopt.in, 1.0);
  evaluate->add_option("--output", eopt.output,
                       "stats CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (compress->parsed()) return run_compress(copt);
    if (decompress->parsed()) return run_decompress(dopt);
    if (evaluate->parsed()) return run_evaluate(eopt);
  } catch (const PlaError& e) {
    std::cerr << "error: " << e.what() << " [" << errc_name(e.code()) << "]\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
