#include "pla/generate.hpp"

#include <charconv>
#include <random>
#include <string>

#include "pla/error.hpp"

namespace pla {

std::vector<InputTuple> generate_constant(std::size_t n, double value) {
  std::vector<InputTuple> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(InputTuple{static_cast<double>(i), value});
  }
  return out;
}

std::vector<InputTuple> generate_ramp(std::size_t n, double start, double slope) {
  std::vector<InputTuple> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    out.push_back(InputTuple{t, start + slope * t});
  }
  return out;
}

std::vector<InputTuple> generate_alternating(std::size_t n, double amplitude) {
  std::vector<InputTuple> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(InputTuple{static_cast<double>(i),
                             (i % 2 == 0) ? 0.0 : amplitude});
  }
  return out;
}

std::vector<InputTuple> generate_random_walk(std::size_t n, double step,
                                             std::uint64_t seed) {
  std::vector<InputTuple> out;
  out.reserve(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) y += step * gauss(rng);
    out.push_back(InputTuple{static_cast<double>(i), y});
  }
  return out;
}

namespace {

std::vector<std::string> split_colon(std::string_view spec) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t sep = spec.find(':', start);
    if (sep == std::string_view::npos) {
      parts.emplace_back(spec.substr(start));
      return parts;
    }
    parts.emplace_back(spec.substr(start, sep - start));
    start = sep + 1;
  }
}

double parse_double_field(const std::string& field) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    fail(Errc::BadParams, "malformed number in generator spec: '" + field + "'");
  }
  return value;
}

std::size_t parse_count_field(const std::string& field) {
  std::size_t value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    fail(Errc::BadParams, "malformed count in generator spec: '" + field + "'");
  }
  return value;
}

}  // namespace

std::vector<InputTuple> generate_from_spec(std::string_view spec,
                                           std::uint64_t seed) {
  const std::vector<std::string> parts = split_colon(spec);
  if (parts.size() < 2) {
    fail(Errc::BadParams, "generator spec needs at least kind:count");
  }
  const std::string& kind = parts[0];
  const std::size_t n = parse_count_field(parts[1]);
  const std::size_t params = parts.size() - 2;

  if (kind == "constant") {
    if (params != 1) fail(Errc::BadParams, "constant takes exactly one value");
    return generate_constant(n, parse_double_field(parts[2]));
  }
  if (kind == "ramp") {
    if (params != 2) fail(Errc::BadParams, "ramp takes start and slope");
    return generate_ramp(n, parse_double_field(parts[2]),
                         parse_double_field(parts[3]));
  }
  if (kind == "alternating") {
    if (params != 1) fail(Errc::BadParams, "alternating takes an amplitude");
    return generate_alternating(n, parse_double_field(parts[2]));
  }
  if (kind == "random_walk") {
    if (params != 1) fail(Errc::BadParams, "random_walk takes a step size");
    return generate_random_walk(n, parse_double_field(parts[2]), seed);
  }
  fail(Errc::BadParams, "unknown generator kind: '" + kind + "'");
}

}  // namespace pla
