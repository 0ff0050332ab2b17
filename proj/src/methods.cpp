#include "pla/methods.hpp"

#include <cmath>
#include <utility>

#include "pla/error.hpp"

namespace pla {

namespace {

LineCoefficients flat_line(double y) { return LineCoefficients{0.0, y}; }

}  // namespace

std::string_view method_name(MethodId id) noexcept {
  switch (id) {
    case MethodId::Swing:
      return "swing";
    case MethodId::Angle:
      return "angle";
    case MethodId::Disjoint:
      return "disjoint";
    case MethodId::Linear:
      return "linear";
  }
  return "unknown";
}

std::optional<MethodId> method_from_name(std::string_view name) noexcept {
  for (MethodId id : {MethodId::Swing, MethodId::Angle, MethodId::Disjoint, MethodId::Linear}) {
    if (name == method_name(id)) {
      return id;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// PlaMethod base

PlaMethod::PlaMethod(ErrorThreshold eps, std::size_t max_segment_length)
    : eps_(eps), cap_(max_segment_length) {
  if (cap_ == 1) {
    fail(Errc::BadParams, "maximum segment length must be 0 (uncapped) or at least 2");
  }
}

void PlaMethod::on_close(const LineCoefficients&, double) {}

bool PlaMethod::joins_previous() const noexcept { return false; }

void PlaMethod::validate_input(const InputTuple& p) const {
  if (!std::isfinite(p.t) || !std::isfinite(p.y)) {
    fail(Errc::NonFiniteValue, "tuples must have finite timestamp and value");
  }
  if (have_last_t_) {
    if (p.t == last_t_) {
      fail(Errc::EqualTimestamps, "tuples must not repeat a timestamp");
    }
    if (p.t < last_t_) {
      fail(Errc::NonMonotonicTime, "tuples must arrive in increasing time order");
    }
  }
}

SegmentSummary PlaMethod::make_summary() const {
  return SegmentSummary{seg_start_index_, buffer_.front().t, buffer_.size(), current_line(),
                        joins_previous()};
}

void PlaMethod::close_current(CloseKind kind, std::optional<ClosedSegment>& out) {
  SegmentSummary s = make_summary();
  on_close(s.line, buffer_.back().t);
  buffer_.clear();
  reset_segment_state();
  out = ClosedSegment{s, kind};
}

std::optional<ClosedSegment> PlaMethod::push(const InputTuple& p) {
  validate_input(p);
  std::optional<ClosedSegment> out;

  if (!buffer_.empty() && !accept(p)) {
    close_current(CloseKind::Break, out);
  }
  if (buffer_.empty()) {
    seg_start_index_ = next_index_;
    if (!accept(p)) {
      fail(Errc::BadParams, "a segment must always admit its first tuple");
    }
  }
  buffer_.push_back(p);

  if (cap_ > 0 && buffer_.size() == cap_) {
    close_current(CloseKind::Cap, out);
  }

  have_last_t_ = true;
  last_t_ = p.t;
  ++next_index_;
  return out;
}

std::optional<ClosedSegment> PlaMethod::finish() {
  std::optional<ClosedSegment> out;
  if (!buffer_.empty()) {
    close_current(CloseKind::Finish, out);
  }
  next_index_ = 0;
  seg_start_index_ = 0;
  have_last_t_ = false;
  last_t_ = 0.0;
  reset_stream_state();
  return out;
}

// ---------------------------------------------------------------------------
// Swing: consecutive segments share their boundary point. The first segment's
// line passes through the very first tuple; each later segment's line passes
// through the previous segment's endpoint.

class SwingMethod final : public PlaMethod {
 public:
  using PlaMethod::PlaMethod;
  MethodId id() const noexcept override { return MethodId::Swing; }

 protected:
  bool accept(const InputTuple& p) override {
    if (buffer().empty()) {
      if (apex_) {
        cone_.emplace(*apex_, p, epsilon());
      }
      return true;
    }
    if (!cone_) {
      cone_.emplace(Point{buffer().front().t, buffer().front().y}, p, epsilon());
      return true;
    }
    return cone_->update(p);
  }

  LineCoefficients current_line() const override {
    if (cone_) {
      return cone_->bisector();
    }
    return flat_line(buffer().front().y);
  }

  void on_close(const LineCoefficients& line, double last_t) override {
    apex_ = Point{last_t, line.eval(last_t)};
  }

  // Every Swing segment starts at the previous segment's endpoint (the apex),
  // so summaries are always marked as joined; the flag is meaningless for the
  // first segment of a stream and ignored there by downstream consumers.
  bool joins_previous() const noexcept override { return true; }

  void reset_segment_state() override { cone_.reset(); }

  void reset_stream_state() override {
    apex_.reset();
    cone_.reset();
  }

 private:
  std::optional<Point> apex_;
  std::optional<SlopeCone> cone_;
};

// ---------------------------------------------------------------------------
// Angle: each segment pivots on the apex derived from its first two tuples;
// segments are independent of each other.

class AngleMethod final : public PlaMethod {
 public:
  using PlaMethod::PlaMethod;
  MethodId id() const noexcept override { return MethodId::Angle; }

 protected:
  bool accept(const InputTuple& p) override {
    if (buffer().empty()) {
      return true;
    }
    if (!cone_) {
      const Point apex = angle_origin(buffer().front(), p, epsilon());
      cone_.emplace(apex, p, epsilon());
      return true;
    }
    return cone_->update(p);
  }

  LineCoefficients current_line() const override {
    if (cone_) {
      return cone_->bisector();
    }
    return flat_line(buffer().front().y);
  }

  void reset_segment_state() override { cone_.reset(); }
  void reset_stream_state() override { cone_.reset(); }

 private:
  std::optional<SlopeCone> cone_;
};

// ---------------------------------------------------------------------------
// Disjoint: keeps the full set of lines compatible with the open segment via
// the envelope structure; extends while any line remains.

class DisjointMethod final : public PlaMethod {
 public:
  using PlaMethod::PlaMethod;
  MethodId id() const noexcept override { return MethodId::Disjoint; }

 protected:
  bool accept(const InputTuple& p) override {
    return hulls_.insert(ErrorSegment::around(p, epsilon())) == PartialHulls::Insert::Extended;
  }

  LineCoefficients current_line() const override {
    if (hulls_.size() >= 2) {
      const LineCoefficients mn = hulls_.min_line();
      const LineCoefficients mx = hulls_.max_line();
      return LineCoefficients{(mn.a + mx.a) / 2.0, (mn.b + mx.b) / 2.0};
    }
    return flat_line(buffer().front().y);
  }

  void reset_segment_state() override { hulls_.clear(); }
  void reset_stream_state() override { hulls_.clear(); }

 private:
  PartialHulls hulls_;
};

// ---------------------------------------------------------------------------
// Linear: tracks the least-squares line of the open segment and closes just
// before it would leave any covered tuple's tolerance band.

class LinearMethod final : public PlaMethod {
 public:
  using PlaMethod::PlaMethod;
  MethodId id() const noexcept override { return MethodId::Linear; }

 protected:
  bool accept(const InputTuple& p) override {
    if (hulls_.insert(ErrorSegment::around(p, epsilon())) == PartialHulls::Insert::Breakup) {
      return false;
    }
    acc_.push(p);
    if (acc_.count() == 1) {
      last_valid_ = flat_line(p.y);
      return true;
    }
    LineCoefficients cand{};
    try {
      cand = acc_.line();
    } catch (const PlaError&) {
      // Timestamp spread lost to rounding: treat as not extendable. The
      // caller resets this segment's state on close, so no rollback needed.
      return false;
    }
    if (!hulls_.line_valid(cand)) {
      return false;
    }
    last_valid_ = cand;
    return true;
  }

  LineCoefficients current_line() const override { return *last_valid_; }

  void reset_segment_state() override {
    hulls_.clear();
    acc_.clear();
    last_valid_.reset();
  }

  void reset_stream_state() override { reset_segment_state(); }

 private:
  PartialHulls hulls_;
  RegressionAccumulator acc_;
  std::optional<LineCoefficients> last_valid_;
};

// ---------------------------------------------------------------------------

std::unique_ptr<PlaMethod> make_method(MethodId id, ErrorThreshold eps,
                                       std::size_t max_segment_length) {
  switch (id) {
    case MethodId::Swing:
      return std::make_unique<SwingMethod>(eps, max_segment_length);
    case MethodId::Angle:
      return std::make_unique<AngleMethod>(eps, max_segment_length);
    case MethodId::Disjoint:
      return std::make_unique<DisjointMethod>(eps, max_segment_length);
    case MethodId::Linear:
      return std::make_unique<LinearMethod>(eps, max_segment_length);
  }
  fail(Errc::BadParams, "unknown method id");
}

std::vector<SegmentSummary> segment_stream(MethodId id, std::span<const InputTuple> points,
                                           ErrorThreshold eps, std::size_t max_segment_length) {
  auto method = make_method(id, eps, max_segment_length);
  std::vector<SegmentSummary> out;
  for (const InputTuple& p : points) {
    if (auto closed = method->push(p)) {
      out.push_back(closed->summary);
    }
  }
  if (auto closed = method->finish()) {
    out.push_back(closed->summary);
  }
  return out;
}

}  // namespace pla
