#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "vidomit/error.hpp"

namespace vidomit {

/// Exact frame rate carried as a rational so 29.97-style rates do not drift.
struct Rational {
  std::int64_t num = 30;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool valid() const { return num > 0 && den > 0; }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num * b.den == b.num * a.den;
  }
};

/// One 8-bit RGB raster, row-major, three samples per pixel.
struct Frame {
  static constexpr int kChannels = 3;

  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  Frame() = default;
  Frame(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h) {
    if (w < 1 || h < 1) throw InvalidArgument("frame dimensions must be >= 1");
    data.assign(static_cast<std::size_t>(w) * h * kChannels, fill);
  }

  std::size_t sample_index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width + x) * kChannels + c;
  }
  std::uint8_t at(int x, int y, int c) const { return data[sample_index(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c) { return data[sample_index(x, y, c)]; }

  bool same_shape(const Frame& o) const { return width == o.width && height == o.height; }
  bool valid() const {
    return width >= 1 && height >= 1 &&
           data.size() == static_cast<std::size_t>(width) * height * kChannels;
  }
  friend bool operator==(const Frame& a, const Frame& b) {
    return a.width == b.width && a.height == b.height && a.data == b.data;
  }
};

/// Axis-aligned pixel rectangle, must lie fully inside its host frame.
struct Region {
  int x0 = 0;
  int y0 = 0;
  int w = 0;
  int h = 0;

  bool inside(int frame_w, int frame_h) const {
    return x0 >= 0 && y0 >= 0 && w >= 1 && h >= 1 &&
           x0 + w <= frame_w && y0 + h <= frame_h;
  }
  bool contains(int x, int y) const {
    return x >= x0 && x < x0 + w && y >= y0 && y < y0 + h;
  }
  friend bool operator==(const Region&, const Region&) = default;
};

/// Ordered frames sharing one resolution, plus the exact frame rate.
struct FrameSequence {
  std::vector<Frame> frames;
  Rational fps{30, 1};

  std::int64_t frame_count() const { return static_cast<std::int64_t>(frames.size()); }
  int width() const { return frames.empty() ? 0 : frames.front().width; }
  int height() const { return frames.empty() ? 0 : frames.front().height; }

  /// Throws InvalidArgument/ShapeError when the sequence invariants are broken.
  void validate() const {
    if (frames.empty()) throw InvalidArgument("frame sequence must hold at least one frame");
    if (!fps.valid()) throw InvalidArgument("fps must be a positive rational");
    for (const Frame& f : frames) {
      if (!f.valid()) throw ShapeError("frame data size does not match its dimensions");
      if (!f.same_shape(frames.front()))
        throw ShapeError("all frames in a sequence must share dimensions");
    }
  }
};

}  // namespace vidomit
