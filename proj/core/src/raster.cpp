#include "vidomit/raster.hpp"

#include <algorithm>
#include <cmath>

namespace vidomit {

namespace {

inline std::uint8_t round_sample(double v) {
  double r = std::floor(v + 0.5);
  if (r < 0.0) r = 0.0;
  if (r > 255.0) r = 255.0;
  return static_cast<std::uint8_t>(r);
}

}  // namespace

Frame resize_bilinear(const Frame& src, int out_w, int out_h) {
  if (!src.valid()) throw ShapeError("resize_bilinear: invalid source frame");
  if (out_w < 1 || out_h < 1)
    throw InvalidArgument("resize_bilinear: target dimensions must be >= 1");
  if (out_w == src.width && out_h == src.height) return src;

  Frame out(out_w, out_h);
  // Source coordinate (o + 0.5) * in/out - 0.5, evaluated as an exact integer
  // product over one division so every platform rounds identically.
  const auto src_coord = [](int o, std::int64_t in, std::int64_t out_dim) {
    return static_cast<double>((2 * o + 1) * in) / static_cast<double>(2 * out_dim) - 0.5;
  };
  for (int yo = 0; yo < out_h; ++yo) {
    double fy = src_coord(yo, src.height, out_h);
    fy = std::clamp(fy, 0.0, static_cast<double>(src.height - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, src.height - 1);
    const double wy = fy - y0;
    for (int xo = 0; xo < out_w; ++xo) {
      double fx = src_coord(xo, src.width, out_w);
      fx = std::clamp(fx, 0.0, static_cast<double>(src.width - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, src.width - 1);
      const double wx = fx - x0;
      for (int c = 0; c < Frame::kChannels; ++c) {
        const double top = (1.0 - wx) * src.at(x0, y0, c) + wx * src.at(x1, y0, c);
        const double bot = (1.0 - wx) * src.at(x0, y1, c) + wx * src.at(x1, y1, c);
        out.at(xo, yo, c) = round_sample((1.0 - wy) * top + wy * bot);
      }
    }
  }
  return out;
}

Frame alpha_blend(const Frame& base, const Frame& overlay, double alpha) {
  if (!base.valid() || !overlay.valid()) throw ShapeError("alpha_blend: invalid frame");
  if (!base.same_shape(overlay))
    throw ShapeError("alpha_blend: base and overlay dimensions differ");
  if (alpha < 0.0 || alpha > 1.0)
    throw InvalidArgument("alpha_blend: alpha must lie in [0, 1]");

  Frame out = base;
  const std::size_t n = base.data.size();
  for (std::size_t i = 0; i < n; ++i) {
    out.data[i] = round_sample(alpha * overlay.data[i] + (1.0 - alpha) * base.data[i]);
  }
  return out;
}

Frame paste_region(const Frame& base, const Frame& patch, const Region& region) {
  if (!base.valid() || !patch.valid()) throw ShapeError("paste_region: invalid frame");
  if (region.w < 1 || region.h < 1)
    throw InvalidArgument("paste_region: region extent must be >= 1 in both axes");
  if (!region.inside(base.width, base.height))
    throw ShapeError("paste_region: region falls outside the base frame");
  if (patch.width != region.w || patch.height != region.h)
    throw ShapeError("paste_region: patch dimensions must equal the region extent");

  Frame out = base;
  const std::size_t row_bytes = static_cast<std::size_t>(region.w) * Frame::kChannels;
  for (int y = 0; y < region.h; ++y) {
    std::copy_n(patch.data.begin() + patch.sample_index(0, y, 0), row_bytes,
                out.data.begin() + out.sample_index(region.x0, region.y0 + y, 0));
  }
  return out;
}

}  // namespace vidomit
