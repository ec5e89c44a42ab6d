#pragma once

#include "vidomit/frame.hpp"

namespace vidomit {

/// Bilinear resize with half-pixel-center alignment (align-corners = false),
/// channels handled independently, samples rounded half-up. The source
/// coordinate of output pixel o is ((2o+1)*in)/(2*out) - 0.5, clamped to the
/// frame; the convention is pinned so results are bit-exact across platforms.
Frame resize_bilinear(const Frame& src, int out_w, int out_h);

/// out = round(alpha * overlay + (1 - alpha) * base), rounded half-up and
/// clamped to [0, 255]. base and overlay must share dimensions, 0 <= alpha <= 1.
Frame alpha_blend(const Frame& base, const Frame& overlay, double alpha);

/// Copies patch over base inside region; every sample outside the region is
/// bit-identical to base. patch dimensions must equal the region extent.
Frame paste_region(const Frame& base, const Frame& patch, const Region& region);

/// Shared rounding rule for ratio-derived pixel extents (round half up).
inline int round_half_up(double v) { return static_cast<int>(v + 0.5); }

}  // namespace vidomit
