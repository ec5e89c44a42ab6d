#pragma once

#include <cstdint>

#include "vidomit/frame.hpp"
#include "vidomit/rng.hpp"

namespace testutil {

inline vidomit::Frame random_frame(vidomit::SplitMix64& rng, int w, int h) {
  vidomit::Frame f(w, h);
  for (auto& s : f.data) s = static_cast<std::uint8_t>(rng.next_below(256));
  return f;
}

inline vidomit::FrameSequence random_sequence(vidomit::SplitMix64& rng, std::int64_t frames,
                                              int w, int h,
                                              vidomit::Rational fps = {30, 1}) {
  vidomit::FrameSequence seq;
  seq.fps = fps;
  seq.frames.reserve(static_cast<std::size_t>(frames));
  for (std::int64_t i = 0; i < frames; ++i) seq.frames.push_back(random_frame(rng, w, h));
  return seq;
}

inline vidomit::FrameSequence constant_sequence(std::int64_t frames, int w, int h,
                                                std::uint8_t value,
                                                vidomit::Rational fps = {30, 1}) {
  vidomit::FrameSequence seq;
  seq.fps = fps;
  seq.frames.assign(static_cast<std::size_t>(frames), vidomit::Frame(w, h, value));
  return seq;
}

}  // namespace testutil
