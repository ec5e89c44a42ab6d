#include "vidomit/attack.hpp"

#include <cmath>

#include "doctest.h"
#include "testutil.hpp"
#include "vidomit/raster.hpp"
#include "vidomit/rng.hpp"

using namespace vidomit;

namespace {

AttackSpec fra_spec(double seconds, std::uint64_t seed) {
  AttackSpec spec;
  spec.params = FraParams{seconds};
  spec.seed = seed;
  return spec;
}

AttackSpec ppa_spec(double scale, Anchor anchor = Anchor::bottom_right) {
  AttackSpec spec;
  spec.params = PpaParams{scale, anchor};
  return spec;
}

AttackSpec toa_spec(double opacity) {
  AttackSpec spec;
  spec.params = ToaParams{opacity};
  return spec;
}

}  // namespace

TEST_CASE("plan_attack is deterministic in (spec, metas)") {
  const SequenceMeta src{900, {30, 1}, 64, 64};
  const SequenceMeta bad{40, {30, 1}, 32, 32};
  const AttackSpec spec = fra_spec(4.0, 123456789);
  const AttackPlan a = plan_attack(spec, src, bad);
  const AttackPlan b = plan_attack(spec, src, bad);
  CHECK(a.insert_frame == b.insert_frame);
  CHECK(a.window_frames == b.window_frames);
}

TEST_CASE("fra window equal to the source forces insertion at zero") {
  const SequenceMeta src{120, {30, 1}, 16, 16};
  const SequenceMeta bad{10, {30, 1}, 16, 16};
  for (std::uint64_t seed : {0ull, 7ull, 99ull}) {
    const AttackPlan plan = plan_attack(fra_spec(4.0, seed), src, bad);
    CHECK(plan.window_frames == 120);
    CHECK(plan.insert_frame == 0);
  }
}

TEST_CASE("fra planning on a 2-minute 30fps source") {
  const SequenceMeta src{3600, {30, 1}, 64, 64};
  const SequenceMeta bad{60, {30, 1}, 32, 32};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const AttackPlan plan = plan_attack(fra_spec(4.0, seed), src, bad);
    CHECK(plan.window_frames == 120);
    CHECK(plan.insert_frame >= 0);
    CHECK(plan.insert_frame <= 3480);
  }
}

TEST_CASE("fra rejects windows longer than the source") {
  const SequenceMeta src{60, {30, 1}, 16, 16};
  const SequenceMeta bad{10, {30, 1}, 16, 16};
  CHECK_THROWS_AS(plan_attack(fra_spec(4.0, 1), src, bad), InvalidArgument);
}

TEST_CASE("spec validation rejects out-of-range parameters") {
  const SequenceMeta m{100, {30, 1}, 16, 16};
  CHECK_THROWS_AS(plan_attack(fra_spec(1.0, 0), m, m), InvalidArgument);  // t_r must be > 1
  CHECK_THROWS_AS(plan_attack(ppa_spec(0.0), m, m), InvalidArgument);
  CHECK_THROWS_AS(plan_attack(ppa_spec(1.0), m, m), InvalidArgument);
  CHECK_THROWS_AS(plan_attack(toa_spec(0.0), m, m), InvalidArgument);
  CHECK_THROWS_AS(plan_attack(toa_spec(1.0), m, m), InvalidArgument);
}

TEST_CASE("fra touches only the replacement window") {
  SplitMix64 rng(5);
  const FrameSequence source = testutil::random_sequence(rng, 60, 8, 8, {10, 1});
  const FrameSequence harmful = testutil::random_sequence(rng, 7, 4, 4, {10, 1});
  const AttackSpec spec = fra_spec(2.0, 42);
  const AttackPlan plan =
      plan_attack(spec, SequenceMeta{60, {10, 1}, 8, 8}, SequenceMeta{7, {10, 1}, 4, 4});
  REQUIRE(plan.window_frames == 20);

  const FrameSequence out = apply_fra(source, harmful, plan);
  REQUIRE(out.frame_count() == 60);
  CHECK(out.fps == source.fps);
  for (std::int64_t t = 0; t < 60; ++t) {
    const bool in_window = t >= plan.insert_frame && t < plan.insert_frame + 20;
    if (!in_window) CHECK(out.frames[t] == source.frames[t]);
  }
}

TEST_CASE("fra passes the clip through when resolution and fps already match") {
  SplitMix64 rng(6);
  const FrameSequence source = testutil::random_sequence(rng, 90, 8, 8, {30, 1});
  const FrameSequence harmful = testutil::random_sequence(rng, 70, 8, 8, {30, 1});
  const AttackPlan plan = plan_attack(fra_spec(2.0, 9), SequenceMeta{90, {30, 1}, 8, 8},
                                      SequenceMeta{70, {30, 1}, 8, 8});
  REQUIRE(plan.window_frames == 60);
  const FrameSequence out = apply_fra(source, harmful, plan);
  for (std::int64_t j = 0; j < 60; ++j)
    CHECK(out.frames[plan.insert_frame + j] == harmful.frames[j]);
}

TEST_CASE("fra loops a clip shorter than the window") {
  SplitMix64 rng(7);
  const FrameSequence source = testutil::random_sequence(rng, 90, 8, 8, {30, 1});
  const FrameSequence harmful = testutil::random_sequence(rng, 25, 8, 8, {30, 1});
  const AttackPlan plan = plan_attack(fra_spec(2.0, 3), SequenceMeta{90, {30, 1}, 8, 8},
                                      SequenceMeta{25, {30, 1}, 8, 8});
  const FrameSequence out = apply_fra(source, harmful, plan);
  for (std::int64_t j = 0; j < 60; ++j)
    CHECK(out.frames[plan.insert_frame + j] == harmful.frames[j % 25]);
}

TEST_CASE("fra resamples nearest-in-time when the clip fps differs") {
  SplitMix64 rng(8);
  const FrameSequence source = testutil::random_sequence(rng, 60, 8, 8, {30, 1});
  const FrameSequence harmful = testutil::random_sequence(rng, 30, 8, 8, {15, 1});
  const AttackPlan plan = plan_attack(fra_spec(1.5, 4), SequenceMeta{60, {30, 1}, 8, 8},
                                      SequenceMeta{30, {15, 1}, 8, 8});
  REQUIRE(plan.window_frames == 45);
  const FrameSequence out = apply_fra(source, harmful, plan);
  for (std::int64_t j = 0; j < 45; ++j) {
    // offset j at 30 fps lands at clip frame round(j / 2), rounded half up
    const std::int64_t expect = ((j + 1) / 2) % 30;
    CHECK(out.frames[plan.insert_frame + j] == harmful.frames[expect]);
  }
}

TEST_CASE("ppa plans the documented corner geometry") {
  const SequenceMeta src{10, {30, 1}, 720, 720};
  const SequenceMeta bad{4, {30, 1}, 64, 64};
  const AttackPlan plan = plan_attack(ppa_spec(0.2), src, bad);
  CHECK(plan.patch_region == Region{576, 576, 144, 144});

  const AttackPlan tl = plan_attack(ppa_spec(0.2, Anchor::top_left), src, bad);
  CHECK(tl.patch_region == Region{0, 0, 144, 144});
}

TEST_CASE("ppa rejects scales that round to an empty patch") {
  const SequenceMeta src{10, {30, 1}, 2, 2};
  const SequenceMeta bad{4, {30, 1}, 4, 4};
  CHECK_THROWS_AS(plan_attack(ppa_spec(0.2), src, bad), InvalidArgument);
}

TEST_CASE("ppa leaves pixels outside the region bit-identical") {
  SplitMix64 rng(9);
  const FrameSequence source = testutil::random_sequence(rng, 12, 20, 16);
  const FrameSequence harmful = testutil::random_sequence(rng, 5, 6, 6);
  const AttackPlan plan = plan_attack(ppa_spec(0.25), SequenceMeta{12, {30, 1}, 20, 16},
                                      SequenceMeta{5, {30, 1}, 6, 6});
  const Region r = plan.patch_region;
  const FrameSequence out = apply_ppa(source, harmful, plan);
  REQUIRE(out.frame_count() == 12);
  for (std::int64_t t = 0; t < 12; ++t)
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 20; ++x)
        if (!r.contains(x, y))
          for (int c = 0; c < 3; ++c)
            REQUIRE(out.frames[t].at(x, y, c) == source.frames[t].at(x, y, c));
}

TEST_CASE("ppa at scale 0.999 on 1000x1000 leaves a one-pixel border") {
  const FrameSequence source = testutil::constant_sequence(1, 1000, 1000, 0);
  const FrameSequence harmful = testutil::constant_sequence(1, 64, 64, 255);
  const AttackPlan plan = plan_attack(ppa_spec(0.999), SequenceMeta{1, {30, 1}, 1000, 1000},
                                      SequenceMeta{1, {30, 1}, 64, 64});
  CHECK(plan.patch_region == Region{1, 1, 999, 999});
  const FrameSequence out = apply_ppa(source, harmful, plan);
  std::int64_t untouched = 0;
  for (int y = 0; y < 1000; ++y)
    for (int x = 0; x < 1000; ++x)
      if (out.frames[0].at(x, y, 0) == 0) ++untouched;
  CHECK(untouched == 1999);  // top row plus left column
}

TEST_CASE("toa blends every frame with the documented arithmetic") {
  const FrameSequence source = testutil::constant_sequence(25, 8, 8, 100);
  FrameSequence harmful = testutil::constant_sequence(10, 8, 8, 200);
  const AttackPlan plan = plan_attack(toa_spec(0.5), SequenceMeta{25, {30, 1}, 8, 8},
                                      SequenceMeta{10, {30, 1}, 8, 8});
  const FrameSequence out = apply_toa(source, harmful, plan);
  REQUIRE(out.frame_count() == 25);
  for (const Frame& f : out.frames)
    for (std::uint8_t s : f.data) REQUIRE(s == 150);
}

TEST_CASE("toa loops the clip modulo its length") {
  const FrameSequence source = testutil::constant_sequence(25, 4, 4, 0);
  FrameSequence harmful;
  harmful.fps = {30, 1};
  for (int i = 0; i < 10; ++i) harmful.frames.emplace_back(4, 4, static_cast<std::uint8_t>(10 * i));
  const AttackPlan plan = plan_attack(toa_spec(0.5), SequenceMeta{25, {30, 1}, 4, 4},
                                      SequenceMeta{10, {30, 1}, 4, 4});
  const FrameSequence out = apply_toa(source, harmful, plan);
  // frame 24 uses clip frame 4: blend(0, 40, 0.5) = 20
  CHECK(out.frames[24].at(0, 0, 0) == 20);
  CHECK(out.frames[13].at(0, 0, 0) == 15);
}

TEST_CASE("toa of a clip identical to the source is a fixed point") {
  SplitMix64 rng(10);
  const FrameSequence source = testutil::random_sequence(rng, 6, 10, 10);
  FrameSequence harmful = source;
  for (double alpha : {0.3, 0.5, 0.7}) {
    const AttackPlan plan = plan_attack(toa_spec(alpha), SequenceMeta{6, {30, 1}, 10, 10},
                                        SequenceMeta{6, {30, 1}, 10, 10});
    const FrameSequence out = apply_toa(source, harmful, plan);
    for (std::int64_t t = 0; t < 6; ++t) CHECK(out.frames[t] == source.frames[t]);
  }
}

TEST_CASE("toa marks every frame once the clip clears ceil(1/alpha) gray levels") {
  SplitMix64 rng(14);
  for (int iter = 0; iter < 10; ++iter) {
    const double alpha = 0.05 + rng.next_double() * 0.9;
    const int delta = static_cast<int>(std::ceil(1.0 / alpha));
    const FrameSequence source = testutil::random_sequence(rng, 12, 10, 10);
    FrameSequence harmful = source;
    for (Frame& f : harmful.frames)
      for (auto& s : f.data)
        s = static_cast<std::uint8_t>(s + delta <= 255 ? s + delta : s - delta);

    const AttackPlan plan = plan_attack(toa_spec(alpha), SequenceMeta{12, {30, 1}, 10, 10},
                                        SequenceMeta{12, {30, 1}, 10, 10});
    const FrameSequence out = apply_toa(source, harmful, plan);
    for (std::int64_t t = 0; t < 12; ++t) REQUIRE_FALSE(out.frames[t] == source.frames[t]);
  }
}

TEST_CASE("apply rejects a plan for a different variant") {
  SplitMix64 rng(12);
  const FrameSequence source = testutil::random_sequence(rng, 10, 8, 8);
  const FrameSequence harmful = testutil::random_sequence(rng, 4, 8, 8);
  const AttackPlan plan = plan_attack(toa_spec(0.5), SequenceMeta{10, {30, 1}, 8, 8},
                                      SequenceMeta{4, {30, 1}, 8, 8});
  CHECK_THROWS_AS(apply_fra(source, harmful, plan), InvalidArgument);
  CHECK_THROWS_AS(apply_ppa(source, harmful, plan), InvalidArgument);
}

TEST_CASE("all attacks preserve length and fps and reproduce bit-identically") {
  SplitMix64 rng(13);
  for (int iter = 0; iter < 8; ++iter) {
    const std::int64_t src_len = 20 + static_cast<std::int64_t>(rng.next_below(40));
    const std::int64_t bad_len = 3 + static_cast<std::int64_t>(rng.next_below(10));
    const FrameSequence source = testutil::random_sequence(rng, src_len, 16, 12, {12, 1});
    const FrameSequence harmful = testutil::random_sequence(rng, bad_len, 6, 5, {12, 1});
    const SequenceMeta sm{src_len, {12, 1}, 16, 12};
    const SequenceMeta hm{bad_len, {12, 1}, 6, 5};

    const AttackSpec specs[] = {fra_spec(1.25, rng.next()), ppa_spec(0.3), toa_spec(0.4)};
    for (const AttackSpec& spec : specs) {
      const AttackPlan plan = plan_attack(spec, sm, hm);
      const FrameSequence a = apply_attack(source, harmful, plan);
      const FrameSequence b = apply_attack(source, harmful, plan);
      REQUIRE(a.frame_count() == src_len);
      REQUIRE(a.fps == source.fps);
      REQUIRE(a.frames == b.frames);
    }
  }
}
