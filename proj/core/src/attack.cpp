#include "vidomit/attack.hpp"

#include <cmath>
#include <vector>

#include "vidomit/parallel.hpp"
#include "vidomit/raster.hpp"
#include "vidomit/rng.hpp"

namespace vidomit {

std::string_view to_string(AttackVariant v) {
  switch (v) {
    case AttackVariant::fra: return "fra";
    case AttackVariant::ppa: return "ppa";
    case AttackVariant::toa: return "toa";
  }
  return "?";
}

std::string_view to_string(Anchor a) {
  switch (a) {
    case Anchor::bottom_right: return "bottom-right";
    case Anchor::bottom_left: return "bottom-left";
    case Anchor::top_right: return "top-right";
    case Anchor::top_left: return "top-left";
  }
  return "?";
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::violence: return "violence";
    case Category::crime: return "crime";
    case Category::pornography: return "pornography";
  }
  return "?";
}

AttackVariant parse_attack_variant(std::string_view s) {
  if (s == "fra") return AttackVariant::fra;
  if (s == "ppa") return AttackVariant::ppa;
  if (s == "toa") return AttackVariant::toa;
  throw InvalidArgument("unknown attack variant: " + std::string(s));
}

Anchor parse_anchor(std::string_view s) {
  if (s == "bottom-right") return Anchor::bottom_right;
  if (s == "bottom-left") return Anchor::bottom_left;
  if (s == "top-right") return Anchor::top_right;
  if (s == "top-left") return Anchor::top_left;
  throw InvalidArgument("unknown anchor: " + std::string(s));
}

Category parse_category(std::string_view s) {
  if (s == "violence") return Category::violence;
  if (s == "crime") return Category::crime;
  if (s == "pornography") return Category::pornography;
  throw InvalidArgument("unknown category: " + std::string(s));
}

void validate_spec(const AttackSpec& spec) {
  switch (spec.variant()) {
    case AttackVariant::fra:
      if (!(spec.fra().replace_seconds > 1.0))
        throw InvalidArgument("fra: replacement duration must be > 1 second");
      break;
    case AttackVariant::ppa:
      if (!(spec.ppa().scale > 0.0 && spec.ppa().scale < 1.0))
        throw InvalidArgument("ppa: scale must lie in (0, 1)");
      break;
    case AttackVariant::toa:
      if (!(spec.toa().opacity > 0.0 && spec.toa().opacity < 1.0))
        throw InvalidArgument("toa: opacity must lie in (0, 1)");
      break;
  }
}

namespace {

void validate_meta(const SequenceMeta& m, const char* which) {
  if (m.frame_count < 1)
    throw InvalidArgument(std::string(which) + " sequence must hold at least one frame");
  if (!m.fps.valid())
    throw InvalidArgument(std::string(which) + " fps must be a positive rational");
  if (m.width < 1 || m.height < 1)
    throw InvalidArgument(std::string(which) + " dimensions must be >= 1");
}

std::int64_t replacement_window_frames(double seconds, const Rational& fps) {
  return std::llround(seconds * static_cast<double>(fps.num) / static_cast<double>(fps.den));
}

// Nearest-in-time mapping of a source-frame offset onto the injected clip's
// timeline, exact in integer arithmetic: round(offset * hfps / sfps).
std::int64_t nearest_in_time(std::int64_t offset, const Rational& source_fps,
                             const Rational& harmful_fps) {
  using i128 = __int128;
  const i128 num = static_cast<i128>(offset) * harmful_fps.num * source_fps.den;
  const i128 den = static_cast<i128>(harmful_fps.den) * source_fps.num;
  return static_cast<std::int64_t>((2 * num + den) / (2 * den));
}

Region anchored_region(Anchor anchor, int frame_w, int frame_h, int patch_w, int patch_h) {
  switch (anchor) {
    case Anchor::bottom_right: return {frame_w - patch_w, frame_h - patch_h, patch_w, patch_h};
    case Anchor::bottom_left: return {0, frame_h - patch_h, patch_w, patch_h};
    case Anchor::top_right: return {frame_w - patch_w, 0, patch_w, patch_h};
    case Anchor::top_left: return {0, 0, patch_w, patch_h};
  }
  throw InvalidArgument("unknown anchor");
}

void check_variant(const AttackPlan& plan, AttackVariant expected) {
  if (plan.spec.variant() != expected)
    throw InvalidArgument("plan variant does not match the requested transform");
}

void check_inputs(const FrameSequence& source, const FrameSequence& harmful,
                  const AttackPlan& plan) {
  source.validate();
  harmful.validate();
  if (source.frame_count() != plan.source.frame_count ||
      source.width() != plan.source.width || source.height() != plan.source.height)
    throw InvalidArgument("source sequence does not match the planned metadata");
  if (harmful.frame_count() != plan.harmful.frame_count)
    throw InvalidArgument("harmful sequence does not match the planned metadata");
}

}  // namespace

AttackPlan plan_attack(const AttackSpec& spec, const SequenceMeta& source,
                       const SequenceMeta& harmful) {
  validate_spec(spec);
  validate_meta(source, "source");
  validate_meta(harmful, "harmful");

  AttackPlan plan;
  plan.spec = spec;
  plan.source = source;
  plan.harmful = harmful;

  switch (spec.variant()) {
    case AttackVariant::fra: {
      plan.window_frames = replacement_window_frames(spec.fra().replace_seconds, source.fps);
      if (plan.window_frames > source.frame_count)
        throw InvalidArgument("fra: replacement window is longer than the source");
      const std::uint64_t feasible =
          static_cast<std::uint64_t>(source.frame_count - plan.window_frames);
      SplitMix64 gen(spec.seed);
      plan.insert_frame = static_cast<std::int64_t>(gen.next_below(feasible + 1));
      break;
    }
    case AttackVariant::ppa: {
      const int patch_w = round_half_up(spec.ppa().scale * source.width);
      const int patch_h = round_half_up(spec.ppa().scale * source.height);
      if (patch_w < 1 || patch_h < 1)
        throw InvalidArgument("ppa: scaled patch rounds to zero pixels");
      plan.patch_region =
          anchored_region(spec.ppa().anchor, source.width, source.height, patch_w, patch_h);
      break;
    }
    case AttackVariant::toa:
      break;
  }
  return plan;
}

FrameSequence apply_fra(const FrameSequence& source, const FrameSequence& harmful,
                        const AttackPlan& plan) {
  check_variant(plan, AttackVariant::fra);
  check_inputs(source, harmful, plan);

  FrameSequence out;
  out.fps = source.fps;
  out.frames = source.frames;

  const std::int64_t begin = plan.insert_frame;
  const std::int64_t end = begin + plan.window_frames;
  const std::int64_t harmful_len = harmful.frame_count();
  const bool needs_resize =
      harmful.width() != source.width() || harmful.height() != source.height();

  // Resize each distinct injected frame once; window frames reuse the cache.
  std::vector<Frame> resized(static_cast<std::size_t>(harmful_len));
  std::vector<char> used(static_cast<std::size_t>(harmful_len), 0);
  std::vector<std::int64_t> mapping(static_cast<std::size_t>(plan.window_frames));
  for (std::int64_t t = begin; t < end; ++t) {
    const std::int64_t idx = nearest_in_time(t - begin, source.fps, harmful.fps) % harmful_len;
    mapping[static_cast<std::size_t>(t - begin)] = idx;
    used[static_cast<std::size_t>(idx)] = 1;
  }
  parallel_for(0, harmful_len, [&](std::int64_t i) {
    if (!used[static_cast<std::size_t>(i)]) return;
    resized[static_cast<std::size_t>(i)] =
        needs_resize
            ? resize_bilinear(harmful.frames[static_cast<std::size_t>(i)], source.width(),
                              source.height())
            : harmful.frames[static_cast<std::size_t>(i)];
  });
  parallel_for(begin, end, [&](std::int64_t t) {
    out.frames[static_cast<std::size_t>(t)] =
        resized[static_cast<std::size_t>(mapping[static_cast<std::size_t>(t - begin)])];
  });
  return out;
}

FrameSequence apply_ppa(const FrameSequence& source, const FrameSequence& harmful,
                        const AttackPlan& plan) {
  check_variant(plan, AttackVariant::ppa);
  check_inputs(source, harmful, plan);

  const Region region = plan.patch_region;
  const std::int64_t harmful_len = harmful.frame_count();
  std::vector<Frame> patches(static_cast<std::size_t>(harmful_len));
  parallel_for(0, harmful_len, [&](std::int64_t i) {
    patches[static_cast<std::size_t>(i)] =
        resize_bilinear(harmful.frames[static_cast<std::size_t>(i)], region.w, region.h);
  });

  FrameSequence out;
  out.fps = source.fps;
  out.frames.resize(source.frames.size());
  parallel_for(0, source.frame_count(), [&](std::int64_t t) {
    out.frames[static_cast<std::size_t>(t)] =
        paste_region(source.frames[static_cast<std::size_t>(t)],
                     patches[static_cast<std::size_t>(t % harmful_len)], region);
  });
  return out;
}

FrameSequence apply_toa(const FrameSequence& source, const FrameSequence& harmful,
                        const AttackPlan& plan) {
  check_variant(plan, AttackVariant::toa);
  check_inputs(source, harmful, plan);

  const double opacity = plan.spec.toa().opacity;
  const std::int64_t harmful_len = harmful.frame_count();
  const bool needs_resize =
      harmful.width() != source.width() || harmful.height() != source.height();
  std::vector<Frame> overlays(static_cast<std::size_t>(harmful_len));
  parallel_for(0, harmful_len, [&](std::int64_t i) {
    overlays[static_cast<std::size_t>(i)] =
        needs_resize
            ? resize_bilinear(harmful.frames[static_cast<std::size_t>(i)], source.width(),
                              source.height())
            : harmful.frames[static_cast<std::size_t>(i)];
  });

  FrameSequence out;
  out.fps = source.fps;
  out.frames.resize(source.frames.size());
  parallel_for(0, source.frame_count(), [&](std::int64_t t) {
    out.frames[static_cast<std::size_t>(t)] =
        alpha_blend(source.frames[static_cast<std::size_t>(t)],
                    overlays[static_cast<std::size_t>(t % harmful_len)], opacity);
  });
  return out;
}

FrameSequence apply_attack(const FrameSequence& source, const FrameSequence& harmful,
                           const AttackPlan& plan) {
  switch (plan.spec.variant()) {
    case AttackVariant::fra: return apply_fra(source, harmful, plan);
    case AttackVariant::ppa: return apply_ppa(source, harmful, plan);
    case AttackVariant::toa: return apply_toa(source, harmful, plan);
  }
  throw InvalidArgument("unknown attack variant");
}

}  // namespace vidomit
