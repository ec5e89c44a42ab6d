#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "vidomit/frame.hpp"

namespace vidomit {

enum class AttackVariant { fra, ppa, toa };
enum class Anchor { bottom_right, bottom_left, top_right, top_left };
enum class Category { violence, crime, pornography };

std::string_view to_string(AttackVariant v);
std::string_view to_string(Anchor a);
std::string_view to_string(Category c);
AttackVariant parse_attack_variant(std::string_view s);
Anchor parse_anchor(std::string_view s);
Category parse_category(std::string_view s);

/// Frame replacement: overwrite replace_seconds of the source, starting at a
/// seed-chosen position, with the injected clip.
struct FraParams {
  double replace_seconds = 4.0;  // must be > 1
};

/// Picture-in-picture: paste the injected clip, scaled to scale*H x scale*W,
/// into a fixed corner of every frame.
struct PpaParams {
  double scale = 0.2;  // in (0, 1)
  Anchor anchor = Anchor::bottom_right;
};

/// Transparent overlay: blend the injected clip over every frame at a fixed
/// opacity.
struct ToaParams {
  double opacity = 0.5;  // in (0, 1)
};

/// Which attack to run plus exactly that attack's parameters. Holding the
/// per-variant fields in a variant keeps impossible combinations
/// unrepresentable.
struct AttackSpec {
  std::variant<FraParams, PpaParams, ToaParams> params = FraParams{};
  std::uint64_t seed = 0;
  Category category = Category::violence;

  AttackVariant variant() const { return static_cast<AttackVariant>(params.index()); }
  const FraParams& fra() const { return std::get<FraParams>(params); }
  const PpaParams& ppa() const { return std::get<PpaParams>(params); }
  const ToaParams& toa() const { return std::get<ToaParams>(params); }
};

/// Throws InvalidArgument when the variant's parameters are out of range.
void validate_spec(const AttackSpec& spec);

/// Frame count, rate and resolution of a stored sequence; enough to plan an
/// attack without decoding any pixels.
struct SequenceMeta {
  std::int64_t frame_count = 0;
  Rational fps{30, 1};
  int width = 0;
  int height = 0;
};

/// A spec with all randomness resolved. Reproducible from (spec.seed, metas).
struct AttackPlan {
  AttackSpec spec;
  SequenceMeta source;
  SequenceMeta harmful;
  // FRA only
  std::int64_t window_frames = 0;
  std::int64_t insert_frame = 0;
  // PPA only
  Region patch_region;
};

/// Resolves randomness and derived geometry. For FRA the insertion frame is
/// drawn uniformly from [0, source_len - round(t_r * fps)] with a
/// counter-based generator seeded by spec.seed; PPA and TOA plans carry no
/// randomness.
AttackPlan plan_attack(const AttackSpec& spec, const SequenceMeta& source,
                       const SequenceMeta& harmful);

/// Replaces frames [insert, insert + window) with the injected clip resized
/// to source resolution and resampled nearest-in-time to source fps, looping
/// when the clip is shorter than the window. All other frames are bit-equal
/// to the source.
FrameSequence apply_fra(const FrameSequence& source, const FrameSequence& harmful,
                        const AttackPlan& plan);

/// Pastes the injected clip, resized to the planned corner region, into every
/// frame; frame t uses injected frame t mod clip length.
FrameSequence apply_ppa(const FrameSequence& source, const FrameSequence& harmful,
                        const AttackPlan& plan);

/// Blends the injected clip (resized to source resolution, looped) over every
/// frame at the configured opacity.
FrameSequence apply_toa(const FrameSequence& source, const FrameSequence& harmful,
                        const AttackPlan& plan);

/// Dispatches on plan.spec.variant().
FrameSequence apply_attack(const FrameSequence& source, const FrameSequence& harmful,
                           const AttackPlan& plan);

}  // namespace vidomit
