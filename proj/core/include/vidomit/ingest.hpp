#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vidomit/attack.hpp"
#include "vidomit/frame.hpp"

namespace vidomit {

/// How a front-end picks the frames it will actually look at.
struct SamplerConfig {
  enum class Strategy { uniform_endpoint };
  std::int64_t n_frames = 16;
  Strategy strategy = Strategy::uniform_endpoint;
};

/// Endpoint-inclusive uniform spacing: index_i = round(i * (T-1) / (N-1)) for
/// N >= 2, the midpoint for N = 1. This convention yields a stride of
/// (T-1)/(N-1) frames, e.g. 3600 frames / 16 samples -> gaps of 239-240.
std::vector<std::int64_t> uniform_sample_indices(std::int64_t total_frames, std::int64_t n);

/// Per-frame 2-D grid of token vectors. Stand-in featurization is the patch
/// mean of each RGB channel, so channels == 3 for grids built from frames.
struct TokenGrid {
  int rows = 0;
  int cols = 0;
  int channels = 0;
  std::vector<double> values;  // row-major [row][col][channel]

  TokenGrid() = default;
  TokenGrid(int r, int c, int ch)
      : rows(r), cols(c), channels(ch),
        values(static_cast<std::size_t>(r) * c * ch, 0.0) {}

  std::size_t index(int r, int c, int ch) const {
    return (static_cast<std::size_t>(r) * cols + c) * channels + ch;
  }
  double at(int r, int c, int ch) const { return values[index(r, c, ch)]; }
  double& at(int r, int c, int ch) { return values[index(r, c, ch)]; }
  std::int64_t token_count() const { return static_cast<std::int64_t>(rows) * cols; }
};

/// Splits the frame into rows x cols near-equal patches (boundary r spans
/// pixels [r*H/rows, (r+1)*H/rows)) and emits the mean RGB of each patch.
TokenGrid tokenize_frame(const Frame& frame, int grid_rows, int grid_cols);

enum class DownsampleMode { avg_pool_2x2, bilinear_2x };
std::string_view to_string(DownsampleMode m);
DownsampleMode parse_downsample_mode(std::string_view s);

/// Halves both grid axes. avg_pool_2x2 requires even dimensions and emits the
/// mean of each 2x2 block. bilinear_2x samples at half resolution with
/// half-pixel centers; at an exact 2x factor those taps coincide with the 2x2
/// block mean, so the two modes agree wherever both are defined.
TokenGrid downsample_grid(const TokenGrid& grid, DownsampleMode mode);

/// Token-budget inputs: total limit B, prompt length L, raw per-frame tokens P.
struct BudgetConfig {
  std::int64_t total_limit = 8192;     // B
  std::int64_t prompt_tokens = 0;      // L
  std::int64_t per_frame_tokens = 196; // P
};

/// Returns the largest per-frame token count P' = min(P, floor((B-L)/N)) that
/// keeps N*P' + L <= B. Throws BudgetInfeasible when even one token per frame
/// does not fit.
std::int64_t enforce_token_budget(const BudgetConfig& budget, std::int64_t n_frames);

/// Ratio of injected-signal energy surviving one downsampling stage.
/// E = sum of squared (attacked - clean) token differences over the region's
/// footprint at each scale; the downsampled footprint is the region with both
/// axes halved (cells whose 2x2 block intersects the region).
/// Returns E_after / E_before, or 1 when both energies are zero. Throws
/// InconsistencyError when E_before is zero but E_after is not.
double patch_energy_retention(const TokenGrid& grid_clean, const TokenGrid& grid_attacked,
                              const TokenGrid& grid_clean_ds, const TokenGrid& grid_attacked_ds,
                              const Region& region_tokens);

/// Maps a pixel region onto the grid cells whose patches intersect it.
/// Returned Region is in cell coordinates (x0 = first column, w = columns).
Region region_to_grid_cells(const Region& pixel_region, int frame_w, int frame_h,
                            int grid_rows, int grid_cols);

/// Per-frame injection bookkeeping: harmful flag, plus the injected pixel
/// region when the injection is localized (absent means full frame).
struct MaskEntry {
  bool harmful = false;
  std::optional<Region> region;
};

struct HarmfulMask {
  std::vector<MaskEntry> entries;

  std::int64_t frame_count() const { return static_cast<std::int64_t>(entries.size()); }
};

/// Mask an attack plan implies: FRA flags the replacement window, PPA flags
/// every frame with the patch region, TOA flags every frame full-frame.
HarmfulMask mask_from_plan(const AttackPlan& plan);

struct GridDims {
  int rows = 14;
  int cols = 14;
};

/// Everything the simulated front-end saw for one video.
struct IngestionTrace {
  std::vector<std::int64_t> sampled_indices;
  std::vector<bool> sampled_harmful;          // per sampled frame
  std::int64_t harmful_sampled = 0;           // count of flagged sampled frames
  std::vector<TokenGrid> grids_before;        // per sampled frame, pre-downsampling
  std::vector<TokenGrid> grids_after;         // per sampled frame, post-downsampling
  std::vector<std::int64_t> region_tokens_before;  // injected footprint, cells
  std::vector<std::int64_t> region_tokens_after;
  std::vector<double> retention;  // NaN without a clean reference or when not harmful
};

/// Runs the modeled front-end over an attacked sequence: uniform sampling,
/// per-frame token grids, one downsampling stage. When a clean reference is
/// supplied, flagged sampled frames also get an energy-retention ratio
/// against it.
IngestionTrace simulate_ingestion(const FrameSequence& attacked, const HarmfulMask& mask,
                                  const SamplerConfig& sampler, GridDims grid,
                                  DownsampleMode mode,
                                  const FrameSequence* clean = nullptr);

}  // namespace vidomit
