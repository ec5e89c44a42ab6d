#include "vidomit/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vidomit/parallel.hpp"

namespace vidomit {

namespace {

// round(a / b) half-up for a >= 0, b > 0, without floating point.
std::int64_t div_round_half_up(std::int64_t a, std::int64_t b) {
  return (2 * a + b) / (2 * b);
}

}  // namespace

std::vector<std::int64_t> uniform_sample_indices(std::int64_t total_frames, std::int64_t n) {
  if (total_frames < 1) throw InvalidArgument("uniform_sample_indices: empty video");
  if (n < 1) throw InvalidArgument("uniform_sample_indices: need at least one sample");
  if (n > total_frames)
    throw InvalidArgument("uniform_sample_indices: more samples than frames");

  std::vector<std::int64_t> indices(static_cast<std::size_t>(n));
  if (n == 1) {
    indices[0] = div_round_half_up(total_frames - 1, 2);
    return indices;
  }
  for (std::int64_t i = 0; i < n; ++i) {
    indices[static_cast<std::size_t>(i)] = div_round_half_up(i * (total_frames - 1), n - 1);
  }
  return indices;
}

TokenGrid tokenize_frame(const Frame& frame, int grid_rows, int grid_cols) {
  if (!frame.valid()) throw ShapeError("tokenize_frame: invalid frame");
  if (grid_rows < 1 || grid_cols < 1)
    throw InvalidArgument("tokenize_frame: grid dimensions must be >= 1");
  if (grid_rows > frame.height || grid_cols > frame.width)
    throw InvalidArgument("tokenize_frame: grid exceeds frame dimensions");

  TokenGrid grid(grid_rows, grid_cols, Frame::kChannels);
  for (int r = 0; r < grid_rows; ++r) {
    const int y0 = static_cast<int>(static_cast<std::int64_t>(r) * frame.height / grid_rows);
    const int y1 = static_cast<int>(static_cast<std::int64_t>(r + 1) * frame.height / grid_rows);
    for (int c = 0; c < grid_cols; ++c) {
      const int x0 = static_cast<int>(static_cast<std::int64_t>(c) * frame.width / grid_cols);
      const int x1 = static_cast<int>(static_cast<std::int64_t>(c + 1) * frame.width / grid_cols);
      double sum[Frame::kChannels] = {0.0, 0.0, 0.0};
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x)
          for (int ch = 0; ch < Frame::kChannels; ++ch) sum[ch] += frame.at(x, y, ch);
      const double count = static_cast<double>(y1 - y0) * (x1 - x0);
      for (int ch = 0; ch < Frame::kChannels; ++ch) grid.at(r, c, ch) = sum[ch] / count;
    }
  }
  return grid;
}

std::string_view to_string(DownsampleMode m) {
  switch (m) {
    case DownsampleMode::avg_pool_2x2: return "avg";
    case DownsampleMode::bilinear_2x: return "bilinear";
  }
  return "?";
}

DownsampleMode parse_downsample_mode(std::string_view s) {
  if (s == "avg") return DownsampleMode::avg_pool_2x2;
  if (s == "bilinear") return DownsampleMode::bilinear_2x;
  throw InvalidArgument("unknown downsample mode: " + std::string(s));
}

TokenGrid downsample_grid(const TokenGrid& grid, DownsampleMode mode) {
  if (grid.rows < 2 || grid.cols < 2)
    throw InvalidArgument("downsample_grid: grid must be at least 2x2");
  if (mode == DownsampleMode::avg_pool_2x2 && (grid.rows % 2 != 0 || grid.cols % 2 != 0))
    throw InvalidArgument("downsample_grid: avg-pool-2x2 requires even dimensions");

  // With an exact 2x factor the half-pixel-center bilinear taps land at the
  // 2x2 block centers, so both modes reduce to the block mean; bilinear_2x
  // additionally drops a trailing odd row/column.
  TokenGrid out(grid.rows / 2, grid.cols / 2, grid.channels);
  for (int r = 0; r < out.rows; ++r)
    for (int c = 0; c < out.cols; ++c)
      for (int ch = 0; ch < grid.channels; ++ch)
        out.at(r, c, ch) =
            (grid.at(2 * r, 2 * c, ch) + grid.at(2 * r, 2 * c + 1, ch) +
             grid.at(2 * r + 1, 2 * c, ch) + grid.at(2 * r + 1, 2 * c + 1, ch)) /
            4.0;
  return out;
}

std::int64_t enforce_token_budget(const BudgetConfig& budget, std::int64_t n_frames) {
  if (n_frames < 1) throw InvalidArgument("enforce_token_budget: need at least one frame");
  if (budget.prompt_tokens < 0)
    throw InvalidArgument("enforce_token_budget: prompt length must be >= 0");
  if (budget.per_frame_tokens < 1)
    throw InvalidArgument("enforce_token_budget: per-frame tokens must be >= 1");
  if (budget.total_limit < budget.prompt_tokens)
    throw BudgetInfeasible("token budget smaller than the prompt alone");

  const std::int64_t cap = (budget.total_limit - budget.prompt_tokens) / n_frames;
  if (cap < 1) throw BudgetInfeasible("token budget leaves no room for visual tokens");
  return std::min(budget.per_frame_tokens, cap);
}

Region region_to_grid_cells(const Region& pixel_region, int frame_w, int frame_h,
                            int grid_rows, int grid_cols) {
  if (!pixel_region.inside(frame_w, frame_h))
    throw ShapeError("region_to_grid_cells: region outside the frame");
  if (grid_rows < 1 || grid_cols < 1 || grid_rows > frame_h || grid_cols > frame_w)
    throw InvalidArgument("region_to_grid_cells: invalid grid dimensions");

  // Cell c covers pixels [c*W/cols, (c+1)*W/cols); pick cells whose span
  // intersects the region.
  int c_first = -1, c_last = -1;
  for (int c = 0; c < grid_cols; ++c) {
    const int px0 = static_cast<int>(static_cast<std::int64_t>(c) * frame_w / grid_cols);
    const int px1 = static_cast<int>(static_cast<std::int64_t>(c + 1) * frame_w / grid_cols);
    if (px1 > pixel_region.x0 && px0 < pixel_region.x0 + pixel_region.w) {
      if (c_first < 0) c_first = c;
      c_last = c;
    }
  }
  int r_first = -1, r_last = -1;
  for (int r = 0; r < grid_rows; ++r) {
    const int py0 = static_cast<int>(static_cast<std::int64_t>(r) * frame_h / grid_rows);
    const int py1 = static_cast<int>(static_cast<std::int64_t>(r + 1) * frame_h / grid_rows);
    if (py1 > pixel_region.y0 && py0 < pixel_region.y0 + pixel_region.h) {
      if (r_first < 0) r_first = r;
      r_last = r;
    }
  }
  return Region{c_first, r_first, c_last - c_first + 1, r_last - r_first + 1};
}

namespace {

// Downsampled footprint of a cell-coordinate region: both axes halved, i.e.
// every cell whose 2x2 block intersects the region, clipped to the ds grid.
Region halve_region(const Region& cells, int ds_rows, int ds_cols) {
  const int c0 = cells.x0 / 2;
  const int c1 = std::min((cells.x0 + cells.w - 1) / 2, ds_cols - 1);
  const int r0 = cells.y0 / 2;
  const int r1 = std::min((cells.y0 + cells.h - 1) / 2, ds_rows - 1);
  return Region{c0, r0, c1 - c0 + 1, r1 - r0 + 1};
}

double region_energy(const TokenGrid& clean, const TokenGrid& attacked, const Region& cells) {
  double e = 0.0;
  for (int r = cells.y0; r < cells.y0 + cells.h; ++r)
    for (int c = cells.x0; c < cells.x0 + cells.w; ++c)
      for (int ch = 0; ch < clean.channels; ++ch) {
        const double d = attacked.at(r, c, ch) - clean.at(r, c, ch);
        e += d * d;
      }
  return e;
}

void check_same_dims(const TokenGrid& a, const TokenGrid& b, const char* what) {
  if (a.rows != b.rows || a.cols != b.cols || a.channels != b.channels)
    throw ShapeError(std::string("patch_energy_retention: ") + what);
}

}  // namespace

double patch_energy_retention(const TokenGrid& grid_clean, const TokenGrid& grid_attacked,
                              const TokenGrid& grid_clean_ds, const TokenGrid& grid_attacked_ds,
                              const Region& region_tokens) {
  check_same_dims(grid_clean, grid_attacked, "clean/attacked grids differ in shape");
  check_same_dims(grid_clean_ds, grid_attacked_ds,
                  "downsampled clean/attacked grids differ in shape");
  if (grid_clean_ds.rows != grid_clean.rows / 2 || grid_clean_ds.cols != grid_clean.cols / 2)
    throw ShapeError("patch_energy_retention: downsampled grid is not the halved grid");
  if (region_tokens.x0 < 0 || region_tokens.y0 < 0 || region_tokens.w < 1 ||
      region_tokens.h < 1 || region_tokens.x0 + region_tokens.w > grid_clean.cols ||
      region_tokens.y0 + region_tokens.h > grid_clean.rows)
    throw ShapeError("patch_energy_retention: region outside the grid");

  const double e_before = region_energy(grid_clean, grid_attacked, region_tokens);
  const Region ds_region = halve_region(region_tokens, grid_clean_ds.rows, grid_clean_ds.cols);
  const double e_after = region_energy(grid_clean_ds, grid_attacked_ds, ds_region);

  if (e_before == 0.0) {
    if (e_after == 0.0) return 1.0;
    throw InconsistencyError(
        "patch_energy_retention: zero energy before downsampling but nonzero after");
  }
  return e_after / e_before;
}

HarmfulMask mask_from_plan(const AttackPlan& plan) {
  HarmfulMask mask;
  mask.entries.resize(static_cast<std::size_t>(plan.source.frame_count));
  switch (plan.spec.variant()) {
    case AttackVariant::fra:
      for (std::int64_t t = plan.insert_frame; t < plan.insert_frame + plan.window_frames; ++t)
        mask.entries[static_cast<std::size_t>(t)].harmful = true;
      break;
    case AttackVariant::ppa:
      for (MaskEntry& e : mask.entries) {
        e.harmful = true;
        e.region = plan.patch_region;
      }
      break;
    case AttackVariant::toa:
      for (MaskEntry& e : mask.entries) e.harmful = true;
      break;
  }
  return mask;
}

IngestionTrace simulate_ingestion(const FrameSequence& attacked, const HarmfulMask& mask,
                                  const SamplerConfig& sampler, GridDims grid,
                                  DownsampleMode mode, const FrameSequence* clean) {
  attacked.validate();
  if (mask.frame_count() != attacked.frame_count())
    throw InvalidArgument("simulate_ingestion: mask length must equal the frame count");
  if (clean) {
    clean->validate();
    if (clean->frame_count() != attacked.frame_count() ||
        clean->width() != attacked.width() || clean->height() != attacked.height())
      throw ShapeError("simulate_ingestion: clean reference does not match the attacked video");
  }

  IngestionTrace trace;
  trace.sampled_indices = uniform_sample_indices(attacked.frame_count(), sampler.n_frames);
  const std::size_t n = trace.sampled_indices.size();
  trace.sampled_harmful.resize(n);
  trace.grids_before.resize(n);
  trace.grids_after.resize(n);
  trace.region_tokens_before.assign(n, 0);
  trace.region_tokens_after.assign(n, 0);
  trace.retention.assign(n, std::numeric_limits<double>::quiet_NaN());

  // vector<bool> packs bits, so flags are filled before the parallel stage.
  for (std::size_t s = 0; s < n; ++s) {
    const MaskEntry& entry = mask.entries[static_cast<std::size_t>(trace.sampled_indices[s])];
    trace.sampled_harmful[s] = entry.harmful;
    if (entry.harmful) ++trace.harmful_sampled;
  }

  parallel_for(0, static_cast<std::int64_t>(n), [&](std::int64_t i) {
    const std::size_t s = static_cast<std::size_t>(i);
    const std::int64_t frame_idx = trace.sampled_indices[s];
    const MaskEntry& entry = mask.entries[static_cast<std::size_t>(frame_idx)];
    const Frame& frame = attacked.frames[static_cast<std::size_t>(frame_idx)];

    trace.grids_before[s] = tokenize_frame(frame, grid.rows, grid.cols);
    trace.grids_after[s] = downsample_grid(trace.grids_before[s], mode);

    if (!entry.harmful) return;

    const Region cells =
        entry.region ? region_to_grid_cells(*entry.region, frame.width, frame.height,
                                            grid.rows, grid.cols)
                     : Region{0, 0, grid.cols, grid.rows};
    const Region ds_cells =
        halve_region(cells, trace.grids_after[s].rows, trace.grids_after[s].cols);
    trace.region_tokens_before[s] = static_cast<std::int64_t>(cells.w) * cells.h;
    trace.region_tokens_after[s] = static_cast<std::int64_t>(ds_cells.w) * ds_cells.h;

    if (clean) {
      const TokenGrid clean_grid =
          tokenize_frame(clean->frames[static_cast<std::size_t>(frame_idx)], grid.rows, grid.cols);
      const TokenGrid clean_ds = downsample_grid(clean_grid, mode);
      trace.retention[s] = patch_energy_retention(clean_grid, trace.grids_before[s], clean_ds,
                                                  trace.grids_after[s], cells);
    }
  });

  return trace;
}

}  // namespace vidomit
