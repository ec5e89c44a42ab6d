#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string_view>
#include <vector>

namespace vidomit {

enum class CoverageMethod { exact, monte_carlo };
std::string_view to_string(CoverageMethod m);
CoverageMethod parse_coverage_method(std::string_view s);

/// Distribution of "k of N sampled frames land inside an injected segment"
/// over uniformly random segment placements. Buckets mirror {0,1,2,3,>=4};
/// the raw k histogram is kept alongside.
struct CapturePMF {
  std::int64_t total_frames = 0;
  std::int64_t n_samples = 0;
  std::int64_t seg_len = 0;
  CoverageMethod method = CoverageMethod::exact;
  std::int64_t trials = 0;  // monte-carlo only, 0 for exact

  std::array<double, 5> probs{};                     // k = 0, 1, 2, 3, >= 4
  std::map<std::int64_t, std::int64_t> raw_counts;   // exact k -> occurrences

  double prob_at_least(int k) const;
  /// Mean and variance of k under the raw histogram.
  double mean() const;
  double variance() const;
};

/// Number of sampled indices inside [seg_start, seg_start + seg_len), using
/// the endpoint-inclusive uniform sampler.
std::int64_t capture_count(std::int64_t total_frames, std::int64_t n,
                           std::int64_t seg_start, std::int64_t seg_len);

/// Uniform average of capture_count over every feasible start position
/// [0, T - seg_len]. This is the oracle the Monte Carlo runs are checked
/// against.
CapturePMF capture_distribution_exact(std::int64_t total_frames, std::int64_t n,
                                      std::int64_t seg_len);

/// Starts drawn uniformly from the feasible range with a seeded deterministic
/// generator; identical seeds give identical PMFs.
CapturePMF capture_distribution_mc(std::int64_t total_frames, std::int64_t n,
                                   std::int64_t seg_len, std::int64_t trials,
                                   std::uint64_t seed);

/// One sweep cell: segment length expressed as a fraction of the video.
struct CoverageCell {
  double seg_frac = 0.0;
  CapturePMF pmf;
};

/// Full (N, fraction) sweep; seg_len = round(frac * T). Per-cell seeds are
/// derived order-independently from the base seed.
std::vector<CoverageCell> sweep_coverage(std::int64_t total_frames,
                                         const std::vector<std::int64_t>& n_list,
                                         const std::vector<double>& frac_list,
                                         std::int64_t trials, std::uint64_t seed,
                                         CoverageMethod method);

/// CSV emission, columns:
/// T,N,seg_frac,seg_len,method,trials,p0,p1,p2,p3,p4plus
void write_coverage_csv(std::ostream& os, const std::vector<CoverageCell>& cells);

/// Total-variation distance between two PMFs' buckets.
double total_variation(const CapturePMF& a, const CapturePMF& b);

}  // namespace vidomit
