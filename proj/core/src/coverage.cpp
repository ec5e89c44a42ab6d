#include "vidomit/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "vidomit/error.hpp"
#include "vidomit/ingest.hpp"
#include "vidomit/rng.hpp"

namespace vidomit {

std::string_view to_string(CoverageMethod m) {
  switch (m) {
    case CoverageMethod::exact: return "exact";
    case CoverageMethod::monte_carlo: return "mc";
  }
  return "?";
}

CoverageMethod parse_coverage_method(std::string_view s) {
  if (s == "exact") return CoverageMethod::exact;
  if (s == "mc") return CoverageMethod::monte_carlo;
  throw InvalidArgument("unknown coverage method: " + std::string(s));
}

double CapturePMF::prob_at_least(int k) const {
  double p = 0.0;
  for (int i = std::min(k, 4); i < 5; ++i) p += probs[static_cast<std::size_t>(i)];
  return p;
}

double CapturePMF::mean() const {
  std::int64_t total = 0, weighted = 0;
  for (const auto& [k, cnt] : raw_counts) {
    total += cnt;
    weighted += k * cnt;
  }
  return total ? static_cast<double>(weighted) / static_cast<double>(total) : 0.0;
}

double CapturePMF::variance() const {
  std::int64_t total = 0;
  for (const auto& [k, cnt] : raw_counts) total += cnt;
  if (!total) return 0.0;
  const double m = mean();
  double acc = 0.0;
  for (const auto& [k, cnt] : raw_counts) {
    const double d = static_cast<double>(k) - m;
    acc += d * d * static_cast<double>(cnt);
  }
  return acc / static_cast<double>(total);
}

namespace {

void validate_segment(std::int64_t total_frames, std::int64_t seg_start, std::int64_t seg_len) {
  if (seg_len < 1) throw InvalidArgument("segment length must be >= 1");
  if (seg_start < 0 || seg_start + seg_len > total_frames)
    throw InvalidArgument("segment falls outside the video");
}

// Prefix sums over sampled-index marks: k(start) = pref[start+len] - pref[start].
std::vector<std::int64_t> sample_prefix(std::int64_t total_frames, std::int64_t n) {
  const std::vector<std::int64_t> indices = uniform_sample_indices(total_frames, n);
  std::vector<std::int64_t> pref(static_cast<std::size_t>(total_frames) + 1, 0);
  for (std::int64_t idx : indices) pref[static_cast<std::size_t>(idx) + 1] = 1;
  for (std::size_t i = 1; i < pref.size(); ++i) pref[i] += pref[i - 1];
  return pref;
}

void finalize_pmf(CapturePMF& pmf) {
  std::int64_t total = 0;
  for (const auto& [k, cnt] : pmf.raw_counts) total += cnt;
  pmf.probs.fill(0.0);
  for (const auto& [k, cnt] : pmf.raw_counts) {
    const std::size_t bucket = static_cast<std::size_t>(std::min<std::int64_t>(k, 4));
    pmf.probs[bucket] += static_cast<double>(cnt) / static_cast<double>(total);
  }
}

}  // namespace

std::int64_t capture_count(std::int64_t total_frames, std::int64_t n,
                           std::int64_t seg_start, std::int64_t seg_len) {
  validate_segment(total_frames, seg_start, seg_len);
  const std::vector<std::int64_t> indices = uniform_sample_indices(total_frames, n);
  const auto lo = std::lower_bound(indices.begin(), indices.end(), seg_start);
  const auto hi = std::lower_bound(indices.begin(), indices.end(), seg_start + seg_len);
  return hi - lo;
}

CapturePMF capture_distribution_exact(std::int64_t total_frames, std::int64_t n,
                                      std::int64_t seg_len) {
  validate_segment(total_frames, 0, seg_len);
  CapturePMF pmf;
  pmf.total_frames = total_frames;
  pmf.n_samples = n;
  pmf.seg_len = seg_len;
  pmf.method = CoverageMethod::exact;

  const std::vector<std::int64_t> pref = sample_prefix(total_frames, n);
  for (std::int64_t start = 0; start + seg_len <= total_frames; ++start) {
    const std::int64_t k = pref[static_cast<std::size_t>(start + seg_len)] -
                           pref[static_cast<std::size_t>(start)];
    ++pmf.raw_counts[k];
  }
  finalize_pmf(pmf);
  return pmf;
}

CapturePMF capture_distribution_mc(std::int64_t total_frames, std::int64_t n,
                                   std::int64_t seg_len, std::int64_t trials,
                                   std::uint64_t seed) {
  validate_segment(total_frames, 0, seg_len);
  if (trials < 1) throw InvalidArgument("monte carlo needs at least one trial");

  CapturePMF pmf;
  pmf.total_frames = total_frames;
  pmf.n_samples = n;
  pmf.seg_len = seg_len;
  pmf.method = CoverageMethod::monte_carlo;
  pmf.trials = trials;

  const std::vector<std::int64_t> pref = sample_prefix(total_frames, n);
  const std::uint64_t feasible = static_cast<std::uint64_t>(total_frames - seg_len) + 1;
  SplitMix64 gen(seed);
  for (std::int64_t t = 0; t < trials; ++t) {
    const std::int64_t start = static_cast<std::int64_t>(gen.next_below(feasible));
    const std::int64_t k = pref[static_cast<std::size_t>(start + seg_len)] -
                           pref[static_cast<std::size_t>(start)];
    ++pmf.raw_counts[k];
  }
  finalize_pmf(pmf);
  return pmf;
}

std::vector<CoverageCell> sweep_coverage(std::int64_t total_frames,
                                         const std::vector<std::int64_t>& n_list,
                                         const std::vector<double>& frac_list,
                                         std::int64_t trials, std::uint64_t seed,
                                         CoverageMethod method) {
  if (n_list.empty() || frac_list.empty())
    throw InvalidArgument("sweep_coverage: need at least one N and one fraction");
  for (double f : frac_list)
    if (!(f > 0.0 && f <= 1.0))
      throw InvalidArgument("sweep_coverage: fractions must lie in (0, 1]");

  std::vector<CoverageCell> cells;
  cells.reserve(n_list.size() * frac_list.size());
  for (std::int64_t n : n_list) {
    for (double frac : frac_list) {
      const std::int64_t seg_len =
          std::max<std::int64_t>(1, std::llround(frac * static_cast<double>(total_frames)));
      CoverageCell cell;
      cell.seg_frac = frac;
      cell.pmf = method == CoverageMethod::exact
                     ? capture_distribution_exact(total_frames, n, seg_len)
                     : capture_distribution_mc(
                           total_frames, n, seg_len, trials,
                           derive_seed(seed, static_cast<std::uint64_t>(n),
                                       static_cast<std::uint64_t>(seg_len)));
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

namespace {

// Shortest round-trip decimal, locale-independent.
void put_double(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  os << buf;
}

}  // namespace

void write_coverage_csv(std::ostream& os, const std::vector<CoverageCell>& cells) {
  os << "T,N,seg_frac,seg_len,method,trials,p0,p1,p2,p3,p4plus\n";
  for (const CoverageCell& cell : cells) {
    const CapturePMF& p = cell.pmf;
    os << p.total_frames << ',' << p.n_samples << ',';
    put_double(os, cell.seg_frac);
    os << ',' << p.seg_len << ',' << to_string(p.method) << ',' << p.trials;
    for (double prob : p.probs) {
      os << ',';
      put_double(os, prob);
    }
    os << '\n';
  }
}

double total_variation(const CapturePMF& a, const CapturePMF& b) {
  double tv = 0.0;
  for (std::size_t i = 0; i < a.probs.size(); ++i) tv += std::abs(a.probs[i] - b.probs[i]);
  return tv / 2.0;
}

}  // namespace vidomit
