// vidomit: synthesizes content-injection attacks on frame sequences, models
// a VideoLLM ingestion front-end (uniform sampling, token grids, budget), and
// aggregates omission metrics from external model-response logs.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vidomit/attack.hpp"
#include "vidomit/coverage.hpp"
#include "vidomit/eval.hpp"
#include "vidomit/ingest.hpp"
#include "vidomit/media_io.hpp"
#include "vidomit/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vidomit;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct GlobalOptions {
  std::uint64_t seed = 0;
  fs::path out = ".";
  int workers = 0;
};

void emit_error(const std::string& type, const std::string& message) {
  json err{{"error", {{"type", type}, {"message", message}}}};
  std::cerr << err.dump() << '\n';
}

void write_json_atomic(const fs::path& path, const json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

void write_run_metadata(const GlobalOptions& global, const std::string& subcommand,
                        json params, json inputs, json outputs) {
  json meta{{"tool", "vidomit"},
            {"version", kVersion},
            {"subcommand", subcommand},
            {"seed", global.seed},
            {"workers", worker_count()},
            {"params", std::move(params)},
            {"inputs", std::move(inputs)},
            {"outputs", std::move(outputs)}};
  write_json_atomic(global.out / "run_metadata.json", meta);
}

// --- mask file schema ---
// {"frame_count": T, "segments": [{"start": s, "end": e, "region": {...}?}]}
// Frames in [start, end) are harmful; a segment's region marks a localized
// injection (absent means full frame).

json region_to_json(const Region& r) {
  return json{{"x0", r.x0}, {"y0", r.y0}, {"w", r.w}, {"h", r.h}};
}

Region region_from_json(const json& j) {
  return Region{j.at("x0").get<int>(), j.at("y0").get<int>(), j.at("w").get<int>(),
                j.at("h").get<int>()};
}

json mask_to_json(const HarmfulMask& mask) {
  json segments = json::array();
  const std::int64_t total = mask.frame_count();
  std::int64_t t = 0;
  while (t < total) {
    const MaskEntry& head = mask.entries[static_cast<std::size_t>(t)];
    std::int64_t end = t + 1;
    while (end < total) {
      const MaskEntry& e = mask.entries[static_cast<std::size_t>(end)];
      if (e.harmful != head.harmful || e.region != head.region) break;
      ++end;
    }
    if (head.harmful) {
      json seg{{"start", t}, {"end", end}};
      if (head.region) seg["region"] = region_to_json(*head.region);
      segments.push_back(std::move(seg));
    }
    t = end;
  }
  return json{{"frame_count", total}, {"segments", std::move(segments)}};
}

HarmfulMask mask_from_json(const json& j) {
  HarmfulMask mask;
  try {
    const std::int64_t total = j.at("frame_count").get<std::int64_t>();
    if (total < 1) throw DataError("mask: frame_count must be >= 1");
    mask.entries.resize(static_cast<std::size_t>(total));
    for (const json& seg : j.at("segments")) {
      const std::int64_t start = seg.at("start").get<std::int64_t>();
      const std::int64_t end = seg.at("end").get<std::int64_t>();
      if (start < 0 || end <= start || end > total)
        throw DataError("mask: segment [" + std::to_string(start) + ", " +
                        std::to_string(end) + ") outside [0, " + std::to_string(total) + ")");
      std::optional<Region> region;
      if (seg.contains("region")) region = region_from_json(seg.at("region"));
      for (std::int64_t t = start; t < end; ++t) {
        mask.entries[static_cast<std::size_t>(t)] = MaskEntry{true, region};
      }
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("mask: ") + e.what());
  }
  return mask;
}

HarmfulMask read_mask_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mask file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("mask " + path.string() + ": " + e.what());
  }
  return mask_from_json(j);
}

// --- attack subcommands ---

struct AttackArgs {
  fs::path source;
  fs::path harmful;
  double tr = 4.0;
  std::vector<double> etas{0.2};
  std::string anchor = "bottom-right";
  std::vector<double> alphas{0.5};
  std::string category = "violence";
};

std::string value_token(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void run_one_attack(const GlobalOptions& global, const fs::path& out_dir, AttackVariant variant,
                    const AttackArgs& args, double value, const FrameSequence& source,
                    const FrameSequence& harmful, const SequenceMeta& source_meta,
                    const SequenceMeta& harmful_meta) {
  AttackSpec spec;
  switch (variant) {
    case AttackVariant::fra: spec.params = FraParams{args.tr}; break;
    case AttackVariant::ppa: spec.params = PpaParams{value, parse_anchor(args.anchor)}; break;
    case AttackVariant::toa: spec.params = ToaParams{value}; break;
  }
  spec.seed = global.seed;
  spec.category = parse_category(args.category);

  const AttackPlan plan = plan_attack(spec, source_meta, harmful_meta);
  const FrameSequence attacked = apply_attack(source, harmful, plan);

  fs::create_directories(out_dir);
  const SequenceManifest manifest = save_frame_sequence(attacked, out_dir);
  write_json_atomic(out_dir / "mask.json", mask_to_json(mask_from_plan(plan)));

  json params{{"variant", std::string(to_string(variant))},
              {"category", args.category},
              {"seed", spec.seed}};
  switch (variant) {
    case AttackVariant::fra:
      params["tr"] = args.tr;
      params["window_frames"] = plan.window_frames;
      params["insert_frame"] = plan.insert_frame;
      break;
    case AttackVariant::ppa:
      params["eta"] = value;
      params["anchor"] = args.anchor;
      params["region"] = region_to_json(plan.patch_region);
      break;
    case AttackVariant::toa:
      params["alpha"] = value;
      break;
  }
  json meta{{"tool", "vidomit"},
            {"version", kVersion},
            {"subcommand", "attack " + std::string(to_string(variant))},
            {"seed", global.seed},
            {"workers", worker_count()},
            {"params", std::move(params)},
            {"inputs",
             {{"source", args.source.string()}, {"harmful", args.harmful.string()}}},
            {"outputs",
             {{"manifest", (out_dir / "manifest.json").string()},
              {"mask", (out_dir / "mask.json").string()},
              {"checksum", manifest.checksum ? json(*manifest.checksum) : json()}}}};
  write_json_atomic(out_dir / "run_metadata.json", meta);
}

// --eta / --alpha accept comma lists; multi-value runs fan out into one
// subdirectory per value (eta_0.15/, alpha_0.5/, ...).
int run_attack(const GlobalOptions& global, AttackVariant variant, const AttackArgs& args) {
  const std::vector<double>* sweep = nullptr;
  const char* prefix = nullptr;
  if (variant == AttackVariant::ppa) {
    sweep = &args.etas;
    prefix = "eta_";
  } else if (variant == AttackVariant::toa) {
    sweep = &args.alphas;
    prefix = "alpha_";
  }
  if (sweep && sweep->empty()) throw InvalidArgument("need at least one parameter value");

  const SequenceMeta source_meta = read_sequence_meta(args.source);
  const SequenceMeta harmful_meta = read_sequence_meta(args.harmful);
  const FrameSequence source = load_frame_sequence(args.source);
  const FrameSequence harmful = load_frame_sequence(args.harmful);

  if (!sweep || sweep->size() == 1) {
    const double value = sweep ? sweep->front() : 0.0;
    run_one_attack(global, global.out, variant, args, value, source, harmful, source_meta,
                   harmful_meta);
    return kExitOk;
  }

  json runs = json::array();
  for (double value : *sweep) {
    const fs::path sub = global.out / (prefix + value_token(value));
    run_one_attack(global, sub, variant, args, value, source, harmful, source_meta,
                   harmful_meta);
    runs.push_back(json{{"value", value}, {"dir", sub.string()}});
  }
  write_run_metadata(global, "attack " + std::string(to_string(variant)) + " (sweep)",
                     json{{"values", *sweep}, {"category", args.category}},
                     json{{"source", args.source.string()}, {"harmful", args.harmful.string()}},
                     json{{"runs", std::move(runs)}});
  return kExitOk;
}

// --- simulate-coverage ---

struct CoverageArgs {
  std::int64_t total_frames = 2000;
  std::vector<std::int64_t> samples{4, 8, 16, 32};
  std::vector<double> seg_fracs;
  std::int64_t trials = 10000;
  std::string method = "mc";
};

int run_simulate_coverage(const GlobalOptions& global, const CoverageArgs& args) {
  std::vector<double> fracs = args.seg_fracs;
  if (fracs.empty())
    for (int i = 1; i <= 10; ++i) fracs.push_back(static_cast<double>(i) / 100.0);

  const CoverageMethod method = parse_coverage_method(args.method);
  const auto cells =
      sweep_coverage(args.total_frames, args.samples, fracs, args.trials, global.seed, method);

  fs::create_directories(global.out);
  std::ostringstream csv;
  write_coverage_csv(csv, cells);
  write_file_atomic(global.out / "coverage.csv", csv.str());

  write_run_metadata(global, "simulate-coverage",
                     json{{"total_frames", args.total_frames},
                          {"samples", args.samples},
                          {"seg_fracs", fracs},
                          {"trials", args.trials},
                          {"method", args.method}},
                     json::object(),
                     json{{"csv", (global.out / "coverage.csv").string()},
                          {"cells", cells.size()}});
  return kExitOk;
}

// --- simulate-ingest ---

struct IngestArgs {
  fs::path video;
  fs::path mask;
  fs::path clean;
  std::int64_t n_frames = 16;
  std::string grid = "14x14";
  std::string mode = "avg";
};

GridDims parse_grid(const std::string& s) {
  const std::size_t x = s.find('x');
  if (x == std::string::npos || x == 0 || x + 1 >= s.size())
    throw InvalidArgument("grid must look like RxC, e.g. 14x14");
  try {
    return GridDims{std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
  } catch (const std::exception&) {
    throw InvalidArgument("grid must look like RxC, e.g. 14x14");
  }
}

json grid_to_json(const TokenGrid& g) {
  return json{{"rows", g.rows}, {"cols", g.cols}, {"channels", g.channels},
              {"values", g.values}};
}

int run_simulate_ingest(const GlobalOptions& global, const IngestArgs& args) {
  const FrameSequence video = load_frame_sequence(args.video);
  const HarmfulMask mask = read_mask_file(args.mask);
  const GridDims grid = parse_grid(args.grid);
  const DownsampleMode mode = parse_downsample_mode(args.mode);

  std::optional<FrameSequence> clean;
  if (!args.clean.empty()) clean = load_frame_sequence(args.clean);

  const IngestionTrace trace =
      simulate_ingestion(video, mask, SamplerConfig{args.n_frames}, grid, mode,
                         clean ? &*clean : nullptr);

  json retention = json::array();
  for (double r : trace.retention) retention.push_back(std::isnan(r) ? json() : json(r));
  json grids_before = json::array(), grids_after = json::array();
  for (const TokenGrid& g : trace.grids_before) grids_before.push_back(grid_to_json(g));
  for (const TokenGrid& g : trace.grids_after) grids_after.push_back(grid_to_json(g));
  json sampled_harmful = json::array();
  for (bool h : trace.sampled_harmful) sampled_harmful.push_back(h);

  json trace_json{{"total_frames", video.frame_count()},
                  {"n_frames", args.n_frames},
                  {"grid", {{"rows", grid.rows}, {"cols", grid.cols}}},
                  {"mode", args.mode},
                  {"sampled_indices", trace.sampled_indices},
                  {"sampled_harmful", std::move(sampled_harmful)},
                  {"harmful_sampled", trace.harmful_sampled},
                  {"region_tokens_before", trace.region_tokens_before},
                  {"region_tokens_after", trace.region_tokens_after},
                  {"retention", std::move(retention)},
                  {"grids_before", std::move(grids_before)},
                  {"grids_after", std::move(grids_after)}};

  fs::create_directories(global.out);
  write_json_atomic(global.out / "trace.json", trace_json);
  write_run_metadata(global, "simulate-ingest",
                     json{{"n_frames", args.n_frames},
                          {"grid", args.grid},
                          {"mode", args.mode},
                          {"with_clean_reference", !args.clean.empty()}},
                     json{{"video", args.video.string()},
                          {"mask", args.mask.string()},
                          {"clean", args.clean.empty() ? json() : json(args.clean.string())}},
                     json{{"trace", (global.out / "trace.json").string()},
                          {"harmful_sampled", trace.harmful_sampled}});
  return kExitOk;
}

// --- evaluate ---

struct EvaluateArgs {
  fs::path responses;
  fs::path truth;
  std::string out_format = "csv";
};

int run_evaluate(const GlobalOptions& global, const EvaluateArgs& args) {
  if (args.out_format != "csv" && args.out_format != "json")
    throw InvalidArgument("out-format must be csv or json");

  std::ifstream in(args.responses);
  if (!in) throw IoError("cannot open response log: " + args.responses.string());
  const std::vector<ResponseRecord> records = read_response_log(in);
  if (records.empty()) throw DataError("response log holds no records");

  const EvalReport report = compute_hor(records);
  fs::create_directories(global.out);

  fs::path report_path;
  if (args.out_format == "csv") {
    std::ostringstream os;
    write_report_csv(os, report);
    report_path = global.out / "report.csv";
    write_file_atomic(report_path, os.str());
  } else {
    std::ostringstream os;
    write_report_json(os, report);
    report_path = global.out / "report.json";
    write_file_atomic(report_path, os.str());
  }

  json outputs{{"report", report_path.string()}, {"records", records.size()}};

  if (!args.truth.empty()) {
    std::ifstream tin(args.truth);
    if (!tin) throw IoError("cannot open ground truth: " + args.truth.string());
    const std::vector<GroundTruth> truths = read_ground_truth(tin);

    const auto csv_quote = [](std::string_view s) {
      std::string out = "\"";
      for (char c : s) {
        out += c;
        if (c == '"') out += '"';
      }
      out += '"';
      return out;
    };

    std::ostringstream os;
    os << "video_id,model,attack,category,detected,time_start,time_end,temporal,iou,"
          "location,spatial,true_event,description\n";
    for (const ResponseRecord& rec : records) {
      const GroundTruth* truth = nullptr;
      for (const GroundTruth& t : truths)
        if (t.video_id == rec.video_id) {
          truth = &t;
          break;
        }
      if (!truth) continue;
      const DetailedFinding finding = parse_detailed_response(rec.response_text);
      const FindingGrade grade = grade_finding(finding, *truth);
      os << rec.video_id << ',' << rec.model_id << ',' << to_string(rec.attack) << ','
         << to_string(rec.category) << ',' << (finding.detected ? "true" : "false") << ',';
      if (finding.time_start) os << *finding.time_start;
      os << ',';
      if (finding.time_end) os << *finding.time_end;
      os << ',' << to_string(grade.temporal) << ',';
      if (grade.temporal == TemporalStatus::valid || grade.temporal == TemporalStatus::miss)
        os << grade.iou;
      os << ',' << (finding.location ? to_string(*finding.location) : "") << ','
         << to_string(grade.spatial) << ',' << csv_quote(truth->true_event) << ','
         << csv_quote(finding.description) << '\n';
    }
    const fs::path findings_path = global.out / "findings.csv";
    write_file_atomic(findings_path, os.str());
    outputs["findings"] = findings_path.string();
  }

  write_run_metadata(global, "evaluate",
                     json{{"out_format", args.out_format}},
                     json{{"responses", args.responses.string()},
                          {"truth", args.truth.empty() ? json() : json(args.truth.string())}},
                     std::move(outputs));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Content-injection attack synthesis and ingestion analysis for video LLMs"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--out", global.out, "Output directory")->capture_default_str();
  app.add_option("--workers", global.workers,
                 "Worker threads (0 = VIDOMIT_WORKERS env or hardware)");

  AttackArgs attack_args;
  CLI::App* attack = app.add_subcommand("attack", "Synthesize an attacked frame sequence");
  attack->require_subcommand(1);

  CLI::App* fra = attack->add_subcommand("fra", "Replace a random window with the clip");
  fra->add_option("--source", attack_args.source, "Source sequence manifest")->required();
  fra->add_option("--harmful", attack_args.harmful, "Injected clip manifest")->required();
  fra->add_option("--tr", attack_args.tr, "Replacement duration in seconds (> 1)")
      ->capture_default_str();

  CLI::App* ppa = attack->add_subcommand("ppa", "Paste the clip into a corner region");
  ppa->add_option("--source", attack_args.source, "Source sequence manifest")->required();
  ppa->add_option("--harmful", attack_args.harmful, "Injected clip manifest")->required();
  ppa->add_option("--eta", attack_args.etas,
                  "Patch scale relative to frame size, in (0,1); comma list sweeps")
      ->delimiter(',')
      ->capture_default_str();
  ppa->add_option("--anchor", attack_args.anchor,
                  "bottom-right, bottom-left, top-right or top-left")
      ->capture_default_str();

  CLI::App* toa = attack->add_subcommand("toa", "Blend the clip over every frame");
  toa->add_option("--source", attack_args.source, "Source sequence manifest")->required();
  toa->add_option("--harmful", attack_args.harmful, "Injected clip manifest")->required();
  toa->add_option("--alpha", attack_args.alphas, "Overlay opacity, in (0,1); comma list sweeps")
      ->delimiter(',')
      ->capture_default_str();

  for (CLI::App* sub : {fra, ppa, toa})
    sub->add_option("--category", attack_args.category, "violence, crime or pornography")
        ->capture_default_str();

  CoverageArgs coverage_args;
  CLI::App* coverage = app.add_subcommand(
      "simulate-coverage", "Capture distribution of a randomly placed segment");
  coverage->add_option("--total-frames", coverage_args.total_frames, "Video length in frames")
      ->capture_default_str();
  coverage->add_option("--samples", coverage_args.samples, "Sample counts N (comma list)")
      ->delimiter(',')
      ->capture_default_str();
  coverage->add_option("--seg-frac", coverage_args.seg_fracs,
                       "Segment fractions (comma list; default 0.01..0.10)")
      ->delimiter(',');
  coverage->add_option("--trials", coverage_args.trials, "Monte Carlo trials per cell")
      ->capture_default_str();
  coverage->add_option("--method", coverage_args.method, "exact or mc")->capture_default_str();

  IngestArgs ingest_args;
  CLI::App* ingest = app.add_subcommand(
      "simulate-ingest", "Run the modeled front-end over an attacked sequence");
  ingest->add_option("--video", ingest_args.video, "Attacked sequence manifest")->required();
  ingest->add_option("--mask", ingest_args.mask, "Harmful-frame mask JSON")->required();
  ingest->add_option("--clean", ingest_args.clean,
                     "Clean reference manifest (enables retention ratios)");
  ingest->add_option("--n-frames", ingest_args.n_frames, "Frames the front-end samples")
      ->capture_default_str();
  ingest->add_option("--grid", ingest_args.grid, "Token grid as RxC")->capture_default_str();
  ingest->add_option("--mode", ingest_args.mode, "avg or bilinear")->capture_default_str();

  EvaluateArgs evaluate_args;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Aggregate omission rates from a model-response log");
  evaluate->add_option("--responses", evaluate_args.responses, "Response log (JSONL)")
      ->required();
  evaluate->add_option("--truth", evaluate_args.truth,
                       "Ground-truth manifest (enables finding grades)");
  evaluate->add_option("--out-format", evaluate_args.out_format, "csv or json")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("usage", e.what());
    return kExitUsage;
  }

  if (global.workers > 0) set_worker_count(global.workers);

  try {
    if (fra->parsed()) return run_attack(global, AttackVariant::fra, attack_args);
    if (ppa->parsed()) return run_attack(global, AttackVariant::ppa, attack_args);
    if (toa->parsed()) return run_attack(global, AttackVariant::toa, attack_args);
    if (coverage->parsed()) return run_simulate_coverage(global, coverage_args);
    if (ingest->parsed()) return run_simulate_ingest(global, ingest_args);
    if (evaluate->parsed()) return run_evaluate(global, evaluate_args);
  } catch (const InvalidArgument& e) {
    emit_error("usage", e.what());
    return kExitUsage;
  } catch (const BudgetInfeasible& e) {
    emit_error("usage", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    // IoError, DataError, ShapeError, InconsistencyError
    emit_error("data", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return kExitData;
  }
  emit_error("usage", "no subcommand selected");
  return kExitUsage;
}
