#include "ivteval/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ivteval/error.hpp"
#include "ivteval/evaluate.hpp"
#include "ivteval/io.hpp"
#include "ivteval/splits.hpp"

namespace ivt {
namespace fs = std::filesystem;

namespace {

// Argument-level misuse; maps to kExitUsage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int parse_int(std::string_view text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kMalformed,
                "bad integer '" + std::string(text) + "'");
  }
  return value;
}

void emit(const std::string& text, const std::string& out_path,
          std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    write_text(out_path, text);
  }
}

SplitManifest resolve_split(const std::string& name_or_path) {
  for (std::string_view builtin : builtin_split_names()) {
    if (builtin == name_or_path) return builtin_split(name_or_path);
  }
  if (fs::exists(name_or_path)) return read_manifest(name_or_path);
  throw UsageError("unknown split '" + name_or_path +
                   "' (expected a builtin name or a manifest file)");
}

struct EvalArgs {
  std::string gt_dir;
  std::string pred_dir;
  std::string split;
  std::optional<int> fold;
  std::optional<std::string> partition;
  std::string mask;
  std::string components = "i,v,t,iv,it,ivt";
  std::string map_path;
  std::string out;
  double theta = 0.5;
  bool global = false;
  bool require_target = false;
  bool no_tas = false;
  bool with_recognition = false;
};

void add_eval_options(CLI::App* cmd, EvalArgs& a) {
  cmd->add_option("--gt", a.gt_dir, "Directory of groundtruth documents")
      ->required();
  cmd->add_option("--pred", a.pred_dir, "Directory of prediction documents")
      ->required();
  cmd->add_option("--split", a.split, "Builtin split name or manifest file");
  cmd->add_option("--fold", a.fold, "Cross-validation fold to evaluate");
  cmd->add_option("--partition", a.partition, "Partition to evaluate");
  cmd->add_option("--mask", a.mask, "Triplet ids to exclude, e.g. 94-99");
  cmd->add_option("--map", a.map_path, "Component map document");
  cmd->add_option("--out", a.out, "Report path (default: stdout)");
  cmd->add_flag("--global", a.global, "Pool frames of all videos");
}

Selection build_selection(const EvalArgs& a) {
  if (a.fold && a.partition) {
    throw UsageError("--fold and --partition are mutually exclusive");
  }
  if (a.split.empty()) {
    if (a.fold || a.partition) {
      throw UsageError("--fold/--partition need --split");
    }
    Selection sel{"none", "all", std::nullopt, {}};
    if (!fs::is_directory(a.gt_dir)) {
      throw Error(ErrorCode::kIo, "not a directory: " + a.gt_dir);
    }
    for (const auto& entry : fs::directory_iterator(a.gt_dir)) {
      if (entry.path().extension() == ".json") {
        sel.videos.push_back(entry.path().stem().string());
      }
    }
    std::sort(sel.videos.begin(), sel.videos.end());
    return sel;
  }
  const SplitManifest manifest = resolve_split(a.split);
  std::optional<std::string> partition = a.partition;
  if (a.fold && !manifest.is_cross_validation()) {
    throw UsageError("split '" + manifest.name + "' has no folds");
  }
  if (!a.fold && !partition) {
    if (manifest.find("test") == nullptr) {
      throw UsageError("split '" + manifest.name +
                       "' needs --fold or --partition");
    }
    partition = "test";
  }
  if (partition && manifest.find(*partition) == nullptr) {
    throw UsageError("split '" + manifest.name + "' has no partition '" +
                     *partition + "'");
  }
  return select_videos(manifest, a.fold, partition);
}

int run_evaluation(const EvalArgs& a, bool detection_mode, std::ostream& out) {
  const ComponentMap map =
      a.map_path.empty() ? ComponentMap::cholect50()
                         : ComponentMap::load(a.map_path);
  const Selection selection = build_selection(a);

  EvaluationOptions options;
  options.theta = a.theta;
  options.aggregation = a.global ? Aggregation::kGlobal : Aggregation::kPerVideo;
  if (!a.mask.empty()) {
    options.class_mask = parse_id_list(a.mask);
    for (int id : options.class_mask) {
      if (id < 0 || id >= map.n_triplets()) {
        throw UsageError("--mask id " + std::to_string(id) + " out of range");
      }
    }
  }
  options.components.clear();
  std::stringstream list(a.components);
  for (std::string item; std::getline(list, item, ',');) {
    const auto kind = parse_component(item);
    if (!kind) throw UsageError("unknown component '" + item + "'");
    if (std::find(options.components.begin(), options.components.end(),
                  *kind) == options.components.end()) {
      options.components.push_back(*kind);
    }
  }
  if (detection_mode) {
    options.recognition = a.with_recognition;
    options.detection = true;
    options.tas = !a.no_tas;
    options.require_target = a.require_target;
  }

  GroundTruthSet gt;
  PredictionSet pred;
  for (const std::string& video : selection.videos) {
    const fs::path gt_path = fs::path(a.gt_dir) / (video + ".json");
    const fs::path pred_path = fs::path(a.pred_dir) / (video + ".json");
    if (!fs::exists(gt_path)) {
      throw Error(ErrorCode::kMissingVideo, "missing groundtruth " +
                                                gt_path.string());
    }
    if (!fs::exists(pred_path)) {
      throw Error(ErrorCode::kMissingVideo, "missing predictions " +
                                                pred_path.string());
    }
    VideoGroundTruth g = read_groundtruth(gt_path, map);
    VideoPredictions p = read_predictions(pred_path, map);
    if (g.video != video || p.video != video) {
      throw Error(ErrorCode::kMalformed,
                  "document for " + video + " names a different video");
    }
    gt.emplace(video, std::move(g));
    pred.emplace(video, std::move(p));
  }

  const EvaluationReport report = evaluate(map, gt, pred, selection, options);
  emit(dump_json(report_to_json(report)), a.out, out);
  return kExitOk;
}

std::string describe_manifest(const SplitManifest& m) {
  std::ostringstream s;
  s << m.name << '\n';
  for (const Partition& p : m.partitions) {
    s << "  " << p.name << " (" << p.videos.size() << "):";
    for (const std::string& v : p.videos) s << ' ' << v;
    s << '\n';
  }
  return s.str();
}

std::vector<VideoDuration> read_durations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::vector<VideoDuration> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::kMalformed, "durations: expected video,seconds");
    }
    const std::string video = line.substr(0, comma);
    const std::string seconds = line.substr(comma + 1);
    char* end = nullptr;
    const double value = std::strtod(seconds.c_str(), &end);
    if (end == seconds.c_str() || *end != '\0') {
      if (first) {  // header row
        first = false;
        continue;
      }
      throw Error(ErrorCode::kMalformed, "durations: bad seconds '" + seconds + "'");
    }
    first = false;
    out.push_back({video, value});
  }
  return out;
}

// Metric names in report order.
std::vector<std::pair<std::string, double>> report_metrics(
    const EvaluationReport& r) {
  std::vector<std::pair<std::string, double>> metrics;
  auto upper = [](std::string_view s) {
    std::string u(s);
    for (char& c : u) c = static_cast<char>(std::toupper(c));
    return u;
  };
  for (const auto& [kind, ap] : r.recognition) {
    if (ap.mean) metrics.emplace_back("AP_" + upper(to_string(kind)), 100.0 * *ap.mean);
  }
  if (r.instrument_detection && r.instrument_detection->ap.mean) {
    metrics.emplace_back("DET_I", 100.0 * *r.instrument_detection->ap.mean);
  }
  if (r.triplet_detection && r.triplet_detection->ap.mean) {
    metrics.emplace_back("DET_IVT", 100.0 * *r.triplet_detection->ap.mean);
  }
  if (r.tas) {
    for (TasCategory c : kAllTasCategories) {
      metrics.emplace_back("TAS_" + std::string(to_string(c)), r.tas->percentage(c));
    }
  }
  return metrics;
}

int run_aggregate(const std::vector<std::string>& paths,
                  const std::string& format, const std::string& out_path,
                  std::ostream& out) {
  if (paths.size() < 2) throw UsageError("aggregate needs at least two reports");
  std::vector<FoldResult> folds;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const EvaluationReport r = report_from_json(read_json(paths[i]));
    FoldResult fold;
    fold.fold_index = r.selection.fold.value_or(static_cast<int>(i) + 1);
    const auto metrics = report_metrics(r);
    if (i == 0) {
      for (const auto& [name, value] : metrics) order.push_back(name);
    }
    for (const auto& [name, value] : metrics) fold.metrics[name] = value;
    folds.push_back(std::move(fold));
  }
  const auto summary = aggregate_folds(folds);

  std::string text;
  if (format == "table") {
    std::ostringstream s;
    s << "metric        mean\xC2\xB1std   folds\n";
    for (const std::string& name : order) {
      const FoldSummary& f = summary.at(name);
      std::string cell = f.formatted();
      s << name << std::string(name.size() < 14 ? 14 - name.size() : 1, ' ')
        << cell;
      // "±" occupies two bytes but one column.
      s << std::string(cell.size() < 12 ? 12 - cell.size() : 1, ' ');
      for (double v : f.values) {
        char buf[32];
        std::snprintf(buf, sizeof buf, " %.1f", v);
        s << buf;
      }
      s << '\n';
    }
    text = s.str();
  } else {
    Json metrics = Json::object();
    for (const std::string& name : order) {
      const FoldSummary& f = summary.at(name);
      Json values = Json::array();
      for (double v : f.values) values.push_back(round4(v));
      metrics[name] = {{"mean", round4(f.mean)},
                       {"std", round4(f.std)},
                       {"formatted", f.formatted()},
                       {"values", std::move(values)}};
    }
    Json fold_ids = Json::array();
    for (const FoldResult& f : folds) fold_ids.push_back(f.fold_index);
    Json doc = {{"tool", kToolName},
                {"version", kToolVersion},
                {"std", "population"},
                {"folds", std::move(fold_ids)},
                {"metrics", std::move(metrics)}};
    text = dump_json(doc);
  }
  emit(text, out_path, out);
  return kExitOk;
}

}  // namespace

std::set<int> parse_id_list(std::string_view text) {
  std::set<int> ids;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item = text.substr(
        start, comma == std::string_view::npos ? std::string_view::npos
                                               : comma - start);
    if (item.empty()) {
      throw Error(ErrorCode::kMalformed, "empty entry in id list");
    }
    const std::size_t dash = item.find('-', 1);
    if (dash == std::string_view::npos) {
      ids.insert(parse_int(item));
    } else {
      const int lo = parse_int(item.substr(0, dash));
      const int hi = parse_int(item.substr(dash + 1));
      if (lo > hi) throw Error(ErrorCode::kMalformed, "descending id range");
      for (int id = lo; id <= hi; ++id) ids.insert(id);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return ids;
}

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Surgical action-triplet evaluation", "ivteval"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  EvalArgs rec_args;
  auto* recognize = app.add_subcommand("recognize", "Triplet recognition AP");
  add_eval_options(recognize, rec_args);
  recognize->add_option("--components", rec_args.components,
                        "Comma-separated subset of i,v,t,iv,it,ivt");

  EvalArgs det_args;
  auto* detect = app.add_subcommand(
      "detect", "Detection AP and triplet association scores");
  add_eval_options(detect, det_args);
  detect->add_option("--theta", det_args.theta, "IoU threshold")
      ->check(CLI::Range(0.0, 1.0));
  detect->add_flag("--require-target", det_args.require_target,
                   "Also require target-box overlap");
  detect->add_flag("--no-tas", det_args.no_tas, "Skip association scores");
  detect->add_flag("--with-recognition", det_args.with_recognition,
                   "Also report recognition AP");
  detect->add_option("--components", det_args.components,
                     "Recognition components with --with-recognition");

  auto* splits = app.add_subcommand("splits", "Dataset split manifests");
  splits->require_subcommand(1);
  std::string split_name;
  std::string split_out;
  auto* show = splits->add_subcommand("show", "Print a split");
  show->add_option("name", split_name, "Builtin name or manifest file")
      ->required();
  auto* dump = splits->add_subcommand("dump", "Write a split as JSON");
  dump->add_option("name", split_name, "Builtin name or manifest file")
      ->required();
  dump->add_option("--out", split_out, "Output path (default: stdout)");

  std::string durations;
  int k = 5;
  std::uint64_t seed = 0;
  std::string make_name = "generated-cv";
  auto* make = splits->add_subcommand(
      "make", "Generate duration-stratified cross-validation folds");
  make->add_option("--durations", durations, "CSV of video,seconds")
      ->required();
  make->add_option("--k", k, "Fold count")->check(CLI::PositiveNumber);
  make->add_option("--seed", seed, "Shuffle seed");
  make->add_option("--name", make_name, "Manifest name");
  make->add_option("--out", split_out, "Output path (default: stdout)");

  std::string dataset = "cholect50";
  auto* validate = splits->add_subcommand("validate", "Validate a manifest");
  validate->add_option("name", split_name, "Builtin name or manifest file")
      ->required();
  validate->add_option("--dataset", dataset, "cholect45 or cholect50")
      ->check(CLI::IsMember({"cholect45", "cholect50"}));

  std::vector<std::string> report_paths;
  std::string agg_format = "json";
  std::string agg_out;
  auto* aggregate = app.add_subcommand(
      "aggregate", "Mean and std of fold reports");
  aggregate->add_option("reports", report_paths, "Fold report files")
      ->required();
  aggregate->add_option("--format", agg_format, "json or table")
      ->check(CLI::IsMember({"json", "table"}));
  aggregate->add_option("--out", agg_out, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (recognize->parsed()) return run_evaluation(rec_args, false, out);
    if (detect->parsed()) return run_evaluation(det_args, true, out);
    if (aggregate->parsed()) {
      return run_aggregate(report_paths, agg_format, agg_out, out);
    }
    if (show->parsed()) {
      out << describe_manifest(resolve_split(split_name));
      return kExitOk;
    }
    if (dump->parsed()) {
      emit(dump_json(manifest_to_json(resolve_split(split_name))), split_out,
           out);
      return kExitOk;
    }
    if (make->parsed()) {
      const auto videos = read_durations(durations);
      emit(dump_json(manifest_to_json(
               generate_cv_folds(videos, k, k, seed, make_name))),
           split_out, out);
      return kExitOk;
    }
    if (validate->parsed()) {
      const ValidationReport report = validate_manifest(
          resolve_split(split_name),
          dataset == "cholect45" ? cholect45_stats() : cholect50_stats());
      for (const ValidationCheck& c : report.checks) {
        out << (c.passed ? "pass " : "FAIL ") << c.name << ": " << c.detail
            << '\n';
      }
      return report.passed() ? kExitOk : kExitValidation;
    }
  } catch (const UsageError& e) {
    err << "ivteval: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "ivteval: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "ivteval: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace ivt
