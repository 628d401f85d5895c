#pragma once

// Command-line front end. Kept header-only so the test suite can drive it
// in-process through run_cli().

#include <CLI11.hpp>

#include <array>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gplp/gplp.hpp"

namespace gplp::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kNumericalFailure = 3 };

struct TrainFlags {
  std::string edges;
  double split = 0.8;
  std::uint64_t seed = 0;
  std::size_t epochs = 1000;
  std::size_t batch = 256;
  double lr = 0.001;
  double weight_decay = 0.0001;
  std::size_t layers = 3;
  std::size_t hidden = 64;
  std::size_t phi_depth = 1;
  std::string out = "gplp.ckpt";
  std::string history;
  std::string metrics;
  std::string train_out;
  std::string test_out;
  std::size_t kfold = 0;
  std::string rebalance = "on";
  std::string features = "bridge";
  std::string readout = "mean";
  std::size_t eval_every = 0;
  bool stratified = false;
  bool resample_each_epoch = false;
  bool verbose = false;
};

struct KnockoutFlags {
  std::uint64_t seed = 0;
  std::string scope = "train";
  std::string allow_empty = "on";
  std::string mode = "subgraph";
  std::string baseline;
  std::string report;
};

namespace detail {

// "dir/model.ckpt" + ".history.tsv" -> "dir/model.history.tsv"
inline std::string with_suffix(const std::string& path, const std::string& suffix) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash) && dot > 0;
  return (has_ext ? path.substr(0, dot) : path) + suffix;
}

// "metrics.tsv", 2 -> "metrics.fold2.tsv"
inline std::string fold_path(const std::string& path, std::size_t fold) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const std::string tag = ".fold" + std::to_string(fold);
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash) || dot == 0) return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
  return out;
}

template <class Writer>
void write_file(const std::string& path, Writer&& writer) {
  auto out = open_out(path);
  writer(out);
  out.flush();
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

inline EdgeList load_edges(const std::string& path) {
  auto in = open_in(path);
  auto el = parse_edge_list(in);
  // Validates indices and label conflicts up front.
  build_matrix(el.num_attackers, el.num_targets, el.records);
  return el;
}

inline FeatureMode parse_features(const std::string& s) {
  if (s == "role") return FeatureMode::RoleOnly;
  if (s == "degree") return FeatureMode::RoleAndDegree;
  return FeatureMode::RoleDegreeBridge;
}

inline ModelConfig model_config(const TrainFlags& f) {
  ModelConfig mc;
  mc.features = parse_features(f.features);
  mc.input_dim = feature_dim(mc.features);
  mc.hidden_dim = f.hidden;
  mc.num_layers = f.layers;
  mc.phi_depth = f.phi_depth;
  mc.readout = f.readout == "per-star" ? Readout::PerStarConcat : Readout::MeanAll;
  mc.validate();
  return mc;
}

inline TrainConfig train_config(const TrainFlags& f) {
  TrainConfig tc;
  tc.optimizer.lr = f.lr;
  tc.optimizer.weight_decay = f.weight_decay;
  tc.batch_size = f.batch;
  tc.epochs = f.epochs;
  tc.seed = f.seed;
  tc.eval_every = f.eval_every;
  tc.rebalance = f.rebalance == "on" ? RebalanceMode::Upsample : RebalanceMode::Off;
  tc.resample_each_epoch = f.resample_each_epoch;
  tc.validate();
  return tc;
}

inline MetricsReport mean_report(const std::vector<MetricsReport>& reports) {
  std::array<double, 8> acc{};
  for (const auto& r : reports) {
    auto v = r.values();
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
  }
  for (auto& a : acc) a /= static_cast<double>(reports.size());
  return MetricsReport::from_values(acc);
}

// One train/evaluate unit: training records, held-out records, and where to
// write the artifacts.
struct Job {
  std::vector<EdgeRecord> train;
  std::vector<EdgeRecord> test;
  std::string ckpt;
  std::string history;
  std::string metrics;
};

// Turns the clean training topology into what fit() should see. The returned
// matrix must outlive the fit call; `opts.test_matrix` may point at `clean`.
struct Variant {
  std::function<std::optional<InteractionMatrix>(const InteractionMatrix& clean)> train_matrix;
  std::function<FitOptions(const InteractionMatrix& clean)> options;
};

struct Protocol {
  const TrainFlags& flags;
  std::ostream& out;
  std::ostream& err;
};

// Runs the split or k-fold protocol and writes checkpoint, history and
// metrics for every job. Returns the (mean) held-out report when one exists.
inline std::optional<MetricsReport> run_protocol(const Protocol& p, const EdgeList& el, const Variant& variant,
                                                 const std::string& ckpt, const std::string& history,
                                                 const std::string& metrics) {
  const auto& f = p.flags;
  const auto mc = model_config(f);
  const auto tc = train_config(f);

  std::vector<Job> jobs;
  if (f.kfold > 0) {
    auto folds = kfold(el.records, f.kfold, f.seed);
    for (std::size_t i = 0; i < folds.size(); ++i)
      jobs.push_back({std::move(folds[i].train), std::move(folds[i].validation), fold_path(ckpt, i),
                      fold_path(history, i), fold_path(metrics, i)});
  } else {
    auto split = split_train_test(el.records, {f.split, f.seed, f.stratified});
    if (!f.train_out.empty())
      write_file(f.train_out, [&](std::ostream& os) { write_edge_list(os, el.num_attackers, el.num_targets, split.train); });
    if (!f.test_out.empty())
      write_file(f.test_out, [&](std::ostream& os) { write_edge_list(os, el.num_attackers, el.num_targets, split.test); });
    jobs.push_back({std::move(split.train), std::move(split.test), ckpt, history, metrics});
  }

  std::vector<MetricsReport> reports;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto& job = jobs[j];
    // Test pairs are built on training topology only.
    const auto clean = build_matrix(el.num_attackers, el.num_targets, job.train);
    std::optional<InteractionMatrix> altered;
    if (variant.train_matrix) altered = variant.train_matrix(clean);
    FitOptions opts = variant.options ? variant.options(clean) : FitOptions{};
    if (f.verbose)
      opts.on_epoch = [&, j](const EpochStats& s) {
        p.err << (jobs.size() > 1 ? "fold " + std::to_string(j) + " " : std::string()) << "epoch " << s.epoch
              << " loss " << s.train_loss;
        if (s.test_auroc) p.err << " auroc_h " << *s.test_auroc << " aupr_h " << *s.test_aupr;
        p.err << '\n';
      };
    auto res = fit(altered ? *altered : clean, job.train, job.test, mc, tc, opts);
    save_checkpoint(res.params, mc, job.ckpt);
    write_file(job.history, [&](std::ostream& os) { write_history(os, res.history); });
    if (res.final_report) {
      write_file(job.metrics, [&](std::ostream& os) { write_report(os, *res.final_report); });
      reports.push_back(*res.final_report);
    } else {
      p.err << "warning: held-out records lack one class; no metrics written for " << job.metrics << '\n';
    }
  }
  if (reports.empty()) return std::nullopt;
  auto summary = reports.size() == 1 ? reports.front() : mean_report(reports);
  if (jobs.size() > 1) write_file(metrics, [&](std::ostream& os) { write_report(os, summary); });
  return summary;
}

inline void print_summary(std::ostream& out, const char* label, const MetricsReport& r) {
  out << label << std::setprecision(6) << " auroc_harmonic " << r.auroc_harmonic << " aupr_harmonic "
      << r.aupr_harmonic << '\n';
}

inline void add_train_flags(CLI::App& cmd, TrainFlags& f) {
  cmd.add_option("--edges", f.edges, "Edge-list TSV (attacker target label)")->required();
  cmd.add_option("--split", f.split, "Training fraction of the records")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  cmd.add_option("--seed", f.seed, "Seed for splits, init and shuffling")->capture_default_str();
  cmd.add_option("--epochs", f.epochs, "Training epochs")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--batch", f.batch, "Mini-batch size")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--lr", f.lr, "Learning rate")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--weight-decay", f.weight_decay, "Decoupled weight decay")->check(CLI::NonNegativeNumber)->capture_default_str();
  cmd.add_option("--layers", f.layers, "Message-passing layers")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--hidden", f.hidden, "Hidden width")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--phi-depth", f.phi_depth, "Affine layers inside each update function")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--out", f.out, "Checkpoint path")->capture_default_str();
  cmd.add_option("--history", f.history, "History TSV (default: derived from --out)");
  cmd.add_option("--metrics", f.metrics, "Metrics TSV (default: derived from --out)");
  cmd.add_option("--train-out", f.train_out, "Write the training split as an edge list");
  cmd.add_option("--test-out", f.test_out, "Write the test split as an edge list");
  cmd.add_option("--kfold", f.kfold, "Run K-fold cross-validation instead of a single split")->check(CLI::Range(2, 1000));
  cmd.add_option("--rebalance", f.rebalance, "1:1 class rebalancing of training records")->check(CLI::IsMember({"on", "off"}))->capture_default_str();
  cmd.add_option("--features", f.features, "Node features")->check(CLI::IsMember({"role", "degree", "bridge"}))->capture_default_str();
  cmd.add_option("--readout", f.readout, "Graph readout")->check(CLI::IsMember({"mean", "per-star"}))->capture_default_str();
  cmd.add_option("--eval-every", f.eval_every, "Evaluate on held-out records every N epochs (0: last epoch only)")->capture_default_str();
  cmd.add_flag("--stratified", f.stratified, "Stratify the split by label");
  cmd.add_flag("--resample-each-epoch", f.resample_each_epoch, "Redraw the rebalanced multiset every epoch");
  cmd.add_flag("-v,--verbose", f.verbose, "Per-epoch progress on stderr");
}

inline void fill_derived_paths(TrainFlags& f) {
  if (f.history.empty()) f.history = with_suffix(f.out, ".history.tsv");
  if (f.metrics.empty()) f.metrics = with_suffix(f.out, ".metrics.tsv");
}

}  // namespace detail

inline int cmd_train(TrainFlags f, std::ostream& out, std::ostream& err) {
  detail::fill_derived_paths(f);
  auto el = detail::load_edges(f.edges);
  auto report = detail::run_protocol({f, out, err}, el, {}, f.out, f.history, f.metrics);
  if (report) detail::print_summary(out, f.kfold > 0 ? "mean" : "test", *report);
  return kOk;
}

inline int cmd_knockout_train(TrainFlags f, const KnockoutFlags& k, std::ostream& out, std::ostream& err) {
  detail::fill_derived_paths(f);
  const std::string report_path = k.report.empty() ? detail::with_suffix(f.out, ".degradation.tsv") : k.report;
  auto el = detail::load_edges(f.edges);

  MetricsReport clean;
  if (!k.baseline.empty()) {
    auto in = detail::open_in(k.baseline);
    clean = read_report(in);
  } else {
    auto base = detail::run_protocol({f, out, err}, el, {}, detail::with_suffix(f.out, ".baseline.ckpt"),
                                     detail::with_suffix(f.out, ".baseline.history.tsv"),
                                     detail::with_suffix(f.out, ".baseline.metrics.tsv"));
    if (!base) throw Error(ErrorKind::SingleClass, "clean baseline has no held-out report");
    clean = *base;
  }

  KnockoutConfig ko;
  ko.seed = k.seed;
  ko.scope = k.scope == "train-and-test" ? KnockoutScope::TrainAndTest : KnockoutScope::TrainOnly;
  ko.allow_empty = k.allow_empty == "on";
  ko.mode = k.mode == "global" ? KnockoutMode::GlobalMatrix : KnockoutMode::Subgraph;
  ko.validate();
  KnockoutConfig ko_test = ko;
  ko_test.seed = derive_seed(ko.seed, {stream::knockout, 1});

  detail::Variant variant;
  if (ko.mode == KnockoutMode::GlobalMatrix) {
    variant.train_matrix = [ko](const InteractionMatrix& m) { return std::optional(knockout_matrix(m, ko)); };
    // The training matrix is replaced; keep test pairs on clean topology unless
    // test-time knock-out was requested.
    variant.options = [ko](const InteractionMatrix& m) {
      FitOptions o;
      if (ko.scope == KnockoutScope::TrainOnly) o.test_matrix = &m;
      return o;
    };
  } else {
    variant.options = [ko, ko_test](const InteractionMatrix&) {
      FitOptions o;
      o.train_transform = [ko](const SubgraphPair& p, std::size_t i) { return knock_pair(p, ko, i); };
      if (ko.scope == KnockoutScope::TrainAndTest)
        o.test_transform = [ko_test](const SubgraphPair& p, std::size_t i) { return knock_pair(p, ko_test, i); };
      return o;
    };
  }

  auto degraded = detail::run_protocol({f, out, err}, el, variant, f.out, f.history, f.metrics);
  if (!degraded) throw Error(ErrorKind::SingleClass, "knock-out run has no held-out report");
  auto rows = degradation_report(clean, *degraded);
  detail::write_file(report_path, [&](std::ostream& os) { write_degradation_report(os, rows); });
  detail::print_summary(out, "clean", clean);
  detail::print_summary(out, "knockout", *degraded);
  return kOk;
}

struct EvaluateFlags {
  std::string ckpt, edges, test, out, scores, roc, pr;
};

inline ScoredSet read_scores(std::istream& in) {
  ScoredSet s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#' || line.rfind("attacker", 0) == 0) continue;
    std::istringstream ss(line);
    std::uint32_t a = 0, t = 0;
    int label = 0;
    double score = 0;
    if (!(ss >> a >> t >> label >> score) || (label != 0 && label != 1))
      throw ParseError(lineno, "expected 'attacker target label score'");
    s.scores.push_back(score);
    s.labels.push_back(label);
  }
  return s;
}

inline void write_scores(std::ostream& os, std::span<const EdgeRecord> records, const ScoredSet& s) {
  os << "attacker\ttarget\tlabel\tscore\n" << std::setprecision(9);
  for (std::size_t i = 0; i < records.size(); ++i)
    os << records[i].attacker << '\t' << records[i].target << '\t' << records[i].label << '\t' << s.scores[i] << '\n';
}

inline void write_metric_outputs(const ScoredSet& s, const std::string& out, const std::string& roc, const std::string& pr) {
  auto report = dual_class_report(s);
  detail::write_file(out, [&](std::ostream& os) { write_report(os, report); });
  if (!roc.empty()) detail::write_file(roc, [&](std::ostream& os) { write_curve(os, roc_curve(s), "fpr", "tpr"); });
  if (!pr.empty()) detail::write_file(pr, [&](std::ostream& os) { write_curve(os, pr_curve(s), "recall", "precision"); });
}

inline int cmd_evaluate(const EvaluateFlags& f, std::ostream& out) {
  auto [params, cfg] = load_checkpoint(f.ckpt);
  auto topo = detail::load_edges(f.edges);
  auto test = detail::load_edges(f.test);
  auto m = build_matrix(topo.num_attackers, topo.num_targets, topo.records);
  auto scored = score_records(params, cfg, m, test.records);
  if (!f.scores.empty()) detail::write_file(f.scores, [&](std::ostream& os) { write_scores(os, test.records, scored); });
  write_metric_outputs(scored, f.out, f.roc, f.pr);
  detail::print_summary(out, "test", dual_class_report(scored));
  return kOk;
}

struct PredictFlags {
  std::string ckpt, edges, pairs, out;
};

inline std::vector<std::pair<std::uint32_t, std::uint32_t>> read_pairs(std::istream& in) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    auto fields = gplp::detail::split_fields(line);
    std::pair<std::uint32_t, std::uint32_t> p;
    if (fields.size() != 2 || !gplp::detail::parse_int(fields[0], p.first) ||
        !gplp::detail::parse_int(fields[1], p.second))
      throw ParseError(lineno, "expected 'attacker target'");
    pairs.push_back(p);
  }
  return pairs;
}

inline int cmd_predict(const PredictFlags& f) {
  auto [params, cfg] = load_checkpoint(f.ckpt);
  auto topo = detail::load_edges(f.edges);
  auto m = build_matrix(topo.num_attackers, topo.num_targets, topo.records);
  auto in = detail::open_in(f.pairs);
  auto pairs = read_pairs(in);
  std::vector<FeaturizedGraph> graphs;
  graphs.reserve(pairs.size());
  for (auto [a, t] : pairs) graphs.push_back(featurize(extract_pair(m, a, t), m, cfg.features));
  auto probs = graphs.empty() ? std::vector<float>{} : predict(params, cfg, graphs);
  detail::write_file(f.out, [&](std::ostream& os) {
    os << std::setprecision(9);
    for (std::size_t i = 0; i < pairs.size(); ++i) os << pairs[i].first << '\t' << pairs[i].second << '\t' << probs[i] << '\n';
  });
  return kOk;
}

struct ReportFlags {
  std::string edges, role = "attacker", scores, clean, degraded, out, roc, pr;
};

inline int cmd_report(const ReportFlags& f, std::ostream& err) {
  const int modes = !f.edges.empty() + !f.scores.empty() + (!f.clean.empty() || !f.degraded.empty());
  if (modes != 1) {
    err << "report needs exactly one of --edges, --scores, or --clean with --degraded\n";
    return kUsage;
  }
  if (!f.edges.empty()) {
    auto el = detail::load_edges(f.edges);
    auto m = build_matrix(el.num_attackers, el.num_targets, el.records);
    auto hist = degree_histogram(m, f.role == "target" ? Role::Target : Role::Attacker);
    detail::write_file(f.out, [&](std::ostream& os) { write_degree_histogram(os, hist); });
  } else if (!f.scores.empty()) {
    auto in = detail::open_in(f.scores);
    write_metric_outputs(read_scores(in), f.out, f.roc, f.pr);
  } else {
    if (f.clean.empty() || f.degraded.empty()) {
      err << "--clean and --degraded go together\n";
      return kUsage;
    }
    auto ci = detail::open_in(f.clean);
    auto di = detail::open_in(f.degraded);
    auto rows = degradation_report(read_report(ci), read_report(di));
    detail::write_file(f.out, [&](std::ostream& os) { write_degradation_report(os, rows); });
  }
  return kOk;
}

struct SynthFlags {
  BlockModelSpec spec;
  std::string out = "-";
};

inline int cmd_synth(const SynthFlags& f, std::ostream& out) {
  auto el = generate_block_model(f.spec);
  if (f.out == "-") write_edge_list(out, el.num_attackers, el.num_targets, el.records);
  else detail::write_file(f.out, [&](std::ostream& os) { write_edge_list(os, el.num_attackers, el.num_targets, el.records); });
  return kOk;
}

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFinite:
    case ErrorKind::NonFiniteLoss: return kNumericalFailure;
    case ErrorKind::BadConfig:
    case ErrorKind::BadParameter:
    case ErrorKind::BadFoldCount: return kUsage;
    default: return kDataError;
  }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Graph-pair link prediction on bipartite interaction data", "gplp"};
  app.require_subcommand(1);

  TrainFlags train_flags;
  auto* train = app.add_subcommand("train", "Train on an edge list; write checkpoint, history and metrics");
  detail::add_train_flags(*train, train_flags);

  TrainFlags ko_train_flags;
  KnockoutFlags ko_flags;
  auto* ko = app.add_subcommand("knockout-train", "Train on knocked-out subgraphs and report degradation");
  detail::add_train_flags(*ko, ko_train_flags);
  ko->add_option("--ko-seed", ko_flags.seed, "Knock-out seed")->capture_default_str();
  ko->add_option("--ko-scope", ko_flags.scope, "Knock out training pairs only, or test pairs too")
      ->check(CLI::IsMember({"train", "train-and-test"}))->capture_default_str();
  ko->add_option("--ko-allow-empty", ko_flags.allow_empty, "Allow a star to lose every leaf")
      ->check(CLI::IsMember({"on", "off"}))->capture_default_str();
  ko->add_option("--ko-mode", ko_flags.mode, "Knock each extracted star, or the matrix once")
      ->check(CLI::IsMember({"subgraph", "global"}))->capture_default_str();
  ko->add_option("--baseline", ko_flags.baseline, "Clean metrics TSV; trains a fresh baseline when absent");
  ko->add_option("--report", ko_flags.report, "Degradation TSV (default: derived from --out)");

  EvaluateFlags eval_flags;
  auto* evaluate = app.add_subcommand("evaluate", "Score labelled records with a checkpoint");
  evaluate->add_option("--ckpt", eval_flags.ckpt, "Checkpoint")->required();
  evaluate->add_option("--edges", eval_flags.edges, "Edge list providing the topology")->required();
  evaluate->add_option("--test", eval_flags.test, "Edge list of records to score")->required();
  evaluate->add_option("--out", eval_flags.out, "Metrics TSV")->required();
  evaluate->add_option("--scores", eval_flags.scores, "Per-record scores TSV");
  evaluate->add_option("--roc", eval_flags.roc, "ROC curve TSV");
  evaluate->add_option("--pr", eval_flags.pr, "Precision-recall curve TSV");

  PredictFlags predict_flags;
  auto* pred = app.add_subcommand("predict", "Link probabilities for (attacker, target) pairs");
  pred->add_option("--ckpt", predict_flags.ckpt, "Checkpoint")->required();
  pred->add_option("--edges", predict_flags.edges, "Edge list providing the topology")->required();
  pred->add_option("--pairs", predict_flags.pairs, "Pairs file, 'attacker target' per line")->required();
  pred->add_option("--out", predict_flags.out, "Output TSV (attacker target probability)")->required();

  ReportFlags report_flags;
  auto* report = app.add_subcommand("report", "Degree histogram, metrics from scores, or degradation table");
  report->add_option("--edges", report_flags.edges, "Edge list for a degree histogram");
  report->add_option("--role", report_flags.role, "Histogram side")->check(CLI::IsMember({"attacker", "target"}))->capture_default_str();
  report->add_option("--scores", report_flags.scores, "Scores TSV (attacker target label score)");
  report->add_option("--roc", report_flags.roc, "ROC curve TSV (with --scores)");
  report->add_option("--pr", report_flags.pr, "Precision-recall curve TSV (with --scores)");
  report->add_option("--clean", report_flags.clean, "Clean metrics TSV");
  report->add_option("--degraded", report_flags.degraded, "Degraded metrics TSV");
  report->add_option("--out", report_flags.out, "Output TSV")->required();

  SynthFlags synth_flags;
  auto* synth = app.add_subcommand("synth", "Planted co-block benchmark edge list");
  synth->add_option("--attackers", synth_flags.spec.num_attackers, "Attackers M")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--targets", synth_flags.spec.num_targets, "Targets N")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--blocks", synth_flags.spec.blocks, "Co-blocks B")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--p-in", synth_flags.spec.p_in, "Within-block link probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  synth->add_option("--p-out", synth_flags.spec.p_out, "Cross-block link probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  synth->add_option("--neg-ratio", synth_flags.spec.neg_ratio, "Observed negatives per positive")->check(CLI::NonNegativeNumber)->capture_default_str();
  synth->add_option("--seed", synth_flags.spec.seed, "Seed")->capture_default_str();
  synth->add_option("--out", synth_flags.out, "Output path, '-' for stdout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*train) return cmd_train(train_flags, out, err);
    if (*ko) return cmd_knockout_train(ko_train_flags, ko_flags, out, err);
    if (*evaluate) return cmd_evaluate(eval_flags, out);
    if (*pred) return cmd_predict(predict_flags);
    if (*report) return cmd_report(report_flags, err);
    if (*synth) return cmd_synth(synth_flags, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

}  // namespace gplp::cli
