#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "helpdesk/augment.hpp"
#include "helpdesk/autoreply.hpp"
#include "helpdesk/compare.hpp"
#include "helpdesk/corpus.hpp"
#include "helpdesk/dataset.hpp"
#include "helpdesk/error.hpp"
#include "helpdesk/labeling.hpp"
#include "helpdesk/metrics.hpp"
#include "helpdesk/model.hpp"
#include "helpdesk/pipeline_config.hpp"
#include "helpdesk/random.hpp"
#include "helpdesk/service.hpp"
#include "helpdesk/split.hpp"
#include "helpdesk/synth.hpp"

namespace helpdesk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPipelineError = 1;
inline constexpr int kExitUsage = 2;

/// Default artifact names inside the work directory.
namespace files {
inline constexpr const char* corpus = "corpus.jsonl";
inline constexpr const char* labeled = "labeled.jsonl";
inline constexpr const char* counts = "counts.json";
inline constexpr const char* train = "train.jsonl";
inline constexpr const char* test = "test.jsonl";
inline constexpr const char* augmented = "train_augmented.jsonl";
inline constexpr const char* model = "model.json";
inline constexpr const char* report_txt = "report.txt";
inline constexpr const char* report_csv = "report.csv";
inline constexpr const char* confusion_csv = "confusion.csv";
inline constexpr const char* confusion_txt = "confusion.txt";
inline constexpr const char* comparison = "compare.txt";
inline constexpr const char* sweep = "sweep.txt";
}  // namespace files

namespace detail {

struct Globals {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::string work = "helpdesk-work";
};

class Context {
 public:
  Context(const Globals& g, std::ostream& out, std::ostream& err)
      : config(resolve_pipeline_config(g.config_path)), work(g.work), out(out), err(err) {
    if (g.seed) config.seed = *g.seed;
  }

  std::string path_or(const std::string& given, const char* name) const {
    return given.empty() ? (std::filesystem::path(work) / name).string() : given;
  }

  void ensure_parent(const std::string& path) const {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
  }

  std::ofstream open_out(const std::string& path) const {
    ensure_parent(path);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path + "'");
    return f;
  }

  void wrote(const std::string& path) const { err << "wrote " << path << '\n'; }

  void write_text(const std::string& path, const std::string& text) const {
    auto f = open_out(path);
    f << text;
    if (!f) throw Error("failed writing '" + path + "'");
    wrote(path);
  }

  const std::vector<CategorySpec>& categories() {
    if (!categories_) categories_ = config.load_category_specs();
    return *categories_;
  }

  std::uint64_t stage_seed(std::uint64_t stream) const { return derive_seed(config.seed, stream); }

  PipelineConfig config;
  std::string work;
  std::ostream& out;
  std::ostream& err;

 private:
  std::optional<std::vector<CategorySpec>> categories_;
};

inline CorpusFormat format_for(const std::string& path, const std::string& requested) {
  if (requested == "csv") return CorpusFormat::csv;
  if (requested == "jsonl") return CorpusFormat::jsonl;
  if (!requested.empty()) throw InvalidArgument("unknown corpus format '" + requested + "'");
  return std::filesystem::path(path).extension() == ".csv" ? CorpusFormat::csv : CorpusFormat::jsonl;
}

inline std::vector<std::uint64_t> parse_u64_list(const std::string& s, const char* what) {
  std::vector<std::uint64_t> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument(std::string("bad ") + what + " list '" + s + "'");
    }
  }
  if (out.empty()) throw InvalidArgument(std::string("empty ") + what + " list");
  return out;
}

// Augmented records hold space-joined tokens; originals hold cleaned text.
inline std::vector<TrainingSample> samples_from_records(std::span<const DatasetRecord> records,
                                                       const TextPrep& prep) {
  std::vector<TrainingSample> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    TrainingSample s;
    s.id = r.id;
    s.category = r.category;
    s.augmented = r.augmented;
    s.source_id = r.source_id;
    if (r.augmented) {
      std::stringstream in(r.text);
      for (std::string t; in >> t;) s.tokens.push_back(t);
    } else {
      s.tokens = preprocess(r.text, prep);
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<DatasetRecord> records_from_samples(std::span<const TrainingSample> samples,
                                                       std::span<const DatasetRecord> originals) {
  std::map<std::string, const DatasetRecord*> by_id;
  for (const auto& r : originals) by_id[r.id] = &r;
  std::vector<DatasetRecord> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.augmented) {
      out.push_back({s.id, join_tokens(s.tokens), s.category, true, s.source_id});
    } else {
      out.push_back(*by_id.at(s.id));
    }
  }
  return out;
}

inline void write_records(Context& ctx, const std::string& path, std::span<const DatasetRecord> records) {
  auto f = ctx.open_out(path);
  write_dataset(f, records, ctx.categories());
  if (!f) throw Error("failed writing '" + path + "'");
  ctx.wrote(path);
}

inline std::vector<LabeledEmail> load_originals(Context& ctx, const std::string& path) {
  const auto records = load_dataset(path, ctx.categories());
  return originals_of(records);
}

inline void check_categories_match(const Classifier& model, std::span<const CategorySpec> categories) {
  if (category_names(model.categories()) != category_names(categories)) {
    throw InvalidArgument("model categories do not match the configured categories");
  }
}

// ---------------------------------------------------------------------------
// Subcommands.

struct SynthOptions {
  std::string output;
  std::string format;
  std::string counts;
  std::optional<double> noise;
  std::optional<double> keyword_probability;
};

inline int run_synth(Context& ctx, const SynthOptions& o) {
  auto spec = default_synth_spec(ctx.stage_seed(streams::synth));
  if (!o.counts.empty()) {
    spec.counts.clear();
    for (auto v : parse_u64_list(o.counts, "counts")) spec.counts.push_back(static_cast<std::size_t>(v));
  }
  if (o.noise) spec.noise_probability = *o.noise;
  if (o.keyword_probability) spec.keyword_probability = *o.keyword_probability;
  const auto synth = generate_corpus(spec, ctx.categories());
  std::vector<RawEmail> emails;
  for (const auto& s : synth) emails.push_back(s.email);
  const auto path = ctx.path_or(o.output, files::corpus);
  auto f = ctx.open_out(path);
  if (format_for(path, o.format) == CorpusFormat::csv) write_csv(f, emails);
  else write_jsonl(f, emails);
  if (!f) throw Error("failed writing '" + path + "'");
  ctx.wrote(path);
  ctx.out << emails.size() << " emails\n";
  return kExitOk;
}

struct LabelOptions {
  std::string input;
  std::string format;
  std::string output;
};

inline int run_label(Context& ctx, const LabelOptions& o) {
  const auto in = !o.input.empty() ? o.input : ctx.config.corpus ? *ctx.config.corpus : ctx.path_or("", files::corpus);
  const auto raw = ingest(in, format_for(in, o.format));
  const auto incoming = filter_incoming(raw);
  std::vector<CleanEmail> cleaned;
  for (const auto& e : incoming) {
    try {
      cleaned.push_back(clean(e));
    } catch (const InvalidArgument&) {
      // nothing left after cleaning; cannot match any keyword
    }
  }
  const auto& cats = ctx.categories();
  const auto labeled = build_labeled_corpus(cleaned, cats);
  const auto records = to_records(labeled.emails);
  write_records(ctx, ctx.path_or(o.output, files::labeled), records);

  nlohmann::ordered_json counts;
  for (std::size_t c = 0; c < cats.size(); ++c) counts["categories"][cats[c].name] = labeled.counts[c];
  counts["labeled"] = labeled.emails.size();
  counts["unlabeled"] = incoming.size() - labeled.emails.size();
  counts["incoming"] = incoming.size();
  const auto counts_path = (std::filesystem::path(ctx.path_or(o.output, files::labeled)).parent_path() /
                            files::counts).string();
  ctx.write_text(counts_path, counts.dump(2) + "\n");
  for (std::size_t c = 0; c < cats.size(); ++c) ctx.out << cats[c].name << ' ' << labeled.counts[c] << '\n';
  ctx.out << "unlabeled " << counts["unlabeled"].get<std::size_t>() << '\n';
  return kExitOk;
}

struct SplitOptions {
  std::string input;
  std::optional<double> ratio;
};

inline int run_split(Context& ctx, const SplitOptions& o) {
  const auto data = load_originals(ctx, ctx.path_or(o.input, files::labeled));
  const double ratio = o.ratio.value_or(ctx.config.train_ratio);
  const auto split = stratified_split(data, ctx.categories(), ratio, ctx.stage_seed(streams::split));
  write_records(ctx, ctx.path_or("", files::train), to_records(split.train));
  write_records(ctx, ctx.path_or("", files::test), to_records(split.test));
  ctx.out << "train " << split.train.size() << "\ntest " << split.test.size() << '\n';
  return kExitOk;
}

struct AugmentOptions {
  std::string input;
  std::string output;
  std::optional<std::size_t> target_per_class;
  std::optional<double> replace_fraction;
};

inline int run_augment(Context& ctx, const AugmentOptions& o) {
  auto cfg = ctx.config.augment;
  if (o.target_per_class) cfg.target_per_class = *o.target_per_class;
  if (o.replace_fraction) cfg.replace_fraction = *o.replace_fraction;
  cfg.seed = ctx.stage_seed(streams::augment);
  cfg.validate();
  const auto records = load_dataset(ctx.path_or(o.input, files::train), ctx.categories());
  const auto originals = to_records(originals_of(records));
  const auto samples = samples_from_records(originals, ctx.config.load_textprep());
  const auto augmented = rebalance(samples, ctx.categories(), cfg, ctx.config.load_lexicon());
  write_records(ctx, ctx.path_or(o.output, files::augmented), records_from_samples(augmented, originals));
  ctx.out << augmented.size() << " training samples (" << augmented.size() - originals.size()
          << " generated)\n";
  return kExitOk;
}

struct TrainOptions {
  std::string model = "nn";
  bool no_augment = false;
  std::string input;
  std::string output;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> hidden_units;
  std::optional<std::size_t> max_depth;
};

inline int run_train(Context& ctx, const TrainOptions& o) {
  const auto& cats = ctx.categories();
  const auto out_path = ctx.path_or(o.output, files::model);
  if (o.model == "tree") {
    const auto train = load_originals(ctx, ctx.path_or(o.input, files::train));
    const Classifier model(train_keyword_tree(train, cats, o.max_depth));
    ctx.ensure_parent(out_path);
    save_model(out_path, model);
    ctx.wrote(out_path);
    ctx.out << "tree: depth " << model.tree()->tree.depth() << ", " << model.tree()->tree.leaf_count()
            << " leaves, training accuracy " << model.tree()->training_accuracy << '\n';
    return kExitOk;
  }
  const auto in = ctx.path_or(o.input, o.no_augment ? files::train : files::augmented);
  auto records = load_dataset(in, cats);
  if (o.no_augment) records = to_records(originals_of(records));
  const auto prep = ctx.config.load_textprep();
  const auto samples = samples_from_records(records, prep);
  auto shape = ctx.config.shape;
  if (o.hidden_units) shape.hidden_units = *o.hidden_units;
  auto train_cfg = ctx.config.train;
  if (o.epochs) train_cfg.epochs = *o.epochs;
  train_cfg.seed = ctx.stage_seed(streams::train);
  const Classifier model(train_neural(samples, cats, prep, shape, train_cfg, ctx.config.minmax_scale));
  ctx.ensure_parent(out_path);
  save_model(out_path, model);
  ctx.wrote(out_path);
  const auto& last = model.neural()->net.history.back();
  ctx.out << "nn: " << samples.size() << " samples, vocabulary " << model.neural()->vocab.size()
          << ", final loss " << last.loss << ", training accuracy " << last.accuracy << '\n';
  return kExitOk;
}

struct EvalOptions {
  std::string model;
  std::string test;
  std::string output_dir;
};

inline int run_eval(Context& ctx, const EvalOptions& o) {
  const auto model = load_model(ctx.path_or(o.model, files::model));
  check_categories_match(model, ctx.categories());
  const auto test = load_originals(ctx, ctx.path_or(o.test, files::test));
  const auto cm = evaluate(model, test);
  const auto rep = report(cm);
  const auto dir = std::filesystem::path(o.output_dir.empty() ? ctx.work : o.output_dir);
  const auto text = format_report(rep);
  ctx.write_text((dir / files::report_txt).string(), text);
  ctx.write_text((dir / files::report_csv).string(), report_csv(rep));
  ctx.write_text((dir / files::confusion_csv).string(), render_confusion(cm, MatrixFormat::csv));
  ctx.write_text((dir / files::confusion_txt).string(), render_confusion(cm, MatrixFormat::ascii));
  ctx.out << text;
  return kExitOk;
}

struct CompareOptions {
  std::string input;
  std::string seeds;
  std::string output;
};

inline int run_compare(Context& ctx, const CompareOptions& o) {
  const auto data = load_originals(ctx, ctx.path_or(o.input, files::labeled));
  CompareConfig cfg;
  if (o.seeds.empty()) {
    cfg.seeds.clear();
    for (std::uint64_t k = 1; k <= 5; ++k) cfg.seeds.push_back(ctx.config.seed + k);
  } else {
    cfg.seeds = parse_u64_list(o.seeds, "seed");
  }
  cfg.train_ratio = ctx.config.train_ratio;
  cfg.shape = ctx.config.shape;
  cfg.train = ctx.config.train;
  cfg.minmax_scale = ctx.config.minmax_scale;
  cfg.augment = ctx.config.augment;
  const auto result = compare_runs(data, ctx.categories(), ctx.config.load_textprep(), ctx.config.load_lexicon(), cfg);
  const auto text = format_comparison(result);
  ctx.write_text(ctx.path_or(o.output, files::comparison), text);
  ctx.out << text;
  return kExitOk;
}

struct SweepOptions {
  std::string input;
  std::string hidden = "5,10,20,40,80";
  bool no_augment = false;
};

inline int run_sweep(Context& ctx, const SweepOptions& o) {
  const auto& cats = ctx.categories();
  const auto data = load_originals(ctx, ctx.path_or(o.input, files::labeled));
  const auto split = stratified_split(data, cats, ctx.config.train_ratio, ctx.stage_seed(streams::split));
  const auto prep = ctx.config.load_textprep();
  auto samples = to_training_samples(split.train, prep);
  if (!o.no_augment) {
    auto cfg = ctx.config.augment;
    cfg.seed = ctx.stage_seed(streams::augment);
    samples = rebalance(samples, cats, cfg, ctx.config.load_lexicon());
  }
  auto train_cfg = ctx.config.train;
  train_cfg.seed = ctx.stage_seed(streams::train);
  std::ostringstream text;
  char line[96];
  std::snprintf(line, sizeof line, "%8s %10s %10s\n", "hidden", "accuracy", "macro-F1");
  text << line;
  for (auto h : parse_u64_list(o.hidden, "hidden unit")) {
    auto shape = ctx.config.shape;
    shape.hidden_units = static_cast<std::size_t>(h);
    const Classifier model(train_neural(samples, cats, prep, shape, train_cfg, ctx.config.minmax_scale));
    const auto rep = report(evaluate(model, split.test));
    std::snprintf(line, sizeof line, "%8llu %10.4f %10.4f\n", static_cast<unsigned long long>(h), rep.accuracy,
                  rep.macro_f1);
    text << line;
  }
  ctx.write_text(ctx.path_or("", files::sweep), text.str());
  ctx.out << text.str();
  return kExitOk;
}

struct ApplyOptions {
  std::string input;
  std::string format;
  std::string model;
  std::string output;
  std::optional<double> threshold;
  std::string direction;
};

inline AutoResponder make_responder(Context& ctx, const ApplyOptions& o) {
  auto model = load_model(ctx.path_or(o.model, files::model));
  GatePolicy gate = ctx.config.gate;
  if (o.threshold) gate.threshold = *o.threshold;
  if (!o.direction.empty()) gate.direction = parse_gate_direction(o.direction);
  return AutoResponder(std::move(model), ctx.config.load_template_set(), gate);
}

// One JSON object per incoming email of the input file.
inline int run_apply(Context& ctx, const ApplyOptions& o, bool full_reply) {
  const auto responder = make_responder(ctx, o);
  const auto emails = filter_incoming(ingest(o.input, format_for(o.input, o.format)));
  std::ostringstream lines;
  for (const auto& e : emails) {
    ReplyDecision d;
    try {
      d = responder.compose_reply_raw(e.subject, e.body);
    } catch (const InvalidArgument& ex) {
      throw InvalidArgument("email '" + e.id + "': " + ex.what());
    }
    nlohmann::ordered_json j;
    j["id"] = e.id;
    const auto fields = full_reply ? reply_json(d) : classification_json(d);
    for (const auto& [k, v] : fields.items()) j[k] = v;
    lines << j.dump() << '\n';
  }
  if (!o.output.empty()) ctx.write_text(o.output, lines.str());
  ctx.out << lines.str();
  return kExitOk;
}

struct ServeOptions {
  std::string model;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t payload_limit = kDefaultPayloadLimit;
  std::optional<double> threshold;
};

inline int run_serve(Context& ctx, const ServeOptions& o) {
  ModelSlot slot;
  httplib::Server server;
  install_routes(server, slot, o.payload_limit);
  if (!server.bind_to_port(o.host, o.port)) throw Error("cannot bind " + o.host + ":" + std::to_string(o.port));
  std::thread listener([&] { server.listen_after_bind(); });
  ctx.err << "listening on " << o.host << ':' << o.port << '\n';
  try {
    ApplyOptions a;
    a.model = o.model;
    a.threshold = o.threshold;
    slot.install(std::make_shared<const AutoResponder>(make_responder(ctx, a)));
    ctx.err << "model loaded\n";
  } catch (...) {
    server.stop();
    listener.join();
    throw;
  }
  listener.join();
  return kExitOk;
}

}  // namespace detail

/// Runs the command line; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"IT helpdesk email classifier and auto-reply pipeline", "helpdesk"};
  app.require_subcommand(1);
  app.fallthrough();
  detail::Globals g;
  app.add_option("--config", g.config_path, "pipeline config file (default: $HELPDESK_CONFIG)");
  app.add_option("--seed", g.seed, "top-level seed for every stochastic stage");
  app.add_option("--work", g.work, "directory for default artifact paths")->capture_default_str();

  detail::SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate the synthetic helpdesk corpus");
  synth_cmd->add_option("-o,--output", synth.output, "corpus file (.jsonl or .csv)");
  synth_cmd->add_option("--format", synth.format, "jsonl or csv (default: from extension)");
  synth_cmd->add_option("--counts", synth.counts, "comma-separated emails per category");
  synth_cmd->add_option("--noise", synth.noise, "cross-talk keyword probability");
  synth_cmd->add_option("--keyword-probability", synth.keyword_probability, "own keyword probability");

  detail::LabelOptions label;
  auto* label_cmd = app.add_subcommand("label", "clean and keyword-label incoming emails");
  label_cmd->add_option("-i,--input", label.input, "raw corpus (.jsonl or .csv)");
  label_cmd->add_option("--format", label.format, "jsonl or csv (default: from extension)");
  label_cmd->add_option("-o,--output", label.output, "labeled dataset");

  detail::SplitOptions split;
  auto* split_cmd = app.add_subcommand("split", "stratified train/test split");
  split_cmd->add_option("-i,--input", split.input, "labeled dataset");
  split_cmd->add_option("--ratio", split.ratio, "training fraction");

  detail::AugmentOptions augment;
  auto* augment_cmd = app.add_subcommand("augment", "rebalance the training set with synonym variants");
  augment_cmd->add_option("-i,--input", augment.input, "training dataset");
  augment_cmd->add_option("-o,--output", augment.output, "augmented dataset");
  augment_cmd->add_option("--target-per-class", augment.target_per_class, "samples per category");
  augment_cmd->add_option("--replace-fraction", augment.replace_fraction, "share of eligible tokens replaced");

  detail::TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "train a classifier");
  train_cmd->add_option("--model", train.model, "nn or tree")
      ->check(CLI::IsMember({"nn", "tree"}))
      ->capture_default_str();
  train_cmd->add_flag("--no-augment", train.no_augment, "nn: train on the unaugmented split");
  train_cmd->add_option("-i,--input", train.input, "training dataset");
  train_cmd->add_option("-o,--output", train.output, "model artifact");
  train_cmd->add_option("--epochs", train.epochs, "nn epochs");
  train_cmd->add_option("--hidden-units", train.hidden_units, "nn hidden layer width");
  train_cmd->add_option("--max-depth", train.max_depth, "tree depth limit");

  detail::EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a model on the test split");
  eval_cmd->add_option("--model", eval.model, "model artifact");
  eval_cmd->add_option("--test", eval.test, "test dataset");
  eval_cmd->add_option("--output-dir", eval.output_dir, "directory for report and confusion files");

  detail::CompareOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "nn vs nn+augmentation vs decision tree over several seeds");
  compare_cmd->add_option("-i,--input", compare.input, "labeled dataset");
  compare_cmd->add_option("--seeds", compare.seeds, "comma-separated run seeds (default: seed+1..seed+5)");
  compare_cmd->add_option("-o,--output", compare.output, "comparison table");

  detail::SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "macro-F1 across hidden layer widths");
  sweep_cmd->add_option("-i,--input", sweep.input, "labeled dataset");
  sweep_cmd->add_option("--hidden", sweep.hidden, "comma-separated widths")->capture_default_str();
  sweep_cmd->add_flag("--no-augment", sweep.no_augment, "train on the unaugmented split");

  detail::ApplyOptions classify, reply;
  auto add_apply = [](CLI::App* cmd, detail::ApplyOptions& o) {
    cmd->add_option("file", o.input, "emails to process (.jsonl or .csv)")->required();
    cmd->add_option("--format", o.format, "jsonl or csv (default: from extension)");
    cmd->add_option("--model", o.model, "model artifact");
    cmd->add_option("-o,--output", o.output, "also write the JSON lines here");
    cmd->add_option("--threshold", o.threshold, "confidence gate");
    cmd->add_option("--gate-direction", o.direction, "confidence_at_least or error_at_least");
  };
  auto* classify_cmd = app.add_subcommand("classify", "classify emails");
  add_apply(classify_cmd, classify);
  auto* reply_cmd = app.add_subcommand("reply", "compose auto-replies");
  add_apply(reply_cmd, reply);

  detail::ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "HTTP service: /classify, /reply, /health");
  serve_cmd->add_option("--model", serve.model, "model artifact");
  serve_cmd->add_option("--host", serve.host, "bind address")->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "port")->capture_default_str();
  serve_cmd->add_option("--payload-limit", serve.payload_limit, "max request body bytes")->capture_default_str();
  serve_cmd->add_option("--threshold", serve.threshold, "confidence gate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  try {
    detail::Context ctx(g, out, err);
    if (*synth_cmd) return detail::run_synth(ctx, synth);
    if (*label_cmd) return detail::run_label(ctx, label);
    if (*split_cmd) return detail::run_split(ctx, split);
    if (*augment_cmd) return detail::run_augment(ctx, augment);
    if (*train_cmd) return detail::run_train(ctx, train);
    if (*eval_cmd) return detail::run_eval(ctx, eval);
    if (*compare_cmd) return detail::run_compare(ctx, compare);
    if (*sweep_cmd) return detail::run_sweep(ctx, sweep);
    if (*classify_cmd) return detail::run_apply(ctx, classify, false);
    if (*reply_cmd) return detail::run_apply(ctx, reply, true);
    if (*serve_cmd) return detail::run_serve(ctx, serve);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitPipelineError;
  }
  return kExitUsage;
}

}  // namespace helpdesk::cli
