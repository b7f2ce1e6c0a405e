#include "nounforge/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <thread>

#include "nounforge/analyzer.hpp"
#include "nounforge/errors.hpp"
#include "nounforge/evaluation.hpp"
#include "nounforge/lexicon.hpp"
#include "nounforge/model.hpp"
#include "text_util.hpp"

namespace nounforge::cli {

std::string thesaurus_sidecar(const std::string& model_path) { return model_path + ".thesaurus"; }

namespace {

namespace fs = std::filesystem;

struct TrainArgs {
  std::string thesaurus;
  std::string pairs;
  std::string corpus;
  double epsilon = 1e-6;
  std::string out;
  unsigned shards = std::max(1u, std::thread::hardware_concurrency());
};

struct ModelArgs {
  std::string model;
  std::string thesaurus;  // defaults to the model's sidecar
};

struct AnalyzeArgs {
  ModelArgs model;
  std::size_t top_k = 5;
  std::string unknown_words = "singleton";
  int max_words = 8;
  bool class_constant = false;
};

struct EvalArgs {
  ModelArgs model;
  std::string gold;
  std::string unknown_words = "singleton";
};

struct InspectArgs {
  ModelArgs model;
  std::string head;
  std::size_t top_k = 10;
};

std::ifstream open_input(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, std::string("cannot open ") + what + ": " + path);
  return in;
}

// Writes through a temporary so a failed run never leaves a partial file.
void write_file(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError(0, "cannot write " + path);
    out << contents;
    if (!out.flush()) throw ParseError(0, "cannot write " + path);
  }
  fs::rename(tmp, path);
}

AssociationModel open_model(const ModelArgs& args) {
  const std::string thesaurus_path = args.thesaurus.empty() ? thesaurus_sidecar(args.model) : args.thesaurus;
  auto thesaurus = std::make_shared<const Thesaurus>(load_thesaurus_file(thesaurus_path));
  auto in = open_input(args.model, "model file");
  return load_model(in, std::move(thesaurus));
}

UnknownWordPolicy policy_from(const std::string& name) {
  return name == "error" ? UnknownWordPolicy::kError : UnknownWordPolicy::kSingleton;
}

int cmd_train(const TrainArgs& args, std::ostream& out) {
  auto thesaurus = std::make_shared<const Thesaurus>(load_thesaurus_file(args.thesaurus));
  PairCounts counts;
  if (!args.pairs.empty()) {
    auto in = open_input(args.pairs, "pair-count file");
    counts = ingest_pair_counts(in);
  } else {
    auto in = open_input(args.corpus, "corpus file");
    counts = count_corpus(in, *thesaurus, args.shards);
  }
  AssociationModel model = train(counts, thesaurus, args.epsilon);

  std::ostringstream serialized;
  save_model(model, serialized);
  write_file(thesaurus_sidecar(args.out), thesaurus->dump());
  write_file(args.out, serialized.str());

  nlohmann::ordered_json summary;
  summary["categories"] = thesaurus->class_count();
  summary["words"] = thesaurus->word_count();
  summary["pairs_ingested"] = counts.size();
  summary["pair_tokens"] = counts.total();
  summary["nonzero_cells"] = model.stored_cell_count();
  summary["epsilon"] = model.epsilon();
  summary["thesaurus_digest"] = thesaurus->digest();
  summary["model"] = args.out;
  out << summary.dump() << '\n';
  return kSuccess;
}

int cmd_analyze(const AnalyzeArgs& args, std::istream& in, std::ostream& out) {
  const AssociationModel model = open_model(args.model);
  AnalyzeOptions options;
  options.unknown_words = policy_from(args.unknown_words);
  options.max_words = args.max_words;
  options.include_class_constant = args.class_constant;

  bool failed = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = detail::strip_cr(raw);
    if (detail::is_skippable(line)) continue;
    auto words = detail::split_whitespace(line);
    nlohmann::ordered_json record;
    try {
      if (words.size() < 2) throw DomainError("a compound needs at least 2 words");
      Compound compound = Compound::resolve(model.thesaurus(), words, options.unknown_words);
      auto ranked = analyze(model, compound, options);
      record = analysis_record(compound.words(), ranked, args.top_k);
    } catch (const std::exception& e) {
      failed = true;
      record["words"] = words;
      record["error"] = e.what();
    }
    nlohmann::ordered_json tagged;
    tagged["line"] = line_no;
    tagged.update(record);
    out << tagged.dump() << '\n';
  }
  return failed ? kInputError : kSuccess;
}

int cmd_eval(const EvalArgs& args, std::ostream& out) {
  const AssociationModel model = open_model(args.model);
  auto in = open_input(args.gold, "gold file");
  GoldSet gold = load_gold(in);
  AnalyzeOptions options;
  options.unknown_words = policy_from(args.unknown_words);
  EvalReport report = evaluate(model, gold, options);
  out << to_json(report).dump(2) << '\n';
  return report.errors.empty() ? kSuccess : kInputError;
}

int cmd_inspect(const InspectArgs& args, std::ostream& out) {
  const AssociationModel model = open_model(args.model);
  const auto& t = model.thesaurus();
  auto head = t.find_category(args.head);
  if (!head) throw DomainError("unknown category: " + args.head);

  auto dist = model.modifier_distribution(*head);
  std::vector<CategoryIndex> order(dist.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<CategoryIndex>(i);
  std::stable_sort(order.begin(), order.end(), [&](CategoryIndex a, CategoryIndex b) { return dist[a] > dist[b]; });

  nlohmann::ordered_json j;
  j["head"] = args.head;
  j["modifiers"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < order.size() && i < args.top_k; ++i) {
    j["modifiers"].push_back({{"category", t.category(order[i]).id}, {"probability", dist[order[i]]}});
  }
  out << j.dump(2) << '\n';
  return kSuccess;
}

void add_model_options(CLI::App* sub, ModelArgs& args) {
  sub->add_option("--model", args.model, "Model file written by `train`")->required();
  sub->add_option("--thesaurus", args.thesaurus, "Thesaurus file (default: <model>.thesaurus)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bracket compound nouns with a category-association model", "nounforge"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Estimate association parameters from pair counts");
  train_cmd->add_option("--thesaurus", train_args.thesaurus, "Thesaurus file (<category>\\t<word>)")->required();
  auto* pairs = train_cmd->add_option("--pairs", train_args.pairs, "Pair-count file (<w1>\\t<w2>\\t<count>)");
  auto* corpus = train_cmd->add_option("--corpus", train_args.corpus, "Raw text corpus, one sentence per line");
  pairs->excludes(corpus);
  corpus->excludes(pairs);
  train_cmd->add_option("--epsilon", train_args.epsilon, "Additive smoothing per category cell")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--shards", train_args.shards, "Concurrent corpus shards")->check(CLI::PositiveNumber);
  train_cmd->add_option("--out", train_args.out, "Model output path")->required();

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "Rank bracketings of compounds read from standard input");
  add_model_options(analyze_cmd, analyze_args.model);
  analyze_cmd->add_option("--top-k", analyze_args.top_k, "Analyses reported per compound")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--unknown-words", analyze_args.unknown_words, "Unknown-word policy")
      ->check(CLI::IsMember({"error", "singleton"}));
  analyze_cmd->add_option("--max-words", analyze_args.max_words, "Longest compound accepted")
      ->check(CLI::Range(1, 12));
  analyze_cmd->add_flag("--class-constant", analyze_args.class_constant, "Multiply scores by |S|^n");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Score the model against gold bracketings");
  add_model_options(eval_cmd, eval_args.model);
  eval_cmd->add_option("--gold", eval_args.gold, "Gold file (<words>\\t<bracket|L|R>)")->required();
  eval_cmd->add_option("--unknown-words", eval_args.unknown_words, "Unknown-word policy")
      ->check(CLI::IsMember({"error", "singleton"}));

  InspectArgs inspect_args;
  auto* inspect_cmd = app.add_subcommand("inspect", "List the strongest modifier categories of a head");
  add_model_options(inspect_cmd, inspect_args.model);
  inspect_cmd->add_option("--head", inspect_args.head, "Head category label")->required();
  inspect_cmd->add_option("--top-k", inspect_args.top_k, "Modifiers listed")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (train_cmd->parsed() && train_args.pairs.empty() && train_args.corpus.empty()) {
      throw CLI::RequiredError("--pairs or --corpus");
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kInputError;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(train_args, out);
    if (analyze_cmd->parsed()) return cmd_analyze(analyze_args, in, out);
    if (eval_cmd->parsed()) return cmd_eval(eval_args, out);
    return cmd_inspect(inspect_args, out);
  } catch (const ParseError& e) {
    err << "nounforge: " << e.what() << '\n';
    return kInputError;
  } catch (const ValidationError& e) {
    err << "nounforge: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "nounforge: " << e.what() << '\n';
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "nounforge: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "nounforge: internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace nounforge::cli
