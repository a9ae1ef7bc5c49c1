#include "finorient/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "finorient/baselines.hpp"
#include "finorient/classifier.hpp"
#include "finorient/errors.hpp"
#include "finorient/eval.hpp"
#include "finorient/extractor.hpp"
#include "finorient/ingest.hpp"
#include "finorient/lexicon.hpp"
#include "finorient/pipeline.hpp"
#include "finorient/projection.hpp"

namespace finorient::cli {

namespace {

std::string fmt1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

Lexicon load_lexicons(const std::vector<std::string>& paths) {
  if (paths.empty()) throw DataError("no lexicon file given");
  std::vector<Lexicon> parts;
  for (const std::string& path : paths) {
    auto in = open_input(path);
    parts.push_back(parse_lexicon(in, path));
  }
  return merge_lexicons_override(parts);
}

HeuristicTagger make_tagger(const Lexicon& lex) {
  HeuristicTagger tagger;
  tagger.add_hints(unigram_pos_hints(lex));
  return tagger;
}

// Raw sentence file: "id<TAB>text" per line.
std::vector<Sentence> load_raw(const std::string& path, const Tagger& tagger) {
  auto in = open_input(path);
  std::vector<Sentence> sentences;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw parse_error(path, line_no, "expected 'id<TAB>text'");
    }
    sentences.push_back(
        make_sentence(line.substr(0, tab), line.substr(tab + 1), tagger));
  }
  return sentences;
}

std::vector<Sentence> load_sentences(const std::string& raw_path,
                                     const std::string& pretagged_path,
                                     const Lexicon& lex) {
  if (!raw_path.empty()) {
    const HeuristicTagger tagger = make_tagger(lex);
    return load_raw(raw_path, tagger);
  }
  auto in = open_input(pretagged_path);
  return load_tagged(in, pretagged_path);
}

void write_entity_line(std::ostream& out, const EntitySequence& seq) {
  out << seq.sentence_id;
  for (const Entity& e : seq.entities) {
    out << '\t' << e.begin << ':' << e.end << ':' << to_string(type_of(e));
  }
  out << "\n";
}

struct EntityFileRow {
  std::string id;
  EntitySequence sequence;
};

std::vector<EntityFileRow> load_entity_file(const std::string& path) {
  auto in = open_input(path);
  std::vector<EntityFileRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    EntityFileRow row;
    row.id = fields[0];
    row.sequence.sentence_id = fields[0];
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const std::string& f = fields[i];
      const std::size_t c1 = f.find(':');
      const std::size_t c2 = c1 == std::string::npos ? c1 : f.find(':', c1 + 1);
      if (c2 == std::string::npos) {
        throw parse_error(path, line_no, "expected 'begin:end:TYPE' fields");
      }
      Entity e;
      try {
        e.begin = std::stoul(f.substr(0, c1));
        e.end = std::stoul(f.substr(c1 + 1, c2 - c1 - 1));
      } catch (const std::exception&) {
        throw parse_error(path, line_no, "bad span in '" + f + "'");
      }
      const auto type = parse_entity_type(f.substr(c2 + 1));
      if (!type) {
        throw parse_error(path, line_no, "unknown entity type in '" + f + "'");
      }
      e.klass = type->klass;
      e.polarity = type->polarity;
      row.sequence.entities.push_back(e);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void echo_config(std::ostream& out, const std::vector<std::string>& args) {
  out << "# finorient";
  for (const std::string& a : args) out << ' ' << a;
  out << "\n";
}

struct ClassRow {
  EntityClass klass;
  const char* group;
  const char* category;
};

constexpr ClassRow kClassRows[] = {
    {EntityClass::GeneralPositive, "General", "Positive"},
    {EntityClass::GeneralNegative, "General", "Negative"},
    {EntityClass::GeneralNeutral, "General", "Neutral"},
    {EntityClass::FinPositiveIfUp, "Financial", "Positive-if-up"},
    {EntityClass::FinNegativeIfUp, "Financial", "Negative-if-up"},
    {EntityClass::DirectionDown, "Direction", "Down"},
    {EntityClass::DirectionUp, "Direction", "Up"},
    {EntityClass::InfluencerReversal, "Influencer", "Reversal"},
    {EntityClass::InfluencerModal, "Influencer", "Modal"},
    {EntityClass::InfluencerLitigious, "Influencer", "Litigious"},
    {EntityClass::InfluencerUncertain, "Influencer", "Uncertain"},
};

void print_lexicon_stats(std::ostream& out, const LexiconStats& stats) {
  auto pad = [](std::string s, std::size_t width) {
    if (s.size() < width) s.resize(width, ' ');
    return s;
  };
  auto num = [](std::string s, std::size_t width) {
    return s.size() < width ? std::string(width - s.size(), ' ') + s : s;
  };
  out << pad("Entity class", 14) << pad("Category", 16) << num("Count", 8)
      << num("% of all", 11) << "\n";
  for (const ClassRow& row : kClassRows) {
    const std::size_t count = stats.counts[static_cast<std::size_t>(row.klass)];
    out << pad(row.group, 14) << pad(row.category, 16)
        << num(std::to_string(count), 8)
        << num(fmt1(stats.percent(row.klass)), 11) << "\n";
  }
  out << pad("Total", 30) << num(std::to_string(stats.total), 8)
      << num(stats.total > 0 ? "100.0" : "0.0", 11) << "\n";
}

int cmd_lexicon_validate(const std::vector<std::string>& files, std::ostream& out) {
  std::vector<Lexicon> parts;
  for (const std::string& path : files) {
    auto in = open_input(path);
    parts.push_back(parse_lexicon(in, path));
  }
  const Lexicon merged = merge_lexicons_override(parts);
  print_lexicon_stats(out, lexicon_stats(merged));
  return 0;
}

PruningMode pruning_for(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::RestrictedLps: return PruningMode::None;
    case BaselineKind::PolaritySequenceGeneral: return PruningMode::MergeOnly;
    default: return PruningMode::Full;
  }
}

SequenceModelConfig sequence_config_for(BaselineKind kind, std::size_t window,
                                        double C) {
  SequenceModelConfig config;
  switch (kind) {
    case BaselineKind::RestrictedLps: config = restricted_lps_config(); break;
    case BaselineKind::PolaritySequenceGeneral:
      config = polarity_sequence_config();
      break;
    default: config = lps_config(); break;
  }
  config.extract.window = window;
  config.train.C = C;
  return config;
}

double threshold_value(int percent) {
  switch (percent) {
    case 100: return 1.0;
    case 75: return 0.75;
    case 66: return 0.66;
    case 50: return 0.5;
    default:
      throw DataError("threshold must be one of 100, 75, 66, 50");
  }
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semantic orientation of financial and economic text"};
  app.name("finorient");
  app.require_subcommand(1);

  const std::vector<std::string> echo_args = args;

  // lexicon validate
  auto* lexicon_cmd = app.add_subcommand("lexicon", "Lexicon utilities");
  lexicon_cmd->require_subcommand(1);
  auto* validate_cmd =
      lexicon_cmd->add_subcommand("validate", "Parse lexicon files, print stats");
  std::vector<std::string> validate_files;
  validate_cmd->add_option("files", validate_files, "Lexicon TSV files (later override earlier)")
      ->required();

  // extract
  auto* extract_cmd = app.add_subcommand("extract", "Emit entity sequences as TSV");
  std::vector<std::string> ex_lexicons;
  std::string ex_raw, ex_pretagged, ex_output;
  std::size_t ex_window = 1;
  bool ex_no_prune = false;
  extract_cmd->add_option("--lexicon", ex_lexicons, "Lexicon files")->required();
  auto* ex_raw_opt = extract_cmd->add_option("--raw", ex_raw, "Raw 'id<TAB>text' file");
  extract_cmd->add_option("--pretagged", ex_pretagged, "Pre-tagged token file")
      ->excludes(ex_raw_opt);
  extract_cmd->add_option("--window", ex_window, "Influencer window (entities)");
  extract_cmd->add_flag("--no-prune", ex_no_prune, "Skip all pruning rules");
  extract_cmd->add_option("-o,--output", ex_output, "Output path (default stdout)");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train a classifier");
  std::vector<std::string> tr_lexicons;
  std::string tr_corpus, tr_model, tr_baseline = "lps";
  std::size_t tr_window = 1;
  double tr_C = 1.0;
  train_cmd->add_option("--lexicon", tr_lexicons, "Lexicon files")->required();
  train_cmd->add_option("--corpus", tr_corpus, "Labeled corpus ('text@label')")
      ->required();
  train_cmd->add_option("--model", tr_model, "Model output path")->required();
  train_cmd->add_option("--baseline", tr_baseline, "lps, rlps or pseq");
  train_cmd->add_option("--window", tr_window, "Influencer window (entities)");
  train_cmd->add_option("-C", tr_C, "Soft-margin penalty");

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "Label sentences");
  std::vector<std::string> pr_lexicons;
  std::string pr_model, pr_baseline, pr_raw, pr_pretagged, pr_entities, pr_output;
  predict_cmd->add_option("--lexicon", pr_lexicons, "Lexicon files");
  predict_cmd->add_option("--model", pr_model, "Trained model path");
  predict_cmd->add_option("--baseline", pr_baseline,
                          "w-general or w-financial (rule baselines)");
  auto* pr_raw_opt = predict_cmd->add_option("--raw", pr_raw, "Raw 'id<TAB>text' file");
  auto* pr_pre_opt = predict_cmd->add_option("--pretagged", pr_pretagged,
                                             "Pre-tagged token file");
  predict_cmd
      ->add_option("--from-entities", pr_entities,
                   "Entity sequence TSV (output of extract)")
      ->excludes(pr_raw_opt)
      ->excludes(pr_pre_opt);
  pr_pre_opt->excludes(pr_raw_opt);
  predict_cmd->add_option("-o,--output", pr_output, "Output path (default stdout)");

  // gold
  auto* gold_cmd = app.add_subcommand("gold", "Build a gold standard from annotations");
  std::string go_matrix, go_sentences, go_output;
  int go_threshold = 50;
  gold_cmd->add_option("--matrix", go_matrix, "Annotation matrix TSV")->required();
  gold_cmd->add_option("--threshold", go_threshold, "100, 75, 66 or 50")->required();
  gold_cmd->add_option("--sentences", go_sentences,
                       "Optional 'id<TAB>text' file; emits 'text@label' records");
  gold_cmd->add_option("-o,--output", go_output, "Output path (default stdout)");

  // agreement
  auto* agree_cmd = app.add_subcommand("agreement", "Annotator agreement statistics");
  std::string ag_matrix;
  agree_cmd->add_option("--matrix", ag_matrix, "Annotation matrix TSV")->required();

  // eval
  auto* eval_cmd =
      app.add_subcommand("eval", "Gold sets + cross-validated model comparison");
  std::vector<std::string> ev_lexicons;
  std::string ev_matrix, ev_sentences, ev_general, ev_financial;
  std::vector<std::string> ev_models = {"w-general", "w-financial", "pseq",
                                        "rlps", "lps"};
  std::size_t ev_folds = 10, ev_window = 1;
  std::uint64_t ev_seed = 42;
  double ev_C = 1.0;
  eval_cmd->add_option("--matrix", ev_matrix, "Annotation matrix TSV")->required();
  eval_cmd->add_option("--sentences", ev_sentences, "Raw 'id<TAB>text' file")
      ->required();
  eval_cmd->add_option("--lexicon", ev_lexicons, "Full lexicon files")->required();
  eval_cmd->add_option("--general-lexicon", ev_general, "General polarity lexicon")
      ->required();
  eval_cmd
      ->add_option("--financial-wordlist", ev_financial, "Financial word list")
      ->required();
  eval_cmd->add_option("--models", ev_models,
                       "Subset of w-general w-financial pseq rlps lps");
  eval_cmd->add_option("--folds", ev_folds, "Cross-validation folds");
  eval_cmd->add_option("--seed", ev_seed, "Shuffle seed");
  eval_cmd->add_option("--window", ev_window, "Influencer window (entities)");
  eval_cmd->add_option("-C", ev_C, "Soft-margin penalty");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "finorient: " << e.what() << "\n";
    return 1;
  }

  try {
    if (validate_cmd->parsed()) {
      echo_config(out, echo_args);
      return cmd_lexicon_validate(validate_files, out);
    }

    if (extract_cmd->parsed()) {
      if (ex_raw.empty() && ex_pretagged.empty()) {
        err << "finorient: extract needs --raw or --pretagged\n";
        return 1;
      }
      const Lexicon lex = load_lexicons(ex_lexicons);
      const auto sentences = load_sentences(ex_raw, ex_pretagged, lex);
      ExtractOptions options;
      options.window = ex_window;
      options.pruning = ex_no_prune ? PruningMode::None : PruningMode::Full;
      std::ofstream file;
      std::ostream* sink = &out;
      if (!ex_output.empty()) {
        file = open_output(ex_output);
        sink = &file;
      }
      echo_config(*sink, echo_args);
      for (const Sentence& s : sentences) {
        write_entity_line(*sink, extract(lex, s, options));
      }
      return 0;
    }

    if (train_cmd->parsed()) {
      const auto kind = parse_baseline(tr_baseline);
      if (!kind || *kind == BaselineKind::WordcountGeneral ||
          *kind == BaselineKind::WordcountFinancial) {
        err << "finorient: train supports --baseline lps, rlps or pseq\n";
        return 1;
      }
      const Lexicon lex = load_lexicons(tr_lexicons);
      auto corpus_in = open_input(tr_corpus);
      const auto corpus = load_corpus(corpus_in, tr_corpus);
      if (corpus.empty()) throw DataError(tr_corpus + ": empty corpus");
      const HeuristicTagger tagger = make_tagger(lex);
      std::vector<Sentence> sentences;
      std::vector<Orientation> labels;
      for (const LabeledSentence& ls : corpus) {
        sentences.push_back(make_sentence(ls.id, ls.text, tagger));
        labels.push_back(ls.label);
      }
      SequenceModel model(lex, sequence_config_for(*kind, tr_window, tr_C));
      model.fit(sentences, labels);
      OrientationModel trained = model.model();
      trained.meta["mode"] = std::string(to_string(*kind));
      trained.meta["window"] = std::to_string(tr_window);
      auto model_out = open_output(tr_model);
      save_model(trained, model_out);
      echo_config(out, echo_args);
      out << "# trained on " << sentences.size() << " sentences, coding size "
          << trained.coding.size() << ", C " << tr_C << "\n";
      return 0;
    }

    if (predict_cmd->parsed()) {
      std::ofstream file;
      std::ostream* sink = &out;
      if (!pr_output.empty()) {
        file = open_output(pr_output);
        sink = &file;
      }
      echo_config(*sink, echo_args);

      if (!pr_baseline.empty() && pr_model.empty()) {
        const auto kind = parse_baseline(pr_baseline);
        if (!kind || (*kind != BaselineKind::WordcountGeneral &&
                      *kind != BaselineKind::WordcountFinancial)) {
          err << "finorient: without --model, --baseline must be w-general or "
                 "w-financial\n";
          return 1;
        }
        if (!pr_entities.empty()) {
          err << "finorient: wordcount baselines need token input, not "
                 "--from-entities\n";
          return 1;
        }
        if (pr_raw.empty() && pr_pretagged.empty()) {
          err << "finorient: predict needs --raw or --pretagged\n";
          return 1;
        }
        const Lexicon wordlist = load_lexicons(pr_lexicons);
        const auto sentences = load_sentences(pr_raw, pr_pretagged, wordlist);
        for (const Sentence& s : sentences) {
          *sink << s.id << '\t' << to_string(wordcount_vote(wordlist, s)) << "\n";
        }
        return 0;
      }

      if (pr_model.empty()) {
        err << "finorient: predict needs --model or a wordcount --baseline\n";
        return 1;
      }
      auto model_in = open_input(pr_model);
      const OrientationModel model = load_model(model_in);

      if (!pr_entities.empty()) {
        std::size_t unknown = 0;
        for (const EntityFileRow& row : load_entity_file(pr_entities)) {
          const ProjectedSequence x =
              encode_lenient(model.coding, row.sequence, &unknown);
          *sink << row.id << '\t' << to_string(model.predict(x)) << "\n";
        }
        if (unknown > 0) {
          err << "# warning: " << unknown
              << " entity types outside the model coding fell back to neutral "
                 "fill\n";
        }
        return 0;
      }

      if (pr_raw.empty() && pr_pretagged.empty()) {
        err << "finorient: predict needs --raw, --pretagged or --from-entities\n";
        return 1;
      }
      auto mode = BaselineKind::Lps;
      if (auto it = model.meta.find("mode"); it != model.meta.end()) {
        if (const auto parsed = parse_baseline(it->second)) mode = *parsed;
      }
      std::size_t window = 1;
      if (auto it = model.meta.find("window"); it != model.meta.end()) {
        window = std::stoul(it->second);
      }
      const Lexicon lex = load_lexicons(pr_lexicons);
      const auto sentences = load_sentences(pr_raw, pr_pretagged, lex);
      ExtractOptions options;
      options.window = window;
      options.pruning = pruning_for(mode);
      if (mode == BaselineKind::PolaritySequenceGeneral) {
        options.classes = general_classes();
      }
      std::size_t unknown = 0;
      for (const Sentence& s : sentences) {
        const ProjectedSequence x =
            encode_lenient(model.coding, extract(lex, s, options), &unknown);
        *sink << s.id << '\t' << to_string(model.predict(x)) << "\n";
      }
      if (unknown > 0) {
        err << "# warning: " << unknown
            << " entity types outside the model coding fell back to neutral "
               "fill\n";
      }
      return 0;
    }

    if (gold_cmd->parsed()) {
      auto matrix_in = open_input(go_matrix);
      const AnnotationMatrix matrix = load_annotation_matrix(matrix_in, go_matrix);
      const GoldStandard gold = build_gold(matrix, threshold_value(go_threshold));

      std::ofstream file;
      std::ostream* sink = &out;
      if (!go_output.empty()) {
        file = open_output(go_output);
        sink = &file;
      }
      echo_config(*sink, echo_args);
      const auto counts = gold.label_counts();
      const double n = static_cast<double>(gold.rows.size());
      *sink << "# threshold " << go_threshold << " rows " << gold.rows.size()
            << " excluded " << gold.excluded_rows << " skipped "
            << gold.skipped_rows << "\n";
      *sink << "# dist negative "
            << fmt1(n > 0 ? 100.0 * static_cast<double>(
                                        counts[static_cast<std::size_t>(
                                            Orientation::Negative)]) /
                                n
                          : 0.0)
            << " neutral "
            << fmt1(n > 0 ? 100.0 * static_cast<double>(
                                        counts[static_cast<std::size_t>(
                                            Orientation::Neutral)]) /
                                n
                          : 0.0)
            << " positive "
            << fmt1(n > 0 ? 100.0 * static_cast<double>(
                                        counts[static_cast<std::size_t>(
                                            Orientation::Positive)]) /
                                n
                          : 0.0)
            << "\n";
      if (gold.rows.empty()) {
        err << "# warning: empty gold standard at threshold " << go_threshold
            << "\n";
      }
      if (gold.low_support_rows > 0) {
        err << "# warning: " << gold.low_support_rows
            << " rows have fewer than 5 labels\n";
      }
      if (!go_sentences.empty()) {
        std::map<std::string, std::string> text_by_id;
        auto sentences_in = open_input(go_sentences);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(sentences_in, line)) {
          ++line_no;
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (line.empty() || line.front() == '#') continue;
          const std::size_t tab = line.find('\t');
          if (tab == std::string::npos) {
            throw parse_error(go_sentences, line_no, "expected 'id<TAB>text'");
          }
          text_by_id[line.substr(0, tab)] = line.substr(tab + 1);
        }
        for (const GoldRow& row : gold.rows) {
          auto it = text_by_id.find(row.sentence_id);
          if (it == text_by_id.end()) {
            throw DataError(go_sentences + ": no text for sentence id '" +
                            row.sentence_id + "'");
          }
          *sink << it->second << "@" << to_string(row.label) << "\n";
        }
      } else {
        for (const GoldRow& row : gold.rows) {
          *sink << row.sentence_id << '\t' << to_string(row.label) << '\t'
                << fmt3(row.agreement) << "\n";
        }
      }
      return 0;
    }

    if (agree_cmd->parsed()) {
      auto matrix_in = open_input(ag_matrix);
      const AnnotationMatrix matrix = load_annotation_matrix(matrix_in, ag_matrix);
      echo_config(out, echo_args);
      out << "# scoring negative=-1 neutral=0 positive=+1\n";
      const PairwiseAgreement pa = pairwise_agreement(matrix);
      auto line = [&](const char* label, const std::string& value) {
        std::string padded(label);
        padded.resize(24, ' ');
        out << padded << value << "\n";
      };
      line("Number of sentences", std::to_string(matrix.rows()));
      line("Number of annotators", std::to_string(matrix.raters()));
      line("Overall agreement", fmt3(pa.overall));
      const char* pair_names[3] = {"Positive vs. Negative", "Negative vs. Neutral",
                                   "Positive vs. Neutral"};
      for (std::size_t p = 0; p < 3; ++p) {
        line(pair_names[p], pa.category[p] ? fmt3(*pa.category[p]) : "n/a");
      }

      // Multirater statistics need the fully crossed part of the matrix.
      AnnotationMatrix complete;
      complete.annotators = matrix.annotators;
      for (std::size_t r = 0; r < matrix.rows(); ++r) {
        const bool full =
            std::all_of(matrix.labels[r].begin(), matrix.labels[r].end(),
                        [](const auto& cell) { return cell.has_value(); });
        if (full) {
          complete.sentence_ids.push_back(matrix.sentence_ids[r]);
          complete.labels.push_back(matrix.labels[r]);
        }
      }
      line("Complete rows", std::to_string(complete.rows()));
      auto stat = [&](const char* label, std::optional<double> v) {
        line(label, v ? fmt3(*v) : "degenerate");
      };
      if (complete.rows() >= 2 && complete.raters() >= 2) {
        stat("ICC consistency", icc(complete, IccVariant::Consistency));
        stat("ICC agreement", icc(complete, IccVariant::Agreement));
        stat("Robinson's A", robinson_a(complete));
        stat("Finn-coefficient", finn_coefficient(complete));
      } else {
        line("ICC consistency", "n/a (needs 2+ complete rows)");
        line("ICC agreement", "n/a (needs 2+ complete rows)");
        line("Robinson's A", "n/a (needs 2+ complete rows)");
        line("Finn-coefficient", "n/a (needs 2+ complete rows)");
      }
      return 0;
    }

    if (eval_cmd->parsed()) {
      const Lexicon lex = load_lexicons(ev_lexicons);
      const Lexicon general = load_lexicons({ev_general});
      const Lexicon financial = load_lexicons({ev_financial});
      auto matrix_in = open_input(ev_matrix);
      const AnnotationMatrix matrix = load_annotation_matrix(matrix_in, ev_matrix);
      const HeuristicTagger tagger = make_tagger(lex);
      const auto sentences = load_raw(ev_sentences, tagger);
      std::map<std::string, std::size_t> row_by_id;
      for (std::size_t i = 0; i < sentences.size(); ++i) {
        row_by_id[sentences[i].id] = i;
      }

      // Canonical column order regardless of how --models was spelled.
      std::vector<BaselineKind> kinds;
      for (const BaselineKind kind :
           {BaselineKind::WordcountGeneral, BaselineKind::WordcountFinancial,
            BaselineKind::PolaritySequenceGeneral, BaselineKind::RestrictedLps,
            BaselineKind::Lps}) {
        if (std::find(ev_models.begin(), ev_models.end(),
                      std::string(to_string(kind))) != ev_models.end()) {
          kinds.push_back(kind);
        }
      }
      for (const std::string& name : ev_models) {
        if (!parse_baseline(name)) {
          err << "finorient: unknown model '" << name << "'\n";
          return 1;
        }
      }
      if (kinds.empty()) {
        err << "finorient: --models selected nothing\n";
        return 1;
      }

      echo_config(out, echo_args);
      out << "# scoring negative=-1 neutral=0 positive=+1\n";

      const int thresholds[4] = {100, 75, 66, 50};
      for (const int percent : thresholds) {
        const GoldStandard gold = build_gold(matrix, threshold_value(percent));
        std::vector<Sentence> gold_sentences;
        std::vector<Orientation> gold_labels;
        for (const GoldRow& row : gold.rows) {
          auto it = row_by_id.find(row.sentence_id);
          if (it == row_by_id.end()) {
            throw DataError(ev_sentences + ": no text for sentence id '" +
                            row.sentence_id + "'");
          }
          gold_sentences.push_back(sentences[it->second]);
          gold_labels.push_back(row.label);
        }

        std::vector<std::unique_ptr<SentenceModel>> models;
        for (const BaselineKind kind : kinds) {
          const Lexicon& wordlist =
              kind == BaselineKind::WordcountFinancial ? financial : general;
          models.push_back(make_model(kind, lex, wordlist, ev_window, ev_C));
        }

        std::vector<std::string> names;
        std::vector<ConfusionMatrix> results;
        for (const auto& model : models) {
          names.push_back(model->name());
          results.push_back(cross_validate(*model, gold_sentences, gold_labels,
                                           ev_folds, ev_seed));
        }

        const auto counts = gold.label_counts();
        std::ostringstream title;
        title << "Sentences with " << (percent == 100 ? "" : ">")
              << percent << "% agreement (n=" << gold.rows.size()
              << ", negative " << counts[2] << ", neutral " << counts[1]
              << ", positive " << counts[0] << ")";
        out << "\n" << render_comparison(title.str(), names, results);
        out << "# overall";
        for (std::size_t i = 0; i < names.size(); ++i) {
          out << ' ' << names[i] << '=' << fmt3(results[i].overall_accuracy());
        }
        out << "\n";
      }
      return 0;
    }

    err << "finorient: no subcommand\n";
    return 1;
  } catch (const DataError& e) {
    err << "finorient: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "finorient: internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace finorient::cli
