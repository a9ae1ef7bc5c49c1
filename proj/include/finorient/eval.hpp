#ifndef FINORIENT_EVAL_HPP
#define FINORIENT_EVAL_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "finorient/ingest.hpp"
#include "finorient/orientation.hpp"

namespace finorient {

// sentences x annotators label grid; missing cells allowed.
struct AnnotationMatrix {
  std::vector<std::string> annotators;
  std::vector<std::string> sentence_ids;
  std::vector<std::vector<std::optional<Orientation>>> labels;  // [row][col]

  std::size_t rows() const { return sentence_ids.size(); }
  std::size_t raters() const { return annotators.size(); }
  bool complete() const;  // no missing cells
};

// TSV: header "sentence_id" + annotator ids; one row per sentence with
// "-" for a missing label.
AnnotationMatrix load_annotation_matrix(std::istream& in,
                                        const std::string& source_name = "<stream>");
void write_annotation_matrix(const AnnotationMatrix& m, std::ostream& out);

struct PairwiseAgreement {
  double overall = 0.0;
  std::size_t compared_pairs = 0;
  // Unordered category pairs in the order (pos,neg), (neg,neu), (pos,neu);
  // absent when no label pair fell inside the category pair.
  std::array<std::optional<double>, 3> category{};
  std::array<std::size_t, 3> category_pairs{};
};

// Fraction of agreeing labels over all complete (sentence, annotator
// pair) combinations. Throws DataError when there is nothing to compare.
PairwiseAgreement pairwise_agreement(const AnnotationMatrix& m);

enum class IccVariant { Consistency, Agreement };

// Two-way ANOVA over a complete matrix, labels scored -1/0/+1. Returns
// nullopt when the variance decomposition degenerates (zero denominator,
// e.g. a constant matrix). Throws DataError on missing cells.
std::optional<double> icc(const AnnotationMatrix& m, IccVariant variant);

// 1 - MS_error / expected variance of a uniform label distribution
// (two-way residual mean square; expected variance (c^2-1)/12 for c
// equally spaced score levels).
std::optional<double> finn_coefficient(const AnnotationMatrix& m);

// 1 - SS within rows / SS total.
std::optional<double> robinson_a(const AnnotationMatrix& m);

struct GoldRow {
  std::string sentence_id;
  Orientation label = Orientation::Neutral;
  double agreement = 0.0;  // plurality count / labels present
};

struct GoldStandard {
  double threshold = 0.5;  // 1.0, 0.75, 0.66 or 0.5
  std::vector<GoldRow> rows;
  std::size_t excluded_rows = 0;     // below threshold or tied plurality
  std::size_t low_support_rows = 0;  // rows with fewer than 5 labels kept
  std::size_t skipped_rows = 0;      // rows with fewer than 2 labels

  std::array<std::size_t, kOrientationCount> label_counts() const;
};

// Majority label by plurality; ties exclude the row. Inclusion needs
// agreement == 1.0 for the 100% set and agreement strictly above the
// threshold otherwise.
GoldStandard build_gold(const AnnotationMatrix& m, double threshold);

struct LabeledSentence {
  std::string id;
  std::string text;
  Orientation label = Orientation::Neutral;
};

// "sentence text@label" records, the last '@' separating the label.
// Lines that are not valid UTF-8 are transcoded from Latin-1.
std::vector<LabeledSentence> load_corpus(std::istream& in,
                                         const std::string& source_name = "<stream>");

struct ConfusionMatrix {
  // counts[gold][predicted], label order positive, neutral, negative.
  std::array<std::array<std::size_t, kOrientationCount>, kOrientationCount> counts{};

  void add(Orientation gold, Orientation predicted);
  std::size_t total() const;
  double overall_accuracy() const;
};

struct ClassMetrics {
  double accuracy = 0.0;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

// One-vs-rest metrics for one class of the pooled matrix. Empty ratio
// denominators yield 0.
ClassMetrics class_metrics(const ConfusionMatrix& m, Orientation cls);

// Anything that maps sentences to orientations; rule baselines ignore fit.
class SentenceModel {
public:
  virtual ~SentenceModel() = default;
  virtual std::string name() const = 0;
  virtual void fit(std::span<const Sentence> sentences,
                   std::span<const Orientation> labels) = 0;
  virtual Orientation predict(const Sentence& s) const = 0;
};

// Deterministic stratified fold assignment (per-class proportional,
// seeded shuffle). Throws DataError when a class has fewer examples than
// folds.
std::vector<std::size_t> stratified_folds(std::span<const Orientation> labels,
                                          std::size_t folds, std::uint64_t seed);

// Pooled confusion matrix over all held-out folds.
ConfusionMatrix cross_validate(SentenceModel& model,
                               std::span<const Sentence> sentences,
                               std::span<const Orientation> labels,
                               std::size_t folds, std::uint64_t seed);

// Side-by-side table: per-class blocks x models, three decimals, plus an
// overall accuracy row.
std::string render_comparison(const std::string& title,
                              std::span<const std::string> model_names,
                              std::span<const ConfusionMatrix> per_model);

}  // namespace finorient

#endif
