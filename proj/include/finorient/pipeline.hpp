#ifndef FINORIENT_PIPELINE_HPP
#define FINORIENT_PIPELINE_HPP

#include <memory>
#include <optional>
#include <string>

#include "finorient/baselines.hpp"
#include "finorient/classifier.hpp"
#include "finorient/eval.hpp"

namespace finorient {

// Wordcount voting rule as a SentenceModel; fit is a no-op.
class WordcountModel : public SentenceModel {
public:
  WordcountModel(const Lexicon& lex, std::string name);
  std::string name() const override { return name_; }
  void fit(std::span<const Sentence>, std::span<const Orientation>) override {}
  Orientation predict(const Sentence& s) const override;

private:
  const Lexicon* lex_;
  std::string name_;
};

struct SequenceModelConfig {
  ExtractOptions extract;
  TrainOptions train;
  std::string name = "LPS";
};

SequenceModelConfig lps_config();
SequenceModelConfig restricted_lps_config();
SequenceModelConfig polarity_sequence_config();

// Extract -> project -> one-against-one classifier. Unseen entity types
// at prediction time fall back to the fill bit and are counted.
class SequenceModel : public SentenceModel {
public:
  SequenceModel(const Lexicon& lex, SequenceModelConfig config);

  std::string name() const override { return config_.name; }
  void fit(std::span<const Sentence> sentences,
           std::span<const Orientation> labels) override;
  Orientation predict(const Sentence& s) const override;

  bool trained() const { return model_.has_value(); }
  const OrientationModel& model() const;
  void adopt_model(OrientationModel model);  // load path
  std::size_t unknown_type_count() const { return unknown_types_; }

  EntitySequence extract_sentence(const Sentence& s) const;

private:
  const Lexicon* lex_;
  SequenceModelConfig config_;
  std::optional<OrientationModel> model_;
  mutable std::size_t unknown_types_ = 0;
};

// Builds the model matching a baseline kind. Wordcount kinds use
// `wordlist`; sequence kinds use `lexicon`.
std::unique_ptr<SentenceModel> make_model(BaselineKind kind, const Lexicon& lexicon,
                                          const Lexicon& wordlist,
                                          std::size_t window, double C);

}  // namespace finorient

#endif
