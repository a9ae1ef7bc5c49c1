#include "finorient/pipeline.hpp"

#include <stdexcept>

#include "finorient/errors.hpp"

namespace finorient {

WordcountModel::WordcountModel(const Lexicon& lex, std::string name)
    : lex_(&lex), name_(std::move(name)) {}

Orientation WordcountModel::predict(const Sentence& s) const {
  return wordcount_vote(*lex_, s);
}

SequenceModelConfig lps_config() {
  SequenceModelConfig config;
  config.name = "LPS";
  return config;
}

SequenceModelConfig restricted_lps_config() {
  SequenceModelConfig config;
  config.extract.pruning = PruningMode::None;
  config.name = "R-LPS";
  return config;
}

SequenceModelConfig polarity_sequence_config() {
  SequenceModelConfig config;
  config.extract.classes = general_classes();
  config.extract.pruning = PruningMode::MergeOnly;
  config.name = "PSEQ";
  return config;
}

SequenceModel::SequenceModel(const Lexicon& lex, SequenceModelConfig config)
    : lex_(&lex), config_(std::move(config)) {}

EntitySequence SequenceModel::extract_sentence(const Sentence& s) const {
  return extract(*lex_, s, config_.extract);
}

void SequenceModel::fit(std::span<const Sentence> sentences,
                        std::span<const Orientation> labels) {
  std::vector<EntitySequence> sequences;
  sequences.reserve(sentences.size());
  for (const Sentence& s : sentences) sequences.push_back(extract_sentence(s));
  const TypeCoding coding = TypeCoding::from_sequences(sequences);
  std::vector<ProjectedSequence> projected;
  projected.reserve(sequences.size());
  for (const EntitySequence& seq : sequences) {
    projected.push_back(encode(coding, seq));
  }
  model_ = train(coding, projected, labels, config_.train);
  unknown_types_ = 0;
}

Orientation SequenceModel::predict(const Sentence& s) const {
  if (!model_) throw std::logic_error("SequenceModel::predict before fit");
  const ProjectedSequence x =
      encode_lenient(model_->coding, extract_sentence(s), &unknown_types_);
  return model_->predict(x);
}

const OrientationModel& SequenceModel::model() const {
  if (!model_) throw std::logic_error("SequenceModel::model before fit");
  return *model_;
}

void SequenceModel::adopt_model(OrientationModel model) {
  model_ = std::move(model);
  unknown_types_ = 0;
}

std::unique_ptr<SentenceModel> make_model(BaselineKind kind, const Lexicon& lexicon,
                                          const Lexicon& wordlist,
                                          std::size_t window, double C) {
  switch (kind) {
    case BaselineKind::WordcountGeneral:
      return std::make_unique<WordcountModel>(wordlist, "W-GEN");
    case BaselineKind::WordcountFinancial:
      return std::make_unique<WordcountModel>(wordlist, "W-FIN");
    case BaselineKind::PolaritySequenceGeneral: {
      SequenceModelConfig config = polarity_sequence_config();
      config.extract.window = window;
      config.train.C = C;
      return std::make_unique<SequenceModel>(wordlist, config);
    }
    case BaselineKind::RestrictedLps: {
      SequenceModelConfig config = restricted_lps_config();
      config.extract.window = window;
      config.train.C = C;
      return std::make_unique<SequenceModel>(lexicon, config);
    }
    case BaselineKind::Lps: {
      SequenceModelConfig config = lps_config();
      config.extract.window = window;
      config.train.C = C;
      return std::make_unique<SequenceModel>(lexicon, config);
    }
  }
  throw std::logic_error("unknown baseline kind");
}

}  // namespace finorient
