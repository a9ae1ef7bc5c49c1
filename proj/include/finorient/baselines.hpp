#ifndef FINORIENT_BASELINES_HPP
#define FINORIENT_BASELINES_HPP

#include <optional>
#include <string_view>

#include "finorient/extractor.hpp"
#include "finorient/orientation.hpp"

namespace finorient {

enum class BaselineKind {
  WordcountGeneral,
  WordcountFinancial,
  PolaritySequenceGeneral,
  RestrictedLps,
  Lps,
};

std::string_view to_string(BaselineKind k);
std::optional<BaselineKind> parse_baseline(std::string_view s);

struct WordcountHits {
  std::size_t positive = 0;
  std::size_t negative = 0;
};

// Occurrence counts of general-polarity unigram anchors over the
// lowercased tokens. POS patterns and every other entity class are
// ignored; the sentence does not need tags.
WordcountHits wordcount_hits(const Lexicon& lex, const Sentence& s);

// No polarized words: neutral. Two thirds or more negative: negative.
// Two thirds or more positive: positive. Anything else: neutral.
// Thresholds are compared in exact integer arithmetic.
Orientation wordcount_vote(const Lexicon& lex, const Sentence& s);
Orientation wordcount_rule(std::size_t positive_hits, std::size_t negative_hits);

// Sequence baseline: only general-polarity classes are matched and
// pruning is limited to neutral merging.
EntitySequence polarity_sequence_extract(const Lexicon& lex, const Sentence& s);

// Full lexicon, no pruning at all beyond the neutral gap fill.
EntitySequence restricted_lps_extract(const Lexicon& lex, const Sentence& s);

}  // namespace finorient

#endif
