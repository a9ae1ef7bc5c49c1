#include "finorient/baselines.hpp"

namespace finorient {

std::string_view to_string(BaselineKind k) {
  switch (k) {
    case BaselineKind::WordcountGeneral: return "w-general";
    case BaselineKind::WordcountFinancial: return "w-financial";
    case BaselineKind::PolaritySequenceGeneral: return "pseq";
    case BaselineKind::RestrictedLps: return "rlps";
    case BaselineKind::Lps: return "lps";
  }
  return "?";
}

std::optional<BaselineKind> parse_baseline(std::string_view s) {
  if (s == "w-general") return BaselineKind::WordcountGeneral;
  if (s == "w-financial") return BaselineKind::WordcountFinancial;
  if (s == "pseq") return BaselineKind::PolaritySequenceGeneral;
  if (s == "rlps") return BaselineKind::RestrictedLps;
  if (s == "lps") return BaselineKind::Lps;
  return std::nullopt;
}

WordcountHits wordcount_hits(const Lexicon& lex, const Sentence& s) {
  WordcountHits hits;
  for (const Token& t : s.tokens) {
    for (const LexiconEntry* e : lex.candidate_entries(t.lower)) {
      if (e->anchor.size() != 1) continue;
      if (e->entity_class == EntityClass::GeneralPositive) ++hits.positive;
      if (e->entity_class == EntityClass::GeneralNegative) ++hits.negative;
    }
  }
  return hits;
}

Orientation wordcount_rule(std::size_t positive_hits, std::size_t negative_hits) {
  const std::size_t total = positive_hits + negative_hits;
  if (total == 0) return Orientation::Neutral;
  // g/(p+g) >= 2/3 and p/(p+g) >= 2/3, compared without division.
  if (3 * negative_hits >= 2 * total) return Orientation::Negative;
  if (3 * positive_hits >= 2 * total) return Orientation::Positive;
  return Orientation::Neutral;
}

Orientation wordcount_vote(const Lexicon& lex, const Sentence& s) {
  const WordcountHits hits = wordcount_hits(lex, s);
  return wordcount_rule(hits.positive, hits.negative);
}

EntitySequence polarity_sequence_extract(const Lexicon& lex, const Sentence& s) {
  ExtractOptions options;
  options.classes = general_classes();
  options.pruning = PruningMode::MergeOnly;
  return extract(lex, s, options);
}

EntitySequence restricted_lps_extract(const Lexicon& lex, const Sentence& s) {
  ExtractOptions options;
  options.pruning = PruningMode::None;
  return extract(lex, s, options);
}

}  // namespace finorient
