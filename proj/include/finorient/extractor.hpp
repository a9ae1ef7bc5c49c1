#ifndef FINORIENT_EXTRACTOR_HPP
#define FINORIENT_EXTRACTOR_HPP

#include <bitset>
#include <optional>
#include <string>
#include <vector>

#include "finorient/ingest.hpp"
#include "finorient/lexicon.hpp"

namespace finorient {

enum class PolarityBase { Positive, Negative, Neutral };

// A postfix marks that a pruning rule touched the entity; it is part of
// the entity's type downstream, so "positive" and "positive/up" stay
// distinguishable.
enum class Postfix { None, Up, Down, Reversed, Uncertain, Modal, Litigious };

struct PolarityTag {
  PolarityBase base = PolarityBase::Neutral;
  Postfix postfix = Postfix::None;

  bool operator==(const PolarityTag&) const = default;
};

std::string_view to_string(PolarityBase b);
std::string_view to_string(Postfix p);
std::optional<PolarityBase> parse_polarity_base(std::string_view s);
std::optional<Postfix> parse_postfix(std::string_view s);

// Prior polarity of a freshly matched entity of the given class.
PolarityTag prior_polarity(EntityClass c);

struct Entity {
  std::size_t begin = 0;  // token index range [begin, end)
  std::size_t end = 0;
  std::optional<EntityClass> klass;  // nullopt => synthetic neutral fill
  PolarityTag polarity;
  const LexiconEntry* source = nullptr;

  bool is_fill() const { return !klass.has_value(); }
  std::size_t length() const { return end - begin; }
};

Entity make_fill(std::size_t begin, std::size_t end);

struct EntitySequence {
  std::string sentence_id;
  std::vector<Entity> entities;  // span order, spans partition the sentence
};

using ClassFilter = std::bitset<kEntityClassCount>;

ClassFilter all_classes();
ClassFilter general_classes();

// Lexicon matching over the tagged sentence. A candidate matches when its
// anchor equals the lowercased tokens contiguously and, if present, its
// pos pattern matches position-wise. Overlaps are resolved longest span
// first, then leftmost, then class precedence; the returned candidates
// are non-overlapping and sorted by position.
std::vector<Entity> detect(const Lexicon& lex, const Sentence& s,
                           const ClassFilter& filter = all_classes());

// Covers the gaps between candidates with neutral fill entities so that
// the spans partition [0, token count).
EntitySequence fill_neutral(const Sentence& s, std::vector<Entity> candidates);

// Collapses every run of two or more adjacent neutral entities (fills and
// general-neutral entities with base neutral and no postfix) into a
// single fill entity. Financial entities and operators stay even though
// their prior polarity is neutral.
EntitySequence merge_neutrals(EntitySequence seq);

// Applies direction and influencer entities to their nearest eligible
// target within `window` non-fill entities, one left-to-right pass.
// Directions search backward first, then forward; reversal, modal,
// litigious and uncertain operators search forward first. A consumed
// operator's span (and any fill between) is absorbed into the target;
// when another typed entity sits in between (window > 1) the operator's
// span turns into padding instead. Operators with no eligible target
// stay in place.
EntitySequence apply_influencers(EntitySequence seq, std::size_t window = 1);

enum class PruningMode {
  Full,       // merge neutrals, apply influencers, merge again
  MergeOnly,  // merge neutrals only
  None,       // detection + neutral fill only
};

struct ExtractOptions {
  std::size_t window = 1;
  PruningMode pruning = PruningMode::Full;
  ClassFilter classes = all_classes();
};

EntitySequence extract(const Lexicon& lex, const Sentence& s,
                       const ExtractOptions& options = {});

}  // namespace finorient

#endif
